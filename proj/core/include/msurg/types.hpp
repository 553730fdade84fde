// Shared scalar/vector aliases used across the library.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace msurg {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// Triangle as three vertex indices, counter-clockwise.
using Face = std::array<int, 3>;

// Undirected edge packed as (min << 32) | max, usable as hash-map key.
inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

inline int edge_key_first(std::uint64_t k) { return static_cast<int>(k >> 32); }
inline int edge_key_second(std::uint64_t k) { return static_cast<int>(k & 0xffffffffu); }

inline double bbox_diagonal(const std::vector<Vec3>& points) {
    if (points.empty()) return 0.0;
    Vec3 lo = points.front(), hi = points.front();
    for (const Vec3& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

}  // namespace msurg
