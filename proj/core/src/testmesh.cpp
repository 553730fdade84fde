#include "msurg/testmesh.hpp"

#include "msurg/error.hpp"

#include <cmath>

namespace msurg {

namespace {

WeightSet two_bone_blend(double t) {
    WeightSet w;
    if (t < 1.0) w.entries.push_back({0, 1.0 - t});
    if (t > 0.0) w.entries.push_back({1, t});
    return prune_and_normalize(std::move(w));
}

}  // namespace

SkinnedMesh make_plate(int n) {
    if (n < 1) throw ScriptError("plate resolution must be >= 1");
    SkinnedMesh mesh;
    mesh.bone_count = 2;
    const int side = n + 1;
    mesh.positions.reserve(static_cast<std::size_t>(side) * side);
    for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i) {
            const double x = static_cast<double>(i) / n;
            const double y = static_cast<double>(j) / n;
            mesh.positions.emplace_back(x, y, 0.0);
            mesh.uvs.emplace_back(x, y);
            mesh.weights.push_back(two_bone_blend(x));
        }
    auto v = [side](int i, int j) { return j * side + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = v(i, j), b = v(i + 1, j), c = v(i + 1, j + 1), d = v(i, j + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    return mesh;
}

SkinnedMesh make_cylinder(int n, int m) {
    if (n < 3 || m < 1) throw ScriptError("cylinder needs n >= 3 segments and m >= 1 bands");
    SkinnedMesh mesh;
    mesh.bone_count = 2;
    const double r = 0.5;
    for (int k = 0; k <= m; ++k) {
        const double z = static_cast<double>(k) / m;
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * M_PI * i / n;
            mesh.positions.emplace_back(r * std::cos(theta), r * std::sin(theta), z);
            mesh.weights.push_back(two_bone_blend(z));
        }
    }
    auto v = [n](int i, int k) { return k * n + (i % n); };
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i) {
            const int a = v(i, k), b = v(i + 1, k), c = v(i + 1, k + 1), d = v(i, k + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    return mesh;
}

Plane cylinder_midplane(int m) {
    const double z = (m / 2 + 0.5) / m;
    return Plane{Vec3(0.0, 0.0, 1.0), z};
}

SkinnedMesh make_sphere(int n) {
    if (n < 1) throw ScriptError("sphere resolution must be >= 1");
    if (n < 3) n = 3;
    SkinnedMesh mesh;
    mesh.bone_count = 2;
    auto blend_z = [](double z) { return two_bone_blend(0.5 * (z + 1.0)); };

    mesh.positions.emplace_back(0.0, 0.0, 1.0);  // north = 0
    mesh.weights.push_back(blend_z(1.0));
    for (int k = 1; k < n; ++k) {
        const double phi = M_PI * k / n;
        const double z = std::cos(phi), ring = std::sin(phi);
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * M_PI * i / n;
            mesh.positions.emplace_back(ring * std::cos(theta), ring * std::sin(theta), z);
            mesh.weights.push_back(blend_z(z));
        }
    }
    mesh.positions.emplace_back(0.0, 0.0, -1.0);
    mesh.weights.push_back(blend_z(-1.0));
    const int south = mesh.vertex_count() - 1;

    auto v = [n](int i, int k) { return 1 + (k - 1) * n + (i % n); };
    for (int i = 0; i < n; ++i) mesh.faces.push_back({0, v(i, 1), v(i + 1, 1)});
    for (int k = 1; k < n - 1; ++k)
        for (int i = 0; i < n; ++i) {
            const int a = v(i, k + 1), b = v(i + 1, k + 1), c = v(i + 1, k), d = v(i, k);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    for (int i = 0; i < n; ++i) mesh.faces.push_back({south, v(i + 1, n - 1), v(i, n - 1)});
    return mesh;
}

}  // namespace msurg
