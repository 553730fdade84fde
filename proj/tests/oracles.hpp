// Independent brute-force oracles the unit and acceptance tests check the
// library against. Everything here is deliberately naive and quadratic.
#pragma once

#include "msurg/adjacency.hpp"
#include "msurg/mesh.hpp"
#include "msurg/softbody.hpp"
#include "msurg/types.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

// All-pairs adjacency scan: two triangles are neighbors iff they share two
// vertices; vertex neighbors come straight from face edges.
inline msurg::AdjacencyMaps adjacency(const msurg::SkinnedMesh& mesh) {
    msurg::AdjacencyMaps maps;
    const int nv = mesh.vertex_count();
    const int nf = mesh.face_count();
    maps.vertex_neighbors.assign(static_cast<std::size_t>(nv), {});
    maps.face_neighbors.assign(static_cast<std::size_t>(nf), {});
    maps.face_vertices = mesh.faces;
    std::vector<std::set<int>> vn(static_cast<std::size_t>(nv));
    for (const msurg::Face& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            vn[static_cast<std::size_t>(f[static_cast<std::size_t>(e)])].insert(
                f[static_cast<std::size_t>((e + 1) % 3)]);
            vn[static_cast<std::size_t>(f[static_cast<std::size_t>((e + 1) % 3)])].insert(
                f[static_cast<std::size_t>(e)]);
        }
    for (int v = 0; v < nv; ++v)
        maps.vertex_neighbors[static_cast<std::size_t>(v)].assign(
            vn[static_cast<std::size_t>(v)].begin(), vn[static_cast<std::size_t>(v)].end());
    for (int a = 0; a < nf; ++a)
        for (int b = a + 1; b < nf; ++b) {
            int shared = 0;
            for (int i : mesh.faces[static_cast<std::size_t>(a)])
                for (int j : mesh.faces[static_cast<std::size_t>(b)])
                    if (i == j) ++shared;
            if (shared >= 2) {
                maps.face_neighbors[static_cast<std::size_t>(a)].push_back(b);
                maps.face_neighbors[static_cast<std::size_t>(b)].push_back(a);
            }
        }
    for (int f = 0; f < nf; ++f) {
        const msurg::Face& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int e = 0; e < 3; ++e)
            maps.edge_to_faces[msurg::edge_key(face[static_cast<std::size_t>(e)],
                                               face[static_cast<std::size_t>((e + 1) % 3)])]
                .push_back(f);
    }
    for (auto& [key, list] : maps.edge_to_faces) std::sort(list.begin(), list.end());
    return maps;
}

// Connected components of the face graph by flood fill over shared edges.
inline int face_components(const std::vector<msurg::Face>& faces) {
    const int nf = static_cast<int>(faces.size());
    if (nf == 0) return 0;
    std::map<std::uint64_t, std::vector<int>> edge_faces;
    for (int f = 0; f < nf; ++f)
        for (int e = 0; e < 3; ++e)
            edge_faces[msurg::edge_key(faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(e)],
                                       faces[static_cast<std::size_t>(f)][static_cast<std::size_t>((e + 1) % 3)])]
                .push_back(f);
    std::vector<int> label(static_cast<std::size_t>(nf), -1);
    int components = 0;
    for (int start = 0; start < nf; ++start) {
        if (label[static_cast<std::size_t>(start)] >= 0) continue;
        std::vector<int> stack{start};
        label[static_cast<std::size_t>(start)] = components;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (int e = 0; e < 3; ++e)
                for (int g : edge_faces[msurg::edge_key(
                         faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(e)],
                         faces[static_cast<std::size_t>(f)][static_cast<std::size_t>((e + 1) % 3)])])
                    if (label[static_cast<std::size_t>(g)] < 0) {
                        label[static_cast<std::size_t>(g)] = components;
                        stack.push_back(g);
                    }
        }
        ++components;
    }
    return components;
}

inline double shoelace(const std::vector<msurg::Vec2>& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const msurg::Vec2& a = poly[i];
        const msurg::Vec2& b = poly[(i + 1) % poly.size()];
        twice += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * std::abs(twice);
}

inline double kinetic_energy(const msurg::Clustering& c) {
    double e = 0.0;
    for (const msurg::Particle& p : c.particles) e += 0.5 * p.velocity.squaredNorm();
    return e;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline bool meshes_bitwise_equal(const msurg::SkinnedMesh& a, const msurg::SkinnedMesh& b) {
    if (a.positions.size() != b.positions.size() || a.faces.size() != b.faces.size() ||
        a.uvs.size() != b.uvs.size() || a.weights.size() != b.weights.size() ||
        a.bone_count != b.bone_count)
        return false;
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        if (a.positions[i] != b.positions[i]) return false;
    for (std::size_t i = 0; i < a.uvs.size(); ++i)
        if (a.uvs[i] != b.uvs[i]) return false;
    for (std::size_t i = 0; i < a.faces.size(); ++i)
        if (a.faces[i] != b.faces[i]) return false;
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        if (!(a.weights[i] == b.weights[i])) return false;
    return true;
}

// Regular tetrahedron-ish test solid on unit axes, single-bone weights.
inline msurg::SkinnedMesh tetra() {
    msurg::SkinnedMesh mesh;
    mesh.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    mesh.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    mesh.bone_count = 1;
    mesh.weights.assign(4, msurg::WeightSet::single(0));
    return mesh;
}

// Axis-aligned unit cube, 12 triangles, outward orientation, single bone.
// Square diagonals all run through corners 0 and 7, so vertex degrees are 4
// or 6 (never 3).
inline msurg::SkinnedMesh cube() {
    msurg::SkinnedMesh mesh;
    for (int i = 0; i < 8; ++i)
        mesh.positions.push_back(msurg::Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1));
    mesh.faces = {{0, 3, 1}, {0, 2, 3}, {4, 5, 7}, {4, 7, 6}, {0, 5, 4}, {0, 1, 5},
                  {2, 7, 3}, {2, 6, 7}, {0, 6, 2}, {0, 4, 6}, {1, 3, 7}, {1, 7, 5}};
    mesh.bone_count = 1;
    mesh.weights.assign(8, msurg::WeightSet::single(0));
    return mesh;
}

// Unique scratch path in the working directory, collision-free across
// concurrently running test binaries.
inline std::string temp_path(const std::string& name) {
    static int counter = 0;
    static const int tag = []() {
        std::FILE* f = std::fopen("/proc/self/stat", "r");
        int pid = 0;
        if (f) {
            if (std::fscanf(f, "%d", &pid) != 1) pid = 0;
            std::fclose(f);
        }
        return pid;
    }();
    return "scratch_" + std::to_string(tag) + "_" + std::to_string(counter++) + "_" + name;
}

}  // namespace oracle
