#include "msurg/adjacency.hpp"

#include "msurg/error.hpp"

#include <algorithm>

namespace msurg {

namespace {

void sorted_insert(std::vector<int>& row, int value) {
    auto it = std::lower_bound(row.begin(), row.end(), value);
    if (it == row.end() || *it != value) row.insert(it, value);
}

bool sorted_erase(std::vector<int>& row, int value) {
    auto it = std::lower_bound(row.begin(), row.end(), value);
    if (it != row.end() && *it == value) {
        row.erase(it);
        return true;
    }
    return false;
}

void sorted_replace(std::vector<int>& row, int old_value, int new_value) {
    if (sorted_erase(row, old_value)) sorted_insert(row, new_value);
}

}  // namespace

AdjacencyMaps build_adjacency(const SkinnedMesh& mesh) {
    AdjacencyMaps maps;
    const int nv = mesh.vertex_count();
    const int nf = mesh.face_count();
    maps.vertex_neighbors.assign(static_cast<std::size_t>(nv), {});
    maps.face_neighbors.assign(static_cast<std::size_t>(nf), {});
    maps.face_vertices = mesh.faces;
    maps.edge_to_faces.reserve(static_cast<std::size_t>(nf) * 2);

    for (int f = 0; f < nf; ++f) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k)
            maps.edge_to_faces[edge_key(face[k], face[(k + 1) % 3])].push_back(f);
    }
    for (auto& [key, faces] : maps.edge_to_faces) {
        std::sort(faces.begin(), faces.end());
        const int u = edge_key_first(key);
        const int v = edge_key_second(key);
        sorted_insert(maps.vertex_neighbors[static_cast<std::size_t>(u)], v);
        sorted_insert(maps.vertex_neighbors[static_cast<std::size_t>(v)], u);
        for (std::size_t i = 0; i < faces.size(); ++i)
            for (std::size_t j = i + 1; j < faces.size(); ++j) {
                sorted_insert(maps.face_neighbors[static_cast<std::size_t>(faces[i])], faces[j]);
                sorted_insert(maps.face_neighbors[static_cast<std::size_t>(faces[j])], faces[i]);
            }
        if (faces.size() > 2)
            maps.warnings.push_back("non-manifold edge (" + std::to_string(u) + "," +
                                    std::to_string(v) + ") with " + std::to_string(faces.size()) +
                                    " faces");
    }
    return maps;
}

void validate_delta(int vertex_count, int face_count, const MeshDelta& delta) {
    for (std::size_t i = 0; i < delta.added_vertices.size(); ++i) {
        const int expect = vertex_count + static_cast<int>(i);
        if (delta.added_vertices[i].index != expect)
            throw GeometryError("delta vertex " + std::to_string(delta.added_vertices[i].index) +
                                " out of sequence, expected " + std::to_string(expect));
    }
    int prev = -1;
    for (int f : delta.removed_faces) {
        if (f < 0 || f >= face_count)
            throw GeometryError("delta removes nonexistent face " + std::to_string(f));
        if (f <= prev)
            throw GeometryError("delta removed faces not ascending at " + std::to_string(f));
        prev = f;
    }
    const int total_vertices = vertex_count + static_cast<int>(delta.added_vertices.size());
    for (const Face& face : delta.added_faces) {
        for (int corner : face)
            if (corner < 0 || corner >= total_vertices)
                throw GeometryError("delta face references vertex " + std::to_string(corner));
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw GeometryError("delta adds a degenerate face");
    }
}

namespace {

// Erase face f from edge rows, neighbor lists and, when an edge dies, from
// the vertex adjacency. Returns touch count.
std::size_t detach_face(AdjacencyMaps& maps, int f) {
    std::size_t touches = 0;
    const Face face = maps.face_vertices[static_cast<std::size_t>(f)];
    for (int k = 0; k < 3; ++k) {
        const int u = face[static_cast<std::size_t>(k)];
        const int v = face[static_cast<std::size_t>((k + 1) % 3)];
        const std::uint64_t key = edge_key(u, v);
        auto it = maps.edge_to_faces.find(key);
        if (it == maps.edge_to_faces.end()) continue;
        sorted_erase(it->second, f);
        ++touches;
        for (int g : it->second) {
            sorted_erase(maps.face_neighbors[static_cast<std::size_t>(g)], f);
            ++touches;
        }
        if (it->second.empty()) {
            maps.edge_to_faces.erase(it);
            ++touches;
            sorted_erase(maps.vertex_neighbors[static_cast<std::size_t>(u)], v);
            sorted_erase(maps.vertex_neighbors[static_cast<std::size_t>(v)], u);
            touches += 2;
        }
    }
    return touches;
}

// Rename the current last face to slot f (swap-remove bookkeeping).
std::size_t move_last_face(AdjacencyMaps& maps, int f) {
    const int last = maps.face_count() - 1;
    std::size_t touches = 0;
    if (last != f) {
        const Face face = maps.face_vertices[static_cast<std::size_t>(last)];
        for (int k = 0; k < 3; ++k) {
            auto it = maps.edge_to_faces.find(edge_key(face[k], face[(k + 1) % 3]));
            if (it != maps.edge_to_faces.end()) {
                sorted_replace(it->second, last, f);
                ++touches;
            }
        }
        for (int g : maps.face_neighbors[static_cast<std::size_t>(last)]) {
            sorted_replace(maps.face_neighbors[static_cast<std::size_t>(g)], last, f);
            ++touches;
        }
        maps.face_vertices[static_cast<std::size_t>(f)] = face;
        maps.face_neighbors[static_cast<std::size_t>(f)] =
            std::move(maps.face_neighbors[static_cast<std::size_t>(last)]);
        touches += 2;
    }
    maps.face_vertices.pop_back();
    maps.face_neighbors.pop_back();
    return touches;
}

std::size_t attach_face(AdjacencyMaps& maps, const Face& face) {
    const int f = maps.face_count();
    maps.face_vertices.push_back(face);
    maps.face_neighbors.emplace_back();
    std::size_t touches = 2;
    for (int k = 0; k < 3; ++k) {
        const int u = face[static_cast<std::size_t>(k)];
        const int v = face[static_cast<std::size_t>((k + 1) % 3)];
        const std::uint64_t key = edge_key(u, v);
        auto [it, inserted] = maps.edge_to_faces.try_emplace(key);
        if (inserted) {
            sorted_insert(maps.vertex_neighbors[static_cast<std::size_t>(u)], v);
            sorted_insert(maps.vertex_neighbors[static_cast<std::size_t>(v)], u);
            touches += 2;
        }
        for (int g : it->second) {
            sorted_insert(maps.face_neighbors[static_cast<std::size_t>(g)], f);
            sorted_insert(maps.face_neighbors[static_cast<std::size_t>(f)], g);
            touches += 2;
        }
        sorted_insert(it->second, f);
        ++touches;
        if (it->second.size() > 2)
            maps.warnings.push_back("non-manifold edge (" + std::to_string(u) + "," +
                                    std::to_string(v) + ") with " +
                                    std::to_string(it->second.size()) + " faces");
    }
    return touches;
}

}  // namespace

void apply_delta(AdjacencyMaps& maps, const MeshDelta& delta) {
    validate_delta(maps.vertex_count(), maps.face_count(), delta);
    std::size_t touches = 0;

    for (auto it = delta.removed_faces.rbegin(); it != delta.removed_faces.rend(); ++it) {
        touches += detach_face(maps, *it);
        touches += move_last_face(maps, *it);
    }
    for (std::size_t i = 0; i < delta.added_vertices.size(); ++i) {
        maps.vertex_neighbors.emplace_back();
        ++touches;
    }
    for (const Face& face : delta.added_faces) touches += attach_face(maps, face);

    maps.last_patch_touches = touches;
}

void apply_delta(SkinnedMesh& mesh, const MeshDelta& delta) {
    validate_delta(mesh.vertex_count(), mesh.face_count(), delta);
    for (auto it = delta.removed_faces.rbegin(); it != delta.removed_faces.rend(); ++it) {
        mesh.faces[static_cast<std::size_t>(*it)] = mesh.faces.back();
        mesh.faces.pop_back();
    }
    for (const DeltaVertex& dv : delta.added_vertices) {
        mesh.positions.push_back(dv.position);
        if (mesh.has_uvs()) mesh.uvs.push_back(dv.uv.value_or(Vec2::Zero()));
        if (mesh.has_weights()) mesh.weights.push_back(dv.weights);
    }
    mesh.faces.insert(mesh.faces.end(), delta.added_faces.begin(), delta.added_faces.end());
}

bool maps_equal(const AdjacencyMaps& a, const AdjacencyMaps& b) {
    if (a.vertex_neighbors != b.vertex_neighbors) return false;
    if (a.face_neighbors != b.face_neighbors) return false;
    if (a.face_vertices != b.face_vertices) return false;
    if (a.edge_to_faces.size() != b.edge_to_faces.size()) return false;
    for (const auto& [key, faces] : a.edge_to_faces) {
        auto it = b.edge_to_faces.find(key);
        if (it == b.edge_to_faces.end() || it->second != faces) return false;
    }
    return true;
}

}  // namespace msurg
