#include "msurg/mesh.hpp"

#include "msurg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace msurg {

void validate_mesh(const SkinnedMesh& mesh) {
    const int nv = mesh.vertex_count();
    if (mesh.has_uvs() && mesh.uvs.size() != mesh.positions.size())
        throw GeometryError("uv array not parallel to positions");
    if (mesh.has_weights() && mesh.weights.size() != mesh.positions.size())
        throw GeometryError("weight array not parallel to positions");
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& face = mesh.faces[f];
        for (int corner : face) {
            if (corner < 0 || corner >= nv)
                throw GeometryError("face " + std::to_string(f) + " references vertex " +
                                    std::to_string(corner) + " outside [0, " +
                                    std::to_string(nv) + ")");
        }
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw GeometryError("face " + std::to_string(f) + " is degenerate");
    }
    if (mesh.has_weights()) {
        for (std::size_t v = 0; v < mesh.weights.size(); ++v) {
            double sum = 0.0;
            for (const WeightEntry& e : mesh.weights[v].entries) {
                if (e.weight < 0.0)
                    throw GeometryError("vertex " + std::to_string(v) + " has negative weight");
                if (e.bone < 0 || e.bone >= mesh.bone_count)
                    throw GeometryError("vertex " + std::to_string(v) + " references bone " +
                                        std::to_string(e.bone));
                sum += e.weight;
            }
            if (std::abs(sum - 1.0) > 1e-6)
                throw GeometryError("vertex " + std::to_string(v) + " weights sum to " +
                                    std::to_string(sum));
        }
    }
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

double total_area(const SkinnedMesh& mesh) {
    double area = 0.0;
    for (const Face& f : mesh.faces)
        area += triangle_area(mesh.positions[f[0]], mesh.positions[f[1]], mesh.positions[f[2]]);
    return area;
}

double default_merge_tolerance(const SkinnedMesh& mesh) {
    return 1e-6 * mesh.bbox_diag();
}

namespace {

struct CellKey {
    long long x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
        h ^= static_cast<std::size_t>(k.y) * 19349663u;
        h ^= static_cast<std::size_t>(k.z) * 83492791u;
        return h;
    }
};

CellKey cell_of(const Vec3& p, double cell) {
    return CellKey{static_cast<long long>(std::floor(p.x() / cell)),
                   static_cast<long long>(std::floor(p.y() / cell)),
                   static_cast<long long>(std::floor(p.z() / cell))};
}

}  // namespace

DuplicateRemoval remove_duplicates(const SkinnedMesh& mesh, double tol) {
    if (tol < 0.0) throw GeometryError("merge tolerance must be >= 0");
    const int nv = mesh.vertex_count();
    DuplicateRemoval out;
    out.remap.assign(static_cast<std::size_t>(nv), -1);

    const double cell = tol > 0.0 ? tol : 1.0;
    std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
    std::vector<int> survivors;  // original indices, ascending
    survivors.reserve(static_cast<std::size_t>(nv));

    for (int v = 0; v < nv; ++v) {
        const Vec3& p = mesh.positions[static_cast<std::size_t>(v)];
        const CellKey base = cell_of(p, cell);
        int target = -1;  // lowest-index survivor within tol
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find(CellKey{base.x + dx, base.y + dy, base.z + dz});
                    if (it == grid.end()) continue;
                    for (int s : it->second) {
                        if ((mesh.positions[static_cast<std::size_t>(s)] - p).norm() <= tol &&
                            (target == -1 || s < target))
                            target = s;
                    }
                }
        if (target >= 0) {
            out.remap[static_cast<std::size_t>(v)] = out.remap[static_cast<std::size_t>(target)];
        } else {
            out.remap[static_cast<std::size_t>(v)] = static_cast<int>(survivors.size());
            survivors.push_back(v);
            grid[base].push_back(v);
        }
    }

    out.mesh.bone_count = mesh.bone_count;
    out.mesh.positions.reserve(survivors.size());
    for (int s : survivors) out.mesh.positions.push_back(mesh.positions[static_cast<std::size_t>(s)]);
    if (mesh.has_uvs()) {
        out.mesh.uvs.reserve(survivors.size());
        for (int s : survivors) out.mesh.uvs.push_back(mesh.uvs[static_cast<std::size_t>(s)]);
    }
    if (mesh.has_weights()) {
        out.mesh.weights.reserve(survivors.size());
        for (int s : survivors) out.mesh.weights.push_back(mesh.weights[static_cast<std::size_t>(s)]);
    }
    for (const Face& f : mesh.faces) {
        const Face g{out.remap[static_cast<std::size_t>(f[0])],
                     out.remap[static_cast<std::size_t>(f[1])],
                     out.remap[static_cast<std::size_t>(f[2])]};
        if (g[0] != g[1] && g[1] != g[2] && g[0] != g[2]) out.mesh.faces.push_back(g);
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

MeshStats mesh_stats(const SkinnedMesh& mesh) {
    MeshStats stats;
    stats.vertex_count = mesh.vertex_count();
    stats.face_count = mesh.face_count();
    stats.total_area = total_area(mesh);

    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;  // key -> (count, first face)
    edges.reserve(mesh.faces.size() * 2);
    UnionFind uf(stats.face_count);
    for (int f = 0; f < stats.face_count; ++f) {
        const Face& face = mesh.faces[static_cast<std::size_t>(f)];
        for (int k = 0; k < 3; ++k) {
            const std::uint64_t key = edge_key(face[k], face[(k + 1) % 3]);
            auto [it, inserted] = edges.try_emplace(key, std::pair<int, int>{0, f});
            it->second.first += 1;
            if (!inserted) uf.unite(f, it->second.second);
        }
    }
    stats.edge_count = static_cast<int>(edges.size());
    for (const auto& [key, info] : edges)
        if (info.first == 1) stats.boundary_edge_count += 1;

    if (stats.face_count > 0) {
        int components = 0;
        for (int f = 0; f < stats.face_count; ++f)
            if (uf.find(f) == f) components += 1;
        stats.connected_components = components;
    }
    return stats;
}

CompactResult compact_mesh(const SkinnedMesh& mesh) {
    std::vector<char> used(mesh.positions.size(), 0);
    for (const Face& f : mesh.faces)
        for (int corner : f) used[static_cast<std::size_t>(corner)] = 1;

    CompactResult out;
    std::vector<int> old_to_new(mesh.positions.size(), -1);
    out.mesh.bone_count = mesh.bone_count;
    for (std::size_t v = 0; v < mesh.positions.size(); ++v) {
        if (!used[v]) continue;
        old_to_new[v] = static_cast<int>(out.mesh.positions.size());
        out.source_vertex.push_back(static_cast<int>(v));
        out.mesh.positions.push_back(mesh.positions[v]);
        if (mesh.has_uvs()) out.mesh.uvs.push_back(mesh.uvs[v]);
        if (mesh.has_weights()) out.mesh.weights.push_back(mesh.weights[v]);
    }
    out.mesh.faces.reserve(mesh.faces.size());
    for (const Face& f : mesh.faces)
        out.mesh.faces.push_back(Face{old_to_new[static_cast<std::size_t>(f[0])],
                                      old_to_new[static_cast<std::size_t>(f[1])],
                                      old_to_new[static_cast<std::size_t>(f[2])]});
    return out;
}

// ---------------------------------------------------------------------------
// File I/O

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

double parse_double(std::string_view tok, const std::string& path, int line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw FormatError(path, line, "expected a number, got '" + std::string(tok) + "'");
    return value;
}

long parse_long(std::string_view tok, const std::string& path, int line) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw FormatError(path, line, "expected an integer, got '" + std::string(tok) + "'");
    return value;
}

// Leading vertex index of an OBJ face corner (`7`, `7/7`, `7/7/7`, `7//7`).
long parse_corner_index(std::string_view tok, const std::string& path, int line) {
    const std::size_t slash = tok.find('/');
    return parse_long(slash == std::string_view::npos ? tok : tok.substr(0, slash), path, line);
}

void format_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void load_weights_file(SkinnedMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weights file: " + path);
    mesh.weights.assign(mesh.positions.size(), WeightSet{});
    std::vector<char> seen(mesh.positions.size(), 0);
    bool have_header = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens[0] == "bones") {
            if (tokens.size() != 2) throw FormatError(path, line_no, "bones header needs a count");
            mesh.bone_count = static_cast<int>(parse_long(tokens[1], path, line_no));
            if (mesh.bone_count <= 0) throw FormatError(path, line_no, "bone count must be > 0");
            have_header = true;
        } else if (tokens[0] == "w") {
            if (!have_header) throw FormatError(path, line_no, "record before bones header");
            if (tokens.size() < 4 || tokens.size() % 2 != 0)
                throw FormatError(path, line_no, "expected: w <vertex> <bone> <weight> ...");
            const long v = parse_long(tokens[1], path, line_no);
            if (v < 0 || v >= static_cast<long>(mesh.positions.size()))
                throw FormatError(path, line_no,
                                  "weight record references missing vertex " + std::to_string(v));
            WeightSet w;
            for (std::size_t k = 2; k + 1 < tokens.size(); k += 2) {
                const long bone = parse_long(tokens[k], path, line_no);
                const double weight = parse_double(tokens[k + 1], path, line_no);
                if (bone < 0 || bone >= mesh.bone_count)
                    throw FormatError(path, line_no,
                                      "weight record references missing bone " + std::to_string(bone));
                if (weight < 0.0) throw FormatError(path, line_no, "negative weight");
                w.entries.push_back({static_cast<int>(bone), weight});
            }
            if (std::abs(w.sum() - 1.0) > 1e-6)
                throw FormatError(path, line_no, "vertex weights must sum to 1");
            std::sort(w.entries.begin(), w.entries.end(),
                      [](const WeightEntry& a, const WeightEntry& b) { return a.bone < b.bone; });
            mesh.weights[static_cast<std::size_t>(v)] = std::move(w);
            seen[static_cast<std::size_t>(v)] = 1;
        } else {
            throw FormatError(path, line_no, "unknown record '" + std::string(tokens[0]) + "'");
        }
    }
    if (!have_header) throw IoError("weights file has no bones header: " + path);
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (!seen[v])
            throw IoError(path + ": no weight record for vertex " + std::to_string(v));
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return static_cast<bool>(in);
}

}  // namespace

SkinnedMesh load_mesh(const std::string& path, const std::optional<std::string>& weights_path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);

    SkinnedMesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens[0] == "v") {
            if (tokens.size() < 4) throw FormatError(path, line_no, "v needs 3 coordinates");
            mesh.positions.emplace_back(parse_double(tokens[1], path, line_no),
                                        parse_double(tokens[2], path, line_no),
                                        parse_double(tokens[3], path, line_no));
        } else if (tokens[0] == "vt") {
            if (tokens.size() < 3) throw FormatError(path, line_no, "vt needs 2 coordinates");
            mesh.uvs.emplace_back(parse_double(tokens[1], path, line_no),
                                  parse_double(tokens[2], path, line_no));
        } else if (tokens[0] == "f") {
            if (tokens.size() != 4)
                throw FormatError(path, line_no, "faces must be triangles");
            Face face;
            for (int k = 0; k < 3; ++k) {
                const long idx = parse_corner_index(tokens[static_cast<std::size_t>(k + 1)], path, line_no);
                if (idx < 1 || idx > static_cast<long>(mesh.positions.size()))
                    throw FormatError(path, line_no,
                                      "face index " + std::to_string(idx) + " out of range (" +
                                          std::to_string(mesh.positions.size()) + " vertices)");
                face[static_cast<std::size_t>(k)] = static_cast<int>(idx - 1);
            }
            if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
                throw FormatError(path, line_no, "degenerate face");
            mesh.faces.push_back(face);
        }
        // Other keywords (vn, o, g, s, usemtl, ...) are ignored.
    }
    if (mesh.has_uvs() && mesh.uvs.size() != mesh.positions.size())
        throw IoError(path + ": vt count " + std::to_string(mesh.uvs.size()) +
                      " does not match v count " + std::to_string(mesh.positions.size()));

    if (weights_path) {
        load_weights_file(mesh, *weights_path);
    } else if (file_exists(path + ".weights")) {
        load_weights_file(mesh, path + ".weights");
    }
    return mesh;
}

void save_mesh(const SkinnedMesh& mesh, const std::string& path) {
    std::string body;
    body.reserve(mesh.positions.size() * 40 + mesh.faces.size() * 20);
    for (const Vec3& p : mesh.positions) {
        body += "v ";
        format_double(body, p.x());
        body += ' ';
        format_double(body, p.y());
        body += ' ';
        format_double(body, p.z());
        body += '\n';
    }
    for (const Vec2& t : mesh.uvs) {
        body += "vt ";
        format_double(body, t.x());
        body += ' ';
        format_double(body, t.y());
        body += '\n';
    }
    const bool with_uv = mesh.has_uvs();
    for (const Face& f : mesh.faces) {
        body += "f";
        for (int corner : f) {
            body += ' ';
            body += std::to_string(corner + 1);
            if (with_uv) {
                body += '/';
                body += std::to_string(corner + 1);
            }
        }
        body += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) throw IoError("cannot write mesh file: " + path);
    out.close();
    if (!out) throw IoError("cannot write mesh file: " + path);

    if (mesh.has_weights()) {
        std::string wbody = "bones " + std::to_string(mesh.bone_count) + "\n";
        for (std::size_t v = 0; v < mesh.weights.size(); ++v) {
            wbody += "w " + std::to_string(v);
            for (const WeightEntry& e : mesh.weights[v].entries) {
                wbody += ' ';
                wbody += std::to_string(e.bone);
                wbody += ' ';
                format_double(wbody, e.weight);
            }
            wbody += '\n';
        }
        const std::string wpath = path + ".weights";
        std::ofstream wout(wpath, std::ios::binary);
        if (!wout || !(wout << wbody)) throw IoError("cannot write weights file: " + wpath);
    }
}

Pose load_pose(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pose file: " + path);
    Pose pose;
    int declared = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens[0] == "bones") {
            if (tokens.size() != 2) throw FormatError(path, line_no, "bones header needs a count");
            declared = static_cast<int>(parse_long(tokens[1], path, line_no));
            pose.bones.assign(static_cast<std::size_t>(declared), BoneTransform{});
        } else if (tokens[0] == "b") {
            if (declared < 0) throw FormatError(path, line_no, "record before bones header");
            if (tokens.size() != 9)
                throw FormatError(path, line_no, "expected: b <index> <qw> <qx> <qy> <qz> <tx> <ty> <tz>");
            const long idx = parse_long(tokens[1], path, line_no);
            if (idx < 0 || idx >= declared)
                throw FormatError(path, line_no, "bone index out of range");
            Quat q(parse_double(tokens[2], path, line_no), parse_double(tokens[3], path, line_no),
                   parse_double(tokens[4], path, line_no), parse_double(tokens[5], path, line_no));
            if (std::abs(q.norm() - 1.0) > 1e-6)
                throw FormatError(path, line_no, "rotation quaternion is not unit length");
            BoneTransform& bone = pose.bones[static_cast<std::size_t>(idx)];
            bone.rotation = q.normalized();
            bone.translation = Vec3(parse_double(tokens[6], path, line_no),
                                    parse_double(tokens[7], path, line_no),
                                    parse_double(tokens[8], path, line_no));
        } else {
            throw FormatError(path, line_no, "unknown record '" + std::string(tokens[0]) + "'");
        }
    }
    if (declared < 0) throw IoError("pose file has no bones header: " + path);
    return pose;
}

void save_pose(const Pose& pose, const std::string& path) {
    std::string body = "bones " + std::to_string(pose.bones.size()) + "\n";
    for (std::size_t i = 0; i < pose.bones.size(); ++i) {
        const BoneTransform& b = pose.bones[i];
        body += "b " + std::to_string(i);
        for (double v : {b.rotation.w(), b.rotation.x(), b.rotation.y(), b.rotation.z(),
                         b.translation.x(), b.translation.y(), b.translation.z()}) {
            body += ' ';
            format_double(body, v);
        }
        body += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) throw IoError("cannot write pose file: " + path);
}

}  // namespace msurg
