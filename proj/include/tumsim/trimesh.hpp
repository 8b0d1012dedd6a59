#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/geometry.hpp"
#include "tumsim/pslg.hpp"

namespace tumsim {

struct MeshParams {
    double theta_min = 20.0;  // degrees; Ruppert guarantee holds up to 20.7
    double max_area = 0.0;    // 0 = no area ceiling
    double jitter = 0.0;      // vertex perturbation amplitude
    double rotation = 0.0;    // radians, anticlockwise about the origin

    bool operator==(const MeshParams&) const = default;

    void validate() const {
        if (!(theta_min > 0.0 && theta_min <= 20.7))
            throw ConfigError("theta_min must lie in (0, 20.7]");
        if (jitter < 0.0) throw ConfigError("jitter must be >= 0");
        if (max_area < 0.0) throw ConfigError("max_area must be >= 0");
    }
};

// Static triangulation of the box with every geometric and adjacency
// quantity the solvers need. Immutable after construction.
struct TriMesh {
    struct Edge {
        int a = -1, b = -1;        // endpoint vertex ids
        int owner = -1;            // lower-indexed incident triangle
        int neighbour = -1;        // other incident triangle, -1 on the boundary
        Vec2 midpoint;             // m_ji
        Vec2 normal;               // unit, points out of the owner
        double length = 0.0;       // l_ji
    };

    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;       // anticlockwise
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> tri_edges;       // edge ids, entry k opposite vertex k
    std::vector<std::array<int, 3>> tri_neighbours;  // E(j); -1 where boundary
    std::vector<double> area;                        // a_j
    std::vector<Vec2> centroid;                      // z_j
    std::vector<double> lumped_weight;               // w_v, per vertex
    std::vector<int> boundary_edges;                 // edge ids with neighbour == -1
    std::vector<std::vector<int>> vertex_tris;       // triangles incident to each vertex
    bool is_delaunay = false;

    int n_vertices() const { return (int)vertices.size(); }
    int n_triangles() const { return (int)triangles.size(); }
    int n_edges() const { return (int)edges.size(); }

    double total_area() const {
        double s = 0.0;
        for (double a : area) s += a;
        return s;
    }

    double min_area() const {
        double m = area.empty() ? 0.0 : area[0];
        for (double a : area) m = std::min(m, a);
        return m;
    }

    double max_area() const {
        double m = 0.0;
        for (double a : area) m = std::max(m, a);
        return m;
    }

    // Outward unit normal of edge e as seen from triangle t.
    Vec2 normal_from(int e, int t) const {
        const Edge& ed = edges[e];
        return (t == ed.owner) ? ed.normal : Vec2{-ed.normal.x, -ed.normal.y};
    }

    bool edge_exists(int a, int b) const {
        if (a > b) std::swap(a, b);
        for (const Edge& e : edges) {
            int ea = e.a, eb = e.b;
            if (ea > eb) std::swap(ea, eb);
            if (ea == a && eb == b) return true;
        }
        return false;
    }
};

// Realises the adjacency notation (edge table, E(j), V(j), boundary edges)
// from a raw vertex/triangle soup. Reorients clockwise triples.
inline TriMesh build_adjacency(std::vector<Vec2> vertices,
                               std::vector<std::array<int, 3>> triangles) {
    TriMesh m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);

    const int nv = m.n_vertices();
    const int nt = m.n_triangles();

    std::map<std::array<int, 3>, int> dup_check;
    for (int j = 0; j < nt; ++j) {
        auto& t = m.triangles[j];
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= nv)
                throw ConfigError("triangle references invalid vertex");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw ConfigError("degenerate triangle (repeated vertex)");
        double a2 = orient2d(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        if (a2 < 0.0) std::swap(t[1], t[2]);
        std::array<int, 3> s = t;
        std::sort(s.begin(), s.end());
        auto [it, fresh] = dup_check.insert({s, j});
        if (!fresh) throw ConfigError("duplicate triangle in mesh");
    }

    m.area.resize(nt);
    m.centroid.resize(nt);
    for (int j = 0; j < nt; ++j) {
        const auto& t = m.triangles[j];
        const Vec2 &p0 = m.vertices[t[0]], &p1 = m.vertices[t[1]], &p2 = m.vertices[t[2]];
        m.area[j] = triangle_area(p0, p1, p2);
        if (m.area[j] <= 0.0) throw ConfigError("triangle with non-positive area");
        m.centroid[j] = (p0 + p1 + p2) / 3.0;
    }

    // Edge table keyed on sorted endpoints; owner = lower triangle index.
    std::map<std::pair<int, int>, int> edge_of;
    m.tri_edges.assign(nt, {-1, -1, -1});
    for (int j = 0; j < nt; ++j) {
        const auto& t = m.triangles[j];
        for (int k = 0; k < 3; ++k) {
            int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                TriMesh::Edge e;
                e.a = a;
                e.b = b;
                e.owner = j;
                e.midpoint = (m.vertices[a] + m.vertices[b]) * 0.5;
                e.length = dist(m.vertices[a], m.vertices[b]);
                m.edges.push_back(e);
                edge_of.emplace(key, (int)m.edges.size() - 1);
                m.tri_edges[j][k] = (int)m.edges.size() - 1;
            } else {
                TriMesh::Edge& e = m.edges[it->second];
                if (e.neighbour != -1)
                    throw ConfigError("non-manifold edge (more than two incident triangles)");
                e.neighbour = j;  // j > owner by loop order
                m.tri_edges[j][k] = it->second;
            }
        }
    }

    // Normals out of the owner: the owner sees the edge anticlockwise, so
    // the outward direction is the clockwise perpendicular of (b - a) taken
    // in the owner's traversal order.
    for (auto& e : m.edges) {
        const auto& t = m.triangles[e.owner];
        int a = -1, b = -1;
        for (int k = 0; k < 3; ++k) {
            int u = t[k], v = t[(k + 1) % 3];
            if ((u == e.a && v == e.b) || (u == e.b && v == e.a)) {
                a = u;
                b = v;
                break;
            }
        }
        Vec2 d = m.vertices[b] - m.vertices[a];
        Vec2 n{d.y, -d.x};
        e.normal = n / norm(n);
    }

    m.tri_neighbours.assign(nt, {-1, -1, -1});
    for (int j = 0; j < nt; ++j)
        for (int k = 0; k < 3; ++k) {
            const auto& e = m.edges[m.tri_edges[j][k]];
            m.tri_neighbours[j][k] = (e.owner == j) ? e.neighbour : e.owner;
        }

    for (int i = 0; i < (int)m.edges.size(); ++i)
        if (m.edges[i].neighbour == -1) m.boundary_edges.push_back(i);

    m.vertex_tris.assign(nv, {});
    for (int j = 0; j < nt; ++j)
        for (int v : m.triangles[j]) m.vertex_tris[v].push_back(j);

    // Row-sum lumped weights: w_v = sum of a_K/3 over incident triangles.
    m.lumped_weight.assign(nv, 0.0);
    for (int j = 0; j < nt; ++j)
        for (int v : m.triangles[j]) m.lumped_weight[v] += m.area[j] / 3.0;

    // Delaunay flag: the opposite vertex may not be measurably closer to the
    // owner's circumcentre than the owner's own vertices. The relative
    // comparison keeps cocircular configurations (structured grids, points
    // sampled on a circle) counted as Delaunay.
    m.is_delaunay = true;
    for (const auto& e : m.edges) {
        if (e.neighbour == -1) continue;
        const auto& t = m.triangles[e.owner];
        int opp = -1;
        for (int v : m.triangles[e.neighbour])
            if (v != e.a && v != e.b) opp = v;
        Vec2 cc = circumcenter(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        double r = dist(cc, m.vertices[t[0]]);
        double d = dist(cc, m.vertices[opp]);
        if (d < r * (1.0 - 1e-9)) {
            m.is_delaunay = false;
            break;
        }
    }

    return m;
}

// Lumped vertex weights, exposed separately for direct testing.
inline std::vector<double> lumped_weights(const TriMesh& mesh) {
    return mesh.lumped_weight;
}

// Perturb interior vertices and/or rotate the whole mesh about the origin.
// Vertices on the box boundary and on pslg loop polylines stay fixed under
// jitter. The rotation is applied first; adjacency is rebuilt at the end.
inline TriMesh jitter_and_rotate(const TriMesh& mesh, const MeshParams& params,
                                 std::uint64_t seed = 0,
                                 const std::vector<int>& pinned_vertices = {}) {
    std::vector<Vec2> pts = mesh.vertices;

    if (params.rotation != 0.0) {
        double c = std::cos(params.rotation), s = std::sin(params.rotation);
        if (params.rotation == M_PI) { c = -1.0; s = 0.0; }            // exact reflection
        if (params.rotation == M_PI_2) { c = 0.0; s = 1.0; }           // exact quarter turn
        if (params.rotation == -M_PI_2) { c = 0.0; s = -1.0; }
        for (auto& p : pts) p = {c * p.x - s * p.y, s * p.x + c * p.y};
    }

    if (params.jitter > 0.0) {
        std::vector<bool> pinned(pts.size(), false);
        for (int v : pinned_vertices) pinned[v] = true;
        for (int e : mesh.boundary_edges) {
            pinned[mesh.edges[e].a] = true;
            pinned[mesh.edges[e].b] = true;
        }

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        double amp = params.jitter;
        for (int attempt = 0;; ++attempt) {
            std::vector<Vec2> trial = pts;
            for (std::size_t v = 0; v < trial.size(); ++v) {
                if (pinned[v]) continue;
                trial[v].x += amp * unit(rng);
                trial[v].y += amp * unit(rng);
            }
            bool ok = true;
            for (const auto& t : mesh.triangles)
                if (orient2d(trial[t[0]], trial[t[1]], trial[t[2]]) <= 0.0) {
                    ok = false;
                    break;
                }
            if (ok) {
                pts = std::move(trial);
                break;
            }
            if (attempt >= 4) throw ConfigError("jitter keeps inverting triangles");
            amp *= 0.5;
        }
    }

    return build_adjacency(std::move(pts), mesh.triangles);
}

// Mesh text format: line 1 `NV NT`; NV vertex lines `x y`; NT triangle
// lines `i j k` (0-based, anticlockwise).
inline void write_mesh(std::ostream& out, const TriMesh& mesh) {
    out << mesh.n_vertices() << ' ' << mesh.n_triangles() << '\n';
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v.x << ' ' << v.y << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline TriMesh read_mesh(std::istream& in) {
    int nv = 0, nt = 0;
    if (!(in >> nv >> nt) || nv < 3 || nt < 1) throw IoError("mesh: bad header line");
    std::vector<Vec2> vs(nv);
    for (int i = 0; i < nv; ++i)
        if (!(in >> vs[i].x >> vs[i].y)) throw IoError("mesh: bad vertex line");
    std::vector<std::array<int, 3>> ts(nt);
    for (int i = 0; i < nt; ++i)
        if (!(in >> ts[i][0] >> ts[i][1] >> ts[i][2])) throw IoError("mesh: bad triangle line");
    return build_adjacency(std::move(vs), std::move(ts));
}

inline void write_mesh_file(const std::string& path, const TriMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open mesh file for writing: " + path);
    write_mesh(out, mesh);
}

inline TriMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);
    return read_mesh(in);
}

} // namespace tumsim
