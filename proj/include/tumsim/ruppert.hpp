#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/geometry.hpp"
#include "tumsim/pslg.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

struct RefinedMesh {
    TriMesh mesh;
    // Vertices lying on pslg loop polylines (original nodes plus any split
    // points); these stay pinned under jitter.
    std::vector<int> constrained_vertices;
    // Midpoint splits of pslg input segments performed during refinement
    // (splits of the internal box-side subsegments are not counted). Zero
    // for well-sized inputs, in which case every pslg segment is literally
    // a mesh edge.
    int segment_splits = 0;
};

namespace detail {

// Incremental (Bowyer-Watson) triangulation of the square box (-ell, ell)^2.
// Constrained subsegments act as walls: insertion cavities never cross them,
// so a recovered segment edge stays in the triangulation for good.
class DelaunayRefiner {
public:
    struct Tri {
        int v[3];      // anticlockwise
        int nbr[3];    // nbr[k] shares the edge opposite v[k]; -1 on hull
        bool alive = true;
        double quality = 0.0;  // min angle, radians
        double area = 0.0;
        bool unsplittable = false;
    };

    explicit DelaunayRefiner(double ell) : ell_(ell) {
        pts_ = {{-ell, -ell}, {ell, -ell}, {ell, ell}, {-ell, ell}};
        on_segment_ = {true, true, true, true};
        vtx_tri_ = {0, 0, 1, 1};
        make_tri(0, 1, 2, -1, 1, -1);
        make_tri(0, 2, 3, -1, -1, 0);
        for (int k = 0; k < 4; ++k) add_segment(k, (k + 1) % 4, false);
    }

    int n_points() const { return (int)pts_.size(); }
    const Vec2& point(int i) const { return pts_[i]; }

    // Inserts p (strictly inside the box, or exactly on a box side for
    // segment splits). Returns the new vertex id, or -1 when the insertion
    // would be degenerate (duplicate point, point on a wall): in that case
    // the triangulation is untouched.
    int insert_point(const Vec2& p, bool constrained) {
        int t0 = locate(p);
        if (t0 < 0) throw SolverError("delaunay: point outside the box");
        for (int v : tris_[t0].v)
            if (pts_[v] == p) return -1;

        ++epoch_;
        std::vector<int> cavity;
        std::vector<int> stack{t0};
        mark_.resize(tris_.size(), 0);
        mark_[t0] = epoch_;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int k = 0; k < 3; ++k) {
                int nb = tris_[t].nbr[k];
                if (nb < 0 || mark_[nb] == epoch_) continue;
                if (is_constrained(tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3]))
                    continue;  // walls stop the cavity
                const Tri& tn = tris_[nb];
                if (incircle(pts_[tn.v[0]], pts_[tn.v[1]], pts_[tn.v[2]], p) > 0.0) {
                    mark_[nb] = epoch_;
                    stack.push_back(nb);
                }
            }
        }

        // Directed boundary edges of the cavity with their outside triangle.
        struct BEdge { int a, b, outside; };
        std::vector<BEdge> boundary;
        for (int t : cavity)
            for (int k = 0; k < 3; ++k) {
                int nb = tris_[t].nbr[k];
                if (nb >= 0 && mark_[nb] == epoch_) continue;
                boundary.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], nb});
            }

        // Validate the fan before touching anything.
        int fan_size = 0;
        for (const BEdge& e : boundary) {
            double o = orient2d(pts_[e.a], pts_[e.b], p);
            if (o < 0.0) throw SolverError("delaunay: cavity not star-shaped");
            if (o == 0.0) {
                if (e.outside >= 0) return -1;  // exactly on a wall
                continue;
            }
            ++fan_size;
        }
        if (fan_size == 0) return -1;

        for (int t : cavity) kill_tri(t);

        int pid = (int)pts_.size();
        pts_.push_back(p);
        on_segment_.push_back(constrained);
        vtx_tri_.push_back(-1);

        std::map<int, int> first_of, second_of;
        struct Created { int tri; BEdge edge; };
        std::vector<Created> created;
        for (const BEdge& e : boundary) {
            double o = orient2d(pts_[e.a], pts_[e.b], p);
            if (o <= 0.0) continue;  // p on this hull edge; split implicitly
            int nt = make_tri(e.a, e.b, pid, -1, -1, e.outside);
            if (e.outside >= 0) fix_neighbour(e.outside, e.a, e.b, nt);
            first_of[e.a] = nt;
            second_of[e.b] = nt;
            created.push_back({nt, e});
        }
        for (auto& c : created) {
            auto itf = first_of.find(c.edge.b);
            tris_[c.tri].nbr[0] = (itf != first_of.end()) ? itf->second : -1;
            auto its = second_of.find(c.edge.a);
            tris_[c.tri].nbr[1] = (its != second_of.end()) ? its->second : -1;
        }
        hint_ = created.front().tri;
        return pid;
    }

    // --- segment bookkeeping ---

    void add_segment(int a, int b, bool input = true) {
        segments_.push_back({a, b, input});
        constrained_.insert(key(a, b));
    }

    int n_segments() const { return (int)segments_.size(); }
    std::pair<int, int> segment(int i) const { return {segments_[i].a, segments_[i].b}; }
    bool segment_from_input(int i) const { return segments_[i].input; }

    bool is_constrained(int a, int b) const { return constrained_.count(key(a, b)) > 0; }

    bool encroaches(int si, const Vec2& q) const {
        const Vec2& A = pts_[segments_[si].a];
        const Vec2& B = pts_[segments_[si].b];
        if (q == A || q == B) return false;
        double len2 = dot(B - A, B - A);
        return dot(q - A, q - B) < -1e-14 * len2;
    }

    // Splits subsegment si at its midpoint; returns the new vertex id, or
    // -1 (segment untouched) when the midpoint already exists.
    int split_segment(int si) {
        int a = segments_[si].a, b = segments_[si].b;
        bool input = segments_[si].input;
        constrained_.erase(key(a, b));
        Vec2 mid = (pts_[a] + pts_[b]) * 0.5;
        int m = insert_point(mid, true);
        if (m < 0) {
            constrained_.insert(key(a, b));
            return -1;
        }
        segments_[si] = {a, m, input};
        constrained_.insert(key(a, m));
        segments_.push_back({m, b, input});
        constrained_.insert(key(m, b));
        return m;
    }

    // First constrained subsegment properly crossed on the way from one
    // point to another, or -1.
    int first_wall_crossed(const Vec2& from, const Vec2& to) const {
        int best = -1;
        double best_t = std::numeric_limits<double>::max();
        for (int si = 0; si < (int)segments_.size(); ++si) {
            const Vec2& A = pts_[segments_[si].a];
            const Vec2& B = pts_[segments_[si].b];
            double o1 = orient2d(from, to, A), o2 = orient2d(from, to, B);
            double o3 = orient2d(A, B, from), o4 = orient2d(A, B, to);
            if (((o1 > 0) == (o2 > 0)) || ((o3 > 0) == (o4 > 0))) continue;
            if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) continue;
            double t = o3 / (o3 - o4);  // param along (from, to)
            if (t < best_t) {
                best_t = t;
                best = si;
            }
        }
        return best;
    }

    bool edge_exists(int a, int b) const {
        for (int t : star(a)) {
            const Tri& tr = tris_[t];
            if (tr.v[0] == b || tr.v[1] == b || tr.v[2] == b) return true;
        }
        return false;
    }

    // Apex vertices of the (at most two) triangles adjacent to edge (a,b).
    std::vector<int> edge_apexes(int a, int b) const {
        std::vector<int> out;
        for (int t : star(a)) {
            const Tri& tr = tris_[t];
            int ia = -1, ib = -1;
            for (int k = 0; k < 3; ++k) {
                if (tr.v[k] == a) ia = k;
                if (tr.v[k] == b) ib = k;
            }
            if (ia >= 0 && ib >= 0) out.push_back(tr.v[3 - ia - ib]);
        }
        return out;
    }

    // Restores a missing segment edge by flipping the edges that cross it.
    // Flips cost nothing and keep the input segments intact; the caller
    // falls back to midpoint splitting when recovery fails.
    bool recover_edge(int a, int b) {
        const Vec2 &A = pts_[a], &B = pts_[b];
        for (int guard = 0; guard < 1000; ++guard) {
            if (edge_exists(a, b)) return true;
            bool flipped = false;
            for (int t = 0; t < (int)tris_.size() && !flipped; ++t) {
                if (!tris_[t].alive) continue;
                for (int k = 0; k < 3 && !flipped; ++k) {
                    int u = tris_[t].v[(k + 1) % 3], w = tris_[t].v[(k + 2) % 3];
                    if (u == a || u == b || w == a || w == b) continue;
                    if (is_constrained(u, w)) continue;
                    // proper crossing of the open segments?
                    const Vec2 &U = pts_[u], &W = pts_[w];
                    double o1 = orient2d(A, B, U), o2 = orient2d(A, B, W);
                    double o3 = orient2d(U, W, A), o4 = orient2d(U, W, B);
                    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 &&
                        o2 != 0 && o3 != 0 && o4 != 0)
                        flipped = flip_edge(t, k);
                }
            }
            if (!flipped) return edge_exists(a, b);
        }
        return edge_exists(a, b);
    }

    const std::vector<Tri>& tris() const { return tris_; }
    const std::vector<bool>& on_segment() const { return on_segment_; }

    void export_mesh(std::vector<Vec2>& vertices,
                     std::vector<std::array<int, 3>>& triangles) const {
        vertices = pts_;
        triangles.clear();
        for (const Tri& t : tris_)
            if (t.alive) triangles.push_back({t.v[0], t.v[1], t.v[2]});
    }

    void mark_unsplittable(int t) { tris_[t].unsplittable = true; }

private:
    static std::pair<int, int> key(int a, int b) {
        return {std::min(a, b), std::max(a, b)};
    }

    int make_tri(int a, int b, int c, int n_opp_a, int n_opp_b, int n_opp_c) {
        Tri t;
        t.v[0] = a; t.v[1] = b; t.v[2] = c;
        t.nbr[0] = n_opp_a; t.nbr[1] = n_opp_b; t.nbr[2] = n_opp_c;
        t.alive = true;
        t.quality = min_angle(pts_[a], pts_[b], pts_[c]);
        t.area = triangle_area(pts_[a], pts_[b], pts_[c]);
        int id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
            tris_[id] = t;
        } else {
            tris_.push_back(t);
            id = (int)tris_.size() - 1;
        }
        vtx_tri_[a] = vtx_tri_[b] = vtx_tri_[c] = id;
        return id;
    }

    void kill_tri(int t) {
        tris_[t].alive = false;
        free_.push_back(t);
    }

    // Points the slot of `outer` that faces edge (a,b) at `nt`.
    void fix_neighbour(int outer, int a, int b, int nt) {
        Tri& out = tris_[outer];
        for (int k = 0; k < 3; ++k) {
            int u = out.v[(k + 1) % 3], w = out.v[(k + 2) % 3];
            if ((u == a && w == b) || (u == b && w == a)) {
                out.nbr[k] = nt;
                return;
            }
        }
    }

    // Flips the edge of t1 opposite local vertex k1. Returns false when the
    // surrounding quad is not strictly convex.
    bool flip_edge(int t1, int k1) {
        int t2 = tris_[t1].nbr[k1];
        if (t2 < 0) return false;
        int x = tris_[t1].v[k1];
        int u = tris_[t1].v[(k1 + 1) % 3];
        int w = tris_[t1].v[(k1 + 2) % 3];
        int k2 = -1;
        for (int k = 0; k < 3; ++k)
            if (tris_[t2].v[k] != u && tris_[t2].v[k] != w) k2 = k;
        int y = tris_[t2].v[k2];

        if (orient2d(pts_[x], pts_[u], pts_[y]) <= 0.0) return false;
        if (orient2d(pts_[x], pts_[y], pts_[w]) <= 0.0) return false;

        int A = tris_[t1].nbr[(k1 + 1) % 3];  // across (w,x)
        int B = tris_[t1].nbr[(k1 + 2) % 3];  // across (x,u)
        int C = tris_[t2].nbr[(k2 + 1) % 3];  // edge of t2 opposite its (k2+1) vertex
        int D = tris_[t2].nbr[(k2 + 2) % 3];

        // t2's vertices in its own order: v[k2]=y; the shared edge appears
        // reversed, so v[k2+1]=w, v[k2+2]=u. C is across (u,y), D across (y,w).
        kill_tri(t1);
        kill_tri(t2);
        int n1 = make_tri(x, u, y, C, -1, B);   // nbr across (u,y)=C, (y,x)=n2, (x,u)=B
        int n2 = make_tri(x, y, w, D, A, -1);   // nbr across (y,w)=D, (w,x)=A, (x,y)=n1
        tris_[n1].nbr[1] = n2;
        tris_[n2].nbr[2] = n1;
        if (A >= 0) fix_neighbour(A, w, x, n2);
        if (B >= 0) fix_neighbour(B, x, u, n1);
        if (C >= 0) fix_neighbour(C, u, y, n1);
        if (D >= 0) fix_neighbour(D, y, w, n2);
        hint_ = n1;
        return true;
    }

    int locate(const Vec2& p) const {
        int t = hint_;
        if (t < 0 || !tris_[t].alive) t = first_alive();
        int steps = 0, cap = (int)tris_.size() + 64;
        while (true) {
            const Tri& tr = tris_[t];
            double worst = 0.0;
            int cross = -1;
            bool inside = true;
            for (int k = 0; k < 3; ++k) {
                double o = orient2d(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], p);
                if (o < worst) {
                    worst = o;
                    cross = tr.nbr[k];
                    inside = false;
                } else if (o < 0.0) {
                    inside = false;
                }
            }
            if (inside) return t;
            if (cross < 0) return scan_locate(p);
            t = cross;
            if (++steps > cap) return scan_locate(p);
        }
    }

    int scan_locate(const Vec2& p) const {
        for (int t = 0; t < (int)tris_.size(); ++t) {
            if (!tris_[t].alive) continue;
            const Tri& tr = tris_[t];
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k)
                if (orient2d(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], p) < 0.0)
                    ok = false;
            if (ok) return t;
        }
        return -1;
    }

    int first_alive() const {
        for (int t = 0; t < (int)tris_.size(); ++t)
            if (tris_[t].alive) return t;
        throw SolverError("delaunay: no alive triangles");
    }

    // Alive triangles incident to v, both rotation directions so hull
    // vertices are covered.
    std::vector<int> star(int v) const {
        std::vector<int> out;
        int t0 = vtx_tri_[v];
        if (t0 < 0 || !tris_[t0].alive) {
            for (int t = 0; t < (int)tris_.size(); ++t)
                if (tris_[t].alive)
                    for (int k = 0; k < 3; ++k)
                        if (tris_[t].v[k] == v) { out.push_back(t); break; }
            return out;
        }
        auto rotate = [&](int dir) {
            int t = t0;
            while (t >= 0) {
                if (dir > 0 || t != t0) out.push_back(t);
                int i = -1;
                for (int k = 0; k < 3; ++k)
                    if (tris_[t].v[k] == v) i = k;
                int next = tris_[t].nbr[(i + (dir > 0 ? 2 : 1)) % 3];
                if (next == t0 || next < 0) {
                    if (next < 0 && dir > 0) return false;  // hit hull, need reverse pass
                    return true;
                }
                t = next;
            }
            return true;
        };
        if (!rotate(+1)) rotate(-1);
        return out;
    }

    double ell_;
    std::vector<Vec2> pts_;
    std::vector<bool> on_segment_;
    std::vector<int> vtx_tri_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<int> mark_;
    struct Segment { int a, b; bool input; };
    std::vector<Segment> segments_;
    std::set<std::pair<int, int>> constrained_;
    int epoch_ = 0;
    mutable int hint_ = 0;
};

} // namespace detail

// Ruppert Delaunay refinement of the box (-ell, ell)^2 conforming to the
// pslg segments. Every triangle of the result has minimum angle >=
// params.theta_min (degrees) and, when params.max_area > 0, area strictly
// below max_area. Stalls are reported after 50x the input point count of
// insertions.
inline RefinedMesh ruppert_refine_full(const Pslg& pslg, const MeshParams& params,
                                       double ell) {
    params.validate();
    pslg.validate();
    for (const Vec2& p : pslg.points)
        if (std::abs(p.x) >= ell || std::abs(p.y) >= ell)
            throw ConfigError("pslg point outside the open box");

    detail::DelaunayRefiner dt(ell);

    std::vector<int> id(pslg.points.size());
    for (std::size_t i = 0; i < pslg.points.size(); ++i) {
        id[i] = dt.insert_point(pslg.points[i], true);
        if (id[i] < 0) throw ConfigError("pslg contains duplicate points");
    }
    for (auto [a, b] : pslg.segments) {
        dt.recover_edge(id[a], id[b]);  // flips only; split fallback below
        dt.add_segment(id[a], id[b]);
    }

    const int input_points = (int)pslg.points.size() + 4;
    const int cap = 50 * input_points;
    const double theta = params.theta_min * M_PI / 180.0;
    int inserted = 0;
    int seg_splits = 0;

    auto charge = [&](int n = 1) {
        inserted += n;
        if (inserted > cap) throw SolverError("refinement stalled");
    };

    while (true) {
        // Segment pass: recover missing subsegments, split encroached ones.
        bool seg_work = false;
        for (int si = 0; si < dt.n_segments(); ++si) {
            auto [a, b] = dt.segment(si);
            bool enc = false;
            if (dt.edge_exists(a, b) || dt.recover_edge(a, b)) {
                for (int apex : dt.edge_apexes(a, b))
                    if (dt.encroaches(si, dt.point(apex))) enc = true;
            } else {
                enc = true;  // unrecoverable by flips: split
            }
            if (enc) {
                if (dt.split_segment(si) < 0) throw SolverError("refinement stalled");
                if (dt.segment_from_input(si)) ++seg_splits;
                charge();
                seg_work = true;
                break;
            }
        }
        if (seg_work) continue;

        // Worst bad triangle: smallest angle below theta wins, then largest
        // oversized area. The area ceiling is strict so a coarse bound still
        // refines a degenerate exact tiling.
        const auto& tris = dt.tris();
        int bad = -1;
        bool bad_is_skinny = false;
        double bad_key = 0.0;
        for (int t = 0; t < (int)tris.size(); ++t) {
            const auto& tr = tris[t];
            if (!tr.alive || tr.unsplittable) continue;
            if (tr.quality < theta) {
                if (!bad_is_skinny || tr.quality < bad_key) {
                    bad = t;
                    bad_key = tr.quality;
                    bad_is_skinny = true;
                }
            } else if (!bad_is_skinny && params.max_area > 0.0 && tr.area >= params.max_area) {
                if (bad < 0 || tr.area > bad_key) {
                    bad = t;
                    bad_key = tr.area;
                }
            }
        }
        if (bad < 0) break;

        const auto& tr = tris[bad];
        Vec2 cc = circumcenter(dt.point(tr.v[0]), dt.point(tr.v[1]), dt.point(tr.v[2]));

        std::vector<int> encroached;
        for (int si = 0; si < dt.n_segments(); ++si)
            if (dt.encroaches(si, cc)) encroached.push_back(si);

        if (!encroached.empty()) {
            bool progress = false;
            for (int si : encroached) {
                if (dt.split_segment(si) >= 0) {
                    if (dt.segment_from_input(si)) ++seg_splits;
                    charge();
                    progress = true;
                }
            }
            if (!progress) dt.mark_unsplittable(bad);
            continue;
        }

        // A wall between the triangle and its circumcentre (including the
        // box sides when cc escapes) is treated as encroached and split.
        Vec2 inside = (dt.point(tr.v[0]) + dt.point(tr.v[1]) + dt.point(tr.v[2])) / 3.0;
        int wall = dt.first_wall_crossed(inside, cc);
        if (wall >= 0) {
            if (dt.split_segment(wall) >= 0) {
                if (dt.segment_from_input(wall)) ++seg_splits;
                charge();
            } else {
                dt.mark_unsplittable(bad);
            }
            continue;
        }

        double r = dist(cc, dt.point(tr.v[0]));
        bool too_close = false;
        for (int k = 0; k < 3; ++k)
            if (dist(cc, dt.point(tr.v[k])) < 1e-9 * std::max(1.0, r)) too_close = true;
        if (too_close || dt.insert_point(cc, false) < 0) {
            dt.mark_unsplittable(bad);
            continue;
        }
        charge();
    }

    const double theta_check = theta;
    for (const auto& tr : dt.tris())
        if (tr.alive && tr.unsplittable && tr.quality < 0.99 * theta_check)
            throw SolverError("refinement stalled");

    RefinedMesh out;
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    dt.export_mesh(vertices, triangles);
    out.mesh = build_adjacency(std::move(vertices), std::move(triangles));
    out.segment_splits = seg_splits;
    for (int v = 0; v < (int)dt.on_segment().size(); ++v)
        if (dt.on_segment()[v]) out.constrained_vertices.push_back(v);
    return out;
}

inline TriMesh ruppert_refine(const Pslg& pslg, const MeshParams& params, double ell) {
    return ruppert_refine_full(pslg, params, ell).mesh;
}

} // namespace tumsim
