#pragma once

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/geometry.hpp"

namespace tumsim {

// Planar straight-line graph: the input to mesh generation. Boundary loops
// are anticlockwise index chains approximating the initial tumour boundary;
// every loop edge is also listed in `segments`.
struct Pslg {
    std::vector<Vec2> points;
    std::vector<std::pair<int, int>> segments;
    std::vector<std::vector<int>> boundary_loops;

    void validate() const {
        const int np = (int)points.size();
        for (auto [a, b] : segments) {
            if (a < 0 || a >= np || b < 0 || b >= np)
                throw ConfigError("pslg segment references invalid point");
            if (a == b) throw ConfigError("pslg segment with equal endpoints");
        }
        for (const auto& loop : boundary_loops) {
            if (loop.size() < 3) throw ConfigError("pslg boundary loop with fewer than 3 nodes");
            std::set<int> uniq(loop.begin(), loop.end());
            if (uniq.size() != loop.size()) throw ConfigError("pslg boundary loop is not simple");
            for (int i : loop)
                if (i < 0 || i >= np) throw ConfigError("pslg loop references invalid point");
        }
        check_segment_intersections();
    }

private:
    // Segments may only meet at shared endpoints.
    void check_segment_intersections() const {
        auto strictly_cross = [&](int s, int t) {
            auto [a, b] = segments[s];
            auto [c, d] = segments[t];
            if (a == c || a == d || b == c || b == d) return false;
            const Vec2 &A = points[a], &B = points[b], &C = points[c], &D = points[d];
            double o1 = orient2d(A, B, C), o2 = orient2d(A, B, D);
            double o3 = orient2d(C, D, A), o4 = orient2d(C, D, B);
            return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) &&
                   o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
        };
        for (std::size_t s = 0; s < segments.size(); ++s)
            for (std::size_t t = s + 1; t < segments.size(); ++t)
                if (strictly_cross((int)s, (int)t))
                    throw ConfigError("pslg has intersecting segments");
    }
};

// Text format: line 1 `NP NS NL`, then NP point lines `x y`, NS segment
// lines `a b`, NL loop lines `n i1 ... in`.
inline Pslg read_pslg(std::istream& in) {
    Pslg p;
    int np = 0, ns = 0, nl = 0;
    if (!(in >> np >> ns >> nl)) throw IoError("pslg: bad header line");
    p.points.resize(np);
    for (int i = 0; i < np; ++i)
        if (!(in >> p.points[i].x >> p.points[i].y)) throw IoError("pslg: bad point line");
    p.segments.resize(ns);
    for (int i = 0; i < ns; ++i)
        if (!(in >> p.segments[i].first >> p.segments[i].second))
            throw IoError("pslg: bad segment line");
    p.boundary_loops.resize(nl);
    for (int i = 0; i < nl; ++i) {
        int n = 0;
        if (!(in >> n) || n < 3) throw IoError("pslg: bad loop line");
        p.boundary_loops[i].resize(n);
        for (int j = 0; j < n; ++j)
            if (!(in >> p.boundary_loops[i][j])) throw IoError("pslg: bad loop line");
    }
    return p;
}

inline void write_pslg(std::ostream& out, const Pslg& p) {
    out << p.points.size() << ' ' << p.segments.size() << ' ' << p.boundary_loops.size() << '\n';
    out << std::setprecision(17);
    for (const auto& pt : p.points) out << pt.x << ' ' << pt.y << '\n';
    for (auto [a, b] : p.segments) out << a << ' ' << b << '\n';
    for (const auto& loop : p.boundary_loops) {
        out << loop.size();
        for (int i : loop) out << ' ' << i;
        out << '\n';
    }
}

inline Pslg read_pslg_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pslg file: " + path);
    return read_pslg(in);
}

} // namespace tumsim
