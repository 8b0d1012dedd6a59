#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/geometry.hpp"
#include "tumsim/pslg.hpp"

namespace tumsim {

enum class ShapeKind { Circle, Bullet, SemiAnnulus, PolygonFile };

// Initial tumour geometry. Defaults follow the experiments: unit disc at the
// origin; semi-annulus {0.5 <= r <= 1, x >= 0}; bullet = rectangle
// [-0.5,0.5] x [-1,0.5] capped by the half-disc of radius 0.5 centred at
// (0, 0.5).
struct ShapeSpec {
    ShapeKind kind = ShapeKind::Circle;
    double radius = 1.0;
    Vec2 centre{0.0, 0.0};
    double inner_radius = 0.5;
    double outer_radius = 1.0;
    int boundary_nodes = 64;
    std::string polygon_file;
    std::vector<std::vector<Vec2>> polygon_loops;  // populated for PolygonFile

    bool operator==(const ShapeSpec&) const = default;

    void validate() const {
        if (boundary_nodes < 8) throw ConfigError("boundary_nodes must be >= 8");
        switch (kind) {
        case ShapeKind::Circle:
            if (radius <= 0.0) throw ConfigError("circle radius must be positive");
            break;
        case ShapeKind::SemiAnnulus:
            if (inner_radius <= 0.0 || inner_radius >= outer_radius)
                throw ConfigError("semi_annulus needs 0 < inner_radius < outer_radius");
            break;
        case ShapeKind::Bullet:
            break;
        case ShapeKind::PolygonFile:
            if (polygon_loops.empty())
                throw ConfigError("polygon_file shape has no loops loaded");
            break;
        }
    }
};

// polygon_file format: one anticlockwise loop per line, `n x1 y1 ... xn yn`.
inline std::vector<std::vector<Vec2>> read_polygon_loops(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open polygon file: " + path);
    std::vector<std::vector<Vec2>> loops;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int n = 0;
        if (!(ls >> n)) continue;  // blank line
        if (n < 3) throw IoError("polygon loop with fewer than 3 nodes: " + path);
        std::vector<Vec2> loop(n);
        for (int i = 0; i < n; ++i)
            if (!(ls >> loop[i].x >> loop[i].y))
                throw IoError("short polygon loop line: " + path);
        if (polygon_signed_area(loop) <= 0.0)
            throw IoError("polygon loop must be anticlockwise: " + path);
        loops.push_back(std::move(loop));
    }
    if (loops.empty()) throw IoError("polygon file has no loops: " + path);
    return loops;
}

namespace detail {

inline std::vector<Vec2> sample_uniform(const std::vector<Vec2>& dense, int n) {
    // Uniform arc-length resampling of a dense closed polyline.
    std::size_t m = dense.size();
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        cum[i + 1] = cum[i] + dist(dense[i], dense[(i + 1) % m]);
    double total = cum[m];
    std::vector<Vec2> out(n);
    std::size_t seg = 0;
    for (int k = 0; k < n; ++k) {
        double target = total * k / n;
        while (seg + 1 < m && cum[seg + 1] < target) ++seg;
        double t = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out[k] = dense[seg] + t * (dense[(seg + 1) % m] - dense[seg]);
    }
    return out;
}

} // namespace detail

// Anticlockwise boundary loops of the analytic shape, with boundary_nodes
// nodes per loop placed at uniform arc length.
inline std::vector<std::vector<Vec2>> shape_loops(const ShapeSpec& s) {
    s.validate();
    const int n = s.boundary_nodes;
    std::vector<std::vector<Vec2>> loops;

    switch (s.kind) {
    case ShapeKind::Circle: {
        std::vector<Vec2> loop(n);
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * M_PI * i / n;
            loop[i] = s.centre + Vec2{s.radius * std::cos(th), s.radius * std::sin(th)};
        }
        loops.push_back(std::move(loop));
        break;
    }
    case ShapeKind::SemiAnnulus: {
        // Outer arc (x >= 0), inner gap wall, inner arc, outer gap wall.
        const double ri = s.inner_radius, ro = s.outer_radius;
        std::vector<Vec2> dense;
        const int m = 512;
        for (int i = 0; i <= m; ++i) {
            double th = -M_PI_2 + M_PI * i / m;
            dense.push_back({ro * std::cos(th), ro * std::sin(th)});
        }
        for (int i = 1; i < 8; ++i)
            dense.push_back({0.0, ro - (ro - ri) * i / 8.0});
        for (int i = 0; i <= m; ++i) {
            double th = M_PI_2 - M_PI * i / m;
            dense.push_back({ri * std::cos(th), ri * std::sin(th)});
        }
        for (int i = 1; i < 8; ++i)
            dense.push_back({0.0, -ri - (ro - ri) * i / 8.0});
        loops.push_back(detail::sample_uniform(dense, n));
        break;
    }
    case ShapeKind::Bullet: {
        std::vector<Vec2> dense;
        const int m = 512;
        auto wall = [&](Vec2 a, Vec2 b, int steps) {
            for (int i = 0; i < steps; ++i) dense.push_back(a + (double)i / steps * (b - a));
        };
        wall({-0.5, -1.0}, {0.5, -1.0}, 32);
        wall({0.5, -1.0}, {0.5, 0.5}, 48);
        for (int i = 0; i <= m; ++i) {
            double th = M_PI * i / m;
            dense.push_back({0.5 * std::cos(th), 0.5 + 0.5 * std::sin(th)});
        }
        wall({-0.5, 0.5}, {-0.5, -1.0}, 48);
        loops.push_back(detail::sample_uniform(dense, n));
        break;
    }
    case ShapeKind::PolygonFile:
        loops = s.polygon_loops;
        break;
    }

    for (const auto& loop : loops)
        if (polygon_signed_area(loop) <= 0.0)
            throw ConfigError("shape loop is not anticlockwise");
    return loops;
}

// Strict analytic membership test; points on the boundary count as outside.
inline bool inside_shape(const ShapeSpec& s, const Vec2& p) {
    switch (s.kind) {
    case ShapeKind::Circle:
        return dist(p, s.centre) < s.radius;
    case ShapeKind::SemiAnnulus: {
        double r = norm(p);
        return p.x > 0.0 && r > s.inner_radius && r < s.outer_radius;
    }
    case ShapeKind::Bullet: {
        bool in_rect = p.x > -0.5 && p.x < 0.5 && p.y > -1.0 && p.y < 0.5;
        bool in_cap = p.y >= 0.5 && dist(p, {0.0, 0.5}) < 0.5;
        return in_rect || in_cap;
    }
    case ShapeKind::PolygonFile:
        return point_in_loops(s.polygon_loops, p);
    }
    return false;
}

// Builds the meshing input: loop nodes joined into closed segment chains.
inline Pslg shape_pslg(const ShapeSpec& s) {
    Pslg p;
    for (const auto& loop : shape_loops(s)) {
        int base = (int)p.points.size();
        int n = (int)loop.size();
        std::vector<int> chain(n);
        for (int i = 0; i < n; ++i) {
            p.points.push_back(loop[i]);
            chain[i] = base + i;
        }
        for (int i = 0; i < n; ++i)
            p.segments.push_back({base + i, base + (i + 1) % n});
        p.boundary_loops.push_back(std::move(chain));
    }
    return p;
}

} // namespace tumsim
