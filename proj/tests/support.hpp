#pragma once

// Shared fixtures and oracle helpers for the test suite.

#include <array>
#include <random>
#include <vector>

#include "tumsim/tumsim.hpp"

namespace testsup {

using namespace tumsim;

inline TriMesh single_triangle() {
    return build_adjacency({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

// Two triangles sharing the diagonal of the unit square.
inline TriMesh two_triangle_square() {
    return build_adjacency({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

// Regular fan of n triangles around the origin, outer vertices on a circle.
inline TriMesh fan_mesh(int n, double r) {
    std::vector<Vec2> vs{{0.0, 0.0}};
    for (int i = 0; i <= n; ++i) {
        double th = M_PI * i / n;  // half-disc fan so that it stays manifold
        vs.push_back({r * std::cos(th), r * std::sin(th)});
    }
    std::vector<std::array<int, 3>> ts;
    for (int i = 0; i < n; ++i) ts.push_back({0, i + 1, i + 2});
    return build_adjacency(std::move(vs), std::move(ts));
}

// Independent scalar oracle for the semi-implicit volume-fraction update:
// solves a + delta*d*(a - thr)^+ = R by bisection.
inline double bisect_alpha(double R, double delta_d, double thr) {
    double lo = std::min(R, thr) - 1.0, hi = std::max(R, thr) + 1.0;
    auto g = [&](double a) { return a + delta_d * std::max(0.0, a - thr) - R; };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Brute-force fixpoint oracle for the domain update, written against sets
// and full recomputation each pass.
inline std::vector<bool> mask_update_oracle(const TriMesh& m,
                                            const std::vector<bool>& prev,
                                            const std::vector<double>& alpha, double thr) {
    auto boundary_tris = [&](const std::vector<bool>& mem) {
        std::vector<bool> onb(m.n_triangles(), false);
        for (int j = 0; j < m.n_triangles(); ++j) {
            if (!mem[j]) continue;
            for (int k = 0; k < 3; ++k) {
                int nb = m.tri_neighbours[j][k];
                if (nb < 0 || !mem[nb]) onb[j] = true;
            }
        }
        return onb;
    };

    std::vector<bool> cur = prev;
    std::vector<bool> onb_prev = boundary_tris(prev);

    // (1) exterior triangles edge-adjacent to the old boundary
    for (int j = 0; j < m.n_triangles(); ++j) {
        if (prev[j] || alpha[j] < thr) continue;
        bool adj = false;
        for (int k = 0; k < 3; ++k) {
            int nb = m.tri_neighbours[j][k];
            if (nb >= 0 && prev[nb] && onb_prev[nb]) adj = true;
        }
        if (adj) cur[j] = true;
    }
    // (2) old boundary members below threshold
    for (int j = 0; j < m.n_triangles(); ++j)
        if (prev[j] && onb_prev[j] && alpha[j] < thr) cur[j] = false;
    // (3) repeat removal against the running set
    while (true) {
        std::vector<bool> onb = boundary_tris(cur);
        bool changed = false;
        for (int j = 0; j < m.n_triangles(); ++j)
            if (cur[j] && onb[j] && alpha[j] < thr) {
                cur[j] = false;
                changed = true;
            }
        if (!changed) break;
    }
    return cur;
}

} // namespace testsup
