#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/geometry.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

// Uniform right-triangle grid on (-ell, ell)^2, n x n squares split along
// the same diagonal. The structured mesh from which the locking experiments
// start; also the base mesh for jitter + convergence studies.
inline TriMesh structured_mesh(double ell, int n) {
    if (n < 1) throw ConfigError("structured mesh needs n >= 1");
    std::vector<Vec2> vs;
    vs.reserve((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            double x = -ell + 2.0 * ell * i / n;
            double y = -ell + 2.0 * ell * j / n;
            if (i == n) x = ell;
            if (j == n) y = ell;
            vs.push_back({x, y});
        }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> ts;
    ts.reserve(2 * n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            ts.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            ts.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return build_adjacency(std::move(vs), std::move(ts));
}

// Mesh aligned with concentric circles centred at the origin: a central fan,
// circular rings of spacing dr out to radius r_circ, then rings blending
// into the square boundary so the box is covered exactly. n_theta must be a
// multiple of 8 so the blend rings hit the box corners.
inline TriMesh radial_mesh(double ell, int n_theta = 64, double dr = 0.125,
                           double r_circ = 0.0, int n_blend = 6) {
    if (n_theta < 8 || n_theta % 8 != 0)
        throw ConfigError("radial mesh needs n_theta a positive multiple of 8");
    if (r_circ <= 0.0) r_circ = 0.8 * ell;
    int n_rings = (int)std::llround(r_circ / dr);
    if (n_rings < 2) throw ConfigError("radial mesh needs r_circ >= 2*dr");

    std::vector<Vec2> vs;
    vs.push_back({0.0, 0.0});

    auto square_hit = [&](double c, double s) -> Vec2 {
        // Intersection of the ray (c,s) with the square |x| v |y| = ell,
        // snapped onto the exact side lines.
        Vec2 p;
        if (std::abs(c) >= std::abs(s)) {
            p.x = c > 0 ? ell : -ell;
            p.y = ell * s / std::abs(c);
        } else {
            p.y = s > 0 ? ell : -ell;
            p.x = ell * c / std::abs(s);
        }
        if (std::abs(std::abs(p.x) - ell) < 1e-9 * ell) p.x = p.x > 0 ? ell : -ell;
        if (std::abs(std::abs(p.y) - ell) < 1e-9 * ell) p.y = p.y > 0 ? ell : -ell;
        return p;
    };

    std::vector<double> cth(n_theta), sth(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double th = 2.0 * M_PI * i / n_theta;
        cth[i] = std::cos(th);
        sth[i] = std::sin(th);
    }

    int total_rings = n_rings + n_blend;
    for (int k = 1; k <= total_rings; ++k)
        for (int i = 0; i < n_theta; ++i) {
            if (k <= n_rings) {
                double r = k * dr;
                vs.push_back({r * cth[i], r * sth[i]});
            } else {
                double s = (double)(k - n_rings) / n_blend;
                Vec2 hit = square_hit(cth[i], sth[i]);
                Vec2 circ{r_circ * cth[i], r_circ * sth[i]};
                vs.push_back(s >= 1.0 ? hit : circ + s * (hit - circ));
            }
        }

    auto ring_id = [&](int k, int i) { return 1 + (k - 1) * n_theta + (i % n_theta); };

    std::vector<std::array<int, 3>> ts;
    for (int i = 0; i < n_theta; ++i)
        ts.push_back({0, ring_id(1, i), ring_id(1, i + 1)});
    for (int k = 1; k < total_rings; ++k)
        for (int i = 0; i < n_theta; ++i) {
            int a = ring_id(k, i), b = ring_id(k, i + 1);
            int c = ring_id(k + 1, i), d = ring_id(k + 1, i + 1);
            ts.push_back({a, d, b});
            ts.push_back({a, c, d});
        }
    return build_adjacency(std::move(vs), std::move(ts));
}

} // namespace tumsim
