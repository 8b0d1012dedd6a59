#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tumsim/fields.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

// Upwind flux F_ji per edge, stored from the owner's side:
// F = (u.n)^+ alpha_owner - (u.n)^- alpha_neighbour, with the exterior value
// taken as zero across the box boundary. Antisymmetric when queried from the
// neighbour's side.
struct FluxTable {
    const TriMesh* mesh = nullptr;
    std::vector<double> from_owner;

    double from(int edge, int tri) const {
        const auto& e = mesh->edges[edge];
        return tri == e.owner ? from_owner[edge] : -from_owner[edge];
    }
};

struct CflReport {
    double q_max = 0.0;   // max ||u|| * delta / a_min
    double q_min = 0.0;   // max ||u|| * delta / a_max
    double cfl_limit = 0.5;
    double icfl_limit = 0.0;
    bool cfl_ok = true;
    bool icfl_ok = true;
};

inline FluxTable compute_fluxes(const CellField& alpha, const TH2VectorField& u) {
    const TriMesh& m = *alpha.mesh;
    FluxTable f;
    f.mesh = &m;
    f.from_owner.assign(m.n_edges(), 0.0);
    for (int e = 0; e < m.n_edges(); ++e) {
        const auto& ed = m.edges[e];
        double un = dot(u.at_midpoint(e), ed.normal);
        double a_out = ed.neighbour >= 0 ? alpha[ed.neighbour] : 0.0;
        f.from_owner[e] = std::max(un, 0.0) * alpha[ed.owner] + std::min(un, 0.0) * a_out;
    }
    return f;
}

// One finite-volume step for the volume fraction. Flux explicit, birth
// explicit, death semi-implicit; the implicit equation
//   a + delta*d*(a - thr)^+ = R
// is piecewise linear with positive slope, so the branch follows from
// comparing R with the threshold.
inline CellField advance_alpha(const CellField& alpha_prev, const FluxTable& fluxes,
                               const NodalScalarField& c_prev, const ModelParams& p,
                               int* clamp_warnings = nullptr) {
    const TriMesh& m = *alpha_prev.mesh;
    CellField next(m);
    const double thr = p.alpha_thr;

    for (int j = 0; j < m.n_triangles(); ++j) {
        double flux_sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            int e = m.tri_edges[j][k];
            flux_sum += m.edges[e].length * fluxes.from(e, j);
        }
        double b_j = discrete_average(
            c_prev, [&](double c) { return birth_rate(c, p); }, j);
        double d_j = discrete_average(
            c_prev, [&](double c) { return death_rate(c, p); }, j);

        double a_old = alpha_prev[j];
        double R = a_old - p.delta / m.area[j] * flux_sum +
                   p.delta * std::max(0.0, a_old - thr) * (1.0 - a_old) * b_j;

        double a_new = (R <= thr) ? R : (R + p.delta * d_j * thr) / (1.0 + p.delta * d_j);
        if (a_new < 0.0) {
            a_new = 0.0;
            if (clamp_warnings) ++*clamp_warnings;
        }
        next[j] = a_new;
    }
    return next;
}

// The CFL / inverse-CFL diagnostic quantities, verbatim: velocity is
// measured over the active P2 nodes, areas over the whole mesh.
inline CflReport cfl_report(const TH2VectorField& u, const ModelParams& p,
                            const TriMesh& mesh) {
    CflReport r;
    r.cfl_limit = p.cfl_limit;
    r.icfl_limit = p.icfl_limit;
    double umax = u.max_norm();
    double amin = mesh.min_area();
    double amax = mesh.max_area();
    r.q_max = amin > 0.0 ? umax * p.delta / amin : 0.0;
    r.q_min = amax > 0.0 ? umax * p.delta / amax : 0.0;
    r.cfl_ok = r.q_max <= r.cfl_limit;
    r.icfl_ok = r.icfl_limit <= 0.0 || r.q_min >= r.icfl_limit;
    return r;
}

} // namespace tumsim
