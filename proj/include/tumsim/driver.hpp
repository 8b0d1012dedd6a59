#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tumsim/domain.hpp"
#include "tumsim/errors.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/mechanics.hpp"
#include "tumsim/nutrient.hpp"
#include "tumsim/shapes.hpp"
#include "tumsim/transport.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

struct TimeSeriesRow {
    double t = 0.0;
    double radius = 0.0;
    double area = 0.0;
    double cell_volume = 0.0;  // sum of a_j alpha_j over the whole box
    int components = 0;
    double max_speed = 0.0;
    double min_c = 0.0;
    double max_c = 0.0;
};

// The 4-tuple (alpha, u, p, c) plus the discrete domain at one time level.
struct SimState {
    int step_index = 0;
    double time = 0.0;
    CellField alpha;
    DomainMask mask;
    TH2VectorField u;
    NodalScalarField p;
    NodalScalarField c;
    int cfl_warnings = 0;
    int clamp_warnings = 0;
    int nutrient_warnings = 0;
    bool extinct = false;
};

inline TimeSeriesRow diagnostics(const SimState& s) {
    const TriMesh& m = *s.alpha.mesh;
    TimeSeriesRow row;
    row.t = s.time;
    row.radius = s.mask.radius;
    row.area = s.mask.area;
    row.components = s.mask.n_components;
    for (int j = 0; j < m.n_triangles(); ++j) row.cell_volume += m.area[j] * s.alpha[j];
    row.max_speed = s.u.max_norm();
    row.min_c = s.c[0];
    row.max_c = s.c[0];
    for (double v : s.c.values) {
        row.min_c = std::min(row.min_c, v);
        row.max_c = std::max(row.max_c, v);
    }
    return row;
}

// alpha = alpha0 on the geometric initial mask, nutrient per variant, then
// one mechanics solve for (u^0, p^0).
inline SimState initialize(const TriMesh& mesh, const ShapeSpec& shape,
                           const ModelParams& params) {
    params.validate();
    SimState s;
    s.mask = initial_mask(mesh, shape);
    s.alpha = CellField(mesh, 0.0);
    for (int j = 0; j < mesh.n_triangles(); ++j)
        if (s.mask.member[j]) s.alpha[j] = params.alpha0_value;

    if (params.variant == Variant::NUM) {
        s.c = NodalScalarField(mesh, 1.0);
        std::vector<bool> in_mask(mesh.n_vertices(), false);
        for (int j = 0; j < mesh.n_triangles(); ++j)
            if (s.mask.member[j])
                for (int v : mesh.triangles[j]) in_mask[v] = true;
        for (int v = 0; v < mesh.n_vertices(); ++v)
            if (in_mask[v]) s.c[v] = params.c0_value;
    } else {
        s.c = NodalScalarField(mesh, 0.0);
    }

    THSpace space = build_space(s.mask, mesh);
    SaddleSystem sys = assemble(space, s.alpha, params);
    std::tie(s.u, s.p) = solve_up(sys, space);
    return s;
}

namespace detail {

// Worst per-triangle Courant number delta * sum(l |u.n|) / a of the lagged
// velocity: the explicit update is stable only below ~1.
inline double transport_courant(const TH2VectorField& u, const ModelParams& params) {
    const TriMesh& m = *u.mesh;
    double worst = 0.0;
    for (int j = 0; j < m.n_triangles(); ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            int e = m.tri_edges[j][k];
            s += m.edges[e].length * std::abs(dot(u.at_midpoint(e), m.edges[e].normal));
        }
        worst = std::max(worst, params.delta * s / m.area[j]);
    }
    return worst;
}

} // namespace detail

// One step of the coupled scheme: transport -> domain update -> mechanics
// -> nutrient, all lagged exactly as the scheme indexes them. When the
// lagged velocity violates the transport CFL bound, the finite-volume
// update is sub-cycled within the step (same u^{n-1} and c^{n-1}); with the
// bound satisfied this is the plain single update.
inline SimState step(const SimState& prev, const ModelParams& params) {
    const TriMesh& mesh = *prev.alpha.mesh;
    SimState s;
    s.step_index = prev.step_index + 1;
    s.time = s.step_index * params.delta;
    s.cfl_warnings = prev.cfl_warnings;
    s.clamp_warnings = prev.clamp_warnings;
    s.nutrient_warnings = prev.nutrient_warnings;

    CflReport cfl = cfl_report(prev.u, params, mesh);
    if (!cfl.cfl_ok || !cfl.icfl_ok) ++s.cfl_warnings;

    int subcycles = std::min(
        256, std::max(1, (int)std::ceil(detail::transport_courant(prev.u, params) / 0.9)));
    if (subcycles == 1) {
        FluxTable fluxes = compute_fluxes(prev.alpha, prev.u);
        s.alpha = advance_alpha(prev.alpha, fluxes, prev.c, params, &s.clamp_warnings);
    } else {
        ModelParams sub = params;
        sub.delta = params.delta / subcycles;
        s.alpha = prev.alpha;
        for (int i = 0; i < subcycles; ++i) {
            FluxTable fluxes = compute_fluxes(s.alpha, prev.u);
            s.alpha = advance_alpha(s.alpha, fluxes, prev.c, sub, &s.clamp_warnings);
        }
    }

    s.mask = update_mask(prev.mask, s.alpha, params);
    if (s.mask.empty()) {
        s.extinct = true;
        s.u = TH2VectorField(mesh);
        s.p = NodalScalarField(mesh, 0.0);
        s.c = prev.c;
        return s;
    }

    try {
        THSpace space = build_space(s.mask, mesh);
        SaddleSystem sys = assemble(space, s.alpha, params);
        std::tie(s.u, s.p) = solve_up(sys, space);
    } catch (const SolverError& e) {
        throw SolverError("mechanics failed at step " + std::to_string(s.step_index) +
                          ": " + e.what());
    }

    try {
        NutrientSystem nsys = assemble_nutrient(s.mask, s.alpha, prev.c, params);
        s.c = solve_nutrient(nsys);
        s.nutrient_warnings += nsys.warnings;
    } catch (const SolverError& e) {
        throw SolverError("nutrient failed at step " + std::to_string(s.step_index) +
                          ": " + e.what());
    }
    return s;
}

struct RunResult {
    std::vector<TimeSeriesRow> series;               // one row per level incl. t = 0
    std::vector<std::pair<int, SimState>> snapshots; // (step, state) at the cadence
    SimState final_state;
    bool extinct = false;
    std::vector<std::string> warnings;
};

// Executes floor(T/delta) steps. Deterministic: same mesh, shape and
// parameters give identical output.
inline RunResult run(const TriMesh& mesh, const ShapeSpec& shape,
                     const ModelParams& params, int snapshot_every = 10) {
    RunResult out;
    int n_steps = (int)std::floor(params.T_final / params.delta + 1e-9);
    if (std::abs(n_steps * params.delta - params.T_final) > 1e-9 * std::max(1.0, params.T_final))
        out.warnings.push_back("t_final is not a multiple of delta; truncated to " +
                               std::to_string(n_steps * params.delta));

    SimState state = initialize(mesh, shape, params);
    out.series.push_back(diagnostics(state));
    if (snapshot_every > 0) out.snapshots.push_back({0, state});

    for (int n = 1; n <= n_steps; ++n) {
        state = step(state, params);
        if (state.extinct) {
            out.extinct = true;
            out.warnings.push_back("tumour extinct at step " + std::to_string(n));
            break;
        }
        out.series.push_back(diagnostics(state));
        if (snapshot_every > 0 && n % snapshot_every == 0)
            out.snapshots.push_back({n, state});
    }
    out.final_state = std::move(state);
    return out;
}

} // namespace tumsim
