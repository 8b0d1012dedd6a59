#pragma once

#include <cmath>
#include <vector>

#include "tumsim/domain.hpp"
#include "tumsim/errors.hpp"
#include "tumsim/fem.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/sparse.hpp"

namespace tumsim {

// Backward-Euler, mass-lumped P1 system (M + delta*eta*K + delta*R) c = M c_prev
// after Dirichlet elimination. NUM solves on the mask with c = 1 on its
// boundary; NLM solves on the whole box with the supplied-edge data c_b.
struct NutrientSystem {
    const TriMesh* mesh = nullptr;
    Variant variant = Variant::NUM;
    std::vector<int> dof;            // vertex -> unknown index, -1 otherwise
    std::vector<double> dirichlet;   // vertex -> boundary value (only where flagged)
    std::vector<bool> is_dirichlet;
    std::vector<bool> active;        // vertex belongs to the active region
    SparseMatrix matrix;
    std::vector<double> rhs;
    int warnings = 0;                // non-Delaunay bound violations
};

inline NutrientSystem assemble_nutrient(const DomainMask& mask, const CellField& alpha,
                                        const NodalScalarField& c_prev,
                                        const ModelParams& params) {
    const TriMesh& m = *mask.mesh;
    const int nv = m.n_vertices();
    const bool whole_box = params.variant == Variant::NLM;

    NutrientSystem sys;
    sys.mesh = &m;
    sys.variant = params.variant;
    sys.active.assign(nv, false);
    sys.is_dirichlet.assign(nv, false);
    sys.dirichlet.assign(nv, 0.0);

    std::vector<int> active_tris;
    for (int j = 0; j < m.n_triangles(); ++j)
        if (whole_box || mask.member[j]) active_tris.push_back(j);
    for (int j : active_tris)
        for (int v : m.triangles[j]) sys.active[v] = true;

    if (whole_box) {
        // Supplied edges x = -ell and y = -ell carry c_b = 1, the other two
        // sides 0; at mixed corners the supplied edge wins.
        const double tol = 1e-12 * params.ell;
        for (int e : m.boundary_edges) {
            for (int v : {m.edges[e].a, m.edges[e].b}) {
                const Vec2& p = m.vertices[v];
                sys.is_dirichlet[v] = true;
                bool supplied = std::abs(p.x + params.ell) < tol ||
                                std::abs(p.y + params.ell) < tol;
                sys.dirichlet[v] = supplied ? 1.0 : 0.0;
            }
        }
    } else {
        for (int e : mask.boundary) {
            sys.is_dirichlet[m.edges[e].a] = true;
            sys.is_dirichlet[m.edges[e].b] = true;
            sys.dirichlet[m.edges[e].a] = 1.0;
            sys.dirichlet[m.edges[e].b] = 1.0;
        }
    }

    sys.dof.assign(nv, -1);
    int n = 0;
    for (int v = 0; v < nv; ++v)
        if (sys.active[v] && !sys.is_dirichlet[v]) sys.dof[v] = n++;

    // Lumped mass and the lumped reaction integral of alpha over the active
    // incident triangles: sum a_K/3 and sum a_K alpha_K/3 per vertex.
    std::vector<double> w(nv, 0.0), wa(nv, 0.0);
    for (int j : active_tris)
        for (int v : m.triangles[j]) {
            w[v] += m.area[j] / 3.0;
            wa[v] += m.area[j] * alpha[j] / 3.0;
        }

    TripletBuffer buf(n, n);
    sys.rhs.assign(n, 0.0);

    for (int v = 0; v < nv; ++v) {
        int d = sys.dof[v];
        if (d < 0) continue;
        double reaction = params.delta * params.Q * wa[v] / (1.0 + params.Qhat * c_prev[v]);
        buf.add(d, d, w[v] + reaction);
        sys.rhs[d] += w[v] * c_prev[v];
    }

    for (int j : active_tris) {
        const auto gl = bary_gradients(m, j);
        const auto& t = m.triangles[j];
        for (int c = 0; c < 3; ++c) {
            int dc = sys.dof[t[c]];
            if (dc < 0) continue;
            for (int dcol = 0; dcol < 3; ++dcol) {
                double k = params.delta * params.eta * m.area[j] * dot(gl[c], gl[dcol]);
                int dd = sys.dof[t[dcol]];
                if (dd >= 0)
                    buf.add(dc, dd, k);
                else if (sys.is_dirichlet[t[dcol]])
                    sys.rhs[dc] -= k * sys.dirichlet[t[dcol]];
            }
        }
    }

    sys.matrix = finalize(buf);
    return sys;
}

// Solves and extends: Dirichlet values on their vertices, and for NUM the
// constant 1 on every vertex outside the mask. Verifies 0 <= c <= 1 on
// Delaunay meshes; counts a warning otherwise.
inline NodalScalarField solve_nutrient(NutrientSystem& sys) {
    const TriMesh& m = *sys.mesh;
    std::vector<double> x = direct_solve(sys.matrix, sys.rhs);

    NodalScalarField c(m, 1.0);
    for (int v = 0; v < m.n_vertices(); ++v) {
        if (sys.dof[v] >= 0)
            c[v] = x[sys.dof[v]];
        else if (sys.is_dirichlet[v])
            c[v] = sys.dirichlet[v];
        else if (sys.variant == Variant::NLM)
            c[v] = 0.0;  // inactive vertex of a whole-box solve: unreachable
        // NUM keeps the extension value 1 outside the mask.
    }

    double lo = 0.0, hi = 1.0;
    for (int v = 0; v < m.n_vertices(); ++v) {
        lo = std::min(lo, c[v]);
        hi = std::max(hi, c[v]);
    }
    if (lo < -1e-9 || hi > 1.0 + 1e-9) {
        if (m.is_delaunay)
            throw SolverError("nutrient out of [0,1] on a Delaunay mesh");
        ++sys.warnings;
    }
    return c;
}

} // namespace tumsim
