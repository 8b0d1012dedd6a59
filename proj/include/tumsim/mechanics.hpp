#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "tumsim/domain.hpp"
#include "tumsim/errors.hpp"
#include "tumsim/fem.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/sparse.hpp"

namespace tumsim {

enum class NodeConstraint { Free, Tangent, Pinned };

// How the tangential-zero condition is realised at boundary vertices where
// the two incident boundary edges are not collinear. PinCorners is the
// literal reading of u.tau = 0 on a polygon; AverageNormals constrains the
// vertex to move along the averaged outward normal, the standard slip
// treatment on faceted boundaries (a literal pin locks the staircase
// boundary of a triangle mask almost completely).
enum class TangentRule { AverageNormals, PinCorners };

// Taylor-Hood P2-P1 space on the active triangles of a mask. Velocity nodes
// on the mask boundary are rotated into (normal, tangent) pairs and the
// tangent dof eliminated; nodes where two boundary tangents disagree are
// pinned entirely. Pressure carries a homogeneous Dirichlet condition on
// every boundary vertex.
struct THSpace {
    const TriMesh* mesh = nullptr;
    const DomainMask* mask = nullptr;
    std::vector<int> active_tris;

    std::vector<int> p2_index;             // global p2 node -> local, -1 inactive
    std::vector<int> p2_nodes;             // local -> global p2 node
    std::vector<NodeConstraint> constraint;  // per local p2 node
    std::vector<Vec2> normal;              // unit normal for Tangent nodes
    std::vector<int> vel_dof;              // local node -> first dof, -1 pinned
    std::vector<int> pressure_dof;         // vertex -> dof, -1 Dirichlet/inactive
    int n_vel_dofs = 0;
    int n_pressure_dofs = 0;

    int n_dofs() const { return n_vel_dofs + n_pressure_dofs; }
};

// Block system [[A1, -B^T], [B, A2]] with velocity dofs first; rhs carries
// the H(alpha) load in the velocity rows.
struct SaddleSystem {
    int n_vel_dofs = 0;
    int n_pressure_dofs = 0;
    SparseMatrix matrix;
    std::vector<double> rhs;
};

namespace detail {

// Constraint classification per active P2 node, before dof numbering.
inline void classify_constraints(const DomainMask& mask, THSpace& space,
                                 TangentRule rule) {
    const TriMesh& m = *mask.mesh;
    const int nv = m.n_vertices();

    // Collect outward boundary normals per vertex; midpoint nodes of
    // boundary edges carry exactly one.
    std::vector<std::vector<Vec2>> vertex_normals(nv);
    std::vector<char> is_boundary_edge(m.n_edges(), 0);
    for (int e : mask.boundary) {
        const auto& ed = m.edges[e];
        Vec2 n = mask.member[ed.owner] ? ed.normal : Vec2{0, 0} - ed.normal;
        vertex_normals[ed.a].push_back(n);
        vertex_normals[ed.b].push_back(n);
        is_boundary_edge[e] = 1;
    }

    for (int a = 0; a < (int)space.p2_nodes.size(); ++a) {
        int g = space.p2_nodes[a];
        if (g < nv) {
            const auto& ns = vertex_normals[g];
            if (ns.empty()) {
                space.constraint[a] = NodeConstraint::Free;
                continue;
            }
            bool collinear = true;
            for (std::size_t i = 1; i < ns.size(); ++i)
                if (std::abs(cross(ns[0], ns[i])) > 1e-8) collinear = false;
            if (collinear) {
                space.constraint[a] = NodeConstraint::Tangent;
                space.normal[a] = ns[0];
                continue;
            }
            if (rule == TangentRule::PinCorners || ns.size() > 2) {
                space.constraint[a] = NodeConstraint::Pinned;
                continue;
            }
            Vec2 avg = ns[0] + ns[1];
            double len = norm(avg);
            if (len < 0.5) {  // nearly opposite normals: a pinch, pin it
                space.constraint[a] = NodeConstraint::Pinned;
            } else {
                space.constraint[a] = NodeConstraint::Tangent;
                space.normal[a] = avg / len;
            }
        } else {
            int e = g - nv;
            if (is_boundary_edge[e]) {
                const auto& ed = m.edges[e];
                space.constraint[a] = NodeConstraint::Tangent;
                space.normal[a] = ed.normal;
            } else {
                space.constraint[a] = NodeConstraint::Free;
            }
        }
    }
}

} // namespace detail

inline THSpace build_space(const DomainMask& mask, const TriMesh& mesh,
                           TangentRule rule = TangentRule::AverageNormals) {
    if (mask.empty()) throw SolverError("build_space on an empty mask");
    THSpace s;
    s.mesh = &mesh;
    s.mask = &mask;

    for (int j = 0; j < mesh.n_triangles(); ++j)
        if (mask.member[j]) s.active_tris.push_back(j);

    const int n_p2 = mesh.n_vertices() + mesh.n_edges();
    s.p2_index.assign(n_p2, -1);
    for (int j : s.active_tris)
        for (int a = 0; a < 6; ++a) {
            int g = p2_node(mesh, j, a);
            if (s.p2_index[g] < 0) {
                s.p2_index[g] = (int)s.p2_nodes.size();
                s.p2_nodes.push_back(g);
            }
        }

    s.constraint.assign(s.p2_nodes.size(), NodeConstraint::Free);
    s.normal.assign(s.p2_nodes.size(), Vec2{0.0, 0.0});
    detail::classify_constraints(mask, s, rule);

    s.vel_dof.assign(s.p2_nodes.size(), -1);
    for (std::size_t a = 0; a < s.p2_nodes.size(); ++a) {
        switch (s.constraint[a]) {
        case NodeConstraint::Free:
            s.vel_dof[a] = s.n_vel_dofs;
            s.n_vel_dofs += 2;
            break;
        case NodeConstraint::Tangent:
            s.vel_dof[a] = s.n_vel_dofs;
            s.n_vel_dofs += 1;
            break;
        case NodeConstraint::Pinned:
            break;
        }
    }

    // Pressure dofs: active vertices that are not on the mask boundary.
    std::vector<bool> dirichlet(mesh.n_vertices(), false);
    for (int e : mask.boundary) {
        dirichlet[mesh.edges[e].a] = true;
        dirichlet[mesh.edges[e].b] = true;
    }
    s.pressure_dof.assign(mesh.n_vertices(), -1);
    for (int j : s.active_tris)
        for (int v : mesh.triangles[j])
            if (!dirichlet[v] && s.pressure_dof[v] < 0)
                s.pressure_dof[v] = s.n_pressure_dofs++;

    if (s.n_pressure_dofs == 0)
        throw SolverError("degenerate domain: no interior pressure dofs");
    return s;
}

// Directions of the free dofs of a local node: Free nodes keep the xy pair,
// Tangent nodes keep the single normal component.
inline int node_directions(const THSpace& s, int a, std::array<Vec2, 2>& dirs,
                           std::array<int, 2>& dof) {
    switch (s.constraint[a]) {
    case NodeConstraint::Free:
        dirs = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
        dof = {s.vel_dof[a], s.vel_dof[a] + 1};
        return 2;
    case NodeConstraint::Tangent:
        dirs = {s.normal[a], Vec2{}};
        dof = {s.vel_dof[a], -1};
        return 1;
    case NodeConstraint::Pinned:
        return 0;
    }
    return 0;
}

// Element integrals are exact for the polynomial integrands under the
// degree-4 rule: alpha is constant per triangle, so a1 integrands are
// quadratic, a2 constant, a3 quadratic.
inline SaddleSystem assemble(const THSpace& space, const CellField& alpha,
                             const ModelParams& params) {
    const TriMesh& mesh = *space.mesh;
    const auto& quad = tri_quadrature();

    SaddleSystem sys;
    sys.n_vel_dofs = space.n_vel_dofs;
    sys.n_pressure_dofs = space.n_pressure_dofs;
    const int n = space.n_dofs();
    TripletBuffer buf(n, n);
    sys.rhs.assign(n, 0.0);
    const int poff = space.n_vel_dofs;

    for (int j : space.active_tris) {
        const double a_cell = clamp_alpha(alpha[j]);
        const double mobility = pressure_mobility(alpha[j], params);
        const double load = stress_potential(alpha[j], params);
        const auto gl = bary_gradients(mesh, j);
        const double area = mesh.area[j];

        double K[12][12] = {};
        double B[3][12] = {};
        double A2[3][3] = {};
        double F[12] = {};

        for (int q = 0; q < TriQuadrature::n; ++q) {
            std::array<double, 6> N;
            std::array<Vec2, 6> gN;
            p2_basis(quad.bary[q], gl, N, gN);
            const double w = quad.weight[q] * area;

            for (int a = 0; a < 6; ++a) {
                const Vec2 ga = gN[a];
                for (int b = 0; b < 6; ++b) {
                    const Vec2 gb = gN[b];
                    double mu2 = 2.0 * params.mu;
                    K[2 * a][2 * b] += w * a_cell *
                        (mu2 * (ga.x * gb.x + 0.5 * ga.y * gb.y) + params.lambda * ga.x * gb.x);
                    K[2 * a][2 * b + 1] += w * a_cell *
                        (mu2 * 0.5 * ga.y * gb.x + params.lambda * ga.x * gb.y);
                    K[2 * a + 1][2 * b] += w * a_cell *
                        (mu2 * 0.5 * ga.x * gb.y + params.lambda * ga.y * gb.x);
                    K[2 * a + 1][2 * b + 1] += w * a_cell *
                        (mu2 * (ga.y * gb.y + 0.5 * ga.x * gb.x) + params.lambda * ga.y * gb.y);
                }
                // lambda_c value at this quadrature point is bary[q][c]
                for (int c = 0; c < 3; ++c) {
                    B[c][2 * a] += w * quad.bary[q][c] * ga.x;
                    B[c][2 * a + 1] += w * quad.bary[q][c] * ga.y;
                }
                F[2 * a] += w * load * ga.x;
                F[2 * a + 1] += w * load * ga.y;
            }
        }
        for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d)
                A2[c][d] = area * mobility * dot(gl[c], gl[d]);

        // Scatter with per-node direction transforms.
        std::array<int, 6> loc;
        for (int a = 0; a < 6; ++a) loc[a] = space.p2_index[p2_node(mesh, j, a)];

        for (int a = 0; a < 6; ++a) {
            std::array<Vec2, 2> da;
            std::array<int, 2> ia;
            int na = node_directions(space, loc[a], da, ia);
            for (int p = 0; p < na; ++p) {
                const Vec2 ea = da[p];
                sys.rhs[ia[p]] += ea.x * F[2 * a] + ea.y * F[2 * a + 1];
                for (int b = 0; b < 6; ++b) {
                    std::array<Vec2, 2> db;
                    std::array<int, 2> ib;
                    int nb = node_directions(space, loc[b], db, ib);
                    for (int r = 0; r < nb; ++r) {
                        const Vec2 eb = db[r];
                        double v = ea.x * (K[2 * a][2 * b] * eb.x + K[2 * a][2 * b + 1] * eb.y) +
                                   ea.y * (K[2 * a + 1][2 * b] * eb.x + K[2 * a + 1][2 * b + 1] * eb.y);
                        buf.add(ia[p], ib[r], v);
                    }
                }
                for (int c = 0; c < 3; ++c) {
                    int pd = space.pressure_dof[mesh.triangles[j][c]];
                    if (pd < 0) continue;
                    double v = ea.x * B[c][2 * a] + ea.y * B[c][2 * a + 1];
                    buf.add(ia[p], poff + pd, -v);
                    buf.add(poff + pd, ia[p], v);
                }
            }
        }
        for (int c = 0; c < 3; ++c) {
            int pc = space.pressure_dof[mesh.triangles[j][c]];
            if (pc < 0) continue;
            for (int d = 0; d < 3; ++d) {
                int pd = space.pressure_dof[mesh.triangles[j][d]];
                if (pd < 0) continue;
                buf.add(poff + pc, poff + pd, A2[c][d]);
            }
        }
    }

    sys.matrix = finalize(buf);
    return sys;
}

// Solves the saddle system and expands to full fields: zero on constrained
// tangential components, pinned nodes, Dirichlet vertices and everything
// outside the mask.
inline std::pair<TH2VectorField, NodalScalarField> solve_up(const SaddleSystem& sys,
                                                            const THSpace& space) {
    std::vector<double> x = direct_solve(sys.matrix, sys.rhs);

    TH2VectorField u(*space.mesh);
    NodalScalarField p(*space.mesh, 0.0);

    for (std::size_t a = 0; a < space.p2_nodes.size(); ++a) {
        Vec2 val{0.0, 0.0};
        switch (space.constraint[a]) {
        case NodeConstraint::Free:
            val = {x[space.vel_dof[a]], x[space.vel_dof[a] + 1]};
            break;
        case NodeConstraint::Tangent:
            val = space.normal[a] * x[space.vel_dof[a]];
            break;
        case NodeConstraint::Pinned:
            break;
        }
        u.values[space.p2_nodes[a]] = val;
    }
    for (int v = 0; v < space.mesh->n_vertices(); ++v)
        if (space.pressure_dof[v] >= 0)
            p[v] = x[sys.n_vel_dofs + space.pressure_dof[v]];
    return {std::move(u), std::move(p)};
}

} // namespace tumsim
