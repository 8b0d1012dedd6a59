#pragma once

#include <array>

#include "tumsim/geometry.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

// Degree-4 six-point triangle rule (barycentric points, weights sum to 1).
struct TriQuadrature {
    static constexpr int n = 6;
    std::array<std::array<double, 3>, 6> bary;
    std::array<double, 6> weight;

    TriQuadrature() {
        const double a1 = 0.445948490915965, b1 = 0.108103018168070;
        const double a2 = 0.091576213509771, b2 = 0.816847572980459;
        const double w1 = 0.223381589678011, w2 = 0.109951743655322;
        bary = {{{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                 {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}}};
        weight = {w1, w1, w1, w2, w2, w2};
    }
};

inline const TriQuadrature& tri_quadrature() {
    static const TriQuadrature q;
    return q;
}

// Constant barycentric gradients of a triangle, grad[i] = grad(lambda_i).
inline std::array<Vec2, 3> bary_gradients(const TriMesh& mesh, int j) {
    const auto& t = mesh.triangles[j];
    const Vec2 &p0 = mesh.vertices[t[0]], &p1 = mesh.vertices[t[1]], &p2 = mesh.vertices[t[2]];
    double inv2A = 1.0 / (2.0 * mesh.area[j]);
    return {perp(p2 - p1) * inv2A, perp(p0 - p2) * inv2A, perp(p1 - p0) * inv2A};
}

// Quadratic Lagrange basis at barycentric coordinates: values and gradients
// for the 6 local nodes (3 vertices, then midpoint k opposite vertex k).
inline void p2_basis(const std::array<double, 3>& l, const std::array<Vec2, 3>& gl,
                     std::array<double, 6>& N, std::array<Vec2, 6>& gN) {
    for (int i = 0; i < 3; ++i) {
        N[i] = l[i] * (2.0 * l[i] - 1.0);
        gN[i] = gl[i] * (4.0 * l[i] - 1.0);
    }
    for (int k = 0; k < 3; ++k) {
        int i1 = (k + 1) % 3, i2 = (k + 2) % 3;
        N[3 + k] = 4.0 * l[i1] * l[i2];
        gN[3 + k] = 4.0 * (gl[i2] * l[i1] + gl[i1] * l[i2]);
    }
}

// Global P2 node id: vertices first, then one node per edge midpoint.
inline int p2_node(const TriMesh& mesh, int tri, int local) {
    const auto& t = mesh.triangles[tri];
    if (local < 3) return t[local];
    return mesh.n_vertices() + mesh.tri_edges[tri][local - 3];
}

} // namespace tumsim
