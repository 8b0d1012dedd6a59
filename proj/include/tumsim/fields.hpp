#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

enum class Variant { NUM, NLM };

// All dimensionless constants of the model plus run controls. Defaults are
// the shared experiment values; Q, eta, T_final and c0 switch with the
// variant (see Config).
struct ModelParams {
    double s1 = 10.0;
    double s2 = 0.5;
    double s3 = 0.5;
    double s4 = 10.0;
    double Q = 0.5;
    double Qhat = 0.0;
    double eta = 1.0;
    double k = 1.0;
    double mu = 1.0;
    double lambda = -2.0 / 3.0;
    double alpha_star = 0.8;
    double alpha_thr = 0.01;
    double delta = 0.1;
    double T_final = 20.0;
    double ell = 5.0;
    Variant variant = Variant::NUM;
    double alpha0_value = 0.8;
    double c0_value = 1.0;
    double cfl_limit = 0.5;    // C_cfl
    double icfl_limit = 0.0;   // C_icfl; 0 disables the inverse check

    bool operator==(const ModelParams&) const = default;

    void validate() const {
        if (s1 <= 0 || s2 <= 0 || s3 <= 0 || s4 <= 0)
            throw ConfigError("rate constants s1..s4 must be positive");
        if (mu <= 0) throw ConfigError("mu must be positive");
        if (eta <= 0) throw ConfigError("eta must be positive");
        if (k <= 0) throw ConfigError("k must be positive");
        if (Q <= 0) throw ConfigError("Q must be positive");
        if (Qhat < 0) throw ConfigError("Qhat must be >= 0");
        if (!(alpha_thr > 0 && alpha_thr < 1))
            throw ConfigError("alpha_thr must lie in (0,1)");
        if (!(alpha_star > 0 && alpha_star < 1))
            throw ConfigError("alpha_star must lie in (0,1)");
        if (delta <= 0) throw ConfigError("delta must be positive");
        if (!(c0_value >= 0 && c0_value <= 1))
            throw ConfigError("c0 must lie in [0,1]");
        if (ell <= 0) throw ConfigError("ell must be positive");
        if (T_final < 0) throw ConfigError("t_final must be >= 0");
        if (alpha0_value < 0) throw ConfigError("alpha0 must be >= 0");
    }
};

// Piecewise-constant scalar per triangle (houses alpha).
struct CellField {
    const TriMesh* mesh = nullptr;
    std::vector<double> values;

    CellField() = default;
    CellField(const TriMesh& m, double v = 0.0)
        : mesh(&m), values(m.n_triangles(), v) {}

    double& operator[](int j) { return values[j]; }
    double operator[](int j) const { return values[j]; }
    int size() const { return (int)values.size(); }
};

// P1 scalar at vertices (c and p).
struct NodalScalarField {
    const TriMesh* mesh = nullptr;
    std::vector<double> values;

    NodalScalarField() = default;
    NodalScalarField(const TriMesh& m, double v = 0.0)
        : mesh(&m), values(m.n_vertices(), v) {}

    double& operator[](int v) { return values[v]; }
    double operator[](int v) const { return values[v]; }
    int size() const { return (int)values.size(); }
};

// P2 vector field: one 2-vector per P2 node, vertices first then edge
// midpoints. Zero on every node outside the active domain.
struct TH2VectorField {
    const TriMesh* mesh = nullptr;
    std::vector<Vec2> values;

    TH2VectorField() = default;
    explicit TH2VectorField(const TriMesh& m)
        : mesh(&m), values(m.n_vertices() + m.n_edges(), Vec2{0.0, 0.0}) {}

    Vec2& at_vertex(int v) { return values[v]; }
    Vec2& at_edge(int e) { return values[mesh->n_vertices() + e]; }
    Vec2 at_vertex(int v) const { return values[v]; }
    Vec2 at_edge(int e) const { return values[mesh->n_vertices() + e]; }

    // u_h at the midpoint of edge e: the P2 midpoint dof (vertex bases of
    // the quadratic element vanish at edge midpoints).
    Vec2 at_midpoint(int e) const { return at_edge(e); }

    double max_norm() const {
        double m = 0.0;
        for (const Vec2& v : values) m = std::max(m, norm(v));
        return m;
    }
};

// b(c) = (1 + s1)c / (1 + s1 c): birth rate, monotone, b(1) = 1.
inline double birth_rate(double c, const ModelParams& p) {
    return (1.0 + p.s1) * c / (1.0 + p.s1 * c);
}

// d(c) = (s2 + s3 c) / (1 + s4 c): death rate.
inline double death_rate(double c, const ModelParams& p) {
    return (p.s2 + p.s3 * c) / (1.0 + p.s4 * c);
}

// f(alpha, c) = (1 - alpha) b(c) - d(c): net volumetric growth rate.
inline double net_growth(double alpha, double c, const ModelParams& p) {
    return (1.0 - alpha) * birth_rate(c, p) - death_rate(c, p);
}

// Interior volume fractions can approach 0 and 1; coefficients with
// 1/(1-alpha) or 1/alpha factors are evaluated on the clamped value.
inline double clamp_alpha(double alpha) {
    return std::min(std::max(alpha, 1e-6), 0.999);
}

// H(alpha) = alpha (alpha - alpha*)^+ / (1 - alpha)^2: repulsive stress
// potential, zero up to the onset alpha*.
inline double stress_potential(double alpha, const ModelParams& p) {
    double a = clamp_alpha(alpha);
    double plus = std::max(0.0, a - p.alpha_star);
    if (plus == 0.0) return 0.0;
    double om = 1.0 - a;
    return a * plus / (om * om);
}

// Pressure-equation mobility (1 - alpha) / (k alpha), clamped like H.
inline double pressure_mobility(double alpha, const ModelParams& p) {
    double a = clamp_alpha(alpha);
    return (1.0 - a) / (p.k * a);
}

// {{g(c)}}_Kj: g applied at the vertex values of triangle j, then averaged.
template <typename G>
inline double discrete_average(const NodalScalarField& nodal, G&& g, int triangle) {
    const auto& t = nodal.mesh->triangles[triangle];
    return (g(nodal[t[0]]) + g(nodal[t[1]]) + g(nodal[t[2]])) / 3.0;
}

} // namespace tumsim
