#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "tumsim/tumsim.hpp"

using namespace tumsim;
using Catch::Approx;

namespace {

DomainMask full_mask(const TriMesh& mesh) {
    DomainMask mask;
    mask.mesh = &mesh;
    mask.member.assign(mesh.n_triangles(), true);
    tumsim::detail::finish_mask(mask);
    return mask;
}

} // namespace

TEST_CASE("hand-assembled single interior vertex patch", "[nutrient]") {
    // 4-triangle fan, centre vertex is the only unknown
    TriMesh mesh = build_adjacency({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}},
                                   {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    p.variant = Variant::NUM;
    p.Q = 0.5;
    p.eta = 2.0;
    p.delta = 0.1;

    CellField alpha(mesh, 0.8);
    NodalScalarField c_prev(mesh, 0.6);

    NutrientSystem sys = assemble_nutrient(mask, alpha, c_prev, p);
    REQUIRE(sys.matrix.rows == 1);

    double w0 = 4.0 * 0.5 / 3.0;
    double k00 = 4.0;  // sum of area * |grad lambda_0|^2 = 4 * (0.5 * 2)
    double reaction = p.delta * p.Q * (4.0 * 0.5 * 0.8 / 3.0);  // Qhat = 0
    double expected_diag = w0 + p.delta * p.eta * k00 + reaction;
    REQUIRE(sys.matrix.values[0] == Approx(expected_diag).epsilon(1e-13));
    // rhs: mass of previous value plus Dirichlet elimination (all offdiag -eta)
    double expected_rhs = w0 * 0.6 + p.delta * p.eta * 4.0 * 1.0;
    REQUIRE(sys.rhs[0] == Approx(expected_rhs).epsilon(1e-13));
}

TEST_CASE("zero alpha means zero reaction", "[nutrient]") {
    TriMesh mesh = structured_mesh(1.0, 4);
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    CellField alpha(mesh, 0.0);
    NodalScalarField ones(mesh, 1.0);

    NutrientSystem sys = assemble_nutrient(mask, alpha, ones, p);
    NodalScalarField c = solve_nutrient(sys);
    for (double v : c.values) REQUIRE(v == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Qhat = 0 makes the reaction independent of c_prev", "[nutrient]") {
    TriMesh mesh = structured_mesh(1.0, 4);
    DomainMask mask = full_mask(mesh);
    ModelParams p;  // Qhat = 0
    CellField alpha(mesh, 0.5);
    NodalScalarField a(mesh, 0.2), b(mesh, 0.9);
    NutrientSystem sysa = assemble_nutrient(mask, alpha, a, p);
    NutrientSystem sysb = assemble_nutrient(mask, alpha, b, p);
    REQUIRE(sysa.matrix.values == sysb.matrix.values);  // only rhs differs
}

TEST_CASE("tiny diffusion reduces to the scalar backward-Euler step", "[nutrient]") {
    TriMesh mesh = build_adjacency({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}},
                                   {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    p.Q = 0.5;
    p.eta = 1e-14;
    CellField alpha(mesh, 0.8);
    NodalScalarField c_prev(mesh, 1.0);

    NutrientSystem sys = assemble_nutrient(mask, alpha, c_prev, p);
    NodalScalarField c = solve_nutrient(sys);
    double expected = 1.0 / (1.0 + p.delta * p.Q * 0.8);
    REQUIRE(c[0] == Approx(expected).margin(1e-12));
}

TEST_CASE("identity map with eta and Q effectively off", "[nutrient]") {
    TriMesh mesh = structured_mesh(1.0, 5);
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    p.eta = 1e-300;
    p.Q = 1e-300;
    CellField alpha(mesh, 0.7);
    NodalScalarField c_prev(mesh);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uc(0.0, 1.0);
    for (double& v : c_prev.values) v = uc(rng);
    // keep the Dirichlet ring consistent so only interior dofs are compared
    NutrientSystem sys = assemble_nutrient(mask, alpha, c_prev, p);
    NodalScalarField c = solve_nutrient(sys);
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (sys.dof[v] >= 0) REQUIRE(c[v] == Approx(c_prev[v]).margin(1e-14));
}

TEST_CASE("NLM boundary data and corners", "[nutrient]") {
    TriMesh mesh = structured_mesh(5.0, 6);
    DomainMask mask = full_mask(mesh);  // membership irrelevant for NLM assembly
    ModelParams p;
    p.variant = Variant::NLM;
    CellField alpha(mesh, 0.0);
    NodalScalarField c_prev(mesh, 0.0);
    NutrientSystem sys = assemble_nutrient(mask, alpha, c_prev, p);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const Vec2& pt = mesh.vertices[v];
        if (!sys.is_dirichlet[v]) continue;
        bool supplied = pt.x == -5.0 || pt.y == -5.0;
        REQUIRE(sys.dirichlet[v] == (supplied ? 1.0 : 0.0));
    }
}

TEST_CASE("NLM steady state has the symmetric centre value", "[nutrient]") {
    // alpha = 0: pure diffusion; one huge backward-Euler step lands on the
    // harmonic steady state with two hot and two cold edges.
    ShapeSpec shape;
    MeshParams mp;
    mp.max_area = 0.04;
    TriMesh mesh = ruppert_refine(shape_pslg(shape), mp, 5.0);
    DomainMask mask = initial_mask(mesh, shape);
    ModelParams p;
    p.variant = Variant::NLM;
    p.delta = 1e8;
    CellField alpha(mesh, 0.0);
    NodalScalarField c(mesh, 0.0);
    for (int it = 0; it < 3; ++it) {
        NutrientSystem sys = assemble_nutrient(mask, alpha, c, p);
        c = solve_nutrient(sys);
    }
    int centre = 0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (norm(mesh.vertices[v]) < norm(mesh.vertices[centre])) centre = v;
    REQUIRE(c[centre] == Approx(0.5).margin(0.02));

    // fine structured reference solve agrees
    TriMesh ref = structured_mesh(5.0, 96);
    DomainMask refmask = full_mask(ref);
    NodalScalarField cr(ref, 0.0);
    for (int it = 0; it < 3; ++it) {
        NutrientSystem sys = assemble_nutrient(refmask, CellField(ref, 0.0), cr, p);
        cr = solve_nutrient(sys);
    }
    int rc = 0;
    for (int v = 0; v < ref.n_vertices(); ++v)
        if (norm(ref.vertices[v]) < norm(ref.vertices[rc])) rc = v;
    REQUIRE(c[centre] == Approx(cr[rc]).margin(0.02));
}

TEST_CASE("discrete maximum principle on random data", "[nutrient]") {
    ShapeSpec shape;
    MeshParams mp;
    mp.max_area = 0.2;
    TriMesh mesh = ruppert_refine(shape_pslg(shape), mp, 2.0);
    REQUIRE(mesh.is_delaunay);
    DomainMask mask = initial_mask(mesh, shape);

    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int seed = 0; seed < 100; ++seed) {
        ModelParams p;
        p.variant = (seed % 2 == 0) ? Variant::NUM : Variant::NLM;
        p.Q = 0.01 + ur(rng);
        p.eta = 0.1 + 2.0 * ur(rng);
        CellField alpha(mesh);
        for (double& v : alpha.values) v = ur(rng);
        NodalScalarField c_prev(mesh);
        for (double& v : c_prev.values) v = ur(rng);
        NutrientSystem sys = assemble_nutrient(mask, alpha, c_prev, p);
        NodalScalarField c = solve_nutrient(sys);  // throws if out of bounds
        for (double v : c.values) {
            REQUIRE(v >= -1e-9);
            REQUIRE(v <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("monotone decay with consuming cells", "[nutrient]") {
    TriMesh mesh = structured_mesh(1.0, 8);
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    p.Q = 0.5;
    CellField alpha(mesh, 0.8);
    NodalScalarField ones(mesh, 1.0);
    NutrientSystem sys = assemble_nutrient(mask, alpha, ones, p);
    NodalScalarField c = solve_nutrient(sys);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        REQUIRE(c[v] <= 1.0 + 1e-12);
        if (sys.dof[v] >= 0) REQUIRE(c[v] < 1.0);
    }
}

TEST_CASE("backward Euler temporal order on a manufactured solution", "[nutrient][slow]") {
    // c*(t,x) = 1 - 0.5 e^{-t} g(x), g = sin(pi(x+1/2)) sin(pi(y+1/2)) on the
    // unit box; forcing injected through the lumped load.
    const double ell = 0.5;
    TriMesh mesh = structured_mesh(ell, 48);
    DomainMask mask = full_mask(mesh);
    ModelParams p;
    p.variant = Variant::NUM;
    p.Q = 0.5;
    p.eta = 1.0;
    p.ell = ell;
    const double PI = M_PI;
    const double a0 = 0.5;
    CellField alpha(mesh, a0);

    auto g = [&](Vec2 x) {
        return std::sin(PI * (x.x + ell)) * std::sin(PI * (x.y + ell));
    };
    auto c_exact = [&](double t, Vec2 x) { return 1.0 - 0.5 * std::exp(-t) * g(x); };
    auto forcing = [&](double t, Vec2 x) {
        double e = std::exp(-t), gv = g(x);
        double dt_c = 0.5 * e * gv;
        double lap_c = PI * PI * e * gv;  // laplacian of c*
        return dt_c - p.eta * lap_c + p.Q * a0 * c_exact(t, x);
    };

    // masked lumped weights for the load and the error norm
    std::vector<double> w(mesh.n_vertices(), 0.0);
    for (int j = 0; j < mesh.n_triangles(); ++j)
        for (int v : mesh.triangles[j]) w[v] += mesh.area[j] / 3.0;

    auto run = [&](double delta) {
        p.delta = delta;
        NodalScalarField c(mesh);
        for (int v = 0; v < mesh.n_vertices(); ++v) c[v] = c_exact(0.0, mesh.vertices[v]);
        int steps = (int)std::llround(1.0 / delta);
        for (int n = 1; n <= steps; ++n) {
            NutrientSystem sys = assemble_nutrient(mask, alpha, c, p);
            double t_n = n * delta;
            for (int v = 0; v < mesh.n_vertices(); ++v)
                if (sys.dof[v] >= 0)
                    sys.rhs[sys.dof[v]] += delta * w[v] * forcing(t_n, mesh.vertices[v]);
            c = solve_nutrient(sys);
        }
        return c;
    };

    // time-step error isolated against a fine-step run of the same grid
    NodalScalarField ref = run(1.0 / 512.0);
    auto error_of = [&](double delta) {
        NodalScalarField c = run(delta);
        double err = 0.0;
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            double d = c[v] - ref[v];
            err += w[v] * d * d;
        }
        return std::sqrt(err);
    };

    double e1 = error_of(0.1), e2 = error_of(0.05), e3 = error_of(0.025);
    double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    INFO("errors " << e1 << " " << e2 << " " << e3 << ", orders " << o1 << " " << o2);
    // the manufactured solution itself is tracked too
    double worst = 0.0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        worst = std::max(worst, std::abs(ref[v] - c_exact(1.0, mesh.vertices[v])));
    REQUIRE(worst < 5e-3);
    REQUIRE(o1 >= 0.9);
    REQUIRE(o2 >= 0.9);
}
