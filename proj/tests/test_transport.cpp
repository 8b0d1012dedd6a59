#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "tumsim/tumsim.hpp"

using namespace tumsim;
using Catch::Approx;

namespace {

// Sourceless parameter set: c = 0 kills the birth term, s2 = s3 = 0 the
// death term.
ModelParams sourceless() {
    ModelParams p;
    p.s2 = 0.0;
    p.s3 = 0.0;
    return p;
}

} // namespace

TEST_CASE("upwind flux branches", "[transport]") {
    TriMesh m = testsup::two_triangle_square();
    int shared = -1;
    for (int e = 0; e < m.n_edges(); ++e)
        if (m.edges[e].neighbour >= 0) shared = e;
    REQUIRE(shared >= 0);
    const auto& ed = m.edges[shared];

    CellField alpha(m);
    alpha[ed.owner] = 0.8;
    alpha[ed.neighbour] = 0.3;

    TH2VectorField u(m);

    SECTION("zero normal velocity gives zero flux") {
        u.at_edge(shared) = perp(ed.normal);  // purely tangential
        FluxTable f = compute_fluxes(alpha, u);
        REQUIRE(f.from(shared, ed.owner) == Approx(0.0).margin(1e-15));
    }
    SECTION("outflow takes the owner value") {
        u.at_edge(shared) = ed.normal;  // u.n = 1
        FluxTable f = compute_fluxes(alpha, u);
        REQUIRE(f.from(shared, ed.owner) == Approx(0.8));
        REQUIRE(f.from(shared, ed.neighbour) == Approx(-0.8));
    }
    SECTION("inflow takes the neighbour value") {
        u.at_edge(shared) = Vec2{0, 0} - ed.normal;  // u.n = -1
        FluxTable f = compute_fluxes(alpha, u);
        REQUIRE(f.from(shared, ed.owner) == Approx(-0.3));
        REQUIRE(f.from(shared, ed.neighbour) == Approx(0.3));
    }
    SECTION("box boundary uses exterior alpha = 0") {
        int be = m.boundary_edges[0];
        u.at_edge(be) = m.edges[be].normal;  // outflow through the box side
        FluxTable f = compute_fluxes(alpha, u);
        REQUIRE(f.from(be, m.edges[be].owner) == Approx(alpha[m.edges[be].owner]));
        u.at_edge(be) = Vec2{0, 0} - m.edges[be].normal;  // inflow from outside
        f = compute_fluxes(alpha, u);
        REQUIRE(f.from(be, m.edges[be].owner) == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("advance_alpha closed form", "[transport]") {
    TriMesh m = testsup::single_triangle();
    TH2VectorField u(m);  // zero: no flux

    SECTION("threshold fixed point") {
        ModelParams p;
        CellField a(m, p.alpha_thr);
        NodalScalarField c(m, 1.0);
        CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
        REQUIRE(next[0] == a[0]);
    }
    SECTION("implicit branch R = 0.5, d = 1") {
        ModelParams p;
        p.s2 = 1.0;  // d(0) = 1
        CellField a(m, 0.5);
        NodalScalarField c(m, 0.0);  // b = 0, so R = alpha_prev
        CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
        REQUIRE(next[0] == Approx((0.5 + 0.001) / 1.1).epsilon(1e-12));
    }
    SECTION("below threshold the death term is inactive") {
        ModelParams p;
        CellField a(m, 0.005);
        NodalScalarField c(m, 1.0);
        CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
        REQUIRE(next[0] == 0.005);
    }
}

TEST_CASE("advance_alpha matches the bisection oracle", "[transport]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(0.0, 1.0), uv(-0.3, 0.3), uc(0.0, 1.0);

    TriMesh fan = testsup::fan_mesh(6, 1.0);
    TriMesh sq = testsup::two_triangle_square();

    for (int trial = 0; trial < 1000; ++trial) {
        const TriMesh& m = (trial % 2 == 0) ? fan : sq;
        ModelParams p;
        p.alpha_thr = 0.005 + 0.02 * ua(rng);
        p.s2 = 0.2 + ua(rng);

        CellField a(m);
        for (double& v : a.values) v = ua(rng);
        NodalScalarField c(m);
        for (double& v : c.values) v = uc(rng);
        TH2VectorField u(m);
        for (auto& v : u.values) v = {uv(rng), uv(rng)};

        FluxTable f = compute_fluxes(a, u);
        CellField next = advance_alpha(a, f, c, p);

        for (int j = 0; j < m.n_triangles(); ++j) {
            double flux = 0.0;
            for (int k = 0; k < 3; ++k) {
                int e = m.tri_edges[j][k];
                flux += m.edges[e].length * f.from(e, j);
            }
            double b_j = discrete_average(c, [&](double cc) { return birth_rate(cc, p); }, j);
            double d_j = discrete_average(c, [&](double cc) { return death_rate(cc, p); }, j);
            double R = a[j] - p.delta / m.area[j] * flux +
                       p.delta * std::max(0.0, a[j] - p.alpha_thr) * (1.0 - a[j]) * b_j;
            double expected = testsup::bisect_alpha(R, p.delta * d_j, p.alpha_thr);
            if (expected < 0.0) expected = 0.0;
            REQUIRE(next[j] == Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("discrete conservation without sources", "[transport]") {
    TriMesh m = structured_mesh(1.0, 8);
    ModelParams p = sourceless();

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.2, 0.8), uv(-0.05, 0.05);

    CellField a(m);
    for (double& v : a.values) v = ua(rng);
    NodalScalarField c(m, 0.0);
    TH2VectorField u(m);
    for (int e = 0; e < m.n_edges(); ++e)
        if (m.edges[e].neighbour >= 0) u.at_edge(e) = {uv(rng), uv(rng)};

    double before = 0.0;
    for (int j = 0; j < m.n_triangles(); ++j) before += m.area[j] * a[j];

    CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
    double after = 0.0;
    for (int j = 0; j < m.n_triangles(); ++j) after += m.area[j] * next[j];

    REQUIRE(after == Approx(before).epsilon(1e-12));
}

TEST_CASE("threshold inertness is exact", "[transport]") {
    TriMesh m = testsup::fan_mesh(5, 1.0);
    ModelParams p;
    CellField a(m);
    for (int j = 0; j < m.n_triangles(); ++j) a[j] = 0.001 * (j + 1);  // all below 0.01
    NodalScalarField c(m, 0.7);
    TH2VectorField u(m);  // zero
    CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
    for (int j = 0; j < m.n_triangles(); ++j) REQUIRE(next[j] == a[j]);
}

TEST_CASE("growth is limited to one layer", "[transport]") {
    TriMesh m = structured_mesh(1.0, 10);
    ModelParams p;

    // active block: triangles whose centroid is in the middle third
    std::vector<bool> active(m.n_triangles(), false);
    for (int j = 0; j < m.n_triangles(); ++j)
        active[j] = std::abs(m.centroid[j].x) < 0.3 && std::abs(m.centroid[j].y) < 0.3;

    CellField a(m, 0.0);
    for (int j = 0; j < m.n_triangles(); ++j)
        if (active[j]) a[j] = 0.9;

    // u nonzero only on P2 nodes of active triangles
    std::vector<bool> active_vertex(m.n_vertices(), false), active_edge(m.n_edges(), false);
    for (int j = 0; j < m.n_triangles(); ++j)
        if (active[j]) {
            for (int v : m.triangles[j]) active_vertex[v] = true;
            for (int e : m.tri_edges[j]) active_edge[e] = true;
        }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uv(-0.2, 0.2);
    TH2VectorField u(m);
    for (int v = 0; v < m.n_vertices(); ++v)
        if (active_vertex[v]) u.at_vertex(v) = {uv(rng), uv(rng)};
    for (int e = 0; e < m.n_edges(); ++e)
        if (active_edge[e]) u.at_edge(e) = {uv(rng), uv(rng)};

    NodalScalarField c(m, 1.0);
    CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);

    for (int j = 0; j < m.n_triangles(); ++j) {
        if (active[j]) continue;
        bool adjacent = false;
        for (int k = 0; k < 3; ++k) {
            int nb = m.tri_neighbours[j][k];
            if (nb >= 0 && active[nb]) adjacent = true;
        }
        if (!adjacent) REQUIRE(next[j] == 0.0);
    }
}

TEST_CASE("positivity under the CFL bound", "[transport]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    TriMesh m = structured_mesh(1.0, 6);
    ModelParams p = sourceless();
    double a_min = m.min_area();

    for (int trial = 0; trial < 50; ++trial) {
        CellField a(m);
        for (double& v : a.values) v = ua(rng);
        // scale velocity so q_max = 0.4 <= 0.5
        double umax = 0.4 * a_min / p.delta;
        TH2VectorField u(m);
        for (auto& v : u.values) {
            v = {2.0 * ua(rng) - 1.0, 2.0 * ua(rng) - 1.0};
            double n = norm(v);
            if (n > 0) v = v * (umax * ua(rng) / n);
        }
        NodalScalarField c(m, 0.0);
        CflReport rep = cfl_report(u, p, m);
        REQUIRE(rep.cfl_ok);
        CellField next = advance_alpha(a, compute_fluxes(a, u), c, p);
        for (double v : next.values) REQUIRE(v >= 0.0);
    }
}

TEST_CASE("cfl report quantities", "[transport]") {
    ModelParams p;

    SECTION("zero velocity passes") {
        TriMesh m = testsup::two_triangle_square();
        TH2VectorField u(m);
        CflReport r = cfl_report(u, p, m);
        REQUIRE(r.q_max == 0.0);
        REQUIRE(r.q_min == 0.0);
        REQUIRE(r.cfl_ok);
        REQUIRE(r.icfl_ok);
    }
    SECTION("q_max = 2 fails the default bound") {
        TriMesh m = build_adjacency({{0, 0}, {1, 0}, {0, 0.1}}, {{0, 1, 2}});
        REQUIRE(m.area[0] == Approx(0.05));
        TH2VectorField u(m);
        u.at_vertex(0) = {1.0, 0.0};
        CflReport r = cfl_report(u, p, m);
        REQUIRE(r.q_max == Approx(2.0));
        REQUIRE_FALSE(r.cfl_ok);
    }
    SECTION("uniform mesh has q_max = q_min") {
        TriMesh m = structured_mesh(1.0, 4);
        TH2VectorField u(m);
        u.at_vertex(3) = {0.3, 0.4};
        CflReport r = cfl_report(u, p, m);
        REQUIRE(r.q_max == Approx(r.q_min));
    }
}
