#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "support.hpp"
#include "tumsim/tumsim.hpp"

using namespace tumsim;
using Catch::Approx;

namespace {

double mesh_min_angle_deg(const TriMesh& m) {
    double w = 180.0;
    for (const auto& t : m.triangles)
        w = std::min(w, min_angle(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) *
                            180.0 / M_PI);
    return w;
}

int snap_vertex(const TriMesh& m, const Vec2& p) {
    for (int v = 0; v < m.n_vertices(); ++v)
        if (dist(m.vertices[v], p) < 1e-12) return v;
    return -1;
}

} // namespace

TEST_CASE("empty pslg with coarse area bound covers the box", "[ruppert]") {
    Pslg pslg;  // no points, no segments
    MeshParams params;
    params.theta_min = 20.0;
    double ell = 1.0;
    params.max_area = (2 * ell) * (2 * ell) / 4.0;
    TriMesh m = ruppert_refine(pslg, params, ell);
    REQUIRE(m.n_triangles() >= 8);
    REQUIRE(m.total_area() == Approx(4.0 * ell * ell).epsilon(1e-10));
    REQUIRE(mesh_min_angle_deg(m) >= params.theta_min - 1e-9);
    for (const auto& t : m.triangles)
        REQUIRE(triangle_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) <=
                params.max_area + 1e-12);
}

TEST_CASE("square box refinement respects the angle bound", "[ruppert]") {
    Pslg pslg;
    MeshParams params;
    params.theta_min = 20.0;
    params.max_area = 0.05;
    TriMesh m = ruppert_refine(pslg, params, 1.0);
    REQUIRE(mesh_min_angle_deg(m) >= 20.0 - 1e-9);
    REQUIRE(m.is_delaunay);
    REQUIRE(m.total_area() == Approx(4.0).epsilon(1e-10));
}

TEST_CASE("unit circle loop segments survive as mesh edges", "[ruppert]") {
    ShapeSpec shape;
    shape.kind = ShapeKind::Circle;
    shape.boundary_nodes = 64;
    Pslg pslg = shape_pslg(shape);
    MeshParams params;
    params.theta_min = 20.0;
    params.max_area = 0.05;
    double ell = 5.0;
    RefinedMesh r = ruppert_refine_full(pslg, params, ell);
    const TriMesh& m = r.mesh;

    REQUIRE(m.total_area() == Approx(100.0).epsilon(1e-10));
    REQUIRE(mesh_min_angle_deg(m) >= 20.0 - 1e-9);
    INFO("segment splits: " << r.segment_splits);
    REQUIRE(r.segment_splits == 0);

    // exact index match after snapping pslg points onto mesh vertices
    std::map<int, int> snapped;
    for (std::size_t i = 0; i < pslg.points.size(); ++i) {
        int v = snap_vertex(m, pslg.points[i]);
        REQUIRE(v >= 0);
        snapped[(int)i] = v;
    }
    for (auto [a, b] : pslg.segments) REQUIRE(m.edge_exists(snapped[a], snapped[b]));
}

TEST_CASE("self-intersecting pslg is rejected", "[ruppert]") {
    Pslg pslg;
    pslg.points = {{-0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}, {0.5, -0.5}};
    pslg.segments = {{0, 1}, {2, 3}};
    MeshParams params;
    REQUIRE_THROWS_AS(ruppert_refine(pslg, params, 1.0), ConfigError);
}

TEST_CASE("theta_min outside the guarantee range is rejected", "[ruppert]") {
    Pslg pslg;
    MeshParams params;
    params.theta_min = 33.0;
    REQUIRE_THROWS_AS(ruppert_refine(pslg, params, 1.0), ConfigError);
}

TEST_CASE("bullet and semi-annulus pslgs mesh cleanly", "[ruppert]") {
    for (ShapeKind kind : {ShapeKind::Bullet, ShapeKind::SemiAnnulus}) {
        ShapeSpec shape;
        shape.kind = kind;
        shape.boundary_nodes = 64;
        MeshParams params;
        params.theta_min = 20.0;
        params.max_area = 0.08;
        RefinedMesh r = ruppert_refine_full(shape_pslg(shape), params, 5.0);
        REQUIRE(r.mesh.total_area() == Approx(100.0).epsilon(1e-10));
        REQUIRE(mesh_min_angle_deg(r.mesh) >= 20.0 - 1e-9);
    }
}
