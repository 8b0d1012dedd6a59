#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/shapes.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

// The discrete tumour domain: a triangle subset with its boundary edges,
// connected components and scalar geometry. Immutable snapshot; updates
// produce a new mask.
struct DomainMask {
    const TriMesh* mesh = nullptr;
    std::vector<bool> member;       // per triangle
    std::vector<int> boundary;      // edge ids with exactly one member triangle
    std::vector<int> component;     // component label per triangle, -1 outside
    int n_components = 0;
    double area = 0.0;
    double radius = 0.0;            // equivalent-area radius sqrt(area/pi)
    Vec2 centroid{0.0, 0.0};

    bool empty() const { return area == 0.0; }

    int count() const {
        return (int)std::count(member.begin(), member.end(), true);
    }
};

namespace detail {

// Recomputes boundary, components and metrics from the membership flags.
inline void finish_mask(DomainMask& mask) {
    const TriMesh& m = *mask.mesh;
    mask.boundary.clear();

    for (int e = 0; e < m.n_edges(); ++e) {
        const auto& ed = m.edges[e];
        bool a = mask.member[ed.owner];
        bool b = ed.neighbour >= 0 && mask.member[ed.neighbour];
        if (a != b) mask.boundary.push_back(e);
    }

    // Union-find over shared edges.
    std::vector<int> parent(m.n_triangles());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int>* pp = &parent;
    auto find = [pp](int x) {
        while ((*pp)[x] != x) {
            (*pp)[x] = (*pp)[(*pp)[x]];
            x = (*pp)[x];
        }
        return x;
    };
    for (const auto& ed : m.edges)
        if (ed.neighbour >= 0 && mask.member[ed.owner] && mask.member[ed.neighbour])
            parent[find(ed.owner)] = find(ed.neighbour);

    mask.component.assign(m.n_triangles(), -1);
    mask.n_components = 0;
    std::vector<int> label(m.n_triangles(), -1);
    double area = 0.0;
    Vec2 first_moment{0.0, 0.0};
    for (int j = 0; j < m.n_triangles(); ++j) {
        if (!mask.member[j]) continue;
        int r = find(j);
        if (label[r] < 0) label[r] = mask.n_components++;
        mask.component[j] = label[r];
        area += m.area[j];
        first_moment += m.area[j] * m.centroid[j];
    }
    mask.area = area;
    mask.radius = std::sqrt(area / M_PI);
    mask.centroid = area > 0.0 ? first_moment / area : Vec2{0.0, 0.0};
}

} // namespace detail

// Omega_h^0: the triangles whose centroid lies strictly inside the analytic
// shape.
inline DomainMask initial_mask(const TriMesh& mesh, const ShapeSpec& shape) {
    DomainMask mask;
    mask.mesh = &mesh;
    mask.member.assign(mesh.n_triangles(), false);
    for (int j = 0; j < mesh.n_triangles(); ++j)
        mask.member[j] = inside_shape(shape, mesh.centroid[j]);
    detail::finish_mask(mask);
    if (mask.empty()) throw ConfigError("initial tumour mask is empty");
    return mask;
}

// The domain update: (1) add exterior triangles with an edge on the old
// boundary and alpha >= alpha_thr, (2) remove old boundary triangles below
// the threshold, (3) iterate removal until every boundary triangle is above
// the threshold. An empty result reports tumour extinction upstream.
inline DomainMask update_mask(const DomainMask& prev, const CellField& alpha,
                              const ModelParams& params) {
    const TriMesh& m = *prev.mesh;
    const double thr = params.alpha_thr;

    std::vector<bool> member = prev.member;

    // Steps (1) and (2) both act relative to the previous boundary.
    for (int e : prev.boundary) {
        const auto& ed = m.edges[e];
        if (ed.neighbour < 0) continue;
        int out = prev.member[ed.owner] ? ed.neighbour : ed.owner;
        if (alpha[out] >= thr) member[out] = true;
    }
    for (int e : prev.boundary) {
        const auto& ed = m.edges[e];
        int in = prev.member[ed.owner] ? ed.owner
                                       : (ed.neighbour >= 0 ? ed.neighbour : -1);
        if (in >= 0 && alpha[in] < thr) member[in] = false;
    }

    // Step (3): keep removing boundary triangles of the current set that sit
    // below the threshold. Each pass strictly shrinks the set.
    while (true) {
        std::vector<int> drop;
        for (int j = 0; j < m.n_triangles(); ++j) {
            if (!member[j]) continue;
            bool on_boundary = false;
            for (int k = 0; k < 3; ++k) {
                int nb = m.tri_neighbours[j][k];
                if (nb < 0 || !member[nb]) on_boundary = true;
            }
            if (on_boundary && alpha[j] < thr) drop.push_back(j);
        }
        if (drop.empty()) break;
        for (int j : drop) member[j] = false;
    }

    DomainMask next;
    next.mesh = &m;
    next.member = std::move(member);
    detail::finish_mask(next);
    return next;
}

struct MaskMetrics {
    double area;
    double radius;
    int n_components;
    Vec2 centroid;
};

inline MaskMetrics metrics(const DomainMask& mask) {
    if (mask.empty()) throw SolverError("metrics of an empty mask");
    return {mask.area, mask.radius, mask.n_components, mask.centroid};
}

} // namespace tumsim
