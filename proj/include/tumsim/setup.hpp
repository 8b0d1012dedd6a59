#pragma once

#include <vector>

#include "tumsim/config.hpp"
#include "tumsim/meshgen.hpp"
#include "tumsim/ruppert.hpp"
#include "tumsim/shapes.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

// Builds the background mesh a config asks for, applying jitter/rotation
// afterwards. The seed only enters through jitter.
inline TriMesh build_mesh(const Config& cfg) {
    TriMesh mesh;
    std::vector<int> pinned;
    switch (cfg.mesh_kind) {
    case MeshKind::Ruppert: {
        RefinedMesh r = ruppert_refine_full(shape_pslg(cfg.shape), cfg.mesh_params,
                                            cfg.model.ell);
        mesh = std::move(r.mesh);
        pinned = std::move(r.constrained_vertices);
        break;
    }
    case MeshKind::Structured:
        mesh = structured_mesh(cfg.model.ell, cfg.structured_n);
        break;
    case MeshKind::Radial:
        mesh = radial_mesh(cfg.model.ell, cfg.radial_ntheta, cfg.radial_dr);
        break;
    }
    if (cfg.mesh_params.jitter > 0.0 || cfg.mesh_params.rotation != 0.0)
        mesh = jitter_and_rotate(mesh, cfg.mesh_params, cfg.seed, pinned);
    return mesh;
}

} // namespace tumsim
