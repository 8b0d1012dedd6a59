#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tumsim/tumsim.hpp"

namespace {

int guarded(int (*body)(void*), void* ctx) {
    try {
        return body(ctx);
    } catch (const tumsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const tumsim::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const tumsim::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

struct MeshArgs {
    std::string config;
    std::string out = ".";
    std::string pslg;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int do_mesh(void* ctx) {
    auto& a = *static_cast<MeshArgs*>(ctx);
    tumsim::Config cfg = tumsim::parse_config_file(a.config);
    if (a.seed_set) cfg.seed = a.seed;

    tumsim::TriMesh mesh;
    if (!a.pslg.empty()) {
        tumsim::Pslg pslg = tumsim::read_pslg_file(a.pslg);
        tumsim::RefinedMesh r =
            tumsim::ruppert_refine_full(pslg, cfg.mesh_params, cfg.model.ell);
        mesh = std::move(r.mesh);
        if (cfg.mesh_params.jitter > 0.0 || cfg.mesh_params.rotation != 0.0)
            mesh = tumsim::jitter_and_rotate(mesh, cfg.mesh_params, cfg.seed,
                                             r.constrained_vertices);
    } else {
        mesh = tumsim::build_mesh(cfg);
    }

    std::filesystem::create_directories(a.out);
    const std::string path = a.out + "/mesh.txt";
    tumsim::write_mesh_file(path, mesh);
    std::cout << path << ": " << mesh.n_vertices() << " vertices, " << mesh.n_triangles()
              << " triangles, min angle "
              << [&] {
                     double w = 1e9;
                     for (int j = 0; j < mesh.n_triangles(); ++j) {
                         const auto& t = mesh.triangles[j];
                         w = std::min(w, tumsim::min_angle(mesh.vertices[t[0]],
                                                           mesh.vertices[t[1]],
                                                           mesh.vertices[t[2]]));
                     }
                     return w * 180.0 / M_PI;
                 }()
              << " deg\n";
    return 0;
}

struct RunArgs {
    std::string config;
    std::string out = "out";
    std::string mesh;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int do_run(void* ctx) {
    auto& a = *static_cast<RunArgs*>(ctx);
    tumsim::Config cfg = tumsim::parse_config_file(a.config);
    if (a.seed_set) cfg.seed = a.seed;

    tumsim::TriMesh mesh =
        a.mesh.empty() ? tumsim::build_mesh(cfg) : tumsim::read_mesh_file(a.mesh);

    tumsim::RunResult result =
        tumsim::run(mesh, cfg.shape, cfg.model, cfg.snapshot_every);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    tumsim::write_outputs(a.out, result);

    const auto& last = result.series.back();
    std::cout << "t = " << last.t << ", radius = " << last.radius << ", area = " << last.area
              << ", components = " << last.components << "\n";
    if (result.final_state.cfl_warnings > 0)
        std::cerr << "warning: CFL diagnostic failed on " << result.final_state.cfl_warnings
                  << " steps\n";
    if (result.final_state.clamp_warnings > 0)
        std::cerr << "warning: clamped negative alpha " << result.final_state.clamp_warnings
                  << " times\n";
    return 0;
}

struct ReportArgs {
    std::vector<std::string> csvs;
    std::string out = "radius_curve.svg";
};

int do_report(void* ctx) {
    auto& a = *static_cast<ReportArgs*>(ctx);
    tumsim::write_radius_report(a.csvs, a.out);
    std::cout << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-background-mesh simulator for 2D biphasic tumour growth"};
    app.require_subcommand(1);

    MeshArgs mesh_args;
    auto* mesh_cmd = app.add_subcommand("mesh", "Generate a triangulation of the box");
    mesh_cmd->add_option("--config", mesh_args.config, "Config file")->required();
    mesh_cmd->add_option("--out", mesh_args.out, "Output directory");
    mesh_cmd->add_option("--pslg", mesh_args.pslg, "Refine this pslg instead of the config shape");
    auto* ms = mesh_cmd->add_option("--seed", mesh_args.seed, "Jitter seed");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a simulation");
    run_cmd->add_option("--config", run_args.config, "Config file")->required();
    run_cmd->add_option("--out", run_args.out, "Output directory");
    run_cmd->add_option("--mesh", run_args.mesh, "Load a mesh file instead of generating");
    auto* rs = run_cmd->add_option("--seed", run_args.seed, "Jitter seed");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "Plot radius curves from series CSVs");
    report_cmd->add_option("csvs", report_args.csvs, "series.csv files")->required();
    report_cmd->add_option("--out", report_args.out, "Output SVG path");

    CLI11_PARSE(app, argc, argv);

    mesh_args.seed_set = ms->count() > 0;
    run_args.seed_set = rs->count() > 0;

    if (mesh_cmd->parsed()) return guarded(do_mesh, &mesh_args);
    if (run_cmd->parsed()) return guarded(do_run, &run_args);
    if (report_cmd->parsed()) return guarded(do_report, &report_args);
    return 0;
}
