#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tumsim/errors.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/shapes.hpp"
#include "tumsim/trimesh.hpp"

namespace tumsim {

enum class MeshKind { Ruppert, Structured, Radial };

// Full run description: model constants, mesh recipe, initial shape and
// output controls. Parsed from `key = value` lines with # comments; unknown
// keys are rejected. Unset keys take the experiment defaults, which depend
// on the variant (see apply_variant_defaults).
struct Config {
    Config() { mesh_params.max_area = 0.04; }  // paper-scale meshes by default

    ModelParams model;
    MeshParams mesh_params;
    ShapeSpec shape;
    MeshKind mesh_kind = MeshKind::Ruppert;
    int structured_n = 64;
    int radial_ntheta = 64;
    double radial_dr = 0.125;
    int snapshot_every = 10;
    std::uint64_t seed = 0;

    bool operator==(const Config&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": cannot parse value for '" +
                          key + "'");
    }
    if (pos != v.size())
        throw ConfigError("line " + std::to_string(line) + ": trailing junk in value for '" +
                          key + "'");
    return x;
}

inline long parse_int(const std::string& v, const std::string& key, int line) {
    double x = parse_double(v, key, line);
    long i = (long)x;
    if ((double)i != x)
        throw ConfigError("line " + std::to_string(line) + ": '" + key +
                          "' expects an integer");
    return i;
}

} // namespace detail

// NUM: Q = 0.5, eta = 1, T = 20, c0 = 1. NLM: Q = 0.01, eta = 2, T = 30,
// c0 = 0. Everything else is shared.
inline void apply_variant_defaults(Config& cfg) {
    if (cfg.model.variant == Variant::NUM) {
        cfg.model.Q = 0.5;
        cfg.model.eta = 1.0;
        cfg.model.T_final = 20.0;
        cfg.model.c0_value = 1.0;
    } else {
        cfg.model.Q = 0.01;
        cfg.model.eta = 2.0;
        cfg.model.T_final = 30.0;
        cfg.model.c0_value = 0.0;
    }
}

inline Config parse_config(const std::string& text) {
    struct Pair {
        std::string value;
        int line;
    };
    std::map<std::string, Pair> kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = {value, lineno};
    }

    Config cfg;
    if (auto it = kv.find("variant"); it != kv.end()) {
        if (it->second.value == "num")
            cfg.model.variant = Variant::NUM;
        else if (it->second.value == "nlm")
            cfg.model.variant = Variant::NLM;
        else
            throw ConfigError("line " + std::to_string(it->second.line) +
                              ": variant must be num or nlm");
    }
    apply_variant_defaults(cfg);

    auto take = [&](const char* key) -> const Pair* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto num = [&](const char* key, double& slot) {
        if (const Pair* p = take(key)) slot = detail::parse_double(p->value, key, p->line);
    };
    auto integer = [&](const char* key, auto& slot) {
        if (const Pair* p = take(key))
            slot = (std::remove_reference_t<decltype(slot)>)detail::parse_int(p->value, key,
                                                                              p->line);
    };

    num("s1", cfg.model.s1);
    num("s2", cfg.model.s2);
    num("s3", cfg.model.s3);
    num("s4", cfg.model.s4);
    num("q", cfg.model.Q);
    num("qhat", cfg.model.Qhat);
    num("eta", cfg.model.eta);
    num("k", cfg.model.k);
    num("mu", cfg.model.mu);
    num("lambda", cfg.model.lambda);
    num("alpha_star", cfg.model.alpha_star);
    num("alpha_thr", cfg.model.alpha_thr);
    num("alpha0", cfg.model.alpha0_value);
    num("c0", cfg.model.c0_value);
    num("delta", cfg.model.delta);
    num("t_final", cfg.model.T_final);
    num("ell", cfg.model.ell);
    num("cfl_limit", cfg.model.cfl_limit);
    num("icfl_limit", cfg.model.icfl_limit);

    num("theta_min", cfg.mesh_params.theta_min);
    num("max_area", cfg.mesh_params.max_area);
    num("jitter", cfg.mesh_params.jitter);
    num("rotation", cfg.mesh_params.rotation);

    if (const Pair* p = take("shape")) {
        const std::string& v = p->value;
        if (v == "circle") cfg.shape.kind = ShapeKind::Circle;
        else if (v == "bullet") cfg.shape.kind = ShapeKind::Bullet;
        else if (v == "semi_annulus") cfg.shape.kind = ShapeKind::SemiAnnulus;
        else if (v == "polygon_file") cfg.shape.kind = ShapeKind::PolygonFile;
        else
            throw ConfigError("line " + std::to_string(p->line) +
                              ": shape must be circle, bullet, semi_annulus or polygon_file");
    }
    num("radius", cfg.shape.radius);
    num("center_x", cfg.shape.centre.x);
    num("center_y", cfg.shape.centre.y);
    num("inner_radius", cfg.shape.inner_radius);
    num("outer_radius", cfg.shape.outer_radius);
    integer("boundary_nodes", cfg.shape.boundary_nodes);
    if (const Pair* p = take("polygon_file")) cfg.shape.polygon_file = p->value;

    if (const Pair* p = take("mesh_kind")) {
        const std::string& v = p->value;
        if (v == "ruppert") cfg.mesh_kind = MeshKind::Ruppert;
        else if (v == "structured") cfg.mesh_kind = MeshKind::Structured;
        else if (v == "radial") cfg.mesh_kind = MeshKind::Radial;
        else
            throw ConfigError("line " + std::to_string(p->line) +
                              ": mesh_kind must be ruppert, structured or radial");
    }
    integer("structured_n", cfg.structured_n);
    integer("radial_ntheta", cfg.radial_ntheta);
    num("radial_dr", cfg.radial_dr);
    integer("snapshot_every", cfg.snapshot_every);
    integer("seed", cfg.seed);

    static const char* known[] = {
        "variant", "s1", "s2", "s3", "s4", "q", "qhat", "eta", "k", "mu", "lambda",
        "alpha_star", "alpha_thr", "alpha0", "c0", "delta", "t_final", "ell",
        "cfl_limit", "icfl_limit", "theta_min", "max_area", "jitter", "rotation",
        "shape", "radius", "center_x", "center_y", "inner_radius", "outer_radius",
        "boundary_nodes", "polygon_file", "mesh_kind", "structured_n",
        "radial_ntheta", "radial_dr", "snapshot_every", "seed"};
    for (const auto& [key, p] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok)
            throw ConfigError("line " + std::to_string(p.line) + ": unknown key '" + key + "'");
    }

    cfg.model.validate();
    cfg.mesh_params.validate();
    if (cfg.shape.kind == ShapeKind::PolygonFile && !cfg.shape.polygon_file.empty())
        cfg.shape.polygon_loops = read_polygon_loops(cfg.shape.polygon_file);
    cfg.shape.validate();
    if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    return cfg;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline std::string serialize_config(const Config& cfg) {
    std::ostringstream out;
    out.precision(17);
    auto putd = [&](const char* key, double v) { out << key << " = " << v << '\n'; };
    out << "variant = " << (cfg.model.variant == Variant::NUM ? "num" : "nlm") << '\n';
    putd("s1", cfg.model.s1);
    putd("s2", cfg.model.s2);
    putd("s3", cfg.model.s3);
    putd("s4", cfg.model.s4);
    putd("q", cfg.model.Q);
    putd("qhat", cfg.model.Qhat);
    putd("eta", cfg.model.eta);
    putd("k", cfg.model.k);
    putd("mu", cfg.model.mu);
    putd("lambda", cfg.model.lambda);
    putd("alpha_star", cfg.model.alpha_star);
    putd("alpha_thr", cfg.model.alpha_thr);
    putd("alpha0", cfg.model.alpha0_value);
    putd("c0", cfg.model.c0_value);
    putd("delta", cfg.model.delta);
    putd("t_final", cfg.model.T_final);
    putd("ell", cfg.model.ell);
    putd("cfl_limit", cfg.model.cfl_limit);
    putd("icfl_limit", cfg.model.icfl_limit);
    putd("theta_min", cfg.mesh_params.theta_min);
    putd("max_area", cfg.mesh_params.max_area);
    putd("jitter", cfg.mesh_params.jitter);
    putd("rotation", cfg.mesh_params.rotation);
    const char* shape = "circle";
    if (cfg.shape.kind == ShapeKind::Bullet) shape = "bullet";
    if (cfg.shape.kind == ShapeKind::SemiAnnulus) shape = "semi_annulus";
    if (cfg.shape.kind == ShapeKind::PolygonFile) shape = "polygon_file";
    out << "shape = " << shape << '\n';
    putd("radius", cfg.shape.radius);
    putd("center_x", cfg.shape.centre.x);
    putd("center_y", cfg.shape.centre.y);
    putd("inner_radius", cfg.shape.inner_radius);
    putd("outer_radius", cfg.shape.outer_radius);
    out << "boundary_nodes = " << cfg.shape.boundary_nodes << '\n';
    if (!cfg.shape.polygon_file.empty())
        out << "polygon_file = " << cfg.shape.polygon_file << '\n';
    const char* kind = "ruppert";
    if (cfg.mesh_kind == MeshKind::Structured) kind = "structured";
    if (cfg.mesh_kind == MeshKind::Radial) kind = "radial";
    out << "mesh_kind = " << kind << '\n';
    out << "structured_n = " << cfg.structured_n << '\n';
    out << "radial_ntheta = " << cfg.radial_ntheta << '\n';
    putd("radial_dr", cfg.radial_dr);
    out << "snapshot_every = " << cfg.snapshot_every << '\n';
    out << "seed = " << cfg.seed << '\n';
    return out.str();
}

} // namespace tumsim
