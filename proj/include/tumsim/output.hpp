#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tumsim/driver.hpp"
#include "tumsim/errors.hpp"

namespace tumsim {

inline const char* kSeriesHeader = "t,radius,area,cell_volume,components,max_speed,min_c,max_c";

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRow>& series) {
    out << kSeriesHeader << '\n';
    for (const auto& r : series)
        out << detail::fmt(r.t) << ',' << detail::fmt(r.radius) << ',' << detail::fmt(r.area)
            << ',' << detail::fmt(r.cell_volume) << ',' << r.components << ','
            << detail::fmt(r.max_speed) << ',' << detail::fmt(r.min_c) << ','
            << detail::fmt(r.max_c) << '\n';
}

// Legacy ASCII unstructured grid: alpha and tumour membership per cell,
// nutrient, pressure and velocity (vertex values of the quadratic field) per
// point.
inline void write_vtk(std::ostream& out, const SimState& s) {
    const TriMesh& m = *s.alpha.mesh;
    out << "# vtk DataFile Version 3.0\n";
    out << "tumsim fields at t = " << detail::fmt(s.time) << "\n";
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << m.n_vertices() << " double\n";
    for (const auto& v : m.vertices)
        out << detail::fmt(v.x) << ' ' << detail::fmt(v.y) << " 0\n";
    out << "CELLS " << m.n_triangles() << ' ' << 4 * m.n_triangles() << '\n';
    for (const auto& t : m.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << m.n_triangles() << '\n';
    for (int j = 0; j < m.n_triangles(); ++j) out << "5\n";
    out << "CELL_DATA " << m.n_triangles() << '\n';
    out << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < m.n_triangles(); ++j) out << detail::fmt(s.alpha[j]) << '\n';
    out << "SCALARS in_tumour int 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < m.n_triangles(); ++j) out << (s.mask.member[j] ? 1 : 0) << '\n';
    out << "POINT_DATA " << m.n_vertices() << '\n';
    out << "SCALARS c double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < m.n_vertices(); ++v) out << detail::fmt(s.c[v]) << '\n';
    out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < m.n_vertices(); ++v) out << detail::fmt(s.p[v]) << '\n';
    out << "VECTORS u double\n";
    for (int v = 0; v < m.n_vertices(); ++v)
        out << detail::fmt(s.u.at_vertex(v).x) << ' ' << detail::fmt(s.u.at_vertex(v).y)
            << " 0\n";
}

// Writes series.csv plus one fields_NNNN.vtk per snapshot into out_dir.
inline void write_outputs(const std::string& out_dir, const RunResult& result) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    const std::string csv = out_dir + "/series.csv";
    std::ofstream cs(csv);
    if (!cs) throw IoError("cannot write " + csv);
    write_series_csv(cs, result.series);

    for (const auto& [n, state] : result.snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "fields_%04d.vtk", n);
        const std::string path = out_dir + "/" + name;
        std::ofstream vs(path);
        if (!vs) throw IoError("cannot write " + path);
        write_vtk(vs, state);
    }
}

struct SeriesCurve {
    std::string label;
    std::vector<double> t;
    std::vector<double> radius;
};

inline SeriesCurve read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open csv: " + path);
    SeriesCurve curve;
    curve.label = std::filesystem::path(path).stem().string();
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (line != kSeriesHeader)
        throw IoError(path + ":1: unexpected header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != 8)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 8 columns");
        curve.t.push_back(row[0]);
        curve.radius.push_back(row[1]);
    }
    if (curve.t.empty()) throw IoError(path + ": no data rows");
    return curve;
}

// Self-contained SVG line chart of radius against time, one polyline per
// curve, legend from the file stems.
inline std::string render_radius_svg(const std::vector<SeriesCurve>& curves) {
    const int W = 800, H = 500;
    const double ml = 70, mr = 170, mt = 30, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double tmin = 1e300, tmax = -1e300, rmin = 1e300, rmax = -1e300;
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            tmin = std::min(tmin, c.t[i]);
            tmax = std::max(tmax, c.t[i]);
            rmin = std::min(rmin, c.radius[i]);
            rmax = std::max(rmax, c.radius[i]);
        }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (rmax <= rmin) rmax = rmin + 1.0;
    double rpad = 0.05 * (rmax - rmin);
    rmin -= rpad;
    rmax += rpad;

    auto X = [&](double t) { return ml + pw * (t - tmin) / (tmax - tmin); };
    auto Y = [&](double r) { return mt + ph * (1.0 - (r - rmin) / (rmax - rmin)); };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };
    auto tick = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.3g", v);
        return std::string(b);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        double t = tmin + (tmax - tmin) * i / nticks;
        double r = rmin + (rmax - rmin) * i / nticks;
        svg << "<line x1=\"" << num(X(t)) << "\" y1=\"" << num(mt + ph) << "\" x2=\""
            << num(X(t)) << "\" y2=\"" << num(mt + ph + 6) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(X(t)) << "\" y=\"" << num(mt + ph + 22)
            << "\" font-size=\"13\" text-anchor=\"middle\">" << tick(t) << "</text>\n";
        svg << "<line x1=\"" << num(ml - 6) << "\" y1=\"" << num(Y(r)) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(Y(r)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(ml - 10) << "\" y=\"" << num(Y(r) + 4)
            << "\" font-size=\"13\" text-anchor=\"end\">" << tick(r) << "</text>\n";
    }
    svg << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num((double)H - 12)
        << "\" font-size=\"14\" text-anchor=\"middle\">t</text>\n";
    svg << "<text x=\"18\" y=\"" << num(mt + ph / 2)
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(mt + ph / 2) << ")\">radius</text>\n";

    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& c = curves[k];
        const char* colour = palette[k % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            if (i) svg << ' ';
            svg << num(X(c.t[i])) << ',' << num(Y(c.radius[i]));
        }
        svg << "\"/>\n";
        double ly = mt + 18 + 20.0 * k;
        svg << "<line x1=\"" << num(ml + pw + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << num(ml + pw + 40) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << colour
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << num(ml + pw + 46) << "\" y=\"" << num(ly)
            << "\" font-size=\"12\">" << c.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_radius_report(const std::vector<std::string>& csv_paths,
                                const std::string& out_path) {
    std::vector<SeriesCurve> curves;
    for (const auto& p : csv_paths) curves.push_back(read_series_csv(p));
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << render_radius_svg(curves);
}

} // namespace tumsim
