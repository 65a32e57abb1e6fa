/**
 * @file gridfile.hpp
 * @brief CSV grid files with a JSON metadata sidecar.
 *
 * A grid file has the header `r,theta,value,converged` and one row per grid
 * point in row-major (radius, angle) order; numbers are written with 17
 * significant digits so a reload reproduces every double bit for bit. The
 * sidecar `<path>.meta.json` records the operator, the source, the prefactor,
 * the quadrature settings and the grid shape.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "diskharm/errors.hpp"
#include "diskharm/field.hpp"

namespace diskharm {

inline constexpr const char* kGridHeader = "r,theta,value,converged";
inline constexpr int kArtifactVersion = 1;

[[nodiscard]] inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

inline nlohmann::json to_json(const QuadratureSpec& q) {
    nlohmann::json j{{"nodes_radial", q.nodes_radial},
                     {"nodes_angular", q.nodes_angular},
                     {"adaptive_tol", q.adaptive_tol},
                     {"max_depth", q.max_depth},
                     {"max_evaluation_radius", q.max_evaluation_radius}};
    j["singularity_exponent"] = q.singularity_exponent ? nlohmann::json(*q.singularity_exponent) : nlohmann::json();
    return j;
}

struct WriteOptions {
    /// Add a wall-clock timestamp to the sidecar (breaks byte-for-byte reruns).
    bool timestamp = false;
};

inline nlohmann::json sidecar_json(const Field& field, const WriteOptions& options = {}) {
    nlohmann::json j{{"artifact_version", kArtifactVersion},
                     {"operator", field.meta.operator_name},
                     {"source", field.meta.source_description},
                     {"prefactor", field.meta.prefactor},
                     {"quadrature", to_json(field.meta.quadrature)},
                     {"grid",
                      {{"n_r", field.grid.n_r()}, {"n_theta", field.grid.n_theta()}, {"r_max", field.grid.r_max()}}},
                     {"all_converged", field.all_converged()}};
    if (options.timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["timestamp"] = buf;
    }
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

[[nodiscard]] inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[nodiscard]] inline std::string grid_csv(const Field& field) {
    std::string out = kGridHeader;
    out += '\n';
    for (std::size_t i = 0; i < field.grid.n_r(); ++i) {
        for (std::size_t j = 0; j < field.grid.n_theta(); ++j) {
            out += format_double(field.grid.radii[i]) + ',' + format_double(field.grid.angles[j]) + ',' +
                   format_double(field.at(i, j)) + ',' + (field.converged_at(i, j) ? "1" : "0") + '\n';
        }
    }
    return out;
}

/// Write the CSV and its sidecar.
inline void write_grid(const std::string& path, const Field& field, const WriteOptions& options = {}) {
    write_text(path, grid_csv(field));
    write_text(sidecar_path(path), sidecar_json(field, options).dump(2) + "\n");
}

/**
 * @brief Read a grid CSV back into a Field.
 *
 * The grid axes are recovered from the row order; metadata comes from the
 * sidecar when present. Throws ParseError naming the line on malformed input.
 */
inline Field read_grid(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != kGridHeader) {
        throw ParseError(path + " line 1", std::string("expected header '") + kGridHeader + "'");
    }
    std::vector<double> r, t, v;
    std::vector<std::uint8_t> c;
    for (int lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell[4];
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(row, cell[k], ',')) {
                throw ParseError(path + " line " + std::to_string(lineno), "expected 4 columns");
            }
        }
        try {
            std::size_t used = 0;
            r.push_back(std::stod(cell[0], &used));
            t.push_back(std::stod(cell[1]));
            v.push_back(std::stod(cell[2]));
        } catch (const std::exception&) {
            throw ParseError(path + " line " + std::to_string(lineno), "malformed number");
        }
        if (cell[3] != "0" && cell[3] != "1") {
            throw ParseError(path + " line " + std::to_string(lineno), "converged must be 0 or 1");
        }
        c.push_back(cell[3] == "1" ? 1 : 0);
    }
    if (r.empty()) {
        throw ParseError(path, "no data rows");
    }
    std::size_t nt = 1;
    while (nt < r.size() && r[nt] == r[0]) {
        ++nt;
    }
    if (r.size() % nt != 0) {
        throw ParseError(path, "row count is not a multiple of the angle count");
    }
    std::vector<double> radii, angles(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(nt));
    for (std::size_t k = 0; k < r.size(); k += nt) {
        radii.push_back(r[k]);
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] != radii[k / nt] || t[k] != angles[k % nt]) {
            throw ParseError(path + " line " + std::to_string(k + 2), "rows do not form a tensor grid");
        }
    }
    Field f = Field::zeros(EvaluationGrid::from_axes(std::move(radii), std::move(angles)));
    f.values = std::move(v);
    f.converged = std::move(c);
    std::ifstream side(sidecar_path(path));
    if (side) {
        try {
            const auto j = nlohmann::json::parse(side);
            f.meta.operator_name = j.value("operator", "");
            f.meta.source_description = j.value("source", "");
            f.meta.prefactor = j.value("prefactor", 1.0);
            if (j.contains("quadrature")) {
                const auto& q = j["quadrature"];
                f.meta.quadrature.nodes_radial = q.value("nodes_radial", f.meta.quadrature.nodes_radial);
                f.meta.quadrature.nodes_angular = q.value("nodes_angular", f.meta.quadrature.nodes_angular);
                f.meta.quadrature.adaptive_tol = q.value("adaptive_tol", f.meta.quadrature.adaptive_tol);
                f.meta.quadrature.max_depth = q.value("max_depth", f.meta.quadrature.max_depth);
                f.meta.quadrature.max_evaluation_radius =
                    q.value("max_evaluation_radius", f.meta.quadrature.max_evaluation_radius);
                if (q.contains("singularity_exponent") && q["singularity_exponent"].is_number()) {
                    f.meta.quadrature.singularity_exponent = q["singularity_exponent"].get<double>();
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(sidecar_path(path), e.what());
        }
    }
    return f;
}

/// Largest absolute difference between two fields on the same grid (inf if the grids differ).
[[nodiscard]] inline double max_field_difference(const Field& a, const Field& b) {
    if (a.grid.radii != b.grid.radii || a.grid.angles != b.grid.angles || a.values.size() != b.values.size()) {
        return INFINITY;
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        m = std::max(m, std::abs(a.values[k] - b.values[k]));
        if (a.converged[k] != b.converged[k]) {
            return INFINITY;
        }
    }
    return m;
}

/// Write, read back and compare; returns the maximum difference (0 when exact).
inline double write_and_verify(const std::string& path, const Field& field, const WriteOptions& options = {}) {
    write_grid(path, field, options);
    return max_field_difference(field, read_grid(path));
}

/// Kernel profiles: columns theta, then one column per radius.
[[nodiscard]] inline std::string profiles_csv(const std::vector<double>& thetas, const std::vector<double>& radii,
                                              const std::vector<std::vector<double>>& columns) {
    std::string out = "theta";
    for (double r : radii) {
        out += ",r=" + format_double(r);
    }
    out += '\n';
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        out += format_double(thetas[k]);
        for (const auto& col : columns) {
            out += ',' + format_double(col[k]);
        }
        out += '\n';
    }
    return out;
}

} // namespace diskharm
