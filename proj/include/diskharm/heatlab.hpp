/**
 * @file heatlab.hpp
 * @brief Steady heat equation on the unit disk and its comparison with Q transforms.
 *
 * Solves -k Laplace(u) = f with either u = 0 or -k du/dr = h u on the circle,
 * using a finite-volume scheme on a polar mesh. Node (i, j) sits at
 * r_i = i / n_r, theta_j = -pi + 2 pi j / n_theta and owns the control volume
 * [r_i - dr/2, r_i + dr/2] x [theta_j - dtheta/2, theta_j + dtheta/2]; the
 * origin owns the disk of radius dr/2 and the Robin ring owns a half cell.
 * The resulting matrix is symmetric positive definite and is solved by
 * preconditioned conjugate gradients.
 */
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "json.hpp"

#include "diskharm/errors.hpp"
#include "diskharm/field.hpp"
#include "diskharm/sources.hpp"
#include "diskharm/sources_config.hpp"
#include "diskharm/transforms.hpp"
#include "diskharm/verify.hpp"

namespace diskharm {

struct PolarMesh {
    int n_r = 64;
    int n_theta = 128;

    void validate() const {
        if (n_r < 2) {
            throw std::invalid_argument("PolarMesh: n_r must be at least 2");
        }
        if (n_theta < 16) {
            throw std::invalid_argument("PolarMesh: n_theta must be at least 16");
        }
    }
    [[nodiscard]] double dr() const { return 1.0 / n_r; }
    [[nodiscard]] double dtheta() const { return kTwoPi / n_theta; }
    [[nodiscard]] double theta(int j) const { return -kPi + dtheta() * j; }
};

struct HeatBoundary {
    enum class Kind { DirichletZero, Robin };

    Kind kind = Kind::DirichletZero;
    double h = 1.0; // heat-transfer coefficient, Robin only

    static HeatBoundary dirichlet_zero() { return {}; }
    static HeatBoundary robin(double h) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw std::invalid_argument("HeatBoundary: Robin coefficient must be positive");
        }
        return {Kind::Robin, h};
    }
    [[nodiscard]] std::string tag() const {
        return kind == Kind::DirichletZero ? "dirichlet_zero" : "robin(h=" + std::to_string(h) + ")";
    }
};

struct HeatProblem {
    SourceFunction source;
    double conductivity = 1.0;
    HeatBoundary boundary;
    PolarMesh mesh;

    void validate() const {
        source.validate();
        if (!(conductivity > 0.0) || !std::isfinite(conductivity)) {
            throw std::invalid_argument("HeatProblem: conductivity must be positive");
        }
        mesh.validate();
    }
};

struct SolverControls {
    double relative_tolerance = 1e-8;
    int max_iterations = 20000;
};

struct HeatSolution {
    /// Interior nodes r_i = i / n_r, i < n_r.
    Field field;
    /// Temperature on r = 1 (identically zero for Dirichlet).
    std::vector<double> boundary_values;
    int iterations = 0;
    /// Relative residual |b - A u| / |b| of the discrete system.
    double residual = 0.0;
};

namespace detail {

/// Mean of four sub-cell samples, which keeps sample points off cell edges.
inline double cell_source(const SourceFunction& f, double r_in, double r_out, double t, double dtheta) {
    double s = 0.0;
    for (double fr : {0.25, 0.75}) {
        for (double ft : {-0.25, 0.25}) {
            s += evaluate_source(f, {r_in + fr * (r_out - r_in), t + ft * dtheta});
        }
    }
    return 0.25 * s;
}

inline double origin_source(const SourceFunction& f, double dr) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        s += evaluate_source(f, {0.25 * dr, kPi / 4.0 + k * kPi / 2.0});
    }
    return 0.25 * s;
}

} // namespace detail

inline HeatSolution solve_steady_state(const HeatProblem& problem, const SolverControls& controls = {}) {
    problem.validate();
    const auto& mesh = problem.mesh;
    const int nr = mesh.n_r;
    const int nt = mesh.n_theta;
    const double dr = mesh.dr();
    const double dt = mesh.dtheta();
    const double k = problem.conductivity;
    const bool robin = problem.boundary.kind == HeatBoundary::Kind::Robin;
    const int rings = robin ? nr : nr - 1; // unknown rings 1..rings
    const int n = 1 + rings * nt;
    auto id = [nt](int i, int j) { return 1 + (i - 1) * nt + ((j % nt) + nt) % nt; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 5);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    // origin
    b(0) = detail::origin_source(problem.source, dr) * kPi * dr * dr / 4.0;
    const double c_origin = k * dt / 2.0;
    trip.emplace_back(0, 0, c_origin * nt);
    for (int j = 0; j < nt; ++j) {
        trip.emplace_back(0, id(1, j), -c_origin);
    }

    for (int i = 1; i <= rings; ++i) {
        const double r = i * dr;
        const bool outer = robin && i == nr;
        const double r_in = r - dr / 2.0;
        const double r_out = outer ? 1.0 : r + dr / 2.0;
        const double c_in = k * r_in * dt / dr;
        const double c_out = outer ? 0.0 : k * r_out * dt / dr;
        const double c_ang = k * (r_out - r_in) / (r * dt);
        const double loss = outer ? problem.boundary.h * dt : 0.0;
        const double area = 0.5 * (r_out * r_out - r_in * r_in) * dt;
        for (int j = 0; j < nt; ++j) {
            const int row = id(i, j);
            b(row) = detail::cell_source(problem.source, r_in, r_out, mesh.theta(j), dt) * area;
            trip.emplace_back(row, row, c_in + c_out + 2.0 * c_ang + loss);
            trip.emplace_back(row, i == 1 ? 0 : id(i - 1, j), -c_in);
            if (i < rings) {
                trip.emplace_back(row, id(i + 1, j), -c_out);
            }
            trip.emplace_back(row, id(i, j + 1), -c_ang);
            trip.emplace_back(row, id(i, j - 1), -c_ang);
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(controls.relative_tolerance);
    cg.setMaxIterations(controls.max_iterations);
    cg.compute(A);
    if (cg.info() != Eigen::Success) {
        throw NonConvergence("solve_steady_state: preconditioner factorization failed", 0, NAN);
    }
    const Eigen::VectorXd u = cg.solve(b);
    const double bnorm = b.norm();
    const double residual = bnorm > 0.0 ? (b - A * u).norm() / bnorm : (A * u).norm();
    if (cg.info() != Eigen::Success || !(residual <= 10.0 * controls.relative_tolerance)) {
        throw NonConvergence("solve_steady_state: conjugate gradients did not reach the tolerance",
                             static_cast<int>(cg.iterations()), residual);
    }

    std::vector<double> radii(nr);
    for (int i = 0; i < nr; ++i) {
        radii[i] = i * dr;
    }
    std::vector<double> angles(nt);
    for (int j = 0; j < nt; ++j) {
        angles[j] = mesh.theta(j);
    }
    HeatSolution sol;
    sol.field = Field::zeros(EvaluationGrid::from_axes(std::move(radii), std::move(angles)));
    for (int j = 0; j < nt; ++j) {
        sol.field.at(0, j) = u(0);
        for (int i = 1; i < nr; ++i) {
            sol.field.at(i, j) = u(id(i, j));
        }
    }
    sol.boundary_values.assign(nt, 0.0);
    if (robin) {
        for (int j = 0; j < nt; ++j) {
            sol.boundary_values[j] = u(id(nr, j));
        }
    }
    sol.field.meta.operator_name = "heat_steady_state[" + problem.boundary.tag() + "]";
    sol.field.meta.source_description = describe(problem.source);
    sol.iterations = static_cast<int>(cg.iterations());
    sol.residual = residual;
    return sol;
}

// ---------------------------------------------------------------------------
// Conjecture comparison
// ---------------------------------------------------------------------------

struct ConjectureConfig {
    PolarMesh mesh{48, 96};
    double conductivity = 1.0;
    Annulus annulus{0.1, 0.8};
    QuadratureSpec quadrature;
    SolverControls solver;
};

struct ConjectureReport {
    double correlation = 0.0;
    /// False when either field is constant on the matched points.
    bool correlation_defined = false;
    /// Least-squares c in u_heat ~ c * u_Q.
    double scale_factor = 0.0;
    /// RMS of u_heat - c * u_Q over the matched points.
    double residual_rms = 0.0;
    std::string boundary;
    std::size_t matched_points = 0;
    /// Points dropped because the Q transform did not converge there.
    std::size_t skipped_points = 0;
    int heat_iterations = 0;
};

struct ConjectureResult {
    ConjectureReport report;
    /// Both fields restricted to the mesh radii inside the annulus.
    Field heat;
    Field q_field;
};

inline nlohmann::json to_json(const ConjectureReport& r) {
    nlohmann::json j{{"correlation_defined", r.correlation_defined},
                     {"scale_factor", r.scale_factor},
                     {"residual_rms", r.residual_rms},
                     {"boundary", r.boundary},
                     {"matched_points", r.matched_points},
                     {"skipped_points", r.skipped_points},
                     {"heat_iterations", r.heat_iterations}};
    j["correlation"] = r.correlation_defined ? nlohmann::json(r.correlation) : nlohmann::json(nullptr);
    return j;
}

/**
 * @brief Solve the heat problem for f and compare it with the Q transform of f.
 *
 * The Q transform (prefactor 1) is evaluated at the heat mesh nodes whose
 * radius lies in the annulus; the report gives the Pearson correlation, the
 * least-squares scale and the residual of the scaled fit.
 */
inline ConjectureResult conjecture_compare(const SourceFunction& f, const HeatBoundary& boundary,
                                           const ConjectureConfig& config = {}) {
    HeatProblem problem{f, config.conductivity, boundary, config.mesh};
    const auto heat = solve_steady_state(problem, config.solver);
    const auto& hg = heat.field.grid;
    std::vector<double> radii;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < hg.n_r(); ++i) {
        if (hg.radii[i] >= config.annulus.r_min - 1e-12 && hg.radii[i] <= config.annulus.r_max + 1e-12) {
            radii.push_back(hg.radii[i]);
            rows.push_back(i);
        }
    }
    if (radii.empty()) {
        throw std::invalid_argument("conjecture_compare: no mesh radius inside the annulus");
    }
    const auto grid = EvaluationGrid::from_axes(radii, hg.angles);
    ConjectureResult out;
    out.q_field = q_transform(f, grid, 1.0, config.quadrature);
    out.heat = Field::zeros(grid);
    out.heat.meta = heat.field.meta;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t j = 0; j < grid.n_theta(); ++j) {
            out.heat.at(a, j) = heat.field.at(rows[a], j);
        }
    }

    std::vector<double> x;
    std::vector<double> y;
    auto& rep = out.report;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (out.q_field.converged[k] == 0) {
            ++rep.skipped_points;
            continue;
        }
        x.push_back(out.q_field.values[k]);
        y.push_back(out.heat.values[k]);
    }
    rep.boundary = boundary.tag();
    rep.heat_iterations = heat.iterations;
    rep.matched_points = x.size();
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    rep.scale_factor = sxx > 0.0 ? sxy / sxx : 0.0;
    double rss = 0.0, vx = 0.0, vy = 0.0, cxy = 0.0, scale_x = 0.0, scale_y = 0.0;
    const double mx = m > 0 ? sx / m : 0.0;
    const double my = m > 0 ? sy / m : 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        rss += std::pow(y[k] - rep.scale_factor * x[k], 2);
        vx += (x[k] - mx) * (x[k] - mx);
        vy += (y[k] - my) * (y[k] - my);
        cxy += (x[k] - mx) * (y[k] - my);
        scale_x = std::max(scale_x, std::abs(x[k]));
        scale_y = std::max(scale_y, std::abs(y[k]));
    }
    rep.residual_rms = m > 0 ? std::sqrt(rss / m) : 0.0;
    // spreads below quadrature/solver noise (relative 1e-8 of the field scale) count as constant
    const double tiny_x = m * std::pow(1e-8 * scale_x, 2);
    const double tiny_y = m * std::pow(1e-8 * scale_y, 2);
    rep.correlation_defined = m > 1 && vx > tiny_x && vy > tiny_y;
    rep.correlation = rep.correlation_defined ? cxy / std::sqrt(vx * vy) : 0.0;
    return out;
}

} // namespace diskharm
