// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Thresholds are fixed here and are not tuned to the measured values; a
// criterion that does not hold is reported as FAIL with its measurement.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diskharm/diskharm.hpp"

using namespace diskharm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome q_normalization() {
    double worst = 0.0;
    double slowest = 0.0;
    int points = 0;
    for (double r : {0.0, 0.3, 0.6, 0.8, 0.9}) {
        for (double t : {-3.0, -1.5, 0.0, 1.0, 2.5}) {
            const auto t0 = Clock::now();
            const auto v = kernel_transform_at(characteristic_disk(1.0), r, t, 1.0 / kPi,
                                               [](double s, double psi) { return q_kernel(s, psi); });
            slowest = std::max(slowest, seconds_since(t0));
            worst = std::max(worst, std::abs(v.value - 1.0));
            ++points;
        }
    }
    return {worst <= 1e-6 && slowest <= 5.0 && points == 25,
            fmt("max |I - 1| = %.3e over %d points (<= 1e-6), slowest integral %.3f s (<= 5 s)", worst, points,
                slowest)};
}

Outcome reproducing_suite() {
    const auto t0 = Clock::now();
    const auto grid = EvaluationGrid::uniform(0.8, 9, 24);
    double worst = 0.0;
    int functions = 0;
    for (int n = 0; n <= 8; ++n) {
        for (int kind = 0; kind < 2; ++kind) {
            if (n == 0 && kind == 1) {
                continue;
            }
            const DiskFunction u = [n, kind](double r, double t) {
                return std::pow(r, n) * (kind == 0 ? std::cos(n * t) : std::sin(n * t));
            };
            const double u0 = n == 0 ? 1.0 : 0.0;
            const Field f = harmonic_rep(u, u0, grid);
            for (std::size_t i = 0; i < grid.n_r(); ++i) {
                for (std::size_t j = 0; j < grid.n_theta(); ++j) {
                    worst = std::max(worst, std::abs(f.at(i, j) - u(grid.radii[i], grid.angles[j])));
                }
            }
            ++functions;
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-6 && elapsed <= 300.0,
            fmt("%d harmonics (n <= 8) on a 9x24 grid r <= 0.8: max error %.3e (<= 1e-6), %.1f s (<= 300 s)",
                functions, worst, elapsed)};
}

Outcome figure4_plateau() {
    const auto fc = std::get<QCase>(figure_case(4).payload);
    const Field f = q_transform(fc.source, EvaluationGrid::uniform(), fc.prefactor);
    const double spread = f.max_value() - f.min_value();
    const double offset = std::max(std::abs(f.max_value() - kPi / 16.0), std::abs(f.min_value() - kPi / 16.0));
    return {spread <= 1e-3 && offset <= 1e-3 && f.all_converged(),
            fmt("spread %.3e (<= 1e-3), max |u - pi/16| = %.3e (<= 1e-3), pi/16 = %.6f", spread, offset,
                kPi / 16.0)};
}

Outcome figure5_peaks() {
    const auto grid = EvaluationGrid::uniform();
    const auto single = characteristic_rect(PolarRectangle::make(0.25, 0.5, 0.0, kPi / 4.0));
    const double first = q_transform(single, grid, 1.0).max_value();
    const auto fc = std::get<QCase>(figure_case(5).payload);
    const double second = q_transform(fc.source, grid, fc.prefactor).max_value();
    const bool ok = std::abs(first - 0.17) <= 0.2 * 0.17 && std::abs(second - 0.5) <= 0.2 * 0.5;
    return {ok, fmt("single rectangle max %.4f (0.17 +- 20%%), two-rectangle max %.4f (0.5 +- 20%%)", first, second)};
}

Outcome poisson_identities() {
    double cos_err = 0.0;
    const BoundaryFunction c{boundary::Cos{1}};
    for (double r : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        for (double t : {-3.0, -2.0, -1.0, 0.0, 0.5, 1.5, 3.0}) {
            cos_err = std::max(cos_err, std::abs(poisson_integral_at(c, r, t).value - r * std::cos(t)));
        }
    }
    const auto fc = std::get<PoissonCase>(figure_case(8).payload);
    const double center = poisson_integral_at(fc.boundary, 0.0, 0.0).value;
    const double near = poisson_integral_at(fc.boundary, 0.99, 0.0).value;
    const bool ok = cos_err <= 1e-9 && std::abs(center - 1.0 / 6.0) <= 1e-9 && near > 0.9;
    return {ok, fmt("cos identity max error %.3e (<= 1e-9); arc measure at 0: |%.12f - 1/6| = %.3e (<= 1e-9); "
                    "at (0.99, 0): %.6f (> 0.9)",
                    cos_err, center, std::abs(center - 1.0 / 6.0), near)};
}

/// Angular distance from theta to the arc [a, b] (0 inside).
double distance_to_arc(double theta, const Arc& arc) {
    if (arc.length() >= kTwoPi - 1e-12) {
        return 0.0;
    }
    auto wrap = [](double x) { return std::abs(std::remainder(x, kTwoPi)); };
    if (PolarRectangle{0.0, 1.0, arc.a, arc.b}.angular_representative(theta)) {
        return 0.0;
    }
    return std::min(wrap(theta - arc.a), wrap(theta - arc.b));
}

Outcome half_ratio() {
    std::ostringstream detail;
    bool ok = true;
    std::vector<double> radii;
    for (int i = 0; i <= 10; ++i) {
        radii.push_back(0.2 + 0.05 * i);
    }
    std::vector<double> angles;
    for (int j = 0; j < 64; ++j) {
        angles.push_back(-kPi + kTwoPi * j / 64);
    }
    for (int id : {11, 12, 13}) {
        const auto fc = figure_case(id);
        QCase q;
        PoissonCase p;
        if (const auto* pair = std::get_if<PairedCase>(&fc.payload)) {
            q = pair->q;
            p = pair->poisson;
        } else {
            q = std::get<QCase>(fc.payload);
            p = std::get<PoissonCase>(figure_case(*fc.compare_with).payload);
        }
        // a full-circle source arc leaves no point farther than pi/3 from it; use the whole band
        const bool full_circle = p.arc.length() >= kTwoPi - 1e-12;
        int sampled = 0;
        int inside = 0;
        for (double r : radii) {
            for (double t : angles) {
                if (!full_circle && distance_to_arc(t, p.arc) <= kPi / 3.0) {
                    continue;
                }
                const double pv = poisson_integral_at(p.boundary, r, t).value;
                const double qv = q_transform_at(q.source, r, t, q.prefactor).value;
                ++sampled;
                const double ratio = qv / pv;
                if (pv != 0.0 && ratio >= 0.35 && ratio <= 0.65) {
                    ++inside;
                }
            }
        }
        const double share = sampled > 0 ? static_cast<double>(inside) / sampled : 0.0;
        ok = ok && sampled > 0 && share >= 0.8;
        detail << "fig " << id << ": " << inside << "/" << sampled << " = " << fmt("%.1f%%", 100.0 * share)
               << (full_circle ? " (full band)" : "") << "; ";
    }
    detail << "need >= 80% in [0.35, 0.65] (reported with its threshold)";
    return {ok, detail.str()};
}

Outcome harmonicity() {
    std::ostringstream detail;
    const double h = 1e-3;
    double worst = 0.0;
    int worst_id = 0;
    DiskFunction worst_u;
    for (const auto& [id, qc] : catalog_q_cases()) {
        const SourceFunction src = qc.source;
        const double c = qc.prefactor;
        const DiskFunction u = [src, c](double r, double t) { return q_transform_at(src, r, t, c).value; };
        const auto rep = laplacian_residual(u, Annulus{0.1, 0.8}, h, h);
        if (rep.normalized_max_residual > worst) {
            worst = rep.normalized_max_residual;
            worst_id = id;
            worst_u = u;
        }
        detail << id << ":" << fmt("%.1e", rep.normalized_max_residual) << " ";
    }
    // a residual that grows like h^2 is stencil truncation rather than a non-harmonic output
    const double doubled = laplacian_residual(worst_u, Annulus{0.1, 0.8}, 2 * h, 2 * h).normalized_max_residual;
    detail << fmt("| worst normalized residual %.3e on figure %d at h = %g (<= 1e-3); at 2h: %.3e (ratio %.2f)",
                  worst, worst_id, h, doubled, doubled / worst);
    return {worst <= 1e-3, detail.str()};
}

/// A random source shaped like the catalog entries (fixed seed, so the run is reproducible).
SourceFunction random_source(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto rect = [&](bool to_edge) {
        double r0 = 0.6 * u01(rng);
        double r1 = to_edge ? 1.0 : std::min(1.0, r0 + 0.1 + 0.5 * u01(rng));
        if (to_edge) {
            r0 = 0.5 + 0.4 * u01(rng);
        }
        const double width = 0.2 + (kTwoPi - 0.2) * u01(rng);
        const double lo = -kPi + (kTwoPi - width) * u01(rng);
        return PolarRectangle::make(r0, r1, lo, lo + width);
    };
    auto leaf = [&]() -> SourceFunction {
        switch (static_cast<int>(u01(rng) * 5)) {
        case 0: return characteristic_rect(rect(false));
        case 1: return characteristic_disk(0.1 + 0.8 * u01(rng));
        case 2:
            return separable(radial::PowerOfOneMinusRho{0.05 + 0.4 * u01(rng)}, angular::Cos{1 + static_cast<int>(3 * u01(rng))},
                             rect(true));
        case 3:
            return separable(radial::GaussianBump{1.0 + 9.0 * u01(rng), 0.2 + 0.6 * u01(rng), 5.0 + 10.0 * u01(rng)},
                             angular::Sin{1 + static_cast<int>(2 * u01(rng))}, rect(false));
        default: return separable(radial::RhoPower{1 + static_cast<int>(2 * u01(rng))}, angular::AbsPhi{}, rect(false));
        }
    };
    const int terms = 1 + static_cast<int>(3 * u01(rng));
    std::vector<source::Term> out;
    for (int k = 0; k < terms; ++k) {
        out.push_back({-2.0 + 4.0 * u01(rng), leaf()});
    }
    return weighted_sum(std::move(out));
}

Outcome projection_properties() {
    std::mt19937_64 rng(20240601);
    int contracting = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto src = random_source(rng);
        const auto rep = projection_contraction(src, 0.95, 128);
        contracting += rep.contracts ? 1 : 0;
        worst_ratio = std::max(worst_ratio, rep.projection_norm / rep.bound);
    }
    double worst_idem = 0.0;
    int worst_id = 0;
    const auto grid = EvaluationGrid::uniform(0.9, 3, 96);
    for (const auto& [id, qc] : catalog_q_cases()) {
        const auto rep = projection_idempotence(qc.source, grid);
        if (rep.max_error > worst_idem) {
            worst_idem = rep.max_error;
            worst_id = id;
        }
    }
    return {contracting == 20 && worst_idem <= 5e-3,
            fmt("contraction holds for %d/20 random sources (largest ||Pf||/||f|| = %.4f, need <= 1 + 1e-6); "
                "idempotence max error %.3e on figure %d (<= 5e-3)",
                contracting, worst_ratio, worst_idem, worst_id)};
}

Outcome analytic_reproduction() {
    std::vector<ComplexPoint> points;
    for (int k = 0; k < 10; ++k) {
        const double r = 0.05 + 0.085 * k;
        points.push_back(ComplexPoint::interior(r * std::cos(0.7 + 1.3 * k), r * std::sin(0.7 + 1.3 * k)));
    }
    double worst = 0.0;
    for (double alpha : {0.0, 1.0, 2.5}) {
        for (int n = 0; n <= 5; ++n) {
            const auto p = TaylorPolynomial::monomial(n);
            for (const auto& z : points) {
                worst = std::max(worst, std::abs(analytic_rep(p, alpha, z).value - p(z.value())));
            }
        }
    }
    return {worst <= 1e-7, fmt("z^n, n <= 5, alpha in {0, 1, 2.5}, 10 points: max error %.3e (<= 1e-7)", worst)};
}

Outcome heat_oracle() {
    std::ostringstream detail;
    const auto sol = solve_steady_state({characteristic_disk(1.0), 1.0, HeatBoundary::dirichlet_zero(), {128, 256}});
    double err = 0.0;
    for (std::size_t i = 0; i < sol.field.grid.n_r(); ++i) {
        const double r = sol.field.grid.radii[i];
        for (std::size_t j = 0; j < sol.field.grid.n_theta(); ++j) {
            err = std::max(err, std::abs(sol.field.at(i, j) - (1.0 - r * r) / 4.0));
        }
    }
    // the uniform-source solution is reproduced exactly by the scheme, so the order is
    // observed on the manufactured solution u = (r - r^3) cos(theta), f = 8 r cos(theta)
    const auto manufactured =
        weighted_sum({{8.0, separable(radial::RhoPower{1}, angular::Cos{1}, PolarRectangle::full_disk())}});
    std::vector<double> errors;
    for (int n : {32, 64, 128}) {
        const auto s = solve_steady_state({manufactured, 1.0, HeatBoundary::dirichlet_zero(), {n, 2 * n}});
        double e = 0.0;
        for (std::size_t i = 0; i < s.field.grid.n_r(); ++i) {
            const double r = s.field.grid.radii[i];
            for (std::size_t j = 0; j < s.field.grid.n_theta(); ++j) {
                e = std::max(e, std::abs(s.field.at(i, j) - (r - r * r * r) * std::cos(s.field.grid.angles[j])));
            }
        }
        errors.push_back(e);
    }
    const double p1 = std::log2(errors[0] / errors[1]);
    const double p2 = std::log2(errors[1] / errors[2]);
    const bool order_ok = p1 >= 1.8 && p1 <= 2.2 && p2 >= 1.8 && p2 <= 2.2;
    detail << fmt("f=1 Dirichlet 128x256 max error %.3e (<= 1e-3); observed orders %.3f, %.3f (in [1.8, 2.2]); ",
                  err, p1, p2);

    bool reports_ok = true;
    for (int id : {4, 15}) {
        const auto src = std::get<QCase>(figure_case(id).payload).source;
        for (const auto& b : {HeatBoundary::dirichlet_zero(), HeatBoundary::robin(1.0)}) {
            const auto res = conjecture_compare(src, b);
            const auto& rep = res.report;
            bool finite = true;
            for (double v : res.heat.values) {
                finite = finite && std::isfinite(v);
            }
            for (double v : res.q_field.values) {
                finite = finite && std::isfinite(v);
            }
            const bool complete = finite && rep.matched_points > 0 &&
                                  rep.matched_points + rep.skipped_points == res.q_field.values.size() &&
                                  std::isfinite(rep.scale_factor) && std::isfinite(rep.residual_rms) &&
                                  !rep.boundary.empty();
            reports_ok = reports_ok && complete;
            detail << "fig " << id << " " << (b.kind == HeatBoundary::Kind::Robin ? "robin" : "dirichlet") << ": "
                   << (rep.correlation_defined ? fmt("corr %.4f", rep.correlation) : std::string("corr undefined"))
                   << fmt(" scale %.4f", rep.scale_factor) << (complete ? "" : " INCOMPLETE") << "; ";
        }
    }
    detail << "conjecture reported, not asserted";
    return {err <= 1e-3 && order_ok && reports_ok, detail.str()};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "Q normalization", q_normalization},
        {2, "harmonic reproduction", reproducing_suite},
        {3, "figure 4 plateau", figure4_plateau},
        {4, "figure 5 peaks", figure5_peaks},
        {5, "Poisson identities", poisson_identities},
        {6, "half-ratio pattern", half_ratio},
        {7, "harmonicity of Q outputs", harmonicity},
        {8, "projection contraction and idempotence", projection_properties},
        {9, "analytic representation", analytic_reproduction},
        {10, "heat solver and conjecture harness", heat_oracle},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.passed ? 0 : 1;
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
