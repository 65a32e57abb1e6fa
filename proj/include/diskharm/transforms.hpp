/**
 * @file transforms.hpp
 * @brief Reproducing-kernel integral operators on the unit disk.
 *
 *   poisson_integral  u(r,t) = 1/(2 pi) int f(phi) P(r, t - phi) dphi
 *   q_transform       c * int int f(rho,phi) Q(r rho, t - phi) rho drho dphi
 *   harmonic_rep      -u(0) + 2/pi int int u Q rho drho dphi
 *   bergman_project   2/pi int int f Q rho drho dphi - 1/pi int int f rho drho dphi
 *   analytic_rep      (1+a)/pi int int (1-rho^2)^a f(w) (1 - z conj(w))^-(2+a) rho drho dphi
 *
 * The projection's mean term follows from the harmonic representation and the
 * normalization 1/pi int int Q = 1; it reproduces harmonic inputs including
 * their value at the origin.
 *
 * Sources are split into leaves (one per rectangle of support). The angular
 * range of each leaf is cut at the kernel peak phi = theta and at kinks of the
 * angular factor; sub-intervals ending at a |log|phi|| singularity are graded
 * with phi = c + (d - c) u^3.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "diskharm/field.hpp"
#include "diskharm/kernels.hpp"
#include "diskharm/quadrature.hpp"
#include "diskharm/sources.hpp"
#include "diskharm/sources_config.hpp"

namespace diskharm {

struct PointValue {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

using DiskFunction = std::function<double(double rho, double phi)>;

namespace detail {

struct SourceLeaf {
    double coefficient = 1.0;
    PolarRectangle region;
    DiskFunction regular; // integrand without the (1 - rho)^-beta factor
    std::optional<double> beta;
    std::vector<double> kinks;
    std::vector<double> log_points;
};

inline void angular_features(const AngularFactor& a, std::vector<double>& kinks,
                             std::vector<double>& logs) {
    if (std::holds_alternative<angular::AbsPhi>(a)) {
        kinks.push_back(0.0);
    } else if (std::holds_alternative<angular::AbsLogAbsPhi>(a)) {
        kinks.push_back(-1.0);
        kinks.push_back(1.0);
        logs.push_back(0.0);
    }
}

inline void flatten(const SourceFunction& s, double scale, std::vector<SourceLeaf>& out) {
    std::visit(
        [&](const auto& x) {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, source::CharacteristicDisk>) {
                out.push_back({scale, PolarRectangle{0.0, x.radius, -kPi, kPi},
                               [](double, double) { return 1.0; }, std::nullopt, {}, {}});
            } else if constexpr (std::is_same_v<X, source::CharacteristicRect>) {
                out.push_back({scale, x.rect, [](double, double) { return 1.0; }, std::nullopt, {}, {}});
            } else if constexpr (std::is_same_v<X, source::SeparableOnRect>) {
                SourceLeaf leaf{scale, x.rect, {}, std::nullopt, {}, {}};
                const auto* sing = std::get_if<radial::PowerOfOneMinusRho>(&x.radial);
                if (sing != nullptr && x.rect.r_hi == 1.0) {
                    leaf.beta = sing->beta;
                    leaf.regular = [ang = x.angular](double, double phi) {
                        return evaluate_angular(ang, phi);
                    };
                } else {
                    leaf.regular = [rad = x.radial, ang = x.angular](double rho, double phi) {
                        return evaluate_radial(rad, rho) * evaluate_angular(ang, phi);
                    };
                }
                angular_features(x.angular, leaf.kinks, leaf.log_points);
                out.push_back(std::move(leaf));
            } else {
                for (const auto& t : x.terms) {
                    flatten(t.function, scale * t.coefficient, out);
                }
            }
        },
        s.v);
}

inline std::vector<SourceLeaf> leaves_of(const SourceFunction& s) {
    std::vector<SourceLeaf> out;
    flatten(s, 1.0, out);
    return out;
}

enum class Grading { None, AtLow, AtHigh };

struct AngularPiece {
    double lo, hi;
    Grading grading;
};

/// Cut [lo, hi] at the peak and at features; grade pieces touching a log point.
inline std::vector<AngularPiece> angular_pieces(double lo, double hi, std::optional<double> peak,
                                                const std::vector<double>& kinks,
                                                const std::vector<double>& logs) {
    const double eps = 1e-13 * std::max(1.0, hi - lo);
    std::vector<double> cuts{lo, hi};
    auto add = [&](double c) {
        if (c > lo + eps && c < hi - eps) {
            cuts.push_back(c);
        }
    };
    if (peak) {
        add(*peak);
    }
    for (double k : kinks) {
        add(k);
    }
    for (double l : logs) {
        add(l);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return std::abs(a - b) <= eps; }),
               cuts.end());
    auto is_log = [&](double c) {
        return std::any_of(logs.begin(), logs.end(), [&](double l) { return std::abs(l - c) <= eps; });
    };
    std::vector<AngularPiece> pieces;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double c = cuts[k];
        const double d = cuts[k + 1];
        const bool lo_log = is_log(c);
        const bool hi_log = is_log(d);
        if (lo_log && hi_log) {
            const double m = 0.5 * (c + d);
            pieces.push_back({c, m, Grading::AtLow});
            pieces.push_back({m, d, Grading::AtHigh});
        } else {
            pieces.push_back({c, d, lo_log ? Grading::AtLow : hi_log ? Grading::AtHigh : Grading::None});
        }
    }
    return pieces;
}

struct GradedMap {
    double c, d;
    Grading grading;

    [[nodiscard]] double u_lo() const { return grading == Grading::None ? c : 0.0; }
    [[nodiscard]] double u_hi() const { return grading == Grading::None ? d : 1.0; }
    [[nodiscard]] double phi(double u) const {
        switch (grading) {
        case Grading::AtLow: return c + (d - c) * u * u * u;
        case Grading::AtHigh: return d - (d - c) * u * u * u;
        case Grading::None: break;
        }
        return u;
    }
    [[nodiscard]] double jacobian(double u) const {
        return grading == Grading::None ? 1.0 : 3.0 * (d - c) * u * u;
    }
    /// Peak location in u, if the peak is one of the piece ends.
    [[nodiscard]] std::optional<double> u_of(double phi_peak) const {
        if (grading == Grading::None) {
            return phi_peak;
        }
        const double eps = 1e-12;
        if (std::abs(phi_peak - c) <= eps) {
            return grading == Grading::AtLow ? 0.0 : 1.0;
        }
        if (std::abs(phi_peak - d) <= eps) {
            return grading == Grading::AtLow ? 1.0 : 0.0;
        }
        return std::nullopt;
    }
};

/// int int leaf(rho, phi) K(rho, phi) rho drho dphi, K evaluated by `kernel`.
template <class Kernel>
QuadratureResult integrate_leaf(const SourceLeaf& leaf, const Kernel& kernel,
                                std::optional<PeakHint> peak, const QuadratureSpec& spec) {
    const PolarRectangle& reg = leaf.region;
    std::optional<double> peak_phi;
    if (peak && peak->active) {
        peak_phi = reg.angular_representative(peak->theta);
    }
    QuadratureResult total;
    for (const auto& piece : angular_pieces(reg.theta_lo, reg.theta_hi, peak_phi, leaf.kinks,
                                            leaf.log_points)) {
        const GradedMap map{piece.lo, piece.hi, piece.grading};
        PeakHint hint;
        if (peak_phi) {
            if (auto u = map.u_of(*peak_phi)) {
                hint = PeakHint::at(peak->r, *u);
            }
        }
        auto mapped = [&](double rho, double u) {
            const double phi = map.phi(u);
            return leaf.regular(rho, phi) * kernel(rho, phi) * map.jacobian(u);
        };
        // (rho, u) rectangle; u spans at most the original angular width
        const PolarRectangle box{reg.r_lo, reg.r_hi, map.u_lo(), map.u_hi()};
        if (leaf.beta) {
            total += integrate_singular_radial<double>(mapped, *leaf.beta, box, spec, hint);
        } else {
            total += integrate_polar<double>(mapped, box, spec, hint);
        }
    }
    return total;
}

inline void check_evaluation_radius(double r, const QuadratureSpec& spec) {
    if (!(r >= 0.0 && r <= spec.max_evaluation_radius)) {
        throw DomainError("evaluation radius " + std::to_string(r) + " outside [0, " +
                          std::to_string(spec.max_evaluation_radius) + "]");
    }
}

struct BoundaryLeaf {
    double coefficient = 1.0;
    double lo = -kPi;
    double hi = kPi;
    std::function<double(double)> g;
    std::vector<double> kinks;
    std::vector<double> log_points;
};

inline void flatten(const BoundaryFunction& f, double scale, std::vector<BoundaryLeaf>& out) {
    std::visit(
        [&](const auto& x) {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, boundary::CharacteristicArc>) {
                out.push_back({scale, x.arc.a, x.arc.b, [](double) { return 1.0; }, {}, {}});
            } else if constexpr (std::is_same_v<X, boundary::AbsTheta>) {
                out.push_back({scale, -kPi, kPi, [](double t) { return std::abs(t); }, {0.0}, {}});
            } else if constexpr (std::is_same_v<X, boundary::ThetaSquaredOnArc>) {
                out.push_back({scale, x.arc.a, x.arc.b, [](double t) { return t * t; }, {}, {}});
            } else if constexpr (std::is_same_v<X, boundary::SinOnArc>) {
                out.push_back({scale, x.arc.a, x.arc.b, [](double t) { return std::sin(t); }, {}, {}});
            } else if constexpr (std::is_same_v<X, boundary::AbsLogAbsOnArc>) {
                out.push_back({scale, x.arc.a, x.arc.b,
                               [](double t) { return std::abs(std::log(std::abs(t))); },
                               {-1.0, 1.0},
                               {0.0}});
            } else if constexpr (std::is_same_v<X, boundary::Cos>) {
                out.push_back({scale, -kPi, kPi, [n = x.n](double t) { return std::cos(n * t); }, {}, {}});
            } else if constexpr (std::is_same_v<X, boundary::ConstantOne>) {
                out.push_back({scale, -kPi, kPi, [](double) { return 1.0; }, {}, {}});
            } else {
                for (const auto& t : x.terms) {
                    flatten(t.function, scale * t.coefficient, out);
                }
            }
        },
        f.v);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Pointwise evaluators
// ---------------------------------------------------------------------------

/// 1/(2 pi) int f(phi) P(r, theta - phi) dphi at one point.
inline PointValue poisson_integral_at(const BoundaryFunction& f, double r, double theta,
                                      const QuadratureSpec& spec = {}) {
    detail::check_evaluation_radius(r, spec);
    std::vector<detail::BoundaryLeaf> leaves;
    detail::flatten(f, 1.0, leaves);
    PointValue out;
    for (const auto& leaf : leaves) {
        const Arc arc{leaf.lo, leaf.hi};
        const PolarRectangle span{0.0, 1.0, leaf.lo, leaf.hi};
        const auto peak = span.angular_representative(theta);
        for (const auto& piece : detail::angular_pieces(arc.a, arc.b, peak, leaf.kinks, leaf.log_points)) {
            const detail::GradedMap map{piece.lo, piece.hi, piece.grading};
            auto g = [&](double u) {
                const double phi = map.phi(u);
                return leaf.g(phi) * poisson_kernel(r, theta - phi) * map.jacobian(u);
            };
            const auto res = integrate_line<double>(g, map.u_lo(), map.u_hi(), spec);
            out.value += leaf.coefficient * res.value / kTwoPi;
            out.error_estimate += std::abs(leaf.coefficient) * res.error_estimate / kTwoPi;
            out.converged = out.converged && res.converged;
        }
    }
    return out;
}

/// prefactor * int int f(rho, phi) K(r rho, theta - phi) rho drho dphi with a custom real kernel.
template <class QKernel>
PointValue kernel_transform_at(const SourceFunction& f, double r, double theta, double prefactor,
                               const QKernel& qk, const QuadratureSpec& spec = {}) {
    detail::check_evaluation_radius(r, spec);
    PointValue out;
    for (const auto& leaf : detail::leaves_of(f)) {
        auto kernel = [&](double rho, double phi) { return qk(r * rho, theta - phi); };
        const auto res = detail::integrate_leaf(leaf, kernel, PeakHint::at(r, theta), spec);
        out.value += leaf.coefficient * res.value;
        out.error_estimate += std::abs(leaf.coefficient) * res.error_estimate;
        out.converged = out.converged && res.converged;
    }
    out.value *= prefactor;
    out.error_estimate *= std::abs(prefactor);
    return out;
}

/// prefactor * int int f(rho, phi) Q(r rho, theta - phi) rho drho dphi at one point.
inline PointValue q_transform_at(const SourceFunction& f, double r, double theta, double prefactor,
                                 const QuadratureSpec& spec = {}) {
    return kernel_transform_at(f, r, theta, prefactor, [](double s, double psi) { return q_kernel(s, psi); },
                               spec);
}

/// int int f rho drho dphi (the transform at r = 0 without prefactor).
inline PointValue source_integral(const SourceFunction& f, const QuadratureSpec& spec = {}) {
    PointValue out;
    for (const auto& leaf : detail::leaves_of(f)) {
        auto one = [](double, double) { return 1.0; };
        const auto res = detail::integrate_leaf(leaf, one, std::nullopt, spec);
        out.value += leaf.coefficient * res.value;
        out.error_estimate += std::abs(leaf.coefficient) * res.error_estimate;
        out.converged = out.converged && res.converged;
    }
    return out;
}

/// -u(0) + 2/pi int int u Q rho drho dphi for a function given on the whole disk.
inline PointValue harmonic_rep_at(const DiskFunction& u, double u_at_origin, double r, double theta,
                                  const QuadratureSpec& spec = {}) {
    detail::check_evaluation_radius(r, spec);
    auto g = [&](double rho, double phi) { return u(rho, phi) * q_kernel(r * rho, theta - phi); };
    const auto res = integrate_polar<double>(g, PolarRectangle::full_disk(), spec, PeakHint::at(r, theta));
    return {-u_at_origin + 2.0 / kPi * res.value, 2.0 / kPi * res.error_estimate, res.converged};
}

inline PointValue bergman_project_at(const SourceFunction& f, double r, double theta,
                                     const PointValue& mean, const QuadratureSpec& spec = {}) {
    auto t = q_transform_at(f, r, theta, 2.0 / kPi, spec);
    t.value -= mean.value / kPi;
    t.error_estimate += mean.error_estimate / kPi;
    t.converged = t.converged && mean.converged;
    return t;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

namespace detail {

template <class PointFn>
Field fill_field(const EvaluationGrid& grid, FieldMeta meta, const PointFn& point) {
    grid.validate();
    Field field = Field::zeros(grid);
    field.meta = std::move(meta);
    const std::size_t nt = grid.n_theta();
    parallel_for(grid.size(), [&](std::size_t k) {
        const PointValue v = point(grid.radii[k / nt], grid.angles[k % nt]);
        field.values[k] = v.value;
        field.converged[k] = v.converged ? 1 : 0;
    });
    return field;
}

inline void check_grid_radius(const EvaluationGrid& grid, const QuadratureSpec& spec) {
    check_evaluation_radius(grid.r_max(), spec);
}

} // namespace detail

inline Field poisson_integral(const BoundaryFunction& f, const EvaluationGrid& grid,
                              const QuadratureSpec& spec = {}) {
    f.validate();
    detail::check_grid_radius(grid, spec);
    return detail::fill_field(grid, {"poisson_integral", describe(f), 1.0, spec},
                              [&](double r, double t) { return poisson_integral_at(f, r, t, spec); });
}

inline Field q_transform(const SourceFunction& f, const EvaluationGrid& grid, double prefactor,
                         const QuadratureSpec& spec = {}) {
    f.validate();
    detail::check_grid_radius(grid, spec);
    return detail::fill_field(grid, {"q_transform", describe(f), prefactor, spec},
                              [&](double r, double t) { return q_transform_at(f, r, t, prefactor, spec); });
}

inline Field harmonic_rep(const DiskFunction& u, double u_at_origin, const EvaluationGrid& grid,
                          const QuadratureSpec& spec = {}, std::string description = "callable") {
    detail::check_grid_radius(grid, spec);
    return detail::fill_field(grid, {"harmonic_rep", std::move(description), 2.0 / kPi, spec},
                              [&](double r, double t) { return harmonic_rep_at(u, u_at_origin, r, t, spec); });
}

inline Field bergman_project(const SourceFunction& f, const EvaluationGrid& grid,
                             const QuadratureSpec& spec = {}) {
    f.validate();
    detail::check_grid_radius(grid, spec);
    const PointValue mean = source_integral(f, spec);
    return detail::fill_field(grid, {"bergman_project", describe(f), 2.0 / kPi, spec},
                              [&](double r, double t) { return bergman_project_at(f, r, t, mean, spec); });
}

// ---------------------------------------------------------------------------
// Analytic weighted Bergman representation
// ---------------------------------------------------------------------------

/// Finite Taylor polynomial sum_k c_k z^k.
struct TaylorPolynomial {
    std::vector<std::complex<double>> coefficients;

    static TaylorPolynomial monomial(int n) {
        TaylorPolynomial p;
        p.coefficients.assign(static_cast<std::size_t>(n) + 1, 0.0);
        p.coefficients.back() = 1.0;
        return p;
    }

    [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const {
        std::complex<double> acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            acc = acc * z + *it;
        }
        return acc;
    }
};

struct ComplexPointValue {
    std::complex<double> value;
    double error_estimate = 0.0;
    bool converged = true;
};

inline ComplexPointValue analytic_rep(const TaylorPolynomial& f, double alpha, ComplexPoint z,
                                      const QuadratureSpec& spec = {}) {
    if (!(alpha > -1.0)) {
        throw DomainError("analytic_rep: alpha must exceed -1");
    }
    if (!(z.modulus() < 1.0)) {
        throw DomainError("analytic_rep: |z| must be < 1");
    }
    auto g = [&](double rho, double phi) {
        const std::complex<double> w = std::polar(rho, phi);
        return f(w) * analytic_bergman_kernel(z, {w.real(), w.imag()}, alpha);
    };
    const double r = z.modulus();
    const double arg = r > 0.0 ? std::arg(z.value()) : 0.0;
    const auto res = integrate_polar<std::complex<double>>(g, PolarRectangle::full_disk(), spec,
                                                           PeakHint::at(r, arg));
    return {res.value, res.error_estimate, res.converged};
}

} // namespace diskharm
