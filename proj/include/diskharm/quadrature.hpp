/**
 * @file quadrature.hpp
 * @brief Adaptive tensor Gauss-Legendre quadrature over polar rectangles.
 *
 * Every polar integral here is  int int g(rho, phi) rho drho dphi ; the
 * Jacobian rho is applied by this layer, never by integrands.
 *
 * Panels are accepted when |G(n, m) - G(2n, 2m)| <= adaptive_tol (absolute,
 * per panel) and otherwise bisected along one axis, up to max_depth levels.
 * Panels are visited depth first in a fixed order so results are bitwise
 * reproducible.
 */
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

#include "diskharm/errors.hpp"
#include "diskharm/gauss_legendre.hpp"
#include "diskharm/kernels.hpp"

namespace diskharm {

/// {(rho, phi): r_lo <= rho <= r_hi, theta_lo <= phi <= theta_hi}
struct PolarRectangle {
    double r_lo = 0.0;
    double r_hi = 1.0;
    double theta_lo = -kPi;
    double theta_hi = kPi;

    static PolarRectangle make(double r_lo, double r_hi, double theta_lo, double theta_hi) {
        const PolarRectangle rect{r_lo, r_hi, theta_lo, theta_hi};
        rect.validate();
        return rect;
    }
    static PolarRectangle full_disk() { return {0.0, 1.0, -kPi, kPi}; }

    void validate() const {
        const bool ok = std::isfinite(r_lo) && std::isfinite(r_hi) && std::isfinite(theta_lo) &&
                        std::isfinite(theta_hi) && 0.0 <= r_lo && r_lo < r_hi && r_hi <= 1.0 &&
                        theta_lo < theta_hi && theta_hi - theta_lo <= kTwoPi * (1.0 + 1e-15);
        if (!ok) {
            std::ostringstream os;
            os << "degenerate polar rectangle [" << r_lo << ", " << r_hi << "] x [" << theta_lo
               << ", " << theta_hi << "]";
            throw InvalidRegion(os.str());
        }
    }

    [[nodiscard]] double area() const { return 0.5 * (r_hi * r_hi - r_lo * r_lo) * (theta_hi - theta_lo); }

    [[nodiscard]] bool covers_full_circle() const {
        return theta_hi - theta_lo >= kTwoPi * (1.0 - 1e-15);
    }

    /// theta + 2 pi k inside [theta_lo, theta_hi], if any (smallest such).
    [[nodiscard]] std::optional<double> angular_representative(double theta) const {
        double t = theta_lo + std::fmod(theta - theta_lo, kTwoPi);
        if (t < theta_lo) {
            t += kTwoPi;
        }
        if (t <= theta_hi) {
            return t;
        }
        // rounding at the closing edge
        if (std::abs(t - kTwoPi - theta_lo) <= 1e-14) {
            return theta_lo;
        }
        return std::nullopt;
    }

    [[nodiscard]] bool contains(double r, double theta) const {
        return r >= r_lo && r <= r_hi && angular_representative(theta).has_value();
    }
};

struct QuadratureSpec {
    int nodes_radial = 32;
    int nodes_angular = 64;
    double adaptive_tol = 1e-9;
    int max_depth = 12;
    /// beta in (0, 1): the integrand carries a factor (1 - rho)^-beta at rho = 1.
    std::optional<double> singularity_exponent;
    /// Transforms refuse evaluation points beyond this radius.
    double max_evaluation_radius = 0.99;

    void validate() const {
        if (nodes_radial < 1 || nodes_angular < 1) {
            throw std::invalid_argument("QuadratureSpec: node counts must be positive");
        }
        if (!(adaptive_tol > 0.0)) {
            throw std::invalid_argument("QuadratureSpec: adaptive_tol must be positive");
        }
        if (max_depth < 1 || max_depth > 30) {
            throw std::invalid_argument("QuadratureSpec: max_depth must lie in [1, 30]");
        }
        if (singularity_exponent &&
            !(*singularity_exponent > 0.0 && *singularity_exponent < 1.0)) {
            throw InvalidExponent("QuadratureSpec: singularity exponent must lie in (0, 1)");
        }
        if (!(max_evaluation_radius > 0.0 && max_evaluation_radius < 1.0)) {
            throw std::invalid_argument("QuadratureSpec: max_evaluation_radius must lie in (0, 1)");
        }
    }
};

template <class T>
struct BasicQuadratureResult {
    T value{};
    double error_estimate = 0.0;
    int panels_used = 0;
    bool converged = true;

    BasicQuadratureResult& operator+=(const BasicQuadratureResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        panels_used += o.panels_used;
        converged = converged && o.converged;
        return *this;
    }
};

using QuadratureResult = BasicQuadratureResult<double>;

/// Axis-aligned box in an abstract (x, y) plane; x is the radial-like axis.
struct Box {
    double x_lo, x_hi, y_lo, y_hi;
};

enum class SplitAxis { Auto, X, Y };

/// Evaluation point whose kernel peak lies at phi = theta inside the region.
struct PeakHint {
    bool active = false;
    double r = 0.0;
    double theta = 0.0;

    static PeakHint at(double r, double theta) { return {true, r, theta}; }
};

namespace detail {

template <class T>
[[nodiscard]] inline bool is_finite_value(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(v);
    } else {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }
}

[[noreturn]] inline void throw_nonfinite(double x, double y) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is not finite at (" << x << ", " << y << ")";
    throw NonFiniteError(os.str());
}

template <class T, class F>
T tensor_gauss(const F& g, const Box& b, int nx, int ny) {
    const auto& rx = gauss_legendre(nx);
    const auto& ry = gauss_legendre(ny);
    const double cx = 0.5 * (b.x_lo + b.x_hi);
    const double hx = 0.5 * (b.x_hi - b.x_lo);
    const double cy = 0.5 * (b.y_lo + b.y_hi);
    const double hy = 0.5 * (b.y_hi - b.y_lo);
    T sum{};
    for (int i = 0; i < nx; ++i) {
        const double x = cx + hx * rx.nodes[i];
        T row{};
        for (int j = 0; j < ny; ++j) {
            const double y = cy + hy * ry.nodes[j];
            const T v = g(x, y);
            if (!is_finite_value(v)) {
                throw_nonfinite(x, y);
            }
            row += ry.weights[j] * v;
        }
        sum += rx.weights[i] * row;
    }
    return sum * (hx * hy);
}

template <class T, class F>
T line_gauss(const F& g, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T sum{};
    for (int i = 0; i < n; ++i) {
        const double x = c + h * rule.nodes[i];
        const T v = g(x);
        if (!is_finite_value(v)) {
            throw_nonfinite(x, 0.0);
        }
        sum += rule.weights[i] * v;
    }
    return sum * h;
}

template <class T, class F, class SplitFn>
class AdaptiveTensor {
public:
    AdaptiveTensor(const F& g, const QuadratureSpec& spec, const SplitFn& split)
        : g_(g), spec_(spec), split_(split) {}

    BasicQuadratureResult<T> run(const Box& box) {
        refine(box, 0);
        return result_;
    }

private:
    void refine(const Box& b, int depth) {
        const int n = spec_.nodes_radial;
        const int m = spec_.nodes_angular;
        const T coarse = tensor_gauss<T>(g_, b, n, m);
        const T fine = tensor_gauss<T>(g_, b, 2 * n, 2 * m);
        const double err = std::abs(fine - coarse);
        if (err <= spec_.adaptive_tol || depth >= spec_.max_depth) {
            accept(fine, err, err <= spec_.adaptive_tol);
            return;
        }
        SplitAxis axis = split_(b);
        if (axis == SplitAxis::Auto) {
            // which axis is under-resolved: drop refinement in one direction at a time
            const double err_x = std::abs(fine - tensor_gauss<T>(g_, b, n, 2 * m));
            const double err_y = std::abs(fine - tensor_gauss<T>(g_, b, 2 * n, m));
            axis = err_x >= err_y ? SplitAxis::X : SplitAxis::Y;
        }
        if (axis == SplitAxis::X) {
            const double mid = 0.5 * (b.x_lo + b.x_hi);
            refine({b.x_lo, mid, b.y_lo, b.y_hi}, depth + 1);
            refine({mid, b.x_hi, b.y_lo, b.y_hi}, depth + 1);
        } else {
            const double mid = 0.5 * (b.y_lo + b.y_hi);
            refine({b.x_lo, b.x_hi, b.y_lo, mid}, depth + 1);
            refine({b.x_lo, b.x_hi, mid, b.y_hi}, depth + 1);
        }
    }

    void accept(const T& v, double err, bool ok) {
        result_.value += v;
        result_.error_estimate += err;
        result_.panels_used += 1;
        result_.converged = result_.converged && ok;
    }

    const F& g_;
    const QuadratureSpec& spec_;
    const SplitFn& split_;
    BasicQuadratureResult<T> result_{};
};

template <class T, class F>
class AdaptiveLine {
public:
    AdaptiveLine(const F& g, const QuadratureSpec& spec) : g_(g), spec_(spec) {}

    BasicQuadratureResult<T> run(double a, double b) {
        refine(a, b, 0);
        return result_;
    }

private:
    void refine(double a, double b, int depth) {
        const int n = spec_.nodes_angular;
        const T coarse = line_gauss<T>(g_, a, b, n);
        const T fine = line_gauss<T>(g_, a, b, 2 * n);
        const double err = std::abs(fine - coarse);
        if (err <= spec_.adaptive_tol || depth >= spec_.max_depth) {
            result_.value += fine;
            result_.error_estimate += err;
            result_.panels_used += 1;
            result_.converged = result_.converged && err <= spec_.adaptive_tol;
            return;
        }
        const double mid = 0.5 * (a + b);
        refine(a, mid, depth + 1);
        refine(mid, b, depth + 1);
    }

    const F& g_;
    const QuadratureSpec& spec_;
    BasicQuadratureResult<T> result_{};
};

inline bool peak_in_range(const PeakHint& hint, double y_lo, double y_hi) {
    // the hint angle may sit on the panel edge after breakpoint splitting
    const double eps = 1e-12;
    double t = y_lo + std::fmod(hint.theta - y_lo, kTwoPi);
    if (t < y_lo) {
        t += kTwoPi;
    }
    return t <= y_hi + eps || std::abs(t - kTwoPi - y_lo) <= eps;
}

} // namespace detail

/// Integral of g(x, y) dx dy over a box; no Jacobian.
template <class T = double, class F, class SplitFn>
BasicQuadratureResult<T> integrate_box(const F& g, const Box& box, const QuadratureSpec& spec,
                                       const SplitFn& split) {
    spec.validate();
    if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) {
        throw InvalidRegion("integrate_box: degenerate box");
    }
    detail::AdaptiveTensor<T, F, SplitFn> engine(g, spec, split);
    return engine.run(box);
}

template <class T = double, class F>
BasicQuadratureResult<T> integrate_box(const F& g, const Box& box, const QuadratureSpec& spec) {
    auto no_hint = [](const Box&) { return SplitAxis::Auto; };
    return integrate_box<T>(g, box, spec, no_hint);
}

/// 1-D adaptive Gauss-Legendre on [a, b] using nodes_angular / 2 nodes_angular points.
template <class T = double, class F>
BasicQuadratureResult<T> integrate_line(const F& g, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b)) {
        throw InvalidRegion("integrate_line: empty interval");
    }
    detail::AdaptiveLine<T, F> engine(g, spec);
    return engine.run(a, b);
}

/**
 * @brief int int g(rho, phi) (1 - rho)^-beta [rho] drho dphi over a region touching rho = 1.
 *
 * Substitutes t = (1 - rho)^(1 - beta); then (1 - rho)^-beta drho = dt / (1 - beta)
 * and the transformed integrand is bounded. The t axis is further graded as
 * t = t_max v^3 so that rho(v) is smooth enough for fast Gauss convergence. g receives (rho, phi) and must not
 * include the singular factor.
 */
template <class T = double, class F>
BasicQuadratureResult<T> integrate_singular_radial(const F& integrand_regular, double beta,
                                                   const PolarRectangle& region,
                                                   const QuadratureSpec& spec,
                                                   const PeakHint& hint = {},
                                                   bool polar_jacobian = true) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw InvalidExponent("integrate_singular_radial: beta must lie in (0, 1)");
    }
    region.validate();
    if (region.r_hi != 1.0) {
        throw InvalidRegion("integrate_singular_radial: region must reach rho = 1");
    }
    const double q = 1.0 / (1.0 - beta);
    const double t_hi = std::pow(1.0 - region.r_lo, 1.0 - beta);
    // t = t_hi v^3 makes rho(v) = 1 - (t_hi v^3)^q at least C^3 at v = 0
    auto g = [&](double v, double phi) -> T {
        const double v2 = v * v;
        const double t = t_hi * v2 * v;
        const double rho = 1.0 - std::pow(t, q);
        const double dt = 3.0 * t_hi * v2;
        const double jac = polar_jacobian ? rho * q * dt : q * dt;
        return integrand_regular(rho, phi) * jac;
    };
    auto split = [&](const Box& b) {
        if (!hint.active) {
            return SplitAxis::Auto;
        }
        const double rho_hi = 1.0 - std::pow(t_hi * b.x_lo * b.x_lo * b.x_lo, q);
        if (hint.r * rho_hi >= 0.9 && detail::peak_in_range(hint, b.y_lo, b.y_hi)) {
            return SplitAxis::Y;
        }
        return SplitAxis::Auto;
    };
    return integrate_box<T>(g, Box{0.0, 1.0, region.theta_lo, region.theta_hi}, spec, split);
}

/// int_{r_lo}^1 g(rho) (1 - rho)^-beta drho, no Jacobian.
template <class F>
QuadratureResult integrate_singular_radial_1d(const F& integrand_regular, double beta, double r_lo,
                                              const QuadratureSpec& spec) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw InvalidExponent("integrate_singular_radial_1d: beta must lie in (0, 1)");
    }
    if (!(r_lo >= 0.0 && r_lo < 1.0)) {
        throw InvalidRegion("integrate_singular_radial_1d: r_lo must lie in [0, 1)");
    }
    const double q = 1.0 / (1.0 - beta);
    const double t_hi = std::pow(1.0 - r_lo, 1.0 - beta);
    auto g = [&](double v) {
        const double t = t_hi * v * v * v;
        return integrand_regular(1.0 - std::pow(t, q)) * q * 3.0 * t_hi * v * v;
    };
    return integrate_line<double>(g, 0.0, 1.0, spec);
}

/**
 * @brief int int g(rho, phi) rho drho dphi over a polar rectangle.
 *
 * When spec.singularity_exponent is set and the region reaches rho = 1, the
 * integrand is treated as carrying (1 - rho)^-beta and is integrated through
 * integrate_singular_radial. The peak hint makes panels that contain the kernel
 * peak (phi = theta with r * rho >= 0.9) split in angle first.
 */
template <class T = double, class F>
BasicQuadratureResult<T> integrate_polar(const F& integrand, const PolarRectangle& region,
                                         const QuadratureSpec& spec, const PeakHint& hint = {}) {
    region.validate();
    if (spec.singularity_exponent && region.r_hi == 1.0) {
        const double beta = *spec.singularity_exponent;
        auto regular = [&](double rho, double phi) -> T {
            return integrand(rho, phi) * std::pow(1.0 - rho, beta);
        };
        QuadratureSpec inner = spec;
        inner.singularity_exponent.reset();
        return integrate_singular_radial<T>(regular, beta, region, inner, hint);
    }
    auto g = [&](double rho, double phi) -> T { return integrand(rho, phi) * rho; };
    auto split = [&](const Box& b) {
        if (hint.active && hint.r * b.x_hi >= 0.9 && detail::peak_in_range(hint, b.y_lo, b.y_hi)) {
            return SplitAxis::Y;
        }
        return SplitAxis::Auto;
    };
    return integrate_box<T>(g, Box{region.r_lo, region.r_hi, region.theta_lo, region.theta_hi}, spec,
                            split);
}

/// Plain midpoint tensor rule with Jacobian rho. Brute-force reference for tests.
template <class F>
double midpoint_oracle(const F& integrand, const PolarRectangle& region, int n_radial, int n_angular) {
    if (n_radial < 1 || n_angular < 1) {
        throw std::invalid_argument("midpoint_oracle: node counts must be positive");
    }
    region.validate();
    const double dr = (region.r_hi - region.r_lo) / n_radial;
    const double dt = (region.theta_hi - region.theta_lo) / n_angular;
    double sum = 0.0;
    for (int i = 0; i < n_radial; ++i) {
        const double rho = region.r_lo + (i + 0.5) * dr;
        double row = 0.0;
        for (int j = 0; j < n_angular; ++j) {
            const double phi = region.theta_lo + (j + 0.5) * dt;
            const double v = integrand(rho, phi);
            if (!std::isfinite(v)) {
                detail::throw_nonfinite(rho, phi);
            }
            row += v;
        }
        sum += row * rho;
    }
    return sum * dr * dt;
}

} // namespace diskharm
