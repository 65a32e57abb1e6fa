/**
 * @file kernels.hpp
 * @brief Closed-form reproducing kernels of the unit disk.
 *
 * Poisson kernel   P(r, t)  = (1 - r^2) / (1 - 2 r cos t + r^2)
 * Harmonic Bergman Q(s, t)  = (1 - 2 s cos t + s^2 cos 2t) / (1 - 2 s cos t + s^2)^2
 * Weighted analytic Bergman K_a(z, w) = (1+a)/pi (1-|w|^2)^a (1 - z conj(w))^-(2+a)
 *
 * Both real kernels are evaluated through a = 1 - s cos t written as
 * (1 - s) + 2 s sin^2(t/2) and b = s sin t, so that
 *   |1 - s e^{it}|^2 = a^2 + b^2,   Re (1 - s e^{it})^2 = a^2 - b^2,
 * which keeps full relative accuracy as s -> 1, t -> 0.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "diskharm/errors.hpp"

namespace diskharm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// (r, theta) in polar coordinates. theta is stored as given.
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;

    /// Point strictly inside the unit disk; rejects r >= 1 and r < 0.
    static PolarPoint interior(double r, double theta) {
        if (!(r >= 0.0 && r < 1.0)) {
            throw DomainError("PolarPoint::interior: radius " + std::to_string(r) +
                              " outside [0, 1)");
        }
        return {r, theta};
    }
};

struct ComplexPoint {
    double re = 0.0;
    double im = 0.0;

    [[nodiscard]] double modulus() const noexcept { return std::sqrt(re * re + im * im); }
    [[nodiscard]] std::complex<double> value() const noexcept { return {re, im}; }

    static ComplexPoint interior(double re, double im) {
        const ComplexPoint z{re, im};
        if (!(z.modulus() < 1.0)) {
            throw DomainError("ComplexPoint::interior: |z| >= 1");
        }
        return z;
    }
    static ComplexPoint interior(std::complex<double> z) { return interior(z.real(), z.imag()); }
};

struct KernelId {
    enum class Tag { Poisson, Q, AnalyticBergman };

    Tag tag = Tag::Poisson;
    double alpha = 0.0; // only meaningful for AnalyticBergman

    static KernelId poisson() { return {Tag::Poisson, 0.0}; }
    static KernelId q() { return {Tag::Q, 0.0}; }
    static KernelId analytic_bergman(double alpha) {
        if (!(alpha > -1.0)) {
            throw DomainError("KernelId: AnalyticBergman requires alpha > -1");
        }
        return {Tag::AnalyticBergman, alpha};
    }

    [[nodiscard]] std::string name() const {
        switch (tag) {
        case Tag::Poisson: return "poisson";
        case Tag::Q: return "q";
        case Tag::AnalyticBergman: return "analytic_bergman";
        }
        return "unknown";
    }
};

namespace detail {

inline void check_unit_radius(double s, const char* who) {
    if (!(s >= 0.0 && s < 1.0)) {
        throw DomainError(std::string(who) + ": radius " + std::to_string(s) +
                          " outside [0, 1)");
    }
}

struct Cancellation {
    double a; // 1 - s cos t
    double b; // s sin t
};

[[nodiscard]] inline Cancellation split(double s, double t) noexcept {
    const double h = std::sin(0.5 * t);
    return {(1.0 - s) + 2.0 * s * h * h, s * std::sin(t)};
}

} // namespace detail

/// Poisson kernel of the unit disk. Strictly positive for 0 <= r < 1.
[[nodiscard]] inline double poisson_kernel(double r, double theta) {
    detail::check_unit_radius(r, "poisson_kernel");
    const auto [a, b] = detail::split(r, theta);
    return (1.0 - r) * (1.0 + r) / (a * a + b * b);
}

/**
 * @brief Harmonic Bergman kernel Q evaluated at the product radius s = r*rho.
 *
 * Callers form the product; Q(s, psi) = Re (1 - s e^{i psi})^{-2}.
 * Not sign-definite: for s close to 1 it is negative away from psi = 0.
 */
[[nodiscard]] inline double q_kernel(double s, double psi) {
    detail::check_unit_radius(s, "q_kernel");
    const auto [a, b] = detail::split(s, psi);
    const double a2 = a * a;
    const double b2 = b * b;
    const double d = a2 + b2;
    return (a2 - b2) / (d * d);
}

/// Weighted analytic Bergman kernel, principal branch of the complex power.
[[nodiscard]] inline std::complex<double> analytic_bergman_kernel(ComplexPoint z, ComplexPoint w,
                                                                  double alpha) {
    if (!(alpha > -1.0)) {
        throw DomainError("analytic_bergman_kernel: alpha must exceed -1");
    }
    if (!(z.modulus() < 1.0) || !(w.modulus() < 1.0)) {
        throw DomainError("analytic_bergman_kernel: points must lie in the open unit disk");
    }
    const std::complex<double> zc = z.value();
    const std::complex<double> wc = w.value();
    const double w2 = std::norm(wc);
    const double weight = (1.0 + alpha) / kPi * std::pow(1.0 - w2, alpha);
    return weight * std::pow(1.0 - zc * std::conj(wc), -(2.0 + alpha));
}

/// Evaluate a real kernel by id (Poisson or Q) at radius s and angle t.
[[nodiscard]] inline double real_kernel(const KernelId& id, double s, double t) {
    switch (id.tag) {
    case KernelId::Tag::Poisson: return poisson_kernel(s, t);
    case KernelId::Tag::Q: return q_kernel(s, t);
    case KernelId::Tag::AnalyticBergman: break;
    }
    throw DomainError("real_kernel: the analytic Bergman kernel is complex valued");
}

} // namespace diskharm
