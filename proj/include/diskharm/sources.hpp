/**
 * @file sources.hpp
 * @brief Declarative integrands on the disk and boundary functions on the circle.
 *
 * Sources are immutable value types. Every figure of the reproduction set is
 * described by a FigureCase built from these pieces (see figure_case()).
 * Angles follow the [-pi, pi) convention; arcs are closed intervals [a, b]
 * with -pi <= a < b <= pi.
 */
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diskharm/errors.hpp"
#include "diskharm/kernels.hpp"
#include "diskharm/quadrature.hpp"

namespace diskharm {

// ---------------------------------------------------------------------------
// Boundary functions
// ---------------------------------------------------------------------------

struct Arc {
    double a = -kPi;
    double b = kPi;

    void validate() const {
        if (!(std::isfinite(a) && std::isfinite(b) && -kPi <= a && a < b && b <= kPi)) {
            std::ostringstream os;
            os << "arc [" << a << ", " << b << "] must satisfy -pi <= a < b <= pi";
            throw ValidationError(os.str());
        }
    }
    [[nodiscard]] bool contains(double theta) const { return theta >= a && theta <= b; }
    [[nodiscard]] double length() const { return b - a; }
};

namespace boundary {
struct CharacteristicArc { Arc arc; };
struct AbsTheta {};
struct ThetaSquaredOnArc { Arc arc; };
struct SinOnArc { Arc arc; };
struct AbsLogAbsOnArc { Arc arc; };
struct Cos { int n = 1; };
struct ConstantOne {};
struct WeightedSum;
} // namespace boundary

struct BoundaryFunction;

namespace boundary {
struct Term;
struct WeightedSum {
    std::vector<Term> terms;
};
} // namespace boundary

struct BoundaryFunction {
    using Variant = std::variant<boundary::CharacteristicArc, boundary::AbsTheta,
                                 boundary::ThetaSquaredOnArc, boundary::SinOnArc,
                                 boundary::AbsLogAbsOnArc, boundary::Cos, boundary::ConstantOne,
                                 boundary::WeightedSum>;
    Variant v;

    void validate() const;
};

namespace boundary {
struct Term {
    double coefficient = 1.0;
    BoundaryFunction function;
};
} // namespace boundary

inline void BoundaryFunction::validate() const {
    std::visit(
        [](const auto& x) {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, boundary::Cos>) {
                if (x.n < 0) {
                    throw ValidationError("cos boundary function requires n >= 0");
                }
            } else if constexpr (std::is_same_v<X, boundary::WeightedSum>) {
                if (x.terms.empty()) {
                    throw ValidationError("weighted sum needs at least one term");
                }
                for (const auto& t : x.terms) {
                    if (!std::isfinite(t.coefficient)) {
                        throw ValidationError("weighted sum coefficient is not finite");
                    }
                    t.function.validate();
                }
            } else if constexpr (requires { x.arc; }) {
                x.arc.validate();
            }
        },
        v);
}

/// Reduce any angle to [-pi, pi).
[[nodiscard]] inline double wrap_angle(double theta) {
    double t = std::fmod(theta + kPi, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    return t - kPi;
}

/// Value of a boundary function at angle theta (any real; reduced to [-pi, pi)).
[[nodiscard]] inline double evaluate_boundary(const BoundaryFunction& f, double theta) {
    const double t = wrap_angle(theta);
    return std::visit(
        [&](const auto& x) -> double {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, boundary::CharacteristicArc>) {
                return x.arc.contains(t) || x.arc.contains(t + kTwoPi) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<X, boundary::AbsTheta>) {
                return std::abs(t);
            } else if constexpr (std::is_same_v<X, boundary::ThetaSquaredOnArc>) {
                return x.arc.contains(t) ? t * t : 0.0;
            } else if constexpr (std::is_same_v<X, boundary::SinOnArc>) {
                return x.arc.contains(t) ? std::sin(t) : 0.0;
            } else if constexpr (std::is_same_v<X, boundary::AbsLogAbsOnArc>) {
                if (!x.arc.contains(t)) {
                    return 0.0;
                }
                if (t == 0.0) {
                    throw NonFiniteError("|log|theta|| is infinite at theta = 0");
                }
                return std::abs(std::log(std::abs(t)));
            } else if constexpr (std::is_same_v<X, boundary::Cos>) {
                return std::cos(x.n * t);
            } else if constexpr (std::is_same_v<X, boundary::ConstantOne>) {
                return 1.0;
            } else {
                double s = 0.0;
                for (const auto& term : x.terms) {
                    s += term.coefficient * evaluate_boundary(term.function, t);
                }
                return s;
            }
        },
        f.v);
}

// ---------------------------------------------------------------------------
// Sources on the disk
// ---------------------------------------------------------------------------

namespace radial {
struct One {};
struct RhoPower { int k = 1; };
/// (1 - rho)^-beta, 0 < beta < 1/2.
struct PowerOfOneMinusRho { double beta = 0.25; };
/// amplitude * exp(-rate (rho - center)^2)
struct GaussianBump {
    double amplitude = 1.0;
    double center = 0.5;
    double rate = 1.0;
};
} // namespace radial

using RadialFactor =
    std::variant<radial::One, radial::RhoPower, radial::PowerOfOneMinusRho, radial::GaussianBump>;

namespace angular {
struct One {};
struct Cos { int n = 1; };
struct Sin { int n = 1; };
struct AbsPhi {};
struct PhiSquared {};
struct AbsLogAbsPhi {};
} // namespace angular

using AngularFactor = std::variant<angular::One, angular::Cos, angular::Sin, angular::AbsPhi,
                                   angular::PhiSquared, angular::AbsLogAbsPhi>;

struct SourceFunction;

namespace source {
struct CharacteristicDisk { double radius = 0.25; };
struct CharacteristicRect { PolarRectangle rect; };
struct SeparableOnRect {
    RadialFactor radial;
    AngularFactor angular;
    PolarRectangle rect;
};
struct Term;
struct WeightedSum {
    std::vector<Term> terms;
};
} // namespace source

struct SourceFunction {
    using Variant = std::variant<source::CharacteristicDisk, source::CharacteristicRect,
                                 source::SeparableOnRect, source::WeightedSum>;
    Variant v;

    void validate() const;
};

namespace source {
struct Term {
    double coefficient = 1.0;
    SourceFunction function;
};
} // namespace source

[[nodiscard]] inline double evaluate_radial(const RadialFactor& f, double rho) {
    return std::visit(
        [&](const auto& x) -> double {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, radial::One>) {
                return 1.0;
            } else if constexpr (std::is_same_v<X, radial::RhoPower>) {
                return std::pow(rho, x.k);
            } else if constexpr (std::is_same_v<X, radial::PowerOfOneMinusRho>) {
                if (rho >= 1.0) {
                    throw NonFiniteError("(1 - rho)^-beta is infinite at rho = 1");
                }
                return std::pow(1.0 - rho, -x.beta);
            } else {
                const double d = rho - x.center;
                return x.amplitude * std::exp(-x.rate * d * d);
            }
        },
        f);
}

/// phi must already be the representative inside the owning rectangle.
[[nodiscard]] inline double evaluate_angular(const AngularFactor& f, double phi) {
    return std::visit(
        [&](const auto& x) -> double {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, angular::One>) {
                return 1.0;
            } else if constexpr (std::is_same_v<X, angular::Cos>) {
                return std::cos(x.n * phi);
            } else if constexpr (std::is_same_v<X, angular::Sin>) {
                return std::sin(x.n * phi);
            } else if constexpr (std::is_same_v<X, angular::AbsPhi>) {
                return std::abs(phi);
            } else if constexpr (std::is_same_v<X, angular::PhiSquared>) {
                return phi * phi;
            } else {
                if (phi == 0.0) {
                    throw NonFiniteError("|log|phi|| is infinite at phi = 0");
                }
                return std::abs(std::log(std::abs(phi)));
            }
        },
        f);
}

inline void SourceFunction::validate() const {
    std::visit(
        [](const auto& x) {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, source::CharacteristicDisk>) {
                if (!(x.radius > 0.0 && x.radius <= 1.0)) {
                    throw ValidationError("characteristic disk radius must lie in (0, 1]");
                }
            } else if constexpr (std::is_same_v<X, source::CharacteristicRect>) {
                try {
                    x.rect.validate();
                } catch (const InvalidRegion& e) {
                    throw ValidationError(e.what());
                }
            } else if constexpr (std::is_same_v<X, source::SeparableOnRect>) {
                try {
                    x.rect.validate();
                } catch (const InvalidRegion& e) {
                    throw ValidationError(e.what());
                }
                std::visit(
                    [](const auto& r) {
                        using R = std::decay_t<decltype(r)>;
                        if constexpr (std::is_same_v<R, radial::PowerOfOneMinusRho>) {
                            if (!(r.beta > 0.0 && r.beta < 0.5)) {
                                throw ValidationError(
                                    "(1 - rho)^-beta needs 0 < beta < 1/2 to stay square integrable");
                            }
                        } else if constexpr (std::is_same_v<R, radial::RhoPower>) {
                            if (r.k < 0) {
                                throw ValidationError("rho power must be non-negative");
                            }
                        } else if constexpr (std::is_same_v<R, radial::GaussianBump>) {
                            if (!(std::isfinite(r.amplitude) && std::isfinite(r.center) &&
                                  r.rate >= 0.0)) {
                                throw ValidationError("gaussian bump needs finite parameters, rate >= 0");
                            }
                        }
                    },
                    x.radial);
                std::visit(
                    [](const auto& a) {
                        using A = std::decay_t<decltype(a)>;
                        if constexpr (std::is_same_v<A, angular::Cos> || std::is_same_v<A, angular::Sin>) {
                            if (a.n < 0) {
                                throw ValidationError("angular harmonic order must be >= 0");
                            }
                        }
                    },
                    x.angular);
            } else {
                if (x.terms.empty()) {
                    throw ValidationError("weighted sum needs at least one term");
                }
                for (const auto& t : x.terms) {
                    if (!std::isfinite(t.coefficient)) {
                        throw ValidationError("weighted sum coefficient is not finite");
                    }
                    t.function.validate();
                }
            }
        },
        v);
}

/**
 * @brief Pointwise value of a source. Characteristic variants return exactly 0 or 1.
 *
 * Throws NonFiniteError on the measure-zero singular sets ((1-rho)^-beta at
 * rho = 1, |log|phi|| at phi = 0) and DomainError outside the closed disk.
 */
[[nodiscard]] inline double evaluate_source(const SourceFunction& s, const PolarPoint& p) {
    if (!(p.r >= 0.0 && p.r <= 1.0)) {
        throw DomainError("evaluate_source: point outside the closed unit disk");
    }
    return std::visit(
        [&](const auto& x) -> double {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, source::CharacteristicDisk>) {
                return p.r <= x.radius ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<X, source::CharacteristicRect>) {
                return x.rect.contains(p.r, p.theta) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<X, source::SeparableOnRect>) {
                if (p.r < x.rect.r_lo || p.r > x.rect.r_hi) {
                    return 0.0;
                }
                const auto phi = x.rect.angular_representative(p.theta);
                if (!phi) {
                    return 0.0;
                }
                return evaluate_radial(x.radial, p.r) * evaluate_angular(x.angular, *phi);
            } else {
                double sum = 0.0;
                for (const auto& t : x.terms) {
                    sum += t.coefficient * evaluate_source(t.function, p);
                }
                return sum;
            }
        },
        s.v);
}

// convenience constructors ---------------------------------------------------

inline SourceFunction characteristic_disk(double radius) {
    return {source::CharacteristicDisk{radius}};
}
inline SourceFunction characteristic_rect(const PolarRectangle& rect) {
    return {source::CharacteristicRect{rect}};
}
inline SourceFunction separable(RadialFactor r, AngularFactor a, const PolarRectangle& rect) {
    return {source::SeparableOnRect{std::move(r), std::move(a), rect}};
}
inline SourceFunction weighted_sum(std::vector<source::Term> terms) {
    return {source::WeightedSum{std::move(terms)}};
}

// ---------------------------------------------------------------------------
// Figure catalog
// ---------------------------------------------------------------------------

struct KernelPlot {
    KernelId kernel;
    std::vector<double> radii;
};

struct PoissonCase {
    BoundaryFunction boundary;
    Arc arc; // support of the boundary function
};

struct QCase {
    SourceFunction source;
    double prefactor = 1.0;
};

struct PairedCase {
    PoissonCase poisson;
    QCase q;
};

struct FigureCase {
    int id = 0;
    std::string description;
    std::variant<KernelPlot, PoissonCase, QCase, PairedCase> payload;
    /// Poisson figure a Q figure is compared against (9 -> 8, 11 -> 10).
    std::optional<int> compare_with;
};

inline FigureCase figure_case(int id) {
    const double pi = kPi;
    const Arc sixth{-pi / 6.0, pi / 6.0};
    const Arc upper{0.0, pi};
    const double two_over_pi = 2.0 / pi;
    switch (id) {
    case 1:
        return {1, "Poisson kernel profiles at r = 0.5, 0.75, 0.85",
                KernelPlot{KernelId::poisson(), {0.5, 0.75, 0.85}}, std::nullopt};
    case 2:
        return {2, "Q kernel profiles at r = 0.5, 0.75", KernelPlot{KernelId::q(), {0.5, 0.75}},
                std::nullopt};
    case 3:
        return {3, "r^2 cos 2theta: Poisson integral of cos 2phi vs Q representation",
                PairedCase{PoissonCase{{boundary::Cos{2}}, Arc{-pi, pi}},
                           QCase{separable(radial::RhoPower{2}, angular::Cos{2},
                                           PolarRectangle::full_disk()),
                                 two_over_pi}},
                std::nullopt};
    case 4:
        return {4, "Q transform of the characteristic function of the disk r <= 1/4",
                QCase{characteristic_disk(0.25), 1.0}, std::nullopt};
    case 5: {
        const auto left = characteristic_rect(PolarRectangle::make(0.25, 0.5, 0.0, pi / 4.0));
        const auto right = characteristic_rect(PolarRectangle::make(0.6, 0.8, 5.0 * pi / 6.0, pi));
        return {5, "Q transform of [1/4,1/2]x[0,pi/4] plus [0.6,0.8]x[5pi/6,pi]",
                QCase{weighted_sum({{1.0, left}, {1.0, right}}), 1.0}, std::nullopt};
    }
    case 6:
        return {6, "Q transform of cos(phi)/(1-rho)^(1/4) on [3/4,1]x[-pi/6,pi/6]",
                QCase{separable(radial::PowerOfOneMinusRho{0.25}, angular::Cos{1},
                                PolarRectangle::make(0.75, 1.0, -pi / 6.0, pi / 6.0)),
                      1.0},
                std::nullopt};
    case 7: {
        const auto first = separable(radial::PowerOfOneMinusRho{0.25}, angular::Cos{1},
                                     PolarRectangle::make(0.75, 1.0, -pi / 6.0, pi / 6.0));
        const auto second = separable(radial::PowerOfOneMinusRho{0.375}, angular::Cos{1},
                                      PolarRectangle::make(0.875, 1.0, 5.0 * pi / 6.0, pi));
        return {7, "Figure 6 source plus cos(phi)/(1-rho)^(3/8) on [7/8,1]x[5pi/6,pi]",
                QCase{weighted_sum({{1.0, first}, {1.0, second}}), 1.0}, std::nullopt};
    }
    case 8:
        return {8, "harmonic measure of the arc [-pi/6, pi/6]",
                PoissonCase{{boundary::CharacteristicArc{sixth}}, sixth}, std::nullopt};
    case 9:
        return {9, "2/pi Q transform of the layer [0.9,1]x[-pi/6,pi/6]",
                QCase{characteristic_rect(PolarRectangle::make(0.9, 1.0, -pi / 6.0, pi / 6.0)),
                      two_over_pi},
                8};
    case 10:
        return {10, "Poisson integral of |theta|", PoissonCase{{boundary::AbsTheta{}}, Arc{-pi, pi}},
                std::nullopt};
    case 11:
        return {11, "2/pi Q transform of rho |phi| on the layer [0.9,1]x[-pi,pi]",
                QCase{separable(radial::RhoPower{1}, angular::AbsPhi{},
                                PolarRectangle::make(0.9, 1.0, -pi, pi)),
                      two_over_pi},
                10};
    case 12:
        return {12, "theta^2 on [-pi/6,pi/6]: Poisson integral vs 2/pi Q transform of rho phi^2",
                PairedCase{PoissonCase{{boundary::ThetaSquaredOnArc{sixth}}, sixth},
                           QCase{separable(radial::RhoPower{1}, angular::PhiSquared{},
                                           PolarRectangle::make(0.9, 1.0, -pi / 6.0, pi / 6.0)),
                                 two_over_pi}},
                std::nullopt};
    case 13:
        return {13, "sin theta on [0,pi]: Poisson integral vs 2/pi Q transform of rho sin phi",
                PairedCase{PoissonCase{{boundary::SinOnArc{upper}}, upper},
                           QCase{separable(radial::RhoPower{1}, angular::Sin{1},
                                           PolarRectangle::make(0.9, 1.0, 0.0, pi)),
                                 two_over_pi}},
                std::nullopt};
    case 14:
        return {14, "|log|theta|| on [0,pi]: Poisson integral vs 2/pi Q transform of rho |log|phi||",
                PairedCase{PoissonCase{{boundary::AbsLogAbsOnArc{upper}}, upper},
                           QCase{separable(radial::RhoPower{1}, angular::AbsLogAbsPhi{},
                                           PolarRectangle::make(0.9, 1.0, 0.0, pi)),
                                 two_over_pi}},
                std::nullopt};
    case 15:
        return {15, "Q transform of 10 exp(-10 (rho-0.5)^2) cos(phi) on [0.3,0.7]x[-pi/6,pi/6]",
                QCase{separable(radial::GaussianBump{10.0, 0.5, 10.0}, angular::Cos{1},
                                PolarRectangle::make(0.3, 0.7, -pi / 6.0, pi / 6.0)),
                      1.0},
                std::nullopt};
    default: break;
    }
    throw UnknownFigure("figure id " + std::to_string(id) + " is not in 1..15");
}

inline constexpr int kFigureCount = 15;

/// Sources of every figure that involves a Q transform, with their prefactors.
inline std::vector<std::pair<int, QCase>> catalog_q_cases() {
    std::vector<std::pair<int, QCase>> out;
    for (int id = 1; id <= kFigureCount; ++id) {
        const auto fc = figure_case(id);
        if (const auto* q = std::get_if<QCase>(&fc.payload)) {
            out.emplace_back(id, *q);
        } else if (const auto* p = std::get_if<PairedCase>(&fc.payload)) {
            out.emplace_back(id, p->q);
        }
    }
    return out;
}

inline std::vector<std::pair<int, PoissonCase>> catalog_poisson_cases() {
    std::vector<std::pair<int, PoissonCase>> out;
    for (int id = 1; id <= kFigureCount; ++id) {
        const auto fc = figure_case(id);
        if (const auto* p = std::get_if<PoissonCase>(&fc.payload)) {
            out.emplace_back(id, *p);
        } else if (const auto* pc = std::get_if<PairedCase>(&fc.payload)) {
            out.emplace_back(id, pc->poisson);
        }
    }
    return out;
}

} // namespace diskharm
