#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "diskharm/quadrature.hpp"
#include "diskharm/sources.hpp"
#include "diskharm/sources_config.hpp"
#include "diskharm/transforms.hpp"
#include "oracles.hpp"

using namespace diskharm;

TEST(EvaluateSource, CharacteristicFunctionsAreExactlyZeroOrOne) {
    const auto disk = characteristic_disk(0.25);
    EXPECT_EQ(evaluate_source(disk, {0.1, 2.0}), 1.0);
    EXPECT_EQ(evaluate_source(disk, {0.3, 2.0}), 0.0);
    const auto rect = characteristic_rect(PolarRectangle::make(0.6, 0.8, 5.0 * kPi / 6.0, kPi));
    EXPECT_EQ(evaluate_source(rect, {0.7, 3.0}), 1.0);
    EXPECT_EQ(evaluate_source(rect, {0.7, -kPi}), 1.0); // -pi and pi are the same angle
    EXPECT_EQ(evaluate_source(rect, {0.7, 2.0}), 0.0);
    EXPECT_EQ(evaluate_source(rect, {0.5, 3.0}), 0.0);
}

TEST(EvaluateSource, GaussianBumpPeak) {
    const auto fig15 = std::get<QCase>(figure_case(15).payload).source;
    EXPECT_DOUBLE_EQ(evaluate_source(fig15, {0.5, 0.0}), 10.0);
    EXPECT_NEAR(evaluate_source(fig15, {0.6, 0.2}), 10.0 * std::exp(-0.1) * std::cos(0.2), 1e-14);
}

TEST(EvaluateSource, SingularSetsAndDomain) {
    const auto fig6 = std::get<QCase>(figure_case(6).payload).source;
    EXPECT_THROW((void)evaluate_source(fig6, {1.0, 0.1}), NonFiniteError);
    EXPECT_NEAR(evaluate_source(fig6, {0.9, 0.1}), std::cos(0.1) * std::pow(0.1, -0.25), 1e-14);
    const auto fig14 = std::get<PairedCase>(figure_case(14).payload).q.source;
    EXPECT_THROW((void)evaluate_source(fig14, {0.95, 0.0}), NonFiniteError);
    EXPECT_NEAR(evaluate_source(fig14, {0.95, 2.0}), 0.95 * std::log(2.0), 1e-15);
    EXPECT_THROW((void)evaluate_source(fig6, {1.5, 0.0}), DomainError);
}

TEST(EvaluateSource, WeightedSumIsLinear) {
    const auto a = characteristic_disk(0.5);
    const auto b = separable(radial::RhoPower{2}, angular::Sin{3}, PolarRectangle::full_disk());
    const auto s = weighted_sum({{2.0, a}, {-0.5, b}});
    for (double r : {0.1, 0.4, 0.9}) {
        for (double t : {-2.0, 0.3, 3.0}) {
            EXPECT_NEAR(evaluate_source(s, {r, t}),
                        2.0 * evaluate_source(a, {r, t}) - 0.5 * evaluate_source(b, {r, t}), 1e-15);
        }
    }
}

TEST(EvaluateBoundary, Variants) {
    const Arc sixth{-kPi / 6.0, kPi / 6.0};
    EXPECT_EQ(evaluate_boundary({boundary::CharacteristicArc{sixth}}, 0.1), 1.0);
    EXPECT_EQ(evaluate_boundary({boundary::CharacteristicArc{sixth}}, 0.1 + kTwoPi), 1.0);
    EXPECT_EQ(evaluate_boundary({boundary::CharacteristicArc{sixth}}, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(evaluate_boundary({boundary::AbsTheta{}}, -2.0), 2.0);
    EXPECT_DOUBLE_EQ(evaluate_boundary({boundary::ThetaSquaredOnArc{sixth}}, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(evaluate_boundary({boundary::SinOnArc{{0.0, kPi}}}, -1.0), 0.0);
    EXPECT_DOUBLE_EQ(evaluate_boundary({boundary::Cos{3}}, 0.4), std::cos(1.2));
    EXPECT_THROW((void)evaluate_boundary({boundary::AbsLogAbsOnArc{{0.0, kPi}}}, 0.0), NonFiniteError);
    EXPECT_THROW((BoundaryFunction{boundary::CharacteristicArc{{0.5, 0.2}}}.validate()), ValidationError);
    EXPECT_THROW((BoundaryFunction{boundary::CharacteristicArc{{-4.0, 0.2}}}.validate()), ValidationError);
}

TEST(Validation, RejectsNonSquareIntegrableAndDegenerateSources) {
    EXPECT_THROW(separable(radial::PowerOfOneMinusRho{0.5}, angular::One{}, PolarRectangle::make(0.5, 1, 0, 1))
                     .validate(),
                 ValidationError);
    EXPECT_NO_THROW(separable(radial::PowerOfOneMinusRho{0.49}, angular::One{}, PolarRectangle::make(0.5, 1, 0, 1))
                        .validate());
    EXPECT_THROW(characteristic_disk(0.0).validate(), ValidationError);
    EXPECT_THROW(characteristic_rect(PolarRectangle{0.5, 0.25, 0.0, 1.0}).validate(), ValidationError);
    EXPECT_THROW(weighted_sum({}).validate(), ValidationError);
}

TEST(Catalog, ExactlyFifteenFigures) {
    std::set<int> ids;
    for (int id = 1; id <= kFigureCount; ++id) {
        const auto fc = figure_case(id);
        EXPECT_EQ(fc.id, id);
        EXPECT_FALSE(fc.description.empty());
        ids.insert(id);
    }
    EXPECT_EQ(ids.size(), 15u);
    EXPECT_THROW(figure_case(0), UnknownFigure);
    EXPECT_THROW(figure_case(16), UnknownFigure);
}

TEST(Catalog, PayloadKindsAndPrefactors) {
    EXPECT_TRUE(std::holds_alternative<KernelPlot>(figure_case(1).payload));
    EXPECT_EQ(std::get<KernelPlot>(figure_case(1).payload).radii, (std::vector<double>{0.5, 0.75, 0.85}));
    EXPECT_EQ(std::get<KernelPlot>(figure_case(2).payload).radii, (std::vector<double>{0.5, 0.75}));
    EXPECT_EQ(std::get<QCase>(figure_case(4).payload).prefactor, 1.0);
    EXPECT_EQ(std::get<QCase>(figure_case(9).payload).prefactor, 2.0 / kPi);
    EXPECT_EQ(figure_case(9).compare_with, 8);
    EXPECT_EQ(figure_case(11).compare_with, 10);
    for (int id : {3, 12, 13, 14}) {
        ASSERT_TRUE(std::holds_alternative<PairedCase>(figure_case(id).payload)) << id;
        EXPECT_EQ(std::get<PairedCase>(figure_case(id).payload).q.prefactor, 2.0 / kPi);
    }
    for (int id : {8, 10}) {
        EXPECT_TRUE(std::holds_alternative<PoissonCase>(figure_case(id).payload));
    }
    EXPECT_EQ(catalog_q_cases().size(), 11u);
    EXPECT_EQ(catalog_poisson_cases().size(), 6u);
}

TEST(Catalog, FigureSevenSecondTermUsesCosOnTheLeftArc) {
    const auto src = std::get<QCase>(figure_case(7).payload).source;
    // on [7/8, 1] x [5 pi/6, pi] the second term is cos(phi) (1 - rho)^(-3/8) < 0
    const double v = evaluate_source(src, {0.95, 3.0});
    EXPECT_NEAR(v, std::cos(3.0) * std::pow(0.05, -0.375), 1e-13);
    EXPECT_LT(v, 0.0);
}

namespace {
/// int |f|^2 dA over the disk, summed leaf by leaf (the catalog sums have disjoint supports).
double square_integral(const SourceFunction& f) {
    double total = 0.0;
    for (const auto& leaf : detail::leaves_of(f)) {
        auto sq = [&](double rho, double phi) {
            const double v = leaf.coefficient * leaf.regular(rho, phi);
            return v * v;
        };
        total += leaf.beta ? integrate_singular_radial<double>(sq, 2.0 * *leaf.beta, leaf.region, {}).value
                           : integrate_polar<double>(sq, leaf.region, {}).value;
    }
    return total;
}
} // namespace

TEST(Catalog, SquareIntegrableWithClosedFormChecks) {
    for (const auto& [id, qc] : catalog_q_cases()) {
        const double sq = square_integral(qc.source);
        EXPECT_TRUE(std::isfinite(sq)) << id;
        EXPECT_GT(sq, 0.0) << id;
    }
    EXPECT_NEAR(square_integral(std::get<QCase>(figure_case(4).payload).source), kPi / 16.0, 1e-14);
    // cos^2 phi (1 - rho)^-1/2 on [3/4, 1] x [-pi/6, pi/6]
    const double fig6 = oracle::singular_radial_moment(0.75, 0.5) * (kPi / 6.0 + std::sqrt(3.0) / 4.0);
    EXPECT_NEAR(square_integral(std::get<QCase>(figure_case(6).payload).source), fig6, 1e-10);
    // rho^2 |phi|^2 on [0.9, 1] x [-pi, pi]
    const double fig11 = (1.0 - std::pow(0.9, 4)) / 4.0 * (2.0 * std::pow(kPi, 3) / 3.0);
    EXPECT_NEAR(square_integral(std::get<QCase>(figure_case(11).payload).source), fig11, 1e-12);
}

TEST(Catalog, SingularSquareAgreesWithExtrapolatedMidpoint) {
    // the second term of figure 7 squared: cos^2 phi (1 - rho)^-3/4, midpoint error ~ h^(1/4)
    const auto src = std::get<QCase>(figure_case(7).payload).source;
    const auto leaves = detail::leaves_of(src);
    ASSERT_EQ(leaves.size(), 2u);
    const auto& leaf = leaves[1];
    auto sq = [](double rho, double phi) { return std::pow(std::cos(phi), 2) * std::pow(1.0 - rho, -0.75); };
    const double exact = oracle::singular_radial_moment(0.875, 0.75) *
                         (kPi / 12.0 + (std::sin(2.0 * kPi) - std::sin(5.0 * kPi / 3.0)) / 4.0);
    const double brute = oracle::midpoint_extrapolated(sq, leaf.region.r_lo, leaf.region.r_hi, leaf.region.theta_lo,
                                                       leaf.region.theta_hi, 4000, 200, 0.25);
    EXPECT_NEAR(square_integral(src) - square_integral(separable(radial::PowerOfOneMinusRho{0.25}, angular::Cos{1},
                                                                 PolarRectangle::make(0.75, 1.0, -kPi / 6, kPi / 6))),
                exact, 1e-10);
    EXPECT_NEAR(brute, exact, 1e-3 * exact);
}

TEST(SourceConfig, ParsesDocumentedExamples) {
    const auto rect = parse_source(R"({"type": "char_rect", "r": [0.25, 0.5], "theta": [0, 0.7853981633974483]})");
    ASSERT_TRUE(std::holds_alternative<source::CharacteristicRect>(rect.v));
    EXPECT_EQ(std::get<source::CharacteristicRect>(rect.v).rect.r_hi, 0.5);

    const auto fig6 = parse_source(R"({"type": "separable", "radial": {"pow_one_minus_rho": 0.25},
        "angular": {"cos": 1}, "rect": {"r": [0.75, 1], "theta": [-0.5235987755982988, 0.5235987755982988]}})");
    const auto catalog6 = std::get<QCase>(figure_case(6).payload).source;
    for (double r : {0.8, 0.99}) {
        for (double t : {-0.5, 0.0, 0.3}) {
            EXPECT_NEAR(evaluate_source(fig6, {r, t}), evaluate_source(catalog6, {r, t}), 1e-14);
        }
    }
    const auto b = parse_boundary(R"({"type": "char_arc", "arc": [-0.5, 0.5]})");
    EXPECT_EQ(evaluate_boundary(b, 0.2), 1.0);
}

TEST(SourceConfig, ErrorsNameTheProblem) {
    EXPECT_THROW(parse_source(R"({"type": "char_rect", "r": [0.5, 0.25], "theta": [0, 1]})"), ValidationError);
    EXPECT_THROW(parse_source(R"({"type": "separable", "radial": {"pow_one_minus_rho": 0.5}, "angular": "one",
                                  "rect": {"r": [0.5, 1], "theta": [0, 1]}})"),
                 ValidationError);
    try {
        (void)parse_source("{\n  \"type\": \"char_disk\",\n  \"radius\": ,\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.where(), "line 3");
    }
    try {
        (void)parse_source(R"({"type": "separable", "radial": {"rho_power": 1.5}, "angular": "one",
                                "rect": {"r": [0, 1], "theta": [0, 1]}})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(e.where().find("radial"), std::string::npos) << e.where();
    }
    EXPECT_THROW(parse_source(R"({"type": "nonsense"})"), ParseError);
    EXPECT_THROW(parse_source(R"({"radius": 0.3})"), ParseError);
    EXPECT_THROW(parse_source(R"({"type": "char_arc", "arc": [0, 1]})"), ValidationError);
    EXPECT_THROW(parse_boundary(R"({"type": "char_disk", "radius": 0.3})"), ValidationError);
}

TEST(SourceConfig, RoundTripForEveryCatalogEntry) {
    for (const auto& [id, qc] : catalog_q_cases()) {
        const std::string text = to_json(qc.source).dump();
        EXPECT_EQ(normalize_source_config(text), text) << id;
        EXPECT_EQ(describe(parse_source(text)), describe(qc.source)) << id;
    }
    for (const auto& [id, pc] : catalog_poisson_cases()) {
        const std::string text = to_json(pc.boundary).dump();
        EXPECT_EQ(normalize_source_config(text), text) << id;
        EXPECT_EQ(describe(parse_boundary(text)), describe(pc.boundary)) << id;
    }
}

TEST(SourceConfig, NormalizationCanonicalizesFormatting) {
    const std::string a = R"({ "radius" : 0.25, "type" : "char_disk" })";
    const std::string b = R"({"type":"char_disk","radius":0.25})";
    EXPECT_EQ(normalize_source_config(a), normalize_source_config(b));
}
