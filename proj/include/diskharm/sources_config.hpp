/**
 * @file sources_config.hpp
 * @brief JSON documents describing one source or boundary function.
 *
 * Sources:
 *   {"type": "char_disk", "radius": 0.25}
 *   {"type": "char_rect", "r": [0.25, 0.5], "theta": [0, 0.785398]}
 *   {"type": "separable", "radial": {"pow_one_minus_rho": 0.25}, "angular": {"cos": 1},
 *    "rect": {"r": [0.75, 1], "theta": [-0.5236, 0.5236]}}
 *   {"type": "sum", "terms": [{"coefficient": 1, "source": {...}}, ...]}
 *
 *   radial  : "one" | {"rho_power": k} | {"pow_one_minus_rho": beta}
 *             | {"gaussian": {"amplitude": a, "center": c, "rate": k}}
 *   angular : "one" | "abs_phi" | "phi_squared" | "abs_log_abs_phi" | {"cos": n} | {"sin": n}
 *
 * Boundary functions:
 *   {"type": "char_arc", "arc": [a, b]}       {"type": "abs_theta"}
 *   {"type": "theta_squared_arc", "arc": [a, b]}
 *   {"type": "sin_arc", "arc": [a, b]}        {"type": "abs_log_abs_arc", "arc": [a, b]}
 *   {"type": "cos", "n": 1}                   {"type": "one"}
 *   {"type": "sum", "terms": [{"coefficient": 1, "boundary": {...}}, ...]}
 */
#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "diskharm/errors.hpp"
#include "diskharm/sources.hpp"

namespace diskharm {

using json = nlohmann::json;
using SourceOrBoundary = std::variant<SourceFunction, BoundaryFunction>;

namespace config_detail {

inline const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(path, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ParseError(path, "expected a number");
    }
    return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw ParseError(path, "expected an integer");
    }
    return j.get<int>();
}

inline std::pair<double, double> interval(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(path, "expected a two-element array [lo, hi]");
    }
    return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

inline PolarRectangle rect_from(const json& j, const std::string& path) {
    const auto [r0, r1] = interval(field(j, "r", path), path + "/r");
    const auto [t0, t1] = interval(field(j, "theta", path), path + "/theta");
    try {
        return PolarRectangle::make(r0, r1, t0, t1);
    } catch (const InvalidRegion& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline Arc arc_from(const json& j, const std::string& path) {
    const auto [a, b] = interval(field(j, "arc", path), path + "/arc");
    Arc arc{a, b};
    try {
        arc.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(path + "/arc: " + e.what());
    }
    return arc;
}

/// Either "name" or {"name": value}.
inline std::pair<std::string, const json*> tagged(const json& j, const std::string& path) {
    if (j.is_string()) {
        return {j.get<std::string>(), nullptr};
    }
    if (j.is_object() && j.size() == 1) {
        return {j.begin().key(), &j.begin().value()};
    }
    throw ParseError(path, "expected a name or a single-key object");
}

inline RadialFactor radial_from(const json& j, const std::string& path) {
    const auto [name, value] = tagged(j, path);
    const std::string sub = path + "/" + name;
    if (name == "one") {
        return radial::One{};
    }
    if (value == nullptr) {
        throw ParseError(sub, "radial factor '" + name + "' needs a value");
    }
    if (name == "rho_power") {
        return radial::RhoPower{integer(*value, sub)};
    }
    if (name == "pow_one_minus_rho") {
        return radial::PowerOfOneMinusRho{number(*value, sub)};
    }
    if (name == "gaussian") {
        return radial::GaussianBump{number(field(*value, "amplitude", sub), sub + "/amplitude"),
                                    number(field(*value, "center", sub), sub + "/center"),
                                    number(field(*value, "rate", sub), sub + "/rate")};
    }
    throw ParseError(path, "unknown radial factor '" + name + "'");
}

inline AngularFactor angular_from(const json& j, const std::string& path) {
    const auto [name, value] = tagged(j, path);
    const std::string sub = path + "/" + name;
    if (name == "one") {
        return angular::One{};
    }
    if (name == "abs_phi") {
        return angular::AbsPhi{};
    }
    if (name == "phi_squared") {
        return angular::PhiSquared{};
    }
    if (name == "abs_log_abs_phi") {
        return angular::AbsLogAbsPhi{};
    }
    if (name == "cos" || name == "sin") {
        if (value == nullptr) {
            throw ParseError(sub, "harmonic order missing");
        }
        const int n = integer(*value, sub);
        if (name == "cos") {
            return angular::Cos{n};
        }
        return angular::Sin{n};
    }
    throw ParseError(path, "unknown angular factor '" + name + "'");
}

inline std::string type_of(const json& j, const std::string& path) {
    const json& t = field(j, "type", path);
    if (!t.is_string()) {
        throw ParseError(path + "/type", "expected a string");
    }
    return t.get<std::string>();
}

inline SourceFunction source_from(const json& j, const std::string& path);
inline BoundaryFunction boundary_from(const json& j, const std::string& path);

inline SourceFunction source_from(const json& j, const std::string& path) {
    const std::string type = type_of(j, path);
    SourceFunction s;
    if (type == "char_disk") {
        s = characteristic_disk(number(field(j, "radius", path), path + "/radius"));
    } else if (type == "char_rect") {
        s = characteristic_rect(rect_from(j, path));
    } else if (type == "separable") {
        s = separable(radial_from(field(j, "radial", path), path + "/radial"),
                      angular_from(field(j, "angular", path), path + "/angular"),
                      rect_from(field(j, "rect", path), path + "/rect"));
    } else if (type == "sum") {
        const json& terms = field(j, "terms", path);
        if (!terms.is_array()) {
            throw ParseError(path + "/terms", "expected an array");
        }
        std::vector<source::Term> out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = path + "/terms/" + std::to_string(i);
            const double c = terms[i].contains("coefficient")
                                 ? number(terms[i]["coefficient"], tp + "/coefficient")
                                 : 1.0;
            out.push_back({c, source_from(field(terms[i], "source", tp), tp + "/source")});
        }
        s = weighted_sum(std::move(out));
    } else {
        throw ParseError(path + "/type", "unknown source type '" + type + "'");
    }
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return s;
}

inline BoundaryFunction boundary_from(const json& j, const std::string& path) {
    const std::string type = type_of(j, path);
    BoundaryFunction f;
    if (type == "char_arc") {
        f = {boundary::CharacteristicArc{arc_from(j, path)}};
    } else if (type == "abs_theta") {
        f = {boundary::AbsTheta{}};
    } else if (type == "theta_squared_arc") {
        f = {boundary::ThetaSquaredOnArc{arc_from(j, path)}};
    } else if (type == "sin_arc") {
        f = {boundary::SinOnArc{arc_from(j, path)}};
    } else if (type == "abs_log_abs_arc") {
        f = {boundary::AbsLogAbsOnArc{arc_from(j, path)}};
    } else if (type == "cos") {
        f = {boundary::Cos{integer(field(j, "n", path), path + "/n")}};
    } else if (type == "one") {
        f = {boundary::ConstantOne{}};
    } else if (type == "sum") {
        const json& terms = field(j, "terms", path);
        if (!terms.is_array()) {
            throw ParseError(path + "/terms", "expected an array");
        }
        boundary::WeightedSum sum;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = path + "/terms/" + std::to_string(i);
            const double c = terms[i].contains("coefficient")
                                 ? number(terms[i]["coefficient"], tp + "/coefficient")
                                 : 1.0;
            sum.terms.push_back({c, boundary_from(field(terms[i], "boundary", tp), tp + "/boundary")});
        }
        f = {std::move(sum)};
    } else {
        throw ParseError(path + "/type", "unknown boundary type '" + type + "'");
    }
    try {
        f.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return f;
}

inline bool is_boundary_document(const json& j) {
    static const char* names[] = {"char_arc", "abs_theta", "theta_squared_arc", "sin_arc",
                                  "abs_log_abs_arc", "cos", "one"};
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        return false;
    }
    const auto t = j["type"].get<std::string>();
    for (const char* n : names) {
        if (t == n) {
            return true;
        }
    }
    if (t == "sum" && j.contains("terms") && j["terms"].is_array() && !j["terms"].empty()) {
        return j["terms"][0].contains("boundary");
    }
    return false;
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i + 1 < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
            }
        }
        throw ParseError("line " + std::to_string(line), e.what());
    }
}

} // namespace config_detail

inline SourceFunction source_from_json(const json& j) { return config_detail::source_from(j, ""); }
inline BoundaryFunction boundary_from_json(const json& j) { return config_detail::boundary_from(j, ""); }

/// Parse a document; the type name decides between a source and a boundary function.
inline SourceOrBoundary parse_source_config(const std::string& text) {
    const json j = config_detail::parse_text(text);
    if (config_detail::is_boundary_document(j)) {
        return config_detail::boundary_from(j, "");
    }
    return config_detail::source_from(j, "");
}

inline SourceFunction parse_source(const std::string& text) {
    auto r = parse_source_config(text);
    if (auto* s = std::get_if<SourceFunction>(&r)) {
        return std::move(*s);
    }
    throw ValidationError("document describes a boundary function, a disk source was expected");
}

inline BoundaryFunction parse_boundary(const std::string& text) {
    auto r = parse_source_config(text);
    if (auto* b = std::get_if<BoundaryFunction>(&r)) {
        return std::move(*b);
    }
    throw ValidationError("document describes a disk source, a boundary function was expected");
}

// ---------------------------------------------------------------------------
// Serialization (canonical form)
// ---------------------------------------------------------------------------

inline json to_json(const PolarRectangle& r) {
    return {{"r", {r.r_lo, r.r_hi}}, {"theta", {r.theta_lo, r.theta_hi}}};
}

inline json to_json(const RadialFactor& f) {
    return std::visit(
        [](const auto& x) -> json {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, radial::One>) {
                return "one";
            } else if constexpr (std::is_same_v<X, radial::RhoPower>) {
                return {{"rho_power", x.k}};
            } else if constexpr (std::is_same_v<X, radial::PowerOfOneMinusRho>) {
                return {{"pow_one_minus_rho", x.beta}};
            } else {
                return {{"gaussian",
                         {{"amplitude", x.amplitude}, {"center", x.center}, {"rate", x.rate}}}};
            }
        },
        f);
}

inline json to_json(const AngularFactor& f) {
    return std::visit(
        [](const auto& x) -> json {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, angular::One>) {
                return "one";
            } else if constexpr (std::is_same_v<X, angular::Cos>) {
                return {{"cos", x.n}};
            } else if constexpr (std::is_same_v<X, angular::Sin>) {
                return {{"sin", x.n}};
            } else if constexpr (std::is_same_v<X, angular::AbsPhi>) {
                return "abs_phi";
            } else if constexpr (std::is_same_v<X, angular::PhiSquared>) {
                return "phi_squared";
            } else {
                return "abs_log_abs_phi";
            }
        },
        f);
}

inline json to_json(const SourceFunction& s) {
    return std::visit(
        [](const auto& x) -> json {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, source::CharacteristicDisk>) {
                return {{"type", "char_disk"}, {"radius", x.radius}};
            } else if constexpr (std::is_same_v<X, source::CharacteristicRect>) {
                json j = to_json(x.rect);
                j["type"] = "char_rect";
                return j;
            } else if constexpr (std::is_same_v<X, source::SeparableOnRect>) {
                return {{"type", "separable"},
                        {"radial", to_json(x.radial)},
                        {"angular", to_json(x.angular)},
                        {"rect", to_json(x.rect)}};
            } else {
                json terms = json::array();
                for (const auto& t : x.terms) {
                    terms.push_back({{"coefficient", t.coefficient}, {"source", to_json(t.function)}});
                }
                return {{"type", "sum"}, {"terms", terms}};
            }
        },
        s.v);
}

inline json to_json(const BoundaryFunction& f) {
    return std::visit(
        [](const auto& x) -> json {
            using X = std::decay_t<decltype(x)>;
            auto arc = [](const Arc& a) { return json::array({a.a, a.b}); };
            if constexpr (std::is_same_v<X, boundary::CharacteristicArc>) {
                return {{"type", "char_arc"}, {"arc", arc(x.arc)}};
            } else if constexpr (std::is_same_v<X, boundary::AbsTheta>) {
                return {{"type", "abs_theta"}};
            } else if constexpr (std::is_same_v<X, boundary::ThetaSquaredOnArc>) {
                return {{"type", "theta_squared_arc"}, {"arc", arc(x.arc)}};
            } else if constexpr (std::is_same_v<X, boundary::SinOnArc>) {
                return {{"type", "sin_arc"}, {"arc", arc(x.arc)}};
            } else if constexpr (std::is_same_v<X, boundary::AbsLogAbsOnArc>) {
                return {{"type", "abs_log_abs_arc"}, {"arc", arc(x.arc)}};
            } else if constexpr (std::is_same_v<X, boundary::Cos>) {
                return {{"type", "cos"}, {"n", x.n}};
            } else if constexpr (std::is_same_v<X, boundary::ConstantOne>) {
                return {{"type", "one"}};
            } else {
                json terms = json::array();
                for (const auto& t : x.terms) {
                    terms.push_back({{"coefficient", t.coefficient}, {"boundary", to_json(t.function)}});
                }
                return {{"type", "sum"}, {"terms", terms}};
            }
        },
        f.v);
}

/// Canonical text of a document: parse, validate, re-serialize.
inline std::string normalize_source_config(const std::string& text) {
    const auto parsed = parse_source_config(text);
    return std::visit([](const auto& x) { return to_json(x).dump(); }, parsed);
}

inline std::string describe(const SourceFunction& s) { return to_json(s).dump(); }
inline std::string describe(const BoundaryFunction& f) { return to_json(f).dump(); }

} // namespace diskharm
