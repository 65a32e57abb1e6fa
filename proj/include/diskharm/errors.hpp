#pragma once

#include <stdexcept>
#include <string>

namespace diskharm {

/// Argument outside the domain of a kernel or transform (r >= 1, alpha <= -1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An integrand or source produced NaN/Inf at a point where a finite value was required.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidRegion : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidExponent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownFigure : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed source document. `where` names the line or the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& where, const std::string& what)
        : std::runtime_error((where.empty() ? std::string("document") : where) + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IncompatibleKind : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class StencilOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
    int iterations() const noexcept { return iterations_; }
    double achieved_residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace diskharm
