#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "diskharm/errors.hpp"
#include "diskharm/kernels.hpp"
#include "diskharm/quadrature.hpp"

namespace diskharm {

/// Tensor grid of evaluation points: radii in [0, r_max], angles in [-pi, pi).
struct EvaluationGrid {
    std::vector<double> radii;
    std::vector<double> angles;

    /// n_r radii from 0 to r_max inclusive, n_theta angles -pi + 2 pi j / n_theta.
    static EvaluationGrid uniform(double r_max = 0.9, int n_r = 40, int n_theta = 128,
                                  double radius_cap = 0.99) {
        if (!(r_max > 0.0 && r_max <= radius_cap && radius_cap < 1.0)) {
            throw DomainError("EvaluationGrid: r_max must lie in (0, " + std::to_string(radius_cap) +
                              "]");
        }
        if (n_r < 1 || n_theta < 1) {
            throw std::invalid_argument("EvaluationGrid: n_r and n_theta must be positive");
        }
        EvaluationGrid g;
        g.radii.resize(n_r);
        for (int i = 0; i < n_r; ++i) {
            g.radii[i] = n_r == 1 ? r_max : r_max * i / (n_r - 1);
        }
        g.angles.resize(n_theta);
        for (int j = 0; j < n_theta; ++j) {
            g.angles[j] = -kPi + kTwoPi * j / n_theta;
        }
        return g;
    }

    static EvaluationGrid from_axes(std::vector<double> radii, std::vector<double> angles) {
        EvaluationGrid g{std::move(radii), std::move(angles)};
        g.validate();
        return g;
    }

    void validate() const {
        if (radii.empty() || angles.empty()) {
            throw std::invalid_argument("EvaluationGrid: empty axis");
        }
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] >= 0.0 && radii[i] < 1.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
                throw DomainError("EvaluationGrid: radii must increase strictly within [0, 1)");
            }
        }
        for (std::size_t j = 0; j < angles.size(); ++j) {
            if (!(angles[j] >= -kPi && angles[j] < kPi) || (j > 0 && !(angles[j] > angles[j - 1]))) {
                throw DomainError("EvaluationGrid: angles must increase strictly within [-pi, pi)");
            }
        }
    }

    [[nodiscard]] double r_max() const { return radii.back(); }
    [[nodiscard]] std::size_t n_r() const { return radii.size(); }
    [[nodiscard]] std::size_t n_theta() const { return angles.size(); }
    [[nodiscard]] std::size_t size() const { return radii.size() * angles.size(); }
};

struct FieldMeta {
    std::string operator_name;
    std::string source_description;
    double prefactor = 1.0;
    QuadratureSpec quadrature;
};

/// Values of a computed function on an evaluation grid, row-major (radius, angle).
struct Field {
    EvaluationGrid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> converged;
    FieldMeta meta;

    static Field zeros(EvaluationGrid grid) {
        Field f;
        f.values.assign(grid.size(), 0.0);
        f.converged.assign(grid.size(), 1);
        f.grid = std::move(grid);
        return f;
    }

    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const { return i * grid.n_theta() + j; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return values[index(i, j)]; }
    [[nodiscard]] bool converged_at(std::size_t i, std::size_t j) const {
        return converged[index(i, j)] != 0;
    }
    [[nodiscard]] bool all_converged() const {
        return std::all_of(converged.begin(), converged.end(), [](auto c) { return c != 0; });
    }
    [[nodiscard]] double max_value() const { return *std::max_element(values.begin(), values.end()); }
    [[nodiscard]] double min_value() const { return *std::min_element(values.begin(), values.end()); }
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }
};

/**
 * @brief Run fn(k) for k in [0, n) on hardware threads.
 *
 * Each index is written independently by the caller, so the result does not
 * depend on scheduling. The exception from the lowest failing index wins.
 */
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace diskharm
