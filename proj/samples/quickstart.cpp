// Small tour of the library: a Q transform, a Poisson integral and a heat solve.
#include <cstdio>

#include "diskharm/diskharm.hpp"

int main() {
    using namespace diskharm;

    // The Q transform of the indicator of the disk of radius 1/4 is the constant pi/16.
    const auto disk = characteristic_disk(0.25);
    const auto t = q_transform_at(disk, 0.6, 1.0, 1.0);
    std::printf("Q transform of the small disk at (0.6, 1.0): %.12f (pi/16 = %.12f)\n", t.value, kPi / 16.0);

    // Harmonic measure of the arc [-pi/6, pi/6] seen from the center and from near the arc.
    const BoundaryFunction arc{boundary::CharacteristicArc{{-kPi / 6.0, kPi / 6.0}}};
    std::printf("harmonic measure at the origin: %.12f\n", poisson_integral_at(arc, 0.0, 0.0).value);
    std::printf("harmonic measure at (0.9, 0):   %.12f\n", poisson_integral_at(arc, 0.9, 0.0).value);

    // A coarse grid of the projection, written as CSV with its metadata sidecar.
    const auto field = bergman_project(disk, EvaluationGrid::uniform(0.9, 5, 16));
    write_grid("quickstart_projection.csv", field);
    std::printf("projection of the small disk: min %.6f max %.6f (expected 1/16)\n", field.min_value(),
                field.max_value());

    // Steady heat distribution for a uniform source with a cold boundary.
    HeatProblem heat{characteristic_disk(1.0), 1.0, HeatBoundary::dirichlet_zero(), {32, 64}};
    const auto sol = solve_steady_state(heat);
    std::printf("heat solve: center temperature %.6f (exact 0.25) after %d iterations\n", sol.field.at(0, 0),
                sol.iterations);
    return 0;
}
