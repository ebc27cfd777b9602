#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "kronmode/fd.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/problems/report.hpp"

namespace kronmode::problems {

/// Periodic heat equation on [0, 2pi)^3 with u0 = cos x1 + cos x2 + cos x3.
/// The error is taken against the exact PDE solution e^{-T} u0 on the grid.
/// p = fd::spectral_order selects Fourier differentiation.
template <typename Real = double>
[[nodiscard]] Run<Real> heat3d_solve(std::size_t n, int p, double T, std::size_t steps,
                                     NormKind norm = NormKind::max) {
    if (n < 8) throw config_error("heat: n must be at least 8");
    const TimeGrid grid(0.0, T, steps);
    PhaseClock clock;
    RunReport rep;
    rep.problem = "heat";
    rep.shape = {n, n, n};
    rep.n = n;
    rep.p = p;
    rep.steps = steps;
    rep.tau = grid.tau();
    rep.precision = precision_name<Real>();
    rep.norm = norm;

    const auto [op, u0, exact] = clock.other([&] {
        auto op = fd::heat_factors(n, p);
        const auto g = fd::Grid1D::uniform_periodic(0.0, 2.0 * std::numbers::pi, n);
        const std::vector<std::vector<double>> coords(3, g.points());
        auto sum_cos = [](std::span<const double> x) { return std::cos(x[0]) + std::cos(x[1]) + std::cos(x[2]); };
        auto u0 = sample_on_grid<Real>(std::span(coords), sum_cos);
        const double decay = std::exp(-T);
        auto exact = sample_on_grid<Real>(std::span(coords), [&](std::span<const double> x) {
            return decay * sum_cos(x);
        });
        return std::tuple{std::move(op), std::move(u0), std::move(exact)};
    });

    const auto cache = clock.exp([&] { return prepare(op, grid.tau()).template cast<Real>(); });
    Tensor<Real> u = u0;
    clock.mumode([&] {
        for (std::size_t s = 0; s < steps; ++s) u = step(cache, u);
    });
    rep.rel_error = clock.other([&] { return relative_error(u, exact, norm); });
    clock.fill(rep);
    return {std::move(rep), std::move(u)};
}

template <typename Real = double>
[[nodiscard]] RunReport heat3d_run(std::size_t n, int p, double T, std::size_t steps,
                                   NormKind norm = NormKind::max) {
    return heat3d_solve<Real>(n, p, T, steps, norm).report;
}

}  // namespace kronmode::problems
