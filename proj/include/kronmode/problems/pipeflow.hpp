#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kronmode/fd.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/krylov.hpp"
#include "kronmode/problems/report.hpp"

namespace kronmode::problems {

/// Initial concentration exp(-8 (rho - rho0)^2 - 8 (z - z0)^2) on the grid.
template <typename Real = double>
[[nodiscard]] Tensor<Real> pipeflow_initial(std::size_t n_rho, std::size_t n_z,
                                            const fd::PipeflowParams& prm = {}) {
    const double rho0 = 0.5 * (prm.rho_min + prm.rho_max);
    const double z0 = 1.5;
    const std::vector<std::vector<double>> coords{fd::pipe_rho_grid(n_rho, prm).points(),
                                                  fd::pipe_z_grid(n_z, prm).points()};
    return sample_on_grid<Real>(std::span(coords), [&](std::span<const double> x) {
        const double dr = x[0] - rho0;
        const double dz = x[1] - z0;
        return std::exp(-8.0 * dr * dr - 8.0 * dz * dz);
    });
}

struct PipeflowOptions {
    /// Compute the Arnoldi reference and report the error against it.
    bool with_reference = true;
    double reference_tol = 1e-10;
};

/// Radially symmetric diffusion-advection in a pipe, n points per direction,
/// integrated to T. The reference is the Arnoldi approximation of
/// exp(T M) c0 on the same discretization (double precision).
template <typename Real = double>
[[nodiscard]] Run<Real> pipeflow_solve(std::size_t n, double T, std::size_t steps,
                                       NormKind norm = NormKind::max, const PipeflowOptions& opt = {}) {
    if (n < 16) throw config_error("pipeflow: n must be at least 16");
    const TimeGrid grid(0.0, T, steps);
    PhaseClock clock;
    RunReport rep;
    rep.problem = "pipeflow";
    rep.shape = {n, n};
    rep.n = n;
    rep.p = 2;
    rep.steps = steps;
    rep.tau = grid.tau();
    rep.precision = precision_name<Real>();
    rep.norm = norm;

    const auto op = clock.other([&] { return fd::pipeflow_factors(n); });
    const auto c0 = clock.other([&] { return pipeflow_initial<double>(n, n); });
    const auto cache = clock.exp([&] { return prepare(op, grid.tau()).template cast<Real>(); });
    Tensor<Real> c = c0.template cast<Real>();
    clock.mumode([&] {
        for (std::size_t s = 0; s < steps; ++s) c = step(cache, c);
    });
    if (opt.with_reference) {
        rep.rel_error = clock.other([&] {
            KrylovOptions kopt;
            kopt.tol = opt.reference_tol;
            const auto ref = arnoldi_expmv_detailed(op, c0, T, kopt).value;
            return relative_error(c.template cast<double>(), ref, norm);
        });
    }
    clock.fill(rep);
    return {std::move(rep), std::move(c)};
}

template <typename Real = double>
[[nodiscard]] RunReport pipeflow_run(std::size_t n, double T, std::size_t steps,
                                     NormKind norm = NormKind::max) {
    return pipeflow_solve<Real>(n, T, steps, norm).report;
}

}  // namespace kronmode::problems
