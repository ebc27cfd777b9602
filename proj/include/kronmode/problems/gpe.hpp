#pragma once

// Gross-Pitaevskii equation psi' = i/2 Lap psi + i/2 (1 - |psi|^2) psi on a
// non-uniform Neumann grid, split as nonlinear half step, exact linear step,
// nonlinear half step. The state is held in the symmetrized variables
// phi = W^{1/2} psi, so the linear flow is unitary in the plain 2-norm.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kronmode/fd.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/problems/report.hpp"

namespace kronmode::problems {

/// Product weights w(i) = prod_mu w_mu(i_mu) as a tensor.
[[nodiscard]] inline Tensor<double> point_weights(std::span<const std::vector<double>> weights) {
    return sample_on_grid<double>(weights, [](std::span<const double> w) {
        double p = 1;
        for (double v : w) p *= v;
        return p;
    });
}

/// Exact flow of psi' = i/2 (1 - |psi|^2 / w) psi over time h: a pointwise
/// phase rotation, since |psi| is invariant along it.
inline void gpe_nonlinear_flow(Tensor<std::complex<double>>& psi, const Tensor<double>& w, double h) {
    if (psi.shape() != w.shape()) throw shape_error("gpe_nonlinear_flow: weight shape mismatch");
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double phase = 0.5 * (1.0 - std::norm(psi[j]) / w[j]) * h;
        psi[j] *= std::polar(1.0, phase);
    }
}

/// One Strang step: nonlinear tau/2, linear tau through the cached
/// exponentials, nonlinear tau/2.
[[nodiscard]] inline Tensor<std::complex<double>> gpe_strang_step(
    const PropagatorCache<std::complex<double>>& linear_cache, const Tensor<double>& weights,
    const Tensor<std::complex<double>>& psi, double tau, PhaseClock* clock = nullptr) {
    if (psi.shape() != linear_cache.shape())
        throw shape_error("gpe_strang_step: state shape " + psi.shape().to_string() + " vs propagator " +
                          linear_cache.shape().to_string());
    PhaseClock local;
    PhaseClock& c = clock ? *clock : local;
    Tensor<std::complex<double>> u = psi;
    c.other([&] { gpe_nonlinear_flow(u, weights, 0.5 * tau); });
    u = c.mumode([&] { return step(linear_cache, u); });
    c.other([&] { gpe_nonlinear_flow(u, weights, 0.5 * tau); });
    return u;
}

[[nodiscard]] inline Tensor<std::complex<double>> gpe_strang_step(
    const PropagatorCache<std::complex<double>>& linear_cache, std::span<const std::vector<double>> weights,
    const Tensor<std::complex<double>>& psi, double tau) {
    return gpe_strang_step(linear_cache, point_weights(weights), psi, tau);
}

/// Two straight vortices in unit background density. Each vortex is
/// f(r) e^{i theta} with the Padé core profile
/// f(r) = sqrt(r^2 (a1 + a2 r^2) / (1 + b1 r^2 + a2 r^4)).
struct VortexConfig {
    double a1 = 11.0 / 32.0;
    double a2 = 11.0 / 384.0;
    double b1 = 1.0 / 3.0;
    /// Distance in x3 between the two vortex lines.
    double separation = 2.0;

    [[nodiscard]] double profile(double r) const {
        const double r2 = r * r;
        return std::sqrt(r2 * (a1 + a2 * r2) / (1.0 + b1 * r2 + a2 * r2 * r2));
    }

    /// Vortex A runs along x1 through (x2, x3) = (0, +d/2); vortex B runs
    /// along x2 through (x1, x3) = (0, -d/2). The datum is their product.
    [[nodiscard]] std::complex<double> operator()(std::span<const double> x) const {
        const double h = 0.5 * separation;
        const double ya = x[1];
        const double za = x[2] - h;
        const double xb = x[0];
        const double zb = x[2] + h;
        const auto va = std::polar(profile(std::hypot(ya, za)), std::atan2(za, ya));
        const auto vb = std::polar(profile(std::hypot(xb, zb)), std::atan2(zb, xb));
        return va * vb;
    }
};

struct GpeConfig {
    double half_width = 20.0;
    /// sinh clustering strength of the grid towards the origin.
    double cluster_strength = 2.0;
    VortexConfig vortex;
    /// Replace the vortex datum with the uniform background psi = 1.
    bool uniform_background = false;
};

struct GpeSetup {
    std::vector<fd::Grid1D> grids;
    fd::WeightedKronecker weighted;
    KroneckerOp<std::complex<double>> linear;  // i * (1/2) symmetrized D2 per direction
    Tensor<double> weights;
    Tensor<std::complex<double>> initial;  // symmetrized variables
};

[[nodiscard]] inline GpeSetup gpe_setup(std::size_t n, const GpeConfig& cfg = {}) {
    std::vector<fd::Grid1D> grids(
        3, fd::Grid1D::sinh_clustered(-cfg.half_width, cfg.half_width, n, cfg.cluster_strength));
    auto weighted = fd::gpe_weighted_factors(std::span<const fd::Grid1D>(grids));
    std::vector<DenseMatrix<std::complex<double>>> factors;
    for (const auto& a : weighted.op.factors())
        factors.push_back(a.cast<std::complex<double>>() * std::complex<double>(0.0, 1.0));
    KroneckerOp<std::complex<double>> linear(std::move(factors));
    auto w = point_weights(std::span<const std::vector<double>>(weighted.weights));
    std::vector<std::vector<double>> coords;
    for (const auto& g : grids) coords.push_back(g.points());
    auto psi = sample_on_grid<std::complex<double>>(std::span(coords), [&](std::span<const double> x) {
        return cfg.uniform_background ? std::complex<double>(1.0, 0.0) : cfg.vortex(x);
    });
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= std::sqrt(w[j]);
    return {std::move(grids), std::move(weighted), std::move(linear), std::move(w), std::move(psi)};
}

/// Strang-splitting run to T with step tau. rel_error reports the relative
/// drift of the weighted 2-norm, the quantity the scheme conserves.
[[nodiscard]] inline Run<std::complex<double>> gpe_solve(std::size_t n, double T, double tau,
                                                         const GpeConfig& cfg = {}) {
    if (n < 16) throw config_error("gpe: n must be at least 16");
    if (!(tau > 0)) throw config_error("gpe: tau must be positive");
    const auto steps = static_cast<std::size_t>(std::llround(T / tau));
    if (steps == 0 || std::abs(static_cast<double>(steps) * tau - T) > 1e-9 * std::max(1.0, T))
        throw config_error("gpe: T must be a positive multiple of tau");
    PhaseClock clock;
    RunReport rep;
    rep.problem = "gpe";
    rep.shape = {n, n, n};
    rep.n = n;
    rep.p = 2;
    rep.steps = steps;
    rep.tau = tau;
    rep.norm = NormKind::weighted_two;

    const auto setup = clock.other([&] { return gpe_setup(n, cfg); });
    const auto cache = clock.exp([&] { return prepare(setup.linear, tau); });
    Tensor<std::complex<double>> psi = setup.initial;
    for (std::size_t s = 0; s < steps; ++s) psi = gpe_strang_step(cache, setup.weights, psi, tau, &clock);
    const double n0 = norm_two(setup.initial);
    const double drift = std::abs(norm_two(psi) - n0) / n0;
    rep.norm_drift = drift;
    rep.rel_error = drift;
    clock.fill(rep);
    return {std::move(rep), std::move(psi)};
}

[[nodiscard]] inline RunReport gpe_run(std::size_t n, double T, double tau, const GpeConfig& cfg = {}) {
    return gpe_solve(n, T, tau, cfg).report;
}

}  // namespace kronmode::problems
