#pragma once

// Linear Schrödinger problems in a Hermite basis: the time-independent
// potential solved exactly in one step (HKP), and the time-dependent
// Hamiltonian advanced by the exponential midpoint rule (HKMP).

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "kronmode/hermite.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/problems/report.hpp"

namespace kronmode::problems {

using cplx = std::complex<double>;

/// psi0(x) = 2^{-5/2} pi^{-3/4} (x1 + i x2) exp(-|x|^2 / 4).
[[nodiscard]] inline cplx schrodinger_initial(std::span<const double> x) {
    const double c = std::pow(2.0, -2.5) * std::pow(std::numbers::pi, -0.75);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return c * cplx(x[0], x[1]) * std::exp(-0.25 * r2);
}

namespace detail {

inline std::vector<hermite::HermiteBasis> cube_bases(std::size_t k) {
    const hermite::HermiteBasis b(k);
    return {b, b, b};
}

inline std::vector<std::vector<double>> node_coords(std::span<const hermite::HermiteBasis> bases) {
    std::vector<std::vector<double>> c;
    for (const auto& b : bases) c.push_back(b.nodes());
    return c;
}

template <typename Real>
Tensor<std::complex<Real>> initial_coefficients(std::span<const hermite::HermiteBasis> bases) {
    const auto coords = node_coords(bases);
    const auto values = sample_on_grid<std::complex<Real>>(std::span(coords), schrodinger_initial);
    return hermite::forward_transform(bases, values).coeffs;
}

}  // namespace detail

/// Generator factors of the time-independent problem: V1 = cos(2 pi x1)
/// (or x1^2/2 when harmonic_only), V2 = x2^2/2, V3 = x3^2/2.
[[nodiscard]] inline KroneckerOp<cplx> hkp_operator(std::span<const hermite::HermiteBasis> bases,
                                                    bool harmonic_only = false) {
    const hermite::Potential harmonic = [](double x) { return 0.5 * x * x; };
    const hermite::Potential cosine = [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
    return KroneckerOp<cplx>({hermite::hamiltonian_factor(bases[0], harmonic_only ? harmonic : cosine),
                              hermite::hamiltonian_factor(bases[1], harmonic),
                              hermite::hamiltonian_factor(bases[2], harmonic)});
}

struct HkpOptions {
    /// Basis size of the reference run; 0 disables the error computation.
    std::size_t reference_k = 120;
    bool harmonic_only = false;
    NormKind norm = NormKind::max;
};

struct HkpState {
    Tensor<cplx> initial;  // coefficients at t = 0
    Tensor<cplx> final;    // coefficients at t = T
};

/// Coefficients of the HKP solution after one exact step to T.
[[nodiscard]] inline HkpState hkp_coefficients(std::size_t k, double T, bool harmonic_only,
                                               PhaseClock* clock = nullptr) {
    PhaseClock local;
    PhaseClock& c = clock ? *clock : local;
    const auto bases = c.other([&] { return detail::cube_bases(k); });
    auto c0 = c.other([&] { return detail::initial_coefficients<double>(bases); });
    const auto op = c.other([&] { return hkp_operator(bases, harmonic_only); });
    const auto cache = c.exp([&] { return prepare(op, T); });
    auto cT = c.mumode([&] { return step(cache, c0); });
    return {std::move(c0), std::move(cT)};
}

/// Hermite Kronecker pseudospectral run: sample psi0 on the Gauss-Hermite
/// grid, transform, propagate exactly to T in one step, transform back. The
/// error compares node values against a reference of basis size
/// reference_k evaluated at the same nodes.
[[nodiscard]] inline Run<cplx> hkp_solve(std::size_t k, double T, const HkpOptions& opt = {}) {
    if (k < 8) throw config_error("schrodinger-ti: k must be at least 8");
    PhaseClock clock;
    RunReport rep;
    rep.problem = "schrodinger-ti";
    rep.shape = {k, k, k};
    rep.k = k;
    rep.steps = 1;
    rep.tau = T;
    rep.norm = opt.norm;

    const auto bases = detail::cube_bases(k);
    const auto state = hkp_coefficients(k, T, opt.harmonic_only, &clock);
    const double n0 = norm_two(state.initial);
    rep.norm_drift = std::abs(norm_two(state.final) - n0) / n0;
    auto values = clock.other([&] {
        return hermite::inverse_transform(std::span<const hermite::HermiteBasis>(bases),
                                          hermite::SpectralField<cplx>{state.final});
    });
    if (opt.reference_k > 0) {
        rep.rel_error = clock.other([&] {
            const auto ref_state = hkp_coefficients(opt.reference_k, T, opt.harmonic_only);
            const auto ref_bases = detail::cube_bases(opt.reference_k);
            const auto coords = detail::node_coords(bases);
            const auto ref_values = hermite::inverse_transform(
                std::span<const hermite::HermiteBasis>(ref_bases),
                hermite::SpectralField<cplx>{ref_state.final}, std::span(coords));
            return relative_error(values, ref_values, opt.norm);
        });
    }
    clock.fill(rep);
    return {std::move(rep), std::move(values)};
}

[[nodiscard]] inline RunReport hkp_run(std::size_t k, double T, const HkpOptions& opt = {}) {
    return hkp_solve(k, T, opt).report;
}

/// Exponential midpoint rule U <- U x_mu exp(tau A_mu(t + tau/2)) for a
/// time-dependent Kronecker-form generator.
template <Scalar T, Scalar U>
[[nodiscard]] Tensor<promote_t<T, U>> magnus_midpoint_step(
    const std::function<KroneckerOp<T>(double)>& factors_of_t, const Tensor<U>& u, double t, double tau) {
    const auto op = factors_of_t(t + 0.5 * tau);
    return step(prepare(op, tau), u);
}

/// Factors of the time-dependent problem psi' = H(t) psi with
/// H = i/2 (Laplacian - |x|^2 - 2 x3 sin^2 t), in coefficient space.
/// Directions 0 and 1 are the constant harmonic factors -i diag(i + 1/2);
/// direction 2 adds sin^2(t) times the position operator.
class HkmpGenerator {
public:
    explicit HkmpGenerator(const hermite::HermiteBasis& basis)
        : k_(basis.size()), position_(hermite::position_operator(basis)) {
        harmonic_ = DenseMatrix<cplx>(k_, k_);
        for (std::size_t i = 0; i < k_; ++i) harmonic_(i, i) = cplx(0.0, -(static_cast<double>(i) + 0.5));
    }

    [[nodiscard]] const DenseMatrix<cplx>& harmonic() const noexcept { return harmonic_; }

    [[nodiscard]] DenseMatrix<cplx> third(double t) const {
        const double s = std::sin(t);
        const double s2 = s * s;
        DenseMatrix<cplx> a = harmonic_;
        for (std::size_t j = 0; j < k_; ++j)
            for (std::size_t i = 0; i < k_; ++i) a(i, j) += cplx(0.0, -s2 * position_(i, j));
        return a;
    }

    [[nodiscard]] KroneckerOp<cplx> at(double t) const { return KroneckerOp<cplx>({harmonic_, harmonic_, third(t)}); }

private:
    std::size_t k_;
    DenseMatrix<double> position_;
    DenseMatrix<cplx> harmonic_;
};

/// HKMP coefficient propagation. The exponentials of the two constant
/// directions are computed once; the third is recomputed every step at the
/// midpoint time.
[[nodiscard]] inline Tensor<cplx> hkmp_coefficients(const HkmpGenerator& gen, const Tensor<cplx>& c0,
                                                    double T, std::size_t steps, PhaseClock* clock = nullptr) {
    PhaseClock local;
    PhaseClock& c = clock ? *clock : local;
    const TimeGrid grid(0.0, T, steps);
    const double tau = grid.tau();
    std::vector<std::optional<DenseMatrix<cplx>>> exps(3);
    c.exp([&] {
        const auto e = matexp(gen.harmonic() * cplx(tau));
        exps[0] = e;
        exps[1] = e;
    });
    Tensor<cplx> u = c0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double mid = grid.time(s) + 0.5 * tau;
        c.exp([&] { exps[2] = matexp(gen.third(mid) * cplx(tau)); });
        u = c.mumode([&] { return tucker(u, std::span<const std::optional<DenseMatrix<cplx>>>(exps)); });
    }
    return u;
}

struct HkmpOptions {
    /// Steps of the same-discretization reference; 0 disables the error.
    std::size_t reference_steps = 2048;
    NormKind norm = NormKind::max;
};

/// Hermite Kronecker Magnus pseudospectral run to T with `steps` midpoint
/// steps. The error compares node values against the same method with
/// reference_steps steps (time error only).
[[nodiscard]] inline Run<cplx> hkmp_solve(std::size_t k, double T, std::size_t steps,
                                          const HkmpOptions& opt = {}) {
    if (k < 8) throw config_error("schrodinger-td: k must be at least 8");
    PhaseClock clock;
    RunReport rep;
    rep.problem = "schrodinger-td";
    rep.shape = {k, k, k};
    rep.k = k;
    rep.steps = steps;
    rep.tau = TimeGrid(0.0, T, steps).tau();
    rep.norm = opt.norm;

    const auto bases = clock.other([&] { return detail::cube_bases(k); });
    const auto c0 = clock.other([&] { return detail::initial_coefficients<double>(bases); });
    const HkmpGenerator gen(bases[2]);
    const auto cT = hkmp_coefficients(gen, c0, T, steps, &clock);
    const double n0 = norm_two(c0);
    rep.norm_drift = std::abs(norm_two(cT) - n0) / n0;
    const std::span<const hermite::HermiteBasis> bspan(bases);
    auto values = clock.other([&] { return hermite::inverse_transform(bspan, hermite::SpectralField<cplx>{cT}); });
    if (opt.reference_steps > 0) {
        rep.rel_error = clock.other([&] {
            const auto ref = hkmp_coefficients(gen, c0, T, opt.reference_steps);
            const auto ref_values = hermite::inverse_transform(bspan, hermite::SpectralField<cplx>{ref});
            return relative_error(values, ref_values, opt.norm);
        });
    }
    clock.fill(rep);
    return {std::move(rep), std::move(values)};
}

[[nodiscard]] inline RunReport hkmp_run(std::size_t k, double T, std::size_t steps, const HkmpOptions& opt = {}) {
    return hkmp_solve(k, T, steps, opt).report;
}

}  // namespace kronmode::problems
