#pragma once

// Quick oracle-equivalence checks run by `kronmode_bench selftest`.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "kronmode/kronmode.hpp"

namespace kronmode::bench {

struct SelftestCase {
    std::string name;
    double value;
    double limit;
    [[nodiscard]] bool passed() const { return std::isfinite(value) && value <= limit; }
};

namespace detail {

inline DenseMatrix<double> random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    DenseMatrix<double> a(m, n);
    for (auto& v : a.values()) v = d(rng);
    return a;
}

inline Tensor<double> random_tensor(std::mt19937_64& rng, const Shape& s) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Tensor<double> t{s};
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = d(rng);
    return t;
}

inline double rel_diff(const Tensor<double>& a, const Tensor<double>& b) {
    return norm_two(a - b) / norm_two(b);
}

inline Tensor<double> dense_apply(const DenseMatrix<double>& m, const Tensor<double>& u) {
    Tensor<double> out{u.shape()};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * u[j];
        out[i] = s;
    }
    return out;
}

}  // namespace detail

/// Runs the suite; the random cases are drawn from `seed`.
[[nodiscard]] inline std::vector<SelftestCase> run_selftest(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SelftestCase> out;
    const Shape shape({5, 4, 6});

    {
        // mode product against the defining index loop
        const auto u = detail::random_tensor(rng, shape);
        const auto l = detail::random_matrix(rng, 3, 4);
        const auto s = mu_mode_product(u, l, 1);
        Tensor<double> ref{Shape({5, 3, 6})};
        for (std::size_t i3 = 0; i3 < 6; ++i3)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t i1 = 0; i1 < 5; ++i1) {
                    double acc = 0;
                    for (std::size_t j = 0; j < 4; ++j) acc += l(i, j) * u.at({i1, j, i3});
                    ref.at({i1, i, i3}) = acc;
                }
        out.push_back({"mode product vs index loop", detail::rel_diff(s, ref), 1e-14});
    }

    std::vector<DenseMatrix<double>> factors;
    for (std::size_t mu = 0; mu < 3; ++mu) factors.push_back(detail::random_matrix(rng, shape[mu], shape[mu]));
    const KroneckerOp<double> op(factors);
    const auto u = detail::random_tensor(rng, shape);
    const auto full = assemble_full(op);

    {
        const auto lhs = tucker(u, std::span<const DenseMatrix<double>>(factors));
        const auto kr = kron(kron(factors[2], factors[1]), factors[0]);
        out.push_back({"tucker vs dense kronecker", detail::rel_diff(lhs, detail::dense_apply(kr, u)), 1e-13});
    }
    {
        const double tau = 0.3;
        const auto s = step(prepare(op, tau), u);
        const auto ref = detail::dense_apply(matexp(full * tau), u);
        out.push_back({"step vs dense exponential", detail::rel_diff(s, ref), 1e-12});
        const auto kry = arnoldi_expmv(op, u, tau, 1e-12, 50);
        out.push_back({"krylov vs step", detail::rel_diff(kry, s), 1e-9});
    }
    {
        const hermite::HermiteBasis b(60);
        const auto& phi = b.phi();
        double dev = 0;
        for (std::size_t i = 0; i < 60; ++i)
            for (std::size_t j = 0; j < 60; ++j) {
                double g = 0;
                for (std::size_t l = 0; l < 60; ++l) g += phi(i, l) * phi(j, l) * b.mod_weights()[l];
                dev = std::max(dev, std::abs(g - (i == j ? 1.0 : 0.0)));
            }
        out.push_back({"hermite discrete orthonormality k=60", dev, 1e-12});
    }
    {
        const std::vector<hermite::HermiteBasis> bases{hermite::HermiteBasis(12), hermite::HermiteBasis(9)};
        const std::span<const hermite::HermiteBasis> bs(bases);
        const auto c = detail::random_tensor(rng, Shape({12, 9}));
        const auto values = hermite::inverse_transform(bs, hermite::SpectralField<double>{c});
        const auto back = hermite::forward_transform(bs, values).coeffs;
        out.push_back({"hermite round trip", detail::rel_diff(back, c), 1e-12});
    }
    {
        const auto rep = problems::heat3d_run(40, 2, 1.0, 1);
        out.push_back({"heat n=40 error vs 2.06e-3", std::abs(rep.rel_error / 2.06e-3 - 1.0), 0.01});
    }
    return out;
}

inline bool print_selftest(std::ostream& os, const std::vector<SelftestCase>& cases) {
    std::size_t failed = 0;
    for (const auto& c : cases) {
        os << (c.passed() ? "PASS " : "FAIL ") << c.name << "  (" << c.value << " <= " << c.limit << ")\n";
        if (!c.passed()) ++failed;
    }
    os << (cases.size() - failed) << "/" << cases.size() << " checks passed\n";
    return failed == 0;
}

}  // namespace kronmode::bench
