#pragma once

// Arnoldi approximation of exp(tau M) v for Kronecker-form M, using only the
// tensor-form action of M. Serves as the independent reference for the
// mode-product propagator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/tensor.hpp"

namespace kronmode {

struct KrylovOptions {
    double tol = 1e-10;
    std::size_t m_max = 50;
    /// Upper bound on the number of equal substeps tried (powers of two).
    std::size_t max_substeps = 4096;
};

template <Scalar T>
struct KrylovResult {
    Tensor<T> value;
    /// Accumulated estimate of ||y - exp(tau M) v|| / ||v||.
    double error_estimate = 0;
    std::size_t substeps = 0;
    std::size_t matvecs = 0;
};

/// Per-call Arnoldi state: orthonormal basis and upper-Hessenberg matrix.
template <Scalar T>
struct KrylovWorkspace {
    std::vector<Tensor<T>> basis;
    DenseMatrix<T> hess;
    std::size_t m_max = 0;
    double tol = 0;
};

namespace detail {

template <Scalar T>
void axpy(T alpha, const Tensor<T>& x, Tensor<T>& y) {
    T* py = y.data();
    const T* px = x.data();
    for (std::size_t i = 0; i < y.size(); ++i) py[i] += alpha * px[i];
}

// exp(tau H_m) e_1 for the leading m x m block of the Hessenberg matrix.
template <Scalar T>
std::vector<T> projected_exp(const DenseMatrix<T>& hess, std::size_t m, double tau) {
    DenseMatrix<T> h(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) h(i, j) = hess(i, j) * T(tau);
    const DenseMatrix<T> e = matexp(h);
    std::vector<T> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = e(i, 0);
    return c;
}

template <Scalar T>
double coefficient_diff(const std::vector<T>& a, const std::vector<T>& b) {
    double s = 0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const T x = i < a.size() ? a[i] : T{};
        const T y = i < b.size() ? b[i] : T{};
        s += static_cast<double>(abs2(x - y));
    }
    return std::sqrt(s);
}

template <Scalar T>
double coefficient_norm(const std::vector<T>& a) {
    double s = 0;
    for (const T& x : a) s += static_cast<double>(abs2(x));
    return std::sqrt(s);
}

struct SubstepOutcome {
    bool converged = false;
    double estimate = 0;  // absolute, in the norm of the substep input
};

// One Arnoldi projection for exp(tau M) w. Writes the approximation to `out`.
template <Scalar T>
SubstepOutcome arnoldi_substep(const KroneckerOp<T>& op, const Tensor<T>& w, double tau,
                               const KrylovOptions& opt, KrylovWorkspace<T>& ws,
                               std::size_t& matvecs, Tensor<T>& out) {
    using Real = real_t<T>;
    const double beta = static_cast<double>(norm_two(w));
    if (beta == 0) {
        out = w;
        return {true, 0};
    }
    const std::size_t m_max = opt.m_max;
    ws.basis.clear();
    ws.hess = DenseMatrix<T>(m_max + 1, m_max);
    ws.basis.push_back(w * T(Real(1 / beta)));

    std::vector<T> previous;  // coefficients at the previous even size
    std::vector<T> coeffs;
    double estimate = std::numeric_limits<double>::infinity();
    std::size_t m_used = 0;
    bool converged = false;

    for (std::size_t j = 0; j < m_max; ++j) {
        Tensor<T> z = matvec(op, ws.basis[j]);
        ++matvecs;
        const double znorm0 = static_cast<double>(norm_two(z));
        // Modified Gram-Schmidt plus one reorthogonalization pass.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i <= j; ++i) {
                const T hij = inner_product(ws.basis[i], z);
                ws.hess(i, j) += hij;
                axpy(T(-hij), ws.basis[i], z);
            }
        }
        const double hnext = static_cast<double>(norm_two(z));
        const std::size_t m = j + 1;
        const double scale = std::max(znorm0, static_cast<double>(one_norm(ws.hess)));
        const bool breakdown = hnext <= 1e-12 * std::max(scale, 1e-300);
        if (breakdown) {
            // Invariant subspace: the projection on it is exact.
            coeffs = projected_exp(ws.hess, m, tau);
            m_used = m;
            estimate = 0;
            converged = true;
            break;
        }
        ws.hess(m, j) = T(Real(hnext));
        if (m % 2 == 0 || m == m_max) {
            coeffs = projected_exp(ws.hess, m, tau);
            m_used = m;
            if (!previous.empty()) {
                const double diff = coefficient_diff(coeffs, previous);
                estimate = beta * diff;
                if (diff <= opt.tol * coefficient_norm(coeffs)) {
                    converged = true;
                    ws.basis.push_back(z * T(Real(1 / hnext)));
                    break;
                }
            }
            previous = coeffs;
        }
        ws.basis.push_back(z * T(Real(1 / hnext)));
    }

    out = Tensor<T>(w.shape());
    for (std::size_t i = 0; i < m_used; ++i) axpy(T(Real(beta)) * coeffs[i], ws.basis[i], out);
    return {converged, estimate};
}

}  // namespace detail

/// Approximates exp(tau M) v by Arnoldi projection y = ||v|| V_m exp(tau H_m) e_1.
/// The error estimate is the difference between approximations at consecutive
/// even subspace sizes; when it fails at m_max the interval is split into
/// twice as many equal substeps and the computation restarts.
template <Scalar T>
[[nodiscard]] KrylovResult<T> arnoldi_expmv_detailed(const KroneckerOp<T>& op, const Tensor<T>& v,
                                                     double tau, const KrylovOptions& opt = {}) {
    if (v.shape() != op.shape())
        throw shape_error("arnoldi_expmv: tensor shape " + v.shape().to_string() +
                          " vs operator shape " + op.shape().to_string());
    if (!(opt.tol >= 1e-14)) throw invalid_input("arnoldi_expmv: tol must be >= 1e-14");
    if (opt.m_max < 1) throw invalid_input("arnoldi_expmv: m_max must be >= 1");
    if (!std::isfinite(tau)) throw invalid_input("arnoldi_expmv: non-finite tau");

    KrylovResult<T> result{v, 0, 0, 0};
    if (tau == 0) return result;
    const double vnorm = static_cast<double>(norm_two(v));
    if (vnorm == 0) return result;

    KrylovWorkspace<T> ws;
    ws.m_max = opt.m_max;
    ws.tol = opt.tol;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t substeps = 1; substeps <= opt.max_substeps; substeps *= 2) {
        const double h = tau / static_cast<double>(substeps);
        Tensor<T> w = v;
        Tensor<T> next;
        double total_estimate = 0;
        bool ok = true;
        for (std::size_t s = 0; s < substeps; ++s) {
            const auto outcome = detail::arnoldi_substep(op, w, h, opt, ws, result.matvecs, next);
            total_estimate += outcome.estimate;
            if (!outcome.converged) {
                ok = false;
                break;
            }
            std::swap(w, next);
        }
        if (ok) {
            result.value = std::move(w);
            result.error_estimate = total_estimate / vnorm;
            result.substeps = substeps;
            return result;
        }
        best = std::min(best, total_estimate / vnorm);
    }
    throw no_convergence("arnoldi_expmv: tolerance not met within " +
                             std::to_string(opt.max_substeps) + " substeps",
                         best);
}

template <Scalar T>
[[nodiscard]] Tensor<T> arnoldi_expmv(const KroneckerOp<T>& op, const Tensor<T>& v, double tau,
                                      double tol = 1e-10, std::size_t m_max = 50) {
    KrylovOptions opt;
    opt.tol = tol;
    opt.m_max = m_max;
    return arnoldi_expmv_detailed(op, v, tau, opt).value;
}

}  // namespace kronmode
