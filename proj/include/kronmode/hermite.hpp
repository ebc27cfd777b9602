#pragma once

// Hermite functions, Gauss-Hermite quadrature and the spectral transforms
// between nodal values and Hermite coefficients, written as Tucker operators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/tensor.hpp"

namespace kronmode::hermite {

/// phi_0(x)..phi_{k-1}(x), the L2-orthonormal Hermite functions
/// H_i(x) exp(-x^2/2), by the three-term recurrence on the weighted functions.
[[nodiscard]] inline std::vector<double> hermite_eval(std::size_t k, double x) {
    std::vector<double> phi(k);
    if (k == 0) return phi;
    phi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (k > 1) phi[1] = std::sqrt(2.0) * x * phi[0];
    for (std::size_t j = 1; j + 1 < k; ++j) {
        const double jj = static_cast<double>(j);
        phi[j + 1] = std::sqrt(2.0 / (jj + 1.0)) * x * phi[j] - std::sqrt(jj / (jj + 1.0)) * phi[j - 1];
    }
    return phi;
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (off[i] couples i and i+1), by implicit QL
/// iterations with Wilkinson-type shifts.
[[nodiscard]] inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                                                 std::vector<double> off) {
    const long n = static_cast<long>(diag.size());
    if (off.size() + 1 != diag.size() && !(n == 0 && off.empty()))
        throw shape_error("tridiagonal_eigenvalues: off-diagonal must have n-1 entries");
    std::vector<double>& d = diag;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(off.begin(), off.end(), e.begin());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (long l = 0; l < n; ++l) {
        int iter = 0;
        long m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw no_convergence("tridiagonal_eigenvalues: QL did not converge", 0);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                long i;
                for (i = m - 1; i >= l; --i) {
                    const double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

/// Gauss-Hermite nodes and modified weights (Gauss weights times e^{x^2}).
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr std::size_t max_quadrature_size = 500;

/// Nodes are the eigenvalues of the Jacobi matrix (off-diagonals sqrt(i/2)),
/// polished by Newton steps on phi_k and symmetrized. The modified weights
/// w_l = 1 / sum_{j<k} phi_j(X_l)^2 make phi_0..phi_{k-1} discretely
/// orthonormal without ever forming e^{x^2}.
[[nodiscard]] inline Quadrature gauss_hermite(std::size_t k) {
    if (k < 1 || k > max_quadrature_size)
        throw config_error("gauss_hermite: k must lie in [1, " + std::to_string(max_quadrature_size) +
                           "], got " + std::to_string(k));
    std::vector<double> diag(k, 0.0);
    std::vector<double> off(k - 1);
    for (std::size_t i = 1; i < k; ++i) off[i - 1] = std::sqrt(static_cast<double>(i) / 2.0);
    auto x = tridiagonal_eigenvalues(std::move(diag), std::move(off));

    const double kk = static_cast<double>(k);
    for (double& xi : x) {
        for (int it = 0; it < 3; ++it) {
            const auto phi = hermite_eval(k + 1, xi);
            const double deriv = std::sqrt(2.0 * kk) * phi[k - 1] - xi * phi[k];
            if (deriv == 0.0) break;
            const double dx = phi[k] / deriv;
            xi -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
        }
    }
    std::sort(x.begin(), x.end());
    for (std::size_t l = 0; l < k / 2; ++l) {
        const double a = 0.5 * (x[k - 1 - l] - x[l]);
        x[l] = -a;
        x[k - 1 - l] = a;
    }
    if (k % 2 == 1) x[k / 2] = 0.0;

    std::vector<double> w(k);
    for (std::size_t l = 0; l < k; ++l) {
        const auto phi = hermite_eval(k, x[l]);
        double s = 0;
        for (double v : phi) s += v * v;
        w[l] = 1.0 / s;
    }
    return {std::move(x), std::move(w)};
}

/// Hermite basis of one direction: k functions, k Gauss-Hermite nodes and the
/// transform matrices Phi(i, l) = conj(phi_i)(X_l), Psi(p, i) = phi_i(X_p).
/// The functions are real, so Psi = Phi^T.
class HermiteBasis {
public:
    explicit HermiteBasis(std::size_t k) : k_(k), quad_(gauss_hermite(k)), phi_(k, k) {
        for (std::size_t l = 0; l < k; ++l) {
            const auto v = hermite_eval(k, quad_.nodes[l]);
            for (std::size_t i = 0; i < k; ++i) phi_(i, l) = v[i];
        }
        psi_ = transpose(phi_);
    }

    [[nodiscard]] std::size_t size() const noexcept { return k_; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return quad_.nodes; }
    [[nodiscard]] const std::vector<double>& mod_weights() const noexcept { return quad_.weights; }
    [[nodiscard]] const DenseMatrix<double>& phi() const noexcept { return phi_; }
    [[nodiscard]] const DenseMatrix<double>& psi() const noexcept { return psi_; }

    /// Psi matrix for arbitrary evaluation points: (p, i) -> phi_i(y_p).
    [[nodiscard]] DenseMatrix<double> psi_at(std::span<const double> y) const {
        DenseMatrix<double> m(y.size(), k_);
        for (std::size_t p = 0; p < y.size(); ++p) {
            const auto v = hermite_eval(k_, y[p]);
            for (std::size_t i = 0; i < k_; ++i) m(p, i) = v[i];
        }
        return m;
    }

private:
    std::size_t k_;
    Quadrature quad_;
    DenseMatrix<double> phi_;
    DenseMatrix<double> psi_;
};

/// Hermite coefficients f_i of a function on a tensor-product basis.
template <Scalar T>
struct SpectralField {
    Tensor<T> coeffs;
};

namespace detail {

inline void check_bases(std::span<const HermiteBasis> bases, const Shape& shape, const char* where) {
    if (bases.size() != shape.ndim())
        throw shape_error(std::string(where) + ": " + std::to_string(bases.size()) +
                          " bases for an order-" + std::to_string(shape.ndim()) + " tensor");
    for (std::size_t mu = 0; mu < bases.size(); ++mu)
        if (bases[mu].size() != shape[mu])
            throw shape_error(std::string(where) + ": direction " + std::to_string(mu) + " has extent " +
                              std::to_string(shape[mu]) + ", basis size " +
                              std::to_string(bases[mu].size()));
}

}  // namespace detail

/// Values on the node grid -> coefficients: (F .* w) x_1 Phi_1 ... x_d Phi_d.
template <Scalar T>
[[nodiscard]] SpectralField<T> forward_transform(std::span<const HermiteBasis> bases,
                                                 const Tensor<T>& values) {
    using Real = real_t<T>;
    const Shape& s = values.shape();
    detail::check_bases(bases, s, "forward_transform");
    Tensor<T> weighted = values;
    std::vector<std::size_t> idx(s.ndim(), 0);
    for (std::size_t lin = 0; lin < weighted.size(); ++lin) {
        double w = 1;
        for (std::size_t mu = 0; mu < s.ndim(); ++mu) w *= bases[mu].mod_weights()[idx[mu]];
        weighted[lin] *= T(static_cast<Real>(w));
        for (std::size_t mu = 0; mu < s.ndim(); ++mu) {
            if (++idx[mu] < s[mu]) break;
            idx[mu] = 0;
        }
    }
    std::vector<DenseMatrix<Real>> mats;
    for (const auto& b : bases) mats.push_back(b.phi().template cast<Real>());
    return {tucker(weighted, std::span<const DenseMatrix<Real>>(mats))};
}

/// Coefficients -> values: F x_1 Psi_1 ... x_d Psi_d. Without evaluation
/// points the values are taken at the quadrature nodes (Psi = Phi^T); an
/// empty vector for a direction also selects its nodes.
template <Scalar T>
[[nodiscard]] Tensor<T> inverse_transform(std::span<const HermiteBasis> bases, const SpectralField<T>& field,
                                          std::span<const std::vector<double>> eval_points = {}) {
    using Real = real_t<T>;
    detail::check_bases(bases, field.coeffs.shape(), "inverse_transform");
    if (!eval_points.empty() && eval_points.size() != bases.size())
        throw shape_error("inverse_transform: evaluation points needed for every direction");
    std::vector<DenseMatrix<Real>> mats;
    for (std::size_t mu = 0; mu < bases.size(); ++mu) {
        if (eval_points.empty() || eval_points[mu].empty())
            mats.push_back(bases[mu].psi().template cast<Real>());
        else
            mats.push_back(bases[mu].psi_at(eval_points[mu]).template cast<Real>());
    }
    return tucker(field.coeffs, std::span<const DenseMatrix<Real>>(mats));
}

/// lambda_i = sum_mu (i_mu + 1/2) on the coefficient grid.
[[nodiscard]] inline Tensor<double> harmonic_eigenvalues(std::span<const std::size_t> k) {
    Shape shape(std::vector<std::size_t>(k.begin(), k.end()));
    Tensor<double> lambda(shape);
    std::vector<std::size_t> idx(k.size(), 0);
    for (std::size_t lin = 0; lin < lambda.size(); ++lin) {
        double v = 0;
        for (auto i : idx) v += static_cast<double>(i) + 0.5;
        lambda[lin] = v;
        for (std::size_t mu = 0; mu < k.size(); ++mu) {
            if (++idx[mu] < k[mu]) break;
            idx[mu] = 0;
        }
    }
    return lambda;
}

using Potential = std::function<double(double)>;

/// Galerkin matrix P(i, j) = sum_l phi_i(X_l) V(X_l) phi_j(X_l) w_l of size k,
/// using a quad_size-point Gauss-Hermite rule (quad_size = k is the
/// pseudospectral choice; a larger rule is an oracle for testing).
[[nodiscard]] inline DenseMatrix<double> galerkin_matrix(std::size_t k, const Potential& v,
                                                         std::size_t quad_size) {
    const auto q = gauss_hermite(quad_size);
    DenseMatrix<double> p(k, k);
    for (std::size_t l = 0; l < quad_size; ++l) {
        const double x = q.nodes[l];
        const double vx = v(x);
        if (!std::isfinite(vx))
            throw invalid_potential("potential is not finite at node " + std::to_string(x));
        const auto phi = hermite_eval(k, x);
        const double wv = vx * q.weights[l];
        for (std::size_t j = 0; j < k; ++j) {
            const double pj = phi[j] * wv;
            for (std::size_t i = 0; i < k; ++i) p(i, j) += phi[i] * pj;
        }
    }
    // Symmetric by construction up to summation order; make it exact.
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = j + 1; i < k; ++i) {
            const double a = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = a;
            p(j, i) = a;
        }
    return p;
}

/// Pseudospectral potential matrix on the basis' own nodes.
[[nodiscard]] inline DenseMatrix<double> potential_operator(const HermiteBasis& basis, const Potential& v) {
    return galerkin_matrix(basis.size(), v, basis.size());
}

/// Matrix of multiplication by x; tridiagonal with X(i, i+1) = sqrt((i+1)/2).
[[nodiscard]] inline DenseMatrix<double> position_operator(const HermiteBasis& basis) {
    if (basis.size() < 2) throw config_error("position_operator: need k >= 2");
    return potential_operator(basis, [](double x) { return x; });
}

/// Direction factor of psi' = -i H psi in coefficient space for
/// H = -1/2 d^2/dx^2 + V: -i [diag(i + 1/2) + P(V - x^2/2)].
[[nodiscard]] inline DenseMatrix<std::complex<double>> hamiltonian_factor(const HermiteBasis& basis,
                                                                          const Potential& v) {
    const std::size_t k = basis.size();
    const auto p = potential_operator(basis, [&](double x) { return v(x) - 0.5 * x * x; });
    const std::complex<double> mi(0.0, -1.0);
    DenseMatrix<std::complex<double>> a(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) {
            const double diag = i == j ? static_cast<double>(i) + 0.5 : 0.0;
            a(i, j) = mi * (diag + p(i, j));
        }
    return a;
}

}  // namespace kronmode::hermite
