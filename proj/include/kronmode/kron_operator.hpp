#pragma once

// Kronecker-sum generators M = A_d ⊕ ... ⊕ A_1 and their exact propagator
// exp(tau M) applied as a sequence of mode products.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/tensor.hpp"

namespace kronmode {

/// Ordered one-dimensional generators A_1..A_d; factor mu acts on mode mu.
template <Scalar T>
class KroneckerOp {
public:
    using value_type = T;

    KroneckerOp() = default;

    explicit KroneckerOp(std::vector<DenseMatrix<T>> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) throw shape_error("KroneckerOp: needs at least one factor");
        std::vector<std::size_t> dims;
        dims.reserve(factors_.size());
        for (std::size_t mu = 0; mu < factors_.size(); ++mu) {
            if (!factors_[mu].is_square() || factors_[mu].rows() == 0)
                throw shape_error("KroneckerOp: factor " + std::to_string(mu) + " is not square");
            dims.push_back(factors_[mu].rows());
        }
        shape_ = Shape(std::move(dims));
    }

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t ndim() const noexcept { return factors_.size(); }
    [[nodiscard]] const DenseMatrix<T>& factor(std::size_t mu) const { return factors_.at(mu); }
    [[nodiscard]] const std::vector<DenseMatrix<T>>& factors() const noexcept { return factors_; }

    template <Scalar U>
    [[nodiscard]] KroneckerOp<U> cast() const {
        std::vector<DenseMatrix<U>> f;
        f.reserve(factors_.size());
        for (const auto& a : factors_) f.push_back(a.template cast<U>());
        return KroneckerOp<U>(std::move(f));
    }

    friend bool operator==(const KroneckerOp&, const KroneckerOp&) = default;

private:
    std::vector<DenseMatrix<T>> factors_;
    Shape shape_;
};

/// Size cap for assemble_full.
inline constexpr std::size_t default_oracle_limit = 4096;

/// Dense N x N matrix sum_mu I ⊗ .. ⊗ A_mu ⊗ .. ⊗ I in the column-major vec
/// convention, so that M vec(U) = vec(matvec(op, U)). Test oracle only.
template <Scalar T>
[[nodiscard]] DenseMatrix<T> assemble_full(const KroneckerOp<T>& op,
                                           std::size_t limit = default_oracle_limit) {
    const Shape& s = op.shape();
    const std::size_t n = s.size();
    if (n > limit)
        throw oracle_size_error("assemble_full: N = " + std::to_string(n) + " exceeds limit " +
                                std::to_string(limit));
    DenseMatrix<T> full(n, n);
    for (std::size_t mu = 0; mu < s.ndim(); ++mu) {
        const std::size_t inner = s.stride(mu);
        const std::size_t nmu = s[mu];
        const std::size_t outer = n / (inner * nmu);
        const auto& a = op.factor(mu);
        for (std::size_t b = 0; b < outer; ++b)
            for (std::size_t r = 0; r < inner; ++r)
                for (std::size_t j = 0; j < nmu; ++j)
                    for (std::size_t i = 0; i < nmu; ++i)
                        full(r + inner * (i + nmu * b), r + inner * (j + nmu * b)) += a(i, j);
    }
    return full;
}

/// Action of the generator: sum_mu U x_mu A_mu.
template <Scalar T, Scalar U>
[[nodiscard]] Tensor<promote_t<T, U>> matvec(const KroneckerOp<T>& op, const Tensor<U>& u) {
    using R = promote_t<T, U>;
    if (u.shape() != op.shape())
        throw shape_error("matvec: tensor shape " + u.shape().to_string() + " vs operator shape " +
                          op.shape().to_string());
    Tensor<R> acc(u.shape());
    for (std::size_t mu = 0; mu < op.ndim(); ++mu) acc += mu_mode_product(u, op.factor(mu), mu);
    return acc;
}

/// Precomputed one-dimensional exponentials exp(tau A_mu). Immutable once
/// built; rebuild whenever tau or a factor changes.
template <Scalar T>
class PropagatorCache {
public:
    PropagatorCache(double tau, std::vector<DenseMatrix<T>> exps, std::vector<DenseMatrix<T>> source)
        : tau_(tau), exps_(std::move(exps)), source_(std::move(source)) {
        std::vector<std::size_t> dims;
        for (const auto& e : exps_) dims.push_back(e.rows());
        shape_ = Shape(std::move(dims));
    }

    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] const std::vector<DenseMatrix<T>>& exponentials() const noexcept { return exps_; }
    [[nodiscard]] const DenseMatrix<T>& exponential(std::size_t mu) const { return exps_.at(mu); }

    /// True if this cache was prepared from exactly these factors and step.
    [[nodiscard]] bool is_valid_for(const KroneckerOp<T>& op, double tau) const {
        return tau == tau_ && op.factors() == source_;
    }

    /// Same exponentials rounded to another scalar type (e.g. computed in
    /// double, applied in single precision).
    template <Scalar U>
    [[nodiscard]] PropagatorCache<U> cast() const {
        std::vector<DenseMatrix<U>> e;
        std::vector<DenseMatrix<U>> s;
        for (const auto& m : exps_) e.push_back(m.template cast<U>());
        for (const auto& m : source_) s.push_back(m.template cast<U>());
        return PropagatorCache<U>(tau_, std::move(e), std::move(s));
    }

private:
    double tau_;
    std::vector<DenseMatrix<T>> exps_;
    std::vector<DenseMatrix<T>> source_;
    Shape shape_;
};

/// Computes exp(tau A_mu) for every direction.
template <Scalar T>
[[nodiscard]] PropagatorCache<T> prepare(const KroneckerOp<T>& op, double tau) {
    if (!std::isfinite(tau)) throw invalid_input("prepare: non-finite time step");
    std::vector<DenseMatrix<T>> exps;
    exps.reserve(op.ndim());
    for (const auto& a : op.factors()) exps.push_back(matexp(a * T(tau)));
    return PropagatorCache<T>(tau, std::move(exps), op.factors());
}

/// Advances U by one step: U x_1 exp(tau A_1) x_2 ... x_d exp(tau A_d),
/// directions in ascending order. Exact for constant Kronecker-form generators.
/// Performs sum_mu N n_mu multiply-adds.
template <Scalar T, Scalar U>
[[nodiscard]] Tensor<promote_t<T, U>> step(const PropagatorCache<T>& cache, const Tensor<U>& u) {
    if (u.shape() != cache.shape())
        throw shape_error("step: tensor shape " + u.shape().to_string() + " vs propagator shape " +
                          cache.shape().to_string());
    return tucker(u, std::span<const DenseMatrix<T>>(cache.exponentials()));
}

}  // namespace kronmode
