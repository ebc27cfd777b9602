#pragma once

// Dense order-d tensors stored column-major, and mode products acting on
// them in place of their unfoldings.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/parallel.hpp"
#include "kronmode/scalar.hpp"

#if !defined(KRONMODE_ENABLE_OP_COUNTER) && !defined(NDEBUG)
#define KRONMODE_ENABLE_OP_COUNTER 1
#endif

namespace kronmode {

/// Extents (n_1, ..., n_d) of a tensor. Mode indices are 0-based.
class Shape {
public:
    Shape() = default;

    explicit Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) { validate(); }
    Shape(std::initializer_list<std::size_t> dims) : dims_(dims) { validate(); }

    [[nodiscard]] std::size_t ndim() const noexcept { return dims_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t mu) const { return dims_.at(mu); }
    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    /// Total number of entries N.
    [[nodiscard]] std::size_t size() const noexcept {
        std::size_t n = 1;
        for (auto d : dims_) n *= d;
        return dims_.empty() ? 0 : n;
    }

    /// Product of the extents of all modes before mu.
    [[nodiscard]] std::size_t stride(std::size_t mu) const {
        check_direction(mu);
        std::size_t s = 1;
        for (std::size_t nu = 0; nu < mu; ++nu) s *= dims_[nu];
        return s;
    }

    void check_direction(std::size_t mu) const {
        if (mu >= dims_.size())
            throw invalid_direction("direction " + std::to_string(mu) + " out of range for order-" +
                                    std::to_string(dims_.size()) + " tensor");
    }

    /// Column-major linear position of a multi-index.
    [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> idx) const {
        if (idx.size() != dims_.size()) throw shape_error("linear_index: wrong number of indices");
        std::size_t lin = 0;
        std::size_t stride = 1;
        for (std::size_t mu = 0; mu < dims_.size(); ++mu) {
            if (idx[mu] >= dims_[mu]) throw shape_error("linear_index: index out of range");
            lin += idx[mu] * stride;
            stride *= dims_[mu];
        }
        return lin;
    }

    /// Same shape with extent of mode mu replaced.
    [[nodiscard]] Shape with_extent(std::size_t mu, std::size_t extent) const {
        check_direction(mu);
        auto d = dims_;
        d[mu] = extent;
        return Shape(std::move(d));
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = "(";
        for (std::size_t mu = 0; mu < dims_.size(); ++mu) {
            if (mu) s += ",";
            s += std::to_string(dims_[mu]);
        }
        return s + ")";
    }

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    void validate() const {
        if (dims_.empty()) throw shape_error("Shape: order must be at least 1");
        std::size_t n = 1;
        for (auto d : dims_) {
            if (d == 0) throw shape_error("Shape: extents must be positive");
            if (n > std::numeric_limits<std::size_t>::max() / d)
                throw shape_error("Shape: total size overflows the index type");
            n *= d;
        }
    }

    std::vector<std::size_t> dims_;
};

/// Number of mode-mu fibers, N / n_mu.
[[nodiscard]] inline std::size_t mu_fiber_count(const Shape& shape, std::size_t mu) {
    shape.check_direction(mu);
    return shape.size() / shape[mu];
}

/// Dense tensor with column-major linearization
/// index(i_1, ..., i_d) = i_1 + n_1 i_2 + n_1 n_2 i_3 + ...
template <Scalar T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;

    explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_.size(), T{}) {}

    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_.size())
            throw shape_error("Tensor: data length " + std::to_string(data_.size()) +
                              " does not match shape " + shape_.to_string());
    }

    static Tensor filled(Shape shape, T value) {
        Tensor t(std::move(shape));
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::size_t ndim() const noexcept { return shape_.ndim(); }

    [[nodiscard]] T* data() noexcept { return data_.data(); }
    [[nodiscard]] const T* data() const noexcept { return data_.data(); }
    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T& at(std::initializer_list<std::size_t> idx) {
        return data_[shape_.linear_index(std::span(idx.begin(), idx.size()))];
    }
    const T& at(std::initializer_list<std::size_t> idx) const {
        return data_[shape_.linear_index(std::span(idx.begin(), idx.size()))];
    }
    T& at(std::span<const std::size_t> idx) { return data_[shape_.linear_index(idx)]; }
    const T& at(std::span<const std::size_t> idx) const { return data_[shape_.linear_index(idx)]; }

    template <Scalar U>
    [[nodiscard]] Tensor<U> cast() const {
        std::vector<U> out(data_.size());
        std::transform(data_.begin(), data_.end(), out.begin(),
                       [](T x) { return scalar_cast<U>(x); });
        return Tensor<U>(shape_, std::move(out));
    }

    Tensor& operator+=(const Tensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Tensor& operator*=(T s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, T s) { return a *= s; }
    friend Tensor operator*(T s, Tensor a) { return a *= s; }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    void check_same(const Tensor& o) const {
        if (shape_ != o.shape_)
            throw shape_error("Tensor: shape " + shape_.to_string() + " vs " + o.shape_.to_string());
    }

    Shape shape_;
    std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Operation counter

/// Multiply-add counter for mode products. Active when
/// KRONMODE_ENABLE_OP_COUNTER is nonzero (the default in debug builds).
struct op_counter {
    static std::atomic<std::uint64_t>& slot() {
        static std::atomic<std::uint64_t> count{0};
        return count;
    }
    static void reset() { slot().store(0); }
    [[nodiscard]] static std::uint64_t value() { return slot().load(); }
    static constexpr bool enabled() {
#if KRONMODE_ENABLE_OP_COUNTER
        return true;
#else
        return false;
#endif
    }
    static void add([[maybe_unused]] std::uint64_t n) {
#if KRONMODE_ENABLE_OP_COUNTER
        slot().fetch_add(n, std::memory_order_relaxed);
#endif
    }
};

// ---------------------------------------------------------------------------
// Mode products

namespace detail {

// Rows of the inner index handled per work item when stride > 1.
inline constexpr std::size_t mode_block = 512;

// out = in x_mu L for raw buffers. `inner` is the product of extents before mu,
// `batches` the product after. No permutation of the input is performed:
// for inner == 1 each batch is a matrix-vector product with L, otherwise each
// batch is the (inner x n) slice times L^T.
template <Scalar In, Scalar M, Scalar Out>
void mode_product_kernel(const In* in, const DenseMatrix<M>& L, std::size_t inner,
                         std::size_t batches, Out* out) {
    const std::size_t m = L.rows();
    const std::size_t n = L.cols();
    const M* l = L.data();
    if (inner == 1) {
        parallel_for(batches, [&](std::size_t b) {
            const In* x = in + b * n;
            Out* y = out + b * m;
            std::fill(y, y + m, Out{});
            for (std::size_t j = 0; j < n; ++j) {
                const Out xj = scalar_cast<Out>(x[j]);
                const M* lj = l + j * m;
                for (std::size_t i = 0; i < m; ++i) y[i] += scalar_cast<Out>(lj[i]) * xj;
            }
        });
    } else {
        const std::size_t blocks = (inner + mode_block - 1) / mode_block;
        parallel_for(batches * blocks, [&](std::size_t item) {
            const std::size_t b = item / blocks;
            const std::size_t r0 = (item % blocks) * mode_block;
            const std::size_t r1 = std::min(inner, r0 + mode_block);
            const In* x = in + b * inner * n;
            Out* y = out + b * inner * m;
            for (std::size_t i = 0; i < m; ++i) {
                Out* yi = y + i * inner;
                std::fill(yi + r0, yi + r1, Out{});
                for (std::size_t j = 0; j < n; ++j) {
                    const Out lij = scalar_cast<Out>(l[i + j * m]);
                    const In* xj = x + j * inner;
                    for (std::size_t r = r0; r < r1; ++r) yi[r] += lij * scalar_cast<Out>(xj[r]);
                }
            }
        });
    }
    op_counter::add(static_cast<std::uint64_t>(m) * n * inner * batches);
}

}  // namespace detail

/// Mode-mu product S = U x_mu L: applies L (m x n_mu) to every mode-mu fiber,
/// S(i_1,..,i,..,i_d) = sum_j L(i,j) U(i_1,..,j,..,i_d).
template <Scalar T, Scalar M>
[[nodiscard]] Tensor<promote_t<T, M>> mu_mode_product(const Tensor<T>& u, const DenseMatrix<M>& L,
                                                      std::size_t mu) {
    using R = promote_t<T, M>;
    const Shape& s = u.shape();
    s.check_direction(mu);
    if (L.cols() != s[mu])
        throw shape_error("mu_mode_product: matrix has " + std::to_string(L.cols()) +
                          " columns, mode " + std::to_string(mu) + " has extent " +
                          std::to_string(s[mu]));
    if (L.rows() == 0) throw shape_error("mu_mode_product: matrix has no rows");
    const std::size_t inner = s.stride(mu);
    const std::size_t batches = s.size() / (inner * s[mu]);
    Tensor<R> out(s.with_extent(mu, L.rows()));
    detail::mode_product_kernel(u.data(), L, inner, batches, out.data());
    return out;
}

/// Tucker operator U x_1 L_1 x_2 ... x_d L_d, skipping absent slots.
/// Slots are applied in ascending mode order through two ping-pong buffers.
template <Scalar T, Scalar M>
[[nodiscard]] Tensor<promote_t<T, M>> tucker(const Tensor<T>& u,
                                             std::span<const std::optional<DenseMatrix<M>>> mats) {
    using R = promote_t<T, M>;
    const Shape& s = u.shape();
    if (mats.size() != s.ndim())
        throw shape_error("tucker: " + std::to_string(mats.size()) + " slots for an order-" +
                          std::to_string(s.ndim()) + " tensor");
    for (std::size_t mu = 0; mu < mats.size(); ++mu) {
        if (mats[mu] && mats[mu]->cols() != s[mu])
            throw shape_error("tucker: matrix for direction " + std::to_string(mu) + " has " +
                              std::to_string(mats[mu]->cols()) + " columns, expected " +
                              std::to_string(s[mu]));
        if (mats[mu] && mats[mu]->rows() == 0)
            throw shape_error("tucker: matrix for direction " + std::to_string(mu) + " is empty");
    }

    std::vector<R> a;
    std::vector<R> b;
    std::vector<std::size_t> dims = s.dims();
    bool first = true;
    for (std::size_t mu = 0; mu < mats.size(); ++mu) {
        if (!mats[mu]) continue;
        const auto& L = *mats[mu];
        std::size_t inner = 1;
        for (std::size_t nu = 0; nu < mu; ++nu) inner *= dims[nu];
        std::size_t batches = 1;
        for (std::size_t nu = mu + 1; nu < dims.size(); ++nu) batches *= dims[nu];
        b.resize(inner * L.rows() * batches);
        if (first) {
            detail::mode_product_kernel(u.data(), L, inner, batches, b.data());
            first = false;
        } else {
            detail::mode_product_kernel(a.data(), L, inner, batches, b.data());
        }
        dims[mu] = L.rows();
        std::swap(a, b);
    }
    if (first) return u.template cast<R>();
    return Tensor<R>(Shape(std::move(dims)), std::move(a));
}

template <Scalar T, Scalar M>
[[nodiscard]] Tensor<promote_t<T, M>> tucker(const Tensor<T>& u,
                                             const std::vector<std::optional<DenseMatrix<M>>>& mats) {
    return tucker(u, std::span<const std::optional<DenseMatrix<M>>>(mats));
}

/// Tucker operator with every slot present.
template <Scalar T, Scalar M>
[[nodiscard]] Tensor<promote_t<T, M>> tucker(const Tensor<T>& u, std::span<const DenseMatrix<M>> mats) {
    std::vector<std::optional<DenseMatrix<M>>> slots(mats.begin(), mats.end());
    return tucker(u, std::span<const std::optional<DenseMatrix<M>>>(slots));
}

// ---------------------------------------------------------------------------
// Norms

enum class NormKind { max, two, weighted_two };

[[nodiscard]] inline const char* to_string(NormKind k) {
    switch (k) {
        case NormKind::max: return "max";
        case NormKind::two: return "two";
        case NormKind::weighted_two: return "weighted_two";
    }
    return "?";
}

/// Largest absolute entry.
template <Scalar T>
[[nodiscard]] real_t<T> norm_max(const Tensor<T>& u) {
    real_t<T> m{0};
    for (const T& x : u.values()) m = std::max(m, real_t<T>(std::abs(x)));
    return m;
}

/// Euclidean norm of the data, accumulated in double.
template <Scalar T>
[[nodiscard]] real_t<T> norm_two(const Tensor<T>& u) {
    double s = 0;
    for (const T& x : u.values()) s += static_cast<double>(abs2(x));
    return static_cast<real_t<T>>(std::sqrt(s));
}

/// sqrt(sum_i w(i) |U(i)|^2) with w(i) = prod_mu weights[mu][i_mu].
template <Scalar T>
[[nodiscard]] real_t<T> norm_weighted_two(const Tensor<T>& u,
                                          std::span<const std::vector<double>> weights) {
    const Shape& s = u.shape();
    if (weights.size() != s.ndim())
        throw shape_error("weighted norm: expected " + std::to_string(s.ndim()) + " weight vectors");
    for (std::size_t mu = 0; mu < s.ndim(); ++mu)
        if (weights[mu].size() != s[mu])
            throw shape_error("weighted norm: weight length for direction " + std::to_string(mu) +
                              " is " + std::to_string(weights[mu].size()) + ", expected " +
                              std::to_string(s[mu]));
    std::vector<std::size_t> idx(s.ndim(), 0);
    double total = 0;
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        double w = 1;
        for (std::size_t mu = 0; mu < s.ndim(); ++mu) w *= weights[mu][idx[mu]];
        total += w * static_cast<double>(abs2(u[lin]));
        for (std::size_t mu = 0; mu < s.ndim(); ++mu) {
            if (++idx[mu] < s[mu]) break;
            idx[mu] = 0;
        }
    }
    return static_cast<real_t<T>>(std::sqrt(total));
}

/// Norm selector; weights are used only by NormKind::weighted_two.
struct NormSpec {
    NormKind kind = NormKind::max;
    std::vector<std::vector<double>> weights;
};

template <Scalar T>
[[nodiscard]] real_t<T> norm(const Tensor<T>& u, const NormSpec& spec) {
    switch (spec.kind) {
        case NormKind::max: return norm_max(u);
        case NormKind::two: return norm_two(u);
        case NormKind::weighted_two: return norm_weighted_two(u, std::span(spec.weights));
    }
    return {};
}

template <Scalar T>
[[nodiscard]] real_t<T> norm(const Tensor<T>& u, NormKind kind) {
    return norm(u, NormSpec{kind, {}});
}

/// Euclidean inner product <a, b> = sum conj(a_i) b_i.
template <Scalar T>
[[nodiscard]] T inner_product(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) throw shape_error("inner_product: shape mismatch");
    T s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += conj_if_complex(a[i]) * b[i];
    return s;
}

}  // namespace kronmode
