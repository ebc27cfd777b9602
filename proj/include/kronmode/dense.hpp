#pragma once

// Small dense matrices: products, LU solve and the matrix exponential.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/errors.hpp"
#include "kronmode/scalar.hpp"

namespace kronmode {

/// Column-major dense matrix.
template <Scalar T>
class DenseMatrix {
public:
    using value_type = T;

    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw shape_error("DenseMatrix: data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }

    /// Row-wise literal, e.g. from_rows({{0, 1}, {1, 0}}).
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        DenseMatrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) throw shape_error("DenseMatrix::from_rows: ragged rows");
            std::size_t j = 0;
            for (const T& v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static DenseMatrix diagonal(std::span<const T> d) {
        DenseMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i + rows_ * j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i + rows_ * j]; }

    [[nodiscard]] T* data() noexcept { return data_.data(); }
    [[nodiscard]] const T* data() const noexcept { return data_.data(); }
    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }

    template <Scalar U>
    [[nodiscard]] DenseMatrix<U> cast() const {
        std::vector<U> out(data_.size());
        std::transform(data_.begin(), data_.end(), out.begin(),
                       [](T x) { return scalar_cast<U>(x); });
        return DenseMatrix<U>(rows_, cols_, std::move(out));
    }

    DenseMatrix& operator+=(const DenseMatrix& o) {
        check_same(o, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    DenseMatrix& operator-=(const DenseMatrix& o) {
        check_same(o, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    DenseMatrix& operator*=(T s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, T s) { return a *= s; }
    friend DenseMatrix operator*(T s, DenseMatrix a) { return a *= s; }
    friend DenseMatrix operator-(DenseMatrix a) { return a *= T{-1}; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    void check_same(const DenseMatrix& o, const char* where) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw shape_error(std::string("DenseMatrix::") + where + ": size mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <Scalar A, Scalar B>
[[nodiscard]] DenseMatrix<promote_t<A, B>> matmul(const DenseMatrix<A>& a, const DenseMatrix<B>& b) {
    using R = promote_t<A, B>;
    if (a.cols() != b.rows())
        throw shape_error("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + " differ");
    DenseMatrix<R> c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        R* cj = c.data() + j * c.rows();
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const R blj = scalar_cast<R>(b(l, j));
            const A* al = a.data() + l * a.rows();
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += scalar_cast<R>(al[i]) * blj;
        }
    }
    return c;
}

template <Scalar A, Scalar B>
[[nodiscard]] DenseMatrix<promote_t<A, B>> operator*(const DenseMatrix<A>& a, const DenseMatrix<B>& b) {
    return matmul(a, b);
}

template <Scalar T>
[[nodiscard]] DenseMatrix<T> transpose(const DenseMatrix<T>& a) {
    DenseMatrix<T> t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

/// Conjugate transpose.
template <Scalar T>
[[nodiscard]] DenseMatrix<T> adjoint(const DenseMatrix<T>& a) {
    DenseMatrix<T> t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = conj_if_complex(a(i, j));
    return t;
}

/// Kronecker product a ⊗ b.
template <Scalar T>
[[nodiscard]] DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    DenseMatrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t ia = 0; ia < a.rows(); ++ia) {
            const T s = a(ia, ja);
            for (std::size_t jb = 0; jb < b.cols(); ++jb)
                for (std::size_t ib = 0; ib < b.rows(); ++ib)
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = s * b(ib, jb);
        }
    return k;
}

/// Maximum absolute column sum.
template <Scalar T>
[[nodiscard]] real_t<T> one_norm(const DenseMatrix<T>& a) {
    real_t<T> best{0};
    for (std::size_t j = 0; j < a.cols(); ++j) {
        real_t<T> s{0};
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

template <Scalar T>
[[nodiscard]] real_t<T> max_abs(const DenseMatrix<T>& a) {
    real_t<T> best{0};
    for (const T& x : a.values()) best = std::max(best, real_t<T>(std::abs(x)));
    return best;
}

template <Scalar T>
[[nodiscard]] real_t<T> frobenius_norm(const DenseMatrix<T>& a) {
    real_t<T> s{0};
    for (const T& x : a.values()) s += abs2(x);
    return std::sqrt(s);
}

/// LU factorization with partial pivoting, kept for repeated solves.
template <Scalar T>
class LuDecomposition {
public:
    explicit LuDecomposition(DenseMatrix<T> a) : lu_(std::move(a)), piv_(lu_.rows()) {
        if (!lu_.is_square()) throw shape_error("LU: matrix is not square");
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            real_t<T> best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const real_t<T> v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == real_t<T>{0} || !std::isfinite(best))
                throw singular_matrix("LU: zero pivot in column " + std::to_string(k));
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[k], piv_[p]);
            }
            const T pivot = lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) lu_(i, k) /= pivot;
            for (std::size_t j = k + 1; j < n; ++j) {
                const T ukj = lu_(k, j);
                if (ukj == T{}) continue;
                for (std::size_t i = k + 1; i < n; ++i) lu_(i, j) -= lu_(i, k) * ukj;
            }
        }
    }

    [[nodiscard]] DenseMatrix<T> solve(const DenseMatrix<T>& b) const {
        const std::size_t n = lu_.rows();
        if (b.rows() != n)
            throw shape_error("solve: right-hand side has " + std::to_string(b.rows()) +
                              " rows, expected " + std::to_string(n));
        DenseMatrix<T> x(n, b.cols());
        for (std::size_t c = 0; c < b.cols(); ++c) {
            T* xc = x.data() + c * n;
            for (std::size_t i = 0; i < n; ++i) xc[i] = b(piv_[i], c);
            for (std::size_t k = 0; k < n; ++k) {
                const T v = xc[k];
                for (std::size_t i = k + 1; i < n; ++i) xc[i] -= lu_(i, k) * v;
            }
            for (std::size_t k = n; k-- > 0;) {
                xc[k] /= lu_(k, k);
                const T v = xc[k];
                for (std::size_t i = 0; i < k; ++i) xc[i] -= lu_(i, k) * v;
            }
        }
        return x;
    }

private:
    DenseMatrix<T> lu_;
    std::vector<std::size_t> piv_;
};

/// Solves A X = B by LU with partial pivoting. Throws singular_matrix on a
/// zero pivot.
template <Scalar T>
[[nodiscard]] DenseMatrix<T> solve(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (!a.is_square()) throw shape_error("solve: matrix is not square");
    return LuDecomposition<T>(a).solve(b);
}

namespace detail {

// Diagonal Padé coefficients b_0..b_m of the exponential.
inline constexpr std::array<double, 4> pade3{120., 60., 12., 1.};
inline constexpr std::array<double, 6> pade5{30240., 15120., 3360., 420., 30., 1.};
inline constexpr std::array<double, 8> pade7{17297280., 8648640., 1995840., 277200.,
                                             25200.,    1512.,    56.,      1.};
inline constexpr std::array<double, 10> pade9{17643225600., 8821612800., 2075673600., 302702400.,
                                              30270240.,    2162160.,    110880.,     3960.,
                                              90.,          1.};
inline constexpr std::array<double, 14> pade13{
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
    129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
    1323241920.,        40840800.,          960960.,           16380.,
    182.,               1.};

// One-norm bounds below which the degree-m approximant has backward error
// under the double unit roundoff.
inline constexpr std::array<double, 4> pade_theta{1.495585217958292e-2, 2.539398330063230e-1,
                                                  9.504178996162932e-1, 2.097847961257068e0};
inline constexpr double pade_theta13 = 5.371920351148152e0;

template <Scalar T, std::size_t K>
void pade_terms(const DenseMatrix<T>& a, const std::array<double, K>& b, DenseMatrix<T>& u,
                DenseMatrix<T>& v) {
    // Low-degree approximants: U = A * sum_odd, V = sum_even over powers of A^2.
    const std::size_t n = a.rows();
    const DenseMatrix<T> a2 = matmul(a, a);
    DenseMatrix<T> odd = DenseMatrix<T>::identity(n) * T(b[1]);
    DenseMatrix<T> even = DenseMatrix<T>::identity(n) * T(b[0]);
    DenseMatrix<T> power = a2;
    for (std::size_t k = 2; k + 1 < K; k += 2) {
        even += power * T(b[k]);
        odd += power * T(b[k + 1]);
        if (k + 3 < K) power = matmul(power, a2);
    }
    u = matmul(a, odd);
    v = std::move(even);
}

template <Scalar T>
void pade13_terms(const DenseMatrix<T>& a, DenseMatrix<T>& u, DenseMatrix<T>& v) {
    const auto& b = pade13;
    const std::size_t n = a.rows();
    const DenseMatrix<T> id = DenseMatrix<T>::identity(n);
    const DenseMatrix<T> a2 = matmul(a, a);
    const DenseMatrix<T> a4 = matmul(a2, a2);
    const DenseMatrix<T> a6 = matmul(a4, a2);
    DenseMatrix<T> inner_u = a6 * T(b[13]) + a4 * T(b[11]) + a2 * T(b[9]);
    DenseMatrix<T> outer_u = a6 * T(b[7]) + a4 * T(b[5]) + a2 * T(b[3]) + id * T(b[1]);
    u = matmul(a, matmul(a6, inner_u) + outer_u);
    DenseMatrix<T> inner_v = a6 * T(b[12]) + a4 * T(b[10]) + a2 * T(b[8]);
    v = matmul(a6, inner_v) + a6 * T(b[6]) + a4 * T(b[4]) + a2 * T(b[2]) + id * T(b[0]);
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of degree 3, 5, 7, 9 or 13 picked from the one-norm.
template <Scalar T>
[[nodiscard]] DenseMatrix<T> matexp(const DenseMatrix<T>& a) {
    if (!a.is_square()) throw shape_error("matexp: matrix is not square");
    for (const T& x : a.values())
        if (!is_finite(x)) throw invalid_input("matexp: non-finite entry");
    const std::size_t n = a.rows();
    if (n == 0) return a;

    const double norm = static_cast<double>(one_norm(a));
    DenseMatrix<T> u;
    DenseMatrix<T> v;
    int squarings = 0;
    if (norm <= detail::pade_theta[0]) {
        detail::pade_terms(a, detail::pade3, u, v);
    } else if (norm <= detail::pade_theta[1]) {
        detail::pade_terms(a, detail::pade5, u, v);
    } else if (norm <= detail::pade_theta[2]) {
        detail::pade_terms(a, detail::pade7, u, v);
    } else if (norm <= detail::pade_theta[3]) {
        detail::pade_terms(a, detail::pade9, u, v);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / detail::pade_theta13))));
        const DenseMatrix<T> scaled = a * T(std::ldexp(1.0, -squarings));
        detail::pade13_terms(scaled, u, v);
    }
    // r = (V - U)^{-1} (V + U)
    DenseMatrix<T> r = solve(v - u, v + u);
    for (int s = 0; s < squarings; ++s) r = matmul(r, r);
    return r;
}

}  // namespace kronmode
