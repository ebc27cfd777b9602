#pragma once

// Shared helpers for the test suite: random operands and Eigen oracles.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "kronmode/kronmode.hpp"

namespace testing_support {

using kronmode::DenseMatrix;
using kronmode::Shape;
using kronmode::Tensor;
using cplx = std::complex<double>;

template <typename T>
using EMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using EVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240917);
    return g;
}

template <typename T>
T random_scalar(double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    if constexpr (kronmode::is_complex_v<T>) {
        const double re = d(rng());
        return T(re, d(rng()));
    } else {
        return static_cast<T>(d(rng()));
    }
}

template <typename T>
DenseMatrix<T> random_matrix(std::size_t m, std::size_t n, double scale = 1.0) {
    DenseMatrix<T> a(m, n);
    for (auto& v : a.values()) v = random_scalar<T>(scale);
    return a;
}

template <typename T>
Tensor<T> random_tensor(const Shape& s) {
    Tensor<T> t{s};
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = random_scalar<T>();
    return t;
}

template <typename T>
EMatrix<T> to_eigen(const DenseMatrix<T>& a) {
    EMatrix<T> e(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) e(i, j) = a(i, j);
    return e;
}

template <typename T>
EVector<T> to_eigen(const Tensor<T>& u) {
    EVector<T> v(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) v(j) = u[j];
    return v;
}

template <typename T>
Tensor<T> from_eigen(const EVector<T>& v, const Shape& s) {
    Tensor<T> u{s};
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = v(j);
    return u;
}

/// Dense Kronecker product via Eigen, independent of kronmode::kron.
template <typename T>
EMatrix<T> eigen_kron(const EMatrix<T>& a, const EMatrix<T>& b) {
    EMatrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

/// A_d (+) ... (+) A_1 assembled with Eigen, matching column-major vec.
template <typename T>
EMatrix<T> eigen_kron_sum(const std::vector<DenseMatrix<T>>& factors) {
    EMatrix<T> m = EMatrix<T>::Zero(1, 1);
    EMatrix<T> ident_left = EMatrix<T>::Identity(1, 1);  // identity over modes already added
    for (const auto& f : factors) {
        const auto a = to_eigen(f);
        const auto in = EMatrix<T>::Identity(a.rows(), a.rows());
        m = eigen_kron<T>(in, m) + eigen_kron<T>(a, ident_left);
        ident_left = eigen_kron<T>(in, ident_left);
    }
    return m;
}

template <typename T>
double rel_two(const Tensor<T>& a, const Tensor<T>& b) {
    return static_cast<double>(kronmode::norm_two(a - b)) / static_cast<double>(kronmode::norm_two(b));
}

}  // namespace testing_support
