#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "support.hpp"

using namespace kronmode;
using namespace testing_support;

namespace {

Tensor<double> heat_initial(std::size_t n) {
    const auto g = fd::Grid1D::uniform_periodic(0.0, 2.0 * std::numbers::pi, n);
    const std::vector<std::vector<double>> coords(3, g.points());
    auto u = problems::sample_on_grid<double>(std::span(coords), [](std::span<const double> x) {
        return std::cos(x[0]) + std::sin(2.0 * x[1]) * std::cos(x[2]) + 0.3;
    });
    return u;
}

}  // namespace

TEST(Krylov, ZeroTimeReturnsInput) {
    const KroneckerOp<double> op({random_matrix<double>(4, 4), random_matrix<double>(3, 3)});
    const auto v = random_tensor<double>(op.shape());
    EXPECT_EQ(arnoldi_expmv(op, v, 0.0), v);
}

TEST(Krylov, DiagonalOperator) {
    const std::vector<double> a{-3.0, -1.0, 0.0, 0.5, -7.0};
    const std::vector<double> b{-2.0, 1.0, -0.25};
    const KroneckerOp<double> op({DenseMatrix<double>::diagonal(a), DenseMatrix<double>::diagonal(b)});
    const auto v = random_tensor<double>(op.shape());
    const double tau = 0.6;
    const double tol = 1e-10;
    const auto y = arnoldi_expmv(op, v, tau, tol);
    Tensor<double> ref(op.shape());
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 5; ++i) ref.at({i, j}) = std::exp(tau * (a[i] + b[j])) * v.at({i, j});
    EXPECT_LE(norm_two(y - ref), tol * norm_two(ref));
}

TEST(Krylov, HappyBreakdownIsExact) {
    // nilpotent shift: the Krylov space of e_0 closes after three vectors
    DenseMatrix<double> shift(3, 3);
    shift(1, 0) = 1.0;
    shift(2, 1) = 1.0;
    const KroneckerOp<double> op({shift});
    Tensor<double> v(Shape{3});
    v[0] = 1.0;
    const auto r = arnoldi_expmv_detailed(op, v, 2.0);
    EXPECT_LE(r.matvecs, 3u);
    EXPECT_EQ(r.substeps, 1u);
    EXPECT_EQ(r.error_estimate, 0.0);
    EXPECT_NEAR(r.value[0], 1.0, 1e-15);
    EXPECT_NEAR(r.value[1], 2.0, 1e-14);
    EXPECT_NEAR(r.value[2], 2.0, 1e-14);
}

TEST(Krylov, HappyBreakdownOnLowRankStart) {
    // v lies in a two-dimensional invariant subspace of a 2D operator
    const auto a = DenseMatrix<double>::from_rows({{-1, 2, 0}, {-2, -1, 0}, {0, 0, -5}});
    const KroneckerOp<double> op({a});
    const Tensor<double> v(Shape{3}, {1.0, 0.5, 0.0});
    const auto r = arnoldi_expmv_detailed(op, v, 1.5);
    EXPECT_LE(r.matvecs, 3u);
    const auto ref = step(prepare(op, 1.5), v);
    EXPECT_LE(rel_two(r.value, ref), 1e-14);
}

TEST(Krylov, HeatOperatorMatchesModeProduct) {
    const auto op = fd::heat_factors(8, 2);
    const auto v = heat_initial(8);
    const auto y = arnoldi_expmv(op, v, 0.1, 1e-10);
    EXPECT_LE(rel_two(y, step(prepare(op, 0.1), v)), 1e-8);
}

TEST(Krylov, ComplexSkewHermitian) {
    std::vector<DenseMatrix<cplx>> f;
    for (int mu = 0; mu < 2; ++mu) {
        const auto b = random_matrix<cplx>(6, 6);
        f.push_back(b - adjoint(b));
    }
    const KroneckerOp<cplx> op(f);
    const auto v = random_tensor<cplx>(op.shape());
    EXPECT_LE(rel_two(arnoldi_expmv(op, v, 1.0, 1e-11), step(prepare(op, 1.0), v)), 1e-9);
}

TEST(Krylov, SubstepsWhenSubspaceTooSmall) {
    const auto op = fd::heat_factors(16, 2);
    const auto v = random_tensor<double>(op.shape());
    KrylovOptions opt;
    opt.m_max = 6;
    const auto r = arnoldi_expmv_detailed(op, v, 1.0, opt);
    EXPECT_GT(r.substeps, 1u);
    EXPECT_LE(rel_two(r.value, step(prepare(op, 1.0), v)), 1e-8);
}

TEST(Krylov, EstimateBoundsTrueErrorOnHeat) {
    for (std::size_t n : {8u, 12u, 16u}) {
        const auto op = fd::heat_factors(n, 2);
        const auto v = heat_initial(n);
        const auto exact = step(prepare(op, 0.05), v);
        for (double tol : {1e-4, 1e-6, 1e-8}) {
            KrylovOptions opt;
            opt.tol = tol;
            const auto r = arnoldi_expmv_detailed(op, v, 0.05, opt);
            const double err = norm_two(r.value - exact) / norm_two(v);
            EXPECT_LE(err, 100.0 * r.error_estimate + 1e-15) << "n=" << n << " tol=" << tol;
        }
    }
}

TEST(Krylov, NoConvergenceCarriesEstimate) {
    const auto op = fd::heat_factors(16, 2);
    const auto v = heat_initial(16);
    KrylovOptions opt;
    opt.m_max = 2;
    opt.max_substeps = 2;
    try {
        (void)arnoldi_expmv_detailed(op, v, 5.0, opt);
        FAIL() << "expected no_convergence";
    } catch (const no_convergence& e) {
        EXPECT_GT(e.best_estimate(), 0.0);
    }
}

TEST(Krylov, InvalidArguments) {
    const KroneckerOp<double> op({random_matrix<double>(3, 3)});
    const auto v = random_tensor<double>(op.shape());
    EXPECT_THROW((void)arnoldi_expmv(op, v, 1.0, 1e-15), invalid_input);
    EXPECT_THROW((void)arnoldi_expmv(op, v, 1.0, 1e-10, 0), invalid_input);
    EXPECT_THROW((void)arnoldi_expmv(op, random_tensor<double>(Shape{4}), 1.0), shape_error);
}
