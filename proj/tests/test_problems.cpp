#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "support.hpp"

using namespace kronmode;
using namespace kronmode::problems;
using namespace testing_support;

namespace {

// Closed-form relative error of the p=2 heat run: the grid data is an
// eigenvector of the FD Laplacian with eigenvalue -lambda_h.
double heat_closed_form(std::size_t n, double T) {
    const double h = 2 * std::numbers::pi / static_cast<double>(n);
    const double lambda = (2 - 2 * std::cos(h)) / (h * h);
    return std::abs(std::exp(-lambda * T) - std::exp(-T)) / std::exp(-T);
}

}  // namespace

TEST(RelativeError, Examples) {
    const auto r = random_tensor<double>(Shape{3, 4});
    EXPECT_EQ(relative_error(r, r), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(r * 2.0, r, NormKind::two), 1.0);
    EXPECT_DOUBLE_EQ(relative_error(r * 2.0, r, NormKind::max), 1.0);
    EXPECT_THROW((void)relative_error(r, Tensor<double>(Shape{3, 4})), invalid_reference);
    EXPECT_THROW((void)relative_error(r, Tensor<double>(Shape{4, 3})), shape_error);
}

TEST(TimeGrid, Validation) {
    EXPECT_DOUBLE_EQ(TimeGrid(0, 1, 4).tau(), 0.25);
    EXPECT_THROW(TimeGrid(0, 1, 0), config_error);
    EXPECT_THROW(TimeGrid(1, 1, 3), config_error);
}

TEST(Heat, PublishedValueAtN40) {
    const auto rep = heat3d_run(40, 2, 1.0, 1);
    EXPECT_NEAR(rep.rel_error / 2.06e-3, 1.0, 0.01);
    EXPECT_EQ(rep.problem, "heat");
    EXPECT_EQ(rep.shape, (std::vector<std::size_t>{40, 40, 40}));
    EXPECT_GE(rep.total_s, rep.time_mumode_s);
}

TEST(Heat, ClosedFormCrossCheck) {
    for (std::size_t n : {16u, 40u, 55u}) {
        const auto rep = heat3d_run(n, 2, 1.0, 1);
        EXPECT_NEAR(rep.rel_error, heat_closed_form(n, 1.0), 1e-12) << "n=" << n;
    }
    EXPECT_NEAR(heat3d_run(24, 2, 0.3, 1).rel_error, heat_closed_form(24, 0.3), 1e-12);
}

TEST(Heat, ErrorIsNormIndependent) {
    const auto a = heat3d_run(32, 2, 1.0, 1, NormKind::max);
    const auto b = heat3d_run(32, 2, 1.0, 1, NormKind::two);
    EXPECT_NEAR(a.rel_error / b.rel_error, 1.0, 1e-10);
}

TEST(Heat, StepCountInvariance) {
    const auto one = heat3d_solve(32, 2, 1.0, 1);
    const auto many = heat3d_solve(32, 2, 1.0, 100);
    EXPECT_LE(rel_two(many.solution, one.solution), 1e-12);
    EXPECT_NEAR(many.report.rel_error, one.report.rel_error, 1e-11);
}

TEST(Heat, HigherOrderAndSpectral) {
    const double e2 = heat3d_run(24, 2, 1.0, 1).rel_error;
    const double e4 = heat3d_run(24, 4, 1.0, 1).rel_error;
    const double einf = heat3d_run(24, spectral_p, 1.0, 1).rel_error;
    EXPECT_LT(e4, e2 / 10);
    EXPECT_LT(einf, 1e-12);
}

TEST(Heat, SinglePrecision) {
    const auto d = heat3d_run<double>(40, 2, 1.0, 1);
    const auto s = heat3d_run<float>(40, 2, 1.0, 1);
    EXPECT_EQ(s.precision, "single");
    EXPECT_NEAR(s.rel_error / d.rel_error, 1.0, 1e-3);
}

TEST(Heat, RejectsTinyGrid) { EXPECT_THROW((void)heat3d_run(4, 2, 1.0, 1), config_error); }

TEST(Pipeflow, MatchesKrylovReference) {
    const auto rep = pipeflow_run(32, 4.0, 1);
    EXPECT_LE(rep.rel_error, 1e-8);
    EXPECT_EQ(rep.shape, (std::vector<std::size_t>{32, 32}));
}

TEST(Pipeflow, StepCountInvariance) {
    PipeflowOptions opt;
    opt.with_reference = false;
    const auto one = pipeflow_solve(32, 4.0, 1, NormKind::max, opt);
    const auto many = pipeflow_solve(32, 4.0, 16, NormKind::max, opt);
    EXPECT_LE(rel_two(many.solution, one.solution), 1e-11);
}

TEST(Pipeflow, SolutionStaysNearlyNonnegative) {
    PipeflowOptions opt;
    opt.with_reference = false;
    const auto run = pipeflow_solve(64, 4.0, 1, NormKind::max, opt);
    double lo = 0, hi = 0;
    for (double v : run.solution.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ASSERT_TRUE(std::isfinite(v));
    }
    EXPECT_GE(lo, -1e-6 * hi);
}

TEST(Pipeflow, UndershootShrinksUnderRefinement) {
    // centred advection undershoots at high cell Peclet number
    PipeflowOptions opt;
    opt.with_reference = false;
    double prev = -1e300;
    for (std::size_t n : {32u, 64u, 128u}) {
        const auto run = pipeflow_solve(n, 1.0, 1, NormKind::max, opt);
        double lo = 0, hi = 0;
        for (double v : run.solution.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_GT(lo / hi, prev);
        prev = lo / hi;
    }
    EXPECT_GT(prev, -2e-3);
}

TEST(Hkp, HarmonicOnlyGivesDiagonalPhases) {
    const std::size_t k = 16;
    const double T = 1.0;
    const auto st = hkp_coefficients(k, T, true);
    const std::vector<std::size_t> ks{k, k, k};
    const auto lambda = hermite::harmonic_eigenvalues(std::span(ks));
    double err = 0;
    for (std::size_t j = 0; j < st.initial.size(); ++j)
        err = std::max(err, std::abs(st.final[j] - std::exp(cplx(0, -lambda[j] * T)) * st.initial[j]));
    EXPECT_LE(err / norm_max(st.initial), 1e-12);
}

TEST(Hkp, CoefficientNormConserved) {
    const auto st = hkp_coefficients(24, 1.0, false);
    EXPECT_NEAR(norm_two(st.final) / norm_two(st.initial), 1.0, 1e-12);
}

TEST(Hkp, InitialDatumNormMatchesClosedForm) {
    // ||psi0||^2 = 2^-5 pi^-3/2 * 2 (2 pi)^3/2 = 2^-5/2
    const auto b = problems::detail::cube_bases(24);
    const auto c = problems::detail::initial_coefficients<double>(b);
    EXPECT_NEAR(norm_two(c), std::pow(2.0, -1.25), 1e-10);
}

TEST(Hkp, SpectralConvergenceInK) {
    HkpOptions opt;
    opt.reference_k = 64;
    const double e16 = hkp_run(16, 1.0, opt).rel_error;
    const double e32 = hkp_run(32, 1.0, opt).rel_error;
    EXPECT_LT(e32, e16);
}

TEST(Hkp, K40ErrorAgainstK80Reference) {
    HkpOptions opt;
    opt.reference_k = 80;
    const auto rep = hkp_run(40, 1.0, opt);
    EXPECT_LE(*rep.norm_drift, 1e-12);
    EXPECT_GE(rep.rel_error, 7e-2 / 2) << "k=40 error " << rep.rel_error;
    EXPECT_LE(rep.rel_error, 7e-2 * 2) << "k=40 error " << rep.rel_error;
}

TEST(Magnus, ConstantGeneratorEqualsStep) {
    const KroneckerOp<cplx> op({random_matrix<cplx>(4, 4), random_matrix<cplx>(3, 3)});
    const auto u = random_tensor<cplx>(op.shape());
    const std::function<KroneckerOp<cplx>(double)> f = [&](double) { return op; };
    const auto a = magnus_midpoint_step(f, u, 0.3, 0.2);
    const auto b = step(prepare(op, 0.2), u);
    EXPECT_LE(rel_two(a, b), 1e-13);
}

TEST(Magnus, ScalarMidpointRule) {
    const std::function<KroneckerOp<double>(double)> f = [](double t) {
        const double s = std::sin(t);
        return KroneckerOp<double>({DenseMatrix<double>(1, 1, {s * s})});
    };
    const Tensor<double> u(Shape{1}, {1.5});
    const double t = 0.4, tau = 0.25;
    const auto r = magnus_midpoint_step(f, u, t, tau);
    const double s = std::sin(t + tau / 2);
    EXPECT_NEAR(r[0], 1.5 * std::exp(tau * s * s), 1e-15);
}

TEST(Hkmp, NormConservation) {
    HkmpOptions opt;
    opt.reference_steps = 0;
    const auto rep = hkmp_run(20, 1.0, 64, opt);
    EXPECT_LE(*rep.norm_drift, 1e-11);
}

TEST(Hkmp, TwoStepAccuracy) {
    const auto rep = hkmp_run(20, 1.0, 2);
    EXPECT_GE(rep.rel_error, 1e-2 / 3);
    EXPECT_LE(rep.rel_error, 1e-2 * 3);
}

TEST(Hkmp, SecondOrderInTime) {
    const auto bases = problems::detail::cube_bases(20);
    const auto c0 = problems::detail::initial_coefficients<double>(bases);
    const HkmpGenerator gen(bases[2]);
    const auto ref = hkmp_coefficients(gen, c0, 1.0, 2048);
    std::vector<double> err;
    for (std::size_t s : {32u, 64u, 128u}) err.push_back(rel_two(hkmp_coefficients(gen, c0, 1.0, s), ref));
    for (std::size_t i = 0; i + 1 < err.size(); ++i) {
        EXPECT_GE(err[i] / err[i + 1], 3.4);
        EXPECT_LE(err[i] / err[i + 1], 4.6);
    }
}

TEST(Hkmp, ConstantDirectionsReduceToExactStep) {
    // at t = 0 the third factor equals the harmonic one
    const hermite::HermiteBasis b(10);
    const HkmpGenerator gen(b);
    EXPECT_LE(max_abs(gen.third(0.0) - gen.harmonic()), 0.0);
    EXPECT_NEAR(max_abs(gen.third(std::numbers::pi / 2) - gen.harmonic()),
                max_abs(hermite::position_operator(b)), 1e-15);
}

TEST(Gpe, NonlinearFlowIsPhaseOnly) {
    auto psi = random_tensor<cplx>(Shape{4, 3, 5});
    auto w = Tensor<double>::filled(Shape{4, 3, 5}, 0.7);
    const auto before = psi;
    gpe_nonlinear_flow(psi, w, 0.37);
    for (std::size_t j = 0; j < psi.size(); ++j) EXPECT_NEAR(std::abs(psi[j]), std::abs(before[j]), 1e-15);
}

TEST(Gpe, ZeroStepIsIdentity) {
    const auto setup = gpe_setup(12);
    const auto cache = prepare(setup.linear, 0.0);
    const auto r = gpe_strang_step(cache, setup.weights, setup.initial, 0.0);
    EXPECT_LE(rel_two(r, setup.initial), 1e-15);
}

TEST(Gpe, UniformBackgroundIsStationary) {
    GpeConfig cfg;
    cfg.uniform_background = true;
    const auto run = gpe_solve(16, 1.0, 0.1, cfg);
    const auto setup = gpe_setup(16, cfg);
    EXPECT_LE(rel_two(run.solution, setup.initial), 1e-12);
}

TEST(Gpe, FirstHalfIsIdentityWhenDensityMatchesWeights) {
    // |phi|^2 = w makes the first nonlinear half step the identity
    const auto setup = gpe_setup(10);
    Tensor<cplx> phi(setup.initial.shape());
    for (std::size_t j = 0; j < phi.size(); ++j)
        phi[j] = std::polar(std::sqrt(setup.weights[j]), 0.1 * static_cast<double>(j % 17));
    const auto cache = prepare(setup.linear, 0.1);
    const auto a = gpe_strang_step(cache, setup.weights, phi, 0.1);
    auto b = step(cache, phi);
    for (std::size_t j = 0; j < b.size(); ++j)
        b[j] *= std::polar(1.0, 0.5 * (1.0 - std::norm(b[j]) / setup.weights[j]) * 0.05);
    EXPECT_LE(rel_two(a, b), 1e-13);
}

TEST(Gpe, LinearSubstepMatchesKrylov) {
    const auto setup = gpe_setup(16);
    const auto mu = step(prepare(setup.linear, 0.1), setup.initial);
    const auto kr = arnoldi_expmv(setup.linear, setup.initial, 0.1, 1e-10);
    EXPECT_LE(rel_two(kr, mu), 1e-8);
}

TEST(Gpe, WeightedNormConserved) {
    const auto rep = gpe_run(32, 1.0, 0.1);
    EXPECT_EQ(rep.steps, 10u);
    EXPECT_LE(*rep.norm_drift, 1e-10);
}

TEST(Gpe, SplittingIsSecondOrder) {
    const auto setup = gpe_setup(8);
    const double T = 1.0;
    const auto run = [&](std::size_t steps) {
        const double tau = T / static_cast<double>(steps);
        const auto cache = prepare(setup.linear, tau);
        auto psi = setup.initial;
        for (std::size_t s = 0; s < steps; ++s) psi = gpe_strang_step(cache, setup.weights, psi, tau);
        return psi;
    };
    const auto ref = run(1000);
    const double e1 = rel_two(run(8), ref);
    const double e2 = rel_two(run(16), ref);
    const double order = std::log2(e1 / e2);
    EXPECT_GE(order, 1.8);
    EXPECT_LE(order, 2.2);
}

TEST(Gpe, ConfigValidation) {
    EXPECT_THROW((void)gpe_run(8, 1.0, 0.1), config_error);
    EXPECT_THROW((void)gpe_run(16, 1.05, 0.1), config_error);
}
