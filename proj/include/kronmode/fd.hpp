#pragma once

// One-dimensional grids, finite-difference stencils and the per-direction
// generators of the heat, pipe-flow and Gross-Pitaevskii problems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/kron_operator.hpp"

namespace kronmode::fd {

enum class GridKind { uniform_periodic, uniform, nonuniform };

enum class Boundary { periodic, dirichlet_zero, neumann_zero };

/// Boundary treatment at the left and right end of a direction.
/// Periodic must be set on both ends or on neither.
struct BoundaryCondition {
    Boundary left = Boundary::periodic;
    Boundary right = Boundary::periodic;

    static constexpr BoundaryCondition periodic() { return {Boundary::periodic, Boundary::periodic}; }
    static constexpr BoundaryCondition both(Boundary b) { return {b, b}; }

    [[nodiscard]] constexpr bool is_periodic() const { return left == Boundary::periodic; }

    void validate() const {
        if ((left == Boundary::periodic) != (right == Boundary::periodic))
            throw config_error("BoundaryCondition: periodic must apply to both ends or neither");
    }
};

/// Strictly increasing grid points of one direction.
///
/// Uniform grids place a node on every Neumann endpoint and leave Dirichlet
/// endpoints as (zero-valued) ghost nodes one spacing outside the grid, so
/// that all n nodes are unknowns. Periodic grids cover [a, b) with h = (b-a)/n.
class Grid1D {
public:
    [[nodiscard]] static Grid1D uniform_periodic(double a, double b, std::size_t n) {
        if (!(b > a) || n < 1) throw invalid_grid("uniform_periodic: need b > a and n >= 1");
        const double h = (b - a) / static_cast<double>(n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = a + static_cast<double>(i) * h;
        return Grid1D(GridKind::uniform_periodic, std::move(x), h, a, b);
    }

    /// n nodes on [a, b]; endpoints included unless the matching boundary is Dirichlet.
    [[nodiscard]] static Grid1D uniform(double a, double b, std::size_t n,
                                        BoundaryCondition bc = BoundaryCondition::both(Boundary::neumann_zero)) {
        bc.validate();
        if (bc.is_periodic()) return uniform_periodic(a, b, n);
        if (!(b > a) || n < 2) throw invalid_grid("uniform: need b > a and n >= 2");
        const bool dl = bc.left == Boundary::dirichlet_zero;
        const bool dr = bc.right == Boundary::dirichlet_zero;
        const double intervals = static_cast<double>(n - 1) + (dl ? 1.0 : 0.0) + (dr ? 1.0 : 0.0);
        const double h = (b - a) / intervals;
        const double x0 = dl ? a + h : a;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = x0 + static_cast<double>(i) * h;
        return Grid1D(GridKind::uniform, std::move(x), h, a, b);
    }

    [[nodiscard]] static Grid1D nonuniform(std::vector<double> points) {
        if (points.size() < 2) throw invalid_grid("nonuniform: need at least two points");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i] > points[i - 1]))
                throw invalid_grid("nonuniform: points must be strictly increasing (index " +
                                   std::to_string(i) + ")");
        const double a = points.front();
        const double b = points.back();
        return Grid1D(GridKind::nonuniform, std::move(points), 0.0, a, b);
    }

    /// Nodes x = L sinh(s xi) / sinh(s) for xi uniform in [-1, 1], shifted to
    /// [a, b]; clusters points towards the middle of the interval.
    [[nodiscard]] static Grid1D sinh_clustered(double a, double b, std::size_t n, double strength) {
        if (!(b > a) || n < 2) throw invalid_grid("sinh_clustered: need b > a and n >= 2");
        if (!(strength > 0)) throw config_error("sinh_clustered: strength must be positive");
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            x[i] = mid + half * std::sinh(strength * xi) / std::sinh(strength);
        }
        x.front() = a;
        x.back() = b;
        return nonuniform(std::move(x));
    }

    [[nodiscard]] GridKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    /// Spacing of uniform grids; 0 for nonuniform ones.
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double lower() const noexcept { return a_; }
    [[nodiscard]] double upper() const noexcept { return b_; }

private:
    Grid1D(GridKind kind, std::vector<double> points, double h, double a, double b)
        : kind_(kind), points_(std::move(points)), h_(h), a_(a), b_(b) {}

    GridKind kind_;
    std::vector<double> points_;
    double h_;
    double a_;
    double b_;
};

/// Finite-difference weights c with sum_j c_j f(nodes_j) ~ f^(deriv)(center),
/// exact for polynomials of degree < nodes.size() (Fornberg's recursion).
[[nodiscard]] inline std::vector<double> fd_weights(std::span<const double> nodes, double center,
                                                    std::size_t deriv) {
    const std::size_t n = nodes.size();
    if (n == 0 || deriv >= n)
        throw config_error("fd_weights: derivative order must be below the number of nodes");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j]) throw invalid_grid("fd_weights: repeated node");

    // c[j][k]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(n, std::vector<double>(deriv + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - center;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - center;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = c[j][deriv];
    return w;
}

/// Marker for the spectral (Fourier) order in diff_matrix / heat_factors.
inline constexpr int spectral_order = 0;

namespace detail {

// Fourier differentiation matrix on n equispaced periodic nodes with spacing h.
inline DenseMatrix<double> fourier_matrix(std::size_t n, double h, std::size_t deriv) {
    if (n % 2 != 0) throw config_error("spectral differentiation requires an even number of points");
    DenseMatrix<double> d(n, n);
    const double pi = std::numbers::pi;
    const double scale = 2.0 * pi / (static_cast<double>(n) * h);  // 1 for [0, 2pi)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long k = static_cast<long>(i) - static_cast<long>(j);
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const double half = static_cast<double>(k) * pi / static_cast<double>(n);
            if (deriv == 1) {
                d(i, j) = k == 0 ? 0.0 : 0.5 * sign / std::tan(half) * scale;
            } else {
                const double hh = 2.0 * pi / static_cast<double>(n);
                d(i, j) = k == 0 ? (-pi * pi / (3.0 * hh * hh) - 1.0 / 6.0) * scale * scale
                                 : -0.5 * sign / (std::sin(half) * std::sin(half)) * scale * scale;
            }
        }
    return d;
}

// Position of a ghost node mirrored across the boundary node x_b, given the
// interior node x_i it mirrors.
inline double mirror(double xb, double xi) { return 2.0 * xb - xi; }

}  // namespace detail

/// n x n differentiation matrix of order `deriv` (1 or 2) and accuracy order p.
///
/// Rows use the centered (p+1)-point stencil. Periodic grids wrap indices;
/// at a Dirichlet end the ghost nodes outside the grid carry the value zero
/// and are dropped; at a Neumann end (node on the boundary) ghost values are
/// the even reflection about the boundary node. Nonuniform grids support
/// p = 2 only. p = spectral_order selects Fourier differentiation on
/// periodic uniform grids.
[[nodiscard]] inline DenseMatrix<double> diff_matrix(const Grid1D& grid, std::size_t deriv, int p,
                                                     BoundaryCondition bc) {
    bc.validate();
    const std::size_t n = grid.size();
    if (deriv != 1 && deriv != 2) throw config_error("diff_matrix: derivative order must be 1 or 2");
    if (p == spectral_order) {
        if (grid.kind() != GridKind::uniform_periodic || !bc.is_periodic())
            throw config_error("diff_matrix: spectral order needs a periodic uniform grid");
        return detail::fourier_matrix(n, grid.spacing(), deriv);
    }
    if (p < 2 || p % 2 != 0) throw config_error("diff_matrix: accuracy order must be even and >= 2");
    if (static_cast<std::size_t>(p) + 1 > n) throw config_error("diff_matrix: need p + 1 <= n");
    if ((grid.kind() == GridKind::uniform_periodic) != bc.is_periodic())
        throw config_error("diff_matrix: periodic boundary needs a periodic grid and vice versa");
    if (grid.kind() == GridKind::nonuniform && p != 2)
        throw config_error("diff_matrix: nonuniform grids support p = 2 only");

    const long half = p / 2;
    DenseMatrix<double> d(n, n);
    const auto& x = grid.points();

    if (grid.kind() == GridKind::uniform_periodic) {
        const double h = grid.spacing();
        std::vector<double> offs;
        for (long s = -half; s <= half; ++s) offs.push_back(static_cast<double>(s) * h);
        const auto w = fd_weights(offs, 0.0, deriv);
        for (std::size_t i = 0; i < n; ++i)
            for (long s = -half; s <= half; ++s) {
                const long j = ((static_cast<long>(i) + s) % static_cast<long>(n) + static_cast<long>(n)) %
                               static_cast<long>(n);
                d(i, static_cast<std::size_t>(j)) += w[static_cast<std::size_t>(s + half)];
            }
        return d;
    }

    // Non-periodic: build node positions of the stencil, including ghosts, and
    // map each ghost to its column (reflection) or drop it (Dirichlet).
    const long nn = static_cast<long>(n);
    const double h = grid.spacing();
    for (long i = 0; i < nn; ++i) {
        std::vector<double> nodes;
        std::vector<long> cols;  // -1 marks a dropped ghost
        for (long s = -half; s <= half; ++s) {
            const long j = i + s;
            if (j >= 0 && j < nn) {
                nodes.push_back(x[static_cast<std::size_t>(j)]);
                cols.push_back(j);
                continue;
            }
            const bool left = j < 0;
            const Boundary b = left ? bc.left : bc.right;
            if (b == Boundary::neumann_zero) {
                // Node 0 (or n-1) sits on the boundary; ghost -k mirrors node k.
                const long src = left ? -j : 2 * (nn - 1) - j;
                if (src < 0 || src >= nn) throw config_error("diff_matrix: grid too small for stencil");
                const double xb = left ? x.front() : x.back();
                nodes.push_back(detail::mirror(xb, x[static_cast<std::size_t>(src)]));
                cols.push_back(src);
            } else {
                // Ghost nodes continue the spacing outward; the first one is the
                // Dirichlet boundary itself.
                double pos;
                if (grid.kind() == GridKind::uniform) {
                    pos = left ? x.front() + static_cast<double>(j) * h
                               : x.back() + static_cast<double>(j - (nn - 1)) * h;
                } else {
                    const double hb = left ? x[1] - x[0] : x[n - 1] - x[n - 2];
                    pos = left ? x.front() + static_cast<double>(j) * hb
                               : x.back() + static_cast<double>(j - (nn - 1)) * hb;
                }
                nodes.push_back(pos);
                cols.push_back(-1);
            }
        }
        const auto w = fd_weights(nodes, x[static_cast<std::size_t>(i)], deriv);
        for (std::size_t k = 0; k < w.size(); ++k)
            if (cols[k] >= 0) d(static_cast<std::size_t>(i), static_cast<std::size_t>(cols[k])) += w[k];
    }
    return d;
}

/// Three identical periodic second-derivative factors on [0, 2pi)^3.
/// p must be even, or spectral_order for Fourier differentiation.
[[nodiscard]] inline KroneckerOp<double> heat_factors(std::size_t n, int p) {
    if (p != spectral_order && (p < 2 || p % 2 != 0))
        throw config_error("heat_factors: accuracy order must be even (or spectral)");
    const auto grid = Grid1D::uniform_periodic(0.0, 2.0 * std::numbers::pi, n);
    const auto d2 = diff_matrix(grid, 2, p, BoundaryCondition::periodic());
    return KroneckerOp<double>({d2, d2, d2});
}

/// Pipe-flow model parameters.
struct PipeflowParams {
    double alpha = 1.0 / 90.0;
    double rho_min = 0.1;
    double rho_max = 5.0;
    double z_max = 8.0;
};

/// Advection velocity s(z) = 2 + tanh(4(z - 5/2)) - tanh(4(z - 5)).
[[nodiscard]] inline double pipe_velocity(double z) {
    return 2.0 + std::tanh(4.0 * (z - 2.5)) - std::tanh(4.0 * (z - 5.0));
}

[[nodiscard]] inline Grid1D pipe_rho_grid(std::size_t n, const PipeflowParams& prm = {}) {
    return Grid1D::uniform(prm.rho_min, prm.rho_max, n, BoundaryCondition::both(Boundary::neumann_zero));
}

[[nodiscard]] inline Grid1D pipe_z_grid(std::size_t n, const PipeflowParams& prm = {}) {
    return Grid1D::uniform(0.0, prm.z_max, n, {Boundary::dirichlet_zero, Boundary::neumann_zero});
}

/// Direction 0 is rho: alpha (D2 + diag(1/rho) D1), Neumann at both ends.
/// Direction 1 is z: alpha D2 - diag(s(z)) D1, Dirichlet at z = 0 and
/// Neumann at z = z_max. Second-order centered differences.
[[nodiscard]] inline KroneckerOp<double> pipeflow_factors(std::size_t n_rho, std::size_t n_z,
                                                          const PipeflowParams& prm = {}) {
    if (n_rho < 8 || n_z < 8) throw config_error("pipeflow_factors: need n >= 8 per direction");
    const auto rho = pipe_rho_grid(n_rho, prm);
    const auto z = pipe_z_grid(n_z, prm);
    const auto bc_rho = BoundaryCondition::both(Boundary::neumann_zero);
    const BoundaryCondition bc_z{Boundary::dirichlet_zero, Boundary::neumann_zero};

    const auto d2r = diff_matrix(rho, 2, 2, bc_rho);
    const auto d1r = diff_matrix(rho, 1, 2, bc_rho);
    DenseMatrix<double> a_rho(n_rho, n_rho);
    for (std::size_t j = 0; j < n_rho; ++j)
        for (std::size_t i = 0; i < n_rho; ++i)
            a_rho(i, j) = prm.alpha * (d2r(i, j) + d1r(i, j) / rho[i]);

    const auto d2z = diff_matrix(z, 2, 2, bc_z);
    const auto d1z = diff_matrix(z, 1, 2, bc_z);
    DenseMatrix<double> a_z(n_z, n_z);
    for (std::size_t j = 0; j < n_z; ++j)
        for (std::size_t i = 0; i < n_z; ++i)
            a_z(i, j) = prm.alpha * d2z(i, j) - pipe_velocity(z[i]) * d1z(i, j);

    return KroneckerOp<double>({std::move(a_rho), std::move(a_z)});
}

[[nodiscard]] inline KroneckerOp<double> pipeflow_factors(std::size_t n, const PipeflowParams& prm = {}) {
    return pipeflow_factors(n, n, prm);
}

/// Trapezoidal quadrature weights of a grid.
[[nodiscard]] inline std::vector<double> trapezoid_weights(const Grid1D& grid) {
    const auto& x = grid.points();
    const std::size_t n = x.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? x[i] - x[i - 1] : 0.0;
        const double right = i + 1 < n ? x[i + 1] - x[i] : 0.0;
        w[i] = 0.5 * (left + right);
    }
    return w;
}

/// Symmetrized generator W^{1/2} A W^{-1/2} with its weights.
struct WeightedOperator {
    DenseMatrix<double> matrix;
    std::vector<double> weights;
};

/// W^{1/2} (D2 / 2) W^{-1/2} for one direction, D2 with Neumann closure and
/// W the trapezoidal weights. Symmetric because W D2 is.
[[nodiscard]] inline WeightedOperator weighted_half_laplacian(const Grid1D& grid) {
    const auto bc = BoundaryCondition::both(Boundary::neumann_zero);
    const auto d2 = diff_matrix(grid, 2, 2, bc);
    auto w = trapezoid_weights(grid);
    const std::size_t n = grid.size();
    DenseMatrix<double> a(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            a(i, j) = 0.5 * d2(i, j) * std::sqrt(w[i] / w[j]);
    return {std::move(a), std::move(w)};
}

struct WeightedKronecker {
    KroneckerOp<double> op;
    std::vector<std::vector<double>> weights;
};

/// Per-direction symmetrized (1/2) D2 factors with homogeneous Neumann
/// boundaries, plus the trapezoidal weights of every direction.
[[nodiscard]] inline WeightedKronecker gpe_weighted_factors(std::span<const Grid1D> grids) {
    std::vector<DenseMatrix<double>> factors;
    std::vector<std::vector<double>> weights;
    for (const auto& g : grids) {
        if (g.kind() == GridKind::uniform_periodic)
            throw config_error("gpe_weighted_factors: grids must be non-periodic");
        auto wo = weighted_half_laplacian(g);
        factors.push_back(std::move(wo.matrix));
        weights.push_back(std::move(wo.weights));
    }
    return {KroneckerOp<double>(std::move(factors)), std::move(weights)};
}

}  // namespace kronmode::fd
