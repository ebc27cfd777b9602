#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kronmode/errors.hpp"
#include "kronmode/tensor.hpp"

namespace kronmode::problems {

/// Uniform time grid on [t0, T].
struct TimeGrid {
    double t0 = 0;
    double T = 1;
    std::size_t steps = 1;

    TimeGrid(double t0_, double T_, std::size_t steps_) : t0(t0_), T(T_), steps(steps_) {
        if (steps == 0) throw config_error("TimeGrid: steps must be positive");
        if (!(T > t0)) throw config_error("TimeGrid: final time must exceed the initial time");
    }

    [[nodiscard]] double tau() const { return (T - t0) / static_cast<double>(steps); }
    [[nodiscard]] double time(std::size_t i) const { return t0 + static_cast<double>(i) * tau(); }
};

/// Accuracy order column value for spectral discretizations.
inline constexpr int spectral_p = 0;

/// Outcome of one problem run. Timings are wall-clock seconds per phase:
/// exponentials, mode products, and everything else (setup, nonlinear
/// substeps, error evaluation).
struct RunReport {
    std::string problem;
    std::vector<std::size_t> shape;
    std::optional<std::size_t> n;
    std::optional<std::size_t> k;
    std::optional<int> p;  // spectral_p for Fourier differentiation
    std::size_t steps = 1;
    double tau = 0;
    std::string precision = "double";
    NormKind norm = NormKind::max;
    double rel_error = 0;
    /// Relative change of the conserved norm, when the problem has one.
    std::optional<double> norm_drift;
    double time_exp_s = 0;
    double time_mumode_s = 0;
    double time_other_s = 0;
    double total_s = 0;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Accumulates wall-clock time into named phases.
class PhaseClock {
public:
    using clock = std::chrono::steady_clock;

    template <typename F>
    decltype(auto) exp(F&& f) { return timed(exp_, std::forward<F>(f)); }
    template <typename F>
    decltype(auto) mumode(F&& f) { return timed(mumode_, std::forward<F>(f)); }
    template <typename F>
    decltype(auto) other(F&& f) { return timed(other_, std::forward<F>(f)); }

    void fill(RunReport& r) const {
        r.time_exp_s = exp_;
        r.time_mumode_s = mumode_;
        r.time_other_s = other_;
        r.total_s = exp_ + mumode_ + other_;
    }

private:
    template <typename F>
    static decltype(auto) timed(double& acc, F&& f) {
        struct Guard {
            double& acc;
            clock::time_point start = clock::now();
            ~Guard() { acc += std::chrono::duration<double>(clock::now() - start).count(); }
        } guard{acc};
        return std::forward<F>(f)();
    }

    double exp_ = 0;
    double mumode_ = 0;
    double other_ = 0;
};

/// ||U - Ref|| / ||Ref|| in the chosen norm.
template <Scalar T>
[[nodiscard]] double relative_error(const Tensor<T>& u, const Tensor<T>& ref, const NormSpec& spec) {
    if (u.shape() != ref.shape())
        throw shape_error("relative_error: shape " + u.shape().to_string() + " vs " + ref.shape().to_string());
    const double denom = static_cast<double>(norm(ref, spec));
    if (!(denom > 0)) throw invalid_reference("relative_error: reference has zero norm");
    return static_cast<double>(norm(u - ref, spec)) / denom;
}

template <Scalar T>
[[nodiscard]] double relative_error(const Tensor<T>& u, const Tensor<T>& ref, NormKind kind = NormKind::max) {
    return relative_error(u, ref, NormSpec{kind, {}});
}

template <typename Real>
[[nodiscard]] constexpr const char* precision_name() {
    return sizeof(real_t<Real>) == sizeof(float) ? "single" : "double";
}

/// Report plus the final state, for callers that inspect the solution.
template <Scalar T>
struct Run {
    RunReport report;
    Tensor<T> solution;
};

/// Fills a tensor from a function of the per-direction grid coordinates.
template <Scalar T, typename F>
[[nodiscard]] Tensor<T> sample_on_grid(std::span<const std::vector<double>> coords, F&& f) {
    std::vector<std::size_t> dims;
    for (const auto& c : coords) dims.push_back(c.size());
    Tensor<T> out{Shape(dims)};
    std::vector<std::size_t> idx(dims.size(), 0);
    std::vector<double> x(dims.size());
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        for (std::size_t mu = 0; mu < dims.size(); ++mu) x[mu] = coords[mu][idx[mu]];
        out[lin] = static_cast<T>(f(std::span<const double>(x)));
        for (std::size_t mu = 0; mu < dims.size(); ++mu) {
            if (++idx[mu] < dims[mu]) break;
            idx[mu] = 0;
        }
    }
    return out;
}

}  // namespace kronmode::problems
