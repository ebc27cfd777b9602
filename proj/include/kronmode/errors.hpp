#pragma once

#include <stdexcept>
#include <string>

namespace kronmode {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand extents do not fit together.
class shape_error : public error {
public:
    using error::error;
};

/// Mode (direction) index outside [0, ndim).
class invalid_direction : public error {
public:
    using error::error;
};

/// Non-finite or otherwise unusable numeric input.
class invalid_input : public error {
public:
    using error::error;
};

/// Zero pivot encountered during LU factorization.
class singular_matrix : public error {
public:
    using error::error;
};

/// Unsupported combination of discretization / run parameters.
class config_error : public error {
public:
    using error::error;
};

/// Grid nodes not distinct or not strictly increasing.
class invalid_grid : public error {
public:
    using error::error;
};

/// A potential evaluated to a non-finite value at a quadrature node.
class invalid_potential : public error {
public:
    using error::error;
};

/// Dense assembly requested beyond the configured size cap.
class oracle_size_error : public error {
public:
    using error::error;
};

/// Relative error requested against a reference with zero norm.
class invalid_reference : public error {
public:
    using error::error;
};

/// Iterative method failed to reach its tolerance within budget.
/// Carries the best error estimate that was achieved.
class no_convergence : public error {
public:
    no_convergence(const std::string& what, double best_estimate)
        : error(what), best_estimate_(best_estimate) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

}  // namespace kronmode
