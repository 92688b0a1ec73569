// Damped-Newton MAP search with the curvature certificate the skew-modal
// construction needs.
#pragma once

#include "skewlap/model.hpp"
#include "skewlap/types.hpp"

#include <optional>
#include <vector>

namespace skewlap {

struct MapResult {
    Vector theta_hat;
    double grad_norm = 0.0;     // sup-norm of the kernel gradient at theta_hat
    Matrix observed_info;       // J = -(hessian of loglik + logprior) at theta_hat
    Matrix chol_lower;          // lower Cholesky factor of J / n
    int iterations = 0;
    bool converged = false;
    double n = 0.0;             // observation count
    double kernel_value = 0.0;  // log posterior kernel at theta_hat
    std::vector<double> kernel_trace;  // kernel value after each accepted step
};

struct MapOptions {
    std::optional<Vector> init;  // model default when absent
    double tol = 1e-8;           // on sup-norm gradient, scaled by max(1,|kernel|)
    int max_iter = 100;
};

// Newton iteration with Armijo backtracking on the log posterior kernel;
// steps that exit the domain guard are halved. An indefinite interior
// Hessian is Levenberg-damped; an indefinite Hessian at the final point
// throws IndefiniteHessian since the approximations are undefined there.
// Non-convergence within max_iter returns the best point with
// converged=false.
MapResult find_map(const ModelSpec& model, const DataSet& data, const MapOptions& opts = {});

}  // namespace skewlap
