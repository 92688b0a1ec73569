// Bayesian model abstraction: log-likelihood, log-prior and their derivative
// suppliers, plus the builtin models and a finite-difference engine that acts
// both as fallback and as verification oracle for analytic derivatives.
#pragma once

#include "skewlap/dataset.hpp"
#include "skewlap/tensor.hpp"
#include "skewlap/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace skewlap {

// Pure functions of (theta, data); instances are immutable after construction
// and safe to share across threads.
struct ModelSpec {
    int dim = 0;
    std::string kind;                       // builtin identifier, empty for custom models
    Vector prior_params;                    // builtin prior parameters, used by conjugate oracles
    std::vector<std::string> param_names;   // used for CSV headers, may be empty

    std::function<bool(const Vector&)> in_domain;  // admissible-theta guard
    std::function<void(const DataSet&)> check_data;  // throws DomainError on invalid responses

    std::function<double(const Vector&, const DataSet&)> loglik;  // up to data-only constants
    std::function<double(const Vector&)> logprior;

    // Analytic derivative suppliers; leave empty to fall back to finite
    // differences. Orders 1..3 of the log-likelihood, 1..2 of the log-prior,
    // optional order 4 of the log-likelihood.
    std::function<Vector(const Vector&, const DataSet&)> loglik_grad;
    std::function<Matrix(const Vector&, const DataSet&)> loglik_hess;
    std::function<SymTensor3(const Vector&, const DataSet&)> loglik_third;
    std::function<SymTensor4(const Vector&, const DataSet&)> loglik_fourth;
    std::function<Vector(const Vector&)> logprior_grad;
    std::function<Matrix(const Vector&)> logprior_hess;

    std::function<Vector(const DataSet&)> default_init;

    void require_admissible(const Vector& theta) const;
    void validate(const DataSet& data) const;
};

struct DerivativeBundle {
    Vector point;
    Vector grad;                      // order 1 (likelihood, plus prior score when included)
    Matrix hessian;                   // order 2 as stored, i.e. the raw second derivative, not J
    SymTensor3 third;                 // order 3 of the log-likelihood
    std::optional<SymTensor4> fourth; // order 4 when requested
    bool includes_prior = false;      // whether prior derivatives entered grad/hessian
};

// Log-likelihood plus log-prior at theta, excluding data-only constants.
double log_posterior_kernel(const ModelSpec& model, const Vector& theta, const DataSet& data);

enum class FiniteDiffPolicy { fallback, forbid };

// Populates all orders <= max_order (1..4). With include_prior the prior
// score and curvature are added into grad and hessian; higher prior
// derivatives are not included (the builtin constructions never need them).
DerivativeBundle derivatives(const ModelSpec& model, const Vector& theta, const DataSet& data,
                             int max_order, bool include_prior,
                             FiniteDiffPolicy fd = FiniteDiffPolicy::fallback);

// Central finite differences of a scalar function, symmetric by construction.
// Step policy per order k: eps^(1/(k+2)) * max(1, |theta_s|) per coordinate.
DerivativeBundle finite_diff_derivatives(const std::function<double(const Vector&)>& f,
                                         const Vector& theta, int order, double step = 0.0);

// Builtin models. Regression constructors take the covariate-column count
// (including any intercept column the dataset carries).
ModelSpec exponential_expprior(double rate_prior = 1.0);
ModelSpec gamma_poisson(double alpha, double beta);
ModelSpec probit_gaussian(double prior_variance, int dim);
ModelSpec logit_gaussian(double prior_variance, int dim);

}  // namespace skewlap
