// Approximation-quality diagnostics: total variation distances by quadrature,
// posterior-functional errors by Monte Carlo, conjugate exact posteriors as
// oracles, and the finite-sample total-variation bound calculator.
#pragma once

#include "skewlap/dataset.hpp"
#include "skewlap/marginal.hpp"
#include "skewlap/quadrature.hpp"
#include "skewlap/sampler.hpp"
#include "skewlap/skew.hpp"
#include "skewlap/types.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace skewlap {

// Conjugate exact posterior; only the Gamma family arises from the supported
// model/prior pairs (exponential rate and Poisson mean).
struct ExactPosterior {
    double shape = 0.0;
    double rate = 0.0;

    double log_pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
    double mean() const { return shape / rate; }
    double mode() const { return (shape - 1.0) / rate; }
};

// exponential_expprior: Gamma(n+1, rate_prior + sum x).
// gamma_poisson:        Gamma(alpha + sum x, beta + n).
ExactPosterior exact_posterior(const std::string& model_kind, const DataSet& data,
                               const Vector& prior_params);

struct TvEstimate {
    double value = 0.0;  // (1/2) integral of |p - q| over the box
    double slack = 0.0;  // bound on the mass either density holds outside the box
};

// Tensor-product adaptive Simpson on |e^log_p - e^log_q| over the box
// (d = box.size() <= 3). Both densities must be normalized. The same pass
// integrates p and q themselves; their missing mass becomes the slack.
TvEstimate tv_quadrature(const std::function<double(const Vector&)>& log_p,
                         const std::function<double(const Vector&)>& log_q,
                         const std::vector<std::pair<double, double>>& box,
                         const QuadratureOptions& opts = {});

// Box of center +/- 10 sigma per coordinate, expanded until the enclosed
// Gaussian-factor mass is at least 1 - 1e-8.
std::vector<std::pair<double, double>> default_box(const Vector& center, const Matrix& omega);

// TV between a conjugate exact posterior and a theta-scale approximation
// (d = 1), integrated over the posterior's positive support.
TvEstimate tv_exact_vs_approx(const ExactPosterior& exact, const SkewSymmetricApprox& approx,
                              const QuadratureOptions& opts = {});

struct DiagnosticsReport {
    std::optional<double> tv;
    std::optional<double> tv_slack;
    Vector fmae;  // per-component absolute functional errors
    std::string method;  // "quadrature" or "monte_carlo"
    std::optional<Vector> standard_error;
    nlohmann::json metadata = nlohmann::json::object();

    nlohmann::json to_json() const;
};

// Vector-valued posterior functional.
using Functional = std::function<Vector(const Vector&)>;

Functional identity_functional();

// |E_ref[G] - E_approx[G]| with the approximation side estimated from m
// seeded i.i.d. draws. The reference side is either user-supplied draws from
// the target posterior or a conjugate exact posterior (d = 1, by quadrature).
DiagnosticsReport functional_error(const SkewSymmetricApprox& approx, const SampleBatch& reference,
                                   const Functional& G, int m, std::uint64_t seed);
DiagnosticsReport functional_error(const SkewSymmetricApprox& approx, const ExactPosterior& reference,
                                   const Functional& G, int m, std::uint64_t seed);
DiagnosticsReport functional_error(const MarginalApprox& approx, const SampleBatch& reference,
                                   const Functional& G, int m, std::uint64_t seed);

// Average absolute error of per-observation success probabilities between
// two posterior sample sets, for a binary regression model.
double ave_pr(const std::string& link_kind, const DataSet& data, const Matrix& reference_draws,
              const Matrix& approx_draws);

// Finite-sample TV bound: inputs are the analyst-supplied envelope constants;
// the calculator never derives them from data.
struct BoundInputs {
    double L3 = 1.0;
    double L4 = 1.0;
    double L_pi2 = 1.0;
    double L_F_delta = 1.0;
    double eta_bar1 = 1.0;  // smallest eigenvalue bound of the rescaled precision
    double eta_bar2 = 1.0;  // largest eigenvalue bound
    double c0 = 1.0;
    double c5 = 1.0;
    int d = 1;
    double n = 1.0;
    // Constants of the prior envelope near the target; defaults make their
    // contribution to the c0 condition vanish.
    double delta = 1.0;
    double L_pi_delta = 0.0;
    double C_pi_delta = 2.0;
};

struct BoundResult {
    double c1_star = 0.0;
    double c2_star = 0.0;
    double m_n = 0.0;        // sqrt(c0 log n)
    double remainder = 0.0;  // r(n, d)
    double bound = 0.0;      // (M_n^6 d^3 / n) r(n, d)
    bool precondition_n_large = false;
    bool precondition_c0 = false;
    bool valid = false;
    std::vector<std::string> failed;  // names of violated preconditions

    nlohmann::json to_json() const;
};

BoundResult nonasymptotic_bound(const BoundInputs& b);

}  // namespace skewlap
