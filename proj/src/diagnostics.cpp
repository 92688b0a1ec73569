#include "skewlap/diagnostics.hpp"

#include "skewlap/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

namespace skewlap {

double ExactPosterior::log_pdf(double x) const {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double ExactPosterior::cdf(double x) const { return gamma_p(shape, rate * x); }

double ExactPosterior::quantile(double p) const {
    return boost::math::gamma_p_inv(shape, p) / rate;
}

ExactPosterior exact_posterior(const std::string& model_kind, const DataSet& data,
                               const Vector& prior_params) {
    if (data.n() < 1) throw UnsupportedModel("exact posterior requires at least one observation");
    if (model_kind == "exponential_expprior") {
        const double rate_prior = prior_params.size() > 0 ? prior_params[0] : 1.0;
        return ExactPosterior{data.n() + 1.0, rate_prior + data.responses.sum()};
    }
    if (model_kind == "gamma_poisson") {
        if (prior_params.size() < 2)
            throw UnsupportedModel("gamma_poisson exact posterior needs alpha, beta");
        return ExactPosterior{prior_params[0] + data.responses.sum(),
                              prior_params[1] + data.n()};
    }
    throw UnsupportedModel("no conjugate exact posterior for model kind: " + model_kind);
}

namespace {

struct Triple {
    double diff, p, q;
};

// One adaptive pass accumulating |p-q|, p and q together; the refinement
// error is controlled on the |p-q| component, which dominates the others'
// smoothness requirements near the crossing points.
Triple simpson_triple(const std::function<Triple(double)>& f, double a, double b, Triple fa,
                      Triple fm, Triple fb, Triple whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Triple flm = f(lm);
    const Triple frm = f(rm);
    auto rule = [](double w, Triple x, Triple y, Triple z) {
        return Triple{w * (x.diff + 4.0 * y.diff + z.diff), w * (x.p + 4.0 * y.p + z.p),
                      w * (x.q + 4.0 * y.q + z.q)};
    };
    const Triple left = rule((m - a) / 6.0, fa, flm, fm);
    const Triple right = rule((b - m) / 6.0, fm, frm, fb);
    const Triple sum{left.diff + right.diff, left.p + right.p, left.q + right.q};
    const double delta = sum.diff - whole.diff;
    if (std::abs(delta) <= 15.0 * tol)
        return Triple{sum.diff + delta / 15.0, sum.p, sum.q};
    if (depth >= max_depth) throw ResolutionExceeded("TV quadrature refinement cap reached");
    const Triple l =
        simpson_triple(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth);
    const Triple r =
        simpson_triple(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
    return Triple{l.diff + r.diff, l.p + r.p, l.q + r.q};
}

Triple integrate_triple_1d(const std::function<Triple(double)>& f, double a, double b, double tol,
                           int max_depth, int min_panels) {
    const int panels = std::max(1, min_panels);
    const double h = (b - a) / panels;
    const double panel_tol = tol / panels;
    Triple total{0.0, 0.0, 0.0};
    Triple fa = f(a);
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = i + 1 == panels ? b : x0 + h;
        const Triple fm = f(0.5 * (x0 + x1));
        const Triple fb = f(x1);
        const double w = (x1 - x0) / 6.0;
        const Triple whole{w * (fa.diff + 4.0 * fm.diff + fb.diff),
                           w * (fa.p + 4.0 * fm.p + fb.p), w * (fa.q + 4.0 * fm.q + fb.q)};
        const Triple part =
            simpson_triple(f, x0, x1, fa, fm, fb, whole, panel_tol, 0, max_depth);
        total.diff += part.diff;
        total.p += part.p;
        total.q += part.q;
        fa = fb;
    }
    return total;
}

Triple integrate_triple(const std::function<Triple(const Vector&)>& f,
                        const std::vector<std::pair<double, double>>& box, Vector& point,
                        std::size_t k, double tol, int max_depth, int min_panels) {
    const auto [lo, hi] = box[k];
    if (k + 1 == box.size()) {
        return integrate_triple_1d(
            [&](double x) {
                point[static_cast<int>(k)] = x;
                return f(point);
            },
            lo, hi, tol, max_depth, min_panels);
    }
    const double inner_tol = tol / std::max(1.0, hi - lo);
    return integrate_triple_1d(
        [&](double x) {
            point[static_cast<int>(k)] = x;
            return integrate_triple(f, box, point, k + 1, inner_tol, max_depth, min_panels);
        },
        lo, hi, tol, max_depth, min_panels);
}

}  // namespace

TvEstimate tv_quadrature(const std::function<double(const Vector&)>& log_p,
                         const std::function<double(const Vector&)>& log_q,
                         const std::vector<std::pair<double, double>>& box,
                         const QuadratureOptions& opts) {
    if (box.empty() || box.size() > 3)
        throw DomainError("TV quadrature supports 1 to 3 dimensions");
    auto f = [&](const Vector& x) {
        const double p = std::exp(log_p(x));
        const double q = std::exp(log_q(x));
        return Triple{std::abs(p - q), p, q};
    };
    Vector point(static_cast<int>(box.size()));
    const Triple t =
        integrate_triple(f, box, point, 0, opts.tol, opts.max_depth, opts.min_panels);
    TvEstimate est;
    est.value = 0.5 * t.diff;
    est.slack = std::max(0.0, 0.5 * ((1.0 - t.p) + (1.0 - t.q)));
    return est;
}

std::vector<std::pair<double, double>> default_box(const Vector& center, const Matrix& omega) {
    const int d = static_cast<int>(center.size());
    std::vector<std::pair<double, double>> box(d);
    double k = 10.0;
    // Grow until the Gaussian factor keeps at most 1e-8 outside; the SKS
    // density holds no more than twice the Gaussian mass there.
    while (2.0 * d * std::erfc(k / std::sqrt(2.0)) > 1e-8) k += 1.0;
    for (int i = 0; i < d; ++i) {
        const double s = std::sqrt(omega(i, i));
        box[i] = {center[i] - k * s, center[i] + k * s};
    }
    return box;
}

TvEstimate tv_exact_vs_approx(const ExactPosterior& exact, const SkewSymmetricApprox& approx,
                              const QuadratureOptions& opts) {
    if (approx.dim() != 1) throw DomainError("conjugate TV oracle is univariate");
    if (approx.parametrization != Parametrization::theta_scale)
        throw DomainError("conjugate TV oracle expects a theta-scale approximation");
    auto box = default_box(approx.center, approx.omega);
    // Intersect with the posterior's support and cover its far quantiles.
    box[0].first = std::max(box[0].first, 1e-300);
    box[0].first = std::min(box[0].first, exact.quantile(1e-12));
    box[0].first = std::max(box[0].first, 1e-300);
    box[0].second = std::max(box[0].second, exact.quantile(1.0 - 1e-12));
    auto log_p = [&](const Vector& x) { return exact.log_pdf(x[0]); };
    auto log_q = [&](const Vector& x) { return approx.log_density(x); };
    return tv_quadrature(log_p, log_q, box, opts);
}

nlohmann::json DiagnosticsReport::to_json() const {
    nlohmann::json doc;
    if (tv) doc["tv"] = *tv;
    if (tv_slack) doc["tv_slack"] = *tv_slack;
    if (fmae.size() > 0)
        doc["fmae"] = std::vector<double>(fmae.data(), fmae.data() + fmae.size());
    doc["method"] = method;
    if (standard_error)
        doc["standard_error"] = std::vector<double>(standard_error->data(),
                                                    standard_error->data() + standard_error->size());
    doc["metadata"] = metadata;
    return doc;
}

Functional identity_functional() {
    return [](const Vector& x) { return x; };
}

namespace {

struct MomentStats {
    Vector mean;
    Vector se;  // standard error of the mean
};

MomentStats sample_moments(const Matrix& rows, const Functional& G) {
    const int m = static_cast<int>(rows.rows());
    if (m < 1) throw EmptyReference("reference sample is empty");
    Vector first = G(rows.row(0).transpose());
    const int k = static_cast<int>(first.size());
    Vector sum = Vector::Zero(k), sumsq = Vector::Zero(k);
    sum += first;
    sumsq += first.cwiseProduct(first);
    for (int i = 1; i < m; ++i) {
        const Vector g = G(rows.row(i).transpose());
        sum += g;
        sumsq += g.cwiseProduct(g);
    }
    MomentStats s;
    s.mean = sum / m;
    Vector var = (sumsq / m - s.mean.cwiseProduct(s.mean)).cwiseMax(0.0);
    s.se = (var / std::max(1, m - 1)).cwiseSqrt();
    return s;
}

template <typename Approx>
DiagnosticsReport functional_error_impl(const Approx& approx, const MomentStats& ref,
                                        const Functional& G, int m, std::uint64_t seed,
                                        const std::string& reference_kind) {
    const SampleBatch draws = sample(approx, m, seed);
    const MomentStats est = sample_moments(draws.points, G);
    DiagnosticsReport rep;
    rep.method = "monte_carlo";
    rep.fmae = (est.mean - ref.mean).cwiseAbs();
    rep.standard_error =
        (est.se.cwiseProduct(est.se) + ref.se.cwiseProduct(ref.se)).cwiseSqrt();
    rep.metadata["n_draws"] = m;
    rep.metadata["seed"] = seed;
    rep.metadata["reference"] = reference_kind;
    return rep;
}

MomentStats exact_moments(const ExactPosterior& exact, const Functional& G) {
    // d = 1 quadrature over the posterior's effective support.
    const double lo = exact.quantile(1e-13);
    const double hi = exact.quantile(1.0 - 1e-13);
    Vector probe = G(Vector::Constant(1, exact.mean()));
    const int k = static_cast<int>(probe.size());
    MomentStats s;
    s.mean = Vector(k);
    s.se = Vector::Zero(k);
    for (int j = 0; j < k; ++j) {
        s.mean[j] = adaptive_simpson(
            [&](double x) {
                return G(Vector::Constant(1, x))[j] * std::exp(exact.log_pdf(x));
            },
            lo, hi, QuadratureOptions{1e-10, 48});
    }
    return s;
}

}  // namespace

DiagnosticsReport functional_error(const SkewSymmetricApprox& approx, const SampleBatch& reference,
                                   const Functional& G, int m, std::uint64_t seed) {
    return functional_error_impl(approx, sample_moments(reference.points, G), G, m, seed,
                                 "samples");
}

DiagnosticsReport functional_error(const SkewSymmetricApprox& approx,
                                   const ExactPosterior& reference, const Functional& G, int m,
                                   std::uint64_t seed) {
    return functional_error_impl(approx, exact_moments(reference, G), G, m, seed, "exact");
}

DiagnosticsReport functional_error(const MarginalApprox& approx, const SampleBatch& reference,
                                   const Functional& G, int m, std::uint64_t seed) {
    return functional_error_impl(approx, sample_moments(reference.points, G), G, m, seed,
                                 "samples");
}

double ave_pr(const std::string& link_kind, const DataSet& data, const Matrix& reference_draws,
              const Matrix& approx_draws) {
    if (!data.covariates) throw DomainError("ave_pr requires covariates");
    if (reference_draws.rows() < 1 || approx_draws.rows() < 1)
        throw EmptyReference("ave_pr requires non-empty sample sets");
    if (reference_draws.cols() != data.ncov() || approx_draws.cols() != data.ncov())
        throw DomainError("ave_pr sample sets must match the covariate dimension");
    const bool probit = link_kind == "probit_gaussian" || link_kind == "probit";
    if (!probit && link_kind != "logit_gaussian" && link_kind != "logit")
        throw UnsupportedModel("ave_pr supports probit and logit links");
    auto link = [&](double w) { return probit ? std_normal_cdf(w) : logistic(w); };
    const Matrix& Z = *data.covariates;

    double total = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        double pr = 0.0;
        for (int r = 0; r < reference_draws.rows(); ++r)
            pr += link(Z.row(i).dot(reference_draws.row(r)));
        pr /= reference_draws.rows();
        double pr_hat = 0.0;
        for (int r = 0; r < approx_draws.rows(); ++r)
            pr_hat += link(Z.row(i).dot(approx_draws.row(r)));
        pr_hat /= approx_draws.rows();
        total += std::abs(pr - pr_hat);
    }
    return total / data.n();
}

nlohmann::json BoundResult::to_json() const {
    nlohmann::json doc;
    doc["c1_star"] = c1_star;
    doc["c2_star"] = c2_star;
    doc["m_n"] = m_n;
    doc["remainder"] = remainder;
    doc["bound"] = bound;
    doc["precondition_n_large"] = precondition_n_large;
    doc["precondition_c0"] = precondition_c0;
    doc["valid"] = valid;
    doc["failed"] = failed;
    return doc;
}

BoundResult nonasymptotic_bound(const BoundInputs& b) {
    if (!(b.L3 > 0.0) || !(b.L4 > 0.0) || !(b.L_pi2 > 0.0) || !(b.L_F_delta > 0.0) ||
        !(b.eta_bar1 > 0.0) || !(b.eta_bar2 > 0.0) || !(b.c0 > 0.0) || !(b.c5 > 0.0) ||
        b.d < 1 || !(b.n > 1.0))
        throw DomainError("bound inputs must be positive (and n > 1)");
    if (b.eta_bar1 > b.eta_bar2)
        throw DomainError("eta_bar1 must not exceed eta_bar2");

    BoundResult r;
    r.c1_star = 4.0 * b.L3 / 3.0 + 2.0 * b.L4 / 3.0 + 2.0 * b.L_pi2;
    r.c2_star = 16.0 * (2.0 + b.L_F_delta) * b.L3 * b.L3 / 9.0 +
                2.0 * 256.0 * b.L_F_delta * b.L_F_delta * std::pow(b.L3, 4) / 81.0 +
                2.0 * b.L4 / 3.0 + 2.0 * b.L_pi2;
    r.m_n = std::sqrt(b.c0 * std::log(b.n));

    const double d3 = std::pow(static_cast<double>(b.d), 3);
    const double lead = std::pow(r.m_n, 6) * d3 / b.n;
    r.remainder = 2.0 * r.c2_star + 2.0 * r.c2_star * r.c2_star * std::exp(1.0) * lead +
                  4.0 * std::pow(b.n, 1.0 - b.eta_bar1 * b.c0) +
                  2.0 * std::pow(b.n, 1.0 - 0.5 * b.c0 * b.c5 * b.d);
    r.bound = lead * r.remainder;

    // Sample-size condition: M_n^3 d^{3/2} / sqrt(n) below every envelope cap.
    const double lhs = std::pow(r.m_n, 3) * std::pow(static_cast<double>(b.d), 1.5) /
                       std::sqrt(b.n);
    const double cap = std::min(
        {1.0, 0.5 * b.delta,
         0.75 / b.L3 * std::min({b.delta, 0.5 / std::sqrt(b.L_F_delta), 0.25}),
         0.5 / r.c2_star});
    r.precondition_n_large = lhs <= cap;
    if (!r.precondition_n_large) r.failed.push_back("n_large");

    const double c0_floor = std::max(
        2.0 *
            (r.c1_star / b.d + b.L_pi_delta / b.d + 0.5 * std::log(b.eta_bar2 / (2.0 * M_PI)) -
             std::log(b.C_pi_delta / 2.0) / b.d) /
            b.c5,
        2.0 / b.eta_bar1);
    r.precondition_c0 = b.c0 >= c0_floor;
    if (!r.precondition_c0) r.failed.push_back("c0_floor");

    r.valid = r.precondition_n_large && r.precondition_c0;
    return r;
}

}  // namespace skewlap
