// The four builtin models with hand-derived analytic derivatives. Every
// formula here is gated by the finite-difference property suite in the tests.
#include "skewlap/model.hpp"
#include "skewlap/special.hpp"

#include <cmath>

namespace skewlap {

namespace {

void check_positive_responses(const DataSet& data) {
    for (int i = 0; i < data.n(); ++i)
        if (!(data.responses[i] > 0.0))
            throw DomainError("exponential model requires strictly positive responses");
}

void check_binary_responses(const DataSet& data) {
    if (!data.covariates) throw DomainError("regression model requires a covariate matrix");
    for (int i = 0; i < data.n(); ++i) {
        const double y = data.responses[i];
        if (y != 0.0 && y != 1.0)
            throw DomainError("binary model requires responses in {0,1}");
    }
}

void check_count_responses(const DataSet& data) {
    for (int i = 0; i < data.n(); ++i) {
        const double y = data.responses[i];
        if (y < 0.0 || y != std::floor(y))
            throw DomainError("Poisson model requires nonnegative integer responses");
    }
}

// Shared scaffolding for probit/logit: the log-likelihood is a sum of scalar
// link terms in the linear predictor w_i = z_i' theta, so every derivative
// tensor is sum_i c_i z_is z_it z_il ... with a per-observation weight.
struct LinkDerivs {
    double d1, d2, d3, d4;
};

template <typename PerObs>
ModelSpec make_binary_regression(const std::string& kind, double prior_variance, int dim,
                                 PerObs per_obs,
                                 std::function<double(double, double)> obs_loglik) {
    ModelSpec m;
    m.dim = dim;
    m.kind = kind;
    m.prior_params = Vector::Constant(1, prior_variance);
    m.in_domain = [](const Vector&) { return true; };
    m.check_data = [dim](const DataSet& data) {
        check_binary_responses(data);
        if (data.ncov() != dim)
            throw DomainError("covariate matrix has " + std::to_string(data.ncov()) +
                              " columns, model expects " + std::to_string(dim));
    };
    m.loglik = [obs_loglik](const Vector& theta, const DataSet& data) {
        const Matrix& Z = *data.covariates;
        double acc = 0.0;
        for (int i = 0; i < data.n(); ++i)
            acc += obs_loglik(Z.row(i).dot(theta), data.responses[i]);
        return acc;
    };
    const double pv = prior_variance;
    m.logprior = [pv, dim](const Vector& theta) {
        return -0.5 * dim * std::log(2.0 * M_PI * pv) - theta.squaredNorm() / (2.0 * pv);
    };
    m.logprior_grad = [pv](const Vector& theta) { return Vector(-theta / pv); };
    m.logprior_hess = [pv, dim](const Vector&) {
        return Matrix(-Matrix::Identity(dim, dim) / pv);
    };
    m.loglik_grad = [per_obs](const Vector& theta, const DataSet& data) {
        const Matrix& Z = *data.covariates;
        Vector g = Vector::Zero(theta.size());
        for (int i = 0; i < data.n(); ++i)
            g += per_obs(Z.row(i).dot(theta), data.responses[i]).d1 * Z.row(i).transpose();
        return g;
    };
    m.loglik_hess = [per_obs](const Vector& theta, const DataSet& data) {
        const Matrix& Z = *data.covariates;
        Matrix h = Matrix::Zero(theta.size(), theta.size());
        for (int i = 0; i < data.n(); ++i) {
            const double w = per_obs(Z.row(i).dot(theta), data.responses[i]).d2;
            h.noalias() += w * Z.row(i).transpose() * Z.row(i);
        }
        return h;
    };
    m.loglik_third = [per_obs](const Vector& theta, const DataSet& data) {
        const Matrix& Z = *data.covariates;
        const int d = static_cast<int>(theta.size());
        SymTensor3 t3(d);
        for (int i = 0; i < data.n(); ++i) {
            const double c = per_obs(Z.row(i).dot(theta), data.responses[i]).d3;
            for (int l = 0; l < d; ++l) {
                const double zl = Z(i, l);
                for (int t = 0; t <= l; ++t) {
                    const double ztl = Z(i, t) * zl;
                    for (int s = 0; s <= t; ++s) t3.at(s, t, l) += c * Z(i, s) * ztl;
                }
            }
        }
        return t3;
    };
    m.loglik_fourth = [per_obs](const Vector& theta, const DataSet& data) {
        const Matrix& Z = *data.covariates;
        const int d = static_cast<int>(theta.size());
        SymTensor4 t4(d);
        for (int i = 0; i < data.n(); ++i) {
            const double c = per_obs(Z.row(i).dot(theta), data.responses[i]).d4;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l <= k; ++l)
                    for (int t = 0; t <= l; ++t)
                        for (int s = 0; s <= t; ++s)
                            t4.at(s, t, l, k) += c * Z(i, s) * Z(i, t) * Z(i, l) * Z(i, k);
        }
        return t4;
    };
    m.default_init = [dim](const DataSet&) { return Vector(Vector::Zero(dim)); };
    return m;
}

}  // namespace

ModelSpec exponential_expprior(double rate_prior) {
    if (!(rate_prior > 0.0)) throw DomainError("prior rate must be positive");
    ModelSpec m;
    m.dim = 1;
    m.kind = "exponential_expprior";
    m.prior_params = Vector::Constant(1, rate_prior);
    m.param_names = {"theta"};
    m.in_domain = [](const Vector& th) { return th[0] > 0.0; };
    m.check_data = check_positive_responses;
    m.loglik = [](const Vector& th, const DataSet& data) {
        return data.n() * std::log(th[0]) - th[0] * data.responses.sum();
    };
    m.logprior = [rate_prior](const Vector& th) {
        return std::log(rate_prior) - rate_prior * th[0];
    };
    m.logprior_grad = [rate_prior](const Vector&) { return Vector(Vector::Constant(1, -rate_prior)); };
    m.logprior_hess = [](const Vector&) { return Matrix(Matrix::Zero(1, 1)); };
    m.loglik_grad = [](const Vector& th, const DataSet& data) {
        return Vector(Vector::Constant(1, data.n() / th[0] - data.responses.sum()));
    };
    m.loglik_hess = [](const Vector& th, const DataSet& data) {
        return Matrix(Matrix::Constant(1, 1, -data.n() / (th[0] * th[0])));
    };
    m.loglik_third = [](const Vector& th, const DataSet& data) {
        SymTensor3 t(1);
        t.at(0, 0, 0) = 2.0 * data.n() / (th[0] * th[0] * th[0]);
        return t;
    };
    m.loglik_fourth = [](const Vector& th, const DataSet& data) {
        SymTensor4 t(1);
        t.at(0, 0, 0, 0) = -6.0 * data.n() / std::pow(th[0], 4);
        return t;
    };
    m.default_init = [](const DataSet& data) {
        return Vector(Vector::Constant(1, data.n() / data.responses.sum()));
    };
    return m;
}

ModelSpec gamma_poisson(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("Gamma prior requires alpha, beta > 0");
    ModelSpec m;
    m.dim = 1;
    m.kind = "gamma_poisson";
    m.prior_params = Vector(2);
    m.prior_params << alpha, beta;
    m.param_names = {"theta"};
    m.in_domain = [](const Vector& th) { return th[0] > 0.0; };
    m.check_data = check_count_responses;
    // Data constant -sum(log x_i!) excluded throughout.
    m.loglik = [](const Vector& th, const DataSet& data) {
        return data.responses.sum() * std::log(th[0]) - data.n() * th[0];
    };
    m.logprior = [alpha, beta](const Vector& th) {
        return alpha * std::log(beta) - std::lgamma(alpha) + (alpha - 1.0) * std::log(th[0]) -
               beta * th[0];
    };
    m.logprior_grad = [alpha, beta](const Vector& th) {
        return Vector(Vector::Constant(1, (alpha - 1.0) / th[0] - beta));
    };
    m.logprior_hess = [alpha](const Vector& th) {
        return Matrix(Matrix::Constant(1, 1, -(alpha - 1.0) / (th[0] * th[0])));
    };
    m.loglik_grad = [](const Vector& th, const DataSet& data) {
        return Vector(Vector::Constant(1, data.responses.sum() / th[0] - data.n()));
    };
    m.loglik_hess = [](const Vector& th, const DataSet& data) {
        return Matrix(Matrix::Constant(1, 1, -data.responses.sum() / (th[0] * th[0])));
    };
    m.loglik_third = [](const Vector& th, const DataSet& data) {
        SymTensor3 t(1);
        t.at(0, 0, 0) = 2.0 * data.responses.sum() / (th[0] * th[0] * th[0]);
        return t;
    };
    m.loglik_fourth = [](const Vector& th, const DataSet& data) {
        SymTensor4 t(1);
        t.at(0, 0, 0, 0) = -6.0 * data.responses.sum() / std::pow(th[0], 4);
        return t;
    };
    m.default_init = [alpha, beta](const DataSet& data) {
        return Vector(
            Vector::Constant(1, (alpha + data.responses.sum()) / (beta + data.n())));
    };
    return m;
}

ModelSpec probit_gaussian(double prior_variance, int dim) {
    if (!(prior_variance > 0.0)) throw DomainError("prior variance must be positive");
    // d^k/dw^k log Phi(q w) with q = 2y-1, written via the inverse Mills
    // ratio lambda and its derivatives.
    auto per_obs = [](double w, double y) {
        const double q = y > 0.5 ? 1.0 : -1.0;
        const double u = q * w;
        const double lam = inverse_mills(u);
        const double lam1 = -u * lam - lam * lam;
        const double lam2 = -lam - u * lam1 - 2.0 * lam * lam1;
        const double lam3 = -2.0 * lam1 - u * lam2 - 2.0 * lam1 * lam1 - 2.0 * lam * lam2;
        return LinkDerivs{q * lam, lam1, q * lam2, lam3};
    };
    auto obs_loglik = [](double w, double y) {
        return std_normal_log_cdf(y > 0.5 ? w : -w);
    };
    return make_binary_regression("probit_gaussian", prior_variance, dim, per_obs, obs_loglik);
}

ModelSpec logit_gaussian(double prior_variance, int dim) {
    if (!(prior_variance > 0.0)) throw DomainError("prior variance must be positive");
    auto per_obs = [](double w, double y) {
        const double p = logistic(w);
        const double v = p * (1.0 - p);
        return LinkDerivs{y - p, -v, -v * (1.0 - 2.0 * p), -v * (1.0 - 6.0 * p + 6.0 * p * p)};
    };
    auto obs_loglik = [](double w, double y) {
        return y * w - (w >= 0.0 ? w + std::log1p(std::exp(-w)) : std::log1p(std::exp(w)));
    };
    return make_binary_regression("logit_gaussian", prior_variance, dim, per_obs, obs_loglik);
}

}  // namespace skewlap
