#include "skewlap/skew.hpp"

#include "skewlap/special.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace skewlap {

std::string to_string(SkewingKind k) {
    return k == SkewingKind::probit_cdf ? "probit_cdf" : "inverse_logit";
}

std::string to_string(Parametrization p) {
    return p == Parametrization::h_scale ? "h" : "theta";
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::skew_modal: return "skew_modal";
        case Provenance::theoretical_sks: return "theoretical_sks";
        default: return "gaussian";
    }
}

SkewingKind skewing_from_string(const std::string& s) {
    if (s == "probit_cdf") return SkewingKind::probit_cdf;
    if (s == "inverse_logit") return SkewingKind::inverse_logit;
    throw ConfigError("unknown skewing function: " + s);
}

Parametrization parametrization_from_string(const std::string& s) {
    if (s == "h" || s == "h_scale") return Parametrization::h_scale;
    if (s == "theta" || s == "theta_scale") return Parametrization::theta_scale;
    throw ConfigError("unknown parametrization: " + s);
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "skew_modal") return Provenance::skew_modal;
    if (s == "theoretical_sks") return Provenance::theoretical_sks;
    if (s == "gaussian") return Provenance::gaussian;
    throw ConfigError("unknown provenance: " + s);
}

double SkewingFunction::eta() const {
    return kind == SkewingKind::probit_cdf ? 1.0 / kSqrt2Pi : 0.25;
}

double SkewingFunction::cdf(double x) const {
    return kind == SkewingKind::probit_cdf ? std_normal_cdf(x) : logistic(x);
}

double SkewingFunction::log_cdf(double x) const {
    return kind == SkewingKind::probit_cdf ? std_normal_log_cdf(x) : log_logistic(x);
}

SkewingFunction SkewingFunction::probit() { return SkewingFunction{SkewingKind::probit_cdf}; }
SkewingFunction SkewingFunction::inverse_logit() {
    return SkewingFunction{SkewingKind::inverse_logit};
}

double SkewSymmetricApprox::alpha(const Vector& u) const {
    double a = cubic.contract3(u);
    if (linear.size() > 0) a += linear.dot(u);
    return a;
}

void SkewSymmetricApprox::finalize() {
    Eigen::LLT<Matrix> llt(omega);
    if (llt.info() != Eigen::Success) {
        if (provenance == Provenance::theoretical_sks)
            throw IndefinitePrecision("theoretical-SKS precision matrix is not positive definite");
        throw IndefiniteHessian("approximation covariance is not positive definite");
    }
    chol_lower_ = llt.matrixL();
    log_det_omega_ = 0.0;
    for (int i = 0; i < chol_lower_.rows(); ++i)
        log_det_omega_ += 2.0 * std::log(chol_lower_(i, i));
}

double SkewSymmetricApprox::log_density(const Vector& point) const {
    const Vector u = point - center;
    const Vector w = chol_lower_.triangularView<Eigen::Lower>().solve(u);
    const double log_phi = -0.5 * dim() * kLog2Pi - 0.5 * log_det_omega_ - 0.5 * w.squaredNorm();
    if (provenance == Provenance::gaussian) return log_phi;  // log 2 + log F(0) = 0
    return std::log(2.0) + log_phi + skewing.log_cdf(alpha(u));
}

double log_density(const SkewSymmetricApprox& approx, const Vector& point) {
    return approx.log_density(point);
}

SkewSymmetricApprox build_skew_modal(const ModelSpec& model, const DataSet& data,
                                     const MapResult& map, SkewingFunction skewing,
                                     Parametrization scale) {
    if (!map.converged) throw DomainError("build_skew_modal requires a converged MAP");
    const int d = model.dim;
    const double n = map.n;
    const double eta = skewing.eta();

    DerivativeBundle db = derivatives(model, map.theta_hat, data, 3, /*include_prior=*/false);

    SkewSymmetricApprox a;
    a.provenance = Provenance::skew_modal;
    a.parametrization = scale;
    a.skewing = skewing;
    a.n = n;
    a.linear = Vector::Zero(d);
    a.anchor = map.theta_hat;
    a.param_names = model.param_names;

    Eigen::LLT<Matrix> llt(map.observed_info);
    if (llt.info() != Eigen::Success)
        throw IndefiniteHessian("observed information is not positive definite");
    const Matrix j_inv = llt.solve(Matrix::Identity(d, d));

    if (scale == Parametrization::h_scale) {
        a.center = Vector::Zero(d);
        a.omega = n * j_inv;  // (J/n)^{-1}
        a.cubic = db.third * (1.0 / (12.0 * eta * std::sqrt(n) * n));
    } else {
        a.center = map.theta_hat;
        a.omega = j_inv;
        a.cubic = db.third * (1.0 / (12.0 * eta));
    }
    a.omega = 0.5 * (a.omega + a.omega.transpose().eval());
    a.finalize();
    return a;
}

SkewSymmetricApprox build_theoretical_sks(const ModelSpec& model, const DataSet& data,
                                          const Vector& theta_star, SkewingFunction skewing) {
    model.require_admissible(theta_star);
    const int d = model.dim;
    const double n = data.n();
    const double sqrt_n = std::sqrt(n);
    const double eta = skewing.eta();

    DerivativeBundle lik = derivatives(model, theta_star, data, 3, /*include_prior=*/false);
    DerivativeBundle post = derivatives(model, theta_star, data, 1, /*include_prior=*/true);

    Matrix j = -lik.hessian;  // observed information of the likelihood
    j = 0.5 * (j + j.transpose().eval());
    Eigen::LLT<Matrix> llt_j(j);
    if (llt_j.info() != Eigen::Success)
        throw IndefinitePrecision("observed information at theta_star is not positive definite");

    // xi = n J^{-1} u with u = (score + prior score)/sqrt(n).
    const Vector xi = sqrt_n * llt_j.solve(post.grad);

    // Omega^{-1} = J/n - (third contracted with xi in one slot)/(n sqrt(n)).
    Matrix correction = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s)
        for (int t = s; t < d; ++t) {
            double acc = 0.0;
            for (int l = 0; l < d; ++l) acc += lik.third.at(s, t, l) * xi[l];
            correction(s, t) = acc;
            correction(t, s) = acc;
        }
    Matrix omega_inv = j / n - correction / (n * sqrt_n);
    omega_inv = 0.5 * (omega_inv + omega_inv.transpose().eval());

    Eigen::LLT<Matrix> llt_prec(omega_inv);
    if (llt_prec.info() != Eigen::Success)
        throw IndefinitePrecision("theoretical-SKS precision matrix is not positive definite");

    SkewSymmetricApprox a;
    a.provenance = Provenance::theoretical_sks;
    a.parametrization = Parametrization::h_scale;
    a.skewing = skewing;
    a.n = n;
    a.center = xi;
    a.omega = llt_prec.solve(Matrix::Identity(d, d));
    a.omega = 0.5 * (a.omega + a.omega.transpose().eval());
    a.cubic = lik.third * (1.0 / (12.0 * eta * sqrt_n * n));
    a.linear = 3.0 * a.cubic.contract2(xi, xi);
    a.anchor = theta_star;
    a.param_names = model.param_names;
    a.finalize();
    return a;
}

SkewSymmetricApprox build_gaussian_laplace(const MapResult& map, Parametrization scale) {
    const int d = static_cast<int>(map.theta_hat.size());
    const double n = map.n;

    Eigen::LLT<Matrix> llt(map.observed_info);
    if (llt.info() != Eigen::Success)
        throw IndefiniteHessian("observed information is not positive definite");
    const Matrix j_inv = llt.solve(Matrix::Identity(d, d));

    SkewSymmetricApprox a;
    a.provenance = Provenance::gaussian;
    a.parametrization = scale;
    a.n = n;
    a.cubic = SymTensor3(d);
    a.linear = Vector::Zero(d);
    a.anchor = map.theta_hat;
    if (scale == Parametrization::h_scale) {
        a.center = Vector::Zero(d);
        a.omega = n * j_inv;
    } else {
        a.center = map.theta_hat;
        a.omega = j_inv;
    }
    a.omega = 0.5 * (a.omega + a.omega.transpose().eval());
    a.finalize();
    return a;
}

nlohmann::json SkewSymmetricApprox::to_json() const {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["parametrization"] = skewlap::to_string(parametrization);
    doc["provenance"] = skewlap::to_string(provenance);
    doc["n"] = n;
    doc["center"] = std::vector<double>(center.data(), center.data() + center.size());
    std::vector<double> om(omega.size());
    for (int i = 0; i < omega.rows(); ++i)
        for (int j = 0; j < omega.cols(); ++j) om[i * omega.cols() + j] = omega(i, j);
    doc["omega"] = om;
    nlohmann::json entries = nlohmann::json::array();
    cubic.for_each([&](int s, int t, int l, double v) {
        if (v != 0.0)
            entries.push_back({{"i", s + 1}, {"j", t + 1}, {"k", l + 1}, {"value", v}});
    });
    doc["cubic"] = entries;
    doc["linear"] = std::vector<double>(linear.data(), linear.data() + linear.size());
    doc["skewing"] = skewlap::to_string(skewing.kind);
    return doc;
}

SkewSymmetricApprox SkewSymmetricApprox::from_json(const nlohmann::json& doc) {
    if (!doc.contains("format_version") || doc.at("format_version").get<int>() != 1)
        throw ConfigError("unsupported approximation document version");
    SkewSymmetricApprox a;
    a.parametrization = parametrization_from_string(doc.at("parametrization").get<std::string>());
    a.provenance = provenance_from_string(doc.at("provenance").get<std::string>());
    a.n = doc.at("n").get<double>();
    const auto center = doc.at("center").get<std::vector<double>>();
    const int d = static_cast<int>(center.size());
    a.center = Eigen::Map<const Vector>(center.data(), d);
    const auto om = doc.at("omega").get<std::vector<double>>();
    if (static_cast<int>(om.size()) != d * d) throw ConfigError("omega size mismatch");
    a.omega = Matrix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a.omega(i, j) = om[i * d + j];
    a.cubic = SymTensor3(d);
    for (const auto& e : doc.at("cubic")) {
        const int i = e.at("i").get<int>() - 1;
        const int j = e.at("j").get<int>() - 1;
        const int k = e.at("k").get<int>() - 1;
        if (i < 0 || j < 0 || k < 0 || i >= d || j >= d || k >= d)
            throw ConfigError("cubic entry index out of range");
        a.cubic.at(i, j, k) = e.at("value").get<double>();
    }
    const auto lin = doc.at("linear").get<std::vector<double>>();
    if (static_cast<int>(lin.size()) != d) throw ConfigError("linear size mismatch");
    a.linear = Eigen::Map<const Vector>(lin.data(), d);
    a.skewing.kind = skewing_from_string(doc.at("skewing").get<std::string>());
    a.finalize();
    return a;
}

}  // namespace skewlap
