#include "skewlap/marginal.hpp"

#include "skewlap/special.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace skewlap {

double MarginalApprox::alpha(const Vector& u) const {
    const double eta = skewing.eta();
    const double cubic_part = nu3.contract3(u);
    const double linear_part = nu1.dot(u);
    if (parametrization == Parametrization::h_scale)
        return (linear_part + cubic_part) / (12.0 * eta * std::sqrt(n) * n);
    return (linear_part / n + cubic_part) / (12.0 * eta);
}

void MarginalApprox::finalize() {
    Eigen::LLT<Matrix> llt(omega_cc);
    if (llt.info() != Eigen::Success)
        throw IndefiniteHessian("marginal covariance block is not positive definite");
    chol_lower_ = llt.matrixL();
    log_det_omega_ = 0.0;
    for (int i = 0; i < chol_lower_.rows(); ++i)
        log_det_omega_ += 2.0 * std::log(chol_lower_(i, i));
}

double MarginalApprox::log_density(const Vector& point) const {
    const Vector u = point - center;
    const Vector w = chol_lower_.triangularView<Eigen::Lower>().solve(u);
    const double log_phi = -0.5 * dim() * kLog2Pi - 0.5 * log_det_omega_ - 0.5 * w.squaredNorm();
    return std::log(2.0) + log_phi + skewing.log_cdf(alpha(u));
}

double marginal_log_density(const MarginalApprox& m, const Vector& point) {
    return m.log_density(point);
}

MarginalApprox build_marginal_skew_modal(const ModelSpec& model, const DataSet& data,
                                         const MapResult& map, const std::vector<int>& indices,
                                         SkewingFunction skewing, Parametrization scale) {
    const int d = model.dim;
    if (indices.empty()) throw BadIndexSet("marginal index set is empty");
    std::vector<int> idx = indices;
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw BadIndexSet("marginal index set has duplicates");
    if (idx.front() < 0 || idx.back() >= d)
        throw BadIndexSet("marginal index out of range 1.." + std::to_string(d));
    if (!map.converged) throw DomainError("build_marginal_skew_modal requires a converged MAP");

    const int dc = static_cast<int>(idx.size());
    const double n = map.n;

    std::vector<int> comp;
    for (int i = 0; i < d; ++i)
        if (!std::binary_search(idx.begin(), idx.end(), i)) comp.push_back(i);
    const int db = static_cast<int>(comp.size());

    // h-scale joint covariance (J/n)^{-1}, partitioned over (C, complement).
    Eigen::LLT<Matrix> llt(Matrix(map.observed_info / n));
    if (llt.info() != Eigen::Success)
        throw IndefiniteHessian("observed information is not positive definite");
    const Matrix omega_hat = llt.solve(Matrix::Identity(d, d));

    Matrix occ(dc, dc), obc(db, dc), obb(db, db);
    for (int i = 0; i < dc; ++i)
        for (int j = 0; j < dc; ++j) occ(i, j) = omega_hat(idx[i], idx[j]);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < dc; ++j) obc(i, j) = omega_hat(comp[i], idx[j]);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) obb(i, j) = omega_hat(comp[i], comp[j]);

    Eigen::LLT<Matrix> llt_cc(occ);
    if (llt_cc.info() != Eigen::Success)
        throw IndefiniteHessian("selected covariance block is not positive definite");
    const Matrix lambda = llt_cc.solve(obc.transpose()).transpose();  // (d-dc) x dc
    const Matrix schur = obb - lambda * obc.transpose();              // conditional covariance

    DerivativeBundle db3 = derivatives(model, map.theta_hat, data, 3, /*include_prior=*/false);
    const SymTensor3& third = db3.third;

    // Map full indices onto C through M: identity rows on C, Lambda rows on
    // the complement. Contracting all three tensor slots with M reproduces
    // the four-term expansion over (C, complement) splits in one sweep, and
    // yields an exactly symmetric nu3.
    Matrix mmat = Matrix::Zero(d, dc);
    for (int i = 0; i < dc; ++i) mmat(idx[i], i) = 1.0;
    for (int i = 0; i < db; ++i) mmat.row(comp[i]) = lambda.row(i);

    // nu1_s = 3 sum_a M_as sum_{r,v in comp} third_{a r v} schur_{r v}.
    Vector g = Vector::Zero(d);
    for (int a = 0; a < d; ++a) {
        double acc = 0.0;
        for (int ri = 0; ri < db; ++ri)
            for (int vi = 0; vi < db; ++vi)
                acc += third.at(a, comp[ri], comp[vi]) * schur(ri, vi);
        g[a] = acc;
    }
    Vector nu1 = 3.0 * (mmat.transpose() * g);

    // nu3_stl = sum_{abc} third_{abc} M_as M_bt M_cl, built by progressive
    // single-slot contraction.
    std::vector<Matrix> w1(d);  // w1[a](b -> l) = sum_c third_{a b c} M_cl
    for (int a = 0; a < d; ++a) {
        Matrix wa = Matrix::Zero(d, dc);
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                const double v = third.at(a, b, c);
                if (v != 0.0) wa.row(b) += v * mmat.row(c);
            }
        w1[a] = std::move(wa);
    }
    SymTensor3 nu3(dc);
    for (int l = 0; l < dc; ++l)
        for (int t = 0; t <= l; ++t)
            for (int s = 0; s <= t; ++s) {
                double acc = 0.0;
                for (int a = 0; a < d; ++a) {
                    double inner = 0.0;
                    for (int b = 0; b < d; ++b) inner += mmat(b, t) * w1[a](b, l);
                    acc += mmat(a, s) * inner;
                }
                nu3.at(s, t, l) = acc;
            }

    MarginalApprox m;
    m.indices = idx;
    m.parametrization = scale;
    m.skewing = skewing;
    m.n = n;
    m.nu1 = std::move(nu1);
    m.nu3 = std::move(nu3);
    if (scale == Parametrization::h_scale) {
        m.center = Vector::Zero(dc);
        m.omega_cc = occ;
    } else {
        Vector c(dc);
        for (int i = 0; i < dc; ++i) c[i] = map.theta_hat[idx[i]];
        m.center = std::move(c);
        m.omega_cc = occ / n;  // block of J^{-1}, the inverse-then-block matrix
    }
    m.omega_cc = 0.5 * (m.omega_cc + m.omega_cc.transpose().eval());
    for (int i : idx)
        if (i < static_cast<int>(model.param_names.size()))
            m.param_names.push_back(model.param_names[i]);
    m.finalize();
    return m;
}

nlohmann::json MarginalApprox::to_json() const {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["parametrization"] = skewlap::to_string(parametrization);
    doc["n"] = n;
    std::vector<int> idx1;
    for (int i : indices) idx1.push_back(i + 1);
    doc["indices"] = idx1;
    doc["center"] = std::vector<double>(center.data(), center.data() + center.size());
    std::vector<double> om(omega_cc.size());
    for (int i = 0; i < omega_cc.rows(); ++i)
        for (int j = 0; j < omega_cc.cols(); ++j) om[i * omega_cc.cols() + j] = omega_cc(i, j);
    doc["omega"] = om;
    doc["nu1"] = std::vector<double>(nu1.data(), nu1.data() + nu1.size());
    nlohmann::json entries = nlohmann::json::array();
    nu3.for_each([&](int s, int t, int l, double v) {
        if (v != 0.0)
            entries.push_back({{"i", s + 1}, {"j", t + 1}, {"k", l + 1}, {"value", v}});
    });
    doc["nu3"] = entries;
    doc["skewing"] = skewlap::to_string(skewing.kind);
    return doc;
}

MarginalApprox MarginalApprox::from_json(const nlohmann::json& doc) {
    if (!doc.contains("format_version") || doc.at("format_version").get<int>() != 1)
        throw ConfigError("unsupported marginal document version");
    MarginalApprox m;
    m.parametrization = parametrization_from_string(doc.at("parametrization").get<std::string>());
    m.n = doc.at("n").get<double>();
    for (int i : doc.at("indices").get<std::vector<int>>()) m.indices.push_back(i - 1);
    const auto center = doc.at("center").get<std::vector<double>>();
    const int dc = static_cast<int>(center.size());
    m.center = Eigen::Map<const Vector>(center.data(), dc);
    const auto om = doc.at("omega").get<std::vector<double>>();
    if (static_cast<int>(om.size()) != dc * dc) throw ConfigError("omega size mismatch");
    m.omega_cc = Matrix(dc, dc);
    for (int i = 0; i < dc; ++i)
        for (int j = 0; j < dc; ++j) m.omega_cc(i, j) = om[i * dc + j];
    const auto nu1 = doc.at("nu1").get<std::vector<double>>();
    m.nu1 = Eigen::Map<const Vector>(nu1.data(), dc);
    m.nu3 = SymTensor3(dc);
    for (const auto& e : doc.at("nu3")) {
        m.nu3.at(e.at("i").get<int>() - 1, e.at("j").get<int>() - 1, e.at("k").get<int>() - 1) =
            e.at("value").get<double>();
    }
    m.skewing.kind = skewing_from_string(doc.at("skewing").get<std::string>());
    m.finalize();
    return m;
}

}  // namespace skewlap
