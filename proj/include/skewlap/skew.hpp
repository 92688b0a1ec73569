// Joint posterior approximations: the skew-modal density, its theoretical
// population version, and the Gaussian Laplace baseline. All three share one
// representation,
//
//     p(x) = 2 phi_d(x; center, Omega) F(A.(x-center)^3 + b.(x-center)),
//
// where F is a symmetric univariate cdf and the odd cubic polynomial carries
// the skewness. The Gaussian baseline has A = 0, b = 0, making the skewing
// factor identically 1/2.
#pragma once

#include "skewlap/map.hpp"
#include "skewlap/model.hpp"
#include "skewlap/tensor.hpp"
#include "skewlap/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace skewlap {

enum class SkewingKind { probit_cdf, inverse_logit };
enum class Parametrization { h_scale, theta_scale };
enum class Provenance { skew_modal, theoretical_sks, gaussian };

std::string to_string(SkewingKind k);
std::string to_string(Parametrization p);
std::string to_string(Provenance p);
SkewingKind skewing_from_string(const std::string& s);
Parametrization parametrization_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

// Univariate symmetric cdf with slope eta at zero: F(-x) = 1 - F(x) and
// F(x) = 1/2 + eta x + O(x^3).
struct SkewingFunction {
    SkewingKind kind = SkewingKind::probit_cdf;

    double eta() const;
    double cdf(double x) const;
    double log_cdf(double x) const;  // complementary forms, no tail underflow

    static SkewingFunction probit();
    static SkewingFunction inverse_logit();
};

class SkewSymmetricApprox {
public:
    Parametrization parametrization = Parametrization::theta_scale;
    Provenance provenance = Provenance::skew_modal;
    Vector center;        // xi for the theoretical version, theta_hat or 0 otherwise
    Matrix omega;         // covariance of the Gaussian factor
    SymTensor3 cubic;     // A
    Vector linear;        // b, nonzero only for the theoretical version
    SkewingFunction skewing;
    double n = 0.0;       // sample size entering the scaling

    // In-memory extras, not part of the serialized document.
    std::optional<Vector> anchor;         // theta value h = 0 maps to (h-scale only)
    std::vector<std::string> param_names; // CSV headers

    int dim() const { return static_cast<int>(center.size()); }

    // Odd polynomial alpha(u) = A.u^3 + b.u.
    double alpha(const Vector& u) const;

    double log_density(const Vector& point) const;

    // Gaussian-factor helpers used by samplers and box selection.
    const Matrix& chol_lower() const { return chol_lower_; }
    double log_det_omega() const { return log_det_omega_; }

    void finalize();  // factorizes omega; throws IndefiniteHessian

    nlohmann::json to_json() const;
    static SkewSymmetricApprox from_json(const nlohmann::json& doc);

private:
    Matrix chol_lower_;
    double log_det_omega_ = 0.0;
};

// Skew-modal approximation at the MAP. h-scale: center 0, Omega = (J/n)^{-1},
// cubic = third/(12 eta sqrt(n) n). theta-scale: center theta_hat,
// Omega = J^{-1}, cubic = third/(12 eta). Both describe the same
// distribution under h = sqrt(n)(theta - theta_hat).
SkewSymmetricApprox build_skew_modal(const ModelSpec& model, const DataSet& data,
                                     const MapResult& map, SkewingFunction skewing,
                                     Parametrization scale);

// Population version centered at a given theta_star; h-scale only, with
// location xi = sqrt(n) J^{-1} (score + prior score) and a linear skewing
// term 3 A xi xi. The precision matrix includes the third-order correction
// and may fail to be positive definite, which is reported, not repaired.
SkewSymmetricApprox build_theoretical_sks(const ModelSpec& model, const DataSet& data,
                                          const Vector& theta_star, SkewingFunction skewing);

// Gaussian Laplace baseline N(theta_hat, J^{-1}); cubic and linear are zero.
SkewSymmetricApprox build_gaussian_laplace(const MapResult& map, Parametrization scale);

double log_density(const SkewSymmetricApprox& approx, const Vector& point);

}  // namespace skewlap
