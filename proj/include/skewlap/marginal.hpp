// Closed-form marginal skew-modal approximation for an index set C. The
// complement block is integrated out of the joint construction analytically,
// leaving a d_C-dimensional skew-symmetric density whose odd polynomial picks
// up a linear coefficient nu1 and a cubic coefficient nu3 from the Gaussian
// conditional moments of the complement.
#pragma once

#include "skewlap/map.hpp"
#include "skewlap/model.hpp"
#include "skewlap/skew.hpp"
#include "skewlap/tensor.hpp"
#include "skewlap/types.hpp"

#include <json.hpp>

#include <vector>

namespace skewlap {

class MarginalApprox {
public:
    std::vector<int> indices;   // 0-based, strictly increasing subset of 0..d-1
    Parametrization parametrization = Parametrization::theta_scale;
    Vector center;              // theta_hat_C in theta-scale, 0 in h-scale
    Matrix omega_cc;            // covariance block in the chosen scale
    Vector nu1;                 // linear coefficient, raw scale
    SymTensor3 nu3;             // cubic coefficient, raw scale
    SkewingFunction skewing;
    double n = 0.0;

    std::vector<std::string> param_names;

    int dim() const { return static_cast<int>(indices.size()); }

    // alpha_C(u): {1/(12 eta sqrt(n))}(1/n)(nu1.u + nu3.u^3) in h-scale;
    // {1/(12 eta)}{(nu1/n).u + nu3.u^3} in theta-scale.
    double alpha(const Vector& u) const;

    double log_density(const Vector& point) const;

    const Matrix& chol_lower() const { return chol_lower_; }
    double log_det_omega() const { return log_det_omega_; }

    void finalize();

    nlohmann::json to_json() const;
    static MarginalApprox from_json(const nlohmann::json& doc);

private:
    Matrix chol_lower_;
    double log_det_omega_ = 0.0;
};

// indices are 0-based here; the CLI surfaces them 1-based.
MarginalApprox build_marginal_skew_modal(const ModelSpec& model, const DataSet& data,
                                         const MapResult& map, const std::vector<int>& indices,
                                         SkewingFunction skewing, Parametrization scale);

double marginal_log_density(const MarginalApprox& m, const Vector& point);

}  // namespace skewlap
