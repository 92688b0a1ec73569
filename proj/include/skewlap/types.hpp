// Core aliases and error types shared by every module.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace skewlap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error codes mirrored one-to-one by the C API.
enum class ErrorCode : int {
    domain_error = 1,
    indefinite_hessian = 2,
    indefinite_precision = 3,
    unsupported_order = 4,
    unsupported_model = 5,
    bad_index_set = 6,
    non_finite_evaluation = 7,
    resolution_exceeded = 8,
    metric_missing = 9,
    empty_reference = 10,
    config_error = 11,
    io_error = 12,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define SKEWLAP_DEFINE_ERROR(Name, code_value)                                       \
    class Name : public Error {                                                      \
    public:                                                                          \
        explicit Name(const std::string& what) : Error(ErrorCode::code_value, what) {} \
    }

SKEWLAP_DEFINE_ERROR(DomainError, domain_error);
SKEWLAP_DEFINE_ERROR(IndefiniteHessian, indefinite_hessian);
SKEWLAP_DEFINE_ERROR(IndefinitePrecision, indefinite_precision);
SKEWLAP_DEFINE_ERROR(UnsupportedOrder, unsupported_order);
SKEWLAP_DEFINE_ERROR(UnsupportedModel, unsupported_model);
SKEWLAP_DEFINE_ERROR(BadIndexSet, bad_index_set);
SKEWLAP_DEFINE_ERROR(NonFiniteEvaluation, non_finite_evaluation);
SKEWLAP_DEFINE_ERROR(ResolutionExceeded, resolution_exceeded);
SKEWLAP_DEFINE_ERROR(MetricMissing, metric_missing);
SKEWLAP_DEFINE_ERROR(EmptyReference, empty_reference);
SKEWLAP_DEFINE_ERROR(ConfigError, config_error);
SKEWLAP_DEFINE_ERROR(IoError, io_error);

#undef SKEWLAP_DEFINE_ERROR

}  // namespace skewlap
