// Observed data container and CSV ingestion.
#pragma once

#include "skewlap/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skewlap {

// Immutable after construction; safe to share across threads.
struct DataSet {
    Vector responses;                       // length n
    std::optional<Matrix> covariates;       // n x p, regression models only
    std::vector<std::string> column_names;  // covariate labels, may be empty

    int n() const { return static_cast<int>(responses.size()); }
    int ncov() const { return covariates ? static_cast<int>(covariates->cols()) : 0; }

    static DataSet from_responses(Vector responses);
    static DataSet from_regression(Vector responses, Matrix covariates,
                                   std::vector<std::string> names = {});
};

// Header row required; `response_column` names the response; every remaining
// column is read as a numeric covariate in file order. With `add_intercept`
// a leading column of ones (named "(intercept)") is prepended.
DataSet load_csv(const std::string& path, const std::string& response_column,
                 bool add_intercept);

// Sample/reference ingestion: one column per coordinate, header required.
Matrix load_matrix_csv(const std::string& path);

// One row per draw, one column per coordinate. Values use the library-wide
// 17-significant-digit decimal format.
void write_matrix_csv(const std::string& path, const Matrix& points,
                      const std::vector<std::string>& column_names);

}  // namespace skewlap
