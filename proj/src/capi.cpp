// extern-C shim over the C++ core: opaque handles, status codes, and a
// thread-local last-error slot.
#include "skewlap.h"

#include "skewlap/dataset.hpp"
#include "skewlap/diagnostics.hpp"
#include "skewlap/json_io.hpp"
#include "skewlap/map.hpp"
#include "skewlap/marginal.hpp"
#include "skewlap/model.hpp"
#include "skewlap/runner.hpp"
#include "skewlap/sampler.hpp"
#include "skewlap/skew.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct skewlap_dataset_s {
    skewlap::DataSet data;
};
struct skewlap_model_s {
    skewlap::ModelSpec model;
};
struct skewlap_map_s {
    skewlap::MapResult map;
};
struct skewlap_approx_s {
    skewlap::SkewSymmetricApprox approx;
};
struct skewlap_marginal_s {
    skewlap::MarginalApprox marginal;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

skewlap_status to_status(skewlap::ErrorCode code) {
    using EC = skewlap::ErrorCode;
    switch (code) {
        case EC::domain_error: return SKEWLAP_ERR_DOMAIN;
        case EC::indefinite_hessian: return SKEWLAP_ERR_INDEFINITE_HESSIAN;
        case EC::indefinite_precision: return SKEWLAP_ERR_INDEFINITE_PRECISION;
        case EC::unsupported_order: return SKEWLAP_ERR_UNSUPPORTED_ORDER;
        case EC::unsupported_model: return SKEWLAP_ERR_UNSUPPORTED_MODEL;
        case EC::bad_index_set: return SKEWLAP_ERR_BAD_INDEX_SET;
        case EC::non_finite_evaluation: return SKEWLAP_ERR_NON_FINITE;
        case EC::resolution_exceeded: return SKEWLAP_ERR_RESOLUTION;
        case EC::metric_missing: return SKEWLAP_ERR_METRIC_MISSING;
        case EC::empty_reference: return SKEWLAP_ERR_EMPTY_REFERENCE;
        case EC::config_error: return SKEWLAP_ERR_CONFIG;
        case EC::io_error: return SKEWLAP_ERR_IO;
    }
    return SKEWLAP_ERR_INTERNAL;
}

skewlap_status fail(skewlap_status status, const std::string& message) {
    g_last_error = message;
    nlohmann::json doc;
    doc["code"] = skewlap_status_name(status);
    doc["message"] = message;
    g_last_error_json = skewlap::dump_json(doc);
    return status;
}

template <typename F>
skewlap_status guarded(F&& f) {
    try {
        f();
        return SKEWLAP_OK;
    } catch (const skewlap::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(SKEWLAP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SKEWLAP_ERR_INTERNAL, "unknown error");
    }
}

skewlap_status require(bool ok, const char* what) {
    return ok ? SKEWLAP_OK : fail(SKEWLAP_ERR_NULL_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* skewlap_version(void) { return "0.1.0"; }

const char* skewlap_status_name(skewlap_status status) {
    switch (status) {
        case SKEWLAP_OK: return "ok";
        case SKEWLAP_ERR_DOMAIN: return "domain_error";
        case SKEWLAP_ERR_INDEFINITE_HESSIAN: return "indefinite_hessian";
        case SKEWLAP_ERR_INDEFINITE_PRECISION: return "indefinite_precision";
        case SKEWLAP_ERR_UNSUPPORTED_ORDER: return "unsupported_order";
        case SKEWLAP_ERR_UNSUPPORTED_MODEL: return "unsupported_model";
        case SKEWLAP_ERR_BAD_INDEX_SET: return "bad_index_set";
        case SKEWLAP_ERR_NON_FINITE: return "non_finite_evaluation";
        case SKEWLAP_ERR_RESOLUTION: return "resolution_exceeded";
        case SKEWLAP_ERR_METRIC_MISSING: return "metric_missing";
        case SKEWLAP_ERR_EMPTY_REFERENCE: return "empty_reference";
        case SKEWLAP_ERR_CONFIG: return "config_error";
        case SKEWLAP_ERR_IO: return "io_error";
        case SKEWLAP_ERR_NULL_ARGUMENT: return "null_argument";
        default: return "internal_error";
    }
}

const char* skewlap_last_error(void) { return g_last_error.c_str(); }
const char* skewlap_last_error_json(void) { return g_last_error_json.c_str(); }

skewlap_status skewlap_dataset_create(const double* responses, size_t n, const double* covariates,
                                      size_t p, skewlap_dataset** out) {
    if (auto s = require(responses && out, "responses and out must be non-null")) return s;
    return guarded([&] {
        skewlap::Vector resp =
            Eigen::Map<const skewlap::Vector>(responses, static_cast<int>(n));
        if (covariates && p > 0) {
            skewlap::Matrix cov(static_cast<int>(n), static_cast<int>(p));
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < p; ++j)
                    cov(static_cast<int>(i), static_cast<int>(j)) = covariates[i * p + j];
            *out = new skewlap_dataset_s{
                skewlap::DataSet::from_regression(std::move(resp), std::move(cov))};
        } else {
            *out = new skewlap_dataset_s{skewlap::DataSet::from_responses(std::move(resp))};
        }
    });
}

skewlap_status skewlap_dataset_from_csv(const char* path, const char* response_column,
                                        int add_intercept, skewlap_dataset** out) {
    if (auto s = require(path && response_column && out, "path, response_column, out required"))
        return s;
    return guarded([&] {
        *out = new skewlap_dataset_s{
            skewlap::load_csv(path, response_column, add_intercept != 0)};
    });
}

void skewlap_dataset_free(skewlap_dataset* dataset) { delete dataset; }

size_t skewlap_dataset_n(const skewlap_dataset* dataset) {
    return dataset ? static_cast<size_t>(dataset->data.n()) : 0;
}

size_t skewlap_dataset_ncov(const skewlap_dataset* dataset) {
    return dataset ? static_cast<size_t>(dataset->data.ncov()) : 0;
}

skewlap_status skewlap_model_create(const char* kind, int dim, const double* prior_params,
                                    size_t n_params, skewlap_model** out) {
    if (auto s = require(kind && out, "kind and out must be non-null")) return s;
    return guarded([&] {
        const std::string k(kind);
        auto param = [&](size_t i, double fallback) {
            return prior_params && n_params > i ? prior_params[i] : fallback;
        };
        skewlap::ModelSpec model;
        if (k == "exponential_expprior") {
            model = skewlap::exponential_expprior(param(0, 1.0));
        } else if (k == "gamma_poisson") {
            model = skewlap::gamma_poisson(param(0, 2.0), param(1, 1.0));
        } else if (k == "probit_gaussian") {
            model = skewlap::probit_gaussian(param(0, 25.0), dim);
        } else if (k == "logit_gaussian") {
            model = skewlap::logit_gaussian(param(0, 25.0), dim);
        } else {
            throw skewlap::UnsupportedModel("unknown model kind: " + k);
        }
        *out = new skewlap_model_s{std::move(model)};
    });
}

void skewlap_model_free(skewlap_model* model) { delete model; }

int skewlap_model_dim(const skewlap_model* model) { return model ? model->model.dim : 0; }

skewlap_status skewlap_log_posterior_kernel(const skewlap_model* model,
                                            const skewlap_dataset* dataset, const double* theta,
                                            double* out) {
    if (auto s = require(model && dataset && theta && out, "all arguments must be non-null"))
        return s;
    return guarded([&] {
        const skewlap::Vector th =
            Eigen::Map<const skewlap::Vector>(theta, model->model.dim);
        *out = skewlap::log_posterior_kernel(model->model, th, dataset->data);
    });
}

skewlap_status skewlap_find_map(const skewlap_model* model, const skewlap_dataset* dataset,
                                const double* init, double tol, int max_iter, skewlap_map** out) {
    if (auto s = require(model && dataset && out, "model, dataset, out required")) return s;
    return guarded([&] {
        skewlap::MapOptions opts;
        if (init)
            opts.init = Eigen::Map<const skewlap::Vector>(init, model->model.dim);
        if (tol > 0.0) opts.tol = tol;
        if (max_iter > 0) opts.max_iter = max_iter;
        *out = new skewlap_map_s{skewlap::find_map(model->model, dataset->data, opts)};
    });
}

void skewlap_map_free(skewlap_map* map) { delete map; }

skewlap_status skewlap_map_theta(const skewlap_map* map, double* out) {
    if (auto s = require(map && out, "map and out required")) return s;
    const auto& th = map->map.theta_hat;
    std::memcpy(out, th.data(), sizeof(double) * th.size());
    return SKEWLAP_OK;
}

skewlap_status skewlap_map_observed_info(const skewlap_map* map, double* out) {
    if (auto s = require(map && out, "map and out required")) return s;
    const auto& info = map->map.observed_info;
    for (int i = 0; i < info.rows(); ++i)
        for (int j = 0; j < info.cols(); ++j) out[i * info.cols() + j] = info(i, j);
    return SKEWLAP_OK;
}

double skewlap_map_grad_norm(const skewlap_map* map) { return map ? map->map.grad_norm : 0.0; }
int skewlap_map_iterations(const skewlap_map* map) { return map ? map->map.iterations : 0; }
int skewlap_map_converged(const skewlap_map* map) {
    return map && map->map.converged ? 1 : 0;
}

skewlap_status skewlap_build_skew_modal(const skewlap_model* model,
                                        const skewlap_dataset* dataset, const skewlap_map* map,
                                        const char* skewing, const char* parametrization,
                                        skewlap_approx** out) {
    if (auto s = require(model && dataset && map && skewing && parametrization && out,
                         "all arguments must be non-null"))
        return s;
    return guarded([&] {
        *out = new skewlap_approx_s{skewlap::build_skew_modal(
            model->model, dataset->data, map->map,
            skewlap::SkewingFunction{skewlap::skewing_from_string(skewing)},
            skewlap::parametrization_from_string(parametrization))};
    });
}

skewlap_status skewlap_build_gaussian_laplace(const skewlap_map* map, const char* parametrization,
                                              skewlap_approx** out) {
    if (auto s = require(map && parametrization && out, "map, parametrization, out required"))
        return s;
    return guarded([&] {
        *out = new skewlap_approx_s{skewlap::build_gaussian_laplace(
            map->map, skewlap::parametrization_from_string(parametrization))};
    });
}

skewlap_status skewlap_build_theoretical_sks(const skewlap_model* model,
                                             const skewlap_dataset* dataset,
                                             const double* theta_star, const char* skewing,
                                             skewlap_approx** out) {
    if (auto s = require(model && dataset && theta_star && skewing && out,
                         "all arguments must be non-null"))
        return s;
    return guarded([&] {
        const skewlap::Vector ts =
            Eigen::Map<const skewlap::Vector>(theta_star, model->model.dim);
        *out = new skewlap_approx_s{skewlap::build_theoretical_sks(
            model->model, dataset->data, ts,
            skewlap::SkewingFunction{skewlap::skewing_from_string(skewing)})};
    });
}

skewlap_status skewlap_build_marginal(const skewlap_model* model, const skewlap_dataset* dataset,
                                      const skewlap_map* map, const int* indices_1based,
                                      size_t n_indices, const char* skewing,
                                      const char* parametrization, skewlap_marginal** out) {
    if (auto s = require(model && dataset && map && indices_1based && skewing && parametrization &&
                             out,
                         "all arguments must be non-null"))
        return s;
    return guarded([&] {
        std::vector<int> idx;
        for (size_t i = 0; i < n_indices; ++i) idx.push_back(indices_1based[i] - 1);
        *out = new skewlap_marginal_s{skewlap::build_marginal_skew_modal(
            model->model, dataset->data, map->map, idx,
            skewlap::SkewingFunction{skewlap::skewing_from_string(skewing)},
            skewlap::parametrization_from_string(parametrization))};
    });
}

void skewlap_approx_free(skewlap_approx* approx) { delete approx; }
void skewlap_marginal_free(skewlap_marginal* marginal) { delete marginal; }

int skewlap_approx_dim(const skewlap_approx* approx) {
    return approx ? approx->approx.dim() : 0;
}
int skewlap_marginal_dim(const skewlap_marginal* marginal) {
    return marginal ? marginal->marginal.dim() : 0;
}

skewlap_status skewlap_approx_log_density(const skewlap_approx* approx, const double* point,
                                          double* out) {
    if (auto s = require(approx && point && out, "approx, point, out required")) return s;
    return guarded([&] {
        const skewlap::Vector x =
            Eigen::Map<const skewlap::Vector>(point, approx->approx.dim());
        *out = approx->approx.log_density(x);
    });
}

skewlap_status skewlap_marginal_log_density(const skewlap_marginal* marginal, const double* point,
                                            double* out) {
    if (auto s = require(marginal && point && out, "marginal, point, out required")) return s;
    return guarded([&] {
        const skewlap::Vector x =
            Eigen::Map<const skewlap::Vector>(point, marginal->marginal.dim());
        *out = marginal->marginal.log_density(x);
    });
}

skewlap_status skewlap_approx_sample(const skewlap_approx* approx, size_t n_draws, uint64_t seed,
                                     double* out) {
    if (auto s = require(approx && out, "approx and out required")) return s;
    return guarded([&] {
        const auto batch = skewlap::sample(approx->approx, static_cast<int>(n_draws), seed);
        const int k = approx->approx.dim();
        for (int i = 0; i < batch.points.rows(); ++i)
            for (int j = 0; j < k; ++j) out[i * k + j] = batch.points(i, j);
    });
}

skewlap_status skewlap_marginal_sample(const skewlap_marginal* marginal, size_t n_draws,
                                       uint64_t seed, double* out) {
    if (auto s = require(marginal && out, "marginal and out required")) return s;
    return guarded([&] {
        const auto batch = skewlap::sample(marginal->marginal, static_cast<int>(n_draws), seed);
        const int k = marginal->marginal.dim();
        for (int i = 0; i < batch.points.rows(); ++i)
            for (int j = 0; j < k; ++j) out[i * k + j] = batch.points(i, j);
    });
}

skewlap_status skewlap_approx_to_json(const skewlap_approx* approx, char** out) {
    if (auto s = require(approx && out, "approx and out required")) return s;
    return guarded([&] { *out = dup_string(skewlap::dump_json(approx->approx.to_json(), 2)); });
}

skewlap_status skewlap_approx_from_json(const char* json, skewlap_approx** out) {
    if (auto s = require(json && out, "json and out required")) return s;
    return guarded([&] {
        *out = new skewlap_approx_s{skewlap::SkewSymmetricApprox::from_json(
            skewlap::parse_json(json, "approximation document"))};
    });
}

skewlap_status skewlap_marginal_to_json(const skewlap_marginal* marginal, char** out) {
    if (auto s = require(marginal && out, "marginal and out required")) return s;
    return guarded(
        [&] { *out = dup_string(skewlap::dump_json(marginal->marginal.to_json(), 2)); });
}

skewlap_status skewlap_marginal_from_json(const char* json, skewlap_marginal** out) {
    if (auto s = require(json && out, "json and out required")) return s;
    return guarded([&] {
        *out = new skewlap_marginal_s{skewlap::MarginalApprox::from_json(
            skewlap::parse_json(json, "marginal document"))};
    });
}

void skewlap_string_free(char* s) { std::free(s); }

skewlap_status skewlap_run_command(const char* command, const char* config_json,
                                   const skewlap_overrides* overrides, char** stdout_lines) {
    if (auto s = require(command && config_json && stdout_lines,
                         "command, config_json, stdout_lines required"))
        return s;
    return guarded([&] {
        skewlap::RunOverrides ov;
        if (overrides) {
            if (overrides->has_seed) ov.seed = overrides->seed;
            if (overrides->has_jobs) ov.jobs = overrides->jobs;
            if (overrides->has_n_draws) ov.n_draws = overrides->n_draws;
            if (overrides->out) ov.out = std::string(overrides->out);
        }
        const auto lines = skewlap::run_command(command, config_json, ov);
        std::string joined;
        for (const auto& line : lines) {
            joined += line;
            joined += '\n';
        }
        *stdout_lines = dup_string(joined);
    });
}

}  // extern "C"
