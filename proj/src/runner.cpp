#include "skewlap/runner.hpp"

#include "skewlap/bench.hpp"
#include "skewlap/dataset.hpp"
#include "skewlap/diagnostics.hpp"
#include "skewlap/json_io.hpp"
#include "skewlap/map.hpp"
#include "skewlap/marginal.hpp"
#include "skewlap/model.hpp"
#include "skewlap/sampler.hpp"
#include "skewlap/skew.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace skewlap {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

DataSet load_data(const json& doc) {
    reject_unknown_keys(doc, {"path", "response", "intercept", "responses", "covariates"},
                        "data");
    const bool intercept = doc.value("intercept", false);
    if (doc.contains("path")) {
        if (!doc.contains("response"))
            throw ConfigError("data.path requires data.response naming the response column");
        return load_csv(doc.at("path").get<std::string>(),
                        doc.at("response").get<std::string>(), intercept);
    }
    if (!doc.contains("responses")) throw ConfigError("data requires 'path' or 'responses'");
    const auto resp = doc.at("responses").get<std::vector<double>>();
    Vector responses = Eigen::Map<const Vector>(resp.data(), static_cast<int>(resp.size()));
    if (!doc.contains("covariates")) {
        if (intercept) throw ConfigError("intercept requires covariates");
        return DataSet::from_responses(std::move(responses));
    }
    const auto rows = doc.at("covariates").get<std::vector<std::vector<double>>>();
    if (rows.size() != resp.size())
        throw ConfigError("covariates must have one row per response");
    const int p_file = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    const int p = p_file + (intercept ? 1 : 0);
    Matrix cov(static_cast<int>(rows.size()), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != p_file)
            throw ConfigError("ragged covariate rows");
        int j = 0;
        if (intercept) cov(static_cast<int>(i), j++) = 1.0;
        for (int k = 0; k < p_file; ++k) cov(static_cast<int>(i), j++) = rows[i][k];
    }
    std::vector<std::string> names;
    if (intercept) names.push_back("(intercept)");
    for (int k = 0; k < p_file; ++k) names.push_back("x" + std::to_string(k + 1));
    return DataSet::from_regression(std::move(responses), std::move(cov), std::move(names));
}

ModelSpec load_model(const json& doc, const DataSet& data) {
    reject_unknown_keys(doc, {"kind", "prior_rate", "alpha", "beta", "prior_variance"}, "model");
    const std::string kind = doc.at("kind").get<std::string>();
    ModelSpec m;
    if (kind == "exponential_expprior") {
        m = exponential_expprior(doc.value("prior_rate", 1.0));
    } else if (kind == "gamma_poisson") {
        m = gamma_poisson(doc.value("alpha", 2.0), doc.value("beta", 1.0));
    } else if (kind == "probit_gaussian") {
        m = probit_gaussian(doc.value("prior_variance", 25.0), data.ncov());
    } else if (kind == "logit_gaussian") {
        m = logit_gaussian(doc.value("prior_variance", 25.0), data.ncov());
    } else {
        throw ConfigError("unknown model kind: " + kind);
    }
    if (!data.column_names.empty() &&
        static_cast<int>(data.column_names.size()) == m.dim && m.param_names.empty())
        m.param_names = data.column_names;
    m.validate(data);
    return m;
}

MapOptions load_map_options(const json& cfg) {
    MapOptions opts;
    if (!cfg.contains("map")) return opts;
    const json& doc = cfg.at("map");
    reject_unknown_keys(doc, {"init", "tol", "max_iter"}, "map");
    if (doc.contains("init")) {
        const auto v = doc.at("init").get<std::vector<double>>();
        opts.init = Eigen::Map<const Vector>(v.data(), static_cast<int>(v.size()));
    }
    if (doc.contains("tol")) opts.tol = doc.at("tol").get<double>();
    if (doc.contains("max_iter")) opts.max_iter = doc.at("max_iter").get<int>();
    return opts;
}

json vec_json(const Vector& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json map_summary(const MapResult& map) {
    json line;
    line["theta_hat"] = vec_json(map.theta_hat);
    double log_det = 0.0;
    Eigen::LLT<Matrix> llt(map.observed_info);
    for (int i = 0; i < map.observed_info.rows(); ++i)
        log_det += 2.0 * std::log(Matrix(llt.matrixL())(i, i));
    line["log_det_observed_info"] = log_det;
    line["converged"] = map.converged;
    line["iterations"] = map.iterations;
    line["grad_norm"] = map.grad_norm;
    return line;
}

std::vector<std::string> cmd_approx(const json& cfg, const RunOverrides& ov) {
    reject_unknown_keys(cfg,
                        {"model", "data", "approximation", "skewing", "scale", "theta_star",
                         "map", "out"},
                        "approx config");
    DataSet data = load_data(cfg.at("data"));
    ModelSpec model = load_model(cfg.at("model"), data);
    const std::string which = cfg.value("approximation", std::string("skew_modal"));
    const SkewingFunction skewing{skewing_from_string(cfg.value("skewing", std::string("probit_cdf")))};
    const Parametrization scale =
        parametrization_from_string(cfg.value("scale", std::string("theta")));

    SkewSymmetricApprox approx;
    json line;
    line["command"] = "approx";
    line["approximation"] = which;
    if (which == "theoretical_sks") {
        if (!cfg.contains("theta_star"))
            throw ConfigError("theoretical_sks requires theta_star");
        const auto v = cfg.at("theta_star").get<std::vector<double>>();
        const Vector theta_star = Eigen::Map<const Vector>(v.data(), static_cast<int>(v.size()));
        approx = build_theoretical_sks(model, data, theta_star, skewing);
        line["theta_star"] = vec_json(theta_star);
    } else {
        MapResult map = find_map(model, data, load_map_options(cfg));
        line.update(map_summary(map));
        if (which == "skew_modal") {
            approx = build_skew_modal(model, data, map, skewing, scale);
        } else if (which == "gaussian") {
            approx = build_gaussian_laplace(map, scale);
        } else {
            throw ConfigError("unknown approximation: " + which);
        }
    }
    const std::string out = ov.out.value_or(cfg.value("out", std::string()));
    if (!out.empty()) {
        write_text_file(out, dump_json(approx.to_json(), 2));
        line["out"] = out;
    }
    return {dump_json(line)};
}

std::vector<std::string> cmd_marginal(const json& cfg, const RunOverrides& ov) {
    reject_unknown_keys(cfg, {"model", "data", "indices", "skewing", "scale", "map", "out"},
                        "marginal config");
    DataSet data = load_data(cfg.at("data"));
    ModelSpec model = load_model(cfg.at("model"), data);
    const SkewingFunction skewing{skewing_from_string(cfg.value("skewing", std::string("probit_cdf")))};
    const Parametrization scale =
        parametrization_from_string(cfg.value("scale", std::string("theta")));
    std::vector<int> indices;
    for (int i : cfg.at("indices").get<std::vector<int>>()) indices.push_back(i - 1);

    MapResult map = find_map(model, data, load_map_options(cfg));
    MarginalApprox marg = build_marginal_skew_modal(model, data, map, indices, skewing, scale);

    json line = map_summary(map);
    line["command"] = "marginal";
    line["indices"] = cfg.at("indices");
    const std::string out = ov.out.value_or(cfg.value("out", std::string()));
    if (!out.empty()) {
        write_text_file(out, dump_json(marg.to_json(), 2));
        line["out"] = out;
    }
    return {dump_json(line)};
}

std::vector<std::string> cmd_sample(const json& cfg, const RunOverrides& ov) {
    reject_unknown_keys(cfg,
                        {"approx_path", "model", "data", "approximation", "skewing", "scale",
                         "theta_star", "map", "n_draws", "seed", "out"},
                        "sample config");
    const int m = static_cast<int>(ov.n_draws.value_or(cfg.value("n_draws", 1000)));
    const std::uint64_t seed = ov.seed.value_or(cfg.value("seed", 0ULL));
    const std::string out = ov.out.value_or(cfg.value("out", std::string()));
    if (out.empty()) throw ConfigError("sample requires an output CSV path");

    SampleBatch batch;
    std::vector<std::string> names;
    if (cfg.contains("approx_path")) {
        const json doc = parse_json(read_text_file(cfg.at("approx_path").get<std::string>()),
                                    "approximation document");
        if (doc.contains("indices")) {
            MarginalApprox marg = MarginalApprox::from_json(doc);
            batch = sample(marg, m, seed);
        } else {
            SkewSymmetricApprox approx = SkewSymmetricApprox::from_json(doc);
            batch = sample(approx, m, seed);
        }
    } else {
        DataSet data = load_data(cfg.at("data"));
        ModelSpec model = load_model(cfg.at("model"), data);
        const std::string which = cfg.value("approximation", std::string("skew_modal"));
        const SkewingFunction skewing{
            skewing_from_string(cfg.value("skewing", std::string("probit_cdf")))};
        const Parametrization scale =
            parametrization_from_string(cfg.value("scale", std::string("theta")));
        SkewSymmetricApprox approx;
        if (which == "theoretical_sks") {
            const auto v = cfg.at("theta_star").get<std::vector<double>>();
            approx = build_theoretical_sks(
                model, data, Eigen::Map<const Vector>(v.data(), static_cast<int>(v.size())),
                skewing);
        } else {
            MapResult map = find_map(model, data, load_map_options(cfg));
            approx = which == "gaussian" ? build_gaussian_laplace(map, scale)
                                         : build_skew_modal(model, data, map, skewing, scale);
        }
        names = approx.param_names;
        batch = sample(approx, m, seed);
    }
    write_matrix_csv(out, batch.points, names);

    json line;
    line["command"] = "sample";
    line["n_draws"] = m;
    line["seed"] = seed;
    line["out"] = out;
    line["approx_id"] = batch.approx_id;
    return {dump_json(line)};
}

Functional functional_from_name(const std::string& name) {
    if (name == "identity") return identity_functional();
    throw ConfigError("unknown functional: " + name);
}

std::vector<std::string> cmd_diagnose(const json& cfg, const RunOverrides& ov) {
    const std::string task = cfg.value("task", std::string());
    json line;
    line["command"] = "diagnose";
    line["task"] = task;

    if (task == "bound") {
        reject_unknown_keys(cfg, {"task", "inputs", "out"}, "diagnose config");
        const json& in = cfg.at("inputs");
        reject_unknown_keys(in,
                            {"L3", "L4", "L_pi2", "L_F_delta", "eta_bar1", "eta_bar2", "c0",
                             "c5", "d", "n", "delta", "L_pi_delta", "C_pi_delta"},
                            "bound inputs");
        BoundInputs b;
        b.L3 = in.value("L3", 1.0);
        b.L4 = in.value("L4", 1.0);
        b.L_pi2 = in.value("L_pi2", 1.0);
        b.L_F_delta = in.value("L_F_delta", 1.0);
        b.eta_bar1 = in.value("eta_bar1", 1.0);
        b.eta_bar2 = in.value("eta_bar2", 1.0);
        b.c0 = in.value("c0", 1.0);
        b.c5 = in.value("c5", 1.0);
        b.d = in.value("d", 1);
        b.n = in.value("n", 2.0);
        b.delta = in.value("delta", 1.0);
        b.L_pi_delta = in.value("L_pi_delta", 0.0);
        b.C_pi_delta = in.value("C_pi_delta", 2.0);
        const BoundResult res = nonasymptotic_bound(b);
        line["result"] = res.to_json();
        const std::string out = ov.out.value_or(cfg.value("out", std::string()));
        if (!out.empty()) {
            write_text_file(out, dump_json(line, 2));
            line["out"] = out;
        }
        return {dump_json(line)};
    }

    if (task == "tv") {
        reject_unknown_keys(cfg, {"task", "model", "data", "approximations", "skewing", "out"},
                            "diagnose config");
        DataSet data = load_data(cfg.at("data"));
        ModelSpec model = load_model(cfg.at("model"), data);
        const SkewingFunction skewing{
            skewing_from_string(cfg.value("skewing", std::string("probit_cdf")))};
        const ExactPosterior exact = exact_posterior(model.kind, data, model.prior_params);
        MapResult map = find_map(model, data);
        std::vector<std::string> which =
            cfg.value("approximations", std::vector<std::string>{"skew_modal", "gaussian"});
        json tvs;
        for (const auto& name : which) {
            SkewSymmetricApprox approx =
                name == "gaussian"
                    ? build_gaussian_laplace(map, Parametrization::theta_scale)
                    : build_skew_modal(model, data, map, skewing, Parametrization::theta_scale);
            const TvEstimate est = tv_exact_vs_approx(exact, approx);
            tvs[name] = {{"tv", est.value}, {"slack", est.slack}};
        }
        line["exact"] = {{"family", "gamma"}, {"shape", exact.shape}, {"rate", exact.rate}};
        line["tv"] = tvs;
        const std::string out = ov.out.value_or(cfg.value("out", std::string()));
        if (!out.empty()) {
            write_text_file(out, dump_json(line, 2));
            line["out"] = out;
        }
        return {dump_json(line)};
    }

    if (task == "functional" || task == "ave_pr") {
        reject_unknown_keys(cfg,
                            {"task", "model", "data", "approximation", "skewing", "scale",
                             "reference", "functional", "n_draws", "seed", "out"},
                            "diagnose config");
        DataSet data = load_data(cfg.at("data"));
        ModelSpec model = load_model(cfg.at("model"), data);
        const SkewingFunction skewing{
            skewing_from_string(cfg.value("skewing", std::string("probit_cdf")))};
        const int m = static_cast<int>(ov.n_draws.value_or(cfg.value("n_draws", 100000)));
        const std::uint64_t seed = ov.seed.value_or(cfg.value("seed", 0ULL));
        MapResult map = find_map(model, data);
        const std::string which = cfg.value("approximation", std::string("skew_modal"));
        SkewSymmetricApprox approx =
            which == "gaussian"
                ? build_gaussian_laplace(map, Parametrization::theta_scale)
                : build_skew_modal(model, data, map, skewing, Parametrization::theta_scale);

        const json& ref = cfg.at("reference");
        reject_unknown_keys(ref, {"kind", "path"}, "reference");
        const std::string ref_kind = ref.at("kind").get<std::string>();

        if (task == "ave_pr") {
            if (ref_kind != "samples")
                throw ConfigError("ave_pr requires reference samples");
            const Matrix ref_draws = load_matrix_csv(ref.at("path").get<std::string>());
            if (ref_draws.cols() != model.dim)
                throw ConfigError("reference samples have wrong dimension");
            const SampleBatch draws = sample(approx, m, seed);
            line["ave_pr"] = ave_pr(model.kind, data, ref_draws, draws.points);
        } else {
            const Functional G =
                functional_from_name(cfg.value("functional", std::string("identity")));
            DiagnosticsReport rep;
            if (ref_kind == "samples") {
                SampleBatch reference;
                reference.points = load_matrix_csv(ref.at("path").get<std::string>());
                rep = functional_error(approx, reference, G, m, seed);
            } else if (ref_kind == "exact") {
                rep = functional_error(approx, exact_posterior(model.kind, data, model.prior_params),
                                       G, m, seed);
            } else {
                throw ConfigError("unknown reference kind: " + ref_kind);
            }
            line["report"] = rep.to_json();
        }
        const std::string out = ov.out.value_or(cfg.value("out", std::string()));
        if (!out.empty()) {
            write_text_file(out, dump_json(line, 2));
            line["out"] = out;
        }
        return {dump_json(line)};
    }

    throw ConfigError("diagnose requires task in {tv, functional, ave_pr, bound}");
}

std::vector<std::string> cmd_bench(const json& cfg, const RunOverrides& ov) {
    json study = cfg;
    std::string out_json, out_csv;
    if (study.contains("out_json")) {
        out_json = study.at("out_json").get<std::string>();
        study.erase("out_json");
    }
    if (study.contains("out_csv")) {
        out_csv = study.at("out_csv").get<std::string>();
        study.erase("out_csv");
    }
    StudyConfig sc = study_config_from_json(study);
    if (ov.seed) sc.base_seed = *ov.seed;
    if (ov.jobs) sc.jobs = *ov.jobs;
    if (ov.out) out_json = *ov.out;

    const StudyReport report = run_study(sc);
    const json doc = report_to_json(report);
    if (!out_json.empty()) write_text_file(out_json, dump_json(doc, 2));
    if (!out_csv.empty()) write_report_csv(report, out_csv);

    json line;
    line["command"] = "bench";
    line["theta_star"] = report.theta_star;
    line["slope"] = doc.value("slope", json::object());
    if (doc.contains("equal_accuracy")) line["equal_accuracy"] = doc.at("equal_accuracy");
    if (!out_json.empty()) line["out_json"] = out_json;
    if (!out_csv.empty()) line["out_csv"] = out_csv;
    return {dump_json(line)};
}

}  // namespace

std::vector<std::string> run_command(const std::string& command, const std::string& config_json,
                                     const RunOverrides& overrides) {
    const json cfg = parse_json(config_json, "config");
    if (command == "approx") return cmd_approx(cfg, overrides);
    if (command == "sample") return cmd_sample(cfg, overrides);
    if (command == "marginal") return cmd_marginal(cfg, overrides);
    if (command == "diagnose") return cmd_diagnose(cfg, overrides);
    if (command == "bench") return cmd_bench(cfg, overrides);
    throw ConfigError("unknown command: " + command);
}

}  // namespace skewlap
