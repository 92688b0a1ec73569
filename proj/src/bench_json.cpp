// JSON and CSV faces of the study harness.
#include "skewlap/bench.hpp"
#include "skewlap/json_io.hpp"

#include <set>
#include <sstream>

namespace skewlap {

namespace {

void reject_unknown_keys(const nlohmann::json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

StudyConfig study_config_from_json(const nlohmann::json& doc) {
    reject_unknown_keys(doc,
                        {"model", "prior_params", "generative", "grid", "replicates", "seed",
                         "approximations", "metrics", "skewing", "equal_accuracy", "jobs"},
                        "study config");
    StudyConfig cfg;
    if (!doc.contains("model") || !doc.contains("grid"))
        throw ConfigError("study config requires 'model' and 'grid'");
    cfg.model_kind = doc.at("model").get<std::string>();
    if (doc.contains("prior_params")) {
        const auto p = doc.at("prior_params").get<std::vector<double>>();
        cfg.prior_params = Eigen::Map<const Vector>(p.data(), static_cast<int>(p.size()));
    }
    if (doc.contains("generative")) {
        const auto& g = doc.at("generative");
        reject_unknown_keys(g, {"kind", "theta0", "mu", "sigma"}, "generative");
        cfg.generative.kind = g.at("kind").get<std::string>();
        if (g.contains("theta0")) cfg.generative.theta0 = g.at("theta0").get<double>();
        if (g.contains("mu")) cfg.generative.mu = g.at("mu").get<double>();
        if (g.contains("sigma")) cfg.generative.sigma = g.at("sigma").get<double>();
    }
    cfg.grid = doc.at("grid").get<std::vector<int>>();
    if (doc.contains("replicates")) cfg.replicates = doc.at("replicates").get<int>();
    if (doc.contains("seed")) cfg.base_seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("approximations")) {
        cfg.approximations.clear();
        for (const auto& a : doc.at("approximations"))
            cfg.approximations.push_back(provenance_from_string(a.get<std::string>()));
    }
    if (doc.contains("metrics")) cfg.metrics = doc.at("metrics").get<std::vector<std::string>>();
    if (doc.contains("skewing"))
        cfg.skewing = skewing_from_string(doc.at("skewing").get<std::string>());
    if (doc.contains("equal_accuracy")) {
        const auto& e = doc.at("equal_accuracy");
        reject_unknown_keys(e, {"step", "cap"}, "equal_accuracy");
        EqualAccuracyConfig ea;
        if (e.contains("step")) ea.step = e.at("step").get<int>();
        if (e.contains("cap")) ea.cap = e.at("cap").get<int>();
        cfg.equal_accuracy = ea;
    }
    if (doc.contains("jobs")) cfg.jobs = doc.at("jobs").get<int>();
    return cfg;
}

nlohmann::json study_config_to_json(const StudyConfig& cfg) {
    nlohmann::json doc;
    doc["model"] = cfg.model_kind;
    if (cfg.prior_params.size() > 0)
        doc["prior_params"] = std::vector<double>(cfg.prior_params.data(),
                                                  cfg.prior_params.data() + cfg.prior_params.size());
    nlohmann::json g;
    g["kind"] = cfg.generative.kind;
    if (cfg.generative.kind == "lognormal") {
        g["mu"] = cfg.generative.mu;
        g["sigma"] = cfg.generative.sigma;
    } else {
        g["theta0"] = cfg.generative.theta0;
    }
    doc["generative"] = g;
    doc["grid"] = cfg.grid;
    doc["replicates"] = cfg.replicates;
    doc["seed"] = cfg.base_seed;
    std::vector<std::string> approx;
    for (auto p : cfg.approximations) approx.push_back(to_string(p));
    doc["approximations"] = approx;
    doc["metrics"] = cfg.metrics;
    doc["skewing"] = to_string(cfg.skewing);
    if (cfg.equal_accuracy) {
        doc["equal_accuracy"] = {{"step", cfg.equal_accuracy->step},
                                 {"cap", cfg.equal_accuracy->cap}};
    }
    doc["jobs"] = cfg.jobs;
    return doc;
}

namespace {

nlohmann::json curve_to_json(const MeanLogCurve& c) {
    nlohmann::json doc;
    doc["n"] = c.ns;
    doc["mean_log"] = c.mean_log;
    return doc;
}

}  // namespace

nlohmann::json report_to_json(const StudyReport& report) {
    nlohmann::json doc;
    doc["config"] = study_config_to_json(report.config);
    doc["theta_star"] = report.theta_star;

    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        nlohmann::json cell;
        cell["n"] = c.n;
        cell["replicate"] = c.replicate;
        cell["approx"] = c.approx;
        cell["metric"] = c.metric;
        if (c.ok) {
            cell["value"] = c.value;
        } else {
            cell["value"] = nullptr;
        }
        cells.push_back(cell);
    }
    doc["cells"] = cells;

    nlohmann::json mean_log;
    for (const auto& [metric, by_approx] : report.mean_log) {
        for (const auto& [approx, curve] : by_approx)
            mean_log[metric][approx] = curve_to_json(curve);
    }
    doc["mean_log"] = mean_log;

    nlohmann::json slope;
    for (const auto& [metric, by_approx] : report.slope)
        for (const auto& [approx, s] : by_approx) slope[metric][approx] = s;
    doc["slope"] = slope;

    if (!report.dense_gaussian.empty()) {
        nlohmann::json dense;
        for (const auto& [metric, curve] : report.dense_gaussian)
            dense[metric] = curve_to_json(curve);
        doc["dense_gaussian"] = dense;
    }
    if (!report.equal_accuracy.empty()) {
        nlohmann::json ea;
        for (const auto& [metric, entries] : report.equal_accuracy) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& e : entries) {
                nlohmann::json row;
                row["n"] = e.n;
                if (e.nbar) {
                    row["nbar"] = *e.nbar;
                } else {
                    row["nbar"] = nullptr;
                    row["unbounded_cap"] = e.cap;
                }
                rows.push_back(row);
            }
            ea[metric] = rows;
        }
        doc["equal_accuracy"] = ea;
    }
    return doc;
}

void write_report_csv(const StudyReport& report, const std::string& path) {
    std::ostringstream out;
    out << "n,replicate,approx,metric,value\n";
    for (const auto& c : report.cells) {
        out << c.n << ',' << c.replicate << ',' << c.approx << ',' << c.metric << ','
            << (c.ok ? format_double(c.value) : "") << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace skewlap
