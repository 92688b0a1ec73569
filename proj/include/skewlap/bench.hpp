// Replicated simulation harness: draws datasets from a configurable
// generative process, fits every requested approximation on nested data
// prefixes over a sample-size grid, scores them against the conjugate exact
// posterior, and aggregates convergence slopes and equal-accuracy tables.
#pragma once

#include "skewlap/model.hpp"
#include "skewlap/sampler.hpp"
#include "skewlap/skew.hpp"
#include "skewlap/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace skewlap {

struct Generative {
    std::string kind = "exponential";  // exponential | lognormal | poisson
    double theta0 = 2.0;               // rate / mean for exponential and poisson
    double mu = -1.5, sigma = 1.0;     // lognormal parameters

    double draw(Rng& rng) const;
    double mean() const;
};

// Observations are drawn sequentially from one seeded stream, so a prefix of
// a longer run reproduces a shorter run exactly.
Vector generate_data(const Generative& gen, int n, std::uint64_t seed);

struct EqualAccuracyConfig {
    int step = 5;
    int cap = 2500;
};

struct StudyConfig {
    std::string model_kind = "exponential_expprior";
    Vector prior_params;  // model defaults when empty
    Generative generative;
    std::vector<int> grid;
    int replicates = 1;
    std::uint64_t base_seed = 0;
    std::vector<Provenance> approximations{Provenance::gaussian, Provenance::skew_modal};
    std::vector<std::string> metrics{"tv", "fmae"};
    SkewingKind skewing = SkewingKind::probit_cdf;
    std::optional<EqualAccuracyConfig> equal_accuracy;
    int jobs = 1;
};

struct StudyCell {
    int n = 0;
    int replicate = 0;
    std::string approx;
    std::string metric;
    double value = 0.0;
    bool ok = false;
};

struct MeanLogCurve {
    std::vector<int> ns;
    std::vector<double> mean_log;

    std::optional<double> at(int n) const;
};

struct EqualAccuracyEntry {
    int n = 0;
    std::optional<int> nbar;  // absent means unbounded(cap)
    int cap = 0;
};

struct StudyReport {
    StudyConfig config;
    double theta_star = 0.0;  // KL projection of the generative law onto the model
    std::vector<StudyCell> cells;
    // mean of log metric over replicates: metric -> approx -> curve
    std::map<std::string, std::map<std::string, MeanLogCurve>> mean_log;
    // least-squares slope of mean log metric against log n
    std::map<std::string, std::map<std::string, double>> slope;
    // dense Gaussian-baseline curves used by the equal-accuracy search
    std::map<std::string, MeanLogCurve> dense_gaussian;
    std::map<std::string, std::vector<EqualAccuracyEntry>> equal_accuracy;
};

// KL projection of the generative process onto the model family, found by
// golden-section minimization of the cross-entropy objective.
double kl_projection(const std::string& model_kind, const Generative& gen);

StudyReport run_study(const StudyConfig& cfg);

// Smallest n-bar on the dense grid at which the Gaussian baseline first
// matches the skewed approximation's mean metric at n; absent when the cap
// is reached first.
EqualAccuracyEntry equal_accuracy_n(const StudyReport& report, const std::string& metric, int n);

StudyConfig study_config_from_json(const nlohmann::json& doc);
nlohmann::json study_config_to_json(const StudyConfig& cfg);
nlohmann::json report_to_json(const StudyReport& report);
void write_report_csv(const StudyReport& report, const std::string& path);

// Sum in a fixed pairwise order so replicate aggregation is bit-reproducible.
double pairwise_sum(const std::vector<double>& values);

}  // namespace skewlap
