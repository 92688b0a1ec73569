#include "skewlap/bench.hpp"

#include "skewlap/diagnostics.hpp"
#include "skewlap/map.hpp"
#include "skewlap/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <thread>

namespace skewlap {

double Generative::draw(Rng& rng) const {
    if (kind == "exponential") {
        return -std::log(1.0 - rng.uniform()) / theta0;
    }
    if (kind == "lognormal") {
        double a, b;
        rng.normal_pair(a, b);  // one pair per observation, spare discarded
        return std::exp(mu + sigma * a);
    }
    if (kind == "poisson") {
        const double limit = std::exp(-theta0);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.uniform();
        } while (p > limit);
        return k - 1;
    }
    throw ConfigError("unknown generative process: " + kind);
}

double Generative::mean() const {
    if (kind == "exponential") return 1.0 / theta0;
    if (kind == "lognormal") return std::exp(mu + 0.5 * sigma * sigma);
    if (kind == "poisson") return theta0;
    throw ConfigError("unknown generative process: " + kind);
}

Vector generate_data(const Generative& gen, int n, std::uint64_t seed) {
    Rng rng(seed);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = gen.draw(rng);
    return x;
}

std::optional<double> MeanLogCurve::at(int n) const {
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] == n) return mean_log[i];
    return std::nullopt;
}

double pairwise_sum(const std::vector<double>& values) {
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo,
                                                              std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += values[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return values.empty() ? 0.0 : rec(0, values.size());
}

namespace {

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double tol = 1e-12, int max_iter = 400) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol * std::max(1.0, std::abs(a)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

ModelSpec build_model(const std::string& kind, const Vector& prior_params) {
    if (kind == "exponential_expprior")
        return exponential_expprior(prior_params.size() > 0 ? prior_params[0] : 1.0);
    if (kind == "gamma_poisson") {
        if (prior_params.size() >= 2) return gamma_poisson(prior_params[0], prior_params[1]);
        return gamma_poisson(2.0, 1.0);
    }
    throw ConfigError("bench supports the conjugate models only, got: " + kind);
}

// Posterior-mean error of a univariate theta-scale approximation, by
// quadrature; the Gaussian baseline's mean is its center exactly.
double fmae_of(const ExactPosterior& exact, const SkewSymmetricApprox& approx) {
    if (approx.provenance == Provenance::gaussian)
        return std::abs(exact.mean() - approx.center[0]);
    auto box = default_box(approx.center, approx.omega);
    const double mean = adaptive_simpson(
        [&](double x) { return x * std::exp(approx.log_density(Vector::Constant(1, x))); },
        box[0].first, box[0].second, QuadratureOptions{1e-10, 48});
    return std::abs(exact.mean() - mean);
}

// TV for the h-scale theoretical approximation: the exact posterior is
// mapped into h = sqrt(n)(theta - theta_star).
TvEstimate tv_theoretical(const ExactPosterior& exact, const SkewSymmetricApprox& approx,
                          double theta_star) {
    const double sqrt_n = std::sqrt(approx.n);
    auto box = default_box(approx.center, approx.omega);
    const double support_lo = -sqrt_n * theta_star;  // theta = 0
    box[0].first = std::max(box[0].first, support_lo + 1e-12);
    box[0].first = std::min(box[0].first, sqrt_n * (exact.quantile(1e-12) - theta_star));
    box[0].first = std::max(box[0].first, support_lo + 1e-12);
    box[0].second = std::max(box[0].second, sqrt_n * (exact.quantile(1.0 - 1e-12) - theta_star));
    auto log_p = [&](const Vector& h) {
        return exact.log_pdf(theta_star + h[0] / sqrt_n) - std::log(sqrt_n);
    };
    auto log_q = [&](const Vector& h) { return approx.log_density(h); };
    return tv_quadrature(log_p, log_q, box);
}

double fmae_theoretical(const ExactPosterior& exact, const SkewSymmetricApprox& approx,
                        double theta_star) {
    auto box = default_box(approx.center, approx.omega);
    const double mean_h = adaptive_simpson(
        [&](double h) { return h * std::exp(approx.log_density(Vector::Constant(1, h))); },
        box[0].first, box[0].second, QuadratureOptions{1e-10, 48});
    return std::abs(exact.mean() - (theta_star + mean_h / std::sqrt(approx.n)));
}

struct CellValue {
    double value = 0.0;
    bool ok = false;
};

// metric values for one (replicate, n, approximation) cell
CellValue evaluate_cell(const ExactPosterior& exact, const SkewSymmetricApprox& approx,
                        const std::string& metric, double theta_star) {
    CellValue out;
    const bool theoretical = approx.provenance == Provenance::theoretical_sks;
    if (metric == "tv") {
        out.value = theoretical ? tv_theoretical(exact, approx, theta_star).value
                                : tv_exact_vs_approx(exact, approx).value;
    } else if (metric == "fmae") {
        out.value = theoretical ? fmae_theoretical(exact, approx, theta_star)
                                : fmae_of(exact, approx);
    } else {
        throw ConfigError("unknown metric: " + metric);
    }
    out.ok = true;
    return out;
}

}  // namespace

double kl_projection(const std::string& model_kind, const Generative& gen) {
    const double m1 = gen.mean();
    if (model_kind == "exponential_expprior") {
        // cross-entropy up to constants: theta m1 - log theta
        return golden_minimize([&](double t) { return t * m1 - std::log(t); }, 1e-8, 1e6);
    }
    if (model_kind == "gamma_poisson") {
        // m1 log theta - theta maximized
        return golden_minimize([&](double t) { return t - m1 * std::log(t); }, 1e-8, 1e6);
    }
    throw ConfigError("KL projection implemented for the conjugate models only");
}

StudyReport run_study(const StudyConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigError("study grid is empty");
    if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()) ||
        std::adjacent_find(cfg.grid.begin(), cfg.grid.end()) != cfg.grid.end())
        throw ConfigError("study grid must be strictly increasing");
    if (cfg.replicates < 1) throw ConfigError("need at least one replicate");
    for (const auto& m : cfg.metrics)
        if (m != "tv" && m != "fmae") throw ConfigError("unknown metric: " + m);

    const ModelSpec model = build_model(cfg.model_kind, cfg.prior_params);

    StudyReport report;
    report.config = cfg;
    report.theta_star = kl_projection(cfg.model_kind, cfg.generative);

    // Every n any part of the study needs, in one sorted pass per replicate.
    std::set<int> all_ns(cfg.grid.begin(), cfg.grid.end());
    std::vector<int> dense_ns;
    if (cfg.equal_accuracy) {
        for (int n = cfg.equal_accuracy->step; n <= cfg.equal_accuracy->cap;
             n += cfg.equal_accuracy->step)
            dense_ns.push_back(n);
        all_ns.insert(dense_ns.begin(), dense_ns.end());
    }
    const std::vector<int> ns(all_ns.begin(), all_ns.end());
    const int n_max = ns.back();

    auto in_grid = [&](int n) {
        return std::binary_search(cfg.grid.begin(), cfg.grid.end(), n);
    };
    auto in_dense = [&](int n) {
        return cfg.equal_accuracy && n % cfg.equal_accuracy->step == 0 &&
               n <= cfg.equal_accuracy->cap;
    };

    struct RepResult {
        // grid cells in deterministic order
        std::vector<StudyCell> cells;
        // dense gaussian values per metric, aligned with dense_ns; NaN = failed
        std::map<std::string, std::vector<double>> dense;
    };
    std::vector<RepResult> results(cfg.replicates);

    auto run_replicate = [&](int r) {
        RepResult& res = results[r];
        for (const auto& metric : cfg.metrics)
            if (cfg.equal_accuracy)
                res.dense[metric].assign(dense_ns.size(), std::numeric_limits<double>::quiet_NaN());

        const std::uint64_t seed = split_seed(cfg.base_seed, static_cast<std::uint64_t>(r));
        const Vector draws = generate_data(cfg.generative, n_max, seed);

        for (int n : ns) {
            const bool want_grid = in_grid(n);
            const bool want_dense = in_dense(n);
            if (!want_grid && !want_dense) continue;

            DataSet data = DataSet::from_responses(draws.head(n));
            ExactPosterior exact = exact_posterior(cfg.model_kind, data, model.prior_params);

            MapResult map;
            bool map_ok = true;
            try {
                map = find_map(model, data);
                if (!map.converged) map_ok = false;
            } catch (const Error&) {
                map_ok = false;
            }

            auto record = [&](Provenance prov, const std::string& metric, CellValue v) {
                res.cells.push_back(
                    {n, r, to_string(prov), metric, v.ok ? v.value : 0.0, v.ok});
            };

            for (Provenance prov : cfg.approximations) {
                if (!want_grid && prov != Provenance::gaussian) continue;
                std::optional<SkewSymmetricApprox> approx;
                try {
                    if (prov == Provenance::gaussian) {
                        if (map_ok)
                            approx = build_gaussian_laplace(map, Parametrization::theta_scale);
                    } else if (prov == Provenance::skew_modal) {
                        if (map_ok)
                            approx = build_skew_modal(model, data, map,
                                                      SkewingFunction{cfg.skewing},
                                                      Parametrization::theta_scale);
                    } else {
                        approx = build_theoretical_sks(model, data,
                                                       Vector::Constant(1, report.theta_star),
                                                       SkewingFunction{cfg.skewing});
                    }
                } catch (const Error&) {
                    approx.reset();
                }
                for (const auto& metric : cfg.metrics) {
                    CellValue v;
                    if (approx) {
                        try {
                            v = evaluate_cell(exact, *approx, metric, report.theta_star);
                        } catch (const Error&) {
                            v.ok = false;
                        }
                    }
                    if (want_grid) record(prov, metric, v);
                    if (want_dense && prov == Provenance::gaussian && v.ok) {
                        const auto it = std::lower_bound(dense_ns.begin(), dense_ns.end(), n);
                        res.dense[metric][it - dense_ns.begin()] = v.value;
                    }
                }
            }
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (int r = 0; r < cfg.replicates; ++r) run_replicate(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                while (true) {
                    const int r = next.fetch_add(1);
                    if (r >= cfg.replicates) return;
                    run_replicate(r);
                }
            });
        for (auto& th : pool) th.join();
    }

    // Assemble cells and aggregates in replicate-index order.
    for (int r = 0; r < cfg.replicates; ++r)
        report.cells.insert(report.cells.end(), results[r].cells.begin(), results[r].cells.end());

    for (const auto& metric : cfg.metrics) {
        for (Provenance prov : cfg.approximations) {
            MeanLogCurve curve;
            for (int n : cfg.grid) {
                std::vector<double> logs;
                for (const auto& cell : report.cells) {
                    if (cell.n == n && cell.metric == metric && cell.approx == to_string(prov) &&
                        cell.ok && cell.value > 0.0)
                        logs.push_back(std::log(cell.value));
                }
                if (!logs.empty()) {
                    curve.ns.push_back(n);
                    curve.mean_log.push_back(pairwise_sum(logs) / logs.size());
                }
            }
            // least-squares slope against log n
            if (curve.ns.size() >= 2) {
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                const int k = static_cast<int>(curve.ns.size());
                for (int i = 0; i < k; ++i) {
                    const double x = std::log(static_cast<double>(curve.ns[i]));
                    sx += x;
                    sy += curve.mean_log[i];
                    sxx += x * x;
                    sxy += x * curve.mean_log[i];
                }
                report.slope[metric][to_string(prov)] =
                    (k * sxy - sx * sy) / (k * sxx - sx * sx);
            }
            report.mean_log[metric][to_string(prov)] = std::move(curve);
        }
    }

    if (cfg.equal_accuracy) {
        for (const auto& metric : cfg.metrics) {
            MeanLogCurve dense;
            for (std::size_t i = 0; i < dense_ns.size(); ++i) {
                std::vector<double> logs;
                for (int r = 0; r < cfg.replicates; ++r) {
                    const double v = results[r].dense[metric][i];
                    if (std::isfinite(v) && v > 0.0) logs.push_back(std::log(v));
                }
                if (!logs.empty()) {
                    dense.ns.push_back(dense_ns[i]);
                    dense.mean_log.push_back(pairwise_sum(logs) / logs.size());
                }
            }
            report.dense_gaussian[metric] = std::move(dense);
        }
        const bool have_skew =
            std::find(cfg.approximations.begin(), cfg.approximations.end(),
                      Provenance::skew_modal) != cfg.approximations.end();
        if (have_skew) {
            for (const auto& metric : cfg.metrics) {
                std::vector<EqualAccuracyEntry> table;
                for (int n : cfg.grid) table.push_back(equal_accuracy_n(report, metric, n));
                report.equal_accuracy[metric] = std::move(table);
            }
        }
    }
    return report;
}

EqualAccuracyEntry equal_accuracy_n(const StudyReport& report, const std::string& metric, int n) {
    const auto metric_it = report.mean_log.find(metric);
    if (metric_it == report.mean_log.end()) throw MetricMissing("metric not in report: " + metric);
    const auto skew_it = metric_it->second.find(to_string(Provenance::skew_modal));
    if (skew_it == metric_it->second.end())
        throw MetricMissing("skew-modal values missing for metric: " + metric);
    const auto dense_it = report.dense_gaussian.find(metric);
    if (dense_it == report.dense_gaussian.end())
        throw MetricMissing("dense Gaussian curve missing; enable equal_accuracy in the config");

    const auto target = skew_it->second.at(n);
    if (!target) throw MetricMissing("no skew-modal value at n = " + std::to_string(n));

    EqualAccuracyEntry entry;
    entry.n = n;
    entry.cap = report.config.equal_accuracy ? report.config.equal_accuracy->cap : 0;
    const auto& dense = dense_it->second;
    for (std::size_t i = 0; i < dense.ns.size(); ++i) {
        if (dense.mean_log[i] <= *target) {
            entry.nbar = dense.ns[i];
            break;
        }
    }
    return entry;
}

}  // namespace skewlap
