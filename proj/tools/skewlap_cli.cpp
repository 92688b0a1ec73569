// Command-line front end. Links only the C API: configs are read here as raw
// text and handed to skewlap_run_command, which does all parsing and work.
//
// Exit codes: 0 success, 1 numerical/domain failure, 2 usage/config error.
#include <skewlap.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int status_to_exit_code(skewlap_status status) {
    switch (status) {
        case SKEWLAP_OK:
            return 0;
        case SKEWLAP_ERR_CONFIG:
        case SKEWLAP_ERR_IO:
        case SKEWLAP_ERR_NULL_ARGUMENT:
            return 2;
        default:
            return 1;
    }
}

struct CommonArgs {
    std::string config_path;
    std::string out;
    uint64_t seed = 0;
    bool has_seed = false;
    int jobs = 0;
    bool has_jobs = false;
    long long n_draws = 0;
    bool has_n_draws = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_draws) {
    cmd->add_option("--config", args.config_path, "JSON configuration file")->required();
    cmd->add_option("--out", args.out, "Output path override");
    auto* seed = cmd->add_option("--seed", args.seed, "RNG seed override");
    seed->each([&](const std::string&) { args.has_seed = true; });
    auto* jobs =
        cmd->add_option("--jobs", args.jobs, "Worker threads (replicate-level, bench only)");
    jobs->each([&](const std::string&) { args.has_jobs = true; });
    if (with_draws) {
        auto* nd = cmd->add_option("--n-draws", args.n_draws, "Number of draws override");
        nd->each([&](const std::string&) { args.has_n_draws = true; });
    }
}

int run(const std::string& command, const CommonArgs& args) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr,
                     "{\"code\": \"io_error\", \"message\": \"cannot read config: %s\"}\n",
                     args.config_path.c_str());
        return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string config = ss.str();

    skewlap_overrides ov{};
    ov.has_seed = args.has_seed ? 1 : 0;
    ov.seed = args.seed;
    ov.has_jobs = args.has_jobs ? 1 : 0;
    ov.jobs = args.jobs;
    ov.has_n_draws = args.has_n_draws ? 1 : 0;
    ov.n_draws = args.n_draws;
    ov.out = args.out.empty() ? nullptr : args.out.c_str();

    char* lines = nullptr;
    const skewlap_status status =
        skewlap_run_command(command.c_str(), config.c_str(), &ov, &lines);
    if (status == SKEWLAP_OK) {
        if (lines) std::fputs(lines, stdout);
        skewlap_string_free(lines);
        return 0;
    }
    std::fprintf(stderr, "%s\n", skewlap_last_error_json());
    return status_to_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skew-symmetric posterior approximations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(skewlap_version()));

    CommonArgs approx_args, sample_args, marginal_args, diagnose_args, bench_args;
    auto* approx = app.add_subcommand(
        "approx", "Build a posterior approximation and write it as JSON");
    add_common(approx, approx_args, false);
    auto* sample =
        app.add_subcommand("sample", "Draw i.i.d. samples from an approximation to CSV");
    add_common(sample, sample_args, true);
    auto* marginal = app.add_subcommand(
        "marginal", "Build a closed-form marginal approximation for an index set");
    add_common(marginal, marginal_args, false);
    auto* diagnose = app.add_subcommand(
        "diagnose", "TV distances, functional errors and the finite-sample bound");
    add_common(diagnose, diagnose_args, true);
    auto* bench = app.add_subcommand(
        "bench", "Replicated accuracy study over a sample-size grid");
    add_common(bench, bench_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (approx->parsed()) return run("approx", approx_args);
    if (sample->parsed()) return run("sample", sample_args);
    if (marginal->parsed()) return run("marginal", marginal_args);
    if (diagnose->parsed()) return run("diagnose", diagnose_args);
    if (bench->parsed()) return run("bench", bench_args);
    return 2;
}
