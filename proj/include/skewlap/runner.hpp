// Config-driven command layer shared by the C API and the CLI. Each command
// takes one JSON document, validates it strictly (unknown keys rejected),
// runs the pipeline, writes any configured output files and returns the JSON
// lines destined for standard output.
#pragma once

#include "skewlap/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skewlap {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<long long> n_draws;
    std::optional<std::string> out;
};

// command: approx | sample | marginal | diagnose | bench.
// Returns the stdout payload, one JSON document per line.
std::vector<std::string> run_command(const std::string& command, const std::string& config_json,
                                     const RunOverrides& overrides = {});

}  // namespace skewlap
