// JSON serialization helpers.
//
// All documents the library writes go through dump_json, which formats every
// floating-point number with 17 significant digits so that values reload
// bit-identically and repeated runs produce byte-identical files. Keys are
// emitted in lexicographic order.
#pragma once

#include <json.hpp>

#include <string>

namespace skewlap {

// Serialize with deterministic key order and 17-significant-digit doubles.
// indent < 0 gives a compact single line.
std::string dump_json(const nlohmann::json& doc, int indent = -1);

// Formats one double as its 17-significant-digit decimal representation.
std::string format_double(double value);

// Parse wrapper that rethrows parse failures as ConfigError.
nlohmann::json parse_json(const std::string& text, const std::string& what);

// Reads/writes whole files, throwing IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace skewlap
