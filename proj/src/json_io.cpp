#include "skewlap/json_io.hpp"

#include "skewlap/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace skewlap {

std::string format_double(double value) {
    if (!std::isfinite(value)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::string s(buf);
    // Keep the token a floating literal so it reloads as a double.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace {

void escape_string(const std::string& in, std::string& out) {
    out += '"';
    for (char c : in) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void dump_rec(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
    const std::string pad_close = indent >= 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
    const char* nl = indent >= 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate in key order
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                escape_string(it.key(), out);
                out += indent >= 0 ? ": " : ":";
                dump_rec(it.value(), indent, depth + 1, out);
            }
            out += nl;
            out += pad_close;
            out += '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            out += nl;
            bool first = true;
            for (const auto& el : j) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                dump_rec(el, indent, depth + 1, out);
            }
            out += nl;
            out += pad_close;
            out += ']';
            return;
        }
        case nlohmann::json::value_t::string:
            escape_string(j.get<std::string>(), out);
            return;
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            return;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            return;
        case nlohmann::json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        default:
            out += "null";
            return;
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc, int indent) {
    std::string out;
    dump_rec(doc, indent, 0, out);
    if (indent >= 0) out += '\n';
    return out;
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace skewlap
