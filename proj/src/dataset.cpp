#include "skewlap/dataset.hpp"

#include "skewlap/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace skewlap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("non-numeric value '" + s + "' in " + where);
    }
}

}  // namespace

DataSet DataSet::from_responses(Vector responses) {
    if (responses.size() < 1) throw DomainError("dataset requires at least one observation");
    DataSet d;
    d.responses = std::move(responses);
    return d;
}

DataSet DataSet::from_regression(Vector responses, Matrix covariates,
                                 std::vector<std::string> names) {
    if (responses.size() < 1) throw DomainError("dataset requires at least one observation");
    if (covariates.rows() != responses.size())
        throw DomainError("covariate matrix must have one row per observation");
    DataSet d;
    d.responses = std::move(responses);
    d.covariates = std::move(covariates);
    d.column_names = std::move(names);
    return d;
}

DataSet load_csv(const std::string& path, const std::string& response_column,
                 bool add_intercept) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV file: " + path);
    const auto header = split_csv_line(line);

    int response_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == response_column) response_idx = static_cast<int>(i);
    }
    if (response_idx < 0) throw ConfigError("response column not found: " + response_column);

    std::vector<double> resp;
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IoError("row " + std::to_string(lineno) + " has " +
                          std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(header.size()));
        std::vector<double> row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double v = parse_number(fields[i], path + ":" + std::to_string(lineno));
            if (static_cast<int>(i) == response_idx) {
                resp.push_back(v);
            } else {
                row.push_back(v);
            }
        }
        rows.push_back(std::move(row));
    }
    if (resp.empty()) throw IoError("CSV has a header but no data rows: " + path);

    const int n = static_cast<int>(resp.size());
    const int p_file = static_cast<int>(rows[0].size());
    Vector responses(n);
    for (int i = 0; i < n; ++i) responses[i] = resp[i];

    if (p_file == 0 && !add_intercept) return DataSet::from_responses(std::move(responses));

    const int p = p_file + (add_intercept ? 1 : 0);
    Matrix cov(n, p);
    for (int i = 0; i < n; ++i) {
        int j = 0;
        if (add_intercept) cov(i, j++) = 1.0;
        for (int k = 0; k < p_file; ++k) cov(i, j++) = rows[i][k];
    }
    std::vector<std::string> names;
    if (add_intercept) names.push_back("(intercept)");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (static_cast<int>(i) != response_idx) names.push_back(header[i]);
    }
    return DataSet::from_regression(std::move(responses), std::move(cov), std::move(names));
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV file: " + path);
    const auto header = split_csv_line(line);
    const int k = static_cast<int>(header.size());

    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != k)
            throw IoError("row " + std::to_string(lineno) + " width mismatch in " + path);
        std::vector<double> row(k);
        for (int i = 0; i < k; ++i)
            row[i] = parse_number(fields[i], path + ":" + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<int>(rows.size()), k);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < k; ++j) m(i, j) = rows[i][j];
    return m;
}

void write_matrix_csv(const std::string& path, const Matrix& points,
                      const std::vector<std::string>& column_names) {
    std::ostringstream out;
    const int k = static_cast<int>(points.cols());
    for (int j = 0; j < k; ++j) {
        if (j) out << ',';
        if (j < static_cast<int>(column_names.size()) && !column_names[j].empty()) {
            out << column_names[j];
        } else {
            out << "theta_" << (j + 1);
        }
    }
    out << '\n';
    for (int i = 0; i < points.rows(); ++i) {
        for (int j = 0; j < k; ++j) {
            if (j) out << ',';
            out << format_double(points(i, j));
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace skewlap
