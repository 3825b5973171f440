#ifndef BDIST_CSV_HPP
#define BDIST_CSV_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdist/inference.hpp"

// CSV ingestion: header row, comma-separated, UTF-8. The response column
// must parse as non-negative integers, covariates as reals.

namespace bdist {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim spaces and a trailing CR
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace detail

inline Dataset ingest_csv(const std::string& path, const std::string& response_column,
                          const std::vector<std::string>& covariate_columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("ingest_csv: empty file " + path);
    const std::vector<std::string> header = detail::split_csv_line(line);

    auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw std::runtime_error("ingest_csv: missing column '" + name + "' in " + path);
        return std::size_t(it - header.begin());
    };

    const std::size_t y_col = column_index(response_column);
    std::vector<std::size_t> x_cols;
    for (const std::string& name : covariate_columns) x_cols.push_back(column_index(name));

    Dataset data;
    data.covariate_names = covariate_columns;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = detail::split_csv_line(line);
        if (fields.size() < header.size())
            throw std::runtime_error("ingest_csv: line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " fields");
        try {
            std::size_t pos = 0;
            const double yv = std::stod(fields[y_col], &pos);
            if (pos != fields[y_col].size()) throw std::invalid_argument("trailing characters");
            const long long yi = (long long)(std::llround(yv));
            if (yv != double(yi) || yi < 0)
                throw std::runtime_error("ingest_csv: line " + std::to_string(line_no) +
                                         ": response must be a non-negative integer");
            std::vector<double> row;
            row.reserve(x_cols.size());
            for (std::size_t c : x_cols) {
                const double xv = std::stod(fields[c], &pos);
                if (pos != fields[c].size()) throw std::invalid_argument("trailing characters");
                row.push_back(xv);
            }
            data.y.push_back(yi);
            data.x.push_back(std::move(row));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("ingest_csv: line " + std::to_string(line_no) +
                                     ": unparseable numeric field");
        }
    }
    if (data.y.empty()) throw std::runtime_error("ingest_csv: no data rows in " + path);
    return data;
}

}  // namespace bdist

#endif  // BDIST_CSV_HPP
