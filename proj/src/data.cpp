#include "distsel/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace distsel {

namespace {

std::string trim(std::string_view sv) {
    std::size_t b = sv.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    std::size_t e = sv.find_last_not_of(" \t\r");
    return std::string(sv.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

LabeledSample finish_make(Matrix values, std::vector<int> ids,
                          std::vector<std::size_t> sizes, std::vector<std::string> names,
                          std::vector<std::string> column_names) {
    std::size_t n = values.rows();
    std::size_t r = values.cols();
    if (r < 1) throw std::invalid_argument("sample needs at least one variable column");
    if (ids.size() != n) throw std::invalid_argument("label count does not match row count");
    if (sizes.size() < 2) throw std::invalid_argument("K < 2: need at least two groups");
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 2)
            throw std::invalid_argument("group '" + names[k] + "' has fewer than 2 observations");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (!std::isfinite(values(i, j)))
                throw std::invalid_argument("non-finite value at row " + std::to_string(i + 1) +
                                            ", column " + std::to_string(j + 1));
        }
    }
    if (column_names.empty()) {
        column_names.resize(r);
        for (std::size_t j = 0; j < r; ++j) column_names[j] = "v" + std::to_string(j + 1);
    }
    if (column_names.size() != r)
        throw std::invalid_argument("column name count does not match column count");
    LabeledSample s;
    s.values = std::move(values);
    s.labels = std::move(ids);
    s.group_sizes = std::move(sizes);
    s.group_names = std::move(names);
    s.column_names = std::move(column_names);
    return s;
}

}  // namespace

LabeledSample LabeledSample::make(Matrix values, const std::vector<std::string>& raw_labels,
                                  std::vector<std::string> column_names) {
    std::vector<int> ids;
    std::vector<std::size_t> sizes;
    std::vector<std::string> names;
    std::map<std::string, int> seen;
    ids.reserve(raw_labels.size());
    for (const auto& lab : raw_labels) {
        auto it = seen.find(lab);
        if (it == seen.end()) {
            int id = static_cast<int>(names.size());
            seen.emplace(lab, id);
            names.push_back(lab);
            sizes.push_back(1);
            ids.push_back(id);
        } else {
            ids.push_back(it->second);
            ++sizes[static_cast<std::size_t>(it->second)];
        }
    }
    return finish_make(std::move(values), std::move(ids), std::move(sizes), std::move(names),
                       std::move(column_names));
}

LabeledSample LabeledSample::make(Matrix values, const std::vector<int>& raw_labels,
                                  std::vector<std::string> column_names) {
    std::vector<std::string> as_text(raw_labels.size());
    for (std::size_t i = 0; i < raw_labels.size(); ++i) as_text[i] = std::to_string(raw_labels[i]);
    return make(std::move(values), as_text, std::move(column_names));
}

LabeledSample load_csv(const std::string& path, const std::string& group_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file, header expected");
    std::vector<std::string> header = split_line(line);

    std::size_t group_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        for (std::size_t j2 = j + 1; j2 < header.size(); ++j2) {
            if (header[j] == header[j2])
                throw std::runtime_error(path + ": duplicate header column '" + header[j] + "'");
        }
        if (header[j] == group_column) group_idx = j;
    }
    if (group_idx == header.size())
        throw std::runtime_error(path + ": group column '" + group_column + "' not found");
    if (header.size() < 2)
        throw std::runtime_error(path + ": need at least one variable column besides '" +
                                 group_column + "'");

    std::vector<std::string> column_names;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != group_idx) column_names.push_back(header[j]);

    std::vector<double> cells;
    std::vector<std::string> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (j == group_idx) {
                if (fields[j].empty())
                    throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                             ": empty group label");
                raw_labels.push_back(fields[j]);
                continue;
            }
            double x = 0.0;
            const char* b = fields[j].data();
            const char* e = b + fields[j].size();
            auto res = std::from_chars(b, e, x);
            if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(x))
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ", column '" + header[j] + "': cannot parse '" +
                                         fields[j] + "' as a finite number");
            cells.push_back(x);
        }
    }

    std::size_t n = raw_labels.size();
    if (n == 0) throw std::runtime_error(path + ": no data rows");
    std::size_t r = header.size() - 1;
    Matrix values(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) values(i, j) = cells[i * r + j];

    return LabeledSample::make(std::move(values), raw_labels, std::move(column_names));
}

void write_csv(const LabeledSample& s, const std::string& path, const std::string& group_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << group_column;
    for (const auto& name : s.column_names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < s.n(); ++i) {
        out << s.group_names[static_cast<std::size_t>(s.labels[i])];
        for (std::size_t j = 0; j < s.r(); ++j) {
            auto res = std::to_chars(buf, buf + sizeof(buf), s.values(i, j));
            out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
}

StandardizedSample standardize(const LabeledSample& s) {
    std::size_t n = s.n();
    std::size_t r = s.r();
    StandardizedSample out;
    out.sample = s;
    out.means.resize(r);
    out.sds.resize(r);
    out.constant.assign(r, 0);
    for (std::size_t j = 0; j < r; ++j) {
        double lo = s.values(0, j), hi = s.values(0, j), sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = s.values(i, j);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            sum += x;
        }
        double m = sum / static_cast<double>(n);
        out.means[j] = m;
        if (lo == hi) {
            out.constant[j] = 1;
            out.sds[j] = 0.0;
            for (std::size_t i = 0; i < n; ++i) out.sample.values(i, j) = 0.0;
            continue;
        }
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = s.values(i, j) - m;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        out.sds[j] = sd;
        for (std::size_t i = 0; i < n; ++i) out.sample.values(i, j) = (s.values(i, j) - m) / sd;
    }
    return out;
}

}  // namespace distsel
