#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "distsel/matrix.hpp"

namespace distsel {

// An N x R data matrix with a group label per row. Immutable after
// construction; every downstream computation shares it read-only.
struct LabeledSample {
    Matrix values;                          // N rows, R columns
    std::vector<int> labels;                // 0-based group ids, size N
    std::vector<std::size_t> group_sizes;   // size K
    std::vector<std::string> group_names;   // original labels, first-appearance order
    std::vector<std::string> column_names;  // size R

    std::size_t n() const { return values.rows(); }
    std::size_t r() const { return values.cols(); }
    std::size_t k() const { return group_sizes.size(); }

    // Validates and canonicalizes: raw labels are mapped to 0..K-1 in
    // first-appearance order. Requires K >= 2, every group size >= 2, R >= 1,
    // and all values finite.
    static LabeledSample make(Matrix values, const std::vector<std::string>& raw_labels,
                              std::vector<std::string> column_names = {});
    static LabeledSample make(Matrix values, const std::vector<int>& raw_labels,
                              std::vector<std::string> column_names = {});
};

struct StandardizedSample {
    LabeledSample sample;        // transformed values, same labels
    std::vector<double> means;   // pooled per-column mean
    std::vector<double> sds;     // pooled per-column sample SD (divisor N-1)
    std::vector<char> constant;  // flag per column; constant columns are zeroed
};

// Reads a UTF-8 comma-separated file with a header row. `group_column` names
// the label column; every other column must parse as a finite real. Group ids
// are assigned in first-appearance order, row order is preserved.
LabeledSample load_csv(const std::string& path, const std::string& group_column);

// Inverse of load_csv for fixtures and round-trips. Values are written with
// shortest round-trip formatting, so reparsing recovers them bit-exactly.
void write_csv(const LabeledSample& s, const std::string& path,
               const std::string& group_column = "group");

// Centers and scales each column by its pooled mean and sample SD. Constant
// columns are zeroed and flagged instead of rejected, so their distance
// contribution is exactly 0 downstream.
StandardizedSample standardize(const LabeledSample& s);

}  // namespace distsel
