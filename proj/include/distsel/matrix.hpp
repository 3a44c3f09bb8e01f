#pragma once

#include <cstddef>
#include <vector>

namespace distsel {

// Dense row-major matrix of doubles. Observations in rows, variables in columns.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

    double* row(std::size_t i) { return v_.data() + i * cols_; }
    const double* row(std::size_t i) const { return v_.data() + i * cols_; }

    std::vector<double>& storage() { return v_; }
    const std::vector<double>& storage() const { return v_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> v_;
};

// Condensed upper-triangle indexing for symmetric pair stores: pairs (i,j), i<j,
// laid out row by row.
inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

inline std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    // requires i < j < n
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

}  // namespace distsel
