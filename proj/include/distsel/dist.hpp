#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/matrix.hpp"

namespace distsel {

// Symmetric pairwise matrix with zero diagonal, condensed upper-triangle
// storage. The shared currency of every statistic in this library: plain
// distances, squared distances and per-variable gradient matrices all use it.
class PairwiseMatrix {
public:
    PairwiseMatrix() = default;
    explicit PairwiseMatrix(std::size_t n, double fill = 0.0)
        : n_(n), v_(pair_count(n), fill) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return v_[pair_index(n_, i, j)];
    }
    double pair(std::size_t p) const { return v_[p]; }
    double& pair(std::size_t p) { return v_[p]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

private:
    std::size_t n_ = 0;
    std::vector<double> v_;
};

// (Y_{i,r} - Y_{j,r})^2 for a single variable r, over all pairs.
class VariableSquaredDiffs {
public:
    static VariableSquaredDiffs from_column(const Matrix& values, std::size_t r);

    std::size_t variable() const { return r_; }
    const PairwiseMatrix& sq() const { return sq_; }

private:
    std::size_t r_ = 0;
    PairwiseMatrix sq_;
};

// Pairwise (weighted) Euclidean distances over an active variable set, with
// O(N^2) per-variable removal. Holds a snapshot of the data so the squared
// distances can be recomputed from scratch; incremental removals trigger a
// refresh every 64 steps or when round-off pushes an entry below -1e-9, which
// bounds drift against the from-scratch values.
class PairDistances {
public:
    static PairDistances euclidean(const LabeledSample& s);
    // w_r >= 0 per variable; all-ones weights reproduce euclidean exactly.
    static PairDistances weighted_euclidean(const LabeledSample& s, std::vector<double> w);

    std::size_t n() const { return dist_.size(); }
    const PairwiseMatrix& dist() const { return dist_; }
    const PairwiseMatrix& sqdist() const { return sq_; }
    const std::vector<std::size_t>& active() const { return active_; }
    bool is_active(std::size_t r) const { return r < mask_.size() && mask_[r] != 0; }
    const Matrix& data() const { return *data_; }

    // Distances without variable r / with variable r counted twice. Both keep
    // the full refresh machinery valid: drop sets the variable weight to 0,
    // add doubles it.
    PairDistances drop1(const VariableSquaredDiffs& d) const;
    PairDistances add1(const VariableSquaredDiffs& d) const;

    // Removes r from the active set in place; cost O(N^2) independent of the
    // number of active variables.
    void remove_variable(const VariableSquaredDiffs& d);

private:
    PairDistances() = default;
    void refresh_from_scratch();
    void recompute_dist();
    void require_active(std::size_t r) const;

    std::shared_ptr<const Matrix> data_;
    std::vector<double> weights_;       // per original variable
    std::vector<std::size_t> active_;   // sorted ascending
    std::vector<char> mask_;
    PairwiseMatrix sq_;
    PairwiseMatrix dist_;
    int removals_since_refresh_ = 0;
};

// Per-pair contribution of variable r to the distance:
// (Y_{i,r}-Y_{j,r})^2 / (2 * dist(i,j)), defined as 0 where dist(i,j) = 0
// (identical observations carry no per-variable signal).
PairwiseMatrix gradient_distance(const LabeledSample& s, const PairDistances& pd, std::size_t r);

}  // namespace distsel
