#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/dist.hpp"
#include "distsel/perm.hpp"

namespace distsel {

// Group membership for the energy/DISCO statistics.
struct GroupLayout {
    std::vector<int> labels;          // 0-based group id per observation
    std::vector<std::size_t> sizes;   // per group

    std::size_t k() const { return sizes.size(); }
    std::size_t n() const { return labels.size(); }

    static GroupLayout from_labels(std::span<const int> labels);
    static GroupLayout from_sample(const LabeledSample& s);
};

// Mean pairwise distance between groups k and kp. Within a group (k == kp) the
// double sum runs over all ordered pairs including the zero diagonal
// (V-statistic form), divisor n_k^2.
double g_mean(const PairwiseMatrix& d, const GroupLayout& layout, std::size_t k, std::size_t kp);

// Diagonal-excluding within-group mean, divisor n_k(n_k-1) (U-statistic form).
double g_mean_u(const PairwiseMatrix& d, const GroupLayout& layout, std::size_t k);

// Two-sample energy statistic 2*g(1,2) - g(1,1) - g(2,2). Requires K = 2.
double two_sample_energy(const PairwiseMatrix& d, const GroupLayout& layout);

// Distance components decomposition T = S + W and the F ratio
// (S/(K-1)) / (W/(N-K)). F is undefined when W = 0 or N = K.
struct DiscoDecomposition {
    double between = 0.0;  // S
    double within = 0.0;   // W
    double total = 0.0;    // T
    double f = 0.0;
    bool f_defined = false;
};

DiscoDecomposition disco(const PairwiseMatrix& d, const GroupLayout& layout);

// Permutation test on the F ratio; large F is evidence against equality, ties
// counted with >=, and assignments with undefined F count as extreme.
double disco_test(const PairwiseMatrix& d, const GroupLayout& layout, const PermutationPlan& plan,
                  int threads = 1);

// Between-sample dispersion with U-statistic within-group means; requires
// every n_k >= 2.
double s_u(const PairwiseMatrix& d, const GroupLayout& layout);

}  // namespace distsel
