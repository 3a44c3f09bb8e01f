#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distsel/dist.hpp"
#include "distsel/perm.hpp"

namespace distsel {

enum class WeightScheme { NkOverN, NkMinus1OverNMinusK };

// Group weights C_k for the MRPP statistic.
struct GroupWeights {
    WeightScheme scheme = WeightScheme::NkOverN;
    std::vector<double> values;  // C_k, one per group

    static GroupWeights make(WeightScheme scheme, const std::vector<std::size_t>& sizes);
};

struct MrppResult {
    double z0 = 0.0;
    std::vector<double> z_perm;  // z under every assignment, z_perm[0] = z0
    double p_value = 1.0;        // #{b : z0 >= z_b} / B
};

// Weighted average of within-group pairwise values:
// z = sum_k C_k * 2/(n_k(n_k-1)) * sum_{i<j in group k} D(i,j).
// Works for any symmetric zero-diagonal matrix, distances or gradients alike.
double z_statistic(const PairwiseMatrix& d, std::span<const int> labels, const GroupWeights& w);

// Permutation test: small z is evidence against distributional equality, ties
// counted in favour of the null (z0 >= z_b).
MrppResult mrpp_test(const PairwiseMatrix& d, const PermutationPlan& plan, const GroupWeights& w,
                     int threads = 1);

// Closed-form average of z over all permutations: the grand pairwise mean
// 2/(N(N-1)) * sum_{i<j} D(i,j). Free of the group weights, O(N^2).
double permutation_mean(const PairwiseMatrix& d);

}  // namespace distsel
