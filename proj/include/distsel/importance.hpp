#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/dist.hpp"
#include "distsel/mrpp.hpp"
#include "distsel/perm.hpp"

namespace distsel {

// Gaussian-kernel smoothed permutation p-value: mean_b Phi((z0 - z_b)/h).
struct KernelPValue {
    double h = 0.0;
    double p_tilde = 0.5;
};

KernelPValue kernel_p(double z0, std::span<const double> z_perm, double h);

enum class ImportanceMeasure { Tau, Iota, BackwardDiff, ForwardDiff, CentralDiff, GradPValue };

// One importance value per active variable. Negative values mark important
// variables for every measure except GradPValue, where small p-values do.
struct ImportanceVector {
    ImportanceMeasure measure = ImportanceMeasure::Tau;
    double h = 0.0;                         // bandwidth where applicable
    std::vector<std::size_t> variables;     // active variable ids
    std::vector<double> values;
};

// Permutation-free importance: the observed MRPP statistic on the gradient
// matrix of each variable minus its closed-form permutation mean. No
// permutations executed; total cost O(R * N^2).
ImportanceVector tau_importance(const LabeledSample& s, const PairDistances& pd,
                                const GroupWeights& w, int threads = 1);

// Same definition evaluated from explicit gradient matrices (slow path used
// for cross-checks).
ImportanceVector tau_from_gradients(std::span<const PairwiseMatrix> gradients,
                                    std::span<const std::size_t> variables,
                                    std::span<const int> labels, const GroupWeights& w);

// Kernel-smoothed importance: the derivative of the smoothed permutation
// p-value in the variable's distance weight, summed over the plan.
ImportanceVector iota_importance(const LabeledSample& s, const PairDistances& pd,
                                 const PermutationPlan& plan, const GroupWeights& w, double h,
                                 int threads = 1);

enum class FiniteDiffKind { Backward, Forward, Central };

// Secant approximations to iota from actually dropping (weight 0) or double
// weighting (weight 2) each variable; differences of kernel-smoothed p-values
// over the same plan. Central is exactly the average of backward and forward.
ImportanceVector finite_diff_importance(const LabeledSample& s, const PairDistances& pd,
                                        const PermutationPlan& plan, const GroupWeights& w,
                                        double h, FiniteDiffKind kind, int threads = 1);

// Permutation p-value of the MRPP test run with a gradient matrix as the
// distance.
double grad_p_value(const PairwiseMatrix& gradient, const PermutationPlan& plan,
                    const GroupWeights& w, int threads = 1);

enum class BandwidthRule { CurvatureMax, SseBackward, SseForward, SseCentral, SseBoth };

struct BandwidthResult {
    double h = 1.0;
    bool fallback = false;  // set when the permutation statistics are degenerate
};

// Grid search over 61 log-spaced candidates spanning [1e-3, 1e3] times the
// sample SD of the permutation statistics. CurvatureMax maximizes the summed
// squared density derivative at the permutation statistics; the SSE rules
// minimize the squared gap between iota and its finite-difference
// approximants. Falls back to h = 1 when all permutation statistics coincide.
BandwidthResult select_bandwidth(const LabeledSample& s, const PairDistances& pd,
                                 const PermutationPlan& plan, const GroupWeights& w,
                                 BandwidthRule rule, int threads = 1);

}  // namespace distsel
