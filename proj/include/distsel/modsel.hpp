#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/mrpp.hpp"

namespace distsel {

// How many variables the modified test keeps (R0).
struct R0Rule {
    enum class Kind { FromSL, FromSign, Fixed, SqrtR };
    Kind kind = Kind::SqrtR;
    double delta = 0.8;     // FromSign threshold
    std::size_t fixed = 0;  // Fixed value

    static R0Rule from_sl() { return {Kind::FromSL, 0.8, 0}; }
    static R0Rule from_sign(double delta) { return {Kind::FromSign, delta, 0}; }
    static R0Rule fixed_count(std::size_t k) { return {Kind::Fixed, 0.8, k}; }
    static R0Rule sqrt_r() { return {Kind::SqrtR, 0.8, 0}; }

    std::string name() const;
};

struct ModifiedMrppResult {
    double p_bs = 1.0;
    std::size_t r0 = 0;
    std::vector<std::size_t> selected_observed;  // most important first
    bool fallback = false;  // R0 resolution failed, sqrt(R) used instead
    std::size_t permutations = 0;
    std::uint64_t seed = 0;
    std::string rule;
};

// The modified MRPPtest: standardize, run backward selection on the observed
// labeling to pick the R0 most important variables (by average rank), then
// rerun the selection inside every permutation so each assignment's statistic
// is computed on its own best R0 variables. Sharing one run across several
// rules is cheap because the inner selections do not depend on R0.
ModifiedMrppResult modified_mrpp(const LabeledSample& s, const R0Rule& rule, WeightScheme scheme,
                                 std::size_t budget, std::uint64_t seed, int threads = 1);

std::vector<ModifiedMrppResult> modified_mrpp_multi(const LabeledSample& s,
                                                    std::span<const R0Rule> rules,
                                                    WeightScheme scheme, std::size_t budget,
                                                    std::uint64_t seed, int threads = 1);

}  // namespace distsel
