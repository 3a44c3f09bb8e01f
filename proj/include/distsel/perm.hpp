#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace distsel {

enum class PlanMode { Exhaustive, Sampled };

// A fixed list of group-label assignments, the observed labeling first.
// Exhaustive plans enumerate every distinct multiset permutation of the label
// vector; sampled plans draw i.i.d. uniform multiset permutations from a
// seeded counter-based RNG, so a plan is reproducible from (labels, budget,
// seed) alone and never depends on thread count.
struct PermutationPlan {
    std::size_t n = 0;
    std::size_t count = 0;  // number of assignments
    PlanMode mode = PlanMode::Sampled;
    std::uint64_t seed = 0;
    std::vector<int> flat;  // count x n, row-major

    std::span<const int> assignment(std::size_t b) const {
        return std::span<const int>(flat.data() + b * n, n);
    }
};

struct NonequivalentCount {
    std::uint64_t value = 0;
    bool overflow = false;  // true when the count exceeds uint64 range
};

// Number of non-equivalent permutations N! / (prod n_i! * prod m_j!), where
// m_j are the multiplicities of the distinct group sizes. This is the support
// size of the exact permutation p-value.
NonequivalentCount count_nonequivalent(const std::vector<std::size_t>& sizes);

// Number of distinct multiset permutations N! / prod n_i!, saturating instead
// of overflowing (the flag is set when the true count exceeds uint64).
NonequivalentCount count_multiset_permutations(const std::vector<std::size_t>& sizes);

// Builds a plan with `budget` assignments (observed first). When the multiset
// permutation count fits within the budget the plan is exhaustive instead.
PermutationPlan build_plan(std::span<const int> observed_labels, std::size_t budget,
                           std::uint64_t seed);

}  // namespace distsel
