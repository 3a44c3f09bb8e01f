#pragma once

#include <cstdint>
#include <vector>

namespace distsel {

// Counter-based RNG (Philox 2x64, 10 rounds). A stream id selects a disjoint
// counter block, so independent substreams for parallel work are cheap and the
// generated sequence never depends on thread scheduling.
class Philox {
public:
    explicit Philox(std::uint64_t key = 0, std::uint64_t stream = 0)
        : key_(key), ctr_hi_(stream), ctr_lo_(0) {}

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_unit();

    // Standard normal via Box-Muller (pairs generated, one cached).
    double next_normal();

    // Uniform integer on [0, n), unbiased. n must be >= 1.
    std::uint64_t next_below(std::uint64_t n);

    // Fisher-Yates shuffle; a uniformly random permutation of v.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    void refill();

    std::uint64_t key_;
    std::uint64_t ctr_hi_;
    std::uint64_t ctr_lo_;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// Derives a new 64-bit seed from (base, tag). Used to give every replicate,
// plan, or iteration its own reproducible seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace distsel
