#include "distsel/rng.hpp"

#include <cmath>

namespace distsel {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline void philox_round(std::uint64_t& x0, std::uint64_t& x1, std::uint64_t key) {
    unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxM) * x0;
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ key ^ x1;
    x1 = lo;
}

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

void Philox::refill() {
    std::uint64_t x0 = ctr_lo_;
    std::uint64_t x1 = ctr_hi_;
    std::uint64_t k = key_;
    for (int round = 0; round < 10; ++round) {
        philox_round(x0, x1, k);
        k += kPhiloxW;
    }
    buf_[0] = x0;
    buf_[1] = x1;
    have_ = 2;
    if (++ctr_lo_ == 0) ++ctr_hi_;
}

std::uint64_t Philox::next_u64() {
    if (have_ == 0) refill();
    return buf_[--have_];
}

double Philox::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::uint64_t Philox::next_below(std::uint64_t n) {
    // Modulo with rejection of the biased tail.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(base ^ splitmix64(tag + 0x6A09E667F3BCC909ULL));
}

}  // namespace distsel
