#include "distsel/perm.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "distsel/rng.hpp"

namespace distsel {

namespace {

// Exponent of prime p in n! (Legendre's formula).
std::uint64_t legendre(std::uint64_t n, std::uint64_t p) {
    std::uint64_t e = 0;
    while (n > 0) {
        n /= p;
        e += n;
    }
    return e;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<char> sieve(n + 1, 1);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (!sieve[p]) continue;
        out.push_back(p);
        for (std::uint64_t q = p * p; q <= n; q += p) sieve[q] = 0;
    }
    return out;
}

// Assembles prod p^e(p) into uint64, flagging overflow exactly.
NonequivalentCount assemble(const std::vector<std::uint64_t>& primes,
                            const std::vector<std::uint64_t>& exps) {
    NonequivalentCount out{1, false};
    for (std::size_t t = 0; t < primes.size(); ++t) {
        for (std::uint64_t e = 0; e < exps[t]; ++e) {
            unsigned __int128 next = static_cast<unsigned __int128>(out.value) * primes[t];
            if (next > ~std::uint64_t{0}) return {~std::uint64_t{0}, true};
            out.value = static_cast<std::uint64_t>(next);
        }
    }
    return out;
}

NonequivalentCount factorial_ratio(std::uint64_t n, const std::vector<std::uint64_t>& denom_factorials) {
    if (n < 2) return {1, false};
    std::vector<std::uint64_t> primes = primes_up_to(n);
    std::vector<std::uint64_t> exps(primes.size());
    for (std::size_t t = 0; t < primes.size(); ++t) {
        std::uint64_t e = legendre(n, primes[t]);
        for (std::uint64_t d : denom_factorials) e -= legendre(d, primes[t]);
        exps[t] = e;
    }
    return assemble(primes, exps);
}

}  // namespace

NonequivalentCount count_multiset_permutations(const std::vector<std::size_t>& sizes) {
    std::uint64_t n = 0;
    for (std::size_t s : sizes) n += s;
    std::vector<std::uint64_t> denom(sizes.begin(), sizes.end());
    return factorial_ratio(n, denom);
}

NonequivalentCount count_nonequivalent(const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("need at least two groups");
    for (std::size_t s : sizes)
        if (s < 1) throw std::invalid_argument("empty group");
    std::uint64_t n = 0;
    for (std::size_t s : sizes) n += s;
    std::vector<std::uint64_t> denom(sizes.begin(), sizes.end());
    std::map<std::size_t, std::uint64_t> multiplicity;
    for (std::size_t s : sizes) ++multiplicity[s];
    for (const auto& [size, m] : multiplicity) denom.push_back(m);
    return factorial_ratio(n, denom);
}

PermutationPlan build_plan(std::span<const int> observed_labels, std::size_t budget,
                           std::uint64_t seed) {
    if (budget < 2) throw std::invalid_argument("permutation budget must be at least 2");
    std::size_t n = observed_labels.size();
    if (n == 0) throw std::invalid_argument("empty label vector");

    int k = 0;
    for (int lab : observed_labels) {
        if (lab < 0) throw std::invalid_argument("labels must be non-negative group ids");
        k = std::max(k, lab + 1);
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int lab : observed_labels) ++sizes[static_cast<std::size_t>(lab)];
    for (std::size_t s : sizes)
        if (s == 0) throw std::invalid_argument("group ids must be contiguous 0..K-1");

    PermutationPlan plan;
    plan.n = n;
    plan.seed = seed;

    NonequivalentCount total = count_multiset_permutations(sizes);
    std::vector<int> observed(observed_labels.begin(), observed_labels.end());

    if (!total.overflow && total.value <= budget) {
        plan.mode = PlanMode::Exhaustive;
        plan.count = static_cast<std::size_t>(total.value);
        plan.flat.reserve(plan.count * n);
        std::vector<int> v = observed;
        std::sort(v.begin(), v.end());
        std::size_t observed_at = 0;
        std::size_t b = 0;
        do {
            if (std::equal(v.begin(), v.end(), observed.begin())) observed_at = b;
            plan.flat.insert(plan.flat.end(), v.begin(), v.end());
            ++b;
        } while (std::next_permutation(v.begin(), v.end()));
        // observed labeling goes first
        if (observed_at != 0) {
            for (std::size_t t = 0; t < n; ++t)
                std::swap(plan.flat[t], plan.flat[observed_at * n + t]);
        }
        return plan;
    }

    plan.mode = PlanMode::Sampled;
    plan.count = budget;
    plan.flat.resize(budget * n);
    std::copy(observed.begin(), observed.end(), plan.flat.begin());
    Philox rng(seed);
    std::vector<int> v(n);
    for (std::size_t b = 1; b < budget; ++b) {
        v = observed;
        rng.shuffle(v);
        std::copy(v.begin(), v.end(), plan.flat.begin() + b * n);
    }
    return plan;
}

}  // namespace distsel
