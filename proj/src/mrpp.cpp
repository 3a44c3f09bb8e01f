#include "distsel/mrpp.hpp"

#include <numeric>
#include <stdexcept>

#include "distsel/parallel.hpp"

namespace distsel {

GroupWeights GroupWeights::make(WeightScheme scheme, const std::vector<std::size_t>& sizes) {
    std::size_t k = sizes.size();
    if (k < 2) throw std::invalid_argument("need at least two groups");
    double n = 0.0;
    for (std::size_t s : sizes) n += static_cast<double>(s);
    GroupWeights w;
    w.scheme = scheme;
    w.values.resize(k);
    for (std::size_t g = 0; g < k; ++g) {
        double nk = static_cast<double>(sizes[g]);
        w.values[g] = scheme == WeightScheme::NkOverN ? nk / n
                                                      : (nk - 1.0) / (n - static_cast<double>(k));
    }
    return w;
}

double z_statistic(const PairwiseMatrix& d, std::span<const int> labels, const GroupWeights& w) {
    std::size_t n = d.size();
    if (labels.size() != n) throw std::invalid_argument("label vector does not match matrix size");
    std::size_t k = w.values.size();
    std::vector<std::size_t> counts(k, 0);
    for (int lab : labels) {
        if (lab < 0 || static_cast<std::size_t>(lab) >= k)
            throw std::invalid_argument("label out of range for the group weights");
        ++counts[static_cast<std::size_t>(lab)];
    }
    for (std::size_t g = 0; g < k; ++g)
        if (counts[g] < 2) throw std::invalid_argument("every group needs at least 2 observations");

    std::vector<double> sums(k, 0.0);
    const auto& v = d.values();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int li = labels[i];
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            if (li == labels[j]) sums[static_cast<std::size_t>(li)] += v[p];
        }
    }
    double z = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
        double nk = static_cast<double>(counts[g]);
        z += w.values[g] * (2.0 / (nk * (nk - 1.0))) * sums[g];
    }
    return z;
}

MrppResult mrpp_test(const PairwiseMatrix& d, const PermutationPlan& plan, const GroupWeights& w,
                     int threads) {
    if (plan.n != d.size()) throw std::invalid_argument("plan does not match matrix size");
    MrppResult out;
    out.z_perm.resize(plan.count);
    parallel_for(plan.count, threads,
                 [&](std::size_t b) { out.z_perm[b] = z_statistic(d, plan.assignment(b), w); });
    out.z0 = out.z_perm[0];
    std::size_t hits = 0;
    for (double z : out.z_perm)
        if (out.z0 >= z) ++hits;
    out.p_value = static_cast<double>(hits) / static_cast<double>(plan.count);
    return out;
}

double permutation_mean(const PairwiseMatrix& d) {
    const auto& v = d.values();
    if (v.empty()) return 0.0;
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    return s / static_cast<double>(v.size());
}

}  // namespace distsel
