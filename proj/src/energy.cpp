#include "distsel/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distsel/parallel.hpp"

namespace distsel {

namespace {

// Accumulates sums[a][b] (a <= b) of pairwise values split by group membership.
std::vector<double> group_pair_sums(const PairwiseMatrix& d, std::span<const int> labels,
                                    std::size_t k) {
    std::vector<double> sums(k * k, 0.0);
    const auto& v = d.values();
    std::size_t n = d.size();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t li = static_cast<std::size_t>(labels[i]);
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            std::size_t lj = static_cast<std::size_t>(labels[j]);
            std::size_t a = li <= lj ? li : lj;
            std::size_t b = li <= lj ? lj : li;
            sums[a * k + b] += v[p];
        }
    }
    return sums;
}

struct DiscoSums {
    double s = 0.0;
    double w = 0.0;
    double t = 0.0;
};

DiscoSums disco_sums(const PairwiseMatrix& d, std::span<const int> labels,
                     const std::vector<std::size_t>& sizes) {
    std::size_t k = sizes.size();
    std::vector<double> sums = group_pair_sums(d, labels, k);
    double n = 0.0;
    for (std::size_t s : sizes) n += static_cast<double>(s);
    DiscoSums out;
    double grand = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) grand += sums[a * k + b];
    out.t = grand / n;
    for (std::size_t a = 0; a < k; ++a) {
        double na = static_cast<double>(sizes[a]);
        out.w += sums[a * k + a] / na;  // (n_a/2) * g(a,a), g = 2*sum/n_a^2
        for (std::size_t b = a + 1; b < k; ++b) {
            double nb = static_cast<double>(sizes[b]);
            double g_ab = sums[a * k + b] / (na * nb);
            double g_aa = 2.0 * sums[a * k + a] / (na * na);
            double g_bb = 2.0 * sums[b * k + b] / (nb * nb);
            // ((n_a+n_b)/N) * d(a,b) with d = n_a n_b/(n_a+n_b) * (2g_ab - g_aa - g_bb)
            out.s += na * nb / n * (2.0 * g_ab - g_aa - g_bb);
        }
    }
    return out;
}

}  // namespace

GroupLayout GroupLayout::from_labels(std::span<const int> labels) {
    GroupLayout layout;
    layout.labels.assign(labels.begin(), labels.end());
    int k = 0;
    for (int lab : labels) {
        if (lab < 0) throw std::invalid_argument("labels must be non-negative group ids");
        k = std::max(k, lab + 1);
    }
    if (k < 2) throw std::invalid_argument("need at least two groups");
    layout.sizes.assign(static_cast<std::size_t>(k), 0);
    for (int lab : labels) ++layout.sizes[static_cast<std::size_t>(lab)];
    for (std::size_t s : layout.sizes)
        if (s == 0) throw std::invalid_argument("group ids must be contiguous 0..K-1");
    return layout;
}

GroupLayout GroupLayout::from_sample(const LabeledSample& s) {
    GroupLayout layout;
    layout.labels = s.labels;
    layout.sizes = s.group_sizes;
    return layout;
}

double g_mean(const PairwiseMatrix& d, const GroupLayout& layout, std::size_t k, std::size_t kp) {
    if (k >= layout.k() || kp >= layout.k()) throw std::invalid_argument("group index out of range");
    std::vector<double> sums = group_pair_sums(d, layout.labels, layout.k());
    std::size_t a = k <= kp ? k : kp;
    std::size_t b = k <= kp ? kp : k;
    double na = static_cast<double>(layout.sizes[k]);
    double nb = static_cast<double>(layout.sizes[kp]);
    double sum = sums[a * layout.k() + b];
    if (k == kp) return 2.0 * sum / (na * na);
    return sum / (na * nb);
}

double g_mean_u(const PairwiseMatrix& d, const GroupLayout& layout, std::size_t k) {
    if (k >= layout.k()) throw std::invalid_argument("group index out of range");
    if (layout.sizes[k] < 2)
        throw std::invalid_argument("U-statistic within-group mean needs n_k >= 2");
    std::vector<double> sums = group_pair_sums(d, layout.labels, layout.k());
    double nk = static_cast<double>(layout.sizes[k]);
    return 2.0 * sums[k * layout.k() + k] / (nk * (nk - 1.0));
}

double two_sample_energy(const PairwiseMatrix& d, const GroupLayout& layout) {
    if (layout.k() != 2) throw std::invalid_argument("two-sample energy requires exactly 2 groups");
    std::vector<double> sums = group_pair_sums(d, layout.labels, 2);
    double n1 = static_cast<double>(layout.sizes[0]);
    double n2 = static_cast<double>(layout.sizes[1]);
    double g12 = sums[0 * 2 + 1] / (n1 * n2);
    double g11 = 2.0 * sums[0 * 2 + 0] / (n1 * n1);
    double g22 = 2.0 * sums[1 * 2 + 1] / (n2 * n2);
    return 2.0 * g12 - g11 - g22;
}

DiscoDecomposition disco(const PairwiseMatrix& d, const GroupLayout& layout) {
    if (layout.k() < 2) throw std::invalid_argument("need at least two groups");
    if (d.size() != layout.n()) throw std::invalid_argument("layout does not match matrix size");
    DiscoSums sums = disco_sums(d, layout.labels, layout.sizes);
    DiscoDecomposition out;
    out.between = sums.s;
    out.within = sums.w;
    out.total = sums.t;
    double n = static_cast<double>(layout.n());
    double k = static_cast<double>(layout.k());
    if (out.within > 0.0 && n > k) {
        out.f = (out.between / (k - 1.0)) / (out.within / (n - k));
        out.f_defined = true;
    }
    return out;
}

double disco_test(const PairwiseMatrix& d, const GroupLayout& layout, const PermutationPlan& plan,
                  int threads) {
    if (plan.n != d.size()) throw std::invalid_argument("plan does not match matrix size");
    std::size_t b_count = plan.count;
    std::vector<double> f_perm(b_count);
    std::vector<char> defined(b_count);
    parallel_for(b_count, threads, [&](std::size_t b) {
        GroupLayout lb;
        lb.sizes = layout.sizes;
        auto assignment = plan.assignment(b);
        lb.labels.assign(assignment.begin(), assignment.end());
        DiscoDecomposition dec = disco(d, lb);
        f_perm[b] = dec.f;
        defined[b] = dec.f_defined ? 1 : 0;
    });
    std::size_t hits = 0;
    for (std::size_t b = 0; b < b_count; ++b) {
        bool extreme;
        if (!defined[b]) {
            extreme = true;  // undefined F treated as maximally extreme
        } else if (!defined[0]) {
            extreme = false;
        } else {
            extreme = f_perm[b] >= f_perm[0];
        }
        if (extreme) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(b_count);
}

double s_u(const PairwiseMatrix& d, const GroupLayout& layout) {
    std::size_t k = layout.k();
    if (k < 2) throw std::invalid_argument("need at least two groups");
    for (std::size_t g = 0; g < k; ++g)
        if (layout.sizes[g] < 2) throw std::invalid_argument("S_U needs every n_k >= 2");
    std::vector<double> sums = group_pair_sums(d, layout.labels, k);
    double n = static_cast<double>(layout.n());
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double na = static_cast<double>(layout.sizes[a]);
        double gu_aa = 2.0 * sums[a * k + a] / (na * (na - 1.0));
        for (std::size_t b = a + 1; b < k; ++b) {
            double nb = static_cast<double>(layout.sizes[b]);
            double g_ab = sums[a * k + b] / (na * nb);
            double gu_bb = 2.0 * sums[b * k + b] / (nb * (nb - 1.0));
            s += na * nb / n * (2.0 * g_ab - gu_aa - gu_bb);
        }
    }
    return s;
}

}  // namespace distsel
