#include "distsel/modsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "distsel/parallel.hpp"
#include "distsel/perm.hpp"
#include "distsel/rng.hpp"
#include "distsel/select.hpp"

namespace distsel {

namespace {

// Top r0 variables by ascending rank sum (ties by index).
std::vector<std::size_t> top_by_rank(const std::vector<double>& rank_sums, std::size_t r0) {
    std::vector<std::size_t> order(rank_sums.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rank_sums[a] != rank_sums[b]) return rank_sums[a] < rank_sums[b];
        return a < b;
    });
    order.resize(r0);
    return order;
}

// MRPP statistic on the subset of variables under the given labels.
double subset_z(const detail::ColumnData& cols, std::span<const std::size_t> subset,
                std::span<const int> labels, const GroupWeights& w) {
    std::size_t n = cols.n;
    std::vector<double> sq(pair_count(n), 0.0);
    for (std::size_t var : subset) {
        const double* c = cols.col(var);
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double yi = c[i];
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                double d = yi - c[j];
                sq[p] += d * d;
            }
        }
    }
    PairwiseMatrix dist(n);
    auto& dv = dist.values();
    for (std::size_t p = 0; p < sq.size(); ++p) dv[p] = std::sqrt(sq[p]);
    return z_statistic(dist, labels, w);
}

std::size_t sqrt_r0(std::size_t r) {
    auto rounded = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(r))));
    return std::max<std::size_t>(1, rounded);
}

}  // namespace

std::string R0Rule::name() const {
    switch (kind) {
        case Kind::FromSL: return "sl";
        case Kind::FromSign: return "sign:" + std::to_string(delta);
        case Kind::Fixed: return "fixed:" + std::to_string(fixed);
        case Kind::SqrtR: return "sqrt";
    }
    return "?";
}

ModifiedMrppResult modified_mrpp(const LabeledSample& s, const R0Rule& rule, WeightScheme scheme,
                                 std::size_t budget, std::uint64_t seed, int threads) {
    return modified_mrpp_multi(s, std::span<const R0Rule>(&rule, 1), scheme, budget, seed,
                               threads)[0];
}

std::vector<ModifiedMrppResult> modified_mrpp_multi(const LabeledSample& s,
                                                    std::span<const R0Rule> rules,
                                                    WeightScheme scheme, std::size_t budget,
                                                    std::uint64_t seed, int threads) {
    if (rules.empty()) return {};
    if (budget < 2) throw std::invalid_argument("permutation budget must be at least 2");
    std::size_t r_total = s.r();

    StandardizedSample std_s = standardize(s);
    detail::ColumnData cols = detail::ColumnData::from_matrix(std_s.sample.values);
    GroupWeights w = GroupWeights::make(scheme, s.group_sizes);
    std::vector<double> base_sq = detail::full_sqdist(cols);

    SelectOptions inner;
    inner.scheme = scheme;
    inner.checkpoint = false;
    inner.record_iterations = false;
    inner.threads = 1;

    bool need_observed_trace =
        std::any_of(rules.begin(), rules.end(), [](const R0Rule& r) {
            return r.kind == R0Rule::Kind::FromSL || r.kind == R0Rule::Kind::FromSign;
        });

    detail::CoreResult observed;
    bool have_observed = false;
    auto run_observed = [&]() {
        if (have_observed) return;
        SelectOptions opt = inner;
        opt.seed = mix_seed(seed, 0);
        observed = detail::backward_select_core(cols, s.labels, w, opt, &base_sq, nullptr);
        have_observed = true;
    };
    if (need_observed_trace) run_observed();

    // Resolve R0 per rule; a failed resolution falls back to sqrt(R).
    std::vector<ModifiedMrppResult> results(rules.size());
    for (std::size_t t = 0; t < rules.size(); ++t) {
        const R0Rule& rule = rules[t];
        ModifiedMrppResult& res = results[t];
        res.rule = rule.name();
        res.permutations = budget;
        res.seed = seed;
        std::size_t r0 = 0;
        switch (rule.kind) {
            case R0Rule::Kind::FromSL:
                r0 = std::count(observed.selected_mask.begin(), observed.selected_mask.end(),
                                char{1});
                break;
            case R0Rule::Kind::FromSign: {
                if (!(rule.delta > 0.0 && rule.delta <= 1.0))
                    throw std::invalid_argument("delta must lie in (0,1]");
                double l = static_cast<double>(observed.iterations_run);
                for (std::size_t v = 0; v < r_total; ++v)
                    if (static_cast<double>(observed.negative_sign_counts[v]) / l >= rule.delta)
                        ++r0;
                break;
            }
            case R0Rule::Kind::Fixed: r0 = rule.fixed; break;
            case R0Rule::Kind::SqrtR: r0 = sqrt_r0(r_total); break;
        }
        if (r0 < 1) {
            r0 = sqrt_r0(r_total);
            res.fallback = true;
        }
        if (r0 > r_total) {
            r0 = r_total;
            res.fallback = true;
        }
        res.r0 = r0;
    }

    bool need_inner = std::any_of(results.begin(), results.end(),
                                  [&](const ModifiedMrppResult& r) { return r.r0 < r_total; });
    if (need_inner) run_observed();

    PermutationPlan plan = build_plan(s.labels, budget, seed);
    std::size_t b_count = plan.count;

    // z_{b,bs} per rule and permutation.
    Matrix z_bs(rules.size(), b_count);
    parallel_for(b_count, threads, [&](std::size_t b) {
        std::span<const int> labels_b = plan.assignment(b);
        const detail::CoreResult* core = nullptr;
        detail::CoreResult local;
        if (need_inner) {
            if (b == 0) {
                core = &observed;
            } else {
                SelectOptions opt = inner;
                opt.seed = mix_seed(seed, b);
                local = detail::backward_select_core(cols, labels_b, w, opt, &base_sq, nullptr);
                core = &local;
            }
        }
        std::vector<std::size_t> all_vars;
        for (std::size_t t = 0; t < rules.size(); ++t) {
            std::size_t r0 = results[t].r0;
            if (r0 >= r_total) {
                if (all_vars.empty()) {
                    all_vars.resize(r_total);
                    std::iota(all_vars.begin(), all_vars.end(), std::size_t{0});
                }
                z_bs(t, b) = subset_z(cols, all_vars, labels_b, w);
            } else {
                std::vector<std::size_t> top = top_by_rank(core->rank_sums, r0);
                z_bs(t, b) = subset_z(cols, top, labels_b, w);
            }
        }
    });

    for (std::size_t t = 0; t < rules.size(); ++t) {
        ModifiedMrppResult& res = results[t];
        double z0 = z_bs(t, 0);
        std::size_t hits = 0;
        for (std::size_t b = 0; b < b_count; ++b)
            if (z0 >= z_bs(t, b)) ++hits;
        res.p_bs = static_cast<double>(hits) / static_cast<double>(b_count);
        if (res.r0 >= r_total) {
            res.selected_observed.resize(r_total);
            std::iota(res.selected_observed.begin(), res.selected_observed.end(), std::size_t{0});
        } else {
            res.selected_observed = top_by_rank(observed.rank_sums, res.r0);
        }
    }
    return results;
}

}  // namespace distsel
