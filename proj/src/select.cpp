#include "distsel/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "distsel/parallel.hpp"
#include "distsel/perm.hpp"
#include "distsel/rng.hpp"

namespace distsel {

namespace detail {

namespace {

constexpr int kRefreshEvery = 64;
constexpr double kNegativeDriftLimit = -1e-9;

void add_column_sqdiff(const ColumnData& cols, std::size_t var, std::vector<double>& sq,
                       double scale) {
    const double* c = cols.col(var);
    std::size_t n = cols.n;
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double yi = c[i];
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            double d = yi - c[j];
            sq[p] += scale * d * d;
        }
    }
}

double tau_column(const ColumnData& cols, std::size_t var, const std::vector<double>& m) {
    const double* c = cols.col(var);
    std::size_t n = cols.n;
    double acc = 0.0;
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double yi = c[i];
        const double* mj = m.data() + p;
        const double* cj = c + i + 1;
        std::size_t len = n - i - 1;
        double local = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            double d = yi - cj[t];
            local += d * d * mj[t];
        }
        acc += local;
        p += len;
    }
    return acc;
}

// MRPP p-value over the variables in `subset` under the observed labels,
// used by the step-4a checkpoint.
double subset_mrpp_p(const ColumnData& cols, std::span<const int> labels, const GroupWeights& w,
                     std::span<const std::size_t> subset, std::size_t budget, std::uint64_t seed,
                     int threads) {
    std::size_t n = cols.n;
    std::vector<double> sq(pair_count(n), 0.0);
    for (std::size_t var : subset) add_column_sqdiff(cols, var, sq, 1.0);
    PairwiseMatrix dist(n);
    auto& dv = dist.values();
    for (std::size_t p = 0; p < sq.size(); ++p) dv[p] = std::sqrt(sq[p]);
    PermutationPlan plan = build_plan(labels, budget, seed);
    return mrpp_test(dist, plan, w, threads).p_value;
}

}  // namespace

ColumnData ColumnData::from_matrix(const Matrix& m) {
    ColumnData out;
    out.n = m.rows();
    out.r = m.cols();
    out.cols.resize(out.n * out.r);
    for (std::size_t j = 0; j < out.r; ++j)
        for (std::size_t i = 0; i < out.n; ++i) out.cols[j * out.n + i] = m(i, j);
    return out;
}

std::vector<double> full_sqdist(const ColumnData& cols) {
    std::vector<double> sq(pair_count(cols.n), 0.0);
    for (std::size_t j = 0; j < cols.r; ++j) add_column_sqdiff(cols, j, sq, 1.0);
    return sq;
}

CoreResult backward_select_core(const ColumnData& cols, std::span<const int> labels,
                                const GroupWeights& w, const SelectOptions& opt,
                                const std::vector<double>* base_sq,
                                std::vector<SelectionIteration>* record) {
    std::size_t n = cols.n;
    std::size_t r_total = cols.r;
    std::size_t k = w.values.size();
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");

    std::vector<std::size_t> counts(k, 0);
    for (int lab : labels) ++counts[static_cast<std::size_t>(lab)];
    std::vector<double> within(k);
    for (std::size_t g = 0; g < k; ++g) {
        if (counts[g] < 2) throw std::invalid_argument("every group needs at least 2 observations");
        double nk = static_cast<double>(counts[g]);
        within[g] = w.values[g] * 2.0 / (nk * (nk - 1.0));
    }
    double nn = static_cast<double>(n);
    double grand = 2.0 / (nn * (nn - 1.0));

    std::size_t pairs = pair_count(n);
    std::vector<double> coef(pairs);
    {
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int li = labels[i];
            for (std::size_t j = i + 1; j < n; ++j, ++p)
                coef[p] = (li == labels[j] ? within[static_cast<std::size_t>(li)] : 0.0) - grand;
        }
    }

    std::vector<double> sq = base_sq ? *base_sq : full_sqdist(cols);
    std::vector<std::size_t> active(r_total);
    std::iota(active.begin(), active.end(), std::size_t{0});

    CoreResult res;
    res.selected_mask.assign(r_total, 1);
    res.deleted_at.assign(r_total, 0);
    res.rank_sums.assign(r_total, 0.0);
    res.negative_sign_counts.assign(r_total, 0);

    std::vector<double> m(pairs);
    std::vector<double> tau(r_total);
    std::vector<std::size_t> order;
    std::vector<std::size_t> deleted_order;  // in deletion order
    int removals = 0;
    std::size_t ell = 0;

    while (true) {
        ++ell;
        for (std::size_t p = 0; p < pairs; ++p)
            m[p] = sq[p] > 0.0 ? coef[p] / (2.0 * std::sqrt(sq[p])) : 0.0;

        std::size_t act = active.size();
        parallel_for(act, opt.threads,
                     [&](std::size_t idx) { tau[idx] = tau_column(cols, active[idx], m); });

        // Ranks: ascending tau, ties ranked with the larger variable id first so
        // the dropped variable (smallest id among tied maxima) lands on the top
        // rank, matching the frozen rank R - l~ + 1 it keeps afterwards.
        order.resize(act);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (tau[a] != tau[b]) return tau[a] < tau[b];
            return active[a] > active[b];
        });
        for (std::size_t t = 0; t < act; ++t)
            res.rank_sums[active[order[t]]] += static_cast<double>(t + 1);
        for (std::size_t var : deleted_order)
            res.rank_sums[var] += static_cast<double>(r_total - res.deleted_at[var] + 1);
        for (std::size_t idx = 0; idx < act; ++idx)
            if (tau[idx] < 0.0) ++res.negative_sign_counts[active[idx]];

        // argmax tau, ties broken by smallest variable id
        std::size_t best_idx = 0;
        for (std::size_t idx = 1; idx < act; ++idx) {
            if (tau[idx] > tau[best_idx] ||
                (tau[idx] == tau[best_idx] && active[idx] < active[best_idx]))
                best_idx = idx;
        }
        double max_tau = tau[best_idx];
        std::size_t drop_var = active[best_idx];

        SelectionIteration* rec = nullptr;
        if (record) {
            record->emplace_back();
            rec = &record->back();
            rec->ell = ell;
            rec->active_before = active;
            std::sort(rec->active_before.begin(), rec->active_before.end());
            rec->tau_values.resize(act);
            {
                // tau aligned with the sorted active_before list
                std::vector<double> by_var(r_total, 0.0);
                for (std::size_t idx = 0; idx < act; ++idx) by_var[active[idx]] = tau[idx];
                for (std::size_t t = 0; t < act; ++t)
                    rec->tau_values[t] = by_var[rec->active_before[t]];
            }
            rec->signs.assign(r_total, 1);
            for (std::size_t idx = 0; idx < act; ++idx)
                if (tau[idx] < 0.0) rec->signs[active[idx]] = -1;
            rec->ranks.assign(r_total, 0);
            for (std::size_t t = 0; t < act; ++t) rec->ranks[active[order[t]]] = t + 1;
            for (std::size_t var : deleted_order)
                rec->ranks[var] = r_total - res.deleted_at[var] + 1;
        }

        if (max_tau < 0.0) {
            res.stop_reason = StopReason::AllNegative;
            res.iterations_run = ell;
            return res;
        }

        if (opt.checkpoint) {
            std::vector<std::size_t> subset = deleted_order;
            subset.push_back(drop_var);
            double p = subset_mrpp_p(cols, labels, w, subset, opt.permutations,
                                     mix_seed(opt.seed, ell), opt.threads);
            if (rec) rec->checkpoint_p = p;
            if (p < opt.alpha) {
                res.stop_reason = StopReason::DeletedSetSignificant;
                res.iterations_run = ell;
                return res;
            }
        }

        // Move drop_var to the deleted set.
        if (rec) rec->dropped = drop_var;
        add_column_sqdiff(cols, drop_var, sq, -1.0);
        bool drifted = false;
        for (std::size_t p = 0; p < pairs; ++p) {
            if (sq[p] < 0.0) {
                if (sq[p] < kNegativeDriftLimit) drifted = true;
                sq[p] = 0.0;
            }
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_idx));
        res.selected_mask[drop_var] = 0;
        res.deleted_at[drop_var] = ell;
        deleted_order.push_back(drop_var);
        if (drifted || ++removals >= kRefreshEvery) {
            std::fill(sq.begin(), sq.end(), 0.0);
            for (std::size_t var : active) add_column_sqdiff(cols, var, sq, 1.0);
            removals = 0;
        }

        if (active.size() < opt.min_active || active.empty()) {
            res.stop_reason = StopReason::SizeFloor;
            res.iterations_run = ell;
            return res;
        }
    }
}

}  // namespace detail

SelectionTrace backward_select(const LabeledSample& s, const SelectOptions& opt) {
    detail::ColumnData cols = detail::ColumnData::from_matrix(s.values);
    GroupWeights w = GroupWeights::make(opt.scheme, s.group_sizes);
    std::vector<SelectionIteration> iterations;
    detail::CoreResult core = detail::backward_select_core(
        cols, s.labels, w, opt, nullptr, opt.record_iterations ? &iterations : nullptr);

    SelectionTrace trace;
    trace.n_variables = s.r();
    trace.iterations_run = core.iterations_run;
    trace.stop_reason = core.stop_reason;
    trace.deleted_at = core.deleted_at;
    trace.rank_sums = core.rank_sums;
    trace.negative_sign_counts = core.negative_sign_counts;
    for (std::size_t v = 0; v < s.r(); ++v) {
        if (core.selected_mask[v])
            trace.selected.push_back(v);
        else
            trace.deleted.push_back(v);
    }
    trace.iterations = std::move(iterations);
    return trace;
}

std::vector<std::size_t> important_by_sign(const SelectionTrace& trace, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
    std::vector<std::size_t> out;
    double l = static_cast<double>(trace.iterations_run);
    for (std::size_t v = 0; v < trace.n_variables; ++v) {
        if (static_cast<double>(trace.negative_sign_counts[v]) / l >= delta) out.push_back(v);
    }
    return out;
}

std::vector<double> average_ranks(const SelectionTrace& trace) {
    std::vector<double> out(trace.n_variables);
    double l = static_cast<double>(trace.iterations_run);
    for (std::size_t v = 0; v < trace.n_variables; ++v) out[v] = trace.rank_sums[v] / l;
    return out;
}

}  // namespace distsel
