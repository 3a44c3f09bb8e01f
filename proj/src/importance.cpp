#include "distsel/importance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "distsel/parallel.hpp"
#include "distsel/stats.hpp"

namespace distsel {

namespace {

std::vector<double> z_over_plan(const PairwiseMatrix& d, const PermutationPlan& plan,
                                const GroupWeights& w) {
    std::vector<double> z(plan.count);
    for (std::size_t b = 0; b < plan.count; ++b) z[b] = z_statistic(d, plan.assignment(b), w);
    return z;
}

double kernel_cdf_at(double z0, std::span<const double> z_perm, double h) {
    double acc = 0.0;
    for (double z : z_perm) acc += norm_cdf((z0 - z) / h);
    return acc / static_cast<double>(z_perm.size());
}

// Per-pair multiplier m(i,j) such that tau_r = sum_{i<j} (Y_{i,r}-Y_{j,r})^2 * m(i,j):
// the within-group z weight minus the grand-mean weight, folded together with
// the 1/(2*dist) factor of the gradient matrix.
std::vector<double> tau_pair_multipliers(const PairwiseMatrix& dist, std::span<const int> labels,
                                         const GroupWeights& w) {
    std::size_t n = dist.size();
    std::size_t k = w.values.size();
    std::vector<std::size_t> counts(k, 0);
    for (int lab : labels) ++counts[static_cast<std::size_t>(lab)];
    for (std::size_t g = 0; g < k; ++g)
        if (counts[g] < 2) throw std::invalid_argument("every group needs at least 2 observations");
    std::vector<double> within(k);
    for (std::size_t g = 0; g < k; ++g) {
        double nk = static_cast<double>(counts[g]);
        within[g] = w.values[g] * 2.0 / (nk * (nk - 1.0));
    }
    double nn = static_cast<double>(n);
    double grand = 2.0 / (nn * (nn - 1.0));
    std::vector<double> m(pair_count(n));
    const auto& dv = dist.values();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int li = labels[i];
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            double coef = (li == labels[j] ? within[static_cast<std::size_t>(li)] : 0.0) - grand;
            m[p] = dv[p] > 0.0 ? coef / (2.0 * dv[p]) : 0.0;
        }
    }
    return m;
}

double tau_dot(const Matrix& values, std::size_t r, std::span<const double> m) {
    std::size_t n = values.rows();
    double acc = 0.0;
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double yi = values(i, r);
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            double d = yi - values(j, r);
            acc += d * d * m[p];
        }
    }
    return acc;
}

void require_bandwidth(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("bandwidth h must be positive");
}

}  // namespace

KernelPValue kernel_p(double z0, std::span<const double> z_perm, double h) {
    require_bandwidth(h);
    if (z_perm.size() < 2) throw std::invalid_argument("need at least 2 permutation statistics");
    return {h, kernel_cdf_at(z0, z_perm, h)};
}

ImportanceVector tau_importance(const LabeledSample& s, const PairDistances& pd,
                                const GroupWeights& w, int threads) {
    if (pd.n() != s.n()) throw std::invalid_argument("sample and distances disagree on N");
    std::vector<double> m = tau_pair_multipliers(pd.dist(), s.labels, w);
    ImportanceVector out;
    out.measure = ImportanceMeasure::Tau;
    out.variables = pd.active();
    out.values.resize(out.variables.size());
    parallel_for(out.variables.size(), threads, [&](std::size_t idx) {
        out.values[idx] = tau_dot(s.values, out.variables[idx], m);
    });
    return out;
}

ImportanceVector tau_from_gradients(std::span<const PairwiseMatrix> gradients,
                                    std::span<const std::size_t> variables,
                                    std::span<const int> labels, const GroupWeights& w) {
    if (gradients.size() != variables.size())
        throw std::invalid_argument("one gradient matrix per variable required");
    ImportanceVector out;
    out.measure = ImportanceMeasure::Tau;
    out.variables.assign(variables.begin(), variables.end());
    out.values.resize(gradients.size());
    for (std::size_t idx = 0; idx < gradients.size(); ++idx) {
        out.values[idx] =
            z_statistic(gradients[idx], labels, w) - permutation_mean(gradients[idx]);
    }
    return out;
}

ImportanceVector iota_importance(const LabeledSample& s, const PairDistances& pd,
                                 const PermutationPlan& plan, const GroupWeights& w, double h,
                                 int threads) {
    require_bandwidth(h);
    std::vector<double> z_delta = z_over_plan(pd.dist(), plan, w);
    double z0 = z_delta[0];
    std::size_t b_count = plan.count;
    std::vector<double> phi(b_count);
    for (std::size_t b = 0; b < b_count; ++b) phi[b] = norm_pdf((z0 - z_delta[b]) / h);

    ImportanceVector out;
    out.measure = ImportanceMeasure::Iota;
    out.h = h;
    out.variables = pd.active();
    out.values.resize(out.variables.size());
    parallel_for(out.variables.size(), threads, [&](std::size_t idx) {
        PairwiseMatrix grad = gradient_distance(s, pd, out.variables[idx]);
        std::vector<double> zg = z_over_plan(grad, plan, w);
        double acc = 0.0;
        for (std::size_t b = 0; b < b_count; ++b) acc += phi[b] * (zg[0] - zg[b]);
        out.values[idx] = acc / (static_cast<double>(b_count) * h);
    });
    return out;
}

ImportanceVector finite_diff_importance(const LabeledSample& s, const PairDistances& pd,
                                        const PermutationPlan& plan, const GroupWeights& w,
                                        double h, FiniteDiffKind kind, int threads) {
    require_bandwidth(h);
    if (pd.n() != s.n()) throw std::invalid_argument("sample and distances disagree on N");
    std::vector<double> z_delta = z_over_plan(pd.dist(), plan, w);
    double p_base = kernel_cdf_at(z_delta[0], z_delta, h);

    ImportanceVector out;
    out.measure = kind == FiniteDiffKind::Backward  ? ImportanceMeasure::BackwardDiff
                  : kind == FiniteDiffKind::Forward ? ImportanceMeasure::ForwardDiff
                                                    : ImportanceMeasure::CentralDiff;
    out.h = h;
    out.variables = pd.active();
    out.values.resize(out.variables.size());
    parallel_for(out.variables.size(), threads, [&](std::size_t idx) {
        VariableSquaredDiffs vds = VariableSquaredDiffs::from_column(pd.data(), out.variables[idx]);
        double backward = 0.0, forward = 0.0;
        if (kind != FiniteDiffKind::Forward) {
            PairDistances dropped = pd.drop1(vds);
            std::vector<double> z = z_over_plan(dropped.dist(), plan, w);
            backward = p_base - kernel_cdf_at(z[0], z, h);
        }
        if (kind != FiniteDiffKind::Backward) {
            PairDistances added = pd.add1(vds);
            std::vector<double> z = z_over_plan(added.dist(), plan, w);
            forward = kernel_cdf_at(z[0], z, h) - p_base;
        }
        switch (kind) {
            case FiniteDiffKind::Backward: out.values[idx] = backward; break;
            case FiniteDiffKind::Forward: out.values[idx] = forward; break;
            case FiniteDiffKind::Central: out.values[idx] = 0.5 * (backward + forward); break;
        }
    });
    return out;
}

double grad_p_value(const PairwiseMatrix& gradient, const PermutationPlan& plan,
                    const GroupWeights& w, int threads) {
    return mrpp_test(gradient, plan, w, threads).p_value;
}

BandwidthResult select_bandwidth(const LabeledSample& s, const PairDistances& pd,
                                 const PermutationPlan& plan, const GroupWeights& w,
                                 BandwidthRule rule, int threads) {
    std::vector<double> z_delta = z_over_plan(pd.dist(), plan, w);
    double sd = sample_sd(z_delta);
    if (!(sd > 0.0)) return {1.0, true};

    std::vector<double> grid(61);
    for (std::size_t g = 0; g < grid.size(); ++g)
        grid[g] = sd * std::pow(10.0, -3.0 + 6.0 * static_cast<double>(g) / 60.0);

    std::size_t b_count = plan.count;

    if (rule == BandwidthRule::CurvatureMax) {
        double best_h = grid[0];
        double best = -1.0;
        for (double h : grid) {
            double obj = 0.0;
            for (std::size_t b = 0; b < b_count; ++b) {
                double fprime = 0.0;
                for (std::size_t c = 0; c < b_count; ++c) {
                    double u = (z_delta[b] - z_delta[c]) / h;
                    fprime -= u * norm_pdf(u);
                }
                fprime /= static_cast<double>(b_count) * h * h;
                obj += fprime * fprime;
            }
            if (obj > best) {
                best = obj;
                best_h = h;
            }
        }
        return {best_h, false};
    }

    // Precompute per-variable z arrays once; each grid candidate is then a
    // cheap pass over them.
    const auto& vars = pd.active();
    std::size_t r_count = vars.size();
    bool need_drop = rule != BandwidthRule::SseForward;
    bool need_add = rule != BandwidthRule::SseBackward;
    std::vector<std::vector<double>> z_grad(r_count), z_drop(r_count), z_add(r_count);
    parallel_for(r_count, threads, [&](std::size_t idx) {
        z_grad[idx] = z_over_plan(gradient_distance(s, pd, vars[idx]), plan, w);
        VariableSquaredDiffs vds = VariableSquaredDiffs::from_column(pd.data(), vars[idx]);
        if (need_drop) z_drop[idx] = z_over_plan(pd.drop1(vds).dist(), plan, w);
        if (need_add) z_add[idx] = z_over_plan(pd.add1(vds).dist(), plan, w);
    });

    double z0 = z_delta[0];
    double best_h = grid[0];
    double best = std::numeric_limits<double>::infinity();
    for (double h : grid) {
        double p_base = kernel_cdf_at(z0, z_delta, h);
        std::vector<double> phi(b_count);
        for (std::size_t b = 0; b < b_count; ++b) phi[b] = norm_pdf((z0 - z_delta[b]) / h);
        double obj = 0.0;
        for (std::size_t idx = 0; idx < r_count; ++idx) {
            double acc = 0.0;
            for (std::size_t b = 0; b < b_count; ++b)
                acc += phi[b] * (z_grad[idx][0] - z_grad[idx][b]);
            double iota = acc / (static_cast<double>(b_count) * h);
            double backward = 0.0, forward = 0.0;
            if (need_drop)
                backward = p_base - kernel_cdf_at(z_drop[idx][0], z_drop[idx], h);
            if (need_add)
                forward = kernel_cdf_at(z_add[idx][0], z_add[idx], h) - p_base;
            switch (rule) {
                case BandwidthRule::SseBackward: {
                    double e = iota - backward;
                    obj += e * e;
                    break;
                }
                case BandwidthRule::SseForward: {
                    double e = iota - forward;
                    obj += e * e;
                    break;
                }
                case BandwidthRule::SseCentral: {
                    double e = iota - 0.5 * (backward + forward);
                    obj += e * e;
                    break;
                }
                case BandwidthRule::SseBoth: {
                    double eb = iota - backward;
                    double ef = iota - forward;
                    obj += eb * eb + ef * ef;
                    break;
                }
                case BandwidthRule::CurvatureMax: break;  // unreachable
            }
        }
        if (obj < best) {
            best = obj;
            best_h = h;
        }
    }
    return {best_h, false};
}

}  // namespace distsel
