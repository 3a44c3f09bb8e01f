#include "distsel/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace distsel {

namespace {
constexpr int kRefreshEvery = 64;
constexpr double kNegativeDriftLimit = -1e-9;
}  // namespace

VariableSquaredDiffs VariableSquaredDiffs::from_column(const Matrix& values, std::size_t r) {
    if (r >= values.cols()) throw std::out_of_range("variable index out of range");
    VariableSquaredDiffs out;
    out.r_ = r;
    std::size_t n = values.rows();
    out.sq_ = PairwiseMatrix(n);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double yi = values(i, r);
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            double d = yi - values(j, r);
            out.sq_.pair(p) = d * d;
        }
    }
    return out;
}

PairDistances PairDistances::euclidean(const LabeledSample& s) {
    return weighted_euclidean(s, std::vector<double>(s.r(), 1.0));
}

PairDistances PairDistances::weighted_euclidean(const LabeledSample& s, std::vector<double> w) {
    if (w.size() != s.r())
        throw std::invalid_argument("weight vector length must equal the number of variables");
    for (double x : w)
        if (!(x >= 0.0)) throw std::invalid_argument("negative variable weight");
    PairDistances pd;
    pd.data_ = std::make_shared<Matrix>(s.values);
    pd.weights_ = std::move(w);
    pd.active_.resize(s.r());
    for (std::size_t r = 0; r < s.r(); ++r) pd.active_[r] = r;
    pd.mask_.assign(s.r(), 1);
    pd.refresh_from_scratch();
    return pd;
}

void PairDistances::refresh_from_scratch() {
    const Matrix& y = *data_;
    std::size_t n = y.rows();
    sq_ = PairwiseMatrix(n);
    auto& v = sq_.values();
    for (std::size_t r : active_) {
        double wr = weights_[r];
        if (wr == 0.0) continue;
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double yi = y(i, r);
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                double d = yi - y(j, r);
                v[p] += wr * d * d;
            }
        }
    }
    removals_since_refresh_ = 0;
    recompute_dist();
}

void PairDistances::recompute_dist() {
    dist_ = PairwiseMatrix(sq_.size());
    const auto& s = sq_.values();
    auto& d = dist_.values();
    for (std::size_t p = 0; p < s.size(); ++p) d[p] = std::sqrt(s[p]);
}

void PairDistances::require_active(std::size_t r) const {
    if (!is_active(r)) throw std::invalid_argument("variable is not active");
}

PairDistances PairDistances::drop1(const VariableSquaredDiffs& d) const {
    std::size_t r = d.variable();
    require_active(r);
    PairDistances out = *this;
    double wr = out.weights_[r];
    out.weights_[r] = 0.0;
    out.mask_[r] = 0;
    out.active_.erase(std::find(out.active_.begin(), out.active_.end(), r));
    auto& sq = out.sq_.values();
    const auto& dv = d.sq().values();
    for (std::size_t p = 0; p < sq.size(); ++p) {
        sq[p] -= wr * dv[p];
        if (sq[p] < 0.0) sq[p] = 0.0;  // round-off clamp
    }
    out.recompute_dist();
    return out;
}

PairDistances PairDistances::add1(const VariableSquaredDiffs& d) const {
    std::size_t r = d.variable();
    require_active(r);
    PairDistances out = *this;
    double wr = out.weights_[r];
    out.weights_[r] = 2.0 * wr;
    auto& sq = out.sq_.values();
    const auto& dv = d.sq().values();
    for (std::size_t p = 0; p < sq.size(); ++p) sq[p] += wr * dv[p];
    out.recompute_dist();
    return out;
}

void PairDistances::remove_variable(const VariableSquaredDiffs& d) {
    std::size_t r = d.variable();
    require_active(r);
    double wr = weights_[r];
    mask_[r] = 0;
    active_.erase(std::find(active_.begin(), active_.end(), r));
    auto& sq = sq_.values();
    const auto& dv = d.sq().values();
    bool drifted = false;
    for (std::size_t p = 0; p < sq.size(); ++p) {
        sq[p] -= wr * dv[p];
        if (sq[p] < 0.0) {
            if (sq[p] < kNegativeDriftLimit) drifted = true;
            sq[p] = 0.0;
        }
    }
    if (drifted || ++removals_since_refresh_ >= kRefreshEvery) {
        refresh_from_scratch();
    } else {
        recompute_dist();
    }
}

PairwiseMatrix gradient_distance(const LabeledSample& s, const PairDistances& pd, std::size_t r) {
    if (!pd.is_active(r)) throw std::invalid_argument("variable is not active");
    std::size_t n = s.n();
    if (pd.n() != n) throw std::invalid_argument("sample and distances disagree on N");
    PairwiseMatrix grad(n);
    const auto& dist = pd.dist().values();
    auto& g = grad.values();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double yi = s.values(i, r);
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            double diff = yi - s.values(j, r);
            g[p] = dist[p] > 0.0 ? diff * diff / (2.0 * dist[p]) : 0.0;
        }
    }
    return grad;
}

}  // namespace distsel
