#pragma once

// Independent reference implementations used as oracles. Deliberately naive:
// straightforward loops and recursion, no sharing with the library code paths
// they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "distsel/matrix.hpp"

namespace oracle {

// Full N x N Euclidean distance matrix, plain double loop.
inline std::vector<std::vector<double>> naive_euclidean(const distsel::Matrix& y) {
    std::size_t n = y.rows();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t r = 0; r < y.cols(); ++r) {
                double diff = y(i, r) - y(j, r);
                ss += diff * diff;
            }
            d[i][j] = std::sqrt(ss);
        }
    }
    return d;
}

// All distinct arrangements of the label multiset, by recursion over positions.
inline std::vector<std::vector<int>> enumerate_assignments(const std::vector<std::size_t>& sizes) {
    std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<std::vector<int>> out;
    std::vector<int> current(n, -1);
    std::vector<std::size_t> remaining = sizes;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == n) {
            out.push_back(current);
            return;
        }
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            if (remaining[k] == 0) continue;
            --remaining[k];
            current[pos] = static_cast<int>(k);
            rec(pos + 1);
            ++remaining[k];
        }
    };
    rec(0);
    return out;
}

// MRPP statistic from a full matrix: per-group pair collection, then the
// weighted average of within-group means.
inline double naive_z(const std::vector<std::vector<double>>& d, const std::vector<int>& labels,
                      const std::vector<double>& c_k) {
    std::size_t n = labels.size();
    std::size_t k = c_k.size();
    double z = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != static_cast<int>(g)) continue;
            ++count;
            for (std::size_t j = i + 1; j < n; ++j)
                if (labels[j] == static_cast<int>(g)) sum += d[i][j];
        }
        double nk = static_cast<double>(count);
        z += c_k[g] * 2.0 / (nk * (nk - 1.0)) * sum;
    }
    return z;
}

// Mean distance between group members, quadruple loop over ordered pairs
// (the within-group case keeps the zero diagonal).
inline double naive_g(const distsel::Matrix& y, const std::vector<int>& labels, int k, int kp) {
    std::size_t n = y.rows();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != k) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (labels[j] != kp) continue;
            double ss = 0.0;
            for (std::size_t r = 0; r < y.cols(); ++r) {
                double diff = y(i, r) - y(j, r);
                ss += diff * diff;
            }
            sum += std::sqrt(ss);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

inline double spearman(std::span<const double> a, std::span<const double> b) {
    auto ranks = [](std::span<const double> v) {
        std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (v[x] != v[y]) return v[x] < v[y];
            return x < y;
        });
        std::vector<double> r(n);
        for (std::size_t t = 0; t < n; ++t) r[order[t]] = static_cast<double>(t + 1);
        return r;
    };
    std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(ra.size());
    mb /= static_cast<double>(rb.size());
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(da * db);
}

}  // namespace oracle
