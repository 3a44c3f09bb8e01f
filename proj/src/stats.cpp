#include "distsel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace distsel {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.39894228040143267794;
}

double mean_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    std::size_t n = v.size();
    if (n < 2) return 0.0;
    double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        double d = x - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

WelchTest welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test: both samples need at least 2 values");
    double n1 = static_cast<double>(a.size());
    double n2 = static_cast<double>(b.size());
    double m1 = mean_of(a);
    double m2 = mean_of(b);
    double s1 = sample_sd(a);
    double s2 = sample_sd(b);
    double v1 = s1 * s1 / n1;
    double v2 = s2 * s2 / n2;
    WelchTest out;
    double se2 = v1 + v2;
    if (se2 == 0.0) {
        // Both groups constant: equal means give no evidence, unequal means are
        // infinitely significant.
        out.t = 0.0;
        out.df = n1 + n2 - 2.0;
        out.p = (m1 == m2) ? 1.0 : 0.0;
        return out;
    }
    out.t = (m1 - m2) / std::sqrt(se2);
    out.df = se2 * se2 / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
    boost::math::students_t_distribution<double> dist(out.df);
    out.p = 2.0 * boost::math::cdf(dist, -std::fabs(out.t));
    return out;
}

std::vector<std::size_t> bh_select(std::span<const double> p_values, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("bh_select: q must lie in (0,1)");
    std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (p_values[x] != p_values[y]) return p_values[x] < p_values[y];
        return x < y;
    });
    std::size_t cut = 0;  // number of selected hypotheses
    for (std::size_t i = m; i >= 1; --i) {
        if (p_values[order[i - 1]] <= q * static_cast<double>(i) / static_cast<double>(m)) {
            cut = i;
            break;
        }
    }
    std::vector<std::size_t> selected(order.begin(), order.begin() + cut);
    std::sort(selected.begin(), selected.end());
    return selected;
}

}  // namespace distsel
