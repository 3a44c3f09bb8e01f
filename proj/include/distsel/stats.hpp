#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace distsel {

double norm_cdf(double x);
double norm_pdf(double x);

double mean_of(std::span<const double> v);
// Sample standard deviation, divisor n-1. Returns 0 for fewer than 2 values.
double sample_sd(std::span<const double> v);

struct WelchTest {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
};

WelchTest welch_t_test(std::span<const double> a, std::span<const double> b);

// Benjamini-Hochberg step-up at level q; returns the indices of the selected
// hypotheses (all p below the step-up cutoff), sorted ascending.
std::vector<std::size_t> bh_select(std::span<const double> p_values, double q);

}  // namespace distsel
