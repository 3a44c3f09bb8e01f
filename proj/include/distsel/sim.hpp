#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/matrix.hpp"
#include "distsel/rng.hpp"

namespace distsel {

enum class SimMethod { MrppOrg, ModSL, Mod2, Mod4, Mod8, Mod16, ModSqrtR };

std::string sim_method_name(SimMethod m);
SimMethod sim_method_from_name(const std::string& name);

// Two-group size/power experiment: group 1 ~ N(0, Sigma), group 2 ~ N(mu, Sigma)
// with Sigma_{ij} = rho^|i-j| and mu = (nu,...,nu,0,...,0) on the first
// shifted_dims coordinates. nu = 0 measures size.
struct SimConfig {
    std::size_t n1 = 20;
    std::size_t n2 = 20;
    std::size_t r = 25;
    double rho = 0.5;
    double nu = 0.0;
    std::size_t shifted_dims = 4;
    std::size_t reps = 1000;
    std::size_t permutations = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::vector<SimMethod> methods = {SimMethod::MrppOrg};
    int threads = 1;

    void validate() const;
};

struct MethodRate {
    SimMethod method = SimMethod::MrppOrg;
    double rate = 0.0;  // empirical rejection rate
    double se = 0.0;    // binomial standard error sqrt(p(1-p)/reps)
};

struct SimResult {
    SimConfig config;
    std::vector<MethodRate> rates;
};

// Rows i.i.d. N(mu, Sigma) with AR(1) covariance, generated by the stationary
// recursion X_1 = e_1, X_j = rho*X_{j-1} + sqrt(1-rho^2)*e_j. Exact for this
// covariance, O(n*R), no matrix factorization.
Matrix gen_mvn_ar1(std::size_t n, std::size_t r, double rho, std::span<const double> mu,
                   Philox& rng);

SimResult run_size_power(const SimConfig& cfg);

// Parses the plain-text key/value config format (one `key = value` per line,
// '#' comments). Keys mirror the SimConfig fields.
SimConfig parse_sim_config(std::istream& in);

struct TTestBH {
    std::vector<double> t;        // Welch statistic per variable
    std::vector<double> p;        // two-sided p-value per variable
    std::vector<std::size_t> selected;  // BH step-up selection at level q
};

// Per-variable Welch two-sample t-tests with Benjamini-Hochberg selection.
// Requires K = 2.
TTestBH ttest_bh_baseline(const LabeledSample& s, double q);

// Known-signal comparison: both methods pick |theta| variables (t-test by
// smallest p, backward selection by smallest average rank); the false positive
// rate is the average fraction picked outside the signal set.
struct FprConfig {
    std::size_t n1 = 15;
    std::size_t n2 = 15;
    std::size_t r = 50;
    double rho = 0.5;
    double nu = 2.0;
    std::size_t theta = 4;  // signal variables are 0..theta-1
    std::size_t reps = 200;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct FprResult {
    double fpr_ttest = 0.0;
    double fpr_backward = 0.0;
    double se_ttest = 0.0;
    double se_backward = 0.0;
    // Fraction of replicates where the backward selection's top-|theta|
    // average ranks are exactly the signal set.
    double backward_exact_rate = 0.0;
};

FprResult compare_selection_fpr(const FprConfig& cfg);

}  // namespace distsel
