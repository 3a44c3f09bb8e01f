#include "distsel/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "distsel/dist.hpp"
#include "distsel/modsel.hpp"
#include "distsel/parallel.hpp"
#include "distsel/perm.hpp"
#include "distsel/select.hpp"
#include "distsel/stats.hpp"

namespace distsel {

namespace {

constexpr std::uint64_t kTagData = 0x64617461;  // replicate data streams
constexpr std::uint64_t kTagPlan = 0x706C616E;  // per-replicate plan seeds

LabeledSample two_group_sample(const Matrix& y1, const Matrix& y2) {
    std::size_t n1 = y1.rows();
    std::size_t n2 = y2.rows();
    std::size_t r = y1.cols();
    Matrix values(n1 + n2, r);
    std::vector<int> labels(n1 + n2);
    for (std::size_t i = 0; i < n1; ++i) {
        labels[i] = 0;
        for (std::size_t j = 0; j < r; ++j) values(i, j) = y1(i, j);
    }
    for (std::size_t i = 0; i < n2; ++i) {
        labels[n1 + i] = 1;
        for (std::size_t j = 0; j < r; ++j) values(n1 + i, j) = y2(i, j);
    }
    return LabeledSample::make(std::move(values), labels);
}

R0Rule rule_for(SimMethod m) {
    switch (m) {
        case SimMethod::ModSL: return R0Rule::from_sl();
        case SimMethod::Mod2: return R0Rule::fixed_count(2);
        case SimMethod::Mod4: return R0Rule::fixed_count(4);
        case SimMethod::Mod8: return R0Rule::fixed_count(8);
        case SimMethod::Mod16: return R0Rule::fixed_count(16);
        case SimMethod::ModSqrtR: return R0Rule::sqrt_r();
        case SimMethod::MrppOrg: break;
    }
    throw std::logic_error("not a modified-test method");
}

double rate_se(double rate, std::size_t reps) {
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

}  // namespace

std::string sim_method_name(SimMethod m) {
    switch (m) {
        case SimMethod::MrppOrg: return "mrpp_org";
        case SimMethod::ModSL: return "mod_sl";
        case SimMethod::Mod2: return "mod_2";
        case SimMethod::Mod4: return "mod_4";
        case SimMethod::Mod8: return "mod_8";
        case SimMethod::Mod16: return "mod_16";
        case SimMethod::ModSqrtR: return "mod_sqrt";
    }
    return "?";
}

SimMethod sim_method_from_name(const std::string& name) {
    if (name == "mrpp_org") return SimMethod::MrppOrg;
    if (name == "mod_sl") return SimMethod::ModSL;
    if (name == "mod_2") return SimMethod::Mod2;
    if (name == "mod_4") return SimMethod::Mod4;
    if (name == "mod_8") return SimMethod::Mod8;
    if (name == "mod_16") return SimMethod::Mod16;
    if (name == "mod_sqrt") return SimMethod::ModSqrtR;
    throw std::invalid_argument("unknown method '" + name + "'");
}

void SimConfig::validate() const {
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("group sizes must be at least 2");
    if (r < 1) throw std::invalid_argument("dimension must be at least 1");
    if (shifted_dims > r) throw std::invalid_argument("shifted_dims cannot exceed the dimension");
    if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (-1,1)");
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    if (permutations < 2) throw std::invalid_argument("permutations must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (methods.empty()) throw std::invalid_argument("no methods configured");
}

Matrix gen_mvn_ar1(std::size_t n, std::size_t r, double rho, std::span<const double> mu,
                   Philox& rng) {
    if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (-1,1)");
    if (!mu.empty() && mu.size() != r)
        throw std::invalid_argument("mean vector length must be 0 or R");
    Matrix out(n, r);
    double scale = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        double prev = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            double eps = rng.next_normal();
            double x = j == 0 ? eps : rho * prev + scale * eps;
            prev = x;
            out(i, j) = x + (mu.empty() ? 0.0 : mu[j]);
        }
    }
    return out;
}

SimResult run_size_power(const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> mu(cfg.r, 0.0);
    for (std::size_t j = 0; j < cfg.shifted_dims; ++j) mu[j] = cfg.nu;

    std::vector<SimMethod> mods;
    bool want_org = false;
    for (SimMethod m : cfg.methods) {
        if (m == SimMethod::MrppOrg)
            want_org = true;
        else
            mods.push_back(m);
    }
    std::vector<R0Rule> rules;
    rules.reserve(mods.size());
    for (SimMethod m : mods) rules.push_back(rule_for(m));

    // rejects[rep * methods + m], indexed by the original methods order
    std::vector<char> rejects(cfg.reps * cfg.methods.size(), 0);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
        Philox rng(mix_seed(cfg.seed, kTagData), rep);
        Matrix y1 = gen_mvn_ar1(cfg.n1, cfg.r, cfg.rho, {}, rng);
        Matrix y2 = gen_mvn_ar1(cfg.n2, cfg.r, cfg.rho, mu, rng);
        LabeledSample sample = two_group_sample(y1, y2);
        std::uint64_t rep_seed = mix_seed(mix_seed(cfg.seed, kTagPlan), rep);

        double p_org = 0.0;
        if (want_org) {
            PairDistances pd = PairDistances::euclidean(sample);
            PermutationPlan plan = build_plan(sample.labels, cfg.permutations, rep_seed);
            GroupWeights w = GroupWeights::make(WeightScheme::NkOverN, sample.group_sizes);
            p_org = mrpp_test(pd.dist(), plan, w, 1).p_value;
        }
        std::vector<ModifiedMrppResult> mod_results;
        if (!rules.empty()) {
            mod_results = modified_mrpp_multi(sample, rules, WeightScheme::NkOverN,
                                              cfg.permutations, rep_seed, 1);
        }
        std::size_t mod_idx = 0;
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            double p = cfg.methods[m] == SimMethod::MrppOrg ? p_org
                                                            : mod_results[mod_idx++].p_bs;
            rejects[rep * cfg.methods.size() + m] = p <= cfg.alpha ? 1 : 0;
        }
    });

    SimResult result;
    result.config = cfg;
    result.rates.resize(cfg.methods.size());
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        std::size_t hits = 0;
        for (std::size_t rep = 0; rep < cfg.reps; ++rep)
            hits += rejects[rep * cfg.methods.size() + m];
        double rate = static_cast<double>(hits) / static_cast<double>(cfg.reps);
        result.rates[m] = {cfg.methods[m], rate, rate_se(rate, cfg.reps)};
    }
    return result;
}

SimConfig parse_sim_config(std::istream& in) {
    SimConfig cfg;
    cfg.methods.clear();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string t) {
            std::size_t b = t.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            std::size_t e = t.find_last_not_of(" \t\r");
            return t.substr(b, e - b + 1);
        };
        std::string entry = trim(line);
        if (entry.empty()) continue;
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        try {
            if (key == "n1") cfg.n1 = std::stoull(value);
            else if (key == "n2") cfg.n2 = std::stoull(value);
            else if (key == "dimension") cfg.r = std::stoull(value);
            else if (key == "rho") cfg.rho = std::stod(value);
            else if (key == "nu") cfg.nu = std::stod(value);
            else if (key == "shifted_dims") cfg.shifted_dims = std::stoull(value);
            else if (key == "reps") cfg.reps = std::stoull(value);
            else if (key == "permutations") cfg.permutations = std::stoull(value);
            else if (key == "alpha") cfg.alpha = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "methods") {
                std::stringstream ss(value);
                std::string token;
                while (std::getline(ss, token, ',')) {
                    token = trim(token);
                    if (!token.empty()) cfg.methods.push_back(sim_method_from_name(token));
                }
            } else {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": cannot parse value for key '" + key + "'");
        }
    }
    if (cfg.methods.empty()) cfg.methods = {SimMethod::MrppOrg};
    cfg.validate();
    return cfg;
}

TTestBH ttest_bh_baseline(const LabeledSample& s, double q) {
    if (s.k() != 2) throw std::invalid_argument("t-test baseline requires exactly 2 groups");
    std::size_t r = s.r();
    TTestBH out;
    out.t.resize(r);
    out.p.resize(r);
    std::vector<double> a, b;
    for (std::size_t j = 0; j < r; ++j) {
        a.clear();
        b.clear();
        for (std::size_t i = 0; i < s.n(); ++i) {
            if (s.labels[i] == 0)
                a.push_back(s.values(i, j));
            else
                b.push_back(s.values(i, j));
        }
        WelchTest t = welch_t_test(a, b);
        out.t[j] = t.t;
        out.p[j] = t.p;
    }
    out.selected = bh_select(out.p, q);
    return out;
}

FprResult compare_selection_fpr(const FprConfig& cfg) {
    if (cfg.theta < 1) throw std::invalid_argument("signal set must be non-empty");
    if (cfg.theta > cfg.r) throw std::invalid_argument("signal set larger than dimension");
    if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");

    std::vector<double> mu(cfg.r, 0.0);
    for (std::size_t j = 0; j < cfg.theta; ++j) mu[j] = cfg.nu;

    std::vector<double> fp_t(cfg.reps), fp_b(cfg.reps);
    std::vector<char> exact(cfg.reps, 0);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
        Philox rng(mix_seed(cfg.seed, kTagData), rep);
        Matrix y1 = gen_mvn_ar1(cfg.n1, cfg.r, cfg.rho, {}, rng);
        Matrix y2 = gen_mvn_ar1(cfg.n2, cfg.r, cfg.rho, mu, rng);
        LabeledSample sample = two_group_sample(y1, y2);

        TTestBH tt = ttest_bh_baseline(sample, 0.05);
        std::vector<std::size_t> order(cfg.r);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (tt.p[a] != tt.p[b]) return tt.p[a] < tt.p[b];
            return a < b;
        });
        std::size_t fp = 0;
        for (std::size_t t = 0; t < cfg.theta; ++t)
            if (order[t] >= cfg.theta) ++fp;
        fp_t[rep] = static_cast<double>(fp) / static_cast<double>(cfg.theta);

        SelectOptions opt;
        opt.checkpoint = false;
        opt.record_iterations = false;
        opt.seed = mix_seed(cfg.seed, rep);
        opt.threads = 1;
        SelectionTrace trace = backward_select(sample, opt);
        std::vector<double> ranks = average_ranks(trace);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
            return a < b;
        });
        fp = 0;
        for (std::size_t t = 0; t < cfg.theta; ++t)
            if (order[t] >= cfg.theta) ++fp;
        fp_b[rep] = static_cast<double>(fp) / static_cast<double>(cfg.theta);
        exact[rep] = fp == 0 ? 1 : 0;
    });

    FprResult out;
    out.fpr_ttest = mean_of(fp_t);
    out.fpr_backward = mean_of(fp_b);
    out.se_ttest = sample_sd(fp_t) / std::sqrt(static_cast<double>(cfg.reps));
    out.se_backward = sample_sd(fp_b) / std::sqrt(static_cast<double>(cfg.reps));
    std::size_t hits = std::count(exact.begin(), exact.end(), char{1});
    out.backward_exact_rate = static_cast<double>(hits) / static_cast<double>(cfg.reps);
    return out;
}

}  // namespace distsel
