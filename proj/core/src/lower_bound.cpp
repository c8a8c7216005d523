#include "bandit_elim/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bandit_elim/oracle_checks.hpp"

namespace bandit_elim {

LowerBoundConfig make_lower_bound_config(std::int64_t n, double eps, double delta,
                                         double beta) {
    if (n < 2) throw std::invalid_argument("lower_bound: n must be >= 2");
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("lower_bound: eps must be in (0, 1/2)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("lower_bound: delta must be in (0, 1)");
    }
    if (!(beta > 0.0 && beta < 0.5)) {
        throw std::invalid_argument("lower_bound: beta must be in (0, 1/2)");
    }
    LowerBoundConfig config;
    config.n = n;
    config.eps = eps;
    config.delta = delta;
    config.beta = beta;
    config.nu = 0.0001 * beta;
    config.m = static_cast<std::int64_t>(
        std::ceil((1.0 + config.nu) * (1.0 / (eps * eps)) * (0.5 - beta) *
                  std::log(1.0 / delta)));
    if (config.m < 1) config.m = 1;
    config.k_threshold =
        (1.0 + 0.001 * beta * eps) * static_cast<double>(config.m) / 2.0;
    return config;
}

std::int64_t discard_count(const LowerBoundConfig& config) {
    return static_cast<std::int64_t>(
        std::floor(config.nu * static_cast<double>(config.n) / (1.0 + config.nu)));
}

std::int64_t hard_instance_good_index(std::int64_t n, std::uint64_t seed) {
    StreamRng rng(stream_seed(seed, 0, 0xB01DULL));
    return static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(n)));
}

Instance hard_instance(std::int64_t n, double eps, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("hard_instance: n must be >= 2");
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("hard_instance: eps must be in (0, 1/2)");
    }
    Instance instance;
    instance.arms.assign(static_cast<std::size_t>(n),
                         ArmSpec{ArmKind::bernoulli, 0.5, 0.0});
    std::int64_t good = hard_instance_good_index(n, seed);
    instance.arms[static_cast<std::size_t>(good)].mean = 0.5 + eps;
    instance.best_index = good;
    return instance;
}

bool exclusion_trial(const LowerBoundConfig& config, std::uint64_t seed) {
    std::int64_t d = discard_count(config);
    if (d == 0) {
        throw std::domain_error("exclusion_trial: discard set is empty (n too small)");
    }
    Instance instance = hard_instance(config.n, config.eps, seed);
    SamplingOracle oracle(instance, seed, 0);
    std::int64_t good = instance.best_index;
    std::vector<std::int64_t> ones(static_cast<std::size_t>(config.n));
    for (std::int64_t arm = 0; arm < config.n; ++arm) {
        ones[static_cast<std::size_t>(arm)] =
            static_cast<std::int64_t>(oracle.pull(arm, config.m).sum);
    }
    // Zero-count rank of the good arm: more zeros = fewer ones; ties resolve
    // toward the lower index. No sort needed, only the good arm's rank.
    std::int64_t good_ones = ones[static_cast<std::size_t>(good)];
    std::int64_t rank = 0;
    for (std::int64_t arm = 0; arm < config.n; ++arm) {
        if (arm == good) continue;
        std::int64_t o = ones[static_cast<std::size_t>(arm)];
        if (o < good_ones || (o == good_ones && arm < good)) ++rank;
    }
    return rank < d;
}

double exclusion_probability(const LowerBoundConfig& config) {
    std::int64_t d = discard_count(config);
    if (d == 0) {
        throw std::domain_error("exclusion_probability: discard set is empty");
    }
    const std::int64_t m = config.m;
    const std::int64_t peers = config.n - 1;
    const double p_good = 0.5 - config.eps;  // good arm's zero probability
    // Zero-count pmf of a bad arm and its upper tail, computed once.
    std::vector<double> bad_pmf(static_cast<std::size_t>(m) + 1);
    for (std::int64_t j = 0; j <= m; ++j) {
        bad_pmf[static_cast<std::size_t>(j)] = std::exp(log_binomial_pmf(m, j, 0.5));
    }
    std::vector<double> bad_gt(static_cast<std::size_t>(m) + 2, 0.0);
    for (std::int64_t j = m; j >= 0; --j) {
        // Suffix sums of a pmf; rounding can creep past 1, which would be an
        // invalid parameter for the binomial below.
        double s =
            bad_gt[static_cast<std::size_t>(j) + 1] + bad_pmf[static_cast<std::size_t>(j)];
        bad_gt[static_cast<std::size_t>(j)] = s > 1.0 ? 1.0 : s;
    }
    double total = 0.0;
    for (std::int64_t k = 0; k <= m; ++k) {
        double pk = std::exp(log_binomial_pmf(m, k, p_good));
        if (pk == 0.0) continue;
        double q_gt = bad_gt[static_cast<std::size_t>(k) + 1];  // bad strictly above
        double q_eq = bad_pmf[static_cast<std::size_t>(k)];
        double not_gt = 1.0 - q_gt;
        double tie_rate = not_gt > 0.0 ? q_eq / not_gt : 1.0;
        if (tie_rate > 1.0) tie_rate = 1.0;
        double inner = 0.0;
        std::int64_t t_max = std::min<std::int64_t>(d - 1, peers);
        for (std::int64_t t = 0; t <= t_max; ++t) {
            double pt = std::exp(log_binomial_pmf(peers, t, q_gt));
            if (pt == 0.0) continue;
            std::int64_t ties_n = peers - t;  // arms that may tie with the good one
            std::int64_t slots = d - t;       // discard slots left at this level
            double kept;
            if (slots >= ties_n + 1) {
                kept = 1.0;
            } else if (tie_rate <= 0.0) {
                kept = 1.0;  // no ties possible, good arm takes the next slot
            } else {
                // Good arm's rank inside the tie block is uniform over
                // W+1 positions; P[discarded] = E[min(slots, W+1)/(W+1)].
                double head = 0.0;
                for (std::int64_t w = 0; w < slots; ++w) {
                    head += std::exp(log_binomial_pmf(ties_n, w, tie_rate));
                }
                double le = 0.0;
                for (std::int64_t j = 0; j <= slots; ++j) {
                    le += std::exp(log_binomial_pmf(ties_n + 1, j, tie_rate));
                }
                double ge = 1.0 - le;
                if (ge < 0.0) ge = 0.0;
                kept = head + static_cast<double>(slots) /
                                  (static_cast<double>(ties_n + 1) * tie_rate) * ge;
            }
            inner += pt * kept;
        }
        total += pk * inner;
    }
    if (total < 0.0) total = 0.0;
    if (total > 1.0) total = 1.0;
    return total;
}

double normal_tail_upper(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double normal_tail_lower_bound(double z) {
    if (!(z > 0.0)) throw std::invalid_argument("normal_tail_lower_bound: z must be > 0");
    // The bare (z/(z^2+1)) e^{-z^2/2} form exceeds the true tail; the normal
    // density factor 1/sqrt(2 pi) is what makes this a lower bound.
    return z / (z * z + 1.0) * std::exp(-0.5 * z * z) /
           std::sqrt(2.0 * std::numbers::pi);
}

double slud_lower_bound(std::int64_t m, double p, double k) {
    if (m < 1) throw std::invalid_argument("slud_lower_bound: m must be >= 1");
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::invalid_argument("slud_lower_bound: p must be in (0, 1/2]");
    }
    double mean = static_cast<double>(m) * p;
    double upper = static_cast<double>(m) * (1.0 - p);
    if (!(k >= mean && k <= upper)) {
        throw std::domain_error("slud_lower_bound: k outside [m p, m (1-p)]");
    }
    double sigma = std::sqrt(static_cast<double>(m) * p * (1.0 - p));
    return normal_tail_upper((k - mean) / sigma);
}

ChainReport verify_chain(double beta, double delta, double eps) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw std::invalid_argument("verify_chain: beta must be in (0, 1/2)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("verify_chain: delta must be in (0, 1)");
    }
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("verify_chain: eps must be in (0, 1/2)");
    }
    ChainReport report;
    report.beta = beta;
    report.delta = delta;
    report.eps = eps;
    double nu = 0.0001 * beta;
    report.m = static_cast<std::int64_t>(std::ceil(
        (1.0 + nu) * (1.0 / (eps * eps)) * (0.5 - beta) * std::log(1.0 / delta)));
    if (report.m < 1) report.m = 1;

    // m is ~1/eps^2 and k - m p is ~eps m, so the direct difference sheds ten
    // digits to cancellation; extended precision keeps the identity check at
    // the 1e-12 level.
    long double ml = static_cast<long double>(report.m);
    long double epsl = static_cast<long double>(eps);
    long double betal = static_cast<long double>(beta);
    long double pl = 0.5L - epsl;
    long double kl = (1.0L + 0.001L * betal * epsl) * ml / 2.0L;
    long double z_direct = (kl - ml * pl) / std::sqrt(ml * pl * (1.0L - pl));
    long double z_closed = (2.0L + 0.001L * betal) * epsl * std::sqrt(ml) /
                           std::sqrt(1.0L - 4.0L * epsl * epsl);
    report.k = static_cast<double>(kl);
    report.z = static_cast<double>(z_closed);

    double z = report.z;
    double rel = static_cast<double>(std::fabs(z_direct - z_closed) / z_closed);
    double tail_lb = normal_tail_lower_bound(z);
    double exp_link = std::exp(-z * z / (2.0 - 0.001 * beta));
    double delta_power = std::pow(delta, 1.0 - beta);

    report.steps.push_back({"regime_eps", eps, 0.0001 * beta, eps < 0.0001 * beta, false});
    report.steps.push_back({"z_identity", rel, 1e-12, rel <= 1e-12, true});
    report.steps.push_back({"slud_domain", static_cast<double>(kl - ml * pl),
                            static_cast<double>(ml * (1.0L - pl) - kl),
                            kl >= ml * pl && kl <= ml * (1.0L - pl), true});
    report.steps.push_back(
        {"borjesson_vs_exp", tail_lb, exp_link, tail_lb >= exp_link, false});
    report.steps.push_back(
        {"exp_vs_delta_power", exp_link, delta_power, exp_link >= delta_power, false});
    report.steps.push_back(
        {"tail_vs_delta_power", tail_lb, delta_power, tail_lb >= delta_power, true});

    report.holds = tail_lb >= delta_power;
    for (const ChainStep& step : report.steps) {
        if (step.required && !step.holds) {
            report.failing_step = step.name;
            break;
        }
    }
    return report;
}

}  // namespace bandit_elim
