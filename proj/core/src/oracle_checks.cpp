#include "bandit_elim/oracle_checks.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "bandit_elim/algorithms.hpp"
#include "trial_pool.hpp"

namespace bandit_elim {

int resolve_threads(int max_parallel) {
    if (const char* env = std::getenv("BANDIT_ELIM_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
            // fall through to the configured value
        }
    }
    if (max_parallel >= 1) return max_parallel;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double log_binomial_pmf(std::int64_t n, std::int64_t k, double p) {
    if (n < 0) throw std::invalid_argument("log_binomial_pmf: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("log_binomial_pmf: p must be in [0, 1]");
    }
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (k < 0 || k > n) return neg_inf;
    if (p == 0.0) return k == 0 ? 0.0 : neg_inf;
    if (p == 1.0) return k == n ? 0.0 : neg_inf;
    double nd = static_cast<double>(n), kd = static_cast<double>(k);
    return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
           kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

double binomial_tail_geq(std::int64_t n, std::int64_t k, double p) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    double sum = 0.0;
    for (std::int64_t j = k; j <= n; ++j) sum += std::exp(log_binomial_pmf(n, j, p));
    return sum > 1.0 ? 1.0 : sum;
}

ExactResult exact_naive_success(const Instance& instance, std::int64_t samples_per_arm,
                                double eps) {
    std::int64_t n = instance.n();
    if (n < 1 || n > 4) {
        throw std::invalid_argument("exact_naive_success: n must be in [1, 4]");
    }
    if (samples_per_arm < 0 || samples_per_arm > 64) {
        throw std::invalid_argument("exact_naive_success: samples_per_arm must be in [0, 64]");
    }
    if (eps < 0.0) throw std::invalid_argument("exact_naive_success: eps must be >= 0");
    for (const ArmSpec& arm : instance.arms) {
        if (arm.kind != ArmKind::bernoulli) {
            throw std::invalid_argument("exact_naive_success: Bernoulli arms only");
        }
    }
    const std::int64_t s = samples_per_arm;
    std::vector<std::vector<double>> pmf(static_cast<std::size_t>(n));
    for (std::int64_t a = 0; a < n; ++a) {
        auto& table = pmf[static_cast<std::size_t>(a)];
        table.resize(static_cast<std::size_t>(s) + 1);
        for (std::int64_t k = 0; k <= s; ++k) {
            table[static_cast<std::size_t>(k)] =
                std::exp(log_binomial_pmf(s, k, instance.arms[static_cast<std::size_t>(a)].mean));
        }
    }
    std::vector<char> good(static_cast<std::size_t>(n));
    for (std::int64_t a = 0; a < n; ++a) {
        good[static_cast<std::size_t>(a)] = is_eps_best(instance, a, eps) ? 1 : 0;
    }
    // Odometer over joint count vectors; the winner is the lowest-index
    // maximal count, matching the executor's tie rule exactly.
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    double success = 0.0;
    std::int64_t cells = 0;
    while (true) {
        ++cells;
        std::int64_t winner = 0;
        for (std::int64_t a = 1; a < n; ++a) {
            if (counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(winner)]) {
                winner = a;
            }
        }
        if (good[static_cast<std::size_t>(winner)]) {
            double mass = 1.0;
            for (std::int64_t a = 0; a < n; ++a) {
                mass *= pmf[static_cast<std::size_t>(a)]
                           [static_cast<std::size_t>(counts[static_cast<std::size_t>(a)])];
            }
            success += mass;
        }
        std::int64_t pos = 0;
        while (pos < n && counts[static_cast<std::size_t>(pos)] == s) {
            counts[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
        ++counts[static_cast<std::size_t>(pos)];
    }
    if (success > 1.0) success = 1.0;
    if (success < 0.0) success = 0.0;
    return ExactResult{success, cells};
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials) {
    if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (successes < 0 || successes > trials) {
        throw std::invalid_argument("wilson_interval: successes out of range");
    }
    const double z = 1.959963984540054;  // 97.5% normal quantile
    double nt = static_cast<double>(trials);
    double ph = static_cast<double>(successes) / nt;
    double denom = 1.0 + z * z / nt;
    double center = ph + z * z / (2.0 * nt);
    double half = z * std::sqrt(ph * (1.0 - ph) / nt + z * z / (4.0 * nt * nt));
    WilsonInterval interval{(center - half) / denom, (center + half) / denom};
    if (interval.lo < 0.0) interval.lo = 0.0;
    if (interval.hi > 1.0) interval.hi = 1.0;
    return interval;
}

namespace {

McResult fold_successes(const std::vector<char>& ok) {
    McResult result;
    result.trials = static_cast<std::int64_t>(ok.size());
    result.successes = 0;
    for (char c : ok) result.successes += c;
    result.rate = static_cast<double>(result.successes) / static_cast<double>(result.trials);
    result.interval = wilson_interval(result.successes, result.trials);
    return result;
}

}  // namespace

McResult mc_success(Algorithm algorithm, const Instance& instance, double eps,
                    double delta, std::int64_t trials, std::uint64_t master_seed,
                    double lambda, double alpha, int max_parallel) {
    if (trials < 1) throw std::invalid_argument("mc_success: trials must be >= 1");
    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    detail::parallel_trials(trials, resolve_threads(max_parallel), [&](std::int64_t t) {
        SamplingOracle oracle(instance, master_seed, static_cast<std::uint64_t>(t));
        RunOutcome outcome = run_algorithm(algorithm, oracle, eps, delta, lambda, alpha);
        ok[static_cast<std::size_t>(t)] =
            is_eps_best(instance, outcome.chosen_arm, eps) ? 1 : 0;
    });
    return fold_successes(ok);
}

McResult mc_fixed_budget_success(const Instance& instance, std::int64_t samples_per_arm,
                                 double eps, std::int64_t trials,
                                 std::uint64_t master_seed, int max_parallel) {
    if (trials < 1) {
        throw std::invalid_argument("mc_fixed_budget_success: trials must be >= 1");
    }
    if (samples_per_arm < 0) {
        throw std::invalid_argument("mc_fixed_budget_success: samples_per_arm must be >= 0");
    }
    std::vector<std::int64_t> arms(static_cast<std::size_t>(instance.n()));
    std::iota(arms.begin(), arms.end(), 0);
    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    detail::parallel_trials(trials, resolve_threads(max_parallel), [&](std::int64_t t) {
        SamplingOracle oracle(instance, master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::int64_t> order =
            detail::rank_by_empirical_mean(oracle, arms, samples_per_arm);
        ok[static_cast<std::size_t>(t)] =
            is_eps_best(instance, order.front(), eps) ? 1 : 0;
    });
    return fold_successes(ok);
}

const std::vector<GridPoint>& agreement_grid() {
    static const std::vector<GridPoint> grid = {
        {{0.6, 0.5}, 10, 0.0},         {{0.6, 0.5}, 30, 0.0},
        {{0.55, 0.45}, 20, 0.0},       {{0.65, 0.5}, 5, 0.0},
        {{0.8, 0.8}, 12, 0.0},         {{0.7, 0.55}, 25, 0.1},
        {{0.6, 0.5, 0.3}, 20, 0.0},    {{0.6, 0.5, 0.4}, 30, 0.0},
        {{0.55, 0.5, 0.45}, 10, 0.0},  {{0.7, 0.6, 0.5}, 15, 0.1},
        {{0.5, 0.5, 0.5}, 7, 0.0},     {{0.65, 0.55, 0.45}, 30, 0.0},
    };
    return grid;
}

std::vector<GridOutcome> run_agreement_grid(std::int64_t trials, std::uint64_t master_seed,
                                            int max_parallel) {
    const std::vector<GridPoint>& grid = agreement_grid();
    std::vector<GridOutcome> outcomes;
    outcomes.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const GridPoint& point = grid[i];
        std::vector<ArmGroup> groups;
        groups.reserve(point.means.size());
        for (double mean : point.means) {
            groups.push_back({ArmSpec{ArmKind::bernoulli, mean, 0.0}, 1});
        }
        Instance instance = make_instance(groups);
        ExactResult exact = exact_naive_success(instance, point.samples_per_arm, point.eps);
        McResult mc = mc_fixed_budget_success(
            instance, point.samples_per_arm, point.eps, trials,
            stream_seed(master_seed, 0xA9u, static_cast<std::uint64_t>(i)), max_parallel);
        GridOutcome outcome;
        outcome.index = i;
        outcome.exact_p = exact.success_probability;
        outcome.mc_rate = mc.rate;
        outcome.tolerance = 3.0 * std::sqrt(exact.success_probability *
                                            (1.0 - exact.success_probability) /
                                            static_cast<double>(trials));
        outcome.pass = std::fabs(mc.rate - exact.success_probability) <=
                       outcome.tolerance + 1e-12;
        outcomes.push_back(outcome);
    }
    return outcomes;
}

}  // namespace bandit_elim
