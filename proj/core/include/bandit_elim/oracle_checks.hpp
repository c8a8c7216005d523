#pragma once

#include <cstdint>
#include <vector>

#include "bandit_elim/arm_model.hpp"
#include "bandit_elim/schedule.hpp"

// Independent ground truth used to validate the simulator: exact success
// probabilities for tiny Bernoulli instances by full joint enumeration, and
// seeded Monte Carlo estimators with Wilson intervals.

namespace bandit_elim {

struct ExactResult {
    double success_probability = 0.0;
    std::int64_t enumeration_size = 0;  // (samples_per_arm + 1)^n joint cells
};

// Exact probability that the lowest-index empirical argmax after
// samples_per_arm pulls of every arm is an eps-best arm. Bernoulli arms only,
// n <= 4, samples_per_arm <= 64; log-space masses, accumulated per joint
// count vector.
ExactResult exact_naive_success(const Instance& instance, std::int64_t samples_per_arm,
                                double eps);

// BANDIT_ELIM_THREADS env var wins, then max_parallel, then the hardware
// concurrency; always >= 1. Shared by every trial-parallel entry point.
int resolve_threads(int max_parallel);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// 95% Wilson score interval for successes/trials.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials);

struct McResult {
    double rate = 0.0;
    WilsonInterval interval;
    std::int64_t successes = 0;
    std::int64_t trials = 0;
};

// Runs `algorithm` on fresh oracles seeded (master_seed, 0..trials-1) and
// reports the fraction of trials whose chosen arm is eps-best. Trials spread
// over resolve_threads(max_parallel) workers; the aggregate is a commutative
// sum, so the result is identical across thread counts.
McResult mc_success(Algorithm algorithm, const Instance& instance, double eps,
                    double delta, std::int64_t trials, std::uint64_t master_seed,
                    double lambda = kDefaultLambda, double alpha = kDefaultAlpha,
                    int max_parallel = 0);

// Same trial harness but with an explicit per-arm budget: every arm is pulled
// exactly samples_per_arm times and the empirical argmax is scored. This is
// the Monte Carlo twin of exact_naive_success.
McResult mc_fixed_budget_success(const Instance& instance, std::int64_t samples_per_arm,
                                 double eps, std::int64_t trials,
                                 std::uint64_t master_seed, int max_parallel = 0);

// log Pr[Bin(n, p) = k] via lgamma; exact summation helpers for tail checks.
double log_binomial_pmf(std::int64_t n, std::int64_t k, double p);
double binomial_tail_geq(std::int64_t n, std::int64_t k, double p);  // Pr[X >= k]

struct GridPoint {
    std::vector<double> means;  // Bernoulli arms
    std::int64_t samples_per_arm = 0;
    double eps = 0.0;
};

// The fixed 12-point agreement grid (n <= 3, samples_per_arm <= 30).
const std::vector<GridPoint>& agreement_grid();

struct GridOutcome {
    std::size_t index = 0;
    double exact_p = 0.0;
    double mc_rate = 0.0;
    double tolerance = 0.0;  // 3 Monte Carlo standard errors at exact_p
    bool pass = false;
};

// exact_naive_success vs mc_fixed_budget_success on every grid point.
std::vector<GridOutcome> run_agreement_grid(std::int64_t trials, std::uint64_t master_seed,
                                            int max_parallel = 0);

}  // namespace bandit_elim
