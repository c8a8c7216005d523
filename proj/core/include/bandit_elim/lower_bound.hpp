#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandit_elim/arm_model.hpp"

// Hard-instance construction and the numeric side of the lower-bound
// argument: the budget-capped top-zero-count exclusion experiment plus the
// Slud and Borjesson-Sundberg tail inequalities it rests on.

namespace bandit_elim {

struct LowerBoundConfig {
    std::int64_t n = 0;
    double eps = 0.0;
    double delta = 0.0;
    double beta = 0.0;
    double nu = 0.0;           // 0.0001 * beta
    std::int64_t m = 0;        // ceil((1+nu) (1/eps^2) (1/2 - beta) ln(1/delta))
    double k_threshold = 0.0;  // (1 + 0.001*beta*eps) * m / 2
};

// Validates beta in (0, 1/2), eps in (0, 1/2), delta in (0, 1), n >= 2.
LowerBoundConfig make_lower_bound_config(std::int64_t n, double eps, double delta,
                                         double beta);

// floor(nu * n / (1 + nu)): how many arms the exclusion policy discards.
std::int64_t discard_count(const LowerBoundConfig& config);

// n-1 Bernoulli(1/2) arms plus one Bernoulli(1/2 + eps) arm at a position
// derived from `seed` (the good arm emits a zero with probability 1/2 - eps).
Instance hard_instance(std::int64_t n, double eps, std::uint64_t seed = 0);
std::int64_t hard_instance_good_index(std::int64_t n, std::uint64_t seed);

// Pulls every arm of hard_instance(n, eps, seed) exactly m times, ranks by
// zero count descending (lowest index first on ties) and reports whether the
// good arm landed in the discarded top-d block, i.e. whether the policy
// failed. Throws std::domain_error when discard_count(config) == 0.
bool exclusion_trial(const LowerBoundConfig& config, std::uint64_t seed);

// Exact probability of the event exclusion_trial samples, with the good
// arm's position averaged uniformly (matching the seed-determined placement).
// Rank analysis over the good arm's zero count: condition on k zeros, count
// strictly-better bad arms binomially and resolve ties exchangeably.
double exclusion_probability(const LowerBoundConfig& config);

// Upper tail of the standard normal via erfc.
double normal_tail_upper(double z);

// Borjesson-Sundberg lower bound on the normal upper tail:
// (z/(z^2+1)) * exp(-z^2/2) / sqrt(2*pi), z > 0. The density factor is
// required for this to lie below normal_tail_upper.
double normal_tail_lower_bound(double z);

// Slud: Pr[Bin(m, p) >= k] >= Phi_bar((k - m p)/sqrt(m p (1-p))) for
// p <= 1/2 and k in [m p, m (1-p)]. Returns the right-hand side.
double slud_lower_bound(std::int64_t m, double p, double k);

struct ChainStep {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool required = false;  // advisory steps document asymptotic links only
};

struct ChainReport {
    double beta = 0.0;
    double delta = 0.0;
    double eps = 0.0;
    std::int64_t m = 0;
    double k = 0.0;
    double z = 0.0;
    std::vector<ChainStep> steps;
    bool holds = false;        // normal_tail_lower_bound(z) >= delta^(1-beta)
    std::string failing_step;  // first required step that fails; empty if none
};

// Evaluates the tail-bound chain at p = 1/2 - eps with
// m = ceil((1+nu)(1/eps^2)(1/2-beta) ln(1/delta)), k = (1+0.001*beta*eps) m/2.
// z is computed in extended precision both directly and through the closed
// form (2+0.001*beta) eps sqrt(m) / sqrt(1-4 eps^2); the report records
// whether the two agree to 1e-12 relative.
ChainReport verify_chain(double beta, double delta, double eps);

}  // namespace bandit_elim
