#pragma once

#include <cstdint>
#include <vector>

#include "bandit_elim/arm_model.hpp"
#include "bandit_elim/schedule.hpp"

// Executable elimination strategies. Each one replays the plan produced by
// the schedule module against a live SamplingOracle, so total_samples always
// equals predict_samples(...).total_samples for the same parameters.

namespace bandit_elim {

struct Round {
    std::int64_t survivors_before = 0;
    std::int64_t per_arm_samples = 0;
    std::vector<std::int64_t> survivor_indices_after;  // sorted ascending
};

struct RunOutcome {
    std::int64_t chosen_arm = -1;
    std::int64_t total_samples = 0;
    std::vector<Round> rounds;
    bool fallback_taken = false;
    std::vector<std::string> warnings;
};

// Samples every arm ceil((2/eps^2) ln(|arms|/delta)) times and returns the
// empirical argmax (lowest index on ties). A single arm wins with 0 samples.
RunOutcome naive_elimination(SamplingOracle& oracle, const std::vector<std::int64_t>& arms,
                             double eps, double delta);

// Multi-round keep-the-top elimination; returns the final survivor set in
// rounds.back().survivor_indices_after (chosen_arm is the empirical leader of
// the last round). Throws degenerate_schedule_error when delta+phi(n) >= 0.5.
RunOutcome aggressive_elimination(SamplingOracle& oracle,
                                  const std::vector<std::int64_t>& arms, double eps,
                                  double delta);

RunOutcome saba(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double eps,
                double delta);

RunOutcome aba(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double alpha,
               double eps, double delta);

RunOutcome abaleh(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double eps,
                  double delta, double lambda);

RunOutcome median_elimination(SamplingOracle& oracle, const std::vector<std::int64_t>& arms,
                              double eps, double delta);

// Runs the chosen algorithm on the oracle's full arm set.
RunOutcome run_algorithm(Algorithm algorithm, SamplingOracle& oracle, double eps,
                         double delta, double lambda = kDefaultLambda,
                         double alpha = kDefaultAlpha);

namespace detail {

// Samples each arm `per_arm` times and returns the arm ids ordered by
// empirical mean descending, index ascending on ties. Shared by every
// executor so selection semantics cannot drift between algorithms.
std::vector<std::int64_t> rank_by_empirical_mean(SamplingOracle& oracle,
                                                 const std::vector<std::int64_t>& arms,
                                                 std::int64_t per_arm);

}  // namespace detail

}  // namespace bandit_elim
