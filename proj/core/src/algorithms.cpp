#include "bandit_elim/algorithms.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace bandit_elim {

namespace detail {

std::vector<std::int64_t> rank_by_empirical_mean(SamplingOracle& oracle,
                                                 const std::vector<std::int64_t>& arms,
                                                 std::int64_t per_arm) {
    // Equal budgets per arm, so comparing sums is comparing means; for
    // Bernoulli arms the sums are exact integers and ties are exact too.
    std::vector<std::pair<double, std::int64_t>> stats;
    stats.reserve(arms.size());
    for (std::int64_t arm : arms) {
        stats.emplace_back(oracle.pull(arm, per_arm).sum, arm);
    }
    std::sort(stats.begin(), stats.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::int64_t> order;
    order.reserve(stats.size());
    for (const auto& s : stats) order.push_back(s.second);
    return order;
}

}  // namespace detail

namespace {

Round make_round(std::int64_t before, std::int64_t per_arm,
                 std::vector<std::int64_t> survivors_sorted) {
    Round round;
    round.survivors_before = before;
    round.per_arm_samples = per_arm;
    round.survivor_indices_after = std::move(survivors_sorted);
    return round;
}

// Runs the aggressive plan against the oracle; the survivor set of each round
// is the empirical top-k. Returns the per-round trace plus the final set.
struct AggressiveTrace {
    std::vector<Round> rounds;
    std::vector<std::int64_t> survivors;  // sorted ascending
    std::int64_t leader = -1;             // empirical best of the last round
    std::int64_t total = 0;
};

AggressiveTrace execute_aggressive(SamplingOracle& oracle,
                                   const std::vector<std::int64_t>& arms,
                                   const AggressivePlan& plan) {
    AggressiveTrace trace;
    std::vector<std::int64_t> active = arms;
    for (const auto& round : plan.rounds) {
        std::vector<std::int64_t> order =
            detail::rank_by_empirical_mean(oracle, active, round.per_arm);
        order.resize(static_cast<std::size_t>(round.keep));
        trace.leader = order.front();
        std::sort(order.begin(), order.end());
        trace.rounds.push_back(make_round(round.size, round.per_arm, order));
        active = std::move(order);
    }
    trace.survivors = active;
    trace.total = plan.total;
    return trace;
}

// Draws `want` arms uniformly without replacement from `arms` minus
// `exclude`, using a stream derived from the oracle's seeds so the choice is
// reproducible and independent of reward draws.
std::vector<std::int64_t> draw_from_complement(SamplingOracle& oracle,
                                               const std::vector<std::int64_t>& arms,
                                               const std::vector<std::int64_t>& exclude,
                                               std::int64_t want, std::uint64_t tag) {
    std::vector<char> banned(static_cast<std::size_t>(oracle.instance().n()), 0);
    for (std::int64_t arm : exclude) banned[static_cast<std::size_t>(arm)] = 1;
    std::vector<std::int64_t> pool;
    pool.reserve(arms.size());
    for (std::int64_t arm : arms) {
        if (!banned[static_cast<std::size_t>(arm)]) pool.push_back(arm);
    }
    if (want > static_cast<std::int64_t>(pool.size())) {
        want = static_cast<std::int64_t>(pool.size());
    }
    StreamRng rng = oracle.derived_stream(tag);
    for (std::int64_t i = 0; i < want; ++i) {
        std::uint64_t j = static_cast<std::uint64_t>(i) +
                          rng.uniform_below(pool.size() - static_cast<std::uint64_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(want));
    return pool;
}

std::vector<std::int64_t> sorted_union_disjoint(const std::vector<std::int64_t>& a,
                                                const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> merged;
    merged.reserve(a.size() + b.size());
    merged.insert(merged.end(), a.begin(), a.end());
    merged.insert(merged.end(), b.begin(), b.end());
    std::sort(merged.begin(), merged.end());
    return merged;
}

RunOutcome run_naive_fallback(SamplingOracle& oracle, const std::vector<std::int64_t>& arms,
                              double eps, double delta, std::vector<std::string> warnings) {
    RunOutcome out = naive_elimination(oracle, arms, eps, delta);
    out.fallback_taken = true;
    out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
    return out;
}

}  // namespace

RunOutcome naive_elimination(SamplingOracle& oracle, const std::vector<std::int64_t>& arms,
                             double eps, double delta) {
    if (arms.empty()) throw std::invalid_argument("naive_elimination: empty arm set");
    NaivePlan plan = plan_naive(static_cast<std::int64_t>(arms.size()), eps, delta);
    RunOutcome out;
    if (arms.size() == 1) {
        out.chosen_arm = arms.front();
        return out;
    }
    std::vector<std::int64_t> order =
        detail::rank_by_empirical_mean(oracle, arms, plan.per_arm);
    out.chosen_arm = order.front();
    out.total_samples = plan.total;
    out.rounds.push_back(make_round(static_cast<std::int64_t>(arms.size()), plan.per_arm,
                                    {out.chosen_arm}));
    return out;
}

RunOutcome aggressive_elimination(SamplingOracle& oracle,
                                  const std::vector<std::int64_t>& arms, double eps,
                                  double delta) {
    AggressivePlan plan =
        plan_aggressive(static_cast<std::int64_t>(arms.size()), eps, delta);
    AggressiveTrace trace = execute_aggressive(oracle, arms, plan);
    RunOutcome out;
    out.chosen_arm = trace.leader;
    out.total_samples = trace.total;
    out.rounds = std::move(trace.rounds);
    return out;
}

RunOutcome saba(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double eps,
                double delta) {
    SabaPlan plan = plan_saba(static_cast<std::int64_t>(arms.size()), eps, delta);
    if (plan.fallback) return run_naive_fallback(oracle, arms, eps, delta, plan.warnings);
    AggressiveTrace trace = execute_aggressive(oracle, arms, plan.aggressive);
    RunOutcome fin =
        naive_elimination(oracle, trace.survivors, eps, delta / std::numbers::e);
    RunOutcome out;
    out.chosen_arm = fin.chosen_arm;
    out.total_samples = trace.total + fin.total_samples;
    out.rounds = std::move(trace.rounds);
    out.rounds.insert(out.rounds.end(), fin.rounds.begin(), fin.rounds.end());
    out.warnings = plan.warnings;
    return out;
}

RunOutcome aba(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double alpha,
               double eps, double delta) {
    AbaPlan plan = plan_aba(static_cast<std::int64_t>(arms.size()), eps, delta, alpha);
    if (plan.fallback) return run_naive_fallback(oracle, arms, eps, delta, plan.warnings);
    AggressiveTrace trace = execute_aggressive(oracle, arms, plan.aggressive);
    // R comes from the complement of the survivor set so the union size (and
    // with it the sample count) is fixed by the plan, not by overlap luck.
    std::vector<std::int64_t> extra =
        draw_from_complement(oracle, arms, trace.survivors, plan.r_size, 0);
    std::vector<std::int64_t> pool = sorted_union_disjoint(trace.survivors, extra);
    RunOutcome fin =
        naive_elimination(oracle, pool, (1.0 - alpha) * eps, delta / std::numbers::e);
    RunOutcome out;
    out.chosen_arm = fin.chosen_arm;
    out.total_samples = trace.total + fin.total_samples;
    out.rounds = std::move(trace.rounds);
    out.rounds.insert(out.rounds.end(), fin.rounds.begin(), fin.rounds.end());
    out.warnings = plan.warnings;
    return out;
}

RunOutcome abaleh(SamplingOracle& oracle, const std::vector<std::int64_t>& arms, double eps,
                  double delta, double lambda) {
    AbalehPlan plan =
        plan_abaleh(static_cast<std::int64_t>(arms.size()), eps, delta, lambda);
    if (plan.fallback) return run_naive_fallback(oracle, arms, eps, delta, plan.warnings);
    RunOutcome out;
    out.warnings = plan.warnings;
    // Stage 1: coarse estimate of every arm, shortlist the empirical top.
    std::vector<std::int64_t> shortlist =
        detail::rank_by_empirical_mean(oracle, arms, plan.stage1_per_arm);
    shortlist.resize(static_cast<std::size_t>(plan.a0_size));
    std::sort(shortlist.begin(), shortlist.end());
    out.rounds.push_back(make_round(static_cast<std::int64_t>(arms.size()),
                                    plan.stage1_per_arm, shortlist));
    AggressiveTrace trace = execute_aggressive(oracle, shortlist, plan.aggressive);
    std::vector<std::int64_t> extra =
        draw_from_complement(oracle, arms, trace.survivors, plan.r_size, 1);
    std::vector<std::int64_t> pool = sorted_union_disjoint(trace.survivors, extra);
    RunOutcome fin =
        naive_elimination(oracle, pool, (1.0 - plan.alpha) * eps, delta / 4.0);
    out.chosen_arm = fin.chosen_arm;
    out.total_samples = static_cast<std::int64_t>(arms.size()) * plan.stage1_per_arm +
                        trace.total + fin.total_samples;
    out.rounds.insert(out.rounds.end(), trace.rounds.begin(), trace.rounds.end());
    out.rounds.insert(out.rounds.end(), fin.rounds.begin(), fin.rounds.end());
    return out;
}

RunOutcome median_elimination(SamplingOracle& oracle, const std::vector<std::int64_t>& arms,
                              double eps, double delta) {
    if (arms.empty()) throw std::invalid_argument("median_elimination: empty arm set");
    MedianPlan plan = plan_median(static_cast<std::int64_t>(arms.size()), eps, delta);
    RunOutcome out;
    out.chosen_arm = arms.front();
    std::vector<std::int64_t> active = arms;
    for (const auto& round : plan.rounds) {
        std::vector<std::int64_t> order =
            detail::rank_by_empirical_mean(oracle, active, round.per_arm);
        order.resize(static_cast<std::size_t>(round.keep));
        out.chosen_arm = order.front();
        std::sort(order.begin(), order.end());
        out.rounds.push_back(make_round(round.size, round.per_arm, order));
        active = std::move(order);
    }
    if (active.size() == 1) out.chosen_arm = active.front();
    out.total_samples = plan.total;
    return out;
}

RunOutcome run_algorithm(Algorithm algorithm, SamplingOracle& oracle, double eps,
                         double delta, double lambda, double alpha) {
    std::vector<std::int64_t> arms(static_cast<std::size_t>(oracle.instance().n()));
    for (std::size_t i = 0; i < arms.size(); ++i) arms[i] = static_cast<std::int64_t>(i);
    switch (algorithm) {
        case Algorithm::naive: return naive_elimination(oracle, arms, eps, delta);
        case Algorithm::aggressive: return aggressive_elimination(oracle, arms, eps, delta);
        case Algorithm::saba: return saba(oracle, arms, eps, delta);
        case Algorithm::aba: return aba(oracle, arms, alpha, eps, delta);
        case Algorithm::abaleh: return abaleh(oracle, arms, eps, delta, lambda);
        case Algorithm::median: return median_elimination(oracle, arms, eps, delta);
    }
    throw std::invalid_argument("run_algorithm: unknown algorithm");
}

}  // namespace bandit_elim
