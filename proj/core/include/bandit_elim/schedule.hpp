#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Closed-form schedule math shared by the planners and the executable
// algorithms. Every sample count an algorithm consumes is decided here, so a
// run's total is a pure function of (algorithm, n, eps, delta, lambda, alpha)
// and never of the drawn data.

namespace bandit_elim {

// Thrown when delta + phi(n) leaves the contraction regime and the
// elimination schedule cannot make progress; callers fall back to the
// single-round baseline.
struct degenerate_schedule_error : std::domain_error {
    using std::domain_error::domain_error;
};

// phi(n) = sqrt(6 ln n / n^{3/4}), n >= 2. May exceed 1 for small n; callers
// must treat that as the degenerate regime.
double phi(std::int64_t n);

// phi(n, d) = sqrt((ln 10 + d ln n + ln ln n) / n^{3/4}), n >= 3, d >= 0.
double phi_d(std::int64_t n, double d);

// t(n) = ceil((ln n + 4 ln 2) / (4 ln(1/(delta + phi(n))))). Throws
// degenerate_schedule_error when delta + phi(n) >= 1.
std::int64_t rounds_t(std::int64_t n, double delta);

// G(n, delta) = sum_{i=1..t(n)} (delta + phi(n))^i (i + 1).
double big_g(std::int64_t n, double delta);

// ceil(ln(1/confidence_delta) / (2 accuracy^2)); 0 when confidence_delta = 1.
std::int64_t hoeffding_samples(double accuracy, double confidence_delta);

enum class Algorithm { naive, aggressive, saba, aba, abaleh, median };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline constexpr double kDefaultAlpha = 0.6321205588285577;  // 1 - 1/e
inline constexpr double kDefaultLambda = 0.5;

namespace detail {

// ceil(n^{num/den}) in long double with a snap to nearby integers so that
// exact powers (n = k^den) do not drift across one ulp.
std::int64_t ceil_pow_frac(std::int64_t n, int num, int den);

// ceil(n^{num/den} / 2), same snapping.
std::int64_t ceil_half_pow_frac(std::int64_t n, int num, int den);

}  // namespace detail

// ---- per-algorithm plans ----
// The plans are the single source of truth: predict_samples() renders them
// into a SchedulePrediction and the executors in algorithms.cpp replay them
// against a live oracle. Any budget change must happen in the plan builders.

struct NaivePlan {
    std::int64_t n_arms = 0;
    std::int64_t per_arm = 0;  // 0 when n_arms <= 1
    std::int64_t total = 0;
};

NaivePlan plan_naive(std::int64_t n_arms, double eps, double delta);

struct AggressivePlan {
    std::int64_t n = 0;
    double q = 0.0;               // delta + phi(n)
    std::int64_t base = 0;        // ceil((2/eps^2) ln(1/delta))
    std::int64_t floor_size = 0;  // ceil(n^{3/4}/2)
    std::int64_t t = 0;
    struct Round {
        std::int64_t size = 0;
        std::int64_t per_arm = 0;
        std::int64_t keep = 0;
    };
    std::vector<Round> rounds;
    std::int64_t final_size = 0;
    std::int64_t total = 0;
};

// Throws degenerate_schedule_error when delta + phi(n) >= 0.5 (or n < 2).
AggressivePlan plan_aggressive(std::int64_t n, double eps, double delta);

struct SabaPlan {
    bool fallback = false;  // degenerate schedule: run plain naive instead
    NaivePlan fallback_naive;
    AggressivePlan aggressive;  // at (eps, delta/2)
    NaivePlan final_naive;      // at (eps, delta/e) on the survivor set
    std::vector<std::string> warnings;
    std::int64_t total = 0;
};

SabaPlan plan_saba(std::int64_t n, double eps, double delta);

struct AbaPlan {
    bool fallback = false;  // n below max(1e5, delta^-4), or degenerate
    NaivePlan fallback_naive;
    std::int64_t r_size = 0;  // ceil(n^{7/8}/2), capped by the complement
    AggressivePlan aggressive;  // at (alpha*eps, delta/2)
    std::int64_t union_size = 0;
    NaivePlan final_naive;  // at ((1-alpha)*eps, delta/e)
    std::vector<std::string> warnings;
    std::int64_t total = 0;
};

AbaPlan plan_aba(std::int64_t n, double eps, double delta, double alpha);

struct AbalehPlan {
    bool fallback = false;  // internal schedule degenerate: run plain naive
    NaivePlan fallback_naive;
    double alpha = 0.0;  // sqrt(1 - lambda/8)
    std::int64_t stage1_per_arm = 0;
    std::int64_t a0_size = 0;  // ceil(lambda*n/50)
    std::int64_t r_size = 0;   // ceil(n^{3/4}), capped by the complement
    AggressivePlan aggressive;  // at (alpha*eps, delta/4) on A0
    std::int64_t union_size = 0;
    NaivePlan final_naive;  // at ((1-alpha)*eps, delta/4)
    std::vector<std::string> warnings;
    std::int64_t total = 0;
};

AbalehPlan plan_abaleh(std::int64_t n, double eps, double delta, double lambda);

struct MedianPlan {
    struct Round {
        std::int64_t size = 0;
        std::int64_t per_arm = 0;
        std::int64_t keep = 0;  // ceil(size/2)
    };
    std::vector<Round> rounds;
    std::int64_t total = 0;
};

MedianPlan plan_median(std::int64_t n, double eps, double delta);

// ---- rendered prediction ----

struct RoundPlan {
    std::int64_t survivor_count = 0;
    std::int64_t per_arm_samples = 0;
};

struct SchedulePrediction {
    Algorithm algorithm = Algorithm::naive;
    std::int64_t n = 0;
    double eps = 0.0;
    double delta = 0.0;
    std::optional<double> lambda;
    std::optional<double> alpha;
    std::vector<RoundPlan> per_round;
    std::int64_t total_samples = 0;
    bool fallback = false;
    std::vector<std::string> warnings;
};

// Exact per-round budgets and the exact total an execution will consume.
// Throws degenerate_schedule_error only for Algorithm::aggressive; the
// composite algorithms route degenerate schedules to their naive fallback.
SchedulePrediction predict_samples(Algorithm algorithm, std::int64_t n, double eps,
                                   double delta, double lambda = kDefaultLambda,
                                   double alpha = kDefaultAlpha);

}  // namespace bandit_elim
