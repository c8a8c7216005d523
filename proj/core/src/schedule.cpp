#include "bandit_elim/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bandit_elim {

namespace {

inline std::int64_t ceil_i64(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

void validate_eps_delta(const char* who, double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument(std::string(who) + ": eps must be in (0, 1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument(std::string(who) + ": delta must be in (0, 1)");
    }
}

}  // namespace

double phi(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("phi: n must be >= 2");
    double nd = static_cast<double>(n);
    return std::sqrt(6.0 * std::log(nd) / std::pow(nd, 0.75));
}

double phi_d(std::int64_t n, double d) {
    if (n < 3) throw std::invalid_argument("phi_d: n must be >= 3");
    if (d < 0.0) throw std::invalid_argument("phi_d: d must be >= 0");
    double nd = static_cast<double>(n);
    double num = std::log(10.0) + d * std::log(nd) + std::log(std::log(nd));
    return std::sqrt(num / std::pow(nd, 0.75));
}

std::int64_t rounds_t(std::int64_t n, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("rounds_t: delta must be > 0");
    double q = delta + phi(n);
    if (q >= 1.0) throw degenerate_schedule_error("rounds_t: delta + phi(n) >= 1");
    double value = (std::log(static_cast<double>(n)) + 4.0 * std::log(2.0)) /
                   (4.0 * std::log(1.0 / q));
    std::int64_t t = ceil_i64(value);
    return t < 1 ? 1 : t;
}

double big_g(std::int64_t n, double delta) {
    std::int64_t t = rounds_t(n, delta);
    double q = delta + phi(n);
    double sum = 0.0;
    double power = 1.0;
    for (std::int64_t i = 1; i <= t; ++i) {
        power *= q;
        sum += power * static_cast<double>(i + 1);
    }
    return sum;
}

std::int64_t hoeffding_samples(double accuracy, double confidence_delta) {
    if (!(accuracy > 0.0)) throw std::invalid_argument("hoeffding_samples: accuracy must be > 0");
    if (!(confidence_delta > 0.0 && confidence_delta <= 1.0)) {
        throw std::invalid_argument("hoeffding_samples: confidence must be in (0, 1]");
    }
    return ceil_i64(std::log(1.0 / confidence_delta) / (2.0 * accuracy * accuracy));
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::naive: return "naive";
        case Algorithm::aggressive: return "aggressive";
        case Algorithm::saba: return "saba";
        case Algorithm::aba: return "aba";
        case Algorithm::abaleh: return "abaleh";
        case Algorithm::median: return "median";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "naive") return Algorithm::naive;
    if (name == "aggressive") return Algorithm::aggressive;
    if (name == "saba") return Algorithm::saba;
    if (name == "aba") return Algorithm::aba;
    if (name == "abaleh") return Algorithm::abaleh;
    if (name == "median") return Algorithm::median;
    return std::nullopt;
}

namespace detail {

namespace {

std::int64_t ceil_snapped(long double x) {
    long double r = std::round(x);
    if (std::fabs(x - r) <= 1e-9L * std::fmax(1.0L, std::fabs(r))) x = r;
    return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

std::int64_t ceil_pow_frac(std::int64_t n, int num, int den) {
    long double x = std::pow(static_cast<long double>(n),
                              static_cast<long double>(num) / static_cast<long double>(den));
    return ceil_snapped(x);
}

std::int64_t ceil_half_pow_frac(std::int64_t n, int num, int den) {
    long double x = std::pow(static_cast<long double>(n),
                              static_cast<long double>(num) / static_cast<long double>(den));
    return ceil_snapped(x / 2.0L);
}

}  // namespace detail

NaivePlan plan_naive(std::int64_t n_arms, double eps, double delta) {
    if (n_arms < 1) throw std::invalid_argument("naive: need at least one arm");
    validate_eps_delta("naive", eps, delta);
    NaivePlan plan;
    plan.n_arms = n_arms;
    if (n_arms == 1) return plan;
    plan.per_arm =
        ceil_i64((2.0 / (eps * eps)) * std::log(static_cast<double>(n_arms) / delta));
    plan.total = n_arms * plan.per_arm;
    return plan;
}

AggressivePlan plan_aggressive(std::int64_t n, double eps, double delta) {
    if (n < 2) throw degenerate_schedule_error("aggressive: need at least two arms");
    validate_eps_delta("aggressive", eps, delta);
    AggressivePlan plan;
    plan.n = n;
    plan.q = delta + phi(n);
    if (plan.q >= 0.5) {
        throw degenerate_schedule_error("aggressive: delta + phi(n) >= 0.5");
    }
    plan.base = ceil_i64((2.0 / (eps * eps)) * std::log(1.0 / delta));
    plan.floor_size = detail::ceil_half_pow_frac(n, 3, 4);
    plan.t = rounds_t(n, delta);
    std::int64_t size = n;
    // Budget grows linearly per round; the keep-count contracts by the factor
    // q but never below floor_size. t(n) rounds suffice mathematically; the
    // +1 guard mirrors the stop rule and absorbs boundary rounding.
    for (std::int64_t i = 1; i <= plan.t + 1; ++i) {
        AggressivePlan::Round round;
        round.size = size;
        round.per_arm = i * plan.base;
        std::int64_t keep = static_cast<std::int64_t>(
            std::floor(static_cast<double>(size) * plan.q));
        if (keep < plan.floor_size) keep = plan.floor_size;
        if (keep > size) keep = size;
        round.keep = keep;
        plan.rounds.push_back(round);
        plan.total += round.size * round.per_arm;
        size = keep;
        if (size <= plan.floor_size) break;
    }
    plan.final_size = size;
    return plan;
}

SabaPlan plan_saba(std::int64_t n, double eps, double delta) {
    if (n < 1) throw std::invalid_argument("saba: need at least one arm");
    validate_eps_delta("saba", eps, delta);
    SabaPlan plan;
    double regime_n = std::max(1e5, std::pow(delta, -4.0));
    if (static_cast<double>(n) < regime_n) {
        plan.warnings.push_back("outside analysis regime: n < max(1e5, 1/delta^4)");
    }
    try {
        plan.aggressive = plan_aggressive(n, eps, delta / 2.0);
    } catch (const degenerate_schedule_error&) {
        plan.fallback = true;
        plan.warnings.push_back("degenerate schedule at delta/2; running naive instead");
        plan.fallback_naive = plan_naive(n, eps, delta);
        plan.total = plan.fallback_naive.total;
        return plan;
    }
    plan.final_naive =
        plan_naive(plan.aggressive.final_size, eps, delta / std::numbers::e);
    plan.total = plan.aggressive.total + plan.final_naive.total;
    return plan;
}

AbaPlan plan_aba(std::int64_t n, double eps, double delta, double alpha) {
    if (n < 1) throw std::invalid_argument("aba: need at least one arm");
    validate_eps_delta("aba", eps, delta);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("aba: alpha must be in (0, 1)");
    }
    AbaPlan plan;
    double regime_n = std::max(1e5, std::pow(delta, -4.0));
    bool degenerate = false;
    if (static_cast<double>(n) >= regime_n) {
        try {
            plan.aggressive = plan_aggressive(n, alpha * eps, delta / 2.0);
        } catch (const degenerate_schedule_error&) {
            degenerate = true;
            plan.warnings.push_back("degenerate schedule at delta/2; running naive instead");
        }
    }
    if (static_cast<double>(n) < regime_n || degenerate) {
        plan.fallback = true;
        plan.fallback_naive = plan_naive(n, eps, delta);
        plan.total = plan.fallback_naive.total;
        return plan;
    }
    plan.r_size = detail::ceil_half_pow_frac(n, 7, 8);
    std::int64_t complement = n - plan.aggressive.final_size;
    if (plan.r_size > complement) plan.r_size = complement;
    plan.union_size = plan.aggressive.final_size + plan.r_size;
    plan.final_naive =
        plan_naive(plan.union_size, (1.0 - alpha) * eps, delta / std::numbers::e);
    plan.total = plan.aggressive.total + plan.final_naive.total;
    return plan;
}

AbalehPlan plan_abaleh(std::int64_t n, double eps, double delta, double lambda) {
    if (n < 1) throw std::invalid_argument("abaleh: need at least one arm");
    validate_eps_delta("abaleh", eps, delta);
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("abaleh: lambda must be in (0, 1)");
    }
    AbalehPlan plan;
    plan.alpha = std::sqrt(1.0 - lambda / 8.0);
    if (static_cast<double>(n) * delta <= 1.0) {
        plan.warnings.push_back("outside analysis regime: n <= 1/delta");
    }
    // delta0 solves lambda/100 = delta0^(lambda^2/256); far below any usable
    // delta, so this warning fires on every practical configuration.
    double delta0 = std::pow(lambda / 100.0, 256.0 / (lambda * lambda));
    if (delta > delta0) {
        plan.warnings.push_back("outside analysis regime: delta > delta0(lambda)");
    }
    plan.stage1_per_arm = ceil_i64((1.0 + lambda / 2.0) * std::log(1.0 / delta) /
                                   (2.0 * eps * eps));
    plan.a0_size = ceil_i64(lambda * static_cast<double>(n) / 50.0);
    bool degenerate = plan.a0_size < 2 || plan.a0_size > n;
    if (!degenerate) {
        try {
            plan.aggressive = plan_aggressive(plan.a0_size, eps * plan.alpha, delta / 4.0);
        } catch (const degenerate_schedule_error&) {
            degenerate = true;
        }
    }
    if (degenerate) {
        plan.fallback = true;
        plan.warnings.push_back(
            "degenerate schedule on the stage-1 shortlist; running naive instead");
        plan.fallback_naive = plan_naive(n, eps, delta);
        plan.total = plan.fallback_naive.total;
        return plan;
    }
    plan.r_size = detail::ceil_pow_frac(n, 3, 4);
    std::int64_t complement = n - plan.aggressive.final_size;
    if (plan.r_size > complement) plan.r_size = complement;
    plan.union_size = plan.aggressive.final_size + plan.r_size;
    plan.final_naive =
        plan_naive(plan.union_size, (1.0 - plan.alpha) * eps, delta / 4.0);
    plan.total = static_cast<std::int64_t>(n) * plan.stage1_per_arm +
                 plan.aggressive.total + plan.final_naive.total;
    return plan;
}

MedianPlan plan_median(std::int64_t n, double eps, double delta) {
    if (n < 1) throw std::invalid_argument("median: need at least one arm");
    validate_eps_delta("median", eps, delta);
    MedianPlan plan;
    std::int64_t size = n;
    double eps_l = eps / 4.0;
    double delta_l = delta / 2.0;
    while (size > 1) {
        MedianPlan::Round round;
        round.size = size;
        round.per_arm = ceil_i64((4.0 / (eps_l * eps_l)) * std::log(3.0 / delta_l));
        round.keep = (size + 1) / 2;
        plan.rounds.push_back(round);
        plan.total += round.size * round.per_arm;
        size = round.keep;
        eps_l *= 0.75;
        delta_l *= 0.5;
    }
    return plan;
}

namespace {

void append_naive_round(SchedulePrediction& out, const NaivePlan& plan) {
    if (plan.n_arms > 1) out.per_round.push_back({plan.n_arms, plan.per_arm});
}

void append_aggressive_rounds(SchedulePrediction& out, const AggressivePlan& plan) {
    for (const auto& round : plan.rounds) {
        out.per_round.push_back({round.size, round.per_arm});
    }
}

}  // namespace

SchedulePrediction predict_samples(Algorithm algorithm, std::int64_t n, double eps,
                                   double delta, double lambda, double alpha) {
    SchedulePrediction out;
    out.algorithm = algorithm;
    out.n = n;
    out.eps = eps;
    out.delta = delta;
    switch (algorithm) {
        case Algorithm::naive: {
            NaivePlan plan = plan_naive(n, eps, delta);
            append_naive_round(out, plan);
            out.total_samples = plan.total;
            break;
        }
        case Algorithm::aggressive: {
            AggressivePlan plan = plan_aggressive(n, eps, delta);
            append_aggressive_rounds(out, plan);
            out.total_samples = plan.total;
            break;
        }
        case Algorithm::saba: {
            SabaPlan plan = plan_saba(n, eps, delta);
            out.fallback = plan.fallback;
            out.warnings = plan.warnings;
            if (plan.fallback) {
                append_naive_round(out, plan.fallback_naive);
            } else {
                append_aggressive_rounds(out, plan.aggressive);
                append_naive_round(out, plan.final_naive);
            }
            out.total_samples = plan.total;
            break;
        }
        case Algorithm::aba: {
            out.alpha = alpha;
            AbaPlan plan = plan_aba(n, eps, delta, alpha);
            out.fallback = plan.fallback;
            out.warnings = plan.warnings;
            if (plan.fallback) {
                append_naive_round(out, plan.fallback_naive);
            } else {
                append_aggressive_rounds(out, plan.aggressive);
                append_naive_round(out, plan.final_naive);
            }
            out.total_samples = plan.total;
            break;
        }
        case Algorithm::abaleh: {
            out.lambda = lambda;
            AbalehPlan plan = plan_abaleh(n, eps, delta, lambda);
            out.fallback = plan.fallback;
            out.warnings = plan.warnings;
            if (plan.fallback) {
                append_naive_round(out, plan.fallback_naive);
            } else {
                out.per_round.push_back({n, plan.stage1_per_arm});
                append_aggressive_rounds(out, plan.aggressive);
                append_naive_round(out, plan.final_naive);
            }
            out.total_samples = plan.total;
            break;
        }
        case Algorithm::median: {
            MedianPlan plan = plan_median(n, eps, delta);
            for (const auto& round : plan.rounds) {
                out.per_round.push_back({round.size, round.per_arm});
            }
            out.total_samples = plan.total;
            break;
        }
    }
    return out;
}

}  // namespace bandit_elim
