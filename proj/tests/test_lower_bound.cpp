#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "bandit_elim/lower_bound.hpp"
#include "bandit_elim/oracle_checks.hpp"

using namespace bandit_elim;
using doctest::Approx;

namespace {

// Direct enumeration of the three-arm exclusion event: joint zero counts,
// rank by count descending with index tiebreak, good position averaged.
double brute_force_exclusion_n3(std::int64_t m, double eps, std::int64_t d) {
    double p_good = 0.5 - eps;
    double total = 0.0;
    for (int g = 0; g < 3; ++g) {
        for (std::int64_t z0 = 0; z0 <= m; ++z0) {
            for (std::int64_t z1 = 0; z1 <= m; ++z1) {
                for (std::int64_t z2 = 0; z2 <= m; ++z2) {
                    std::int64_t zeros[3] = {z0, z1, z2};
                    double log_p = 0.0;
                    for (int arm = 0; arm < 3; ++arm) {
                        log_p += log_binomial_pmf(m, zeros[arm],
                                                  arm == g ? p_good : 0.5);
                    }
                    std::int64_t rank = 0;
                    for (int arm = 0; arm < 3; ++arm) {
                        if (arm == g) continue;
                        if (zeros[arm] > zeros[g] ||
                            (zeros[arm] == zeros[g] && arm < g)) {
                            ++rank;
                        }
                    }
                    if (rank < d) total += std::exp(log_p);
                }
            }
        }
    }
    return total / 3.0;
}

LowerBoundConfig tiny_config(std::int64_t m, double eps, double nu) {
    LowerBoundConfig config;
    config.n = 3;
    config.eps = eps;
    config.delta = 0.1;
    config.beta = 0.25;
    config.nu = nu;
    config.m = m;
    config.k_threshold = 0.0;
    return config;
}

}  // namespace

TEST_CASE("config construction at the pinned point") {
    auto config = make_lower_bound_config(1000000, 0.025, 0.1, 0.25);
    CHECK(config.nu == Approx(2.5e-5).epsilon(1e-15));
    CHECK(config.m == 922);
    CHECK(config.k_threshold == Approx(461.00288124999997).epsilon(1e-14));
    CHECK(discard_count(config) == 24);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(make_lower_bound_config(1, 0.1, 0.1, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(make_lower_bound_config(100, 0.5, 0.1, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(make_lower_bound_config(100, 0.1, 1.0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(make_lower_bound_config(100, 0.1, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_lower_bound_config(100, 0.1, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("hard instance plants one good arm at a seeded position") {
    for (std::uint64_t seed : {0ULL, 1ULL, 7ULL}) {
        Instance inst = hard_instance(1000, 0.1, seed);
        std::int64_t good = hard_instance_good_index(1000, seed);
        CHECK(inst.best_index == good);
        CHECK(good >= 0);
        CHECK(good < 1000);
        CHECK(inst.arms[static_cast<std::size_t>(good)].mean == 0.6);
        std::int64_t planted = 0;
        for (const auto& arm : inst.arms) planted += arm.mean > 0.5 ? 1 : 0;
        CHECK(planted == 1);
    }
    std::set<std::int64_t> positions;
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        positions.insert(hard_instance_good_index(1000, seed));
    }
    CHECK(positions.size() > 1);
}

TEST_CASE("exclusion trials are deterministic and mostly negative") {
    auto config = make_lower_bound_config(41000, 0.1, 0.1, 0.25);
    CHECK(config.m == 58);
    CHECK(discard_count(config) == 1);
    CHECK(exclusion_trial(config, 12345) == exclusion_trial(config, 12345));
    // The exact exclusion probability is ~1.5e-8, so 300 seeded trials
    // virtually never see one.
    std::int64_t excluded = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        excluded += exclusion_trial(config, seed) ? 1 : 0;
    }
    CHECK(excluded <= 1);
}

TEST_CASE("exclusion trial needs a non-empty discard set") {
    auto config = make_lower_bound_config(100, 0.1, 0.1, 0.25);
    CHECK(discard_count(config) == 0);
    CHECK_THROWS_AS(exclusion_trial(config, 1), std::domain_error);
    CHECK_THROWS_AS(exclusion_probability(config), std::domain_error);
}

TEST_CASE("exact exclusion probability at pinned configurations") {
    auto big = make_lower_bound_config(1000000, 0.025, 0.1, 0.25);
    CHECK(exclusion_probability(big) == Approx(1.195191738788933e-08).epsilon(1e-8));
    auto mid = make_lower_bound_config(41000, 0.1, 0.1, 0.25);
    CHECK(exclusion_probability(mid) == Approx(1.4833119089356832e-08).epsilon(1e-8));
    auto wide = make_lower_bound_config(50000, 0.4, 0.01, 0.25);
    CHECK(wide.m == 8);
    CHECK(exclusion_probability(wide) == Approx(5.120000000100847e-11).epsilon(1e-8));
}

TEST_CASE("a wide-gap experiment essentially never excludes the good arm") {
    auto config = make_lower_bound_config(50000, 0.4, 0.01, 0.25);
    std::int64_t excluded = 0;
    for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
        excluded += exclusion_trial(config, seed) ? 1 : 0;
    }
    CHECK(excluded == 0);
}

TEST_CASE("rank analysis agrees with three-arm enumeration") {
    // nu chosen directly so discard_count gives d = 1 and d = 2 at n = 3.
    auto one = tiny_config(8, 0.05, 0.6);
    REQUIRE(discard_count(one) == 1);
    CHECK(exclusion_probability(one) ==
          Approx(brute_force_exclusion_n3(8, 0.05, 1)).epsilon(1e-12));

    auto two = tiny_config(8, 0.05, 3.0);
    REQUIRE(discard_count(two) == 2);
    CHECK(exclusion_probability(two) ==
          Approx(brute_force_exclusion_n3(8, 0.05, 2)).epsilon(1e-12));

    auto skew = tiny_config(12, 0.25, 0.6);
    REQUIRE(discard_count(skew) == 1);
    CHECK(exclusion_probability(skew) ==
          Approx(brute_force_exclusion_n3(12, 0.25, 1)).epsilon(1e-12));

    // With eps = 0 all arms are exchangeable, so the averaged exclusion
    // probability is exactly d/n.
    auto fair = tiny_config(8, 0.0, 0.6);
    CHECK(exclusion_probability(fair) == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("normal tail bounds at pinned points") {
    CHECK(normal_tail_lower_bound(1.0) == Approx(0.12098536225957168).epsilon(1e-14));
    CHECK(normal_tail_upper(1.0) == Approx(0.15865525393145707).epsilon(1e-14));
    CHECK(normal_tail_upper(0.0) == 0.5);
    CHECK_THROWS_AS(normal_tail_lower_bound(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_tail_lower_bound(-1.0), std::invalid_argument);
}

TEST_CASE("the tail lower bound is dominated and asymptotically tight") {
    for (double z = 0.1; z <= 10.0 + 1e-9; z += 0.1) {
        CHECK(normal_tail_lower_bound(z) <= normal_tail_upper(z));
    }
    CHECK(normal_tail_lower_bound(8.0) / normal_tail_upper(8.0) > 0.99);
}

TEST_CASE("slud bound at pinned points and domain") {
    CHECK(slud_lower_bound(100, 0.4, 40.0) == 0.5);
    CHECK(slud_lower_bound(100, 0.4, 50.0) == Approx(0.020613416668581856).epsilon(1e-13));
    CHECK_THROWS_AS(slud_lower_bound(100, 0.6, 70.0), std::invalid_argument);
    CHECK_THROWS_AS(slud_lower_bound(100, 0.4, 30.0), std::domain_error);
    CHECK_THROWS_AS(slud_lower_bound(100, 0.4, 70.0), std::domain_error);
}

TEST_CASE("exact binomial tails dominate the slud bound on the full grid") {
    for (std::int64_t m = 1; m <= 60; ++m) {
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            std::int64_t k_lo = static_cast<std::int64_t>(std::ceil(m * p));
            std::int64_t k_hi = static_cast<std::int64_t>(std::floor(m * (1.0 - p)));
            for (std::int64_t k = k_lo; k <= k_hi; ++k) {
                double bound = slud_lower_bound(m, p, static_cast<double>(k));
                double exact = binomial_tail_geq(m, k, p);
                CHECK(bound <= exact + 1e-12);
            }
        }
    }
}

TEST_CASE("chain report for the holding configuration") {
    auto report = verify_chain(0.2, 1e-6, 1e-5);
    CHECK(report.m == 41447360605);
    CHECK(report.z == Approx(4.0721321446228567).epsilon(1e-12));
    CHECK(report.holds);
    CHECK(report.failing_step.empty());
    REQUIRE(report.steps.size() == 6);
    CHECK(report.steps[0].name == "regime_eps");
    CHECK(report.steps[0].holds);
    CHECK_FALSE(report.steps[0].required);
    CHECK(report.steps[1].name == "z_identity");
    CHECK(report.steps[1].holds);
    CHECK(report.steps[1].required);
    CHECK(report.steps[2].name == "slud_domain");
    CHECK(report.steps[2].holds);
    // The pointwise exponential comparison only holds asymptotically; it is
    // recorded but must not decide the verdict.
    CHECK(report.steps[3].name == "borjesson_vs_exp");
    CHECK_FALSE(report.steps[3].holds);
    CHECK_FALSE(report.steps[3].required);
    CHECK(report.steps[4].name == "exp_vs_delta_power");
    CHECK(report.steps[4].holds);
    CHECK(report.steps[5].name == "tail_vs_delta_power");
    CHECK(report.steps[5].holds);
    CHECK(report.steps[5].required);
}

TEST_CASE("chain report for the failing configuration") {
    auto report = verify_chain(0.2, 0.4, 1e-5);
    CHECK(report.m == 2748927174);
    CHECK(report.z == Approx(1.0487091089570764).epsilon(1e-12));
    CHECK_FALSE(report.holds);
    CHECK(report.failing_step == "tail_vs_delta_power");
    // The weaker exponential link still passes here; only the tail bound
    // itself falls short of delta^(1-beta).
    CHECK(report.steps[4].holds);
    CHECK_FALSE(report.steps[5].holds);
}

TEST_CASE("the chain keeps holding as delta shrinks") {
    for (double delta : {1e-6, 1e-8, 1e-10}) {
        auto report = verify_chain(0.2, delta, 1e-5);
        CHECK(report.holds);
        CHECK(report.failing_step.empty());
    }
}

TEST_CASE("verify_chain validates its domain") {
    CHECK_THROWS_AS(verify_chain(0.5, 0.1, 1e-5), std::invalid_argument);
    CHECK_THROWS_AS(verify_chain(0.2, 1.5, 1e-5), std::invalid_argument);
    CHECK_THROWS_AS(verify_chain(0.2, 0.1, 0.5), std::invalid_argument);
}
