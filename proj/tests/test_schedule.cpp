#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "bandit_elim/schedule.hpp"

using namespace bandit_elim;
using doctest::Approx;

namespace {

void check_rounds(const SchedulePrediction& p,
                  const std::vector<std::pair<std::int64_t, std::int64_t>>& expected) {
    REQUIRE(p.per_round.size() == expected.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(p.per_round[i].survivor_count == expected[i].first);
        CHECK(p.per_round[i].per_arm_samples == expected[i].second);
        total += expected[i].first * expected[i].second;
    }
    CHECK(p.total_samples == total);
}

}  // namespace

TEST_CASE("keep-fraction surplus phi at pinned points") {
    CHECK(phi(100000) == Approx(0.11083284252513606).epsilon(1e-14));
    CHECK(phi(300000) == Approx(0.07683147606839202).epsilon(1e-14));
    CHECK(phi(16) == Approx(1.442026886600883).epsilon(1e-14));
    CHECK(phi(1000) == Approx(0.4827742489615687).epsilon(1e-14));
    CHECK(phi(3000) == Approx(0.3442491819383939).epsilon(1e-14));
    CHECK_THROWS_AS(phi(1), std::invalid_argument);
}

TEST_CASE("phi decreases for n >= 16") {
    double prev = phi(16);
    for (std::int64_t n = 17; n <= 4000; n += 7) {
        double cur = phi(n);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("degree-weighted surplus phi_d at pinned points") {
    CHECK(phi_d(100000, 0) == Approx(0.02905135571163644).epsilon(1e-14));
    CHECK(phi_d(100000, 1) > phi_d(100000, 0));
    CHECK_THROWS_AS(phi_d(2, 0), std::invalid_argument);
}

TEST_CASE("round count t at pinned points") {
    CHECK(rounds_t(300000, 0.025) == 2);
    CHECK(rounds_t(1000000, 0.01) == 2);
    CHECK(rounds_t(100000, 0.1) == 3);
    CHECK(rounds_t(100000, 0.05) == 2);
    // delta + phi(n) >= 1 leaves the contraction regime entirely.
    CHECK_THROWS_AS(rounds_t(16, 0.05), degenerate_schedule_error);
}

TEST_CASE("overhead G at pinned points and monotone in delta") {
    CHECK(big_g(300000, 0.025) == Approx(0.23477190069158652).epsilon(1e-13));
    CHECK(big_g(1000000, 0.01) == Approx(0.13363328754856205).epsilon(1e-13));
    CHECK(big_g(300000, 0.01) < big_g(300000, 0.025));
    CHECK(big_g(300000, 0.025) < big_g(300000, 0.05));
}

TEST_CASE("hoeffding sample counts") {
    CHECK(hoeffding_samples(0.1, 0.05) == 150);
    CHECK(hoeffding_samples(0.2, 0.05) == 38);
    CHECK(hoeffding_samples(0.1, 0.01) > hoeffding_samples(0.1, 0.05));
    CHECK(hoeffding_samples(0.05, 0.05) > hoeffding_samples(0.1, 0.05));
}

TEST_CASE("fractional powers snap at exact values") {
    // 65536^(3/4) = 4096 exactly; pow drift must not push the ceil to 4097.
    CHECK(detail::ceil_pow_frac(65536, 3, 4) == 4096);
    CHECK(detail::ceil_half_pow_frac(65536, 3, 4) == 2048);
    CHECK(detail::ceil_pow_frac(256, 3, 4) == 64);
    CHECK(detail::ceil_pow_frac(300000, 3, 4) == 12819);
    CHECK(detail::ceil_half_pow_frac(300000, 3, 4) == 6410);
    CHECK(detail::ceil_half_pow_frac(300000, 7, 8) == 31007);
    CHECK(detail::ceil_half_pow_frac(100000, 3, 4) == 2812);
    CHECK(detail::ceil_half_pow_frac(100000, 7, 8) == 11857);
}

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::naive, Algorithm::aggressive, Algorithm::saba,
                        Algorithm::aba, Algorithm::abaleh, Algorithm::median}) {
        auto parsed = parse_algorithm(to_string(a));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == a);
    }
    CHECK_FALSE(parse_algorithm("made-up").has_value());
}

TEST_CASE("naive plan at pinned points") {
    CHECK(predict_samples(Algorithm::naive, 300000, 0.2, 0.05).total_samples == 234300000);
    check_rounds(predict_samples(Algorithm::naive, 300000, 0.2, 0.05), {{300000, 781}});
    check_rounds(predict_samples(Algorithm::naive, 100000, 0.2, 0.1), {{100000, 691}});
    check_rounds(predict_samples(Algorithm::naive, 2, 0.5, 0.1), {{2, 24}});
    // A single arm needs no samples at all.
    auto one = predict_samples(Algorithm::naive, 1, 0.2, 0.1);
    CHECK(one.total_samples == 0);
    CHECK(one.per_round.empty());
}

TEST_CASE("aggressive plan at pinned points") {
    check_rounds(predict_samples(Algorithm::aggressive, 300000, 0.2, 0.05),
                 {{300000, 150}, {38049, 300}});
    // As saba invokes it, at half the failure budget.
    check_rounds(predict_samples(Algorithm::aggressive, 300000, 0.2, 0.025),
                 {{300000, 185}, {30549, 370}});
    check_rounds(predict_samples(Algorithm::aggressive, 100000, 0.2, 0.1),
                 {{100000, 116}, {21083, 232}, {4444, 348}});
    auto plan = plan_aggressive(300000, 0.2, 0.025);
    CHECK(plan.q == Approx(0.10183147606839202).epsilon(1e-14));
    CHECK(plan.final_size == 6410);
    CHECK(plan.floor_size == 6410);
    CHECK(plan.t == 2);
}

TEST_CASE("aggressive plan rejects the degenerate regime") {
    CHECK_THROWS_AS(plan_aggressive(16, 0.2, 0.05), degenerate_schedule_error);
    CHECK_THROWS_AS(plan_aggressive(1000, 0.3, 0.1), degenerate_schedule_error);
    CHECK_THROWS_AS(plan_aggressive(1, 0.2, 0.05), degenerate_schedule_error);
    CHECK_THROWS_AS(predict_samples(Algorithm::aggressive, 16, 0.2, 0.05),
                    degenerate_schedule_error);
}

TEST_CASE("saba plan at pinned points") {
    check_rounds(predict_samples(Algorithm::saba, 300000, 0.2, 0.05),
                 {{300000, 185}, {30549, 370}, {6410, 639}});
    CHECK(predict_samples(Algorithm::saba, 300000, 0.2, 0.05).total_samples == 70899120);
    check_rounds(predict_samples(Algorithm::saba, 100000, 0.2, 0.1),
                 {{100000, 150}, {16083, 300}, {2812, 563}});
    CHECK(predict_samples(Algorithm::saba, 100000, 0.2, 0.1).total_samples == 21408056);
    CHECK_FALSE(predict_samples(Algorithm::saba, 100000, 0.2, 0.1).fallback);
}

TEST_CASE("saba falls back to one naive round when its schedule degenerates") {
    auto p = predict_samples(Algorithm::saba, 64, 0.25, 0.1);
    CHECK(p.fallback);
    CHECK(p.total_samples == predict_samples(Algorithm::naive, 64, 0.25, 0.1).total_samples);
    CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("aba plan at pinned points") {
    auto p3 = predict_samples(Algorithm::aba, 300000, 0.2, 0.05);
    check_rounds(p3, {{300000, 462}, {30549, 924}, {37417, 5367}});
    CHECK(p3.total_samples == 367644315);
    CHECK_FALSE(p3.fallback);
    REQUIRE(p3.alpha.has_value());
    CHECK(*p3.alpha == Approx(kDefaultAlpha).epsilon(1e-15));

    auto p1 = predict_samples(Algorithm::aba, 100000, 0.2, 0.1);
    check_rounds(p1, {{100000, 375}, {16083, 750}, {14669, 4765}});
    CHECK(p1.total_samples == 119460035);
    CHECK_FALSE(p1.fallback);

    auto plan = plan_aba(300000, 0.2, 0.05, kDefaultAlpha);
    CHECK(plan.r_size == 31007);
    CHECK(plan.union_size == 37417);
}

TEST_CASE("aba routes small instances to the naive baseline") {
    // Below max(1e5, delta^-4) the analysis does not apply.
    auto small = predict_samples(Algorithm::aba, 10000, 0.2, 0.05);
    CHECK(small.fallback);
    CHECK(small.total_samples ==
          predict_samples(Algorithm::naive, 10000, 0.2, 0.05).total_samples);
    CHECK_FALSE(predict_samples(Algorithm::aba, 200000, 0.2, 0.1).fallback);
    // delta = 0.05 puts the threshold at 1/0.05^4 = 160000.
    CHECK(predict_samples(Algorithm::aba, 100000, 0.2, 0.05).fallback);
    CHECK_FALSE(predict_samples(Algorithm::aba, 200000, 0.2, 0.05).fallback);
}

TEST_CASE("abaleh plan at the pinned large point") {
    auto p = predict_samples(Algorithm::abaleh, 300000, 0.2, 0.05, 0.5);
    check_rounds(p, {{300000, 47}, {3000, 234}, {1070, 468}, {381, 702}, {13022, 687100}});
    CHECK(p.total_samples == 8962986422);
    CHECK_FALSE(p.fallback);
    REQUIRE(p.lambda.has_value());
    CHECK(*p.lambda == 0.5);

    auto plan = plan_abaleh(300000, 0.2, 0.05, 0.5);
    CHECK(plan.alpha == Approx(0.9682458365518543).epsilon(1e-15));
    CHECK(plan.a0_size == 3000);
    CHECK(plan.r_size == 12819);
    CHECK(plan.aggressive.final_size == 203);
    CHECK(plan.union_size == 13022);
}

TEST_CASE("abaleh falls back when the shortlist schedule degenerates") {
    // a0 = 1000 at n = 1e5: delta/4 + phi(1000) >= 0.5.
    auto p = predict_samples(Algorithm::abaleh, 100000, 0.2, 0.1, 0.5);
    CHECK(p.fallback);
    CHECK(p.total_samples ==
          predict_samples(Algorithm::naive, 100000, 0.2, 0.1).total_samples);
    CHECK(p.total_samples == 69100000);
}

TEST_CASE("median plan at pinned points") {
    auto p3 = predict_samples(Algorithm::median, 300000, 0.2, 0.05);
    CHECK(p3.total_samples == 35192324334);
    REQUIRE(p3.per_round.size() == 19);
    CHECK(p3.per_round[0].survivor_count == 300000);
    CHECK(p3.per_round[0].per_arm_samples == 7660);

    auto p1 = predict_samples(Algorithm::median, 100000, 0.2, 0.1);
    CHECK(p1.total_samples == 10063928350);
    CHECK(p1.per_round.size() == 17);

    CHECK(predict_samples(Algorithm::median, 2, 0.4, 0.1).total_samples == 3276);

    // Halving: survivor counts follow ceil(size/2) down to a single arm.
    auto plan = plan_median(11, 0.3, 0.1);
    std::int64_t size = 11;
    for (const auto& round : plan.rounds) {
        CHECK(round.size == size);
        CHECK(round.keep == (size + 1) / 2);
        size = round.keep;
    }
    CHECK(size == 1);
}

TEST_CASE("planners validate eps and delta") {
    CHECK_THROWS_AS(predict_samples(Algorithm::naive, 10, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(predict_samples(Algorithm::naive, 10, 0.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(predict_samples(Algorithm::naive, 10, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(predict_samples(Algorithm::naive, 10, 0.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(predict_samples(Algorithm::naive, 0, 0.2, 0.1), std::invalid_argument);
}
