#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bandit_elim {

enum class ArmKind { bernoulli, gaussian };

// Static description of one arm's reward distribution.
// Bernoulli: mean in [0,1], sigma unused.
// Gaussian: mean in [0,1], sigma in (0, 0.5]; samples are NOT clipped to [0,1].
struct ArmSpec {
    ArmKind kind = ArmKind::bernoulli;
    double mean = 0.0;
    double sigma = 0.0;
};

// A block of `count` identical arms, used to describe large instances compactly.
struct ArmGroup {
    ArmSpec spec;
    std::int64_t count = 0;
};

struct Instance {
    std::vector<ArmSpec> arms;
    std::int64_t best_index = 0;  // lowest index achieving the maximum true mean

    std::int64_t n() const { return static_cast<std::int64_t>(arms.size()); }
};

// Expands groups into a concrete instance and validates every arm.
// Throws std::invalid_argument on an empty instance or out-of-domain parameters.
Instance make_instance(const std::vector<ArmGroup>& groups);

// True iff mean(arm) >= max mean - eps (boundary inclusive, evaluated exactly
// in this form so floating-point behaviour is reproducible).
bool is_eps_best(const Instance& instance, std::int64_t arm, double eps);

struct PullResult {
    double sum = 0.0;
    std::int64_t count = 0;
};

// Counter-based generator: output j of a stream is a pure function of
// (seed, j), so streams never interact regardless of interleaving.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    // Unbiased integer in [0, bound) via 128-bit multiply rejection.
    std::uint64_t uniform_below(std::uint64_t bound);
    double next_unit();      // [0, 1)
    double next_gaussian();  // standard normal, consumes exactly two outputs

private:
    std::uint64_t state_;
};

// Derives the seed of the per-arm stream for (master_seed, trial_index, key).
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                          std::uint64_t key);

// Seeded sampling front-end over an instance. Each arm owns an independent
// stream keyed by (master_seed, trial_index, arm_index): per-arm sample
// sequences do not depend on the order arms are pulled in.
class SamplingOracle {
public:
    SamplingOracle(const Instance& instance, std::uint64_t master_seed,
                   std::uint64_t trial_index);

    // Draws `count` samples from `arm` and returns their sum (the sufficient
    // statistic); individual values are not retained. count = 0 is a no-op.
    PullResult pull(std::int64_t arm, std::int64_t count);

    std::int64_t pulls(std::int64_t arm) const;
    std::int64_t total_pulls() const { return total_pulls_; }
    const Instance& instance() const { return *instance_; }
    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t trial_index() const { return trial_index_; }

    // Auxiliary stream for algorithm-level randomness (e.g. random arm
    // subsets). Keys live outside the arm-index range so they can never
    // collide with a sampling stream.
    StreamRng derived_stream(std::uint64_t tag) const;

private:
    const Instance* instance_;
    std::uint64_t master_seed_;
    std::uint64_t trial_index_;
    std::int64_t total_pulls_ = 0;
    std::vector<std::uint64_t> state_;      // per-arm stream position
    std::vector<std::uint64_t> threshold_;  // Bernoulli: success iff u64 < threshold
    std::vector<std::int64_t> pulls_;
};

}  // namespace bandit_elim
