#include "bandit_elim/arm_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit_elim {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; full-period over the +kGamma counter sequence.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double unit_from_bits(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

void validate_spec(const ArmSpec& spec) {
    if (!(spec.mean >= 0.0 && spec.mean <= 1.0)) {
        throw std::invalid_argument("arm mean must lie in [0, 1]");
    }
    if (spec.kind == ArmKind::gaussian) {
        if (!(spec.sigma > 0.0 && spec.sigma <= 0.5)) {
            throw std::invalid_argument("gaussian sigma must lie in (0, 0.5]");
        }
    }
}

}  // namespace

Instance make_instance(const std::vector<ArmGroup>& groups) {
    Instance instance;
    std::int64_t total = 0;
    for (const ArmGroup& g : groups) {
        if (g.count < 0) throw std::invalid_argument("arm group count must be >= 0");
        total += g.count;
    }
    if (total < 1) throw std::invalid_argument("instance needs at least one arm");
    instance.arms.reserve(static_cast<std::size_t>(total));
    for (const ArmGroup& g : groups) {
        validate_spec(g.spec);
        for (std::int64_t i = 0; i < g.count; ++i) instance.arms.push_back(g.spec);
    }
    instance.best_index = 0;
    for (std::int64_t i = 1; i < instance.n(); ++i) {
        if (instance.arms[static_cast<std::size_t>(i)].mean >
            instance.arms[static_cast<std::size_t>(instance.best_index)].mean) {
            instance.best_index = i;
        }
    }
    return instance;
}

bool is_eps_best(const Instance& instance, std::int64_t arm, double eps) {
    if (arm < 0 || arm >= instance.n()) throw std::out_of_range("arm index out of range");
    if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
    double best = instance.arms[static_cast<std::size_t>(instance.best_index)].mean;
    return instance.arms[static_cast<std::size_t>(arm)].mean >= best - eps;
}

std::uint64_t StreamRng::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

std::uint64_t StreamRng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be > 0");
    // Lemire's multiply-shift with rejection of the biased low fringe.
    while (true) {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo >= bound || lo >= (-bound) % bound) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

double StreamRng::next_unit() { return unit_from_bits(next_u64()); }

double StreamRng::next_gaussian() {
    // Box-Muller, cosine branch only; consumes exactly two stream values.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                          std::uint64_t key) {
    std::uint64_t h = mix64(master_seed + kGamma);
    h = mix64(h ^ (trial_index + kGamma));
    h = mix64(h ^ (key + kGamma));
    return h;
}

SamplingOracle::SamplingOracle(const Instance& instance, std::uint64_t master_seed,
                               std::uint64_t trial_index)
    : instance_(&instance), master_seed_(master_seed), trial_index_(trial_index) {
    if (instance.n() < 1) throw std::invalid_argument("oracle needs a nonempty instance");
    std::size_t n = instance.arms.size();
    state_.resize(n);
    threshold_.resize(n);
    pulls_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        state_[a] = stream_seed(master_seed, trial_index, a);
        double p = instance.arms[a].mean;
        if (p >= 1.0) {
            threshold_[a] = std::numeric_limits<std::uint64_t>::max();
        } else if (p <= 0.0) {
            threshold_[a] = 0;
        } else {
            threshold_[a] = static_cast<std::uint64_t>(std::ldexp(p, 64));
        }
    }
}

PullResult SamplingOracle::pull(std::int64_t arm, std::int64_t count) {
    if (arm < 0 || arm >= instance_->n()) throw std::out_of_range("arm index out of range");
    if (count < 0) throw std::invalid_argument("pull count must be >= 0");
    std::size_t a = static_cast<std::size_t>(arm);
    const ArmSpec& spec = instance_->arms[a];
    double sum = 0.0;
    std::uint64_t s = state_[a];
    if (spec.kind == ArmKind::bernoulli) {
        if (spec.mean >= 1.0) {
            // Degenerate arm: every draw is 1; the stream still advances so
            // the consumed positions stay a function of the pull count alone.
            s += static_cast<std::uint64_t>(count) * kGamma;
            sum = static_cast<double>(count);
        } else {
            std::uint64_t thr = threshold_[a];
            std::int64_t ones = 0;
            for (std::int64_t j = 0; j < count; ++j) {
                s += kGamma;
                ones += (mix64(s) < thr) ? 1 : 0;
            }
            sum = static_cast<double>(ones);
        }
    } else {
        double mu = spec.mean, sd = spec.sigma;
        for (std::int64_t j = 0; j < count; ++j) {
            s += kGamma;
            double u1 = (static_cast<double>(mix64(s) >> 11) + 1.0) * 0x1.0p-53;
            s += kGamma;
            double u2 = unit_from_bits(mix64(s));
            double z = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(6.283185307179586476925287 * u2);
            sum += mu + sd * z;
        }
    }
    state_[a] = s;
    pulls_[a] += count;
    total_pulls_ += count;
    return PullResult{sum, count};
}

std::int64_t SamplingOracle::pulls(std::int64_t arm) const {
    if (arm < 0 || arm >= instance_->n()) throw std::out_of_range("arm index out of range");
    return pulls_[static_cast<std::size_t>(arm)];
}

StreamRng SamplingOracle::derived_stream(std::uint64_t tag) const {
    return StreamRng(stream_seed(master_seed_, trial_index_, (1ULL << 63) + tag));
}

}  // namespace bandit_elim
