#include "bandit_elim/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bandit_elim/algorithms.hpp"
#include "trial_pool.hpp"

namespace bandit_elim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw config_error(message); }

const json& require_key(const json& object, const char* key, const char* where) {
    auto it = object.find(key);
    if (it == object.end()) {
        fail(std::string(where) + ": missing required field \"" + key + "\"");
    }
    return *it;
}

void reject_unknown_keys(const json& object, const std::vector<std::string>& allowed,
                         const char* where) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        bool known = false;
        for (const auto& name : allowed) {
            if (it.key() == name) {
                known = true;
                break;
            }
        }
        if (!known) fail(std::string(where) + ": unknown field \"" + it.key() + "\"");
    }
}

std::int64_t require_i64(const json& object, const char* key, const char* where) {
    const json& v = require_key(object, key, where);
    if (!v.is_number_integer()) {
        fail(std::string(where) + ": field \"" + key + "\" must be an integer");
    }
    return v.get<std::int64_t>();
}

std::uint64_t require_u64(const json& object, const char* key, const char* where) {
    const json& v = require_key(object, key, where);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        std::int64_t s = v.get<std::int64_t>();
        if (s >= 0) return static_cast<std::uint64_t>(s);
    }
    fail(std::string(where) + ": field \"" + key + "\" must be a non-negative integer");
}

double require_number(const json& object, const char* key, const char* where) {
    const json& v = require_key(object, key, where);
    if (!v.is_number()) {
        fail(std::string(where) + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

void check_unit_open(double value, const char* key, const char* where) {
    if (!(value > 0.0 && value < 1.0)) {
        fail(std::string(where) + ": field \"" + key + "\" must be in (0, 1)");
    }
}

ArmGroup parse_arm_group(const json& entry, std::size_t index) {
    std::ostringstream label;
    label << "instance[" << index << "]";
    std::string where = label.str();
    if (!entry.is_object()) fail(where + ": must be an object");

    const json& kind_v = require_key(entry, "kind", where.c_str());
    if (!kind_v.is_string()) fail(where + ": field \"kind\" must be a string");
    std::string kind = kind_v.get<std::string>();

    ArmGroup group;
    if (kind == "bernoulli") {
        group.spec.kind = ArmKind::bernoulli;
        reject_unknown_keys(entry, {"kind", "mean", "count"}, where.c_str());
    } else if (kind == "gaussian") {
        group.spec.kind = ArmKind::gaussian;
        reject_unknown_keys(entry, {"kind", "mean", "sigma", "count"}, where.c_str());
        group.spec.sigma = require_number(entry, "sigma", where.c_str());
        if (!(group.spec.sigma > 0.0 && group.spec.sigma <= 0.5)) {
            fail(where + ": field \"sigma\" must be in (0, 0.5]");
        }
    } else {
        fail(where + ": field \"kind\" must be \"bernoulli\" or \"gaussian\"");
    }

    group.spec.mean = require_number(entry, "mean", where.c_str());
    if (!(group.spec.mean >= 0.0 && group.spec.mean <= 1.0)) {
        fail(where + ": field \"mean\" must be in [0, 1]");
    }
    group.count = require_i64(entry, "count", where.c_str());
    if (group.count < 1) fail(where + ": field \"count\" must be >= 1");
    return group;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded()) fail("config: not valid JSON");
    if (!root.is_object()) fail("config: top level must be an object");

    static const char* where = "config";
    reject_unknown_keys(root,
                        {"algorithm", "n", "eps", "delta", "lambda", "alpha", "instance",
                         "trials", "master_seed", "max_parallel"},
                        where);

    RunConfig config;

    const json& algo_v = require_key(root, "algorithm", where);
    if (!algo_v.is_string()) fail("config: field \"algorithm\" must be a string");
    auto algorithm = parse_algorithm(algo_v.get<std::string>());
    if (!algorithm) {
        fail("config: unknown algorithm \"" + algo_v.get<std::string>() + "\"");
    }
    config.algorithm = *algorithm;

    config.n = require_i64(root, "n", where);
    if (config.n < 1) fail("config: field \"n\" must be >= 1");

    config.eps = require_number(root, "eps", where);
    check_unit_open(config.eps, "eps", where);
    config.delta = require_number(root, "delta", where);
    check_unit_open(config.delta, "delta", where);

    if (root.contains("lambda")) {
        config.lambda = require_number(root, "lambda", where);
        check_unit_open(config.lambda, "lambda", where);
    }
    if (root.contains("alpha")) {
        config.alpha = require_number(root, "alpha", where);
        check_unit_open(config.alpha, "alpha", where);
    }

    const json& instance_v = require_key(root, "instance", where);
    if (!instance_v.is_array() || instance_v.empty()) {
        fail("config: field \"instance\" must be a non-empty array");
    }
    std::int64_t arm_sum = 0;
    for (std::size_t i = 0; i < instance_v.size(); ++i) {
        ArmGroup group = parse_arm_group(instance_v[i], i);
        arm_sum += group.count;
        config.instance.push_back(group);
    }
    if (arm_sum != config.n) {
        std::ostringstream message;
        message << "config: instance counts sum to " << arm_sum << " but n = " << config.n;
        fail(message.str());
    }

    config.trials = require_i64(root, "trials", where);
    if (config.trials < 1) fail("config: field \"trials\" must be >= 1");

    config.master_seed = require_u64(root, "master_seed", where);

    if (root.contains("max_parallel")) {
        std::int64_t mp = require_i64(root, "max_parallel", where);
        if (mp < 0) fail("config: field \"max_parallel\" must be >= 0");
        config.max_parallel = static_cast<int>(mp);
    }

    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("config: cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

AggregateReport run_benchmark(const RunConfig& config) {
    Instance instance = make_instance(config.instance);
    if (instance.n() != config.n) {
        fail("config: instance counts do not match n");
    }

    SchedulePrediction prediction = predict_samples(config.algorithm, config.n, config.eps,
                                                    config.delta, config.lambda, config.alpha);

    std::vector<char> ok(static_cast<std::size_t>(config.trials), 0);
    std::vector<std::int64_t> totals(static_cast<std::size_t>(config.trials), 0);

    auto start = std::chrono::steady_clock::now();
    detail::parallel_trials(config.trials, resolve_threads(config.max_parallel),
                            [&](std::int64_t t) {
                                SamplingOracle oracle(instance, config.master_seed, t);
                                RunOutcome outcome =
                                    run_algorithm(config.algorithm, oracle, config.eps,
                                                  config.delta, config.lambda, config.alpha);
                                auto slot = static_cast<std::size_t>(t);
                                ok[slot] = is_eps_best(instance, outcome.chosen_arm, config.eps)
                                               ? 1
                                               : 0;
                                totals[slot] = outcome.total_samples;
                            });
    auto stop = std::chrono::steady_clock::now();

    // Budgets are data independent: every trial must land exactly on the plan.
    for (std::int64_t total : totals) {
        if (total != prediction.total_samples) {
            std::ostringstream message;
            message << "executor drew " << total << " samples but the plan says "
                    << prediction.total_samples;
            throw std::logic_error(message.str());
        }
    }

    std::int64_t successes = 0;
    for (char flag : ok) successes += flag;
    WilsonInterval interval = wilson_interval(successes, config.trials);

    ReportRow row;
    row.algorithm = std::string(to_string(config.algorithm));
    row.n = config.n;
    row.eps = config.eps;
    row.delta = config.delta;
    row.lambda = config.lambda;
    row.alpha = config.alpha;
    row.trials = config.trials;
    row.master_seed = config.master_seed;
    row.mean_total_samples = prediction.total_samples;
    row.success_count = successes;
    row.success_rate = static_cast<double>(successes) / static_cast<double>(config.trials);
    row.wilson_lo = interval.lo;
    row.wilson_hi = interval.hi;
    row.wall_seconds = std::chrono::duration<double>(stop - start).count();

    AggregateReport report;
    report.rows.push_back(row);
    return report;
}

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string to_csv(const AggregateReport& report) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const ReportRow& row : report.rows) {
        out << row.algorithm << ',' << row.n << ',' << format_real(row.eps) << ','
            << format_real(row.delta) << ',' << format_real(row.lambda) << ','
            << format_real(row.alpha) << ',' << row.trials << ',' << row.master_seed << ','
            << row.mean_total_samples << ',' << row.success_count << ','
            << format_real(row.success_rate) << ',' << format_real(row.wilson_lo) << ','
            << format_real(row.wilson_hi) << ',' << format_real(row.wall_seconds) << '\n';
    }
    return out.str();
}

void write_csv(const AggregateReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
    out << to_csv(report);
}

}  // namespace bandit_elim
