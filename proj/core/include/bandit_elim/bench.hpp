#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandit_elim/arm_model.hpp"
#include "bandit_elim/oracle_checks.hpp"
#include "bandit_elim/schedule.hpp"

// Benchmark harness: JSON run configs, seeded parallel trial batches and the
// CSV report format shared by the CLI subcommands.

namespace bandit_elim {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Algorithm algorithm = Algorithm::naive;
    std::int64_t n = 0;
    double eps = 0.0;
    double delta = 0.0;
    double lambda = kDefaultLambda;
    double alpha = kDefaultAlpha;
    std::vector<ArmGroup> instance;
    std::int64_t trials = 0;
    std::uint64_t master_seed = 0;
    int max_parallel = 0;  // 0 = auto
};

// Strict parse: exactly the RunConfig field names, unknown keys rejected,
// instance counts must sum to n. Throws config_error.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

struct ReportRow {
    std::string algorithm;
    std::int64_t n = 0;
    double eps = 0.0;
    double delta = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    std::int64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::int64_t mean_total_samples = 0;  // identical across trials by design
    std::int64_t success_count = 0;
    double success_rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double wall_seconds = 0.0;
};

struct AggregateReport {
    std::vector<ReportRow> rows;
};

// Executes the configured trial batch. Counts are checked against
// predict_samples; a mismatch throws std::logic_error (it would mean the
// executor diverged from its plan).
AggregateReport run_benchmark(const RunConfig& config);

inline constexpr const char* kCsvHeader =
    "algorithm,n,eps,delta,lambda,alpha,trials,master_seed,mean_total_samples,"
    "success_count,success_rate,wilson_lo,wilson_hi,wall_seconds";

// %.6g for reals, exact decimal for the integer columns, LF line endings.
std::string to_csv(const AggregateReport& report);
void write_csv(const AggregateReport& report, const std::string& path);

std::string format_real(double value);  // 6 significant digits

}  // namespace bandit_elim
