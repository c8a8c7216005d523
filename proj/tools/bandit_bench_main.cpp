#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandit_elim/algorithms.hpp"
#include "bandit_elim/bench.hpp"
#include "bandit_elim/lower_bound.hpp"
#include "bandit_elim/oracle_checks.hpp"
#include "bandit_elim/schedule.hpp"

// Exit codes: 0 ok (including a chain that honestly fails to hold),
// 2 bad arguments or config, 3 runtime failure while executing a batch,
// 4 a numeric self-check or oracle agreement failure.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitSelfCheck = 4;

int do_predict(const std::string& algo_name, std::int64_t n, double eps, double delta,
               double lambda, double alpha) {
    auto algorithm = bandit_elim::parse_algorithm(algo_name);
    if (!algorithm) {
        std::fprintf(stderr, "unknown algorithm \"%s\"\n", algo_name.c_str());
        return kExitConfig;
    }
    bandit_elim::SchedulePrediction prediction;
    try {
        prediction = bandit_elim::predict_samples(*algorithm, n, eps, delta, lambda, alpha);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "predict: %s\n", e.what());
        return kExitConfig;
    }
    std::printf("algorithm: %s\n", std::string(bandit_elim::to_string(*algorithm)).c_str());
    std::printf("n: %" PRId64 "  eps: %s  delta: %s\n", prediction.n,
                bandit_elim::format_real(prediction.eps).c_str(),
                bandit_elim::format_real(prediction.delta).c_str());
    if (prediction.lambda) {
        std::printf("lambda: %s\n", bandit_elim::format_real(*prediction.lambda).c_str());
    }
    if (prediction.alpha) {
        std::printf("alpha: %s\n", bandit_elim::format_real(*prediction.alpha).c_str());
    }
    std::printf("%5s %12s %12s %16s\n", "round", "survivors", "per-arm", "samples");
    for (std::size_t i = 0; i < prediction.per_round.size(); ++i) {
        const auto& round = prediction.per_round[i];
        std::printf("%5zu %12" PRId64 " %12" PRId64 " %16" PRId64 "\n", i + 1,
                    round.survivor_count, round.per_arm_samples,
                    round.survivor_count * round.per_arm_samples);
    }
    std::printf("total samples: %" PRId64 "\n", prediction.total_samples);
    std::printf("fallback: %s\n", prediction.fallback ? "yes" : "no");
    for (const auto& warning : prediction.warnings) {
        std::printf("warning: %s\n", warning.c_str());
    }
    return kExitOk;
}

int do_run(const std::string& config_path, const std::string& out_path) {
    bandit_elim::RunConfig config;
    try {
        config = bandit_elim::load_run_config(config_path);
    } catch (const bandit_elim::config_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    bandit_elim::AggregateReport report;
    try {
        report = bandit_elim::run_benchmark(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run: %s\n", e.what());
        return kExitRuntime;
    }
    const auto& row = report.rows.front();
    std::printf("algorithm: %s  n: %" PRId64 "  trials: %" PRId64 "  seed: %" PRIu64 "\n",
                row.algorithm.c_str(), row.n, row.trials, row.master_seed);
    std::printf("samples per trial: %" PRId64 "\n", row.mean_total_samples);
    std::printf("successes: %" PRId64 "/%" PRId64 "  rate: %s  wilson95: [%s, %s]\n",
                row.success_count, row.trials,
                bandit_elim::format_real(row.success_rate).c_str(),
                bandit_elim::format_real(row.wilson_lo).c_str(),
                bandit_elim::format_real(row.wilson_hi).c_str());
    std::printf("wall: %ss\n", bandit_elim::format_real(row.wall_seconds).c_str());
    try {
        bandit_elim::write_csv(report, out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run: %s\n", e.what());
        return kExitRuntime;
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

// The two tail inequalities the chain rests on, checked against direct
// evaluation on a grid. A failure here means the library math is wrong.
bool dominance_self_checks() {
    bool ok = true;
    for (double z = 0.05; z <= 10.0 + 1e-9; z += 0.05) {
        double lo = bandit_elim::normal_tail_lower_bound(z);
        double hi = bandit_elim::normal_tail_upper(z);
        if (!(lo <= hi)) {
            std::fprintf(stderr, "self-check: tail lower bound exceeds the tail at z=%g\n", z);
            ok = false;
        }
    }
    double ratio = bandit_elim::normal_tail_lower_bound(8.0) / bandit_elim::normal_tail_upper(8.0);
    if (!(ratio > 0.99)) {
        std::fprintf(stderr, "self-check: tail bound not tight at z=8 (ratio %g)\n", ratio);
        ok = false;
    }
    for (std::int64_t m : {5, 10, 20, 40, 60}) {
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            std::int64_t k_lo = static_cast<std::int64_t>(std::ceil(m * p));
            std::int64_t k_hi = static_cast<std::int64_t>(std::floor(m * (1.0 - p)));
            for (std::int64_t k = k_lo; k <= k_hi; ++k) {
                double bound = bandit_elim::slud_lower_bound(m, p, static_cast<double>(k));
                double exact = bandit_elim::binomial_tail_geq(m, k, p);
                if (bound > exact + 1e-12) {
                    std::fprintf(stderr,
                                 "self-check: binomial tail bound %g exceeds exact %g "
                                 "at m=%" PRId64 " p=%g k=%" PRId64 "\n",
                                 bound, exact, m, p, k);
                    ok = false;
                }
            }
        }
    }
    return ok;
}

int do_lower_bound(double beta, double delta, double eps, std::int64_t n,
                   std::int64_t trials, std::uint64_t seed, const std::string& out_path) {
    if (!dominance_self_checks()) return kExitSelfCheck;
    std::printf("tail-bound self-checks: ok\n");

    bandit_elim::ChainReport report;
    try {
        report = bandit_elim::verify_chain(beta, delta, eps);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lower-bound: %s\n", e.what());
        return kExitConfig;
    }
    std::printf("beta: %s  delta: %s  eps: %s\n", bandit_elim::format_real(report.beta).c_str(),
                bandit_elim::format_real(report.delta).c_str(),
                bandit_elim::format_real(report.eps).c_str());
    std::printf("m: %" PRId64 "  k: %.10g  z: %.10g\n", report.m, report.k, report.z);
    for (const auto& step : report.steps) {
        std::printf("%-22s %-10s lhs=%.10g rhs=%.10g%s\n", step.name.c_str(),
                    step.holds ? "ok" : "violated", step.lhs, step.rhs,
                    step.required ? "" : "  (advisory)");
    }
    std::printf("holds: %s\n", report.holds ? "yes" : "no");
    if (!report.failing_step.empty()) {
        std::printf("failing step: %s\n", report.failing_step.c_str());
    }

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "lower-bound: cannot open \"%s\" for writing\n",
                         out_path.c_str());
            return kExitRuntime;
        }
        double tail_lb = bandit_elim::normal_tail_lower_bound(report.z);
        double delta_power = std::pow(report.delta, 1.0 - report.beta);
        out << "beta,delta,eps,m,k,z,tail_lower_bound,delta_power,holds,failing_step\n"
            << bandit_elim::format_real(report.beta) << ','
            << bandit_elim::format_real(report.delta) << ','
            << bandit_elim::format_real(report.eps) << ',' << report.m << ','
            << bandit_elim::format_real(report.k) << ',' << bandit_elim::format_real(report.z)
            << ',' << bandit_elim::format_real(tail_lb) << ','
            << bandit_elim::format_real(delta_power) << ',' << (report.holds ? 1 : 0) << ','
            << report.failing_step << '\n';
        std::printf("wrote %s\n", out_path.c_str());
    }

    if (n > 0 && trials > 0) {
        bandit_elim::LowerBoundConfig config;
        try {
            config = bandit_elim::make_lower_bound_config(n, eps, delta, beta);
            std::int64_t d = bandit_elim::discard_count(config);
            std::printf("exclusion experiment: n=%" PRId64 "  m=%" PRId64 "  d=%" PRId64 "\n",
                        config.n, config.m, d);
            double exact = bandit_elim::exclusion_probability(config);
            std::int64_t excluded = 0;
            for (std::int64_t t = 0; t < trials; ++t) {
                excluded += bandit_elim::exclusion_trial(config, seed + static_cast<std::uint64_t>(t)) ? 1 : 0;
            }
            auto interval = bandit_elim::wilson_interval(excluded, trials);
            std::printf("excluded: %" PRId64 "/%" PRId64 "  exact probability: %.6g  "
                        "wilson95: [%.6g, %.6g]\n",
                        excluded, trials, exact, interval.lo, interval.hi);
            if (exact < interval.lo || exact > interval.hi) {
                std::printf("note: exact probability outside the observed interval\n");
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "lower-bound: %s\n", e.what());
            return kExitConfig;
        }
    }
    return kExitOk;
}

int do_oracle(const std::string& grid, std::uint64_t seed, int max_parallel) {
    std::int64_t trials;
    if (grid == "small") {
        trials = 20000;
    } else if (grid == "full") {
        trials = 100000;
    } else {
        std::fprintf(stderr, "oracle: --grid must be \"small\" or \"full\"\n");
        return kExitConfig;
    }
    auto points = bandit_elim::agreement_grid();
    std::vector<bandit_elim::GridOutcome> outcomes;
    try {
        outcomes = bandit_elim::run_agreement_grid(trials, seed, max_parallel);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "oracle: %s\n", e.what());
        return kExitRuntime;
    }
    std::printf("%5s %-24s %8s %6s %12s %12s %12s %6s\n", "point", "means", "per-arm", "eps",
                "exact", "observed", "tolerance", "pass");
    int failures = 0;
    for (const auto& outcome : outcomes) {
        const auto& point = points[outcome.index];
        std::string means;
        for (std::size_t i = 0; i < point.means.size(); ++i) {
            if (i) means += ",";
            means += bandit_elim::format_real(point.means[i]);
        }
        std::printf("%5zu %-24s %8" PRId64 " %6s %12.8f %12.8f %12.8f %6s\n", outcome.index,
                    means.c_str(), point.samples_per_arm,
                    bandit_elim::format_real(point.eps).c_str(), outcome.exact_p,
                    outcome.mc_rate, outcome.tolerance, outcome.pass ? "ok" : "FAIL");
        failures += outcome.pass ? 0 : 1;
    }
    std::printf("%zu points, %d failures, %" PRId64 " trials each\n", outcomes.size(),
                failures, trials);
    return failures == 0 ? kExitOk : kExitSelfCheck;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seeded benchmark harness for (eps,delta)-PAC arm elimination"};
    app.require_subcommand(1);

    std::string algo_name;
    std::int64_t predict_n = 0;
    double predict_eps = 0.2;
    double predict_delta = 0.05;
    double predict_lambda = bandit_elim::kDefaultLambda;
    double predict_alpha = bandit_elim::kDefaultAlpha;
    auto* predict_cmd =
        app.add_subcommand("predict", "print the deterministic sampling plan");
    predict_cmd->add_option("--algo", algo_name,
                            "naive | aggressive | saba | aba | abaleh | median")
        ->required();
    predict_cmd->add_option("--n", predict_n, "number of arms")->required();
    predict_cmd->add_option("--eps", predict_eps, "accuracy target (default 0.2)");
    predict_cmd->add_option("--delta", predict_delta, "failure budget (default 0.05)");
    predict_cmd->add_option("--lambda", predict_lambda, "abaleh shortlist knob");
    predict_cmd->add_option("--alpha", predict_alpha, "aba accuracy split");

    std::string config_path;
    std::string run_out = "report.csv";
    auto* run_cmd = app.add_subcommand("run", "execute a JSON-configured trial batch");
    run_cmd->add_option("--config", config_path, "JSON run config")->required();
    run_cmd->add_option("--out", run_out, "CSV report path (default report.csv)");

    double lb_beta = 0.0;
    double lb_delta = 0.0;
    double lb_eps = -1.0;
    std::int64_t lb_n = 0;
    std::int64_t lb_trials = 0;
    std::uint64_t lb_seed = 1;
    std::string lb_out;
    auto* lb_cmd = app.add_subcommand(
        "lower-bound", "evaluate the exclusion experiment and its tail-bound chain");
    lb_cmd->add_option("--beta", lb_beta, "exponent discount, in (0, 1/2)")->required();
    lb_cmd->add_option("--delta", lb_delta, "failure budget, in (0, 1)")->required();
    lb_cmd->add_option("--eps", lb_eps, "accuracy target (default 0.5e-4 * beta)");
    lb_cmd->add_option("--n", lb_n, "arms for the sampled exclusion experiment");
    lb_cmd->add_option("--trials", lb_trials, "sampled exclusion trials");
    lb_cmd->add_option("--seed", lb_seed, "trial seed base (default 1)");
    lb_cmd->add_option("--out", lb_out, "write a one-row chain CSV");

    std::string oracle_grid = "small";
    std::uint64_t oracle_seed = 20260815;
    int oracle_parallel = 0;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "cross-check the simulator against exact enumeration");
    oracle_cmd->add_option("--grid", oracle_grid, "small (20000 trials) or full (100000)");
    oracle_cmd->add_option("--seed", oracle_seed, "master seed (default 20260815)");
    oracle_cmd->add_option("--max-parallel", oracle_parallel, "worker cap, 0 = auto");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*predict_cmd) {
        return do_predict(algo_name, predict_n, predict_eps, predict_delta, predict_lambda,
                          predict_alpha);
    }
    if (*run_cmd) {
        return do_run(config_path, run_out);
    }
    if (*lb_cmd) {
        if (lb_eps <= 0.0) lb_eps = 0.5e-4 * lb_beta;
        return do_lower_bound(lb_beta, lb_delta, lb_eps, lb_n, lb_trials, lb_seed, lb_out);
    }
    if (*oracle_cmd) {
        return do_oracle(oracle_grid, oracle_seed, oracle_parallel);
    }
    return kExitConfig;
}
