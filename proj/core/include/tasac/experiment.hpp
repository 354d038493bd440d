#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tasac/agent.hpp"
#include "tasac/config.hpp"

namespace tasac {

/// Rectangle-rule ITAE over control intervals: dt * sum(t_k * |e_k|).
/// Matches the reward identity ITAE == -dt * sum(r_k) exactly.
double compute_itae(std::span<const TrajectoryRow> trajectory, double dt);

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<EpisodeLog> episodes;
    std::vector<TrajectoryRow> last_trajectory;
    bool failed = false;      // excluded from the aggregate
    std::string error;

    /// Mean ITAE over the last `window` non-aborted episodes.
    double window_mean_itae(std::size_t window) const;
};

struct RunReport {
    ExperimentSpec spec;
    std::string config_text;   // canonical, re-runnable
    std::string config_hash;
    std::string build_id;      // toolchain tag, stable across re-runs
    std::vector<SeedRun> runs; // sorted by seed
    double aggregate_itae = 0.0;
    std::vector<std::string> warnings;

    std::string label() const;  // e.g. "tasac/min-min/nominal"
};

/// Trains every seed (in parallel, capped by TASAC_MAX_THREADS) and
/// aggregates the windowed ITAE over the non-failed seeds in seed order.
RunReport run_experiment(const ExperimentSpec& spec);

/// Deterministic report directory: summary.txt, itae_matrix.csv, config.cfg,
/// metrics_seed*.csv, trajectory_seed*.csv. No wall-clock metadata, so a
/// re-run with the same config is bitwise identical.
void write_report(const RunReport& report, const std::filesystem::path& dir);
RunReport read_report(const std::filesystem::path& dir);

/// 100 * (itae_b - itae_a) / itae_a: the improvement of a over b.
double improvement_percent(double itae_a, double itae_b);

struct ComparisonEntry {
    std::string label_a;
    std::string label_b;
    double itae_a = 0.0;
    double itae_b = 0.0;
    double improvement_of_a_over_b = 0.0;
};

struct ComparisonTable {
    Scenario scenario = Scenario::Nominal;
    std::vector<ComparisonEntry> entries;  // all ordered pairs a != b
};

/// Requires >= 2 reports on the same scenario.
ComparisonTable compare_report(const std::vector<RunReport>& reports);
void write_comparison(const ComparisonTable& table, const std::filesystem::path& dir);

/// Plot-ready CSVs: reward_curve.csv (per-episode mean/min/max return and
/// mean ITAE across seeds) and tracking.csv (t, T_r, T_ref of the first
/// non-failed seed's final episode), plus a generic gnuplot script.
void emit_plots(const RunReport& report, const std::filesystem::path& dir);

/// Mean ITAE of a uniform random-action policy over `episodes` batches.
double random_policy_mean_itae(const EnvConfig& env_config, std::size_t episodes, Rng& rng);

}  // namespace tasac
