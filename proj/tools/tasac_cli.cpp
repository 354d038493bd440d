// Command-line benchmark harness: train / sweep / compare / plot-data.
// Exit codes: 0 success, 1 configuration error, 2 run failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tasac/csv.hpp"
#include "tasac/errors.hpp"
#include "tasac/experiment.hpp"

using namespace tasac;
namespace fs = std::filesystem;

namespace {

struct SpecFlags {
    std::string config_path;
    std::string preset = "full";
    std::string scenario;
    std::string algorithm;
    std::string strategy;
    std::string seeds;
    int episodes = -1;
    int window = -1;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
    auto* config = cmd->add_option("--config", f.config_path, "Experiment config file (key = value sections)");
    cmd->add_option("--preset", f.preset, "Baseline when no --config is given: full (10 seeds x 100 episodes) or desk (3 x 40, small networks)")
        ->check(CLI::IsMember({"full", "desk"}))
        ->excludes(config);
    cmd->add_option("--scenario", f.scenario, "nominal | noise | btbv");
    cmd->add_option("--algorithm", f.algorithm, "tasac | sac");
    cmd->add_option("--strategy", f.strategy, "min-min | min-max | max-min | max-max | min-avg");
    cmd->add_option("--seeds", f.seeds, "Comma-separated seed list, e.g. 1,2,3");
    cmd->add_option("--episodes", f.episodes, "Training episodes per seed");
    cmd->add_option("--window", f.window, "Averaging window for the reported ITAE");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
    std::vector<std::uint64_t> seeds;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        try {
            seeds.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw config_error("bad seed '" + item + "' in --seeds");
        }
    }
    return seeds;
}

ExperimentSpec resolve_spec(const SpecFlags& f) {
    ExperimentSpec spec;
    const bool scenario_given = !f.scenario.empty();
    const Scenario scen = scenario_given ? scenario_from_string(f.scenario) : Scenario::Nominal;
    const Algorithm alg = f.algorithm.empty() ? Algorithm::Tasac : algorithm_from_string(f.algorithm);
    const SelectionStrategy strat =
        f.strategy.empty() ? SelectionStrategy::MinMin : strategy_from_string(f.strategy);

    if (!f.config_path.empty()) {
        spec = load_spec_file(f.config_path);
        if (scenario_given) {
            spec.scenario = scen;
            spec.env.scenario = scen;
        }
        if (!f.algorithm.empty()) spec.algorithm = alg;
        if (!f.strategy.empty()) spec.strategy = strat;
    } else if (f.preset == "desk") {
        spec = desk_preset(scen, alg, strat);
    } else {
        spec = default_experiment(scen, alg, strat);
    }

    if (!f.seeds.empty()) spec.seeds = parse_seed_list(f.seeds);
    if (f.episodes >= 0) spec.episodes = static_cast<std::size_t>(f.episodes);
    if (f.window >= 0) spec.averaging_window = static_cast<std::size_t>(f.window);
    spec.validate();
    return spec;
}

void print_report_summary(const RunReport& report) {
    std::printf("%s: aggregate windowed ITAE %.2f over %zu seed(s)\n", report.label().c_str(),
                report.aggregate_itae, report.runs.size());
    for (const auto& run : report.runs) {
        if (run.failed)
            std::printf("  seed %llu: FAILED (%s)\n",
                        static_cast<unsigned long long>(run.seed), run.error.c_str());
        else
            std::printf("  seed %llu: windowed ITAE %.2f\n",
                        static_cast<unsigned long long>(run.seed),
                        run.window_mean_itae(report.spec.averaging_window));
    }
    for (const auto& w : report.warnings) std::printf("  warning: %s\n", w.c_str());
}

int cmd_train(const SpecFlags& flags, const std::string& out_dir) {
    const ExperimentSpec spec = resolve_spec(flags);
    const RunReport report = run_experiment(spec);
    write_report(report, out_dir);
    print_report_summary(report);
    std::printf("report written to %s\n", out_dir.c_str());
    bool any_ok = false;
    for (const auto& run : report.runs) any_ok |= !run.failed;
    return any_ok ? 0 : 2;
}

int cmd_sweep(const SpecFlags& flags, const std::string& out_dir) {
    static const SelectionStrategy kStrategies[5] = {
        SelectionStrategy::MinMin, SelectionStrategy::MinMax, SelectionStrategy::MaxMin,
        SelectionStrategy::MaxMax, SelectionStrategy::MinAvg};

    struct Row {
        std::string study;
        double itae;
    };
    std::vector<Row> rows;
    bool all_failed = true;
    for (const auto strat : kStrategies) {
        SpecFlags f = flags;
        f.strategy = to_string(strat);
        f.algorithm = "tasac";
        const ExperimentSpec spec = resolve_spec(f);
        std::printf("running %s ...\n", to_string(strat).c_str());
        std::fflush(stdout);
        const RunReport report = run_experiment(spec);
        write_report(report, fs::path(out_dir) / to_string(strat));
        rows.push_back({to_string(strat), report.aggregate_itae});
        for (const auto& run : report.runs) all_failed &= run.failed;
    }

    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "strategy_table.csv", std::ios::binary);
    os << "study,average_itae\n";
    std::printf("\n%-10s %s\n", "study", "average (ITAE)");
    for (const auto& row : rows) {
        os << row.study << ',' << csv_double(row.itae) << '\n';
        std::printf("%-10s %.2f\n", row.study.c_str(), row.itae);
    }
    std::printf("sweep written to %s\n", out_dir.c_str());
    return all_failed ? 2 : 0;
}

int cmd_compare(const std::vector<std::string>& report_dirs, const std::string& out_dir) {
    std::vector<RunReport> reports;
    for (const auto& dir : report_dirs) reports.push_back(read_report(dir));
    const ComparisonTable table = compare_report(reports);
    write_comparison(table, out_dir);
    std::printf("scenario: %s\n", to_string(table.scenario).c_str());
    for (const auto& e : table.entries)
        std::printf("%s (ITAE %.2f) vs %s (ITAE %.2f): improvement %.1f%%\n", e.label_a.c_str(),
                    e.itae_a, e.label_b.c_str(), e.itae_b, e.improvement_of_a_over_b);
    std::printf("comparison written to %s\n", out_dir.c_str());
    return 0;
}

int cmd_plot_data(const std::string& report_dir, const std::string& out_dir) {
    const RunReport report = read_report(report_dir);
    emit_plots(report, out_dir);
    std::printf("plot data written to %s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TASAC batch-reactor control benchmark harness"};
    app.require_subcommand(1);

    SpecFlags train_flags, sweep_flags;
    std::string train_out, sweep_out, compare_out, plot_out, plot_report;
    std::vector<std::string> compare_reports;

    auto* train = app.add_subcommand("train", "Train one experiment and write its report");
    add_spec_flags(train, train_flags);
    train->add_option("--out", train_out, "Report output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "Run all five selection strategies");
    add_spec_flags(sweep, sweep_flags);
    sweep->add_option("--out", sweep_out, "Sweep output directory")->required();

    auto* compare = app.add_subcommand("compare", "Compare stored reports on one scenario");
    compare->add_option("reports", compare_reports, "Report directories")->required()->expected(-2);
    compare->add_option("--out", compare_out, "Comparison output directory")->required();

    auto* plot = app.add_subcommand("plot-data", "Emit plot-ready CSVs from a stored report");
    plot->add_option("report", plot_report, "Report directory")->required();
    plot->add_option("--out", plot_out, "Plot-data output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return cmd_train(train_flags, train_out);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_out);
        if (compare->parsed()) return cmd_compare(compare_reports, compare_out);
        if (plot->parsed()) return cmd_plot_data(plot_report, plot_out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failure: %s\n", e.what());
        return 2;
    }
    return 0;
}
