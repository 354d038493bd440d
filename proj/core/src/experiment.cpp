#include "tasac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "tasac/csv.hpp"
#include "tasac/errors.hpp"

namespace tasac {

namespace fs = std::filesystem;

double compute_itae(std::span<const TrajectoryRow> trajectory, double dt) {
    if (trajectory.empty()) throw usage_error("compute_itae: empty trajectory");
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        if (trajectory[i].t < trajectory[i - 1].t)
            throw usage_error("compute_itae: trajectory must be time-ordered");
    double acc = 0.0;
    for (const auto& row : trajectory) acc += std::abs(row.error) * row.t;
    return dt * acc;
}

double SeedRun::window_mean_itae(std::size_t window) const {
    double acc = 0.0;
    std::size_t count = 0;
    for (auto it = episodes.rbegin(); it != episodes.rend() && count < window; ++it) {
        if (it->aborted) continue;
        acc += it->itae;
        ++count;
    }
    if (count < window) return std::numeric_limits<double>::quiet_NaN();
    return acc / static_cast<double>(window);
}

std::string RunReport::label() const {
    std::string l = to_string(spec.algorithm);
    if (spec.algorithm == Algorithm::Tasac) l += "/" + to_string(spec.strategy);
    return l + "/" + to_string(spec.scenario);
}

namespace {

std::size_t thread_cap() {
    if (const char* env = std::getenv("TASAC_MAX_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

SeedRun run_one_seed(const ExperimentSpec& spec, std::uint64_t seed) {
    SeedRun run;
    run.seed = seed;
    try {
        Rng rng(seed);
        AgentBundle bundle = make_agent(Observation::dim, 1, spec.algorithm, spec.strategy,
                                        spec.hyper, rng);
        const TrainResult tr = train(bundle, spec.env, spec.episodes, rng);
        run.episodes = tr.episodes;
        run.last_trajectory = tr.last_trajectory;
        if (std::isnan(run.window_mean_itae(spec.averaging_window))) {
            run.failed = true;
            run.error = "fewer than averaging_window completed episodes";
        }
    } catch (const std::exception& ex) {
        run.failed = true;
        run.error = ex.what();
    }
    return run;
}

std::string build_id_string() {
#ifndef TASAC_GIT_SHA
#define TASAC_GIT_SHA "unknown"
#endif
#if defined(__clang__)
    return std::string(TASAC_GIT_SHA) + "/clang-" + std::to_string(__clang_major__) + "." +
           std::to_string(__clang_minor__);
#elif defined(__GNUC__)
    return std::string(TASAC_GIT_SHA) + "/gcc-" + std::to_string(__GNUC__) + "." +
           std::to_string(__GNUC_MINOR__);
#else
    return std::string(TASAC_GIT_SHA);
#endif
}

}  // namespace

RunReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    RunReport report;
    report.spec = spec;
    report.spec.env.scenario = spec.scenario;
    report.config_text = to_config_text(report.spec);
    report.config_hash = config_hash(report.config_text);
    report.build_id = build_id_string();

    // canonical seed order makes the aggregate independent of the list order
    std::vector<std::uint64_t> seeds = spec.seeds;
    std::sort(seeds.begin(), seeds.end());

    report.runs.resize(seeds.size());
    const std::size_t workers = std::min(thread_cap(), seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            report.runs[i] = run_one_seed(report.spec, seeds[i]);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double acc = 0.0;
    std::size_t used = 0;
    for (const auto& run : report.runs) {
        if (run.failed) {
            report.warnings.push_back("seed " + std::to_string(run.seed) +
                                      " excluded from aggregate: " + run.error);
            continue;
        }
        acc += run.window_mean_itae(report.spec.averaging_window);
        ++used;
    }
    report.aggregate_itae = used > 0 ? acc / static_cast<double>(used)
                                     : std::numeric_limits<double>::quiet_NaN();
    return report;
}

void write_report(const RunReport& report, const fs::path& dir) {
    fs::create_directories(dir);

    {
        std::ofstream os(dir / "config.cfg", std::ios::binary);
        os << report.config_text;
    }
    {
        std::ofstream os(dir / "itae_matrix.csv", std::ios::binary);
        os << "seed,episode,itae,aborted\n";
        for (const auto& run : report.runs)
            for (const auto& ep : run.episodes)
                os << run.seed << ',' << ep.episode << ',' << csv_double(ep.itae) << ','
                   << (ep.aborted ? 1 : 0) << '\n';
    }
    for (const auto& run : report.runs) {
        {
            std::ofstream os(dir / ("metrics_seed" + std::to_string(run.seed) + ".csv"),
                             std::ios::binary);
            write_metrics_csv(os, run.episodes);
        }
        if (!run.last_trajectory.empty()) {
            std::ofstream os(dir / ("trajectory_seed" + std::to_string(run.seed) + ".csv"),
                             std::ios::binary);
            write_trajectory_csv(os, run.last_trajectory);
        }
    }
    {
        std::ofstream os(dir / "summary.txt", std::ios::binary);
        os << "experiment = " << report.label() << "\n";
        os << "scenario = " << to_string(report.spec.scenario) << "\n";
        os << "algorithm = " << to_string(report.spec.algorithm) << "\n";
        os << "strategy = " << to_string(report.spec.strategy) << "\n";
        os << "episodes = " << report.spec.episodes << "\n";
        os << "averaging_window = " << report.spec.averaging_window << "\n";
        os << "seeds = " << report.runs.size() << "\n";
        os << "config_hash = " << report.config_hash << "\n";
        os << "build_id = " << report.build_id << "\n";
        os << "aggregate_itae = " << csv_double(report.aggregate_itae) << "\n";
        for (const auto& run : report.runs) {
            os << "seed_" << run.seed << "_window_itae = "
               << csv_double(run.window_mean_itae(report.spec.averaging_window)) << "\n";
        }
        for (const auto& w : report.warnings) os << "warning = " << w << "\n";
    }
}

RunReport read_report(const fs::path& dir) {
    std::ifstream cfg(dir / "config.cfg", std::ios::binary);
    if (!cfg) throw config_error("report: missing config.cfg in " + dir.string());
    std::stringstream ss;
    ss << cfg.rdbuf();

    RunReport report;
    report.config_text = ss.str();
    report.spec = spec_from_config_text(report.config_text);
    report.config_hash = config_hash(report.config_text);
    report.build_id = build_id_string();

    std::ifstream matrix(dir / "itae_matrix.csv", std::ios::binary);
    if (!matrix) throw config_error("report: missing itae_matrix.csv in " + dir.string());
    std::string line;
    std::getline(matrix, line);  // header
    SeedRun* current = nullptr;
    while (std::getline(matrix, line)) {
        if (line.empty()) continue;
        const auto fields = [&] {
            std::vector<std::string> out;
            std::stringstream ls(line);
            std::string f;
            while (std::getline(ls, f, ',')) out.push_back(f);
            return out;
        }();
        if (fields.size() != 4) throw config_error("report: bad itae_matrix row '" + line + "'");
        const auto seed = static_cast<std::uint64_t>(std::stoull(fields[0]));
        if (!current || current->seed != seed) {
            report.runs.emplace_back();
            current = &report.runs.back();
            current->seed = seed;
        }
        EpisodeLog ep;
        ep.episode = std::stoull(fields[1]);
        ep.itae = std::stod(fields[2]);
        ep.aborted = fields[3] == "1";
        current->episodes.push_back(ep);
    }

    for (auto& run : report.runs) {
        const fs::path traj = dir / ("trajectory_seed" + std::to_string(run.seed) + ".csv");
        if (fs::exists(traj)) {
            std::ifstream ts(traj, std::ios::binary);
            run.last_trajectory = read_trajectory_csv(ts);
        }
        if (std::isnan(run.window_mean_itae(report.spec.averaging_window))) run.failed = true;
    }

    double acc = 0.0;
    std::size_t used = 0;
    for (const auto& run : report.runs) {
        if (run.failed) continue;
        acc += run.window_mean_itae(report.spec.averaging_window);
        ++used;
    }
    report.aggregate_itae = used > 0 ? acc / static_cast<double>(used)
                                     : std::numeric_limits<double>::quiet_NaN();
    return report;
}

double improvement_percent(double itae_a, double itae_b) {
    return 100.0 * (itae_b - itae_a) / itae_a;
}

ComparisonTable compare_report(const std::vector<RunReport>& reports) {
    if (reports.size() < 2) throw config_error("compare: need at least two reports");
    const Scenario scenario = reports.front().spec.scenario;
    for (const auto& r : reports)
        if (r.spec.scenario != scenario)
            throw config_error("compare: reports mix scenarios (" + to_string(scenario) + " vs " +
                               to_string(r.spec.scenario) + ")");
    ComparisonTable table;
    table.scenario = scenario;
    for (std::size_t a = 0; a < reports.size(); ++a) {
        for (std::size_t b = 0; b < reports.size(); ++b) {
            if (a == b) continue;
            ComparisonEntry e;
            e.label_a = reports[a].label();
            e.label_b = reports[b].label();
            e.itae_a = reports[a].aggregate_itae;
            e.itae_b = reports[b].aggregate_itae;
            e.improvement_of_a_over_b = improvement_percent(e.itae_a, e.itae_b);
            table.entries.push_back(e);
        }
    }
    return table;
}

void write_comparison(const ComparisonTable& table, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream os(dir / "comparison.csv", std::ios::binary);
    os << "scenario,a,b,itae_a,itae_b,improvement_pct_of_a_over_b\n";
    for (const auto& e : table.entries)
        os << to_string(table.scenario) << ',' << e.label_a << ',' << e.label_b << ','
           << csv_double(e.itae_a) << ',' << csv_double(e.itae_b) << ','
           << csv_double(e.improvement_of_a_over_b) << '\n';
}

void emit_plots(const RunReport& report, const fs::path& dir) {
    if (report.runs.empty()) throw usage_error("emit_plots: report has no runs");
    std::vector<const SeedRun*> ok;
    for (const auto& run : report.runs)
        if (!run.failed && !run.episodes.empty()) ok.push_back(&run);
    if (ok.empty()) throw usage_error("emit_plots: no completed seed runs to plot");

    const std::size_t episodes = ok.front()->episodes.size();
    for (const auto* run : ok)
        if (run->episodes.size() != episodes)
            throw usage_error("emit_plots: seed runs have inconsistent episode counts");

    fs::create_directories(dir);
    {
        std::ofstream os(dir / "reward_curve.csv", std::ios::binary);
        os << "episode,mean_return,min_return,max_return,mean_itae\n";
        for (std::size_t ep = 0; ep < episodes; ++ep) {
            double sum = 0.0, lo = 0.0, hi = 0.0, itae = 0.0;
            for (std::size_t i = 0; i < ok.size(); ++i) {
                const double r = ok[i]->episodes[ep].episodic_return;
                sum += r;
                itae += ok[i]->episodes[ep].itae;
                lo = i == 0 ? r : std::min(lo, r);
                hi = i == 0 ? r : std::max(hi, r);
            }
            const double n = static_cast<double>(ok.size());
            os << ep << ',' << csv_double(sum / n) << ',' << csv_double(lo) << ','
               << csv_double(hi) << ',' << csv_double(itae / n) << '\n';
        }
    }
    {
        const SeedRun* first = nullptr;
        for (const auto* run : ok)
            if (!run->last_trajectory.empty()) {
                first = run;
                break;
            }
        if (!first) throw usage_error("emit_plots: no trajectory available");
        std::ofstream os(dir / "tracking.csv", std::ios::binary);
        os << "t,T_r,T_ref\n";
        for (const auto& row : first->last_trajectory)
            os << csv_double(row.t) << ',' << csv_double(row.t_reactor) << ','
               << csv_double(report.spec.env.t_ref) << '\n';
    }
    {
        std::ofstream os(dir / "plots.gp", std::ios::binary);
        os << "set datafile separator ','\n"
              "set key autotitle columnhead\n"
              "set terminal pngcairo size 900,600\n"
              "set output 'reward_curve.png'\n"
              "set xlabel 'episode'\nset ylabel 'return'\n"
              "plot 'reward_curve.csv' using 1:2 with lines, '' using 1:3 with lines, "
              "'' using 1:4 with lines\n"
              "set output 'tracking.png'\n"
              "set xlabel 't [min]'\nset ylabel 'T [K]'\n"
              "plot 'tracking.csv' using 1:2 with lines, '' using 1:3 with lines\n";
    }
}

double random_policy_mean_itae(const EnvConfig& env_config, std::size_t episodes, Rng& rng) {
    if (episodes == 0) throw usage_error("random_policy_mean_itae: episodes must be > 0");
    ReactorEnv env(env_config);
    Rng env_rng = rng.fork(0xE1);
    Rng action_rng = rng.fork(0xA7);
    const double dt = env_config.control_interval;
    double total = 0.0;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        env.reset(env_rng);
        double itae = 0.0;
        while (!env.done()) {
            const StepResult sr = env.step(action_rng.uniform(-1.0, 1.0), env_rng);
            itae += -sr.reward * dt;
        }
        total += itae;
    }
    return total / static_cast<double>(episodes);
}

}  // namespace tasac
