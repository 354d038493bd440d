#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tasac/agent.hpp"
#include "tasac/environment.hpp"

namespace tasac {

/// One benchmark run: which scenario/algorithm/strategy, over which seeds,
/// plus the full environment and agent configuration it trains with.
struct ExperimentSpec {
    Scenario scenario = Scenario::Nominal;
    Algorithm algorithm = Algorithm::Tasac;
    SelectionStrategy strategy = SelectionStrategy::MinMin;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t episodes = 100;
    std::size_t averaging_window = 10;
    EnvConfig env = default_env_config();
    Hyperparameters hyper;

    void validate() const;
};

/// 10 for nominal/btbv reporting, 20 for the measurement-noise study.
std::size_t default_window_for(Scenario s);

ExperimentSpec default_experiment(Scenario scenario, Algorithm algorithm,
                                  SelectionStrategy strategy);

/// CI-scale preset: 3 seeds x 40 episodes on 2x64 networks, window 5.
ExperimentSpec desk_preset(Scenario scenario, Algorithm algorithm, SelectionStrategy strategy);

/// Grouped key = value config text. Parsing is strict: unknown sections or
/// keys are configuration errors.
std::string to_config_text(const ExperimentSpec& spec);
ExperimentSpec spec_from_config_text(const std::string& text);
ExperimentSpec load_spec_file(const std::string& path);

/// FNV-1a over the canonical config text.
std::string config_hash(const std::string& config_text);

/// Raw section -> (key -> value) view of a config stream, insertion-ordered.
using ConfigSections = std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;
ConfigSections parse_config_sections(std::istream& is);

}  // namespace tasac
