#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tasac/matrix.hpp"
#include "tasac/reactor.hpp"
#include "tasac/rng.hpp"

namespace tasac {

enum class Scenario { Nominal, MeasurementNoise, BatchToBatchVariation };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

/// Agent-visible state: temperature tracking error (K) and the batch clock
/// normalized to [0, 1] for network conditioning.
struct Observation {
    double error = 0.0;
    double time_norm = 0.0;

    Vec to_vector() const { return {error, time_norm}; }
    static constexpr std::size_t dim = 2;
};

struct EnvConfig {
    double t_ref = 333.15;            // setpoint, K
    double batch_duration = 120.0;    // minutes
    double control_interval = 1.0;    // minutes per control move
    std::size_t rk4_substeps = 10;    // integrator substeps per control interval
    double t_jacket_in_min = 293.15;  // action bounds, K
    double t_jacket_in_max = 363.15;
    Scenario scenario = Scenario::Nominal;
    double noise_fraction = 0.005;    // measurement-noise sigma as fraction of T_r
    double btbv_fraction = 0.10;      // per-batch uniform ko perturbation half-width

    ReactorState initial_state;
    KineticParams kinetics;
    ThermalParams thermal;

    std::size_t steps_per_episode() const;
    void validate() const;
};

/// Defaults: Noureddini-Zhu soybean transesterification kinetics, a 1 m^3
/// jacketed reactor, 6:1 alcohol:TG initial charge at 321.15 K.
EnvConfig default_env_config();

struct StepResult {
    ReactorState state;
    Observation observation;
    double reward = 0.0;
    bool done = false;
    double t_jacket_in = 0.0;         // applied jacket inlet temperature, K
    std::size_t negative_clips = 0;
};

struct TrajectoryRow {
    double t = 0.0;
    double t_reactor = 0.0;
    double t_jacket = 0.0;
    double t_jacket_in = 0.0;
    double error = 0.0;
    double reward = 0.0;
    double conc_tg = 0.0, conc_dg = 0.0, conc_mg = 0.0;
    double conc_e = 0.0, conc_a = 0.0, conc_gl = 0.0;
};

/// Time-weighted tracking penalty r = -|e| * t, t in minutes of batch clock.
double reward_fn(double error, double t);

/// Batch reactor episode with the configured disturbance scenario.
///
/// Value-like; one instance drives one training run. The nominal scenario
/// consumes zero draws from the environment RNG.
class ReactorEnv {
public:
    explicit ReactorEnv(EnvConfig config);

    /// Starts a new batch. Under the btbv scenario each pre-exponential
    /// factor is independently perturbed by a uniform factor in
    /// [1-f, 1+f], redrawn per batch and fixed within it.
    Observation reset(Rng& rng);

    /// Applies one control move (action_raw in [-1, 1] mapped affinely onto
    /// the jacket-inlet bounds) and integrates one control interval.
    StepResult step(double action_raw, Rng& rng);

    Observation observe(Rng& rng) const;

    const ReactorState& state() const { return state_; }
    const EnvConfig& config() const { return config_; }
    const KineticParams& episode_kinetics() const { return episode_kinetics_; }
    bool done() const { return done_; }
    std::size_t negative_clips() const { return negative_clips_; }

private:
    EnvConfig config_;
    KineticParams episode_kinetics_;  // nominal or per-batch perturbed
    ReactorState state_;
    bool started_ = false;
    bool done_ = false;
    std::size_t negative_clips_ = 0;
};

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& is);

}  // namespace tasac
