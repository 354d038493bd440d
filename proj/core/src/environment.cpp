#include "tasac/environment.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "tasac/csv.hpp"
#include "tasac/errors.hpp"

namespace tasac {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Nominal: return "nominal";
        case Scenario::MeasurementNoise: return "noise";
        case Scenario::BatchToBatchVariation: return "btbv";
    }
    return "nominal";
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "nominal") return Scenario::Nominal;
    if (name == "noise" || name == "measurement_noise") return Scenario::MeasurementNoise;
    if (name == "btbv") return Scenario::BatchToBatchVariation;
    throw config_error("unknown scenario '" + name + "' (expected nominal|noise|btbv)");
}

std::size_t EnvConfig::steps_per_episode() const {
    return static_cast<std::size_t>(std::llround(batch_duration / control_interval));
}

void EnvConfig::validate() const {
    if (!(batch_duration > 0.0) || !(control_interval > 0.0))
        throw config_error("env: batch_duration and control_interval must be > 0");
    const double ratio = batch_duration / control_interval;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw config_error("env: batch_duration must be an integer multiple of control_interval");
    if (rk4_substeps == 0) throw config_error("env: rk4_substeps must be >= 1");
    if (!(t_jacket_in_min < t_jacket_in_max))
        throw config_error("env: jacket inlet bounds must be ordered");
    if (!(noise_fraction >= 0.0 && noise_fraction <= 0.1))
        throw config_error("env: noise_fraction must be in [0, 0.1]");
    if (!(btbv_fraction >= 0.0 && btbv_fraction <= 0.1))
        throw config_error("env: btbv_fraction must be in [0, 0.1]");
    if (!(t_ref > 0.0)) throw config_error("env: t_ref must be > 0 K");
    kinetics.validate();
    thermal.validate();
}

EnvConfig default_env_config() {
    EnvConfig c;

    // Noureddini & Zhu soybean-oil kinetics: rate constants at 50 C in
    // L/(mol min) back-solved to pre-exponential factors.
    c.kinetics.ko = {3.885013e7, 5.737874e5, 5.813663e12, 9.773839e9, 5.327971e3, 2.136964e4};
    c.kinetics.activation_energy = {54998.7, 41555.5, 83094.2, 61249.6, 26865.5, 40116.2};
    c.kinetics.gas_constant = 8.314;

    // 1 m^3 jacketed vessel with a water jacket.
    c.thermal.molar_mass = 0.120;            // kg/mol, charge-average
    c.thermal.volume = 1000.0;               // L
    c.thermal.density = 0.860;               // kg/L
    c.thermal.heat_capacity = 340.0;         // J/(mol K)
    c.thermal.heat_of_reaction = -18500.0;   // J/mol, mildly exothermic
    c.thermal.jacket_flow = 25.0;            // kg/min
    c.thermal.jacket_volume = 100.0;         // L
    c.thermal.jacket_density = 1.0;          // kg/L
    c.thermal.coolant_heat_capacity = 4186.0;  // J/(kg K)
    c.thermal.ua = 1.0e5;                    // J/(min K)

    // 6:1 alcohol:TG charge at 48 C; controller must heat to the setpoint.
    c.initial_state.conc_tg = 0.3226;
    c.initial_state.conc_a = 1.9356;
    c.initial_state.t_reactor = 321.15;
    c.initial_state.t_jacket = 321.15;
    return c;
}

double reward_fn(double error, double t) {
    if (t < 0.0) throw usage_error("reward_fn: t must be >= 0");
    return -std::abs(error) * t;
}

ReactorEnv::ReactorEnv(EnvConfig config) : config_(std::move(config)) {
    config_.validate();
    episode_kinetics_ = config_.kinetics;
    state_ = config_.initial_state;
}

Observation ReactorEnv::reset(Rng& rng) {
    episode_kinetics_ = config_.kinetics;
    if (config_.scenario == Scenario::BatchToBatchVariation) {
        const double f = config_.btbv_fraction;
        for (auto& ko : episode_kinetics_.ko) ko *= rng.uniform(1.0 - f, 1.0 + f);
    }
    state_ = config_.initial_state;
    state_.clock = 0.0;
    started_ = true;
    done_ = false;
    negative_clips_ = 0;
    return observe(rng);
}

Observation ReactorEnv::observe(Rng& rng) const {
    double t_measured = state_.t_reactor;
    if (config_.scenario == Scenario::MeasurementNoise && config_.noise_fraction > 0.0) {
        const double eta = config_.noise_fraction * rng.gaussian_clipped(3.0);
        t_measured = state_.t_reactor * (1.0 + eta);
    }
    Observation obs;
    obs.error = t_measured - config_.t_ref;
    obs.time_norm = state_.clock / config_.batch_duration;
    return obs;
}

StepResult ReactorEnv::step(double action_raw, Rng& rng) {
    if (!started_) throw usage_error("env: step before reset");
    if (done_) throw usage_error("env: step after episode finished");

    const double half_span = 0.5 * (config_.t_jacket_in_max - config_.t_jacket_in_min);
    const double clamped = action_raw < -1.0 ? -1.0 : (action_raw > 1.0 ? 1.0 : action_raw);
    const double t_jacket_in = config_.t_jacket_in_min + (clamped + 1.0) * half_span;

    const double dt = config_.control_interval / static_cast<double>(config_.rk4_substeps);
    StepResult out;
    out.t_jacket_in = t_jacket_in;
    for (std::size_t i = 0; i < config_.rk4_substeps; ++i) {
        Rk4StepResult r = rk4_step(state_, t_jacket_in, dt, episode_kinetics_, config_.thermal);
        state_ = r.state;
        out.negative_clips += r.negative_clips;
    }
    negative_clips_ += out.negative_clips;

    done_ = state_.clock >= config_.batch_duration - 1e-9;
    out.state = state_;
    out.observation = observe(rng);
    out.reward = reward_fn(out.observation.error, state_.clock);
    out.done = done_;
    return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
    os << "t,T_r,T_j,T_jin,e,reward,conc_TG,conc_DG,conc_MG,conc_E,conc_A,conc_GL\n";
    for (const auto& r : rows) {
        os << csv_double(r.t) << ',' << csv_double(r.t_reactor) << ',' << csv_double(r.t_jacket)
           << ',' << csv_double(r.t_jacket_in) << ',' << csv_double(r.error) << ','
           << csv_double(r.reward) << ',' << csv_double(r.conc_tg) << ',' << csv_double(r.conc_dg)
           << ',' << csv_double(r.conc_mg) << ',' << csv_double(r.conc_e) << ','
           << csv_double(r.conc_a) << ',' << csv_double(r.conc_gl) << '\n';
    }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& is) {
    std::vector<TrajectoryRow> rows;
    std::string line;
    if (!std::getline(is, line)) throw config_error("trajectory csv: empty file");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(ss, field, ',')) vals.push_back(std::stod(field));
        if (vals.size() != 12) throw config_error("trajectory csv: bad row '" + line + "'");
        TrajectoryRow r;
        r.t = vals[0];
        r.t_reactor = vals[1];
        r.t_jacket = vals[2];
        r.t_jacket_in = vals[3];
        r.error = vals[4];
        r.reward = vals[5];
        r.conc_tg = vals[6];
        r.conc_dg = vals[7];
        r.conc_mg = vals[8];
        r.conc_e = vals[9];
        r.conc_a = vals[10];
        r.conc_gl = vals[11];
        rows.push_back(r);
    }
    return rows;
}

}  // namespace tasac
