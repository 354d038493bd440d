#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tasac/environment.hpp"
#include "tasac/matrix.hpp"
#include "tasac/mlp.hpp"
#include "tasac/policy.hpp"
#include "tasac/replay_buffer.hpp"
#include "tasac/rng.hpp"

namespace tasac {

/// Composition of the per-action critic aggregate (inner op over the two
/// critics) and the across-actor choice (outer op over the two candidates).
enum class SelectionStrategy { MinMin, MinMax, MaxMin, MaxMax, MinAvg };

std::string to_string(SelectionStrategy s);
SelectionStrategy strategy_from_string(const std::string& name);

enum class Algorithm { Tasac, Sac };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct Hyperparameters {
    double gamma = 0.99;
    std::size_t batch_size = 100;
    double lr_actor = 3e-4;
    double lr_critic = 3e-4;
    double lr_entropy = 3e-4;
    double tau = 0.01;
    std::size_t episodes = 100;
    double target_entropy = -1.0;    // -(action dimension)
    std::vector<std::size_t> hidden = {512, 512, 512, 512};
    std::size_t replay_capacity = 1000000;
    double grad_clip_norm = 10.0;    // <= 0 disables the safety clip
    double initial_log_alpha = -1.6094379124341003;  // alpha starts at 0.2

    /// Twin actors reuse one noise stream instead of drawing independently;
    /// used by the degenerate-twin equivalence studies.
    bool shared_noise = false;

    /// Ablation only: flip the outer selection op (argmax instead of the
    /// literal argmin over the candidate aggregates).
    bool select_outer_argmax = false;

    void validate() const;
};

/// The full network ensemble: one or two stochastic actors, twin critics,
/// their polyak-tracked targets, and a learned entropy temperature.
struct AgentBundle {
    std::vector<Actor> actors;  // size 1 = single-actor baseline, 2 = twin
    MlpParams critic_1;
    MlpParams critic_2;
    MlpParams target_critic_1;
    MlpParams target_critic_2;
    double log_alpha = 0.0;
    AdamScalar alpha_opt;
    SelectionStrategy strategy = SelectionStrategy::MinMin;
    Hyperparameters hyper;
    std::size_t obs_dim = 0;
    std::size_t action_dim = 0;

    double alpha() const;
    bool twin() const { return actors.size() == 2; }
};

/// Critics are initialized before actors so the single- and twin-actor
/// variants share the same stream prefix for a given seed.
AgentBundle make_agent(std::size_t obs_dim, std::size_t action_dim, Algorithm algorithm,
                       SelectionStrategy strategy, const Hyperparameters& hyper, Rng& rng);

double q_value(const MlpParams& critic, std::span<const double> obs,
               std::span<const double> action);

/// Pure selection core over a candidate-by-critic value table.
double inner_aggregate(SelectionStrategy s, double q_c1, double q_c2);
bool outer_is_min(SelectionStrategy s);
std::size_t select_candidate(SelectionStrategy s,
                             const std::array<std::array<double, 2>, 2>& q,
                             bool outer_argmax_flip = false);

struct ActionDiagnostics {
    std::size_t chosen_actor = 0;
    std::array<double, 2> aggregate{};
    std::array<std::array<double, 2>, 2> q{};  // q[candidate][critic]
};

struct SelectedAction {
    Vec action;
    ActionDiagnostics diag;
};

/// Samples a candidate from each actor and picks per the bundle's strategy;
/// ties go to actor 1. Single-actor bundles return the sample directly.
SelectedAction select_action(const AgentBundle& bundle, std::span<const double> obs, Rng& rng);

using Batch = std::vector<Transition>;

/// Bootstrapped regression targets r + gamma*(1-done)*min_i(Q_TV_i - alpha*logpi_i).
/// Fresh target-action noise is drawn per actor unless shared_noise is set.
Vec compute_targets(const AgentBundle& bundle, const Batch& batch, Rng& rng);

struct CriticGradient {
    MlpGrads grads;
    double loss = 0.0;
};

/// Gradient of mean((Q_j(s,a) - TV)^2) over the batch for critic j (0 or 1).
CriticGradient critic_loss_gradient(const AgentBundle& bundle, int which, const Batch& batch,
                                    const Vec& targets);

struct ActorGradient {
    MlpGrads grads;
    double loss = 0.0;
    double mean_log_pi = 0.0;
};

/// Gradient of mean(alpha*logpi - min_j Q_j(s, a~)) for one actor with the
/// given per-sample noise; critics contribute input gradients only.
ActorGradient actor_loss_gradient(const AgentBundle& bundle, std::size_t actor_index,
                                  const Batch& batch, const std::vector<Vec>& noise);

struct CriticUpdateResult {
    double loss_1 = 0.0;
    double loss_2 = 0.0;
    bool applied_1 = false;
    bool applied_2 = false;
};

/// One Adam step per critic on the mean squared error against the targets.
/// Non-finite losses skip the step and report it.
CriticUpdateResult update_critics(AgentBundle& bundle, const Batch& batch, const Vec& targets);

struct ActorUpdateResult {
    std::array<double, 2> loss{};          // per actor (index 0 only for SAC)
    std::array<double, 2> mean_log_pi{};   // fresh log-probs, feeds the alpha update
    std::array<bool, 2> applied{};
};

/// One Adam step per actor on mean(alpha*logpi - min_j Q_j(s, a~)) with
/// gradients through the reparameterized sample; critics stay frozen.
ActorUpdateResult update_actors(AgentBundle& bundle, const Batch& batch, Rng& rng);

/// One Adam step on log_alpha against mean(-log_alpha*(logpi + target_entropy));
/// the log-prob term is a constant here.
void update_temperature(AgentBundle& bundle, const ActorUpdateResult& fresh);

/// target <- tau*critic + (1-tau)*target, element-wise.
void polyak_update(AgentBundle& bundle);

struct EpisodeLog {
    std::size_t episode = 0;
    double episodic_return = 0.0;
    double itae = 0.0;
    double critic_1_loss = 0.0;   // means over the episode's update steps
    double critic_2_loss = 0.0;
    double actor_1_loss = 0.0;
    double actor_2_loss = 0.0;
    double alpha = 0.0;
    bool aborted = false;
    std::size_t negative_clips = 0;
};

struct TrainResult {
    std::vector<EpisodeLog> episodes;
    std::vector<TrajectoryRow> last_trajectory;  // last completed episode
};

/// Full training loop: per environment step, select, act, store, then one
/// update block (targets, critics, actors, temperature, polyak) once the
/// buffer holds one batch. Integration failures abort the episode, are
/// logged, and training continues with the next episode.
TrainResult train(AgentBundle& bundle, const EnvConfig& env_config, std::size_t episodes,
                  Rng& rng);

/// Single-actor degenerate case of the same loop.
TrainResult train_sac_baseline(AgentBundle& bundle, const EnvConfig& env_config,
                               std::size_t episodes, Rng& rng);

struct EvalResult {
    double episodic_return = 0.0;
    double itae = 0.0;
    std::vector<TrajectoryRow> trajectory;
};

/// One greedy evaluation episode: each actor contributes tanh(mean) and the
/// bundle's strategy picks among the candidates. Not the headline metric
/// (reported ITAE comes from training episodes); no learning happens here.
EvalResult evaluate_deterministic(const AgentBundle& bundle, const EnvConfig& env_config,
                                  Rng& rng);

void write_metrics_csv(std::ostream& os, const std::vector<EpisodeLog>& logs);

/// Versioned binary checkpoint: every network with its Adam moments,
/// log_alpha and its moments, and the caller's RNG state.
void save_checkpoint(std::ostream& os, const AgentBundle& bundle, const Rng& rng);
struct Checkpoint {
    AgentBundle bundle;
    Rng rng;
};
Checkpoint load_checkpoint(std::istream& is);

}  // namespace tasac
