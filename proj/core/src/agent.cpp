#include "tasac/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "tasac/csv.hpp"
#include "tasac/errors.hpp"

namespace tasac {

std::string to_string(SelectionStrategy s) {
    switch (s) {
        case SelectionStrategy::MinMin: return "min-min";
        case SelectionStrategy::MinMax: return "min-max";
        case SelectionStrategy::MaxMin: return "max-min";
        case SelectionStrategy::MaxMax: return "max-max";
        case SelectionStrategy::MinAvg: return "min-avg";
    }
    return "min-min";
}

SelectionStrategy strategy_from_string(const std::string& name) {
    if (name == "min-min") return SelectionStrategy::MinMin;
    if (name == "min-max") return SelectionStrategy::MinMax;
    if (name == "max-min") return SelectionStrategy::MaxMin;
    if (name == "max-max") return SelectionStrategy::MaxMax;
    if (name == "min-avg") return SelectionStrategy::MinAvg;
    throw config_error("unknown strategy '" + name +
                       "' (expected min-min|min-max|max-min|max-max|min-avg)");
}

std::string to_string(Algorithm a) { return a == Algorithm::Tasac ? "tasac" : "sac"; }

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "tasac") return Algorithm::Tasac;
    if (name == "sac") return Algorithm::Sac;
    throw config_error("unknown algorithm '" + name + "' (expected tasac|sac)");
}

void Hyperparameters::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("hyper: gamma must be in (0,1]");
    if (!(tau > 0.0 && tau <= 1.0)) throw config_error("hyper: tau must be in (0,1]");
    if (!(lr_actor > 0.0 && lr_critic > 0.0 && lr_entropy >= 0.0))
        throw config_error("hyper: learning rates must be > 0");
    if (batch_size == 0) throw config_error("hyper: batch_size must be > 0");
    if (replay_capacity < batch_size)
        throw config_error("hyper: replay_capacity must be >= batch_size");
    if (hidden.empty()) throw config_error("hyper: need at least one hidden layer");
}

double AgentBundle::alpha() const { return std::exp(log_alpha); }

AgentBundle make_agent(std::size_t obs_dim, std::size_t action_dim, Algorithm algorithm,
                       SelectionStrategy strategy, const Hyperparameters& hyper, Rng& rng) {
    hyper.validate();
    AgentBundle b;
    b.hyper = hyper;
    b.strategy = strategy;
    b.obs_dim = obs_dim;
    b.action_dim = action_dim;
    b.log_alpha = hyper.initial_log_alpha;

    std::vector<std::size_t> critic_dims;
    critic_dims.push_back(obs_dim + action_dim);
    critic_dims.insert(critic_dims.end(), hyper.hidden.begin(), hyper.hidden.end());
    critic_dims.push_back(1);

    b.critic_1 = make_mlp(critic_dims, rng);
    b.critic_2 = make_mlp(critic_dims, rng);
    b.target_critic_1 = b.critic_1;
    b.target_critic_2 = b.critic_2;

    const std::size_t n_actors = algorithm == Algorithm::Tasac ? 2 : 1;
    for (std::size_t i = 0; i < n_actors; ++i)
        b.actors.push_back(make_actor(obs_dim, action_dim, hyper.hidden, rng));
    return b;
}

double q_value(const MlpParams& critic, std::span<const double> obs,
               std::span<const double> action) {
    Vec in;
    in.reserve(obs.size() + action.size());
    in.insert(in.end(), obs.begin(), obs.end());
    in.insert(in.end(), action.begin(), action.end());
    return mlp_forward(critic, in)[0];
}

double inner_aggregate(SelectionStrategy s, double q_c1, double q_c2) {
    switch (s) {
        case SelectionStrategy::MinMin:
        case SelectionStrategy::MaxMin: return std::min(q_c1, q_c2);
        case SelectionStrategy::MinMax:
        case SelectionStrategy::MaxMax: return std::max(q_c1, q_c2);
        case SelectionStrategy::MinAvg: return 0.5 * (q_c1 + q_c2);
    }
    return std::min(q_c1, q_c2);
}

bool outer_is_min(SelectionStrategy s) {
    return s == SelectionStrategy::MinMin || s == SelectionStrategy::MinMax ||
           s == SelectionStrategy::MinAvg;
}

std::size_t select_candidate(SelectionStrategy s, const std::array<std::array<double, 2>, 2>& q,
                             bool outer_argmax_flip) {
    const double a0 = inner_aggregate(s, q[0][0], q[0][1]);
    const double a1 = inner_aggregate(s, q[1][0], q[1][1]);
    bool minimize = outer_is_min(s);
    if (outer_argmax_flip) minimize = !minimize;
    // ties go to the first candidate
    if (minimize) return a0 <= a1 ? 0 : 1;
    return a0 >= a1 ? 0 : 1;
}

SelectedAction select_action(const AgentBundle& bundle, std::span<const double> obs, Rng& rng) {
    SelectedAction out;
    const std::size_t d = bundle.action_dim;

    const Vec xi_1 = rng.gaussian_vector(d);
    const SquashedSample s1 = squash_with_noise(bundle.actors[0].head(obs), xi_1);

    if (!bundle.twin()) {
        out.action = s1.action;
        out.diag.chosen_actor = 0;
        return out;
    }

    const Vec xi_2 = bundle.hyper.shared_noise ? xi_1 : rng.gaussian_vector(d);
    const SquashedSample s2 = squash_with_noise(bundle.actors[1].head(obs), xi_2);

    const std::array<const SquashedSample*, 2> cand{&s1, &s2};
    for (std::size_t i = 0; i < 2; ++i) {
        out.diag.q[i][0] = q_value(bundle.critic_1, obs, cand[i]->action);
        out.diag.q[i][1] = q_value(bundle.critic_2, obs, cand[i]->action);
        out.diag.aggregate[i] = inner_aggregate(bundle.strategy, out.diag.q[i][0], out.diag.q[i][1]);
    }
    out.diag.chosen_actor =
        select_candidate(bundle.strategy, out.diag.q, bundle.hyper.select_outer_argmax);
    out.action = cand[out.diag.chosen_actor]->action;
    return out;
}

Vec compute_targets(const AgentBundle& bundle, const Batch& batch, Rng& rng) {
    if (batch.empty()) throw usage_error("compute_targets: empty batch");
    const double gamma = bundle.hyper.gamma;
    const double alpha = bundle.alpha();
    const std::size_t n_actors = bundle.actors.size();
    const std::size_t d = bundle.action_dim;

    Vec tv(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Transition& tr = batch[b];
        double tv_min = 0.0;
        Vec xi_first;
        for (std::size_t i = 0; i < n_actors; ++i) {
            Vec xi;
            if (i == 0) {
                xi = rng.gaussian_vector(d);
                xi_first = xi;
            } else {
                xi = bundle.hyper.shared_noise ? xi_first : rng.gaussian_vector(d);
            }
            const SquashedSample sample =
                squash_with_noise(bundle.actors[i].head(tr.next_obs), xi);
            const double qt1 = q_value(bundle.target_critic_1, tr.next_obs, sample.action);
            const double qt2 = q_value(bundle.target_critic_2, tr.next_obs, sample.action);
            const double q_tv = std::min(qt1, qt2);
            if (!(q_tv <= qt1 && q_tv <= qt2))
                throw usage_error("compute_targets: clipped-double-Q bound violated");
            const double tv_i = q_tv - alpha * sample.log_prob;
            tv_min = i == 0 ? tv_i : std::min(tv_min, tv_i);
        }
        tv[b] = tr.reward + gamma * (tr.done ? 0.0 : 1.0) * tv_min;
    }
    return tv;
}

CriticGradient critic_loss_gradient(const AgentBundle& bundle, int which, const Batch& batch,
                                    const Vec& targets) {
    if (which != 0 && which != 1) throw usage_error("critic_loss_gradient: which must be 0 or 1");
    if (batch.empty()) throw usage_error("critic_loss_gradient: empty batch");
    if (batch.size() != targets.size())
        throw usage_error("critic_loss_gradient: batch/target size mismatch");

    const MlpParams& critic = which == 0 ? bundle.critic_1 : bundle.critic_2;
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    CriticGradient out;
    out.grads = make_grads_like(critic);
    MlpTrace trace;
    Vec in;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Transition& tr = batch[b];
        in.clear();
        in.insert(in.end(), tr.obs.begin(), tr.obs.end());
        in.insert(in.end(), tr.action.begin(), tr.action.end());
        const double q = mlp_forward(critic, in, trace)[0];
        const double diff = q - targets[b];
        out.loss += diff * diff;
        const double upstream[1] = {2.0 * diff};
        mlp_gradient(critic, trace, upstream, &out.grads);
    }
    out.loss *= inv_b;
    out.grads.scale(inv_b);
    return out;
}

ActorGradient actor_loss_gradient(const AgentBundle& bundle, std::size_t actor_index,
                                  const Batch& batch, const std::vector<Vec>& noise) {
    if (actor_index >= bundle.actors.size())
        throw usage_error("actor_loss_gradient: bad actor index");
    if (batch.empty()) throw usage_error("actor_loss_gradient: empty batch");
    if (noise.size() != batch.size())
        throw usage_error("actor_loss_gradient: noise/batch size mismatch");

    const Actor& actor = bundle.actors[actor_index];
    const double alpha = bundle.alpha();
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    const std::size_t d = bundle.action_dim;

    ActorGradient out;
    out.grads = make_grads_like(actor.net);
    Vec cin, grad_mean(d), grad_log_std(d);
    MlpTrace atrace;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Transition& tr = batch[b];
        const GaussianHead head = actor.head(tr.obs, atrace);
        const SquashedSample sample = squash_with_noise(head, noise[b]);

        cin.clear();
        cin.insert(cin.end(), tr.obs.begin(), tr.obs.end());
        cin.insert(cin.end(), sample.action.begin(), sample.action.end());

        // min over the two (frozen) critics; gradient flows through the argmin one
        MlpTrace c1trace, c2trace;
        const double q1 = mlp_forward(bundle.critic_1, cin, c1trace)[0];
        const double q2 = mlp_forward(bundle.critic_2, cin, c2trace)[0];
        const bool first = q1 <= q2;
        const double q_min = first ? q1 : q2;
        const MlpParams& chosen = first ? bundle.critic_1 : bundle.critic_2;
        const MlpTrace& chosen_trace = first ? c1trace : c2trace;

        out.loss += alpha * sample.log_prob - q_min;
        out.mean_log_pi += sample.log_prob;

        const double upstream[1] = {1.0};
        const Vec in_grad = mlp_gradient(chosen, chosen_trace, upstream, nullptr);

        for (std::size_t k = 0; k < d; ++k) {
            const double tanh_z = sample.action[k];
            const double sech2 = 1.0 - tanh_z * tanh_z;
            const double dq_da = in_grad[bundle.obs_dim + k];
            const double dl_dz = alpha * 2.0 * tanh_z - dq_da * sech2;
            const double sigma = std::exp(head.log_std[k]);
            grad_mean[k] = dl_dz;
            grad_log_std[k] = dl_dz * sigma * sample.xi[k] - alpha;
        }
        actor.backprop_head(atrace, grad_mean, grad_log_std, &out.grads);
    }
    out.loss *= inv_b;
    out.mean_log_pi *= inv_b;
    out.grads.scale(inv_b);
    return out;
}

CriticUpdateResult update_critics(AgentBundle& bundle, const Batch& batch, const Vec& targets) {
    CriticUpdateResult res;
    double* losses[2] = {&res.loss_1, &res.loss_2};
    bool* applied[2] = {&res.applied_1, &res.applied_2};
    MlpParams* critics[2] = {&bundle.critic_1, &bundle.critic_2};

    for (int j = 0; j < 2; ++j) {
        CriticGradient g = critic_loss_gradient(bundle, j, batch, targets);
        *losses[j] = g.loss;
        if (std::isfinite(g.loss) && g.grads.finite()) {
            clip_grad_norm(g.grads, bundle.hyper.grad_clip_norm);
            *applied[j] = adam_step(*critics[j], g.grads, bundle.hyper.lr_critic);
        }
    }
    return res;
}

ActorUpdateResult update_actors(AgentBundle& bundle, const Batch& batch, Rng& rng) {
    if (batch.empty()) throw usage_error("update_actors: empty batch");
    const std::size_t d = bundle.action_dim;
    const std::size_t n_actors = bundle.actors.size();

    // Pre-draw the noise matrix per actor; shared mode reuses actor 1's.
    std::vector<std::vector<Vec>> noise(n_actors);
    for (std::size_t i = 0; i < n_actors; ++i) {
        if (i > 0 && bundle.hyper.shared_noise) {
            noise[i] = noise[0];
            continue;
        }
        noise[i].reserve(batch.size());
        for (std::size_t b = 0; b < batch.size(); ++b) noise[i].push_back(rng.gaussian_vector(d));
    }

    ActorUpdateResult res;
    for (std::size_t i = 0; i < n_actors; ++i) {
        ActorGradient g = actor_loss_gradient(bundle, i, batch, noise[i]);
        res.loss[i] = g.loss;
        res.mean_log_pi[i] = g.mean_log_pi;
        if (std::isfinite(g.loss) && g.grads.finite()) {
            clip_grad_norm(g.grads, bundle.hyper.grad_clip_norm);
            res.applied[i] = adam_step(bundle.actors[i].net, g.grads, bundle.hyper.lr_actor);
        }
    }
    return res;
}

void update_temperature(AgentBundle& bundle, const ActorUpdateResult& fresh) {
    const std::size_t n_actors = bundle.actors.size();
    // d/d(log_alpha) of mean(-log_alpha * (logpi + target_entropy)), averaged
    // over actors so the twin/degenerate cases agree bitwise.
    double grad = 0.0;
    for (std::size_t i = 0; i < n_actors; ++i)
        grad += -(fresh.mean_log_pi[i] + bundle.hyper.target_entropy);
    grad /= static_cast<double>(n_actors);
    bundle.alpha_opt.step(bundle.log_alpha, grad, bundle.hyper.lr_entropy);
}

void polyak_update(AgentBundle& bundle) {
    const double tau = bundle.hyper.tau;
    auto blend = [tau](MlpParams& target, const MlpParams& live) {
        for (std::size_t l = 0; l < live.layer_count(); ++l) {
            for (std::size_t i = 0; i < live.weights[l].size(); ++i)
                target.weights[l].data[i] =
                    tau * live.weights[l].data[i] + (1.0 - tau) * target.weights[l].data[i];
            for (std::size_t i = 0; i < live.biases[l].size(); ++i)
                target.biases[l][i] = tau * live.biases[l][i] + (1.0 - tau) * target.biases[l][i];
        }
    };
    blend(bundle.target_critic_1, bundle.critic_1);
    blend(bundle.target_critic_2, bundle.critic_2);
}

TrainResult train(AgentBundle& bundle, const EnvConfig& env_config, std::size_t episodes,
                  Rng& rng) {
    bundle.hyper.validate();
    env_config.validate();
    if (bundle.obs_dim != Observation::dim || bundle.action_dim != 1)
        throw config_error("train: agent dims do not match the reactor environment");

    Rng env_rng = rng.fork(0xE1);
    Rng agent_rng = rng.fork(0xA2);

    ReactorEnv env(env_config);
    ReplayBuffer buffer(bundle.hyper.replay_capacity);
    const std::size_t steps = env_config.steps_per_episode();
    const double dt = env_config.control_interval;

    TrainResult result;
    std::vector<TrajectoryRow> trajectory;
    trajectory.reserve(steps);

    for (std::size_t ep = 0; ep < episodes; ++ep) {
        Observation obs = env.reset(env_rng);
        Vec obs_v = obs.to_vector();
        trajectory.clear();

        EpisodeLog log;
        log.episode = ep;
        double c1 = 0.0, c2 = 0.0, a1 = 0.0, a2 = 0.0;
        std::size_t updates = 0;

        for (std::size_t step = 0; step < steps; ++step) {
            const SelectedAction sel = select_action(bundle, obs_v, agent_rng);
            StepResult sr;
            try {
                sr = env.step(sel.action[0], env_rng);
            } catch (const integration_error&) {
                log.aborted = true;
                break;
            }

            buffer.push(Transition{obs_v, sel.action, sr.reward, sr.observation.to_vector(),
                                   sr.done});
            log.episodic_return += sr.reward;
            log.itae += -sr.reward * dt;
            log.negative_clips += sr.negative_clips;

            trajectory.push_back(TrajectoryRow{sr.state.clock, sr.state.t_reactor,
                                               sr.state.t_jacket, sr.t_jacket_in,
                                               sr.observation.error, sr.reward, sr.state.conc_tg,
                                               sr.state.conc_dg, sr.state.conc_mg, sr.state.conc_e,
                                               sr.state.conc_a, sr.state.conc_gl});

            if (auto batch = buffer.sample(bundle.hyper.batch_size, agent_rng)) {
                const Vec tv = compute_targets(bundle, *batch, agent_rng);
                const CriticUpdateResult cres = update_critics(bundle, *batch, tv);
                const ActorUpdateResult ares = update_actors(bundle, *batch, agent_rng);
                update_temperature(bundle, ares);
                polyak_update(bundle);
                c1 += cres.loss_1;
                c2 += cres.loss_2;
                a1 += ares.loss[0];
                a2 += bundle.twin() ? ares.loss[1] : ares.loss[0];
                ++updates;
            }
            obs_v = sr.observation.to_vector();
        }

        if (updates > 0) {
            log.critic_1_loss = c1 / static_cast<double>(updates);
            log.critic_2_loss = c2 / static_cast<double>(updates);
            log.actor_1_loss = a1 / static_cast<double>(updates);
            log.actor_2_loss = a2 / static_cast<double>(updates);
        }
        log.alpha = bundle.alpha();
        result.episodes.push_back(log);
        if (!log.aborted) result.last_trajectory = trajectory;
    }
    return result;
}

TrainResult train_sac_baseline(AgentBundle& bundle, const EnvConfig& env_config,
                               std::size_t episodes, Rng& rng) {
    if (bundle.twin())
        throw usage_error("train_sac_baseline: expected a single-actor bundle");
    return train(bundle, env_config, episodes, rng);
}

EvalResult evaluate_deterministic(const AgentBundle& bundle, const EnvConfig& env_config,
                                  Rng& rng) {
    env_config.validate();
    if (bundle.obs_dim != Observation::dim || bundle.action_dim != 1)
        throw config_error("evaluate_deterministic: agent dims do not match the environment");

    Rng env_rng = rng.fork(0xE1);
    ReactorEnv env(env_config);
    const double dt = env_config.control_interval;

    EvalResult out;
    Observation obs = env.reset(env_rng);
    while (!env.done()) {
        const Vec obs_v = obs.to_vector();
        Vec action = deterministic_action(bundle.actors[0].head(obs_v));
        if (bundle.twin()) {
            const Vec a2 = deterministic_action(bundle.actors[1].head(obs_v));
            std::array<std::array<double, 2>, 2> q;
            q[0][0] = q_value(bundle.critic_1, obs_v, action);
            q[0][1] = q_value(bundle.critic_2, obs_v, action);
            q[1][0] = q_value(bundle.critic_1, obs_v, a2);
            q[1][1] = q_value(bundle.critic_2, obs_v, a2);
            if (select_candidate(bundle.strategy, q, bundle.hyper.select_outer_argmax) == 1)
                action = a2;
        }
        const StepResult sr = env.step(action[0], env_rng);
        out.episodic_return += sr.reward;
        out.itae += -sr.reward * dt;
        out.trajectory.push_back(TrajectoryRow{sr.state.clock, sr.state.t_reactor,
                                               sr.state.t_jacket, sr.t_jacket_in,
                                               sr.observation.error, sr.reward, sr.state.conc_tg,
                                               sr.state.conc_dg, sr.state.conc_mg, sr.state.conc_e,
                                               sr.state.conc_a, sr.state.conc_gl});
        obs = sr.observation;
    }
    return out;
}

void write_metrics_csv(std::ostream& os, const std::vector<EpisodeLog>& logs) {
    os << "episode,return,itae,critic1_loss,critic2_loss,actor1_loss,actor2_loss,alpha,aborted\n";
    for (const auto& l : logs) {
        os << l.episode << ',' << csv_double(l.episodic_return) << ',' << csv_double(l.itae) << ','
           << csv_double(l.critic_1_loss) << ',' << csv_double(l.critic_2_loss) << ','
           << csv_double(l.actor_1_loss) << ',' << csv_double(l.actor_2_loss) << ','
           << csv_double(l.alpha) << ',' << (l.aborted ? 1 : 0) << '\n';
    }
}

namespace {

constexpr std::uint32_t kCkptMagic = 0x54434b50;  // "TCKP"
constexpr std::uint32_t kCkptVersion = 1;

template <typename T>
void wr(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T rd(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw config_error("checkpoint: truncated file");
    return v;
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
    wr<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(std::istream& is) {
    const auto n = rd<std::uint64_t>(is);
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw config_error("checkpoint: truncated array");
    return v;
}

void write_mlp(std::ostream& os, const MlpParams& p) {
    wr<std::uint64_t>(os, p.layer_count());
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
        wr<std::uint64_t>(os, p.weights[l].rows);
        wr<std::uint64_t>(os, p.weights[l].cols);
        write_doubles(os, p.weights[l].data);
        write_doubles(os, p.biases[l]);
        write_doubles(os, p.adam_m_w[l].data);
        write_doubles(os, p.adam_v_w[l].data);
        write_doubles(os, p.adam_m_b[l]);
        write_doubles(os, p.adam_v_b[l]);
    }
    wr<std::uint64_t>(os, p.adam_step_count);
}

MlpParams read_mlp(std::istream& is) {
    MlpParams p;
    const auto layers = rd<std::uint64_t>(is);
    for (std::uint64_t l = 0; l < layers; ++l) {
        const auto rows = rd<std::uint64_t>(is);
        const auto cols = rd<std::uint64_t>(is);
        Matrix w(rows, cols);
        w.data = read_doubles(is);
        Matrix mw(rows, cols), vw(rows, cols);
        p.weights.push_back(std::move(w));
        p.biases.push_back(read_doubles(is));
        mw.data = read_doubles(is);
        vw.data = read_doubles(is);
        p.adam_m_w.push_back(std::move(mw));
        p.adam_v_w.push_back(std::move(vw));
        p.adam_m_b.push_back(read_doubles(is));
        p.adam_v_b.push_back(read_doubles(is));
    }
    p.adam_step_count = rd<std::uint64_t>(is);
    p.validate();
    return p;
}

}  // namespace

void save_checkpoint(std::ostream& os, const AgentBundle& bundle, const Rng& rng) {
    wr(os, kCkptMagic);
    wr(os, kCkptVersion);
    wr<std::uint64_t>(os, bundle.obs_dim);
    wr<std::uint64_t>(os, bundle.action_dim);
    wr<std::uint32_t>(os, static_cast<std::uint32_t>(bundle.strategy));
    wr<std::uint64_t>(os, bundle.actors.size());
    for (const auto& a : bundle.actors) {
        write_mlp(os, a.net);
        wr(os, a.log_std_min);
        wr(os, a.log_std_max);
    }
    write_mlp(os, bundle.critic_1);
    write_mlp(os, bundle.critic_2);
    write_mlp(os, bundle.target_critic_1);
    write_mlp(os, bundle.target_critic_2);
    wr(os, bundle.log_alpha);
    wr(os, bundle.alpha_opt.m);
    wr(os, bundle.alpha_opt.v);
    wr<std::uint64_t>(os, bundle.alpha_opt.step_count);

    const Hyperparameters& h = bundle.hyper;
    wr(os, h.gamma);
    wr<std::uint64_t>(os, h.batch_size);
    wr(os, h.lr_actor);
    wr(os, h.lr_critic);
    wr(os, h.lr_entropy);
    wr(os, h.tau);
    wr<std::uint64_t>(os, h.episodes);
    wr(os, h.target_entropy);
    wr<std::uint64_t>(os, h.hidden.size());
    for (auto w : h.hidden) wr<std::uint64_t>(os, w);
    wr<std::uint64_t>(os, h.replay_capacity);
    wr(os, h.grad_clip_norm);
    wr(os, h.initial_log_alpha);
    wr<std::uint8_t>(os, h.shared_noise ? 1 : 0);
    wr<std::uint8_t>(os, h.select_outer_argmax ? 1 : 0);

    wr<std::uint64_t>(os, rng.state());
}

Checkpoint load_checkpoint(std::istream& is) {
    if (rd<std::uint32_t>(is) != kCkptMagic) throw config_error("checkpoint: bad magic");
    if (rd<std::uint32_t>(is) != kCkptVersion)
        throw config_error("checkpoint: unsupported version");
    Checkpoint c;
    AgentBundle& b = c.bundle;
    b.obs_dim = rd<std::uint64_t>(is);
    b.action_dim = rd<std::uint64_t>(is);
    b.strategy = static_cast<SelectionStrategy>(rd<std::uint32_t>(is));
    const auto n_actors = rd<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < n_actors; ++i) {
        Actor a;
        a.net = read_mlp(is);
        a.log_std_min = rd<double>(is);
        a.log_std_max = rd<double>(is);
        a.action_dim = b.action_dim;
        b.actors.push_back(std::move(a));
    }
    b.critic_1 = read_mlp(is);
    b.critic_2 = read_mlp(is);
    b.target_critic_1 = read_mlp(is);
    b.target_critic_2 = read_mlp(is);
    b.log_alpha = rd<double>(is);
    b.alpha_opt.m = rd<double>(is);
    b.alpha_opt.v = rd<double>(is);
    b.alpha_opt.step_count = rd<std::uint64_t>(is);

    Hyperparameters& h = b.hyper;
    h.gamma = rd<double>(is);
    h.batch_size = rd<std::uint64_t>(is);
    h.lr_actor = rd<double>(is);
    h.lr_critic = rd<double>(is);
    h.lr_entropy = rd<double>(is);
    h.tau = rd<double>(is);
    h.episodes = rd<std::uint64_t>(is);
    h.target_entropy = rd<double>(is);
    const auto n_hidden = rd<std::uint64_t>(is);
    h.hidden.clear();
    for (std::uint64_t i = 0; i < n_hidden; ++i) h.hidden.push_back(rd<std::uint64_t>(is));
    h.replay_capacity = rd<std::uint64_t>(is);
    h.grad_clip_norm = rd<double>(is);
    h.initial_log_alpha = rd<double>(is);
    h.shared_noise = rd<std::uint8_t>(is) != 0;
    h.select_outer_argmax = rd<std::uint8_t>(is) != 0;

    c.rng.set_state(rd<std::uint64_t>(is));
    return c;
}

}  // namespace tasac
