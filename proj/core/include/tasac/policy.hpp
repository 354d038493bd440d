#pragma once

#include <span>

#include "tasac/matrix.hpp"
#include "tasac/mlp.hpp"
#include "tasac/rng.hpp"

namespace tasac {

/// Diagonal Gaussian over the pre-squash variable. log_std is stored already
/// clamped to the configured bounds.
struct GaussianHead {
    Vec mean;
    Vec log_std;

    std::size_t dim() const { return mean.size(); }
};

struct SquashedSample {
    Vec action;      // tanh(z), componentwise in (-1, 1)
    Vec z;           // mean + sigma * xi
    Vec xi;          // unit normals consumed
    double log_prob; // density of the squashed variable at `action`
};

/// Numerically stable log(1 - tanh(x)^2) = 2*(log 2 - x - softplus(-2x)).
double log_one_minus_tanh_sq(double x);

double softplus(double x);

/// Log-density of a = tanh(z) under the head's Gaussian, evaluated at z.
double squashed_log_prob(const GaussianHead& head, std::span<const double> z);

/// Deterministic squash core with injected noise; the sampling entry point
/// and the tests share it.
SquashedSample squash_with_noise(const GaussianHead& head, std::span<const double> xi);

SquashedSample sample_squashed_gaussian(const GaussianHead& head, Rng& rng);

/// Greedy evaluation action: tanh(mean).
Vec deterministic_action(const GaussianHead& head);

/// Stochastic policy network: a shared trunk whose final linear layer emits
/// [mean, log_std_raw]; log_std_raw is clamped before use.
struct Actor {
    MlpParams net;
    std::size_t action_dim = 0;
    double log_std_min = -20.0;
    double log_std_max = 2.0;

    GaussianHead head(std::span<const double> obs) const;
    GaussianHead head(std::span<const double> obs, MlpTrace& trace) const;

    /// Backward from head-level gradients through the network. The clamp
    /// contributes zero gradient where the raw log_std fell outside bounds.
    /// Returns d(loss)/d(obs).
    Vec backprop_head(const MlpTrace& trace, std::span<const double> grad_mean,
                      std::span<const double> grad_log_std, MlpGrads* grads) const;
};

Actor make_actor(std::size_t obs_dim, std::size_t action_dim,
                 const std::vector<std::size_t>& hidden, Rng& rng);

}  // namespace tasac
