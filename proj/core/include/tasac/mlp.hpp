#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tasac/matrix.hpp"
#include "tasac/rng.hpp"

namespace tasac {

/// Feed-forward network parameters with their Adam optimizer moments.
///
/// Layer l maps dims[l] -> dims[l+1] through weights[l] (out x in) and
/// biases[l]; ReLU is applied between hidden layers, the last layer is linear.
struct MlpParams {
    std::vector<Matrix> weights;
    std::vector<Vec> biases;

    // Adam first/second moments, shape-congruent with the parameters.
    std::vector<Matrix> adam_m_w;
    std::vector<Matrix> adam_v_w;
    std::vector<Vec> adam_m_b;
    std::vector<Vec> adam_v_b;
    std::uint64_t adam_step_count = 0;

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_dim() const { return weights.empty() ? 0 : weights.front().cols; }
    std::size_t output_dim() const { return weights.empty() ? 0 : weights.back().rows; }

    /// Checks dimension chaining and moment congruence; throws config_error on violation.
    void validate() const;
};

/// Parameter-shaped gradient accumulator.
struct MlpGrads {
    std::vector<Matrix> w;
    std::vector<Vec> b;

    void zero();
    void scale(double s);
    double squared_norm() const;
    bool finite() const;
};

/// Cached forward-pass state needed by the backward pass.
///
/// activations[0] is the network input; activations[l] for l >= 1 holds the
/// post-ReLU output of layer l-1; preacts[l] the pre-activation of layer l.
struct MlpTrace {
    std::vector<Vec> activations;
    std::vector<Vec> preacts;

    bool empty() const { return activations.empty(); }
};

/// dims = {in, hidden..., out}. Weights uniform in +-1/sqrt(fan_in), biases zero.
MlpParams make_mlp(const std::vector<std::size_t>& dims, Rng& rng);

/// Same shape, all parameters zero.
MlpParams make_zero_mlp(const std::vector<std::size_t>& dims);

MlpGrads make_grads_like(const MlpParams& params);

Vec mlp_forward(const MlpParams& params, std::span<const double> input);

/// Forward pass that records the trace consumed by mlp_gradient.
Vec mlp_forward(const MlpParams& params, std::span<const double> input, MlpTrace& trace);

/// Reverse accumulation of d(loss)/d(parameters) given d(loss)/d(output).
///
/// `trace` must come from mlp_forward on the same params/input (usage_error
/// otherwise). Parameter gradients are accumulated into `grads` when non-null;
/// the return value is d(loss)/d(input).
Vec mlp_gradient(const MlpParams& params, const MlpTrace& trace,
                 std::span<const double> upstream_grad, MlpGrads* grads);

/// One Adam update with bias correction. Returns false and leaves params,
/// moments and step count untouched when the gradient is non-finite.
struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

bool adam_step(MlpParams& params, const MlpGrads& grads, double learning_rate,
               const AdamConfig& cfg = {});

/// Scalar-parameter Adam state (used for the entropy temperature).
struct AdamScalar {
    double m = 0.0;
    double v = 0.0;
    std::uint64_t step_count = 0;

    /// Returns false on non-finite gradient; value is then left unchanged.
    bool step(double& value, double grad, double learning_rate, const AdamConfig& cfg = {});
};

/// Rescales grads so their global L2 norm is at most max_norm (disabled when
/// max_norm <= 0). Returns the pre-clip norm.
double clip_grad_norm(MlpGrads& grads, double max_norm);

}  // namespace tasac
