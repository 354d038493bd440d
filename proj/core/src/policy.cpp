#include "tasac/policy.hpp"

#include <cmath>

#include "tasac/errors.hpp"

namespace tasac {

namespace {
constexpr double kLogTwo = 0.6931471805599453;
constexpr double kHalfLogTwoPi = 0.9189385332046727;
}  // namespace

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double log_one_minus_tanh_sq(double x) {
    return 2.0 * (kLogTwo - x - softplus(-2.0 * x));
}

double squashed_log_prob(const GaussianHead& head, std::span<const double> z) {
    if (z.size() != head.dim()) throw usage_error("squashed_log_prob: dim mismatch");
    double lp = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double sigma = std::exp(head.log_std[k]);
        const double u = (z[k] - head.mean[k]) / sigma;
        lp += -0.5 * u * u - head.log_std[k] - kHalfLogTwoPi;
        lp -= log_one_minus_tanh_sq(z[k]);
    }
    return lp;
}

SquashedSample squash_with_noise(const GaussianHead& head, std::span<const double> xi) {
    if (xi.size() != head.dim()) throw usage_error("squash_with_noise: noise dim mismatch");
    SquashedSample s;
    const std::size_t d = head.dim();
    s.xi.assign(xi.begin(), xi.end());
    s.z.resize(d);
    s.action.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double sigma = std::exp(head.log_std[k]);
        s.z[k] = head.mean[k] + sigma * xi[k];
        s.action[k] = std::tanh(s.z[k]);
    }
    s.log_prob = squashed_log_prob(head, s.z);
    return s;
}

SquashedSample sample_squashed_gaussian(const GaussianHead& head, Rng& rng) {
    return squash_with_noise(head, rng.gaussian_vector(head.dim()));
}

Vec deterministic_action(const GaussianHead& head) {
    Vec a(head.dim());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::tanh(head.mean[k]);
    return a;
}

GaussianHead Actor::head(std::span<const double> obs) const {
    MlpTrace trace;
    return head(obs, trace);
}

GaussianHead Actor::head(std::span<const double> obs, MlpTrace& trace) const {
    const Vec raw = mlp_forward(net, obs, trace);
    GaussianHead h;
    h.mean.assign(raw.begin(), raw.begin() + action_dim);
    h.log_std.resize(action_dim);
    for (std::size_t k = 0; k < action_dim; ++k) {
        double ls = raw[action_dim + k];
        if (ls < log_std_min) ls = log_std_min;
        if (ls > log_std_max) ls = log_std_max;
        h.log_std[k] = ls;
    }
    return h;
}

Vec Actor::backprop_head(const MlpTrace& trace, std::span<const double> grad_mean,
                         std::span<const double> grad_log_std, MlpGrads* grads) const {
    if (grad_mean.size() != action_dim || grad_log_std.size() != action_dim)
        throw usage_error("backprop_head: gradient dim mismatch");
    if (trace.empty()) throw usage_error("backprop_head: no forward trace");
    const Vec& raw = trace.activations.back();
    Vec upstream(2 * action_dim, 0.0);
    for (std::size_t k = 0; k < action_dim; ++k) {
        upstream[k] = grad_mean[k];
        const double ls_raw = raw[action_dim + k];
        upstream[action_dim + k] =
            (ls_raw < log_std_min || ls_raw > log_std_max) ? 0.0 : grad_log_std[k];
    }
    return mlp_gradient(net, trace, upstream, grads);
}

Actor make_actor(std::size_t obs_dim, std::size_t action_dim,
                 const std::vector<std::size_t>& hidden, Rng& rng) {
    std::vector<std::size_t> dims;
    dims.push_back(obs_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(2 * action_dim);
    Actor a;
    a.net = make_mlp(dims, rng);
    a.action_dim = action_dim;
    return a;
}

}  // namespace tasac
