#include "tasac/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tasac/errors.hpp"

namespace tasac {

void MlpParams::validate() const {
    if (weights.empty()) throw config_error("mlp: no layers");
    if (weights.size() != biases.size()) throw config_error("mlp: weight/bias layer count mismatch");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows != biases[l].size())
            throw config_error("mlp: bias dim mismatch at layer " + std::to_string(l));
        if (l + 1 < weights.size() && weights[l].rows != weights[l + 1].cols)
            throw config_error("mlp: layer dims do not chain at layer " + std::to_string(l));
    }
    if (adam_m_w.size() != weights.size() || adam_v_w.size() != weights.size() ||
        adam_m_b.size() != biases.size() || adam_v_b.size() != biases.size())
        throw config_error("mlp: adam moment layer count mismatch");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (!adam_m_w[l].same_shape(weights[l]) || !adam_v_w[l].same_shape(weights[l]) ||
            adam_m_b[l].size() != biases[l].size() || adam_v_b[l].size() != biases[l].size())
            throw config_error("mlp: adam moment shape mismatch at layer " + std::to_string(l));
    }
}

void MlpGrads::zero() {
    for (auto& m : w) m.fill(0.0);
    for (auto& v : b) v.assign(v.size(), 0.0);
}

void MlpGrads::scale(double s) {
    for (auto& m : w)
        for (auto& x : m.data) x *= s;
    for (auto& v : b)
        for (auto& x : v) x *= s;
}

double MlpGrads::squared_norm() const {
    double acc = 0.0;
    for (const auto& m : w)
        for (double x : m.data) acc += x * x;
    for (const auto& v : b)
        for (double x : v) acc += x * x;
    return acc;
}

bool MlpGrads::finite() const {
    for (const auto& m : w)
        if (!all_finite(m)) return false;
    for (const auto& v : b)
        if (!all_finite(v)) return false;
    return true;
}

MlpParams make_mlp(const std::vector<std::size_t>& dims, Rng& rng) {
    if (dims.size() < 2) throw config_error("mlp: need at least input and output dims");
    MlpParams p;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Matrix w(dims[l + 1], dims[l]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
        for (auto& x : w.data) x = rng.uniform(-bound, bound);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(dims[l + 1], 0.0);
        p.adam_m_w.emplace_back(dims[l + 1], dims[l]);
        p.adam_v_w.emplace_back(dims[l + 1], dims[l]);
        p.adam_m_b.emplace_back(dims[l + 1], 0.0);
        p.adam_v_b.emplace_back(dims[l + 1], 0.0);
    }
    return p;
}

MlpParams make_zero_mlp(const std::vector<std::size_t>& dims) {
    Rng rng(0);
    MlpParams p = make_mlp(dims, rng);
    for (auto& w : p.weights) w.fill(0.0);
    return p;
}

MlpGrads make_grads_like(const MlpParams& params) {
    MlpGrads g;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        g.w.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.b.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

namespace {

// y = W x + b
void affine(const Matrix& w, const Vec& b, std::span<const double> x, Vec& y) {
    y.resize(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* wr = w.row(r);
        double acc = b[r];
        for (std::size_t c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

}  // namespace

Vec mlp_forward(const MlpParams& params, std::span<const double> input) {
    if (input.size() != params.input_dim())
        throw config_error("mlp_forward: input dim " + std::to_string(input.size()) +
                           " does not match first layer " + std::to_string(params.input_dim()));
    Vec cur(input.begin(), input.end());
    Vec next;
    const std::size_t L = params.layer_count();
    for (std::size_t l = 0; l < L; ++l) {
        affine(params.weights[l], params.biases[l], cur, next);
        if (l + 1 < L)
            for (auto& x : next) x = x > 0.0 ? x : 0.0;
        std::swap(cur, next);
    }
    return cur;
}

Vec mlp_forward(const MlpParams& params, std::span<const double> input, MlpTrace& trace) {
    if (input.size() != params.input_dim())
        throw config_error("mlp_forward: input dim " + std::to_string(input.size()) +
                           " does not match first layer " + std::to_string(params.input_dim()));
    const std::size_t L = params.layer_count();
    trace.activations.assign(L + 1, Vec{});
    trace.preacts.assign(L, Vec{});
    trace.activations[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < L; ++l) {
        affine(params.weights[l], params.biases[l], trace.activations[l], trace.preacts[l]);
        if (l + 1 < L) {
            trace.activations[l + 1] = trace.preacts[l];
            for (auto& x : trace.activations[l + 1]) x = x > 0.0 ? x : 0.0;
        } else {
            trace.activations[l + 1] = trace.preacts[l];
        }
    }
    return trace.activations[L];
}

Vec mlp_gradient(const MlpParams& params, const MlpTrace& trace,
                 std::span<const double> upstream_grad, MlpGrads* grads) {
    const std::size_t L = params.layer_count();
    if (trace.empty() || trace.activations.size() != L + 1 || trace.preacts.size() != L)
        throw usage_error("mlp_gradient: trace does not match a forward pass of this network");
    if (trace.activations[0].size() != params.input_dim())
        throw usage_error("mlp_gradient: trace input dim does not match network");
    if (upstream_grad.size() != params.output_dim())
        throw usage_error("mlp_gradient: upstream grad dim does not match network output");
    if (grads && (grads->w.size() != L || grads->b.size() != L))
        throw usage_error("mlp_gradient: grads not shape-congruent with params");

    Vec delta(upstream_grad.begin(), upstream_grad.end());
    Vec prev;
    for (std::size_t li = L; li-- > 0;) {
        const Matrix& w = params.weights[li];
        const Vec& in = trace.activations[li];
        if (grads) {
            Matrix& gw = grads->w[li];
            Vec& gb = grads->b[li];
            for (std::size_t r = 0; r < w.rows; ++r) {
                const double d = delta[r];
                if (d == 0.0) continue;
                double* gr = gw.row(r);
                for (std::size_t c = 0; c < w.cols; ++c) gr[c] += d * in[c];
                gb[r] += d;
            }
        }
        // input gradient of this layer: W^T delta
        prev.assign(w.cols, 0.0);
        for (std::size_t r = 0; r < w.rows; ++r) {
            const double d = delta[r];
            if (d == 0.0) continue;
            const double* wr = w.row(r);
            for (std::size_t c = 0; c < w.cols; ++c) prev[c] += d * wr[c];
        }
        if (li > 0) {
            // mask through the ReLU of the previous layer
            const Vec& pre = trace.preacts[li - 1];
            for (std::size_t c = 0; c < prev.size(); ++c)
                if (pre[c] <= 0.0) prev[c] = 0.0;
        }
        std::swap(delta, prev);
    }
    return delta;
}

bool adam_step(MlpParams& params, const MlpGrads& grads, double learning_rate,
               const AdamConfig& cfg) {
    if (grads.w.size() != params.layer_count() || grads.b.size() != params.layer_count())
        throw usage_error("adam_step: grads not shape-congruent with params");
    if (!grads.finite()) return false;

    params.adam_step_count += 1;
    const double t = static_cast<double>(params.adam_step_count);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);

    auto update = [&](double& theta, double& m, double& v, double g) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        theta -= learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    };

    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        Matrix& w = params.weights[l];
        for (std::size_t i = 0; i < w.size(); ++i)
            update(w.data[i], params.adam_m_w[l].data[i], params.adam_v_w[l].data[i],
                   grads.w[l].data[i]);
        Vec& b = params.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i)
            update(b[i], params.adam_m_b[l][i], params.adam_v_b[l][i], grads.b[l][i]);
    }
    return true;
}

bool AdamScalar::step(double& value, double grad, double learning_rate, const AdamConfig& cfg) {
    if (!std::isfinite(grad)) return false;
    step_count += 1;
    const double t = static_cast<double>(step_count);
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
    const double mhat = m / (1.0 - std::pow(cfg.beta1, t));
    const double vhat = v / (1.0 - std::pow(cfg.beta2, t));
    value -= learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    return true;
}

double clip_grad_norm(MlpGrads& grads, double max_norm) {
    const double norm = std::sqrt(grads.squared_norm());
    if (max_norm > 0.0 && norm > max_norm && norm > 0.0) grads.scale(max_norm / norm);
    return norm;
}

}  // namespace tasac
