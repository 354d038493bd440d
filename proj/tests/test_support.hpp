#pragma once

#include <cmath>
#include <functional>

#include "tasac/mlp.hpp"

namespace tasac::testing {

/// Central finite differences of a scalar loss over every network parameter.
/// The loss callable must read the network through the same reference.
inline MlpGrads fd_gradient(MlpParams& params, const std::function<double()>& loss,
                            double h = 1e-5) {
    MlpGrads g = make_grads_like(params);
    auto diff = [&](double& theta) {
        const double saved = theta;
        theta = saved + h;
        const double up = loss();
        theta = saved - h;
        const double down = loss();
        theta = saved;
        return (up - down) / (2.0 * h);
    };
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        for (std::size_t i = 0; i < params.weights[l].size(); ++i)
            g.w[l].data[i] = diff(params.weights[l].data[i]);
        for (std::size_t i = 0; i < params.biases[l].size(); ++i)
            g.b[l][i] = diff(params.biases[l][i]);
    }
    return g;
}

/// ||a - b|| / max(||b||, floor)
inline double grads_relative_error(const MlpGrads& a, const MlpGrads& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < a.w.size(); ++l) {
        for (std::size_t i = 0; i < a.w[l].size(); ++i) {
            const double d = a.w[l].data[i] - b.w[l].data[i];
            num += d * d;
            den += b.w[l].data[i] * b.w[l].data[i];
        }
        for (std::size_t i = 0; i < a.b[l].size(); ++i) {
            const double d = a.b[l][i] - b.b[l][i];
            num += d * d;
            den += b.b[l][i] * b.b[l][i];
        }
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

inline bool params_equal(const MlpParams& a, const MlpParams& b) {
    if (a.layer_count() != b.layer_count()) return false;
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
        if (a.weights[l].data != b.weights[l].data) return false;
        if (a.biases[l] != b.biases[l]) return false;
    }
    return true;
}

}  // namespace tasac::testing
