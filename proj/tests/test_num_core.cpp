#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tasac/errors.hpp"
#include "tasac/mlp.hpp"
#include "tasac/policy.hpp"
#include "tasac/rng.hpp"
#include "test_support.hpp"

using namespace tasac;
using namespace tasac::testing;

TEST_CASE("rng: identical seed gives bitwise-identical streams") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
        CHECK(a.gaussian() == b.gaussian());
        CHECK(a.uniform() == b.uniform());
    }
    Rng c(12346);
    CHECK(c.next_u64() != Rng(12345).next_u64());
}

TEST_CASE("rng: forked streams are independent of parent consumption") {
    Rng parent(7);
    Rng f1 = parent.fork(1);
    Rng f2 = parent.fork(2);
    CHECK(f1.next_u64() != f2.next_u64());
    // fork is a pure function of (state, tag)
    Rng again = Rng(7).fork(1);
    CHECK(again.next_u64() == Rng(7).fork(1).next_u64());
}

TEST_CASE("rng: uniform_index is unbiased enough for replay sampling") {
    Rng rng(99);
    std::array<int, 10> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts[rng.uniform_index(10)]++;
    for (int c : counts) CHECK(std::abs(c / double(n) - 0.1) < 0.01);
}

TEST_CASE("mlp_forward: zero network maps anything to zero") {
    MlpParams p = make_zero_mlp({3, 5, 2});
    const Vec out = mlp_forward(p, Vec{1.0, -2.0, 3.0});
    CHECK(out == Vec{0.0, 0.0});
}

TEST_CASE("mlp_forward: single linear identity layer") {
    MlpParams p = make_zero_mlp({2, 2});
    p.weights[0](0, 0) = 1.0;
    p.weights[0](1, 1) = 1.0;
    const Vec out = mlp_forward(p, Vec{0.25, -4.0});
    CHECK(out[0] == 0.25);
    CHECK(out[1] == -4.0);
}

TEST_CASE("mlp_forward: two-layer net matches hand-evaluated matrix chain") {
    // W1 = [[0.1, 0.2], [0.3, -0.1]], b1 = [0.05, -0.05], ReLU,
    // W2 = [[0.2, -0.3]], b2 = [0.1], x = [1, 2]
    MlpParams p = make_zero_mlp({2, 2, 1});
    p.weights[0](0, 0) = 0.1;
    p.weights[0](0, 1) = 0.2;
    p.weights[0](1, 0) = 0.3;
    p.weights[0](1, 1) = -0.1;
    p.biases[0] = {0.05, -0.05};
    p.weights[1](0, 0) = 0.2;
    p.weights[1](0, 1) = -0.3;
    p.biases[1] = {0.1};

    // independent arithmetic: h = relu(W1 x + b1), y = W2 h + b2
    const double h0 = std::max(0.0, 0.1 * 1.0 + 0.2 * 2.0 + 0.05);
    const double h1 = std::max(0.0, 0.3 * 1.0 + (-0.1) * 2.0 - 0.05);
    const double expected = 0.2 * h0 - 0.3 * h1 + 0.1;
    CHECK(expected == doctest::Approx(0.195).epsilon(1e-12));

    const Vec out = mlp_forward(p, Vec{1.0, 2.0});
    CHECK(out[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("mlp_forward: dimension mismatch is a configuration error") {
    MlpParams p = make_zero_mlp({3, 4, 1});
    CHECK_THROWS_AS(mlp_forward(p, Vec{1.0, 2.0}), config_error);
}

TEST_CASE("mlp_gradient: linear layer, loss = y[0] -> grad of W row 0 equals x") {
    MlpParams p = make_zero_mlp({3, 2});
    Rng rng(5);
    for (auto& x : p.weights[0].data) x = rng.uniform(-1, 1);
    const Vec x{0.7, -1.3, 2.2};
    MlpTrace trace;
    mlp_forward(p, x, trace);
    MlpGrads g = make_grads_like(p);
    mlp_gradient(p, trace, Vec{1.0, 0.0}, &g);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(g.w[0](0, c) == x[c]);
        CHECK(g.w[0](1, c) == 0.0);
    }
    CHECK(g.b[0][0] == 1.0);
    CHECK(g.b[0][1] == 0.0);
}

TEST_CASE("mlp_gradient: zero upstream gives all-zero parameter gradients") {
    Rng rng(11);
    MlpParams p = make_mlp({4, 8, 8, 2}, rng);
    MlpTrace trace;
    mlp_forward(p, Vec{0.1, 0.2, 0.3, 0.4}, trace);
    MlpGrads g = make_grads_like(p);
    mlp_gradient(p, trace, Vec{0.0, 0.0}, &g);
    CHECK(g.squared_norm() == 0.0);
}

TEST_CASE("mlp_gradient: without a matching forward pass it is a usage error") {
    Rng rng(3);
    MlpParams p = make_mlp({2, 4, 1}, rng);
    MlpTrace empty;
    CHECK_THROWS_AS(mlp_gradient(p, empty, Vec{1.0}, nullptr), usage_error);

    MlpParams other = make_mlp({3, 4, 1}, rng);
    MlpTrace trace;
    mlp_forward(other, Vec{1.0, 2.0, 3.0}, trace);
    CHECK_THROWS_AS(mlp_gradient(p, trace, Vec{1.0}, nullptr), usage_error);
}

TEST_CASE("mlp_gradient: matches central finite differences on the shapes in use") {
    Rng rng(2024);
    const std::vector<std::vector<std::size_t>> shapes = {
        {2, 8, 8, 2},   // actor-like
        {3, 8, 8, 1},   // critic-like
        {2, 64, 64, 2}, // desk-preset actor shape
        {5, 4, 1},
    };
    for (const auto& dims : shapes) {
        MlpParams p = make_mlp(dims, rng);
        Vec input(dims.front());
        for (auto& x : input) x = rng.uniform(-1.5, 1.5);
        Vec upstream(dims.back());
        for (auto& u : upstream) u = rng.uniform(-1, 1);

        MlpTrace trace;
        mlp_forward(p, input, trace);
        MlpGrads reverse = make_grads_like(p);
        mlp_gradient(p, trace, upstream, &reverse);

        auto scalar_loss = [&] {
            const Vec y = mlp_forward(p, input);
            double acc = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) acc += upstream[i] * y[i];
            return acc;
        };
        const MlpGrads fd = fd_gradient(p, scalar_loss, 1e-5);
        CHECK(grads_relative_error(reverse, fd) < 1e-4);
    }
}

TEST_CASE("mlp: relu network is positively homogeneous without biases") {
    Rng rng(8);
    MlpParams p = make_mlp({3, 16, 16, 2}, rng);
    for (auto& b : p.biases) b.assign(b.size(), 0.0);
    const Vec x{0.4, -0.8, 1.1};
    const Vec base = mlp_forward(p, x);
    for (double lambda : {0.5, 2.0, 3.7}) {
        Vec xs = x;
        for (auto& v : xs) v *= lambda;
        const Vec scaled = mlp_forward(p, xs);
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(scaled[i] == doctest::Approx(lambda * base[i]).epsilon(1e-12));
    }
}

TEST_CASE("adam_step: learning_rate=0 leaves parameters but updates moments") {
    Rng rng(17);
    MlpParams p = make_mlp({2, 4, 1}, rng);
    const MlpParams before = p;
    MlpGrads g = make_grads_like(p);
    for (auto& m : g.w)
        for (auto& x : m.data) x = 0.3;
    CHECK(adam_step(p, g, 0.0));
    CHECK(params_equal(p, before));
    CHECK(p.adam_step_count == 1);
    CHECK(p.adam_m_w[0](0, 0) != 0.0);
    CHECK(p.adam_v_w[0](0, 0) != 0.0);
}

TEST_CASE("adam_step: first step is -lr * g / (|g| + eps) after bias correction") {
    MlpParams p = make_zero_mlp({1, 1});
    MlpGrads g = make_grads_like(p);
    g.w[0](0, 0) = 0.37;
    const double lr = 1e-3;
    CHECK(adam_step(p, g, lr));
    const double expected = -lr * 0.37 / (std::abs(0.37) + 1e-8);
    CHECK(p.weights[0](0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("adam_step: constant gradient drives steps to lr * sign(g)") {
    MlpParams p = make_zero_mlp({1, 1});
    MlpGrads g = make_grads_like(p);
    g.w[0](0, 0) = -0.8;
    const double lr = 1e-3;
    double prev = 0.0;
    for (int t = 0; t < 2000; ++t) {
        CHECK(adam_step(p, g, lr));
        const double step = p.weights[0](0, 0) - prev;
        prev = p.weights[0](0, 0);
        // moving against a negative gradient, one unit step per update
        CHECK(step > 0.0);
        CHECK(std::abs(step / lr - 1.0) < 1e-6);
    }
}

TEST_CASE("adam_step: non-finite gradient is rejected and flagged") {
    Rng rng(23);
    MlpParams p = make_mlp({2, 3, 1}, rng);
    const MlpParams before = p;
    MlpGrads g = make_grads_like(p);
    g.w[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(adam_step(p, g, 1e-3));
    CHECK(params_equal(p, before));
    CHECK(p.adam_step_count == 0);
}

TEST_CASE("adam determinism: equal seeds give bitwise-identical trajectories") {
    auto run = [] {
        Rng rng(321);
        MlpParams p = make_mlp({3, 16, 16, 1}, rng);
        for (int t = 0; t < 100; ++t) {
            Vec input{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            MlpTrace trace;
            const Vec y = mlp_forward(p, input, trace);
            MlpGrads g = make_grads_like(p);
            mlp_gradient(p, trace, Vec{2.0 * (y[0] - 0.5)}, &g);
            adam_step(p, g, 3e-4);
        }
        return p;
    };
    const MlpParams a = run();
    const MlpParams b = run();
    CHECK(params_equal(a, b));
    CHECK(a.adam_m_w[1].data == b.adam_m_w[1].data);
}

TEST_CASE("squashed gaussian: sigma at the clamp floor collapses to tanh(mean)") {
    GaussianHead head{{0.0}, {-20.0}};
    Rng rng(1);
    const SquashedSample s = sample_squashed_gaussian(head, rng);
    CHECK(std::abs(s.action[0]) < 1e-8);

    GaussianHead off{{0.7}, {-20.0}};
    const SquashedSample s2 = sample_squashed_gaussian(off, rng);
    CHECK(s2.action[0] == doctest::Approx(std::tanh(0.7)).epsilon(1e-7));
}

TEST_CASE("squashed gaussian: fixed xi=1, mean=0, sigma=0.5 gives tanh(0.5)") {
    GaussianHead head{{0.0}, {std::log(0.5)}};
    const SquashedSample s = squash_with_noise(head, Vec{1.0});
    CHECK(s.action[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-12));
    CHECK(s.action[0] == doctest::Approx(0.46211715726).epsilon(1e-9));
}

TEST_CASE("squashed gaussian: density integrates to one on a fine action grid") {
    const GaussianHead head{{0.3}, {std::log(0.8)}};
    const std::size_t cells = 400000;
    const double width = 2.0 / static_cast<double>(cells);
    double integral = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = -1.0 + (static_cast<double>(i) + 0.5) * width;
        const double z = std::atanh(a);
        integral += std::exp(squashed_log_prob(head, Vec{z})) * width;
    }
    CHECK(std::abs(integral - 1.0) < 1e-3);
}

TEST_CASE("squashed gaussian: Monte-Carlo normalization over 1e6 samples") {
    // uniform importance sampling of integral of exp(log_prob) over (-1, 1)
    const GaussianHead head{{0.0}, {0.0}};  // mean 0, sigma 1
    Rng rng(777);
    const std::size_t n = 1000000;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.uniform(-1.0, 1.0);
        acc += std::exp(squashed_log_prob(head, Vec{std::atanh(a)}));
    }
    const double integral = 2.0 * acc / static_cast<double>(n);
    CHECK(std::abs(integral - 1.0) < 0.01);
}

TEST_CASE("squashed gaussian: log_prob matches the naive formula away from saturation") {
    const GaussianHead head{{0.2, -0.4}, {std::log(0.5), std::log(1.5)}};
    const Vec z{0.6, -1.1};
    double naive = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        const double sigma = std::exp(head.log_std[k]);
        const double u = (z[k] - head.mean[k]) / sigma;
        naive += -0.5 * u * u - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
        naive -= std::log(1.0 - std::tanh(z[k]) * std::tanh(z[k]));
    }
    CHECK(squashed_log_prob(head, z) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("deterministic_action: tanh of the mean") {
    CHECK(deterministic_action(GaussianHead{{0.0}, {0.0}})[0] == 0.0);
    CHECK(deterministic_action(GaussianHead{{0.5}, {-3.0}})[0] ==
          doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
    CHECK(deterministic_action(GaussianHead{{40.0}, {0.0}})[0] == doctest::Approx(1.0));
}

TEST_CASE("actor head: log_std is clamped into configured bounds") {
    Rng rng(31);
    Actor actor = make_actor(2, 1, {8, 8}, rng);
    // force the raw output far outside the clamp
    for (auto& x : actor.net.weights.back().data) x = 0.0;
    actor.net.biases.back() = {0.3, 19.0};
    GaussianHead h = actor.head(Vec{0.1, 0.2});
    CHECK(h.log_std[0] == 2.0);
    actor.net.biases.back() = {0.3, -50.0};
    h = actor.head(Vec{0.1, 0.2});
    CHECK(h.log_std[0] == -20.0);
    CHECK(std::isfinite(h.log_std[0]));
}
