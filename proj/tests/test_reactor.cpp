#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tasac/environment.hpp"
#include "tasac/errors.hpp"
#include "tasac/reactor.hpp"
#include "tasac/rng.hpp"

using namespace tasac;

namespace {

ReactorState random_state(Rng& rng) {
    ReactorState s;
    s.conc_tg = rng.uniform(0.0, 1.0);
    s.conc_dg = rng.uniform(0.0, 0.5);
    s.conc_mg = rng.uniform(0.0, 0.5);
    s.conc_e = rng.uniform(0.0, 2.0);
    s.conc_a = rng.uniform(0.0, 3.0);
    s.conc_gl = rng.uniform(0.0, 0.5);
    s.t_reactor = rng.uniform(300.0, 360.0);
    s.t_jacket = rng.uniform(300.0, 360.0);
    return s;
}

}  // namespace

TEST_CASE("arrhenius: zero activation energy gives k = ko") {
    KineticParams kp = default_env_config().kinetics;
    kp.activation_energy = {0, 0, 0, 0, 0, 0};
    const auto k = arrhenius(kp, 345.0);
    for (std::size_t i = 0; i < 6; ++i) CHECK(k[i] == kp.ko[i]);
}

TEST_CASE("arrhenius: k approaches ko monotonically from below as T grows") {
    const KineticParams kp = default_env_config().kinetics;
    double prev = arrhenius(kp, 300.0)[0];
    for (double t = 350.0; t < 1e7; t *= 4.0) {
        const double k = arrhenius(kp, t)[0];
        CHECK(k > prev);
        CHECK(k < kp.ko[0]);
        prev = k;
    }
    CHECK(arrhenius(kp, 1e12)[0] == doctest::Approx(kp.ko[0]).epsilon(1e-6));
}

TEST_CASE("arrhenius: doubling E halves log(k/ko) at fixed T") {
    KineticParams kp = default_env_config().kinetics;
    const double t = 333.15;
    const double log_ratio_1 = std::log(arrhenius(kp, t)[2] / kp.ko[2]);
    kp.activation_energy[2] *= 2.0;
    const double log_ratio_2 = std::log(arrhenius(kp, t)[2] / kp.ko[2]);
    CHECK(log_ratio_2 == doctest::Approx(2.0 * log_ratio_1).epsilon(1e-9));
}

TEST_CASE("arrhenius: non-positive temperature is a domain error") {
    const KineticParams kp = default_env_config().kinetics;
    CHECK_THROWS_AS(arrhenius(kp, 0.0), std::domain_error);
    CHECK_THROWS_AS(arrhenius(kp, -5.0), std::domain_error);
}

TEST_CASE("species_derivatives: all-zero concentrations give zero derivatives") {
    ReactorState s;
    s.t_reactor = 333.0;
    const auto d = species_derivatives(s, {1, 1, 1, 1, 1, 1});
    for (double x : d.d) CHECK(x == 0.0);
}

TEST_CASE("species_derivatives: single-path kinetics with only TG and A present") {
    ReactorState s;
    s.conc_tg = 0.5;
    s.conc_a = 2.0;
    const std::array<double, 6> k{0.3, 0.1, 0.2, 0.4, 0.5, 0.6};
    const auto d = species_derivatives(s, k);
    const double rate = 0.3 * 0.5 * 2.0;
    CHECK(d.d[0] == doctest::Approx(-rate).epsilon(1e-15));  // TG
    CHECK(d.d[1] == doctest::Approx(rate).epsilon(1e-15));   // DG
    CHECK(d.d[3] == doctest::Approx(rate).epsilon(1e-15));   // E
    CHECK(d.d[5] == 0.0);                                    // GL
    CHECK(d.d[4] == -d.d[3]);                                // A mirrors E
}

TEST_CASE("species_derivatives: conservation sums cancel exactly") {
    Rng rng(42);
    const KineticParams kp = default_env_config().kinetics;
    for (int i = 0; i < 200; ++i) {
        const ReactorState s = random_state(rng);
        const auto k = arrhenius(kp, s.t_reactor);
        const auto d = species_derivatives(s, k);
        CHECK(d.d[0] + d.d[1] + d.d[2] + d.d[5] == 0.0);  // TG+DG+MG+GL
        CHECK(d.d[3] + d.d[4] == 0.0);                    // E+A
    }
}

TEST_CASE("species_derivatives: GL rate equals the direct third-step balance") {
    Rng rng(43);
    const KineticParams kp = default_env_config().kinetics;
    for (int i = 0; i < 200; ++i) {
        const ReactorState s = random_state(rng);
        const auto k = arrhenius(kp, s.t_reactor);
        const auto d = species_derivatives(s, k);
        const double direct = k[4] * s.conc_mg * s.conc_a - k[5] * s.conc_gl * s.conc_e;
        CHECK(d.d[5] == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("energy_derivatives: thermal equilibrium with no reaction is stationary") {
    const ThermalParams tp = default_env_config().thermal;
    ReactorState s;
    s.t_reactor = 333.0;
    s.t_jacket = 333.0;
    const auto e = energy_derivatives(s, 0.0, tp, 340.0);
    CHECK(e.dt_reactor == 0.0);

    const auto e2 = energy_derivatives(s, 0.0, tp, 333.0);
    CHECK(e2.dt_jacket == 0.0);
}

TEST_CASE("energy_derivatives: hot jacket heats the reactor") {
    const ThermalParams tp = default_env_config().thermal;
    ReactorState s;
    s.t_reactor = 330.0;
    s.t_jacket = 350.0;
    const auto e = energy_derivatives(s, 0.0, tp, 350.0);
    CHECK(e.dt_reactor > 0.0);

    s.t_jacket = 310.0;
    const auto e2 = energy_derivatives(s, 0.0, tp, 310.0);
    CHECK(e2.dt_reactor < 0.0);
}

TEST_CASE("rk4_stage: fourth-order convergence on dx/dt = -x") {
    auto deriv = [](const std::array<double, 1>& y, double) {
        return std::array<double, 1>{-y[0]};
    };
    auto integrate = [&](double dt, double horizon) {
        std::array<double, 1> y{1.0};
        const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
        for (std::size_t i = 0; i < steps; ++i) y = rk4_stage<1>(deriv, y, 0.0, dt);
        return y[0];
    };
    const double horizon = 2.0;
    const double exact = std::exp(-horizon);
    const double e1 = std::abs(integrate(0.2, horizon) - exact);
    const double e2 = std::abs(integrate(0.1, horizon) - exact);
    const double e3 = std::abs(integrate(0.05, horizon) - exact);
    const double order_12 = std::log2(e1 / e2);
    const double order_23 = std::log2(e2 / e3);
    CHECK(order_12 > 3.8);
    CHECK(order_12 < 4.3);
    CHECK(order_23 > 3.8);
    CHECK(order_23 < 4.3);
}

TEST_CASE("rk4_step: zero reaction and matched temperatures change only the clock") {
    EnvConfig cfg = default_env_config();
    // freeze kinetics: astronomically large activation energy underflows k to 0
    cfg.kinetics.activation_energy = {1e7, 1e7, 1e7, 1e7, 1e7, 1e7};
    ReactorState s = cfg.initial_state;
    s.t_reactor = 330.0;
    s.t_jacket = 330.0;
    const auto r = rk4_step(s, 330.0, 0.5, cfg.kinetics, cfg.thermal);
    CHECK(r.state.conc_tg == s.conc_tg);
    CHECK(r.state.conc_a == s.conc_a);
    CHECK(r.state.t_reactor == 330.0);
    CHECK(r.state.t_jacket == 330.0);
    CHECK(r.state.clock == 0.5);
}

TEST_CASE("rk4_step: conservation sums invariant to 1e-9 relative per step") {
    const EnvConfig cfg = default_env_config();
    ReactorState s = cfg.initial_state;
    s.t_reactor = 333.15;
    s.t_jacket = 340.0;
    const double backbone0 = s.glyceride_backbone();
    const double ae0 = s.alcohol_ester();
    for (int i = 0; i < 50; ++i) {
        s = rk4_step(s, 350.0, 0.1, cfg.kinetics, cfg.thermal).state;
        CHECK(std::abs(s.glyceride_backbone() - backbone0) / backbone0 < 1e-9);
        CHECK(std::abs(s.alcohol_ester() - ae0) / ae0 < 1e-9);
    }
}

TEST_CASE("rk4_step: observed convergence order on the full system >= 3.5") {
    const EnvConfig cfg = default_env_config();
    auto integrate = [&](double dt, double horizon) {
        ReactorState s = cfg.initial_state;
        const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
        for (std::size_t i = 0; i < steps; ++i)
            s = rk4_step(s, 360.0, dt, cfg.kinetics, cfg.thermal).state;
        return s;
    };
    auto norm_diff = [](const ReactorState& a, const ReactorState& b) {
        double acc = 0.0;
        auto add = [&acc](double x, double y) { acc += (x - y) * (x - y); };
        add(a.conc_tg, b.conc_tg);
        add(a.conc_dg, b.conc_dg);
        add(a.conc_mg, b.conc_mg);
        add(a.conc_e, b.conc_e);
        add(a.conc_a, b.conc_a);
        add(a.conc_gl, b.conc_gl);
        add(a.t_reactor, b.t_reactor);
        add(a.t_jacket, b.t_jacket);
        return std::sqrt(acc);
    };
    // base dt inside the stable/asymptotic regime of the hot-kinetics modes
    const double horizon = 20.0;
    const ReactorState ref = integrate(0.25 / 64.0, horizon);
    const double e1 = norm_diff(integrate(0.25, horizon), ref);
    const double e2 = norm_diff(integrate(0.125, horizon), ref);
    const double e3 = norm_diff(integrate(0.0625, horizon), ref);
    CHECK(std::log2(e1 / e2) >= 3.5);
    CHECK(std::log2(e2 / e3) >= 3.5);
    CHECK(std::log2(e1 / e2) <= 4.5);
    CHECK(std::log2(e2 / e3) <= 4.5);
}

TEST_CASE("rk4_step: frozen reactions relax temperatures monotonically") {
    EnvConfig cfg = default_env_config();
    cfg.kinetics.activation_energy = {1e7, 1e7, 1e7, 1e7, 1e7, 1e7};
    ReactorState s = cfg.initial_state;
    s.t_reactor = 310.0;
    s.t_jacket = 310.0;
    // slowest thermal mode is ~50 min; 300 min reaches the asymptote
    const double t_jin = 355.0;
    double prev_r = s.t_reactor, prev_j = s.t_jacket;
    for (int i = 0; i < 600; ++i) {
        s = rk4_step(s, t_jin, 0.5, cfg.kinetics, cfg.thermal).state;
        CHECK(s.t_reactor >= prev_r);       // T_r climbs toward T_j
        CHECK(s.t_jacket >= prev_j);        // T_j climbs toward T_jin
        CHECK(s.t_reactor <= s.t_jacket + 1e-9);
        CHECK(s.t_jacket <= t_jin + 1e-9);
        prev_r = s.t_reactor;
        prev_j = s.t_jacket;
    }
    // long-run convergence to the inlet temperature
    CHECK(s.t_reactor == doctest::Approx(t_jin).epsilon(1e-3));
}

TEST_CASE("rk4_step: dt must be positive") {
    const EnvConfig cfg = default_env_config();
    CHECK_THROWS_AS(rk4_step(cfg.initial_state, 330.0, 0.0, cfg.kinetics, cfg.thermal),
                    usage_error);
}
