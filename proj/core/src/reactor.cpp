#include "tasac/reactor.hpp"

#include <cmath>
#include <string>

#include "tasac/errors.hpp"

namespace tasac {

bool ReactorState::finite() const {
    return std::isfinite(conc_tg) && std::isfinite(conc_dg) && std::isfinite(conc_mg) &&
           std::isfinite(conc_e) && std::isfinite(conc_a) && std::isfinite(conc_gl) &&
           std::isfinite(t_reactor) && std::isfinite(t_jacket) && std::isfinite(clock);
}

void KineticParams::validate() const {
    for (std::size_t i = 0; i < 6; ++i) {
        if (!(ko[i] > 0.0))
            throw config_error("kinetics: ko" + std::to_string(i + 1) + " must be > 0");
        if (!(activation_energy[i] >= 0.0))
            throw config_error("kinetics: E" + std::to_string(i + 1) + " must be >= 0");
    }
    if (!(gas_constant > 0.0)) throw config_error("kinetics: gas constant must be > 0");
}

void ThermalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw config_error(std::string("thermal: ") + name + " must be > 0");
    };
    positive(molar_mass, "molar_mass");
    positive(volume, "volume");
    positive(density, "density");
    positive(heat_capacity, "heat_capacity");
    positive(jacket_flow, "jacket_flow");
    positive(jacket_volume, "jacket_volume");
    positive(jacket_density, "jacket_density");
    positive(coolant_heat_capacity, "coolant_heat_capacity");
    positive(ua, "ua");
    if (!std::isfinite(heat_of_reaction)) throw config_error("thermal: heat_of_reaction not finite");
}

std::array<double, 6> arrhenius(const KineticParams& kp, double t_reactor) {
    if (!(t_reactor > 0.0))
        throw std::domain_error("arrhenius: reactor temperature must be > 0 K, got " +
                                std::to_string(t_reactor));
    std::array<double, 6> k{};
    for (std::size_t i = 0; i < 6; ++i)
        k[i] = kp.ko[i] * std::exp(-kp.activation_energy[i] / (kp.gas_constant * t_reactor));
    return k;
}

SpeciesDerivatives species_derivatives(const ReactorState& s, const std::array<double, 6>& k) {
    // Net forward rates of the three reversible steps.
    const double r1 = k[0] * s.conc_tg * s.conc_a - k[1] * s.conc_dg * s.conc_e;
    const double r2 = k[2] * s.conc_dg * s.conc_a - k[3] * s.conc_mg * s.conc_e;
    const double r3 = k[4] * s.conc_mg * s.conc_a - k[5] * s.conc_gl * s.conc_e;

    SpeciesDerivatives out;
    out.d[0] = -r1;             // TG
    out.d[1] = r1 - r2;         // DG
    out.d[2] = r2 - r3;         // MG
    out.d[3] = r1 + r2 + r3;    // E
    out.d[4] = -out.d[3];       // A, exact mirror of E
    // GL closes the backbone balance exactly; algebraically equal to r3.
    out.d[5] = -(out.d[0] + out.d[1] + out.d[2]);
    out.ester_rate = out.d[3];
    return out;
}

EnergyDerivatives energy_derivatives(const ReactorState& s, double ester_rate,
                                     const ThermalParams& tp, double t_jacket_in) {
    const double q_jacket = tp.ua * (s.t_jacket - s.t_reactor);
    EnergyDerivatives out;
    out.dt_reactor = tp.molar_mass / (tp.volume * tp.density * tp.heat_capacity) *
                     (-tp.volume * tp.heat_of_reaction * ester_rate + q_jacket);
    out.dt_jacket = tp.jacket_flow * (t_jacket_in - s.t_jacket) / (tp.jacket_volume * tp.jacket_density) -
                    q_jacket / (tp.jacket_volume * tp.jacket_density * tp.coolant_heat_capacity);
    return out;
}

namespace {

using State8 = std::array<double, 8>;  // TG DG MG E A GL T_r T_j

State8 pack(const ReactorState& s) {
    return {s.conc_tg, s.conc_dg, s.conc_mg, s.conc_e, s.conc_a, s.conc_gl, s.t_reactor, s.t_jacket};
}

ReactorState unpack(const State8& y, double clock) {
    ReactorState s;
    s.conc_tg = y[0];
    s.conc_dg = y[1];
    s.conc_mg = y[2];
    s.conc_e = y[3];
    s.conc_a = y[4];
    s.conc_gl = y[5];
    s.t_reactor = y[6];
    s.t_jacket = y[7];
    s.clock = clock;
    return s;
}

State8 derivatives(const State8& y, double clock, double t_jacket_in, const KineticParams& kp,
                   const ThermalParams& tp) {
    const ReactorState s = unpack(y, clock);
    const std::array<double, 6> k = arrhenius(kp, s.t_reactor);
    const SpeciesDerivatives sd = species_derivatives(s, k);
    const EnergyDerivatives ed = energy_derivatives(s, sd.ester_rate, tp, t_jacket_in);
    return {sd.d[0], sd.d[1], sd.d[2], sd.d[3], sd.d[4], sd.d[5], ed.dt_reactor, ed.dt_jacket};
}

}  // namespace

Rk4StepResult rk4_step(const ReactorState& s, double t_jacket_in, double dt,
                       const KineticParams& kp, const ThermalParams& tp) {
    if (!(dt > 0.0)) throw usage_error("rk4_step: dt must be > 0");

    State8 y1;
    try {
        y1 = rk4_stage<8>(
            [&](const State8& y, double t) { return derivatives(y, t, t_jacket_in, kp, tp); },
            pack(s), s.clock, dt);
    } catch (const std::domain_error&) {
        // a stage left the physical domain (e.g. negative absolute temperature)
        throw integration_error("rk4_step: stage left the physical domain at clock " +
                                std::to_string(s.clock));
    }

    Rk4StepResult result;
    result.state = unpack(y1, s.clock + dt);
    if (!result.state.finite())
        throw integration_error("rk4_step: non-finite state at clock " +
                                std::to_string(s.clock + dt));

    // Stiff late-batch dynamics may undershoot slightly; clip and count.
    for (double* c : {&result.state.conc_tg, &result.state.conc_dg, &result.state.conc_mg,
                      &result.state.conc_e, &result.state.conc_a, &result.state.conc_gl}) {
        if (*c < 0.0) {
            *c = 0.0;
            ++result.negative_clips;
        }
    }
    return result;
}

}  // namespace tasac
