#pragma once

#include <array>
#include <cstddef>

namespace tasac {

/// Full physical state of the jacketed batch reactor.
///
/// Species concentrations in mol/L: triglyceride (TG), diglyceride (DG),
/// monoglyceride (MG), ester (E), alcohol (A), glycerol (GL). Temperatures in
/// kelvin, batch clock in minutes.
struct ReactorState {
    double conc_tg = 0.0;
    double conc_dg = 0.0;
    double conc_mg = 0.0;
    double conc_e = 0.0;
    double conc_a = 0.0;
    double conc_gl = 0.0;
    double t_reactor = 0.0;
    double t_jacket = 0.0;
    double clock = 0.0;

    /// TG + DG + MG + GL: conserved over a batch.
    double glyceride_backbone() const { return conc_tg + conc_dg + conc_mg + conc_gl; }
    /// A + E: conserved over a batch.
    double alcohol_ester() const { return conc_a + conc_e; }

    bool finite() const;
};

/// Arrhenius kinetics of the three reversible transesterification steps.
/// ko in L/(mol min), activation energies in J/mol, R in J/(mol K).
struct KineticParams {
    std::array<double, 6> ko{};
    std::array<double, 6> activation_energy{};
    double gas_constant = 8.314;

    void validate() const;
};

/// Energy-balance parameters of the reactor and its cooling/heating jacket.
/// Units: molar_mass kg/mol, volume L, density kg/L, molar heat capacity
/// J/(mol K), heat of reaction J/mol, jacket flow kg/min, coolant heat
/// capacity J/(kg K), ua J/(min K).
struct ThermalParams {
    double molar_mass = 0.0;         // M_R
    double volume = 0.0;             // V
    double density = 0.0;            // rho_R
    double heat_capacity = 0.0;      // c_mR (molar)
    double heat_of_reaction = 0.0;   // dH_R, negative = exothermic
    double jacket_flow = 0.0;        // F_j
    double jacket_volume = 0.0;      // V_j
    double jacket_density = 0.0;     // rho_j
    double coolant_heat_capacity = 0.0;  // c_w
    double ua = 0.0;                 // U*A

    void validate() const;
};

/// k_i = ko_i * exp(-E_i / (R * T)). Throws domain error for T <= 0.
std::array<double, 6> arrhenius(const KineticParams& kp, double t_reactor);

struct SpeciesDerivatives {
    std::array<double, 6> d{};   // order: TG, DG, MG, E, A, GL
    double ester_rate = 0.0;     // r_E = d[E]/dt, drives the energy balance
};

/// Mass balances of the three reversible steps. The derivative vector is
/// assembled so TG+DG+MG+GL and A+E sums cancel exactly in floating point.
SpeciesDerivatives species_derivatives(const ReactorState& s, const std::array<double, 6>& k);

struct EnergyDerivatives {
    double dt_reactor = 0.0;
    double dt_jacket = 0.0;
};

/// Jacketed-reactor energy balances with Q_j = UA*(T_j - T_r).
EnergyDerivatives energy_derivatives(const ReactorState& s, double ester_rate,
                                     const ThermalParams& tp, double t_jacket_in);

/// One classic RK4 stage for dy/dt = f(y, t); shared by the reactor stepper
/// and the convergence checks.
template <std::size_t N, class F>
std::array<double, N> rk4_stage(F&& deriv, const std::array<double, N>& y, double t, double dt) {
    const std::array<double, N> k1 = deriv(y, t);
    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = deriv(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = deriv(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    const std::array<double, N> k4 = deriv(tmp, t + dt);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

struct Rk4StepResult {
    ReactorState state;
    std::size_t negative_clips = 0;  // concentrations clipped up to zero after the step
};

/// Classic fixed-step RK4 over the joint 8-dimensional system; the clock
/// advances by dt. Throws integration_error when the state turns non-finite.
Rk4StepResult rk4_step(const ReactorState& s, double t_jacket_in, double dt,
                       const KineticParams& kp, const ThermalParams& tp);

}  // namespace tasac
