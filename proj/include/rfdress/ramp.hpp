#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rfdress/field.hpp"
#include "rfdress/spin.hpp"

namespace rfdress {

// Piecewise-linear rf power envelope: up over t_up to omega_max, hold for
// t_hold, down over t_down. The rf carrier is cos(w t) throughout.
struct RampProfile {
    double t_up = 0.0;
    double t_hold = 0.0;
    double t_down = 0.0;
    double omega_max = 0.0;  // peak Rabi angular frequency [rad/s]

    RampProfile() = default;
    RampProfile(double up, double hold, double down, double peak);

    double total() const { return t_up + t_hold + t_down; }
    double rabi_at(double t) const;
};

// Amplitudes over the static-field Zeeman basis, index k <-> m = -j + k.
struct SpinState {
    Eigen::VectorXcd amplitudes;

    SpinState() = default;
    explicit SpinState(Eigen::VectorXcd a);  // validates normalization to 1e-10
    int dim() const { return static_cast<int>(amplitudes.size()); }
    double population(int k) const { return std::norm(amplitudes(k)); }
};

struct PopulationReadout {
    std::vector<double> populations;  // per m, sum 1
    std::vector<double> positions;    // Stern-Gerlach drift displacement per m [m]
};

// Static-field eigenbasis expressed in the rf-axis (Jz) basis.
// Column k is the |m = -j + k> state along the static field direction.
Eigen::MatrixXcd static_zeeman_basis(const SpinSystem& spin, const FieldConfig& field);

// |m> along the static field; m_index counts from m = -j.
SpinState zeeman_state(const SpinSystem& spin, int m_index);
// Lowest-energy Zeeman state of the atom in the static field (depends on sign of g_j).
SpinState ground_zeeman_state(const SpinSystem& spin);

// Solves the time-dependent Schrodinger equation across the ramp; the returned
// amplitudes are again in the static Zeeman basis. Norm drift beyond 1e-7 is
// treated as an integration failure.
SpinState propagate_ramp(const SpinState& state0, const RampProfile& ramp,
                         const FieldConfig& field, const SpinSystem& spin, double tol = 1e-11);

// Dressing/undressing protocol: rf up over ramp_base.t_up, hold, then down
// over tau, with t_hold + t_down of ramp_base as the fixed tail budget.
// Returns (tau, probability of recovering the initial lowest Zeeman state).
std::vector<std::pair<double, double>> recovery_probability_vs_tau(
    const std::vector<double>& tau_grid, const FieldConfig& field, const RampProfile& ramp_base,
    const SpinSystem& spin, double tol = 1e-11);

// Probability of remaining on the adiabatically-continued branch after an rf
// switch-on, as a function of the parallel field component.
std::vector<std::pair<double, double>> adiabatic_fraction_vs_bpar(
    const std::vector<double>& bpar_grid, const FieldConfig& field, const RampProfile& ramp,
    const SpinSystem& spin, double tol = 1e-11);

// Population on the adiabatically-continued branch of the initial lowest
// Zeeman state after the given ramp (single point of the sweep above).
double adiabatic_fraction(const FieldConfig& field, const RampProfile& ramp,
                          const SpinSystem& spin, double tol = 1e-11);

// Landau-Zener adiabaticity ratio w_par^2 dt / (3 w_perp); >> 1 means adiabatic.
double lz_criterion(double bpar, double bperp, double dt_ramp, double g_j);

// Populations plus per-m drift positions x_m = (m g_J mu_B b' / 2M) t^2.
PopulationReadout stern_gerlach_readout(const SpinState& state, const FieldConfig& field,
                                        double t_drift, const SpinSystem& spin);

// One-rf-period average of the spin projection along the static field
// direction, at constant rf power. This is the moment that sets the
// time-averaged magnetic force on the dressed atom.
double period_averaged_moment(const SpinState& state, const FieldConfig& field,
                              const SpinSystem& spin, double tol = 1e-11);

}  // namespace rfdress
