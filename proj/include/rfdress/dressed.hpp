#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rfdress/field.hpp"
#include "rfdress/spin.hpp"

namespace rfdress {

enum class SpectrumMethod { analytic, floquet };

struct DressedSpectrum {
    double ratio = 0.0;             // rabi / rf angular frequency
    std::vector<double> energies;   // E_m [J], ordered m = -j .. +j
    SpectrumMethod method = SpectrumMethod::analytic;
};

// g_J J0(rabi/omega): the Lande factor perpendicular to the rf axis under dressing.
double lande_factor_dressed(double g_j, double rabi_omega, double rf_omega);

// E_m = m mu_B g_J sqrt((B_perp J0)^2 + B_par^2)
DressedSpectrum dressed_energies_analytic(const SpinSystem& spin, const FieldConfig& field);

// One-period propagator of H(t)/hbar = (wpar + rabi cos(w t)) Jz + wperp Jx in
// the rf-axis (Jz) basis. Throws if the result drifts from unitarity by > 1e-9.
Eigen::MatrixXcd one_period_propagator(int dim, double wpar, double wperp, double rabi,
                                       double rf_omega, double tol);
Eigen::MatrixXcd one_period_propagator(const SpinSystem& spin, const FieldConfig& field, double tol);

struct FloquetModes {
    double ratio = 0.0;
    std::vector<double> quasienergies;  // continued quasi-energies [J], branch m = -j .. +j
    Eigen::MatrixXcd states;            // strobe-phase branch states (columns), rf-axis basis
    double err_estimate = 0.0;          // [J]
};

// Quasi-energy branches tracked by adiabatic continuation: the rf power is
// swept upward in steps small enough that every quasi-energy moves by less
// than hbar*omega/20 and branches are matched by eigenvector overlap.
class FloquetContinuation {
  public:
    FloquetContinuation(const SpinSystem& spin, const FieldConfig& field, double tol);

    // Advance the sweep to `ratio` (>= current position) and return the modes.
    const FloquetModes& advance_to(double ratio);
    const FloquetModes& modes() const { return modes_; }

  private:
    void step_to(double ratio);

    int dim_;
    double wpar_, wperp_, rf_omega_, tol_;
    FloquetModes modes_;
};

// periods > 1 refines the quasi-energies from a longer propagation.
DressedSpectrum floquet_quasienergies(const SpinSystem& spin, const FieldConfig& field,
                                      int periods, double tol);

struct EffectiveGj {
    double value = 0.0;
    bool degenerate = false;  // rf power within 1e-3 of the J0 zero: reported as exactly 0
};

// (eps_1 - eps_0) / (mu_B B_perp) on the branches continued from rabi = 0.
// Requires b_par = 0.
EffectiveGj effective_gj_numeric(const SpinSystem& spin, const FieldConfig& field, double tol = 1e-11);
std::vector<EffectiveGj> effective_gj_sweep(const SpinSystem& spin, const FieldConfig& base,
                                            const std::vector<double>& ratios, double tol = 1e-11);

// Rabi frequency at which the dressed Lande factor first vanishes.
double find_degeneracy_point(double rf_omega);

// First two positive zeros of J0, located by bracketed root finding.
double j0_first_zero();
double j0_second_zero();

// Extended Floquet-matrix route (time-independent block matrix over photon
// indices |n| <= n_max): an independent cross-check of the propagator route,
// and the source of dressed strobe states for sudden-projection oracles.
struct ExtendedModes {
    std::vector<double> quasienergies;  // [J], branch m = -j .. +j
    Eigen::MatrixXcd strobe_states;     // columns, rf-axis basis
};
ExtendedModes extended_floquet_modes(const SpinSystem& spin, const FieldConfig& field,
                                     int n_max = 0);

}  // namespace rfdress
