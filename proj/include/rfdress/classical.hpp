#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rfdress/field.hpp"

namespace rfdress {

struct ClassicalMoment {
    Eigen::Vector3d mu;  // magnetic moment [J/T]
    double t = 0.0;      // [s]
};

// Integrates d mu/dt = (g_J mu_B / hbar) mu x B(t) with
// B(t) = b_perp x + (b_par + B_rf cos(w t)) z, sampled at n_samples uniform
// times in [0, t_final].
std::vector<ClassicalMoment> integrate_classical_spin(const Eigen::Vector3d& mu0,
                                                      const FieldConfig& field, double g_j,
                                                      double t_final, double tol,
                                                      int n_samples = 256);

// cos((rabi/omega) sin(omega t)): transverse moment of a spin precessing in the
// pure rf field, normalized to its initial value.
double analytic_transverse(double t, double rabi_omega, double rf_omega);

// One-period average of analytic_transverse by adaptive quadrature.
double time_averaged_moment(double rabi_omega, double rf_omega);

}  // namespace rfdress
