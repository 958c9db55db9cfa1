#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rfdress/field.hpp"
#include "rfdress/spin.hpp"

namespace rfdress {

// Longitudinal trap geometry for the drift simulation. The magnetic potential
// of Zeeman component m under gradient b' is either
//   kinked:  E(x) = m g_eff mu_B b' |x|   (field magnitude minimal at x = 0)
//   linear:  E(x) = m g_eff mu_B b' x
// The kinked form needs a nonzero seed offset to fix the force direction.
struct TrapConfig {
    std::function<double(double)> potential;  // optical potential [J] vs x [m]
    double drift_time = 0.0;                  // [s]
    double seed_offset = -10e-6;              // initial position [m]
    enum class GradientModel { linear, kinked };
    GradientModel model = GradientModel::kinked;

    static TrapConfig flat(double drift_time_s);
    // Longitudinal profile of a focused-beam trap: -u0 / (1 + ((x-x0)/xr)^2)
    static TrapConfig gaussian_beam(double drift_time_s, double depth_j, double rayleigh_m,
                                    double waist_offset_m);
};

struct TrajectoryResult {
    std::vector<double> times;             // [s]
    std::vector<double> positions;         // [m]
    std::vector<double> displacement_rel;  // relative to the m = 0 reference run [m]
};

// Closed-form drift displacement (m g_eff mu_B b'/ 2M) t^2 under the gradient
// force alone; the optical trap force cancels in the relative measure.
double drift_displacement(double g_eff, double m, const FieldConfig& field, double t, double mass);

// Normalized displacement curve vs rf power. The adiabatic branch (slow ramp
// through the avoided crossing) follows |J0|; the diabatic branch keeps the
// sign of J0.
std::vector<std::pair<double, double>> displacement_curve(const std::vector<double>& ratio_grid,
                                                          const FieldConfig& field,
                                                          const SpinSystem& spin, double t,
                                                          bool adiabatic, int m = -3);

// Drift displacements of the two extreme dressed branches after a fast ramp
// past the J0 zero: (signed-J0 branch, |J0| branch).
std::pair<double, double> branch_displacements(double ratio, const FieldConfig& field,
                                               const SpinSystem& spin, double t);

// Newtonian drift in trap plus magnetic gradient, minus the m = 0 reference.
TrajectoryResult simulate_drift_ode(int m, const FieldConfig& field, const TrapConfig& trap,
                                    double rf_ratio, double t, const SpinSystem& spin,
                                    int n_samples = 64, double tol = 1e-12);

}  // namespace rfdress
