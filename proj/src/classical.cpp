#include "rfdress/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "rfdress/ode.hpp"
#include "rfdress/quadrature.hpp"
#include "rfdress/units.hpp"

namespace rfdress {

std::vector<ClassicalMoment> integrate_classical_spin(const Eigen::Vector3d& mu0,
                                                      const FieldConfig& field, double g_j,
                                                      double t_final, double tol,
                                                      int n_samples) {
    if (!(mu0.norm() > 0.0)) throw std::invalid_argument("initial moment must be nonzero");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(t_final > 0.0)) throw std::invalid_argument("final time must be positive");
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");

    const auto c = codata();
    const double gamma = g_j * c.mu_b / c.hbar;       // rad/s per tesla
    const double b_rf = field.rf_amplitude_tesla(g_j) * (g_j < 0 ? -1.0 : 1.0);
    const double w = field.rf_omega;
    const double bx = field.b_perp, bz_static = field.b_par;

    auto rhs = [=](double t, const Eigen::Vector3d& mu, Eigen::Vector3d& dmu) {
        const Eigen::Vector3d b(bx, 0.0, bz_static + b_rf * std::cos(w * t));
        dmu = gamma * mu.cross(b);
    };

    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol * mu0.norm();
    opt.h_max = field.rf_period() / 16.0;

    auto stepper = make_rkf78<Eigen::Vector3d>(rhs, opt);
    std::vector<double> times(n_samples);
    for (int i = 0; i < n_samples; ++i) times[i] = t_final * i / (n_samples - 1.0);

    std::vector<ClassicalMoment> out;
    out.reserve(n_samples);
    Eigen::Vector3d mu = mu0;
    stepper.integrate_sampled(mu, 0.0, t_final, times,
                              [&](double t, const Eigen::Vector3d& m) { out.push_back({m, t}); });
    return out;
}

double analytic_transverse(double t, double rabi_omega, double rf_omega) {
    if (!(rf_omega > 0.0)) throw std::invalid_argument("rf angular frequency must be positive");
    return std::cos(rabi_omega / rf_omega * std::sin(rf_omega * t));
}

double time_averaged_moment(double rabi_omega, double rf_omega) {
    if (!(rf_omega > 0.0)) throw std::invalid_argument("rf angular frequency must be positive");
    const double period = 2.0 * units::pi / rf_omega;
    const auto res = integrate_adaptive(
        [&](double t) { return analytic_transverse(t, rabi_omega, rf_omega); }, 0.0, period,
        1e-13, 1e-15 * period);
    return res.value / period;
}

}  // namespace rfdress
