#include "rfdress/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "rfdress/bessel.hpp"
#include "rfdress/ode.hpp"

namespace rfdress {

TrapConfig TrapConfig::flat(double drift_time_s) {
    TrapConfig t;
    t.potential = [](double) { return 0.0; };
    t.drift_time = drift_time_s;
    return t;
}

TrapConfig TrapConfig::gaussian_beam(double drift_time_s, double depth_j, double rayleigh_m,
                                     double waist_offset_m) {
    TrapConfig t;
    t.potential = [=](double x) {
        const double u = (x - waist_offset_m) / rayleigh_m;
        return -depth_j / (1.0 + u * u);
    };
    t.drift_time = drift_time_s;
    return t;
}

double drift_displacement(double g_eff, double m, const FieldConfig& field, double t,
                          double mass) {
    if (!(t >= 0.0)) throw std::invalid_argument("drift time must be non-negative");
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    const auto c = codata();
    return 0.5 * m * g_eff * c.mu_b * field.gradient / mass * t * t;
}

std::vector<std::pair<double, double>> displacement_curve(const std::vector<double>& ratio_grid,
                                                          const FieldConfig& field,
                                                          const SpinSystem& spin, double t,
                                                          bool adiabatic, int m) {
    for (double r : ratio_grid)
        if (r < 0.0 || r > 6.0) throw std::invalid_argument("rf power ratio outside [0, 6]");
    std::vector<double> j0(ratio_grid.size());
    bessel_j0_batch(ratio_grid, j0);

    const double dmax = drift_displacement(spin.g_j, m, field, t, spin.mass);
    if (dmax == 0.0)
        throw std::invalid_argument(
            "normalization displacement vanishes: need m != 0, gradient != 0 and t > 0");
    std::vector<std::pair<double, double>> out;
    out.reserve(ratio_grid.size());
    for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
        const double g_eff = spin.g_j * j0[i];
        double d = drift_displacement(g_eff, m, field, t, spin.mass) / dmax;
        if (adiabatic) d = std::fabs(d);
        out.emplace_back(ratio_grid[i], d);
    }
    return out;
}

std::pair<double, double> branch_displacements(double ratio, const FieldConfig& field,
                                               const SpinSystem& spin, double t) {
    const double j0 = bessel_j0(ratio);
    const double signed_d = drift_displacement(spin.g_j * j0, -spin.j, field, t, spin.mass);
    return {signed_d, std::fabs(signed_d)};
}

TrajectoryResult simulate_drift_ode(int m, const FieldConfig& field, const TrapConfig& trap,
                                    double rf_ratio, double t, const SpinSystem& spin,
                                    int n_samples, double tol) {
    if (!trap.potential) throw std::invalid_argument("trap potential not set");
    if (!(t > 0.0)) throw std::invalid_argument("drift time must be positive");
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");

    const auto c = codata();
    const double g_eff = spin.g_j * bessel_j0(rf_ratio);

    auto trap_force = [&](double x) {
        const double h = std::max(1e-9, 1e-6 * std::fabs(x));
        return -(trap.potential(x + h) - trap.potential(x - h)) / (2.0 * h);
    };
    auto magnetic_force = [&](double x, int mq) {
        const double slope = mq * g_eff * c.mu_b * field.gradient;
        // linear: E = -slope * x (field magnitude decreasing along +x)
        if (trap.model == TrapConfig::GradientModel::linear) return slope;
        // kinked: E = slope * |x| (field magnitude minimal at the trap center)
        return x > 0.0 ? -slope : (x < 0.0 ? slope : 0.0);
    };

    auto run = [&](int mq) {
        auto rhs = [&, mq](double, const Eigen::Vector2d& s, Eigen::Vector2d& ds) {
            ds(0) = s(1);
            ds(1) = (trap_force(s(0)) + magnetic_force(s(0), mq)) / spin.mass;
        };
        OdeOptions opt;
        opt.rtol = tol;
        opt.atol = tol * std::max(std::fabs(trap.seed_offset), 1e-6);
        auto stepper = make_rkf78<Eigen::Vector2d>(rhs, opt);
        std::vector<double> xs;
        xs.reserve(n_samples);
        std::vector<double> times(n_samples);
        for (int i = 0; i < n_samples; ++i) times[i] = t * i / (n_samples - 1.0);
        Eigen::Vector2d s(trap.seed_offset, 0.0);
        stepper.integrate_sampled(s, 0.0, t, times,
                                  [&](double, const Eigen::Vector2d& st) { xs.push_back(st(0)); });
        return xs;
    };

    const std::vector<double> xm = run(m);
    const std::vector<double> x0 = run(0);

    TrajectoryResult out;
    out.times.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) out.times[i] = t * i / (n_samples - 1.0);
    out.positions = xm;
    out.displacement_rel.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) out.displacement_rel[i] = xm[i] - x0[i];
    return out;
}

}  // namespace rfdress
