#include "rfdress/ramp.hpp"

#include <cmath>
#include <stdexcept>

#include "rfdress/dressed.hpp"
#include "rfdress/kernels.hpp"
#include "rfdress/ode.hpp"
#include "rfdress/units.hpp"

namespace rfdress {

namespace {

struct RampRhs {
    int dim;
    double wpar, wperp, rf_omega;
    const RampProfile* ramp;
    std::vector<double> mvals, diag, offdiag;

    RampRhs(const SpinSystem& spin, const FieldConfig& field, const RampProfile* r)
        : dim(spin.dim()), rf_omega(field.rf_omega), ramp(r), mvals(dim), diag(dim),
          offdiag(std::max(dim - 1, 0)) {
        const auto c = codata();
        wpar = spin.g_j * c.mu_b * field.b_par / c.hbar;
        wperp = spin.g_j * c.mu_b * field.b_perp / c.hbar;
        const double j = spin.j;
        for (int k = 0; k < dim; ++k) mvals[k] = spin.m_value(k);
        for (int k = 0; k + 1 < dim; ++k)
            offdiag[k] = wperp * 0.5 * std::sqrt(j * (j + 1.0) - mvals[k] * (mvals[k] + 1.0));
    }

    void operator()(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi) {
        const double c = wpar + ramp->rabi_at(t) * std::cos(rf_omega * t);
        for (int k = 0; k < dim; ++k) diag[k] = c * mvals[k];
        dpsi.resize(psi.size());
        kernels::active_backend().tridiag_rhs(static_cast<std::size_t>(dim), 1, diag.data(),
                                              offdiag.data(), psi.data(), dpsi.data());
    }
};

int ground_index(const SpinSystem& spin) { return spin.g_j > 0 ? 0 : spin.dim() - 1; }

}  // namespace

RampProfile::RampProfile(double up, double hold, double down, double peak)
    : t_up(up), t_hold(hold), t_down(down), omega_max(peak) {
    if (t_up < 0 || t_hold < 0 || t_down < 0)
        throw std::invalid_argument("ramp durations must be non-negative");
    if (omega_max < 0) throw std::invalid_argument("peak Rabi frequency must be non-negative");
}

double RampProfile::rabi_at(double t) const {
    if (t < 0.0) return 0.0;
    if (t < t_up) return omega_max * (t / t_up);
    if (t <= t_up + t_hold) return omega_max;
    const double tail = total() - t;
    if (tail <= 0.0) return 0.0;
    return t_down > 0.0 ? omega_max * (tail / t_down) : omega_max;
}

SpinState::SpinState(Eigen::VectorXcd a) : amplitudes(std::move(a)) {
    if (amplitudes.size() < 2) throw std::invalid_argument("state needs at least two amplitudes");
    if (std::fabs(amplitudes.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("state must be normalized to 1e-10");
}

Eigen::MatrixXcd static_zeeman_basis(const SpinSystem& spin, const FieldConfig& field) {
    const int dim = spin.dim();
    const double b = field.static_field();
    if (b == 0.0) return Eigen::MatrixXcd::Identity(dim, dim);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const double j = spin.j;
    for (int k = 0; k < dim; ++k) {
        h(k, k) = field.b_par * spin.m_value(k);
        if (k + 1 < dim) {
            const double m = spin.m_value(k);
            h(k, k + 1) = h(k + 1, k) =
                field.b_perp * 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::MatrixXd v = es.eigenvectors();  // ascending <J.B_hat> <-> ascending m
    for (int k = 0; k < dim; ++k) {         // deterministic sign
        int imax;
        v.col(k).cwiseAbs().maxCoeff(&imax);
        if (v(imax, k) < 0) v.col(k) *= -1.0;
    }
    return v.cast<std::complex<double>>();
}

SpinState zeeman_state(const SpinSystem& spin, int m_index) {
    if (m_index < 0 || m_index >= spin.dim()) throw std::invalid_argument("m index out of range");
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(spin.dim());
    a(m_index) = 1.0;
    return SpinState(std::move(a));
}

SpinState ground_zeeman_state(const SpinSystem& spin) {
    return zeeman_state(spin, ground_index(spin));
}

SpinState propagate_ramp(const SpinState& state0, const RampProfile& ramp,
                         const FieldConfig& field, const SpinSystem& spin, double tol) {
    if (state0.dim() != spin.dim()) throw std::invalid_argument("state dimension mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    const Eigen::MatrixXcd basis = static_zeeman_basis(spin, field);
    Eigen::VectorXcd psi = basis * state0.amplitudes;
    if (ramp.total() > 0.0) {
        OdeOptions opt;
        opt.rtol = tol;
        opt.atol = tol * 1e-2;
        opt.h_max = field.rf_period() / 16.0;
        auto stepper = make_rkf78<Eigen::VectorXcd>(RampRhs(spin, field, &ramp), opt);
        // integrate segment-by-segment so the envelope kinks land on step ends
        double t = 0.0;
        for (double t_next : {ramp.t_up, ramp.t_up + ramp.t_hold, ramp.total()}) {
            if (t_next > t) stepper.integrate(psi, t, t_next);
            t = t_next;
        }
    }
    const double drift = std::fabs(psi.norm() - 1.0);
    if (drift > 1e-7)
        throw std::runtime_error("ramp propagation lost normalization (drift " +
                                 std::to_string(drift) + ")");
    SpinState out;
    out.amplitudes = basis.adjoint() * psi;
    return out;
}

std::vector<std::pair<double, double>> recovery_probability_vs_tau(
    const std::vector<double>& tau_grid, const FieldConfig& field, const RampProfile& ramp_base,
    const SpinSystem& spin, double tol) {
    const double tail = ramp_base.t_hold + ramp_base.t_down;
    const int g = ground_index(spin);
    std::vector<std::pair<double, double>> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        if (tau < 0 || tau > tail + 1e-15)
            throw std::invalid_argument("switch-off time exceeds the protocol tail");
        RampProfile r(ramp_base.t_up, tail - tau, tau, ramp_base.omega_max);
        SpinState fin = propagate_ramp(ground_zeeman_state(spin), r, field, spin, tol);
        out.emplace_back(tau, fin.population(g));
    }
    return out;
}

double adiabatic_fraction(const FieldConfig& field, const RampProfile& ramp,
                          const SpinSystem& spin, double tol) {
    // branch states at peak power, continued from rabi = 0
    FloquetContinuation cont(spin, field, tol);
    const FloquetModes& modes = cont.advance_to(ramp.omega_max / field.rf_omega);

    RampProfile up_only(ramp.t_up, 0.0, 0.0, ramp.omega_max);
    SpinState fin = propagate_ramp(ground_zeeman_state(spin), up_only, field, spin, tol);

    const Eigen::MatrixXcd basis = static_zeeman_basis(spin, field);
    const Eigen::VectorXcd psi_rf = basis * fin.amplitudes;
    const int branch = ground_index(spin);
    return std::norm(modes.states.col(branch).dot(psi_rf));
}

std::vector<std::pair<double, double>> adiabatic_fraction_vs_bpar(
    const std::vector<double>& bpar_grid, const FieldConfig& field, const RampProfile& ramp,
    const SpinSystem& spin, double tol) {
    std::vector<std::pair<double, double>> out;
    out.reserve(bpar_grid.size());
    for (double bpar : bpar_grid) {
        FieldConfig f(bpar, field.b_perp, field.rf_omega, field.rabi_omega, field.gradient);
        out.emplace_back(bpar, adiabatic_fraction(f, ramp, spin, tol));
    }
    return out;
}

double lz_criterion(double bpar, double bperp, double dt_ramp, double g_j) {
    if (!(dt_ramp > 0.0)) throw std::invalid_argument("ramp duration must be positive");
    if (!(bperp > 0.0)) throw std::invalid_argument("perpendicular field must be positive");
    const auto c = codata();
    const double wpar = std::fabs(g_j) * c.mu_b * bpar / c.hbar;
    const double wperp = std::fabs(g_j) * c.mu_b * bperp / c.hbar;
    return wpar * wpar * dt_ramp / (3.0 * wperp);
}

PopulationReadout stern_gerlach_readout(const SpinState& state, const FieldConfig& field,
                                        double t_drift, const SpinSystem& spin) {
    if (!(t_drift > 0.0)) throw std::invalid_argument("drift time must be positive");
    if (state.dim() != spin.dim()) throw std::invalid_argument("state dimension mismatch");
    const auto c = codata();
    PopulationReadout out;
    out.populations.resize(spin.dim());
    out.positions.resize(spin.dim());
    for (int k = 0; k < spin.dim(); ++k) {
        out.populations[k] = state.population(k);
        out.positions[k] = 0.5 * spin.m_value(k) * spin.g_j * c.mu_b * field.gradient /
                           spin.mass * t_drift * t_drift;
    }
    return out;
}

double period_averaged_moment(const SpinState& state, const FieldConfig& field,
                              const SpinSystem& spin, double tol) {
    const Eigen::MatrixXcd basis = static_zeeman_basis(spin, field);
    Eigen::VectorXcd psi = basis * state.amplitudes;

    // spin projection along the static field direction, in the rf-axis basis
    const int dim = spin.dim();
    Eigen::MatrixXcd jn = Eigen::MatrixXcd::Zero(dim, dim);
    {
        const double b = field.static_field();
        const double cx = b > 0 ? field.b_perp / b : 1.0;
        const double cz = b > 0 ? field.b_par / b : 0.0;
        const double j = spin.j;
        for (int k = 0; k < dim; ++k) {
            jn(k, k) = cz * spin.m_value(k);
            if (k + 1 < dim) {
                const double m = spin.m_value(k);
                jn(k, k + 1) = jn(k + 1, k) = cx * 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
            }
        }
    }

    RampProfile hold(0.0, field.rf_period(), 0.0, field.rabi_omega);
    RampRhs rhs(spin, field, &hold);
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.h_max = field.rf_period() / 16.0;
    auto stepper = make_rkf78<Eigen::VectorXcd>(rhs, opt);

    const int nsamp = 128;  // periodic trapezoid over one rf period
    std::vector<double> times(nsamp);
    for (int i = 0; i < nsamp; ++i) times[i] = field.rf_period() * i / nsamp;
    double acc = 0.0;
    stepper.integrate_sampled(psi, 0.0, field.rf_period(), times,
                              [&](double, const Eigen::VectorXcd& p) {
                                  acc += (p.adjoint() * jn * p)(0).real();
                              });
    return acc / nsamp;
}

}  // namespace rfdress
