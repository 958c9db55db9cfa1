#include "rfdress/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfdress/bessel.hpp"
#include "rfdress/kernels.hpp"
#include "rfdress/ode.hpp"
#include "rfdress/units.hpp"

namespace rfdress {

namespace {

// Brent root finder; f(a) and f(b) must bracket a root.
template <class F>
double brent(const F& f, double a, double b, double xtol) {
    double fa = f(a), fb = f(b);
    if (fa * fb > 0.0) throw std::invalid_argument("brent: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r, s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

struct PropagatorRhs {
    int dim;
    double wpar, wperp, rabi, rf_omega;
    std::vector<double> mvals, diag, offdiag;

    PropagatorRhs(int dim_, double wpar_, double wperp_, double rabi_, double w_)
        : dim(dim_), wpar(wpar_), wperp(wperp_), rabi(rabi_), rf_omega(w_), mvals(dim_),
          diag(dim_), offdiag(std::max(dim_ - 1, 0)) {
        const double j = 0.5 * (dim - 1);
        for (int k = 0; k < dim; ++k) mvals[k] = -j + k;
        for (int k = 0; k + 1 < dim; ++k) {
            const double m = mvals[k];
            offdiag[k] = wperp * 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }

    void operator()(double t, const Eigen::MatrixXcd& u, Eigen::MatrixXcd& dudt) {
        const double c = wpar + rabi * std::cos(rf_omega * t);
        for (int k = 0; k < dim; ++k) diag[k] = c * mvals[k];
        dudt.resize(u.rows(), u.cols());
        kernels::active_backend().tridiag_rhs(static_cast<std::size_t>(dim),
                                              static_cast<std::size_t>(u.cols()), diag.data(),
                                              offdiag.data(), u.data(), dudt.data());
    }
};

double unitarity_defect(const Eigen::MatrixXcd& u) {
    const int n = static_cast<int>(u.rows());
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd propagate_periods(int dim, double wpar, double wperp, double rabi,
                                   double rf_omega, double tol, int periods) {
    const double t_end = periods * 2.0 * units::pi / rf_omega;
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.h_max = (2.0 * units::pi / rf_omega) / 16.0;
    auto stepper = make_rkf78<Eigen::MatrixXcd>(PropagatorRhs(dim, wpar, wperp, rabi, rf_omega), opt);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    stepper.integrate(u, 0.0, t_end);
    if (unitarity_defect(u) > 1e-9)
        throw std::runtime_error("floquet propagator lost unitarity beyond 1e-9");
    return u;
}

// Greedy permutation matching columns of `next` to columns of `prev` by
// overlap magnitude; returns the smallest matched overlap.
double match_columns(const Eigen::MatrixXcd& prev, Eigen::MatrixXcd& next,
                     std::vector<int>& branch_of_col) {
    const int n = static_cast<int>(prev.cols());
    Eigen::MatrixXd overlap(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) overlap(i, k) = std::abs(prev.col(i).dot(next.col(k)));

    branch_of_col.assign(n, -1);
    std::vector<char> branch_used(n, 0), col_used(n, 0);
    double min_best = 1.0;
    for (int pick = 0; pick < n; ++pick) {
        int bi = -1, bk = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (branch_used[i]) continue;
            for (int k = 0; k < n; ++k) {
                if (col_used[k]) continue;
                if (overlap(i, k) > best) {
                    best = overlap(i, k);
                    bi = i;
                    bk = k;
                }
            }
        }
        branch_used[bi] = 1;
        col_used[bk] = 1;
        branch_of_col[bk] = bi;
        min_best = std::min(min_best, best);
    }
    // fix phases so the matched overlap is real positive
    for (int k = 0; k < n; ++k) {
        const std::complex<double> ov = prev.col(branch_of_col[k]).dot(next.col(k));
        if (std::abs(ov) > 0.0) next.col(k) *= std::conj(ov) / std::abs(ov);
    }
    return min_best;
}

double wrap_to_principal(double eps, double quantum) {
    return eps - quantum * std::round(eps / quantum);
}

}  // namespace

double lande_factor_dressed(double g_j, double rabi_omega, double rf_omega) {
    if (!(rf_omega > 0.0)) throw std::invalid_argument("rf angular frequency must be positive");
    return g_j * bessel_j0(rabi_omega / rf_omega);
}

DressedSpectrum dressed_energies_analytic(const SpinSystem& spin, const FieldConfig& field) {
    const auto c = codata();
    const double j0 = bessel_j0(field.ratio());
    const double beff = std::hypot(field.b_perp * j0, field.b_par);
    DressedSpectrum out;
    out.ratio = field.ratio();
    out.method = SpectrumMethod::analytic;
    out.energies.resize(spin.dim());
    for (int k = 0; k < spin.dim(); ++k)
        out.energies[k] = spin.m_value(k) * c.mu_b * spin.g_j * beff;
    return out;
}

Eigen::MatrixXcd one_period_propagator(int dim, double wpar, double wperp, double rabi,
                                       double rf_omega, double tol) {
    if (dim < 2) throw std::invalid_argument("propagator needs dim >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    return propagate_periods(dim, wpar, wperp, rabi, rf_omega, tol, 1);
}

Eigen::MatrixXcd one_period_propagator(const SpinSystem& spin, const FieldConfig& field,
                                       double tol) {
    const auto c = codata();
    const double wpar = spin.g_j * c.mu_b * field.b_par / c.hbar;
    const double wperp = spin.g_j * c.mu_b * field.b_perp / c.hbar;
    return one_period_propagator(spin.dim(), wpar, wperp, field.rabi_omega, field.rf_omega, tol);
}

double j0_first_zero() {
    static const double z = brent([](double x) { return bessel_j0(x); }, 2.0, 2.8, 1e-14);
    return z;
}

double j0_second_zero() {
    static const double z = brent([](double x) { return bessel_j0(x); }, 5.0, 6.0, 1e-14);
    return z;
}

double find_degeneracy_point(double rf_omega) {
    if (!(rf_omega > 0.0)) throw std::invalid_argument("rf angular frequency must be positive");
    const double root = brent([](double x) { return bessel_j0(x); }, 2.0, 2.8, 1e-14);
    return root * rf_omega;
}

FloquetContinuation::FloquetContinuation(const SpinSystem& spin, const FieldConfig& field,
                                         double tol)
    : dim_(spin.dim()), rf_omega_(field.rf_omega), tol_(tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const auto c = codata();
    wpar_ = spin.g_j * c.mu_b * field.b_par / c.hbar;
    wperp_ = spin.g_j * c.mu_b * field.b_perp / c.hbar;

    // rabi = 0: branches are the static eigenstates, labelled by ascending m.
    Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(dim_, dim_);
    const double j = 0.5 * (dim_ - 1);
    for (int k = 0; k < dim_; ++k) {
        h0(k, k) = wpar_ * (-j + k);
        if (k + 1 < dim_) {
            const double m = -j + k;
            h0(k, k + 1) = h0(k + 1, k) = wperp_ * 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
    modes_.ratio = 0.0;
    modes_.states = es.eigenvectors().cast<std::complex<double>>();
    modes_.quasienergies.resize(dim_);
    for (int k = 0; k < dim_; ++k) modes_.quasienergies[k] = codata().hbar * es.eigenvalues()(k);
    modes_.err_estimate = 0.0;
}

void FloquetContinuation::step_to(double ratio) {
    const auto c = codata();
    const double hbar_w = c.hbar * rf_omega_;
    Eigen::MatrixXcd u = propagate_periods(dim_, wpar_, wperp_, ratio * rf_omega_, rf_omega_,
                                           tol_, 1);
    const double defect = unitarity_defect(u);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
    Eigen::MatrixXcd vecs = es.eigenvectors();
    std::vector<int> branch_of_col;
    const double quality = match_columns(modes_.states, vecs, branch_of_col);
    if (quality < 0.75)
        throw std::runtime_error("floquet branch matching ambiguous (eigenvector overlap " +
                                 std::to_string(quality) + ")");

    const double period = 2.0 * units::pi / rf_omega_;
    std::vector<double> quasi(dim_);
    double max_move = 0.0;
    for (int k = 0; k < dim_; ++k) {
        const int b = branch_of_col[k];
        const double raw = -c.hbar * std::arg(es.eigenvalues()(k)) / period;
        const double prev = modes_.quasienergies[b];
        const double eps = raw + hbar_w * std::round((prev - raw) / hbar_w);
        max_move = std::max(max_move, std::fabs(eps - prev));
        quasi[b] = eps;
    }
    if (max_move > hbar_w / 20.0)
        throw std::runtime_error("floquet continuation step too large");

    Eigen::MatrixXcd states(dim_, dim_);
    for (int k = 0; k < dim_; ++k) states.col(branch_of_col[k]) = vecs.col(k);
    modes_.ratio = ratio;
    modes_.states = states;
    modes_.quasienergies = quasi;
    modes_.err_estimate = hbar_w * std::max(20.0 * defect, 1e-14);
}

const FloquetModes& FloquetContinuation::advance_to(double ratio) {
    if (ratio < modes_.ratio - 1e-12)
        throw std::invalid_argument("floquet continuation can only sweep upward");
    const double roots[2] = {j0_first_zero(), j0_second_zero()};
    const double window = (std::fabs(wpar_) < 1e-3 * wperp_) ? 1e-3 : 0.0;

    while (modes_.ratio < ratio - 1e-12) {
        double next = std::min(ratio, modes_.ratio + 0.04);
        // keep intermediate grid points clear of the exact degeneracy when b_par = 0
        if (window > 0.0 && next < ratio - 1e-12) {
            for (double r0 : roots)
                if (std::fabs(next - r0) < window) next = std::min(ratio, r0 + window);
        }
        for (int attempt = 0;; ++attempt) {
            try {
                step_to(next);
                break;
            } catch (const std::runtime_error&) {
                if (attempt >= 6) throw;
                next = modes_.ratio + 0.5 * (next - modes_.ratio);
                if (next - modes_.ratio < 1e-5) throw;
            }
        }
    }
    return modes_;
}

DressedSpectrum floquet_quasienergies(const SpinSystem& spin, const FieldConfig& field,
                                      int periods, double tol) {
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    FloquetContinuation cont(spin, field, tol);
    const FloquetModes& modes = cont.advance_to(field.ratio());

    const auto c = codata();
    const double hbar_w = c.hbar * field.rf_omega;
    std::vector<double> quasi = modes.quasienergies;

    if (periods > 1) {
        const double wpar = spin.g_j * c.mu_b * field.b_par / c.hbar;
        const double wperp = spin.g_j * c.mu_b * field.b_perp / c.hbar;
        Eigen::MatrixXcd w = propagate_periods(spin.dim(), wpar, wperp, field.rabi_omega,
                                               field.rf_omega, tol, periods);
        const double t_n = periods * 2.0 * units::pi / field.rf_omega;
        for (int k = 0; k < spin.dim(); ++k) {
            const std::complex<double> amp = modes.states.col(k).dot(w * modes.states.col(k));
            if (std::abs(amp) < 0.5) continue;  // branch state degraded; keep one-period value
            const double theta = std::arg(amp);  // == -eps * t_n / hbar (mod 2 pi)
            const double raw = -c.hbar * theta / t_n;
            const double quantum = 2.0 * units::pi * c.hbar / t_n;
            quasi[k] = raw + quantum * std::round((quasi[k] - raw) / quantum);
        }
    }

    // pairwise spacing guard, modulo hbar*omega
    for (int i = 0; i < spin.dim(); ++i)
        for (int k = i + 1; k < spin.dim(); ++k) {
            const double gap = std::fabs(wrap_to_principal(quasi[i] - quasi[k], hbar_w));
            if (gap < 1e-4 * hbar_w)
                throw std::runtime_error("quasi-energy spacing below 1e-4 hbar*omega: "
                                         "branch assignment ambiguous");
        }

    DressedSpectrum out;
    out.ratio = field.ratio();
    out.method = SpectrumMethod::floquet;
    out.energies = std::move(quasi);
    return out;
}

EffectiveGj effective_gj_numeric(const SpinSystem& spin, const FieldConfig& field, double tol) {
    if (field.b_par != 0.0)
        throw std::invalid_argument("effective_gj_numeric requires b_par = 0");
    if (!(field.b_perp > 0.0))
        throw std::invalid_argument("effective_gj_numeric requires b_perp > 0");
    std::vector<double> one{field.ratio()};
    return effective_gj_sweep(spin, field, one, tol).front();
}

std::vector<EffectiveGj> effective_gj_sweep(const SpinSystem& spin, const FieldConfig& base,
                                            const std::vector<double>& ratios, double tol) {
    if (base.b_par != 0.0)
        throw std::invalid_argument("effective_gj_sweep requires b_par = 0");
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] < ratios[i - 1])
            throw std::invalid_argument("ratio grid must be ascending");

    const auto c = codata();
    const int center = spin.dim() / 2;  // m closest to 0 from below for half-integer j
    const int hi = (spin.dim() % 2 == 1) ? center + 1 : center;
    const int lo = (spin.dim() % 2 == 1) ? center : center - 1;

    FloquetContinuation cont(spin, base, tol);
    std::vector<EffectiveGj> out;
    out.reserve(ratios.size());
    const double root1 = j0_first_zero();
    const double root2 = j0_second_zero();
    for (double r : ratios) {
        if (std::fabs(r - root1) < 1e-3 || std::fabs(r - root2) < 1e-3) {
            out.push_back({0.0, true});
            continue;
        }
        const FloquetModes& m = cont.advance_to(r);
        const double num = (m.quasienergies[hi] - m.quasienergies[lo]) /
                           (c.mu_b * base.b_perp);
        out.push_back({num, false});
    }
    return out;
}

ExtendedModes extended_floquet_modes(const SpinSystem& spin, const FieldConfig& field,
                                     int n_max) {
    const auto c = codata();
    const int dim = spin.dim();
    const double wpar = spin.g_j * c.mu_b * field.b_par / c.hbar;
    const double wperp = spin.g_j * c.mu_b * field.b_perp / c.hbar;
    const double w = field.rf_omega;
    const double target = field.ratio();
    if (n_max <= 0) n_max = std::max(10, static_cast<int>(std::ceil(3.0 * target)));
    const int nblocks = 2 * n_max + 1;
    const int total = dim * nblocks;

    const double j = 0.5 * (dim - 1);
    Eigen::VectorXd mvals(dim), xoff(std::max(dim - 1, 1));
    for (int k = 0; k < dim; ++k) mvals(k) = -j + k;
    for (int k = 0; k + 1 < dim; ++k)
        xoff(k) = 0.5 * std::sqrt(j * (j + 1.0) - mvals(k) * (mvals(k) + 1.0));

    auto build = [&](double rabi) {
        Eigen::MatrixXd hf = Eigen::MatrixXd::Zero(total, total);
        for (int nb = 0; nb < nblocks; ++nb) {
            const int n = nb - n_max;
            const int base = nb * dim;
            for (int k = 0; k < dim; ++k) {
                hf(base + k, base + k) = wpar * mvals(k) + n * w;
                if (k + 1 < dim) {
                    hf(base + k, base + k + 1) = wperp * xoff(k);
                    hf(base + k + 1, base + k) = wperp * xoff(k);
                }
            }
            if (nb + 1 < nblocks) {  // rabi/2 * Jz between adjacent photon blocks
                const int up = (nb + 1) * dim;
                for (int k = 0; k < dim; ++k) {
                    hf(base + k, up + k) = 0.5 * rabi * mvals(k);
                    hf(up + k, base + k) = 0.5 * rabi * mvals(k);
                }
            }
        }
        return hf;
    };

    // continuation in rabi from 0, matching eigenvectors in the extended space
    Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(total, dim);
    std::vector<double> quasi(dim);
    for (int k = 0; k < dim; ++k) prev(n_max * dim + k, k) = 1.0;  // |m, n=0>
    {
        Eigen::MatrixXd h0 = build(0.0).block(n_max * dim, n_max * dim, dim, dim);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
        for (int k = 0; k < dim; ++k) quasi[k] = c.hbar * es.eigenvalues()(k);
        prev.setZero();
        prev.block(n_max * dim, 0, dim, dim) = es.eigenvectors();
    }

    const int nsteps = std::max(12, static_cast<int>(std::ceil(target / 0.05)));
    for (int s = 1; s <= nsteps; ++s) {
        const double rabi = target * w * s / nsteps;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build(rabi));
        // match each tracked branch to its best continuation
        Eigen::MatrixXd next(total, dim);
        std::vector<int> used(total, 0);
        for (int b = 0; b < dim; ++b) {
            int best = -1;
            double best_ov = -1.0;
            for (int k = 0; k < total; ++k) {
                if (used[k]) continue;
                const double ov = std::fabs(prev.col(b).dot(es.eigenvectors().col(k)));
                if (ov > best_ov) {
                    best_ov = ov;
                    best = k;
                }
            }
            if (best_ov < 0.55)
                throw std::runtime_error("extended floquet continuation lost a branch");
            used[best] = 1;
            next.col(b) = es.eigenvectors().col(best) *
                          (prev.col(b).dot(es.eigenvectors().col(best)) >= 0 ? 1.0 : -1.0);
            quasi[b] = c.hbar * es.eigenvalues()(best);
        }
        prev = next;
    }

    ExtendedModes out;
    out.quasienergies = quasi;
    out.strobe_states.resize(dim, dim);
    for (int b = 0; b < dim; ++b) {
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim);
        for (int nb = 0; nb < nblocks; ++nb) psi += prev.block(nb * dim, b, dim, 1);
        out.strobe_states.col(b) = (psi / psi.norm()).cast<std::complex<double>>();
    }
    return out;
}

}  // namespace rfdress
