#include "rfdress/twoatom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfdress/angular.hpp"
#include "rfdress/units.hpp"

namespace rfdress {

namespace {

// channel layout per photon block: l=0 (1 ml) then l=2 (5 ml), 3 ms each
constexpr int kPerBlock = 18;

int block_offset(int l, int ml) {
    if (l == 0) return 0;
    return 3 + (ml + 2) * 3;
}

double pair_element_angular(const Channel& a, const Channel& b) {
    // [S1.S2 - 3 (S1.r)(S2.r)] = -sqrt6 sum_q (-1)^q [S1 x S2]^2_q C^2_{-q}
    if (a.n != b.n) return 0.0;
    double sum = 0.0;
    for (int q = -2; q <= 2; ++q) {
        const double spin = pair_spin_tensor(a.s, a.ms, q, b.s, b.ms);
        if (spin == 0.0) continue;
        const double orb = gaunt_c(a.l, a.ml, 2, -q, b.l, b.ml);
        if (orb == 0.0) continue;
        sum += ((q & 1) ? -1.0 : 1.0) * spin * orb;
    }
    return -std::sqrt(6.0) * sum;
}

}  // namespace

void Channel::validate() const {
    if (s != 0 && s != 1) throw std::invalid_argument("channel: total spin must be 0 or 1");
    if (std::abs(ms) > s) throw std::invalid_argument("channel: |mS| must not exceed S");
    if (l < 0 || (l % 2) != 0) throw std::invalid_argument("channel: partial wave must be even");
    if (std::abs(ml) > l) throw std::invalid_argument("channel: |ml| must not exceed l");
}

double crossing_radius(double rf_omega, int l_out, double reduced_mass) {
    if (l_out < 1) throw std::invalid_argument("crossing_radius: outgoing wave must have l >= 1");
    if (!(rf_omega > 0.0)) throw std::invalid_argument("crossing_radius: rf frequency must be positive");
    if (!(reduced_mass > 0.0)) throw std::invalid_argument("crossing_radius: bad reduced mass");
    const auto c = codata();
    return std::sqrt(l_out * (l_out + 1.0) * c.hbar / (2.0 * reduced_mass * rf_omega));
}

double dipole_dipole_element(const Channel& a, const Channel& b, double r, double g_j) {
    a.validate();
    b.validate();
    if (!(r > 0.0)) throw std::invalid_argument("dipole_dipole_element: separation must be positive");
    const auto c = codata();
    const double k = c.mu0_over_4pi * (g_j * c.mu_b) * (g_j * c.mu_b) / (r * r * r);
    return k * pair_element_angular(a, b);
}

LossScale loss_scale(const LossEstimate& est, double density, double rf_omega, double g_j) {
    if (!(density > 0.0)) throw std::invalid_argument("loss_scale: density must be positive");
    if (!(est.k2_scale > 0.0)) throw std::invalid_argument("loss_scale: k2 must be positive");
    const auto c = codata();
    LossScale out;
    out.lifetime = 1.0 / (est.k2_scale * density);
    out.b_equivalent = c.hbar * rf_omega / (std::fabs(g_j) * c.mu_b);
    out.released_energy = c.hbar * rf_omega;
    return out;
}

TwoAtomModel::TwoAtomModel(double g_j, double mass, const FieldConfig& field, Options opt)
    : TwoAtomModel(g_j, mass, field, std::vector<Channel>{}, opt) {}

TwoAtomModel::TwoAtomModel(double g_j, double mass, const FieldConfig& field,
                           std::vector<Channel> basis, Options opt)
    : g_j_(g_j), mass_(mass), field_(field) {
    if (g_j == 0.0) throw std::invalid_argument("two-atom model: Lande factor must be nonzero");
    if (!(mass > 0.0)) throw std::invalid_argument("two-atom model: mass must be positive");
    const auto c = codata();
    n_max_ = opt.n_max > 0 ? opt.n_max
                           : std::max(8, static_cast<int>(std::ceil(3.0 * field.ratio())));
    k2_ref_ = opt.k2_ref;
    reference_density_ = opt.reference_density;
    r_min_ = opt.r_min > 0.0 ? opt.r_min : units::meters_from_bohr(200.0);

    if (basis.empty()) {
        // closed default basis: n ascending, l=0 then l=2, ml ascending, ms ascending
        for (int n = -n_max_; n <= n_max_; ++n)
            for (int l : {0, 2})
                for (int ml = -l; ml <= l; ++ml)
                    for (int ms = -1; ms <= 1; ++ms) basis_.push_back({1, ms, l, ml, n});
    } else {
        basis_ = std::move(basis);
        for (const Channel& ch : basis_) {
            ch.validate();
            if (std::abs(ch.n) > n_max_)
                throw std::invalid_argument("channel photon index exceeds n_max");
        }
        check_closure();
    }
    const int dim = static_cast<int>(basis_.size());

    const double b_static = field.static_field();
    const double sinx = b_static > 0.0 ? field.b_perp / b_static : 1.0;
    const double cosx = b_static > 0.0 ? field.b_par / b_static : 0.0;
    const double hw = c.hbar * field.rf_omega;
    const double half_rabi = 0.5 * c.hbar * field.rabi_omega;

    h_static_ = Eigen::MatrixXd::Zero(dim, dim);
    cent_coef_.resize(dim);
    dip_coef_ = Eigen::MatrixXd::Zero(dim, dim);
    const double dip_k = c.mu0_over_4pi * (g_j * c.mu_b) * (g_j * c.mu_b);

    for (int i = 0; i < dim; ++i) {
        const Channel& a = basis_[i];
        h_static_(i, i) = a.ms * g_j * c.mu_b * b_static + a.n * hw;
        cent_coef_(i) = a.l * (a.l + 1.0) * c.hbar * c.hbar / (2.0 * reduced_mass());
        for (int k = 0; k < dim; ++k) {
            const Channel& b = basis_[k];
            if (a.n == b.n)
                dip_coef_(i, k) = dip_k * pair_element_angular(a, b);
            if (std::abs(a.n - b.n) == 1 && a.s == b.s && a.l == b.l && a.ml == b.ml) {
                // rf drive on the total spin: (rabi/2)(sin_chi Sx + cos_chi Sz)
                if (a.ms == b.ms)
                    h_static_(i, k) += half_rabi * cosx * a.ms;
                else if (std::abs(a.ms - b.ms) == 1)
                    h_static_(i, k) += half_rabi * sinx * 0.5 *
                                       std::sqrt(a.s * (a.s + 1.0) - a.ms * b.ms);
            }
        }
    }
}

void TwoAtomModel::check_closure() const {
    auto contains = [&](const Channel& ch) {
        for (const Channel& b : basis_)
            if (b == ch) return true;
        return false;
    };
    for (const Channel& a : basis_) {
        // rf images
        for (int dn : {-1, 1}) {
            if (std::abs(a.n + dn) > n_max_) continue;
            for (int dms : {-1, 0, 1}) {
                if (dms == 0 && field_.b_par == 0.0) continue;
                if (std::abs(a.ms + dms) > a.s) continue;
                Channel img{a.s, a.ms + dms, a.l, a.ml, a.n + dn};
                if (!contains(img))
                    throw std::invalid_argument("channel basis not closed under the rf coupling");
            }
        }
        // dipolar images
        for (const int lp : {0, 2})
            for (int mlp = -lp; mlp <= lp; ++mlp)
                for (int msp = -a.s; msp <= a.s; ++msp) {
                    Channel img{a.s, msp, lp, mlp, a.n};
                    if (contains(img)) continue;
                    if (pair_element_angular(a, img) != 0.0)
                        throw std::invalid_argument(
                            "channel basis not closed under the dipolar coupling");
                }
    }
}

Eigen::MatrixXd TwoAtomModel::hamiltonian(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("hamiltonian: separation must be positive");
    Eigen::MatrixXd h = h_static_;
    h += (cent_coef_ / (r * r)).asDiagonal();
    h += (dip_scale_ / (r * r * r)) * dip_coef_;
    return h;
}

Eigen::VectorXd TwoAtomModel::asymptotic_energies(double r) const {
    return h_static_.diagonal() + cent_coef_ / (r * r);
}

namespace {

int channel_index(const Channel& ch, int n_max) {
    return (ch.n + n_max) * kPerBlock + block_offset(ch.l, ch.ml) + (ch.ms + 1);
}

}  // namespace

// Spin+rf dressing, identical for every (l, ml): block eigenvectors over
// (ms, n), labelled by adiabatic continuation from rabi = 0.
struct TwoAtomModel::Dressed {
    Eigen::MatrixXd w;    // bare index x dressed index (block-diagonal in l, ml)
    Eigen::VectorXd eps;  // dressed asymptotic energy per dressed index [J]
};

TwoAtomModel::Dressed TwoAtomModel::dress() const {
    const auto c = codata();
    const int nblocks = 2 * n_max_ + 1;
    const int bdim = 3 * nblocks;
    const double b_static = field_.static_field();
    const double sinx = b_static > 0.0 ? field_.b_perp / b_static : 1.0;
    const double cosx = b_static > 0.0 ? field_.b_par / b_static : 0.0;
    const double hw = c.hbar * field_.rf_omega;

    auto block = [&](double rabi) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(bdim, bdim);
        for (int nb = 0; nb < nblocks; ++nb) {
            for (int ims = 0; ims < 3; ++ims) {
                const int ms = ims - 1;
                const int i = nb * 3 + ims;
                h(i, i) = ms * g_j_ * c.mu_b * b_static + (nb - n_max_) * hw;
                if (nb + 1 < nblocks) {
                    const int iup = (nb + 1) * 3 + ims;
                    h(i, iup) += 0.5 * c.hbar * rabi * cosx * ms;
                    h(iup, i) += 0.5 * c.hbar * rabi * cosx * ms;
                    for (int msp = -1; msp <= 1; ++msp) {
                        if (std::abs(msp - ms) != 1) continue;
                        const int kup = (nb + 1) * 3 + (msp + 1);
                        const double el =
                            0.5 * c.hbar * rabi * sinx * 0.5 * std::sqrt(2.0 - ms * msp);
                        h(i, kup) += el;
                        h(kup, i) += el;
                    }
                }
            }
        }
        return h;
    };

    // continuation from rabi = 0 where dressed = bare
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Identity(bdim, bdim);
    Eigen::VectorXd eps = block(0.0).diagonal();
    const double target = field_.rabi_omega;
    const int nsteps = std::max(10, static_cast<int>(std::ceil(field_.ratio() / 0.05)));
    for (int s = 1; s <= nsteps && target > 0.0; ++s) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block(target * s / nsteps));
        Eigen::MatrixXd next(bdim, bdim);
        Eigen::VectorXd eps_next(bdim);
        std::vector<char> used(bdim, 0);
        for (int b = 0; b < bdim; ++b) {
            int best = -1;
            double best_ov = -1.0;
            for (int k = 0; k < bdim; ++k) {
                if (used[k]) continue;
                const double ov = std::fabs(vecs.col(b).dot(es.eigenvectors().col(k)));
                if (ov > best_ov) {
                    best_ov = ov;
                    best = k;
                }
            }
            if (best_ov < 0.5)
                throw std::runtime_error("two-atom dressing: continuation lost a branch");
            used[best] = 1;
            next.col(b) = es.eigenvectors().col(best) *
                          (vecs.col(b).dot(es.eigenvectors().col(best)) >= 0 ? 1.0 : -1.0);
            eps_next(b) = es.eigenvalues()(best);
        }
        vecs = next;
        eps = eps_next;
    }

    // embed the block into the full channel layout for every (l, ml)
    const int dim = static_cast<int>(basis_.size());
    Dressed d;
    d.w = Eigen::MatrixXd::Zero(dim, dim);
    d.eps.resize(dim);
    for (int l : {0, 2}) {
        for (int ml = -l; ml <= l; ++ml) {
            for (int nb = 0; nb < nblocks; ++nb)
                for (int ims = 0; ims < 3; ++ims) {
                    const int dressed = nb * kPerBlock + block_offset(l, ml) + ims;
                    const int ib = nb * 3 + ims;
                    d.eps(dressed) = eps(ib);
                    for (int nb2 = 0; nb2 < nblocks; ++nb2)
                        for (int ims2 = 0; ims2 < 3; ++ims2)
                            d.w(nb2 * kPerBlock + block_offset(l, ml) + ims2, dressed) =
                                vecs(nb2 * 3 + ims2, ib);
                }
        }
    }
    return d;
}

PotentialCurve TwoAtomModel::adiabatic_potentials(const std::vector<double>& r_grid) const {
    if (r_grid.size() < 2) throw std::invalid_argument("adiabatic_potentials: need >= 2 points");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] < r_grid[i - 1]))
            throw std::invalid_argument("adiabatic_potentials: grid must descend");
    if (r_grid.back() < r_min_)
        throw std::invalid_argument("adiabatic_potentials: grid extends below the r_min cutoff");

    const int dim = static_cast<int>(basis_.size());
    const int npts = static_cast<int>(r_grid.size());
    PotentialCurve out;
    out.r_grid = r_grid;
    out.energies.resize(dim, npts);

    Eigen::MatrixXd prev_vecs;
    for (int i = 0; i < npts; ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(r_grid[i]));
        out.energies.col(i) = es.eigenvalues();
        if (i == 0) {
            // label each sorted curve by its dressed channel at the outer edge
            const Dressed d = dress();
            std::vector<char> used(dim, 0);
            out.labels.resize(dim);
            for (int k = 0; k < dim; ++k) {
                int best = -1;
                double best_ov = -1.0;
                for (int c = 0; c < dim; ++c) {
                    if (used[c]) continue;
                    const double ov = std::fabs(d.w.col(c).dot(es.eigenvectors().col(k)));
                    if (ov > best_ov) {
                        best_ov = ov;
                        best = c;
                    }
                }
                used[best] = 1;
                const int nb = best / kPerBlock, rem = best % kPerBlock;
                Channel ch;
                ch.s = 1;
                ch.n = nb - n_max_;
                if (rem < 3) {
                    ch.l = 0;
                    ch.ml = 0;
                    ch.ms = rem - 1;
                } else {
                    ch.l = 2;
                    ch.ml = (rem - 3) / 3 - 2;
                    ch.ms = (rem - 3) % 3 - 1;
                }
                out.labels[k] = ch;
            }
        } else {
            for (int k = 0; k < dim; ++k)
                if (std::fabs(prev_vecs.col(k).dot(es.eigenvectors().col(k))) < 0.7) {
                    out.ambiguous.push_back(i);
                    break;
                }
        }
        prev_vecs = es.eigenvectors();
    }
    return out;
}

// Splitting of the avoided crossing between the curves carrying the dressed
// entrance character, within the channel subset `keep` (indices into the
// dressed layout). The gap at radius r is the distance between the two
// eigenvalues whose eigenvectors hold the most entrance weight; the minimum
// over r is located by a coarse scan plus golden-section refinement.
std::pair<double, double> TwoAtomModel::min_entrance_gap(const Dressed& d, int entrance,
                                                         const std::vector<int>& keep,
                                                         double r_star, double half_width) const {
    const int kn = static_cast<int>(keep.size());
    const int in = entrance;
    int in_k = -1;
    for (int k = 0; k < kn; ++k)
        if (keep[k] == in) in_k = k;
    if (in_k < 0) throw std::logic_error("entrance channel missing from subset");

    const Eigen::MatrixXd dip_dressed = d.w.transpose() * dip_coef_ * d.w;
    Eigen::MatrixXd dip_k(kn, kn);
    for (int a = 0; a < kn; ++a)
        for (int b = 0; b < kn; ++b) dip_k(a, b) = dip_dressed(keep[a], keep[b]);

    auto gap_at = [&](double r) {
        Eigen::MatrixXd h = (dip_scale_ / (r * r * r)) * dip_k;
        for (int a = 0; a < kn; ++a) h(a, a) += d.eps(keep[a]) + cent_coef_(keep[a]) / (r * r);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        int first = -1, second = -1;
        double w1 = -1.0, w2 = -1.0;
        for (int k = 0; k < kn; ++k) {
            const double wk = es.eigenvectors()(in_k, k) * es.eigenvectors()(in_k, k);
            if (wk > w1) {
                w2 = w1;
                second = first;
                w1 = wk;
                first = k;
            } else if (wk > w2) {
                w2 = wk;
                second = k;
            }
        }
        return std::fabs(es.eigenvalues()(first) - es.eigenvalues()(second));
    };

    const double lo0 = (1.0 - half_width) * r_star, hi0 = (1.0 + half_width) * r_star;
    const int nscan = 41;
    double best_r = r_star, best_gap = std::numeric_limits<double>::max();
    for (int i = 0; i < nscan; ++i) {
        const double r = lo0 + (hi0 - lo0) * i / (nscan - 1.0);
        const double g = gap_at(r);
        if (g < best_gap) {
            best_gap = g;
            best_r = r;
        }
    }
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_r - (hi0 - lo0) / (nscan - 1.0);
    double hi = best_r + (hi0 - lo0) / (nscan - 1.0);
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = gap_at(x1), f2 = gap_at(x2);
    while ((hi - lo) > 1e-7 * r_star) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = gap_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = gap_at(x2);
        }
    }
    const double r_min = 0.5 * (lo + hi);
    return {std::min(gap_at(r_min), best_gap), r_min};
}

LossEstimate TwoAtomModel::crossing_gap() const {
    const auto c = codata();
    if (field_.rabi_omega <= 0.0)
        throw std::runtime_error(
            "crossing_gap: no avoided crossing between manifolds without rf coupling");

    const Dressed d = dress();
    // the atoms occupy the lowest dressed branch of the s-wave n = 0 manifold
    int in = channel_index({1, -1, 0, 0, 0}, n_max_);
    for (int ms = 0; ms <= 1; ++ms) {
        const int cand = channel_index({1, ms, 0, 0, 0}, n_max_);
        if (d.eps(cand) < d.eps(in)) in = cand;
    }
    const double hw = c.hbar * field_.rf_omega;
    auto diag_at = [&](int k, double r) { return d.eps(k) + cent_coef_(k) / (r * r); };

    // The dressed entrance curve crosses the l' = 2 clusters of the adjacent
    // lower manifold (one per dressed spin branch, each ml-degenerate) at
    // slightly different radii. The loss bottleneck is the dominant one.
    LossEstimate est;
    est.k2_scale = k2_ref_;
    est.lifetime_scale = 1.0 / (k2_ref_ * reference_density_);
    std::vector<double> r_stars;
    for (int msp = -1; msp <= 1; ++msp) {
        const int ex = channel_index({1, msp, 2, -1, -1}, n_max_);
        const double deps = d.eps(in) - d.eps(ex);
        r_stars.push_back(deps > 0.0 ? std::sqrt(cent_coef_(ex) / deps) : 0.0);
    }
    for (std::size_t ic = 0; ic < r_stars.size(); ++ic) {
        const double r_star = r_stars[ic];
        if (r_star <= 0.0 || r_star < r_min_) continue;
        // keep the scan window clear of the neighbouring cluster crossings
        double sep = 0.015;
        for (std::size_t jc = 0; jc < r_stars.size(); ++jc)
            if (jc != ic && r_stars[jc] > 0.0)
                sep = std::min(sep, 0.45 * std::fabs(r_stars[jc] - r_star) / r_star);
        const double half_width = std::max(0.003, sep);
        const double e_cross = diag_at(in, r_star);
        std::vector<int> keep;
        for (int k = 0; k < static_cast<int>(basis_.size()); ++k)
            if (std::fabs(diag_at(k, r_star) - e_cross) < 4.0 * hw) keep.push_back(k);
        const auto [gap, r_gap] = min_entrance_gap(d, in, keep, r_star, half_width);
        if (gap > est.gap) {
            est.gap = gap;
            est.r_c = r_gap;
        }
    }
    if (est.gap < 1e-9 * hw)
        throw std::runtime_error("crossing_gap: avoided crossing not resolved (gap ~ 0)");
    return est;
}

double TwoAtomModel::reduced_two_channel_gap() const {
    if (field_.rabi_omega <= 0.0)
        throw std::runtime_error(
            "reduced_two_channel_gap: no avoided crossing without rf coupling");
    const Dressed d = dress();
    const int in = channel_index({1, -1, 0, 0, 0}, n_max_);
    const int ex = channel_index({1, -1, 2, -1, -1}, n_max_);
    const double deps = d.eps(in) - d.eps(ex);
    if (!(deps > 0.0)) throw std::runtime_error("reduced_two_channel_gap: no crossing");
    const double r_star = std::sqrt(cent_coef_(ex) / deps);
    return min_entrance_gap(d, in, {in, ex}, r_star, 0.015).first;
}

double TwoAtomModel::two_level_gap() const {
    const Dressed d = dress();
    const int in = channel_index({1, -1, 0, 0, 0}, n_max_);
    const int ex = channel_index({1, -1, 2, -1, -1}, n_max_);
    const Eigen::VectorXd din = d.w.col(in), dex = d.w.col(ex);
    const double w_in_in = din.dot(dip_coef_ * din);
    const double w_ex_ex = dex.dot(dip_coef_ * dex);
    const double w_in_ex = din.dot(dip_coef_ * dex);

    auto detune = [&](double r) {
        const double r3 = r * r * r;
        return (d.eps(in) + dip_scale_ * w_in_in / r3) -
               (d.eps(ex) + cent_coef_(ex) / (r * r) + dip_scale_ * w_ex_ex / r3);
    };
    const double deps = d.eps(in) - d.eps(ex);
    if (!(deps > 0.0)) throw std::runtime_error("two_level_gap: dressed channels do not cross");
    double lo = 0.5 * std::sqrt(cent_coef_(ex) / deps);
    double hi = 2.0 * std::sqrt(cent_coef_(ex) / deps);
    if (detune(lo) * detune(hi) > 0.0)
        throw std::runtime_error("two_level_gap: crossing not bracketed");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (detune(lo) * detune(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
        if ((hi - lo) < 1e-12 * hi) break;
    }
    const double r0 = 0.5 * (lo + hi);
    return 2.0 * std::fabs(dip_scale_ * w_in_ex / (r0 * r0 * r0));
}

}  // namespace rfdress
