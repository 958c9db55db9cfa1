#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rfdress/field.hpp"

namespace rfdress {

// Two-atom collision channel: total spin S and projection mS along the static
// field, partial wave (l, ml), Floquet photon index n.
struct Channel {
    int s = 1;
    int ms = 0;
    int l = 0;
    int ml = 0;
    int n = 0;

    void validate() const;
    bool operator==(const Channel&) const = default;
};

struct PotentialCurve {
    std::vector<double> r_grid;       // [m], descending from the asymptotic region
    std::vector<Channel> labels;      // asymptotic channel of each adiabatic curve
    Eigen::MatrixXd energies;         // curve x grid point [J], rows sorted ascending
    std::vector<int> ambiguous;       // grid indices where eigenvector connection < 0.7
};

struct LossEstimate {
    double gap = 0.0;             // Delta E_g [J]
    double r_c = 0.0;             // radius of the avoided crossing [m]
    double k2_scale = 0.0;        // reference two-body loss coefficient [m^3/s]
    double lifetime_scale = 0.0;  // 1 / (k2 * reference density) [s]
};

struct LossScale {
    double lifetime = 0.0;         // [s]
    double b_equivalent = 0.0;     // hbar w / (g_J mu_B) [T]
    double released_energy = 0.0;  // hbar w per pair [J]
};

// Radius where the l_out centrifugal barrier equals the photon energy:
// l'(l'+1) hbar^2 / (2 mu R^2) = hbar w.
double crossing_radius(double rf_omega, int l_out, double reduced_mass);

// Bare magnetic dipole-dipole matrix element
//   <a| (mu0/4pi) (g_J mu_B)^2 / R^3 [S1.S2 - 3 (S1.r)(S2.r)] |b>,
// diagonal in the photon index and conserving mS + ml.
double dipole_dipole_element(const Channel& a, const Channel& b, double r, double g_j);

LossScale loss_scale(const LossEstimate& est, double density, double rf_omega, double g_j);

struct TwoAtomOptions {
    int n_max = 0;                    // 0: max(8, ceil(3 rabi/w))
    double k2_ref = 1e-18;            // m^3/s
    double reference_density = 1e20;  // m^-3
    double r_min = 0.0;               // curve cutoff [m]; 0: 200 a0
};

// Coupled-channel model of two rf-dressed spin-1/2 atoms with dipole-dipole
// interaction: channel basis S = 1, l in {0, 2}, photon index |n| <= n_max.
class TwoAtomModel {
  public:
    using Options = TwoAtomOptions;

    TwoAtomModel(double g_j, double mass, const FieldConfig& field,
                 Options opt = TwoAtomOptions());
    // Custom channel list; throws if it is not closed under the rf and
    // dipolar couplings (photon indices truncated at |n| <= n_max).
    TwoAtomModel(double g_j, double mass, const FieldConfig& field, std::vector<Channel> basis,
                 Options opt);

    const std::vector<Channel>& basis() const { return basis_; }
    int n_max() const { return n_max_; }
    double reduced_mass() const { return mass_ / 2.0; }

    // Requires the channel list to be closed under the rf and dipolar couplings.
    Eigen::MatrixXd hamiltonian(double r) const;
    // Same without the dipolar block: the asymptote of each bare channel.
    Eigen::VectorXd asymptotic_energies(double r) const;

    PotentialCurve adiabatic_potentials(const std::vector<double>& r_grid) const;

    // Minimum splitting of the avoided crossing between the dressed entrance
    // channel (1,-1, l=0, n=0) and the dressed (1,-1, l'=2, ml'=-1, n=-1) exit.
    LossEstimate crossing_gap() const;

    // Gap of the model restricted to the two dressed channels above, found
    // with the same search machinery as crossing_gap.
    double reduced_two_channel_gap() const;

    // Closed-form counterpart of the two-channel cut: 2 |coupling| at the
    // point where the dressed diagonal energies cross.
    double two_level_gap() const;

    // Scales the dipolar coupling strength by `factor` (proportionality tests).
    void set_dipolar_scale(double factor) { dip_scale_ = factor; }

  private:
    struct Dressed;
    Dressed dress() const;
    void check_closure() const;
    std::pair<double, double> min_entrance_gap(const Dressed& d, int entrance,
                                               const std::vector<int>& keep, double r_star,
                                               double half_width) const;

    double g_j_, mass_;
    FieldConfig field_;
    int n_max_;
    double k2_ref_, reference_density_, r_min_;
    double dip_scale_ = 1.0;
    std::vector<Channel> basis_;
    Eigen::MatrixXd h_static_;   // Zeeman + photon + rf [J]
    Eigen::VectorXd cent_coef_;  // centrifugal coefficient [J m^2]
    Eigen::MatrixXd dip_coef_;   // dipolar coefficient [J m^3]
};

}  // namespace rfdress
