#pragma once

#include <Eigen/Dense>

#include "rfdress/constants.hpp"

namespace rfdress {

// An atomic spin: quantum number j (half-integer), Lande factor and mass.
struct SpinSystem {
    double j;
    double g_j;
    double mass;  // kg

    SpinSystem(double j_, double g_j_, double mass_);

    int dim() const { return static_cast<int>(2.0 * j + 1.5); }
    // m quantum number of basis index k = 0 .. dim()-1, ordered -j .. +j
    double m_value(int k) const { return -j + k; }
};

// Angular momentum matrices in the |j m> basis, in units of hbar.
struct SpinOperators {
    Eigen::MatrixXcd jx, jy, jz;
};

SpinOperators build_spin_operators(double j);

// g_j mu_B B / hbar
double larmor_angular_frequency(double b_tesla, double g_j);

}  // namespace rfdress
