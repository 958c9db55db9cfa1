#include "rfdress/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rfdress {

namespace {

void check_half_integer_spin(double j) {
    if (!std::isfinite(j) || j < 0.5)
        throw std::invalid_argument("spin quantum number must be >= 1/2, got " + std::to_string(j));
    double twice = 2.0 * j;
    if (std::abs(twice - std::round(twice)) > 1e-9)
        throw std::invalid_argument("spin quantum number must be half-integer, got " + std::to_string(j));
}

}  // namespace

SpinSystem::SpinSystem(double j_, double g_j_, double mass_) : j(j_), g_j(g_j_), mass(mass_) {
    check_half_integer_spin(j);
    if (!(mass > 0.0)) throw std::invalid_argument("atom mass must be positive");
    if (g_j == 0.0 || !std::isfinite(g_j)) throw std::invalid_argument("Lande factor must be nonzero");
}

SpinOperators build_spin_operators(double j) {
    check_half_integer_spin(j);
    const int n = static_cast<int>(2.0 * j + 1.5);

    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n, n);  // raising operator
    Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double m = -j + k;
        jz(k, k) = m;
        if (k + 1 < n) jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    Eigen::MatrixXcd jm = jp.adjoint();

    SpinOperators ops;
    ops.jx = 0.5 * (jp + jm);
    ops.jy = std::complex<double>(0.0, -0.5) * (jp - jm);
    ops.jz = jz;
    return ops;
}

double larmor_angular_frequency(double b_tesla, double g_j) {
    if (!(b_tesla >= 0.0))
        throw std::invalid_argument("magnetic field must be non-negative");
    const auto c = codata();
    return g_j * c.mu_b * b_tesla / c.hbar;
}

}  // namespace rfdress
