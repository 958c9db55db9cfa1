#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "rfdress/spin.hpp"
#include "rfdress/units.hpp"

using namespace rfdress;

namespace {
double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_SUITE("spin") {

TEST_CASE("spin-1/2 operators are the Pauli matrices over two") {
    const SpinOperators ops = build_spin_operators(0.5);
    CHECK(ops.jz(0, 0).real() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(ops.jz(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ops.jx(0, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ops.jx(1, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(ops.jy(0, 1) - std::complex<double>(0.0, 0.5)) < 1e-15);
}

TEST_CASE("spin-1 ladder entries") {
    const SpinOperators ops = build_spin_operators(1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(ops.jz(0, 0).real() == doctest::Approx(-1.0));
    CHECK(ops.jz(1, 1).real() == doctest::Approx(0.0));
    CHECK(ops.jz(2, 2).real() == doctest::Approx(1.0));
    CHECK(ops.jx(0, 1).real() == doctest::Approx(inv_sqrt2).epsilon(1e-15));
    CHECK(ops.jx(1, 2).real() == doctest::Approx(inv_sqrt2).epsilon(1e-15));
}

TEST_CASE("spin-3 commutator and hermiticity") {
    const SpinOperators ops = build_spin_operators(3.0);
    REQUIRE(ops.jx.rows() == 7);
    const std::complex<double> im(0.0, 1.0);
    CHECK(max_abs(ops.jx * ops.jy - ops.jy * ops.jx - im * ops.jz) < 1e-12);
    CHECK(max_abs(ops.jx - ops.jx.adjoint()) < 1e-14);
    CHECK(max_abs(ops.jy - ops.jy.adjoint()) < 1e-14);
    CHECK(max_abs(ops.jz - ops.jz.adjoint()) < 1e-14);
}

TEST_CASE("all operators are traceless for j up to 9/2") {
    for (double j = 0.5; j <= 4.5; j += 0.5) {
        const SpinOperators ops = build_spin_operators(j);
        CHECK(std::abs(ops.jx.trace()) < 1e-13);
        CHECK(std::abs(ops.jy.trace()) < 1e-13);
        CHECK(std::abs(ops.jz.trace()) < 1e-13);
    }
}

TEST_CASE("invalid spin arguments are rejected") {
    CHECK_THROWS_AS(build_spin_operators(0.3), std::invalid_argument);
    CHECK_THROWS_AS(build_spin_operators(0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_spin_operators(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpinSystem(3.0, 2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpinSystem(3.0, 0.0, 1e-25), std::invalid_argument);
    CHECK_THROWS_AS(SpinSystem(2.7, 2.0, 1e-25), std::invalid_argument);
}

TEST_CASE("larmor frequency anchors") {
    CHECK(larmor_angular_frequency(0.0, 2.0) == 0.0);
    // 1 G at g = 2 precesses at 2.80 MHz
    const double f = larmor_angular_frequency(units::tesla_from_gauss(1.0), 2.0) / units::two_pi;
    CHECK(f == doctest::Approx(2.799249e6).epsilon(1e-5));
    // 85 kHz corresponds to 30.4 mG
    const double b = units::two_pi * 85e3 * codata().hbar / (2.0 * codata().mu_b);
    CHECK(units::milligauss_from_tesla(b) == doctest::Approx(30.365).epsilon(1e-4));
    CHECK(larmor_angular_frequency(b, 2.0) / units::two_pi == doctest::Approx(85e3).epsilon(1e-12));
    CHECK_THROWS_AS(larmor_angular_frequency(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("spin system basis bookkeeping") {
    const SpinSystem spin(3.0, 2.0, 52.0 * codata().amu);
    CHECK(spin.dim() == 7);
    CHECK(spin.m_value(0) == doctest::Approx(-3.0));
    CHECK(spin.m_value(6) == doctest::Approx(3.0));
}

}  // TEST_SUITE
