#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rfdress/bessel.hpp"
#include "rfdress/dressed.hpp"
#include "rfdress/units.hpp"

using namespace rfdress;

namespace {

const double kW300 = units::angular_from_hz(300e3);

SpinSystem chromium() { return SpinSystem(3.0, 2.0, 52.0 * codata().amu); }

double bperp_for_larmor(double f_hz, double g_j = 2.0) {
    return units::two_pi * f_hz * codata().hbar / (g_j * codata().mu_b);
}

}  // namespace

TEST_SUITE("dressed") {

TEST_CASE("dressed Lande factor") {
    CHECK(lande_factor_dressed(2.0, 0.0, kW300) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::fabs(lande_factor_dressed(2.0, 2.4048 * kW300, kW300)) < 1e-5);
    CHECK(lande_factor_dressed(2.0, kW300, kW300) ==
          doctest::Approx(1.530395373).epsilon(1e-4));
    CHECK_THROWS_AS(lande_factor_dressed(2.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("analytic dressed energies") {
    const SpinSystem spin = chromium();
    const auto c = codata();

    SUBCASE("perpendicular field absent: independent of rf power") {
        FieldConfig f1(units::tesla_from_milligauss(20.0), 0.0, kW300, 0.0);
        FieldConfig f2(units::tesla_from_milligauss(20.0), 0.0, kW300, 2.0 * kW300);
        const auto s1 = dressed_energies_analytic(spin, f1);
        const auto s2 = dressed_energies_analytic(spin, f2);
        for (int k = 0; k < spin.dim(); ++k)
            CHECK(s1.energies[k] == doctest::Approx(s2.energies[k]).epsilon(1e-14));
    }

    SUBCASE("degeneracy at the first zero of J0") {
        const double bperp = bperp_for_larmor(85e3);
        FieldConfig f(0.0, bperp, kW300, j0_first_zero() * kW300);
        const auto s = dressed_energies_analytic(spin, f);
        for (double e : s.energies) CHECK(std::fabs(e) < 1e-12 * c.mu_b * 2.0 * bperp);
    }

    SUBCASE("stretched state at 85 kHz Larmor sits at 255 kHz") {
        FieldConfig f(0.0, bperp_for_larmor(85e3), kW300, 0.0);
        const auto s = dressed_energies_analytic(spin, f);
        CHECK(s.energies.back() / c.h == doctest::Approx(255e3).epsilon(1e-9));
    }

    SUBCASE("linear in m with E_0 = 0") {
        FieldConfig f(units::tesla_from_milligauss(7.0), bperp_for_larmor(85e3), kW300,
                      1.3 * kW300);
        const auto s = dressed_energies_analytic(spin, f);
        CHECK(s.energies[3] == 0.0);
        const double e1 = s.energies[4];
        for (int k = 0; k < spin.dim(); ++k)
            CHECK(s.energies[k] == doctest::Approx(spin.m_value(k) * e1).epsilon(1e-10));
    }
}

TEST_CASE("one-period propagator is unitary") {
    const SpinSystem spin = chromium();
    for (double ratio : {0.0, 0.7, 1.9, 3.1}) {
        FieldConfig f(units::tesla_from_milligauss(3.0), bperp_for_larmor(40e3), kW300,
                      ratio * kW300);
        const Eigen::MatrixXcd u = one_period_propagator(spin, f, 1e-11);
        const Eigen::MatrixXcd defect =
            u.adjoint() * u - Eigen::MatrixXcd::Identity(spin.dim(), spin.dim());
        CHECK(defect.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("static limit reproduces the Zeeman ladder") {
    const SpinSystem spin = chromium();
    FieldConfig f(0.0, bperp_for_larmor(85e3), kW300, 0.0);
    const auto s = floquet_quasienergies(spin, f, 1, 1e-11);
    for (int k = 0; k < spin.dim(); ++k)
        CHECK(s.energies[k] / codata().h ==
              doctest::Approx(spin.m_value(k) * 85e3).epsilon(1e-9));
}

TEST_CASE("quasi-energy splitting tracks gJ J0 in the strong-field regime") {
    const SpinSystem spin = chromium();
    // Larmor = 8.4 kHz at 300 kHz rf
    const double bperp = units::tesla_from_milligauss(3.0);
    FieldConfig base(0.0, bperp, kW300, 0.0);
    std::vector<double> grid;
    for (int i = 0; i <= 11; ++i) grid.push_back(2.2 * i / 11.0);
    const auto sweep = effective_gj_sweep(spin, base, grid, 1e-11);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = 2.0 * bessel_j0(grid[i]);
        CHECK(std::fabs(sweep[i].value - expected) < 0.02 * 2.0);
    }
}

TEST_CASE("parallel-field-only splitting is constant in rf power") {
    const SpinSystem spin = chromium();
    const double bpar = units::tesla_from_milligauss(20.0);
    std::vector<double> split;
    for (double ratio : {0.0, 0.8, 1.6}) {
        FieldConfig f(bpar, 0.0, kW300, ratio * kW300);
        const auto s = floquet_quasienergies(spin, f, 1, 1e-11);
        split.push_back(s.energies[4] - s.energies[3]);
    }
    CHECK(std::fabs(split[1] - split[0]) < 0.01 * std::fabs(split[0]));
    CHECK(std::fabs(split[2] - split[0]) < 0.01 * std::fabs(split[0]));
}

TEST_CASE("numeric effective g factor") {
    const SpinSystem spin = chromium();
    FieldConfig base(0.0, units::tesla_from_milligauss(3.0), kW300, 0.0);

    SUBCASE("rf off leaves g unchanged") {
        const auto g = effective_gj_numeric(spin, base, 1e-11);
        CHECK_FALSE(g.degenerate);
        CHECK(g.value == doctest::Approx(2.0).epsilon(2e-3));
    }
    SUBCASE("renormalization at ratio 2 and sign change at ratio 3") {
        FieldConfig f2(0.0, base.b_perp, kW300, 2.0 * kW300);
        const auto g2 = effective_gj_numeric(spin, f2, 1e-11);
        CHECK(std::fabs(g2.value - 0.447782) < 0.02 * 2.0);
        FieldConfig f3(0.0, base.b_perp, kW300, 3.0 * kW300);
        const auto g3 = effective_gj_numeric(spin, f3, 1e-11);
        CHECK(std::fabs(g3.value - (-0.520104)) < 0.02 * 2.0);
        CHECK(g3.value < 0.0);
    }
    SUBCASE("degeneracy guard inside the root window") {
        FieldConfig f(0.0, base.b_perp, kW300, (j0_first_zero() + 5e-4) * kW300);
        const auto g = effective_gj_numeric(spin, f, 1e-11);
        CHECK(g.degenerate);
        CHECK(g.value == 0.0);
    }
    SUBCASE("parallel field is rejected") {
        FieldConfig f(1e-7, base.b_perp, kW300, kW300);
        CHECK_THROWS_AS(effective_gj_numeric(spin, f, 1e-11), std::invalid_argument);
    }
}

TEST_CASE("degeneracy point location") {
    CHECK(find_degeneracy_point(kW300) / units::two_pi ==
          doctest::Approx(721.4477e3).epsilon(1e-5));
    const double w500 = units::angular_from_hz(500e3);
    CHECK(find_degeneracy_point(w500) / units::two_pi ==
          doctest::Approx(1202.4128e3).epsilon(1e-5));
    CHECK(find_degeneracy_point(kW300) / kW300 ==
          doctest::Approx(find_degeneracy_point(w500) / w500).epsilon(1e-10));
    CHECK_THROWS_AS(find_degeneracy_point(0.0), std::invalid_argument);
}

TEST_CASE("propagator route is even in the rf amplitude") {
    auto quasi_args = [](double rabi) {
        const Eigen::MatrixXcd u =
            one_period_propagator(7, 0.0, units::angular_from_hz(15e3), rabi, kW300, 1e-11);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
        std::vector<double> args;
        for (int k = 0; k < 7; ++k) args.push_back(std::arg(es.eigenvalues()(k)));
        std::sort(args.begin(), args.end());
        return args;
    };
    const auto plus = quasi_args(1.3 * kW300);
    const auto minus = quasi_args(-1.3 * kW300);
    for (int k = 0; k < 7; ++k) CHECK(std::fabs(plus[k] - minus[k]) < 1e-9);
}

TEST_CASE("extended Floquet matrix agrees with the propagator route") {
    const SpinSystem spin = chromium();
    FieldConfig f(0.0, units::tesla_from_milligauss(3.0), kW300, 1.5 * kW300);
    const auto prop = floquet_quasienergies(spin, f, 1, 1e-12);
    const auto ext = extended_floquet_modes(spin, f);
    const double hw = codata().hbar * kW300;
    for (int k = 0; k < spin.dim(); ++k) {
        const double diff = prop.energies[k] - ext.quasienergies[k];
        const double wrapped = diff - hw * std::round(diff / hw);
        CHECK(std::fabs(wrapped) < 1e-6 * hw);
    }
}

TEST_CASE("halving the tolerance moves quasi-energies less than the error estimate") {
    const SpinSystem spin = chromium();
    FieldConfig f(0.0, units::tesla_from_milligauss(3.0), kW300, 1.2 * kW300);
    FloquetContinuation c1(spin, f, 1e-9), c2(spin, f, 5e-10);
    const auto& m1 = c1.advance_to(1.2);
    const auto& m2 = c2.advance_to(1.2);
    for (int k = 0; k < spin.dim(); ++k)
        CHECK(std::fabs(m1.quasienergies[k] - m2.quasienergies[k]) <= m1.err_estimate);
}

TEST_CASE("longer propagation refines the quasi-energies") {
    const SpinSystem spin = chromium();
    FieldConfig f(0.0, units::tesla_from_milligauss(3.0), kW300, 0.9 * kW300);
    const auto one = floquet_quasienergies(spin, f, 1, 1e-11);
    const auto four = floquet_quasienergies(spin, f, 4, 1e-11);
    for (int k = 0; k < spin.dim(); ++k)
        CHECK(std::fabs(one.energies[k] - four.energies[k]) < 1e-7 * codata().hbar * kW300);
}

}  // TEST_SUITE
