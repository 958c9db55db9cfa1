#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rfdress/bessel.hpp"
#include "rfdress/quadrature.hpp"

using namespace rfdress;

namespace {

// Independent oracle: J0(x) = (1/pi) integral_0^pi cos(x sin t) dt.
double j0_oracle(double x) {
    const double pi = 3.141592653589793238462643;
    return integrate_adaptive([x](double t) { return std::cos(x * std::sin(t)); }, 0.0, pi,
                              1e-13, 1e-15)
               .value /
           pi;
}

}  // namespace

TEST_SUITE("bessel") {

TEST_CASE("frozen values from the quadrature oracle") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(1.0) == doctest::Approx(0.765197686557966551).epsilon(1e-12));
    CHECK(std::fabs(bessel_j0(2.404826)) < 1e-6);
    CHECK(bessel_j0(5.0) == doctest::Approx(-0.177596771314338304).epsilon(1e-12));
    CHECK(bessel_j0(12.0) == doctest::Approx(0.047689310796833537).epsilon(1e-11));
    CHECK(bessel_j0(50.0) == doctest::Approx(0.055812327669251815).epsilon(1e-11));
}

TEST_CASE("agrees with the integral representation over [0, 20]") {
    for (int i = 0; i <= 40; ++i) {
        const double x = 0.5 * i;
        CHECK(std::fabs(bessel_j0(x) - j0_oracle(x)) < 1e-10);
    }
}

TEST_CASE("large arguments stay accurate") {
    for (double x : {21.0, 30.0, 37.5, 44.0, 50.0, 60.0})
        CHECK(std::fabs(bessel_j0(x) - j0_oracle(x)) < 1e-12);
}

TEST_CASE("even symmetry is exact") {
    for (double x : {0.3, 1.7, 8.5, 23.0, 49.0})
        CHECK(bessel_j0(x) == bessel_j0(-x));
}

TEST_CASE("non-finite input is rejected") {
    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("batch evaluation matches the scalar path") {
    std::vector<double> x;
    for (int i = 0; i < 259; ++i) x.push_back(-50.0 + 100.0 * i / 258.0);
    std::vector<double> out(x.size());
    bessel_j0_batch(x, out);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::fabs(out[i] - bessel_j0(x[i])) < 4e-15);

    std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
    std::vector<double> sink(2);
    CHECK_THROWS_AS(bessel_j0_batch(bad, sink), std::invalid_argument);
}

}  // TEST_SUITE
