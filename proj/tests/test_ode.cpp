#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "rfdress/ode.hpp"

using namespace rfdress;

namespace {

// forces (nearly) fixed steps of size h by disabling error control
OdeOptions fixed_step(double h) {
    OdeOptions opt;
    opt.rtol = 1e30;
    opt.atol = 1e30;
    opt.h_init = h;
    opt.h_max = h;
    return opt;
}

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("global convergence order is eight") {
    auto rhs = [](double t, const Eigen::Vector2d& y, Eigen::Vector2d& dy) {
        dy(0) = y(1);
        dy(1) = -y(0) + 0.1 * std::sin(t) * y(1);
    };
    auto solve = [&](double h) {
        auto stepper = make_rkf78<Eigen::Vector2d>(rhs, fixed_step(h));
        Eigen::Vector2d y(1.0, 0.0);
        stepper.integrate(y, 0.0, 4.0);
        return y;
    };
    const Eigen::Vector2d ref = solve(1.0 / 512.0);
    const double e1 = (solve(0.25) - ref).norm();
    const double e2 = (solve(0.125) - ref).norm();
    const double order = std::log2(e1 / e2);
    CHECK(order > 7.0);
    CHECK(order < 9.5);
}

TEST_CASE("adaptive harmonic oscillator over many cycles") {
    const double w = 2.0 * 3.141592653589793;
    auto rhs = [w](double, const Eigen::Vector2d& y, Eigen::Vector2d& dy) {
        dy(0) = y(1);
        dy(1) = -w * w * y(0);
    };
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    auto stepper = make_rkf78<Eigen::Vector2d>(rhs, opt);
    Eigen::Vector2d y(1.0, 0.0);
    stepper.integrate(y, 0.0, 100.0);  // 100 periods
    CHECK(std::fabs(y(0) - 1.0) < 1e-8);
    CHECK(std::fabs(y(1)) < 1e-8 * w);
}

TEST_CASE("complex vector states propagate with unit norm") {
    using State = Eigen::VectorXcd;
    const std::complex<double> im(0.0, 1.0);
    auto rhs = [im](double t, const State& y, State& dy) {
        dy = -im * (1.0 + 0.5 * std::cos(3.0 * t)) * y;
    };
    OdeOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-13;
    auto stepper = make_rkf78<State>(rhs, opt);
    State y = State::Ones(5) / std::sqrt(5.0);
    stepper.integrate(y, 0.0, 50.0);
    CHECK(std::fabs(y.norm() - 1.0) < 1e-10);
}

TEST_CASE("sampled integration hits the sample times") {
    auto rhs = [](double t, const Eigen::Vector2d& y, Eigen::Vector2d& dy) {
        dy(0) = std::cos(t);
        dy(1) = -y(1);
    };
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    auto stepper = make_rkf78<Eigen::Vector2d>(rhs, opt);
    Eigen::Vector2d y(0.0, 1.0);
    std::vector<double> times{0.5, 1.25, 2.0, 3.75};
    std::vector<double> seen;
    stepper.integrate_sampled(y, 0.0, 5.0, times, [&](double t, const Eigen::Vector2d& s) {
        seen.push_back(t);
        CHECK(std::fabs(s(0) - std::sin(t)) < 1e-10);
        CHECK(std::fabs(s(1) - std::exp(-t)) < 1e-10);
    });
    REQUIRE(seen.size() == times.size());
    CHECK(std::fabs(y(0) - std::sin(5.0)) < 1e-10);
}

TEST_CASE("step budget violations are reported") {
    auto rhs = [](double, const Eigen::Vector2d& y, Eigen::Vector2d& dy) { dy = -y; };
    OdeOptions opt;
    opt.max_steps = 10;
    opt.h_max = 1e-6;
    auto stepper = make_rkf78<Eigen::Vector2d>(rhs, opt);
    Eigen::Vector2d y(1.0, 1.0);
    CHECK_THROWS_AS(stepper.integrate(y, 0.0, 1.0), std::runtime_error);
}

}  // TEST_SUITE
