#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rfdress {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.0;   // 0: unlimited
    double h_init = 0.0;  // 0: choose automatically
    long max_steps = 200000000;
};

namespace ode_detail {

inline double elem_abs(double v) { return std::fabs(v); }
inline double elem_abs(const std::complex<double>& v) { return std::abs(v); }

// max_i |e_i| / (atol + rtol * max(|y0_i|, |y1_i|)) over the flattened state
template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double rtol, double atol) {
    double r = 0.0;
    const auto* pe = err.data();
    const auto* p0 = y0.data();
    const auto* p1 = y1.data();
    const std::ptrdiff_t n = err.size();
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double scale = atol + rtol * std::max(elem_abs(p0[i]), elem_abs(p1[i]));
        double e = elem_abs(pe[i]) / scale;
        if (e > r) r = e;
    }
    return r;
}

}  // namespace ode_detail

// Embedded Fehlberg 7(8) pair (13 stages, rational tableau), advanced with
// the order-8 combination. Rhs must provide operator()(t, y, dydt).
template <class State, class Rhs>
class Rkf78 {
  public:
    Rkf78(Rhs rhs, OdeOptions opt) : rhs_(std::move(rhs)), opt_(opt) {}

    struct Stats {
        long accepted = 0;
        long rejected = 0;
    };

    // Advances y in place from t0 to t1 (t1 >= t0).
    Stats integrate(State& y, double t0, double t1) {
        return integrate_impl(y, t0, t1, nullptr);
    }

    // Same, but invokes visit(t, y) at every time in `times` (ascending,
    // within [t0, t1]). Steps land exactly on the sample times.
    template <class Visit>
    Stats integrate_sampled(State& y, double t0, double t1, const std::vector<double>& times,
                            Visit visit) {
        Stats total{};
        double t = t0;
        for (double ts : times) {
            if (ts < t - 1e-15 || ts > t1 * (1 + 1e-15) + 1e-300)
                throw std::invalid_argument("sample times must be ascending within [t0, t1]");
            if (ts > t) {
                Stats s = integrate_impl(y, t, ts, nullptr);
                total.accepted += s.accepted;
                total.rejected += s.rejected;
                t = ts;
            }
            visit(t, y);
        }
        if (t < t1) {
            Stats s = integrate_impl(y, t, t1, nullptr);
            total.accepted += s.accepted;
            total.rejected += s.rejected;
        }
        return total;
    }

    // Carry the adaptive step size across calls (useful for segmented ramps).
    double suggested_step() const { return h_; }
    void set_suggested_step(double h) { h_ = h; }

  private:
    Stats integrate_impl(State& y, double t0, double t1, void*) {
        Stats stats{};
        if (t1 <= t0) return stats;
        double t = t0;
        double span = t1 - t0;
        if (h_ <= 0.0) h_ = opt_.h_init > 0.0 ? opt_.h_init : span * 1e-3;
        if (opt_.h_max > 0.0 && h_ > opt_.h_max) h_ = opt_.h_max;

        State ynew, err;
        while (t < t1) {
            double h = h_;
            if (opt_.h_max > 0.0 && h > opt_.h_max) h = opt_.h_max;
            bool last = false;
            if (t + h >= t1) {
                h = t1 - t;
                last = true;
            }
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(t), 1.0))
                throw std::runtime_error("ode: step size underflow");

            step(t, y, h, ynew, err);
            double enorm = ode_detail::scaled_error(err, y, ynew, opt_.rtol, opt_.atol);
            if (enorm <= 1.0) {
                t = last ? t1 : t + h;
                y.swap(ynew);
                ++stats.accepted;
                double factor = enorm > 0.0 ? 0.9 * std::pow(enorm, -0.125) : 4.0;
                h_ = h * std::min(4.0, std::max(0.2, factor));
            } else {
                ++stats.rejected;
                h_ = h * std::max(0.1, 0.9 * std::pow(enorm, -0.125));
            }
            if (stats.accepted + stats.rejected > opt_.max_steps)
                throw std::runtime_error("ode: step budget exceeded");
        }
        return stats;
    }

    void step(double t, const State& y, double h, State& ynew, State& err) {
        // Fehlberg 7(8) tableau (NASA TR R-287); order-8 weights b8.
        static constexpr double c[13] = {0.0,       2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12,
                                         0.5,       5.0 / 6,  1.0 / 6, 2.0 / 3, 1.0 / 3,
                                         1.0,       0.0,      1.0};
        static constexpr double a1[] = {2.0 / 27};
        static constexpr double a2[] = {1.0 / 36, 1.0 / 12};
        static constexpr double a3[] = {1.0 / 24, 0.0, 1.0 / 8};
        static constexpr double a4[] = {5.0 / 12, 0.0, -25.0 / 16, 25.0 / 16};
        static constexpr double a5[] = {1.0 / 20, 0.0, 0.0, 0.25, 0.2};
        static constexpr double a6[] = {-25.0 / 108, 0.0, 0.0, 125.0 / 108, -65.0 / 27, 125.0 / 54};
        static constexpr double a7[] = {31.0 / 300, 0.0, 0.0, 0.0, 61.0 / 225, -2.0 / 9, 13.0 / 900};
        static constexpr double a8[] = {2.0, 0.0, 0.0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0};
        static constexpr double a9[] = {-91.0 / 108, 0.0,        0.0,       23.0 / 108, -976.0 / 135,
                                        311.0 / 54,  -19.0 / 60, 17.0 / 6,  -1.0 / 12};
        static constexpr double a10[] = {2383.0 / 4100, 0.0,           0.0,         -341.0 / 164,
                                         4496.0 / 1025, -301.0 / 82,   2133.0 / 4100, 45.0 / 82,
                                         45.0 / 164,    18.0 / 41};
        static constexpr double a11[] = {3.0 / 205, 0.0, 0.0, 0.0,       0.0, -6.0 / 41,
                                         -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41, 0.0};
        static constexpr double a12[] = {-1777.0 / 4100, 0.0,          0.0,          -341.0 / 164,
                                         4496.0 / 1025,  -289.0 / 82,  2193.0 / 4100, 51.0 / 82,
                                         33.0 / 164,     12.0 / 41,    0.0,           1.0};
        static constexpr const double* a[12] = {a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12};

        if (k_[0].size() != y.size())
            for (auto& ki : k_) ki = y;  // adopt shape
        rhs_(t, y, k_[0]);
        for (int s = 1; s < 13; ++s) {
            tmp_ = y;
            for (int j = 0; j < s; ++j)
                if (a[s - 1][j] != 0.0) tmp_ += (h * a[s - 1][j]) * k_[j];
            rhs_(t + c[s] * h, tmp_, k_[s]);
        }
        // order-8 solution
        ynew = y;
        ynew += (h * 34.0 / 105) * k_[5];
        ynew += (h * 9.0 / 35) * (k_[6] + k_[7]);
        ynew += (h * 9.0 / 280) * (k_[8] + k_[9]);
        ynew += (h * 41.0 / 840) * (k_[11] + k_[12]);
        // order-7/8 defect
        err = (h * 41.0 / 840) * (k_[0] + k_[10] - k_[11] - k_[12]);
    }

    Rhs rhs_;
    OdeOptions opt_;
    double h_ = 0.0;
    std::array<State, 13> k_{};
    State tmp_{};
};

template <class State, class Rhs>
Rkf78<State, Rhs> make_rkf78(Rhs rhs, OdeOptions opt = {}) {
    return Rkf78<State, Rhs>(std::move(rhs), opt);
}

}  // namespace rfdress
