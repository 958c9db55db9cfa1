#include "rfdress/angular.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rfdress/spin.hpp"

namespace rfdress {

namespace {

constexpr int kMaxFact = 40;

double factorial(int n) {
    static const auto table = [] {
        std::array<double, kMaxFact + 1> f{};
        f[0] = 1.0;
        for (int i = 1; i <= kMaxFact; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    if (n < 0 || n > kMaxFact) throw std::invalid_argument("factorial argument out of range");
    return table[n];
}

bool is_int(double x) { return std::fabs(x - std::round(x)) < 1e-9; }

int as_int(double x) { return static_cast<int>(std::round(x)); }

}  // namespace

double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    for (double v : {2 * j1, 2 * j2, 2 * j3, 2 * m1, 2 * m2, 2 * m3})
        if (!is_int(v)) throw std::invalid_argument("wigner_3j: arguments must be half-integer");
    if (!is_int(j1 - m1) || !is_int(j2 - m2) || !is_int(j3 - m3))
        throw std::invalid_argument("wigner_3j: m must match j parity");
    if (std::fabs(m1) > j1 || std::fabs(m2) > j2 || std::fabs(m3) > j3) return 0.0;
    if (!is_int(m1 + m2 + m3) || std::fabs(m1 + m2 + m3) > 1e-9) return 0.0;
    if (j3 < std::fabs(j1 - j2) - 1e-9 || j3 > j1 + j2 + 1e-9) return 0.0;
    if (!is_int(j1 + j2 + j3)) return 0.0;

    const int a1 = as_int(j1 + j2 - j3), a2 = as_int(j1 - j2 + j3), a3 = as_int(-j1 + j2 + j3);
    const double delta = std::sqrt(factorial(a1) * factorial(a2) * factorial(a3) /
                                   factorial(as_int(j1 + j2 + j3) + 1));
    const double pref = std::sqrt(factorial(as_int(j1 + m1)) * factorial(as_int(j1 - m1)) *
                                  factorial(as_int(j2 + m2)) * factorial(as_int(j2 - m2)) *
                                  factorial(as_int(j3 + m3)) * factorial(as_int(j3 - m3)));

    const int kmin = std::max({0, as_int(j2 - j3 - m1), as_int(j1 - j3 + m2)});
    const int kmax = std::min({a1, as_int(j1 - m1), as_int(j2 + m2)});
    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double den = factorial(k) * factorial(a1 - k) * factorial(as_int(j1 - m1) - k) *
                           factorial(as_int(j2 + m2) - k) * factorial(as_int(j3 - j2 + m1) + k) *
                           factorial(as_int(j3 - j1 - m2) + k);
        sum += ((k & 1) ? -1.0 : 1.0) / den;
    }
    const double phase = (as_int(j1 - j2 - m3) & 1) ? -1.0 : 1.0;
    return phase * delta * pref * sum;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    const double phase = (as_int(-j1 + j2 - M) & 1) ? -1.0 : 1.0;
    return phase * std::sqrt(2.0 * J + 1.0) * wigner_3j(j1, j2, J, m1, m2, -M);
}

double gaunt_c(int l, int m, int k, int q, int lp, int mp) {
    const double phase = (m & 1) ? -1.0 : 1.0;
    return phase * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) *
           wigner_3j(l, k, lp, 0, 0, 0) * wigner_3j(l, k, lp, -m, q, mp);
}

double pair_spin_tensor(int s_bra, int ms_bra, int q, int s_ket, int ms_ket) {
    if (s_bra < 0 || s_bra > 1 || s_ket < 0 || s_ket > 1)
        throw std::invalid_argument("pair_spin_tensor: total spin must be 0 or 1");
    if (std::abs(ms_bra) > s_bra || std::abs(ms_ket) > s_ket)
        throw std::invalid_argument("pair_spin_tensor: |mS| must not exceed S");
    if (q < -2 || q > 2) throw std::invalid_argument("pair_spin_tensor: rank-2 component");

    // Built once: 4x4 product-basis tensor components transformed to the
    // coupled basis {|0 0>, |1 -1>, |1 0>, |1 1>}.
    static const auto table = [] {
        using Mat = Eigen::Matrix4cd;
        const SpinOperators half = build_spin_operators(0.5);
        const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
        auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
            Mat out;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
            return out;
        };
        // spherical components: S^{+1} = -(Sx + i Sy)/sqrt2, S^0 = Sz, S^{-1} = (Sx - i Sy)/sqrt2
        const std::complex<double> im(0.0, 1.0);
        std::array<Eigen::Matrix2cd, 3> sph;  // index q+1
        sph[0] = (half.jx - im * half.jy).topLeftCorner<2, 2>() / std::sqrt(2.0);
        sph[1] = half.jz.topLeftCorner<2, 2>();
        sph[2] = -(half.jx + im * half.jy).topLeftCorner<2, 2>() / std::sqrt(2.0);

        // coupled-basis columns: |S M> = sum CG |m1 m2>; product basis order
        // (m1, m2) = (+,+), (+,-), (-,+), (-,-) matches kron(e_{m1}, e_{m2})
        // with spin operators ordered m = -1/2, +1/2 -> index 0 = -1/2.
        Mat u = Mat::Zero();
        const double smv[2] = {-0.5, 0.5};
        const std::array<std::pair<int, int>, 4> coupled = {{{0, 0}, {1, -1}, {1, 0}, {1, 1}}};
        for (int col = 0; col < 4; ++col) {
            const auto [S, M] = coupled[col];
            for (int i1 = 0; i1 < 2; ++i1)
                for (int i2 = 0; i2 < 2; ++i2)
                    u(2 * i1 + i2, col) =
                        clebsch_gordan(0.5, smv[i1], 0.5, smv[i2], S, M);
        }

        std::array<Mat, 5> t{};  // [S1 x S2]^2_q in the coupled basis, q = -2..2
        for (int q2 = -2; q2 <= 2; ++q2) {
            Mat prod = Mat::Zero();
            for (int q1 = -1; q1 <= 1; ++q1) {
                const int qq2 = q2 - q1;
                if (qq2 < -1 || qq2 > 1) continue;
                const double cg = clebsch_gordan(1, q1, 1, qq2, 2, q2);
                if (cg == 0.0) continue;
                prod += cg * kron(sph[q1 + 1], sph[qq2 + 1]);
            }
            t[q2 + 2] = u.adjoint() * prod * u;
        }
        return t;
    }();

    auto index = [](int s, int ms) { return s == 0 ? 0 : 2 + ms; };
    const std::complex<double> v = table[q + 2](index(s_bra, ms_bra), index(s_ket, ms_ket));
    return v.real();  // elements are real in this basis
}

}  // namespace rfdress
