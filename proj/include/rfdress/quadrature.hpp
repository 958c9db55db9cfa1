#pragma once

#include <cmath>
#include <stdexcept>

namespace rfdress {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated error estimate
    long evals = 0;
};

namespace quad_detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double res_g = fc * wg[3];
    double res_k = fc * wgk[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * xgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        res_k += wgk[i] * fsum;
        if (i % 2 == 1) res_g += wg[i / 2] * fsum;
    }
    value = res_k * half;
    err = std::fabs((res_k - res_g) * half);
}

template <class F>
void adapt(const F& f, double a, double b, double tol, int depth, QuadResult& out) {
    double v, e;
    gk15(f, a, b, v, e);
    out.evals += 15;
    if (e <= tol || depth >= 48) {
        out.value += v;
        out.error += e;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, out);
    adapt(f, mid, b, 0.5 * tol, depth + 1, out);
}

}  // namespace quad_detail

// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rtol = 1e-12,
                              double atol = 1e-14) {
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: bad interval");
    QuadResult coarse{};
    double v, e;
    quad_detail::gk15(f, a, b, v, e);
    coarse.evals = 15;
    const double tol = std::max(atol, rtol * std::fabs(v));
    if (e <= tol) {
        coarse.value = v;
        coarse.error = e;
        return coarse;
    }
    QuadResult out{};
    const double mid = 0.5 * (a + b);
    quad_detail::adapt(f, a, mid, 0.5 * tol, 1, out);
    quad_detail::adapt(f, mid, b, 0.5 * tol, 1, out);
    out.evals += 15;
    return out;
}

}  // namespace rfdress
