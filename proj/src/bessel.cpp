#include "rfdress/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "rfdress/kernels.hpp"

namespace rfdress {

namespace detail {

double j0_scalar(double x) noexcept {
    const double ax = std::fabs(x);
    if (ax <= 8.0) {
        // sum_k (-x^2/4)^k / (k!)^2
        const double q = 0.25 * ax * ax;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::fabs(term) < 1e-18) break;
        }
        return sum;
    }
    // Miller downward recurrence, normalized with J0 + 2*sum_{k>=1} J_{2k} = 1.
    int n = static_cast<int>(1.15 * ax) + 40;
    n += n & 1;  // even start
    double bp = 0.0, bc = 1e-280, even_sum = 0.0;
    for (int k = n; k >= 1; --k) {
        double bm = (2.0 * k / ax) * bc - bp;
        bp = bc;
        bc = bm;
        if (((k - 1) & 1) == 0 && k - 1 >= 2) even_sum += bc;
        if (std::fabs(bc) > 1e250) {
            bc *= 1e-250;
            bp *= 1e-250;
            even_sum *= 1e-250;
        }
    }
    return bc / (bc + 2.0 * even_sum);
}

}  // namespace detail

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j0: non-finite argument");
    return detail::j0_scalar(x);
}

void bessel_j0_batch(std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) throw std::invalid_argument("bessel_j0_batch: size mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("bessel_j0_batch: non-finite argument");
    kernels::active_backend().j0_batch(x.data(), out.data(), x.size());
}

}  // namespace rfdress
