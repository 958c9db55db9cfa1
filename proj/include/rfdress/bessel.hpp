#pragma once

#include <cstddef>
#include <span>

namespace rfdress {

// Zero-order Bessel function of the first kind. Power series for |x| <= 8,
// normalized downward recurrence above. Absolute accuracy ~1e-13 for |x| <= 60.
double bessel_j0(double x);

// Elementwise J0 over a grid; routed through the active kernel backend.
void bessel_j0_batch(std::span<const double> x, std::span<double> out);

namespace detail {
// Unchecked scalar evaluator shared by the kernel backends.
double j0_scalar(double x) noexcept;
}  // namespace detail

}  // namespace rfdress
