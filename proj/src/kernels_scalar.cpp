#include "rfdress/bessel.hpp"
#include "rfdress/kernels.hpp"

namespace rfdress::kernels {

namespace {

void j0_batch_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::j0_scalar(x[i]);
}

void tridiag_rhs_scalar(std::size_t dim, std::size_t ncols, const double* diag,
                        const double* offdiag, const complexd* x, complexd* y) {
    for (std::size_t c = 0; c < ncols; ++c) {
        const complexd* xc = x + c * dim;
        complexd* yc = y + c * dim;
        for (std::size_t i = 0; i < dim; ++i) {
            complexd acc = diag[i] * xc[i];
            if (i > 0) acc += offdiag[i - 1] * xc[i - 1];
            if (i + 1 < dim) acc += offdiag[i] * xc[i + 1];
            yc[i] = complexd(acc.imag(), -acc.real());  // multiply by -i
        }
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend backend{"scalar", j0_batch_scalar, tridiag_rhs_scalar};
    return backend;
}

}  // namespace rfdress::kernels
