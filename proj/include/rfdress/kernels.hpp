#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Arithmetic inner-loop kernels. Every operation has a scalar reference
// implementation and, on x86-64 with AVX2+FMA, a vectorized variant picked
// at runtime. The two are equivalence-tested against each other; results
// agree to rounding (FMA contraction changes the last ulps only).
namespace rfdress::kernels {

using complexd = std::complex<double>;

struct Backend {
    const char* name;

    // out[i] = J0(x[i])
    void (*j0_batch)(const double* x, double* out, std::size_t n);

    // Schrodinger right-hand side for a real tridiagonal Hamiltonian applied
    // to ncols complex state columns (column-major, leading dimension dim):
    //   y[i] = -i * (diag[i]*x[i] + offdiag[i-1]*x[i-1] + offdiag[i]*x[i+1])
    void (*tridiag_rhs)(std::size_t dim, std::size_t ncols, const double* diag,
                        const double* offdiag, const complexd* x, complexd* y);
};

const Backend& scalar_backend();
bool avx2_available();

// Selected backend: AVX2 when the CPU supports it, otherwise scalar.
// RFDRESS_KERNELS=scalar|avx2|auto in the environment overrides the choice.
const Backend& active_backend();

// Programmatic override, mainly for tests and reproducible output.
// name: "scalar", "avx2" or "auto". Throws if the backend is unavailable.
void select_backend(const std::string& name);

}  // namespace rfdress::kernels
