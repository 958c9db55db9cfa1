// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatcher.
#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "rfdress/bessel.hpp"
#include "rfdress/kernels.hpp"

namespace rfdress::kernels {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Power series, all four lanes with |x| <= 8.
inline __m256d j0_series4(__m256d ax) {
    const __m256d q = _mm256_mul_pd(_mm256_set1_pd(0.25), _mm256_mul_pd(ax, ax));
    __m256d term = _mm256_set1_pd(1.0);
    __m256d sum = _mm256_set1_pd(1.0);
    const __m256d tiny = _mm256_set1_pd(1e-18);
    for (int k = 1; k <= 40; ++k) {
        const __m256d scale = _mm256_set1_pd(-1.0 / (static_cast<double>(k) * k));
        term = _mm256_mul_pd(term, _mm256_mul_pd(q, scale));
        sum = _mm256_add_pd(sum, term);
        const __m256d small = _mm256_cmp_pd(abs_pd(term), tiny, _CMP_LT_OQ);
        if (_mm256_movemask_pd(small) == 0xf) break;
    }
    return sum;
}

// Normalized downward recurrence, all four lanes with |x| > 8.
inline __m256d j0_miller4(__m256d ax) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, ax);
    double axmax = lanes[0];
    for (int i = 1; i < 4; ++i) axmax = lanes[i] > axmax ? lanes[i] : axmax;
    int n = static_cast<int>(1.15 * axmax) + 40;
    n += n & 1;

    const __m256d inv_ax = _mm256_div_pd(_mm256_set1_pd(2.0), ax);  // 2/x
    const __m256d big = _mm256_set1_pd(1e250);
    const __m256d shrink = _mm256_set1_pd(1e-250);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d bp = _mm256_setzero_pd();
    __m256d bc = _mm256_set1_pd(1e-280);
    __m256d even_sum = _mm256_setzero_pd();
    for (int k = n; k >= 1; --k) {
        const __m256d bm =
            _mm256_fmsub_pd(_mm256_mul_pd(_mm256_set1_pd(static_cast<double>(k)), inv_ax), bc, bp);
        bp = bc;
        bc = bm;
        if (((k - 1) & 1) == 0 && k - 1 >= 2) even_sum = _mm256_add_pd(even_sum, bc);
        const __m256d over = _mm256_cmp_pd(abs_pd(bc), big, _CMP_GT_OQ);
        if (_mm256_movemask_pd(over)) {
            const __m256d scale = _mm256_blendv_pd(one, shrink, over);
            bc = _mm256_mul_pd(bc, scale);
            bp = _mm256_mul_pd(bp, scale);
            even_sum = _mm256_mul_pd(even_sum, scale);
        }
    }
    const __m256d norm = _mm256_fmadd_pd(_mm256_set1_pd(2.0), even_sum, bc);
    return _mm256_div_pd(bc, norm);
}

void j0_batch_avx2(const double* x, double* out, std::size_t n) {
    const __m256d eight = _mm256_set1_pd(8.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ax = abs_pd(_mm256_loadu_pd(x + i));
        const int small = _mm256_movemask_pd(_mm256_cmp_pd(ax, eight, _CMP_LE_OQ));
        if (small == 0xf) {
            _mm256_storeu_pd(out + i, j0_series4(ax));
        } else if (small == 0) {
            _mm256_storeu_pd(out + i, j0_miller4(ax));
        } else {
            for (std::size_t k = i; k < i + 4; ++k) out[k] = detail::j0_scalar(x[k]);
        }
    }
    for (; i < n; ++i) out[i] = detail::j0_scalar(x[i]);
}

// res = -i * acc for interleaved (re, im) pairs.
inline __m256d neg_i_times(__m256d acc) {
    const __m256d swapped = _mm256_permute_pd(acc, 0b0101);
    return _mm256_xor_pd(swapped, _mm256_setr_pd(0.0, -0.0, 0.0, -0.0));
}

void tridiag_rhs_avx2(std::size_t dim, std::size_t ncols, const double* diag,
                      const double* offdiag, const complexd* x, complexd* y) {
    if (dim == 1) {
        for (std::size_t c = 0; c < ncols; ++c) {
            const complexd acc = diag[0] * x[c];
            y[c] = complexd(acc.imag(), -acc.real());
        }
        return;
    }
    for (std::size_t c = 0; c < ncols; ++c) {
        const double* px = reinterpret_cast<const double*>(x + c * dim);
        double* py = reinterpret_cast<double*>(y + c * dim);

        {  // first row: no lower neighbor
            const complexd x0(px[0], px[1]), x1(px[2], px[3]);
            const complexd acc = diag[0] * x0 + offdiag[0] * x1;
            py[0] = acc.imag();
            py[1] = -acc.real();
        }
        std::size_t i = 1;
        for (; i + 1 <= dim - 2; i += 2) {  // interior pairs
            const __m256d dv = _mm256_setr_pd(diag[i], diag[i], diag[i + 1], diag[i + 1]);
            const __m256d el = _mm256_setr_pd(offdiag[i - 1], offdiag[i - 1], offdiag[i], offdiag[i]);
            const __m256d eu = _mm256_setr_pd(offdiag[i], offdiag[i], offdiag[i + 1], offdiag[i + 1]);
            __m256d acc = _mm256_mul_pd(dv, _mm256_loadu_pd(px + 2 * i));
            acc = _mm256_fmadd_pd(el, _mm256_loadu_pd(px + 2 * i - 2), acc);
            acc = _mm256_fmadd_pd(eu, _mm256_loadu_pd(px + 2 * i + 2), acc);
            _mm256_storeu_pd(py + 2 * i, neg_i_times(acc));
        }
        for (; i + 1 < dim; ++i) {  // leftover interior row
            const complexd xm(px[2 * i - 2], px[2 * i - 1]);
            const complexd xc(px[2 * i], px[2 * i + 1]);
            const complexd xp(px[2 * i + 2], px[2 * i + 3]);
            const complexd acc = diag[i] * xc + offdiag[i - 1] * xm + offdiag[i] * xp;
            py[2 * i] = acc.imag();
            py[2 * i + 1] = -acc.real();
        }
        {  // last row: no upper neighbor
            const complexd xm(px[2 * dim - 4], px[2 * dim - 3]);
            const complexd xc(px[2 * dim - 2], px[2 * dim - 1]);
            const complexd acc = diag[dim - 1] * xc + offdiag[dim - 2] * xm;
            py[2 * dim - 2] = acc.imag();
            py[2 * dim - 1] = -acc.real();
        }
    }
}

}  // namespace

namespace detail {
const Backend& avx2_backend() {
    static const Backend backend{"avx2", j0_batch_avx2, tridiag_rhs_avx2};
    return backend;
}
}  // namespace detail

}  // namespace rfdress::kernels
