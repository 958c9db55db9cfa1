#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "rfdress/bessel.hpp"
#include "rfdress/kernels.hpp"

using namespace rfdress;
using kernels::complexd;

namespace {

// reference tridiagonal apply, written independently of the kernels
void rhs_reference(std::size_t dim, std::size_t ncols, const double* d, const double* e,
                   const complexd* x, complexd* y) {
    const complexd minus_i(0.0, -1.0);
    for (std::size_t c = 0; c < ncols; ++c)
        for (std::size_t i = 0; i < dim; ++i) {
            complexd acc = d[i] * x[c * dim + i];
            if (i > 0) acc += e[i - 1] * x[c * dim + i - 1];
            if (i + 1 < dim) acc += e[i] * x[c * dim + i + 1];
            y[c * dim + i] = minus_i * acc;
        }
}

struct BackendGuard {
    ~BackendGuard() { kernels::select_backend("auto"); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("backend selection") {
    BackendGuard guard;
    kernels::select_backend("scalar");
    CHECK(std::string(kernels::active_backend().name) == "scalar");
    if (kernels::avx2_available()) {
        kernels::select_backend("avx2");
        CHECK(std::string(kernels::active_backend().name) == "avx2");
    } else {
        CHECK_THROWS_AS(kernels::select_backend("avx2"), std::runtime_error);
    }
    CHECK_THROWS_AS(kernels::select_backend("sse9"), std::invalid_argument);
    kernels::select_backend("auto");
}

TEST_CASE("scalar tridiagonal kernel matches the reference") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + rng() % 11;
        const std::size_t ncols = 1 + rng() % 8;
        std::vector<double> d(dim), e(dim - 1);
        std::vector<complexd> x(dim * ncols), y(dim * ncols), ref(dim * ncols);
        for (auto& v : d) v = u(rng);
        for (auto& v : e) v = u(rng);
        for (auto& v : x) v = complexd(u(rng), u(rng));
        kernels::scalar_backend().tridiag_rhs(dim, ncols, d.data(), e.data(), x.data(), y.data());
        rhs_reference(dim, ncols, d.data(), e.data(), x.data(), ref.data());
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-14);
    }
}

TEST_CASE("avx2 variants agree with the scalar reference") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 not available on this machine; skipping equivalence checks");
        return;
    }
    BackendGuard guard;
    kernels::select_backend("avx2");
    const kernels::Backend& simd = kernels::active_backend();
    const kernels::Backend& ref = kernels::scalar_backend();

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    SUBCASE("j0 batches across both evaluation branches") {
        std::uniform_real_distribution<double> xr(-55.0, 55.0);
        std::vector<double> x(513);
        for (auto& v : x) v = xr(rng);
        x[0] = 0.0;
        x[1] = 7.9999;
        x[2] = 8.0001;  // exercise mixed chunks
        std::vector<double> a(x.size()), b(x.size());
        simd.j0_batch(x.data(), a.data(), x.size());
        ref.j0_batch(x.data(), b.data(), x.size());
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 4e-15);
    }

    SUBCASE("schrodinger right-hand side over random shapes") {
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t dim = 2 + rng() % 12;
            const std::size_t ncols = 1 + rng() % (dim + 1);
            std::vector<double> d(dim), e(dim - 1);
            std::vector<complexd> x(dim * ncols), ys(dim * ncols), yv(dim * ncols);
            for (auto& v : d) v = u(rng);
            for (auto& v : e) v = u(rng);
            for (auto& v : x) v = complexd(u(rng), u(rng));
            simd.tridiag_rhs(dim, ncols, d.data(), e.data(), x.data(), yv.data());
            ref.tridiag_rhs(dim, ncols, d.data(), e.data(), x.data(), ys.data());
            for (std::size_t i = 0; i < yv.size(); ++i) CHECK(std::abs(yv[i] - ys[i]) < 1e-14);
        }
    }
}

TEST_CASE("public batch api routes through the active backend") {
    std::vector<double> x{0.0, 1.0, 2.404825557695773, 10.0, 31.4};
    std::vector<double> out(x.size());
    bessel_j0_batch(x, out);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(out[i] == doctest::Approx(bessel_j0(x[i])).epsilon(1e-13));
}

}  // TEST_SUITE
