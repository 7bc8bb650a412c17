#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "qftca/kernels.hpp"
#include "qftca/rng.hpp"

using namespace qftca;

namespace {

std::vector<double> random_lattice(Generator& g, std::size_t n, double scale = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * (g.next_double() - 0.5);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("kernel registry") {
    CHECK(std::string(scalar_kernels().name) == "scalar");
    auto sets = available_kernel_sets();
    CHECK(sets.size() >= 1);  // scalar is always there
    // selection is sticky and restorable
    select_kernels("scalar");
    CHECK(std::string(active_kernels().name) == "scalar");
    select_kernels("auto");
    CHECK_THROWS(select_kernels("altivec"));
}

// [DERIVED] second_diff is exact (up to rounding) on quadratics: for
// f(x) = a x^2 + b x + c the three-point stencil gives exactly 2a.
TEST_CASE("second difference exact on quadratics") {
    const std::size_t n = 64;
    const double h = 0.37;
    std::vector<double> f(n), out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double x = h * static_cast<double>(k);
        f[k] = 1.25 * x * x - 0.5 * x + 3.0;
    }
    scalar_kernels().second_diff(f.data(), n, 1, 1.0 / (h * h), out.data());
    for (std::size_t k = 1; k + 1 < n; ++k)
        CHECK(out[k] == doctest::Approx(2.5).epsilon(1e-12));
}

// [DERIVED] first_diff is exact on affine data.
TEST_CASE("first difference exact on lines") {
    const std::size_t n = 40;
    const double h = 0.2;
    std::vector<double> f(n), out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) f[k] = -0.75 * (h * k) + 2.0;
    scalar_kernels().first_diff(f.data(), n, 1, 1.0 / (2.0 * h), out.data());
    for (std::size_t k = 1; k + 1 < n; ++k)
        CHECK(out[k] == doctest::Approx(-0.75).epsilon(1e-12));
}

// [DERIVED] every available SIMD variant is bit-identical to the scalar
// reference over random lattices, including sizes that are not multiples of
// the vector width.
TEST_CASE("simd variants match scalar bitwise") {
    Generator g(0xC0FFEE);
    const KernelSet& ref = scalar_kernels();
    for (const KernelSet* ks : available_kernel_sets()) {
        if (ks == &ref) continue;
        CAPTURE(ks->name);
        for (std::size_t n : {8u, 63u, 64u, 65u, 130u, 257u, 1024u}) {
            auto f = random_lattice(g, n);
            auto f2 = random_lattice(g, n);
            auto f3 = random_lattice(g, n);
            std::vector<double> a(n, 0.0), b(n, 0.0);

            for (std::size_t off : {1u, 2u}) {
                if (n < 2 * off + 1) continue;
                std::fill(a.begin(), a.end(), 0.0);
                std::fill(b.begin(), b.end(), 0.0);
                ref.second_diff(f.data(), n, off, 3.7, a.data());
                ks->second_diff(f.data(), n, off, 3.7, b.data());
                CHECK(bitwise_equal(a, b));
                ref.first_diff(f.data(), n, off, 1.9, a.data());
                ks->first_diff(f.data(), n, off, 1.9, b.data());
                CHECK(bitwise_equal(a, b));
            }

            ref.lin3(f.data(), f2.data(), n, 1.1, -0.4, 0.27, a.data());
            ks->lin3(f.data(), f2.data(), n, 1.1, -0.4, 0.27, b.data());
            CHECK(bitwise_equal(a, b));

            ref.wave_combine(f.data(), f2.data(), f3.data(), n, 0.01, a.data());
            ks->wave_combine(f.data(), f2.data(), f3.data(), n, 0.01, b.data());
            CHECK(bitwise_equal(a, b));

            ref.axpy(f.data(), -2.5, f2.data(), n, a.data());
            ks->axpy(f.data(), -2.5, f2.data(), n, b.data());
            CHECK(bitwise_equal(a, b));

            if (n % 2 == 0) {
                std::size_t cells = n / 2;
                auto V = random_lattice(g, cells);
                std::complex<double> c1{0.3, -1.2}, c2{-0.8, 0.45};
                ref.schro_rhs(f.data(), f2.data(), V.data(), cells, c1, c2, a.data());
                ks->schro_rhs(f.data(), f2.data(), V.data(), cells, c1, c2, b.data());
                CHECK(bitwise_equal(a, b));
            }
        }
    }
}

// [DERIVED] schro_rhs against a plain std::complex evaluation.
TEST_CASE("schro_rhs matches complex arithmetic") {
    Generator g(42);
    const std::size_t cells = 37;
    auto d2 = random_lattice(g, 2 * cells);
    auto psi = random_lattice(g, 2 * cells);
    auto V = random_lattice(g, cells);
    std::vector<double> out(2 * cells, 0.0);
    std::complex<double> c1{0.0, 0.5}, c2{0.0, -1.0};
    scalar_kernels().schro_rhs(d2.data(), psi.data(), V.data(), cells, c1, c2,
                               out.data());
    for (std::size_t j = 0; j < cells; ++j) {
        std::complex<double> dj{d2[2 * j], d2[2 * j + 1]};
        std::complex<double> pj{psi[2 * j], psi[2 * j + 1]};
        std::complex<double> want = c1 * dj + (c2 * V[j]) * pj;
        CHECK(out[2 * j] == doctest::Approx(want.real()).epsilon(1e-12));
        CHECK(out[2 * j + 1] == doctest::Approx(want.imag()).epsilon(1e-12));
    }
}
