// AVX2 variants of the lattice kernels.  Arithmetic order mirrors the scalar
// reference exactly; the equivalence tests assert bitwise identity.
#include "qftca/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace qftca {
namespace {

void second_diff(const double* f, std::size_t n, std::size_t off, double inv_h2,
                 double* out) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d ih2 = _mm256_set1_pd(inv_h2);
    std::size_t k = off;
    if (n >= 2 * off) {
        const std::size_t end = n - off;
        for (; k + 4 <= end; k += 4) {
            __m256d fp = _mm256_loadu_pd(f + k + off);
            __m256d fc = _mm256_loadu_pd(f + k);
            __m256d fm = _mm256_loadu_pd(f + k - off);
            __m256d t = _mm256_sub_pd(fp, _mm256_mul_pd(two, fc));
            t = _mm256_add_pd(t, fm);
            _mm256_storeu_pd(out + k, _mm256_mul_pd(t, ih2));
        }
        for (; k < end; ++k)
            out[k] = ((f[k + off] - 2.0 * f[k]) + f[k - off]) * inv_h2;
    }
}

void first_diff(const double* f, std::size_t n, std::size_t off, double inv_2h,
                double* out) {
    const __m256d i2h = _mm256_set1_pd(inv_2h);
    std::size_t k = off;
    if (n >= 2 * off) {
        const std::size_t end = n - off;
        for (; k + 4 <= end; k += 4) {
            __m256d fp = _mm256_loadu_pd(f + k + off);
            __m256d fm = _mm256_loadu_pd(f + k - off);
            _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_sub_pd(fp, fm), i2h));
        }
        for (; k < end; ++k) out[k] = (f[k + off] - f[k - off]) * inv_2h;
    }
}

void lin3(const double* d2, const double* cur, std::size_t n, double a, double b,
          double c_re, double* out) {
    const __m256d av = _mm256_set1_pd(a);
    const __m256d bv = _mm256_set1_pd(b);
    const __m256d cv = _mm256_setr_pd(c_re, 0.0, c_re, 0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(av, _mm256_loadu_pd(d2 + k)),
                                  _mm256_mul_pd(bv, _mm256_loadu_pd(cur + k)));
        _mm256_storeu_pd(out + k, _mm256_add_pd(t, cv));
    }
    for (; k < n; ++k) {
        double c = (k % 2 == 0) ? c_re : 0.0;
        out[k] = (a * d2[k] + b * cur[k]) + c;
    }
}

void wave_combine(const double* r, const double* cur, const double* prev,
                  std::size_t n, double dt2, double* next) {
    const __m256d dt2v = _mm256_set1_pd(dt2);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t1 = _mm256_mul_pd(_mm256_loadu_pd(r + k), dt2v);
        __m256d t2 = _mm256_sub_pd(_mm256_mul_pd(two, _mm256_loadu_pd(cur + k)),
                                   _mm256_loadu_pd(prev + k));
        _mm256_storeu_pd(next + k, _mm256_add_pd(t1, t2));
    }
    for (; k < n; ++k) next[k] = r[k] * dt2 + (2.0 * cur[k] - prev[k]);
}

void schro_rhs(const double* d2, const double* psi, const double* V,
               std::size_t cells, std::complex<double> c1, std::complex<double> c2,
               double* out) {
    const double c1r = c1.real(), c1i = c1.imag();
    const double c2r = c2.real(), c2i = c2.imag();
    const __m256d c1rv = _mm256_set1_pd(c1r);
    const __m256d c1iv = _mm256_setr_pd(-c1i, c1i, -c1i, c1i);
    const __m256d c2rv = _mm256_set1_pd(c2r);
    const __m256d c2iv = _mm256_set1_pd(c2i);
    const __m256d negmask = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t j = 0;
    for (; j + 2 <= cells; j += 2) {
        __m256d z = _mm256_loadu_pd(d2 + 2 * j);
        __m256d zr = _mm256_permute_pd(z, 0b0101);
        __m256d w1 = _mm256_add_pd(_mm256_mul_pd(c1rv, z), _mm256_mul_pd(c1iv, zr));
        __m256d vv = _mm256_setr_pd(V[j], V[j], V[j + 1], V[j + 1]);
        __m256d trv = _mm256_mul_pd(c2rv, vv);
        __m256d tiv = _mm256_xor_pd(_mm256_mul_pd(c2iv, vv), negmask);
        __m256d p = _mm256_loadu_pd(psi + 2 * j);
        __m256d pr = _mm256_permute_pd(p, 0b0101);
        __m256d w2 = _mm256_add_pd(_mm256_mul_pd(trv, p), _mm256_mul_pd(tiv, pr));
        _mm256_storeu_pd(out + 2 * j, _mm256_add_pd(w1, w2));
    }
    for (; j < cells; ++j) {
        const double ar = d2[2 * j], ai = d2[2 * j + 1];
        const double pr = psi[2 * j], pi = psi[2 * j + 1];
        const double tr = c2r * V[j], ti = c2i * V[j];
        out[2 * j] = (c1r * ar + (-c1i) * ai) + (tr * pr + (-ti) * pi);
        out[2 * j + 1] = (c1r * ai + c1i * ar) + (tr * pi + ti * pr);
    }
}

void axpy(const double* x, double a, const double* y, std::size_t n, double* out) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(out + k,
                         _mm256_add_pd(_mm256_loadu_pd(y + k),
                                       _mm256_mul_pd(av, _mm256_loadu_pd(x + k))));
    for (; k < n; ++k) out[k] = y[k] + a * x[k];
}

}  // namespace

const KernelSet* avx2_kernels() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const KernelSet set = {"avx2",       second_diff, first_diff, lin3,
                                  wave_combine, schro_rhs,   axpy};
    return &set;
}

}  // namespace qftca

#else

namespace qftca {
const KernelSet* avx2_kernels() { return nullptr; }
}  // namespace qftca

#endif
