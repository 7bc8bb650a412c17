// NEON variants (aarch64).  Same arithmetic order as the scalar reference.
#include "qftca/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace qftca {
namespace {

void second_diff(const double* f, std::size_t n, std::size_t off, double inv_h2,
                 double* out) {
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t ih2 = vdupq_n_f64(inv_h2);
    std::size_t k = off;
    if (n >= 2 * off) {
        const std::size_t end = n - off;
        for (; k + 2 <= end; k += 2) {
            float64x2_t fp = vld1q_f64(f + k + off);
            float64x2_t fc = vld1q_f64(f + k);
            float64x2_t fm = vld1q_f64(f + k - off);
            float64x2_t t = vsubq_f64(fp, vmulq_f64(two, fc));
            t = vaddq_f64(t, fm);
            vst1q_f64(out + k, vmulq_f64(t, ih2));
        }
        for (; k < end; ++k)
            out[k] = ((f[k + off] - 2.0 * f[k]) + f[k - off]) * inv_h2;
    }
}

void first_diff(const double* f, std::size_t n, std::size_t off, double inv_2h,
                double* out) {
    const float64x2_t i2h = vdupq_n_f64(inv_2h);
    std::size_t k = off;
    if (n >= 2 * off) {
        const std::size_t end = n - off;
        for (; k + 2 <= end; k += 2) {
            float64x2_t fp = vld1q_f64(f + k + off);
            float64x2_t fm = vld1q_f64(f + k - off);
            vst1q_f64(out + k, vmulq_f64(vsubq_f64(fp, fm), i2h));
        }
        for (; k < end; ++k) out[k] = (f[k + off] - f[k - off]) * inv_2h;
    }
}

void lin3(const double* d2, const double* cur, std::size_t n, double a, double b,
          double c_re, double* out) {
    const float64x2_t av = vdupq_n_f64(a);
    const float64x2_t bv = vdupq_n_f64(b);
    const double cpair[2] = {c_re, 0.0};
    const float64x2_t cv = vld1q_f64(cpair);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t t = vaddq_f64(vmulq_f64(av, vld1q_f64(d2 + k)),
                                  vmulq_f64(bv, vld1q_f64(cur + k)));
        vst1q_f64(out + k, vaddq_f64(t, cv));
    }
    for (; k < n; ++k) {
        double c = (k % 2 == 0) ? c_re : 0.0;
        out[k] = (a * d2[k] + b * cur[k]) + c;
    }
}

void wave_combine(const double* r, const double* cur, const double* prev,
                  std::size_t n, double dt2, double* next) {
    const float64x2_t dt2v = vdupq_n_f64(dt2);
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t t1 = vmulq_f64(vld1q_f64(r + k), dt2v);
        float64x2_t t2 = vsubq_f64(vmulq_f64(two, vld1q_f64(cur + k)),
                                   vld1q_f64(prev + k));
        vst1q_f64(next + k, vaddq_f64(t1, t2));
    }
    for (; k < n; ++k) next[k] = r[k] * dt2 + (2.0 * cur[k] - prev[k]);
}

void schro_rhs(const double* d2, const double* psi, const double* V,
               std::size_t cells, std::complex<double> c1, std::complex<double> c2,
               double* out) {
    const double c1r = c1.real(), c1i = c1.imag();
    const double c2r = c2.real(), c2i = c2.imag();
    const float64x2_t c1rv = vdupq_n_f64(c1r);
    const double c1ipair[2] = {-c1i, c1i};
    const float64x2_t c1iv = vld1q_f64(c1ipair);
    const double sgn[2] = {-1.0, 1.0};
    const float64x2_t sgnv = vld1q_f64(sgn);
    for (std::size_t j = 0; j < cells; ++j) {
        float64x2_t z = vld1q_f64(d2 + 2 * j);
        float64x2_t zr = vextq_f64(z, z, 1);
        float64x2_t w1 = vaddq_f64(vmulq_f64(c1rv, z), vmulq_f64(c1iv, zr));
        float64x2_t vv = vdupq_n_f64(V[j]);
        float64x2_t trv = vmulq_f64(vdupq_n_f64(c2r), vv);
        float64x2_t tiv = vmulq_f64(vmulq_f64(vdupq_n_f64(c2i), vv), sgnv);
        float64x2_t p = vld1q_f64(psi + 2 * j);
        float64x2_t pr = vextq_f64(p, p, 1);
        float64x2_t w2 = vaddq_f64(vmulq_f64(trv, p), vmulq_f64(tiv, pr));
        vst1q_f64(out + 2 * j, vaddq_f64(w1, w2));
    }
}

void axpy(const double* x, double a, const double* y, std::size_t n, double* out) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2)
        vst1q_f64(out + k, vaddq_f64(vld1q_f64(y + k),
                                     vmulq_f64(av, vld1q_f64(x + k))));
    for (; k < n; ++k) out[k] = y[k] + a * x[k];
}

}  // namespace

const KernelSet* neon_kernels() {
    static const KernelSet set = {"neon",       second_diff, first_diff, lin3,
                                  wave_combine, schro_rhs,   axpy};
    return &set;
}

}  // namespace qftca

#else

namespace qftca {
const KernelSet* neon_kernels() { return nullptr; }
}  // namespace qftca

#endif
