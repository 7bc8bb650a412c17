#include "qftca/kernels.hpp"

namespace qftca {
namespace {

void second_diff(const double* f, std::size_t n, std::size_t off, double inv_h2,
                 double* out) {
    for (std::size_t k = off; k + off < n; ++k)
        out[k] = ((f[k + off] - 2.0 * f[k]) + f[k - off]) * inv_h2;
}

void first_diff(const double* f, std::size_t n, std::size_t off, double inv_2h,
                double* out) {
    for (std::size_t k = off; k + off < n; ++k)
        out[k] = (f[k + off] - f[k - off]) * inv_2h;
}

void lin3(const double* d2, const double* cur, std::size_t n, double a, double b,
          double c_re, double* out) {
    for (std::size_t k = 0; k < n; ++k) {
        double c = (k % 2 == 0) ? c_re : 0.0;
        out[k] = (a * d2[k] + b * cur[k]) + c;
    }
}

void wave_combine(const double* r, const double* cur, const double* prev,
                  std::size_t n, double dt2, double* next) {
    for (std::size_t k = 0; k < n; ++k)
        next[k] = r[k] * dt2 + (2.0 * cur[k] - prev[k]);
}

void schro_rhs(const double* d2, const double* psi, const double* V,
               std::size_t cells, std::complex<double> c1, std::complex<double> c2,
               double* out) {
    const double c1r = c1.real(), c1i = c1.imag();
    const double c2r = c2.real(), c2i = c2.imag();
    for (std::size_t j = 0; j < cells; ++j) {
        const double ar = d2[2 * j], ai = d2[2 * j + 1];
        const double pr = psi[2 * j], pi = psi[2 * j + 1];
        const double tr = c2r * V[j], ti = c2i * V[j];
        out[2 * j] = (c1r * ar + (-c1i) * ai) + (tr * pr + (-ti) * pi);
        out[2 * j + 1] = (c1r * ai + c1i * ar) + (tr * pi + ti * pr);
    }
}

void axpy(const double* x, double a, const double* y, std::size_t n, double* out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = y[k] + a * x[k];
}

}  // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set = {"scalar",    second_diff, first_diff, lin3,
                                  wave_combine, schro_rhs,   axpy};
    return set;
}

}  // namespace qftca
