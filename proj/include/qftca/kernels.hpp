#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qftca {

// Data-parallel lattice primitives behind the field stencils.  Complex
// lattices are interleaved (re, im) pairs on flat double arrays; the
// neighbor offset `off` is therefore 2 for 1D complex lattices.
//
// Every variant of a kernel performs the same arithmetic in the same order,
// so scalar and SIMD results are bit-identical (the library is built with
// fp-contraction off).  Callers handle boundary cells; kernels touch the
// interior range only where noted.
struct KernelSet {
    const char* name;

    // out[k] = ((f[k+off] - 2*f[k]) + f[k-off]) * inv_h2  for k in [off, n-off)
    void (*second_diff)(const double* f, std::size_t n, std::size_t off,
                        double inv_h2, double* out);

    // out[k] = (f[k+off] - f[k-off]) * inv_2h  for k in [off, n-off)
    void (*first_diff)(const double* f, std::size_t n, std::size_t off,
                       double inv_2h, double* out);

    // out[k] = a*d2[k] + b*cur[k] + (k even ? c_re : 0)  for k in [0, n)
    void (*lin3)(const double* d2, const double* cur, std::size_t n,
                 double a, double b, double c_re, double* out);

    // next[k] = r[k]*dt2 + (2*cur[k] - prev[k])  for k in [0, n)
    void (*wave_combine)(const double* r, const double* cur, const double* prev,
                         std::size_t n, double dt2, double* next);

    // Complex per cell j: out_j = c1*d2_j + (c2*V[j])*psi_j
    // d2, psi, out are interleaved arrays of `cells` complex values; V is real.
    void (*schro_rhs)(const double* d2, const double* psi, const double* V,
                      std::size_t cells, std::complex<double> c1,
                      std::complex<double> c2, double* out);

    // out[k] = y[k] + a*x[k]  for k in [0, n)
    void (*axpy)(const double* x, double a, const double* y, std::size_t n,
                 double* out);
};

const KernelSet& scalar_kernels();
const KernelSet* avx2_kernels();  // nullptr when the CPU lacks AVX2
const KernelSet* neon_kernels();  // nullptr off aarch64

// Runtime-selected set; defaults to the widest supported variant.
const KernelSet& active_kernels();
void select_kernels(const std::string& name);  // "auto", "scalar", "avx2", "neon"
std::vector<const KernelSet*> available_kernel_sets();

}  // namespace qftca
