#include "qftca/kernels.hpp"

#include <stdexcept>

namespace qftca {

namespace {
const KernelSet* g_active = nullptr;

const KernelSet* widest() {
    if (const KernelSet* k = avx2_kernels()) return k;
    if (const KernelSet* k = neon_kernels()) return k;
    return &scalar_kernels();
}
}  // namespace

const KernelSet& active_kernels() {
    if (!g_active) g_active = widest();
    return *g_active;
}

void select_kernels(const std::string& name) {
    if (name == "auto") { g_active = widest(); return; }
    if (name == "scalar") { g_active = &scalar_kernels(); return; }
    if (name == "avx2") {
        if (const KernelSet* k = avx2_kernels()) { g_active = k; return; }
        throw std::runtime_error("avx2 kernels not supported on this CPU");
    }
    if (name == "neon") {
        if (const KernelSet* k = neon_kernels()) { g_active = k; return; }
        throw std::runtime_error("neon kernels not supported on this CPU");
    }
    throw std::runtime_error("unknown kernel set '" + name + "'");
}

std::vector<const KernelSet*> available_kernel_sets() {
    std::vector<const KernelSet*> out{&scalar_kernels()};
    if (const KernelSet* k = avx2_kernels()) out.push_back(k);
    if (const KernelSet* k = neon_kernels()) out.push_back(k);
    return out;
}

}  // namespace qftca
