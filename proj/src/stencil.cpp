#include "qftca/stencil.hpp"

#include <cmath>
#include <numbers>

namespace qftca {

const char* family_name(StencilFamily f) {
    switch (f) {
        case StencilFamily::Particle2: return "particle-2nd-order";
        case StencilFamily::FieldSecondOrder: return "field-2nd-order-t";
        case StencilFamily::FieldFirstOrder: return "field-1st-order-t";
    }
    return "?";
}

double CompiledParticleRhs::eval(double x, double v, double dvdx) const {
    double sum = 0.0;
    for (const auto& t : terms) {
        double p = t.coeff;
        for (int k = 0; k < t.x_pow; ++k) p *= x;
        for (int k = 0; k < t.v_pow; ++k) p *= v;
        for (int k = 0; k < t.dvdx_pow; ++k) p *= dvdx;
        sum += p;
    }
    return sum;
}

namespace {

std::complex<double> fold_constant(const Atom& a,
                                   const std::map<std::string, double>& constants) {
    if (a.name == "pi") return std::numbers::pi;
    if (a.name == "i") return {0.0, 1.0};
    auto it = constants.find(a.name);
    if (it == constants.end())
        throw StencilError("unbound symbol '" + a.name + "' in equation of motion");
    return it->second;
}

std::complex<double> ipow(std::complex<double> v, int e) {
    std::complex<double> p = 1.0;
    for (int k = 0; k < std::abs(e); ++k) p *= v;
    return e >= 0 ? p : 1.0 / p;
}

CompiledParticleRhs compile_particle_rhs(const Polynomial& rhs,
                                         const std::map<std::string, double>& constants) {
    CompiledParticleRhs out;
    for (const Monomial& m : rhs.terms()) {
        std::complex<double> coeff = m.coeff;
        ParticleRhsTerm t{0.0};
        for (const auto& [atom, exp] : m.factors) {
            if (atom == Atom::symbol("x")) {
                t.x_pow = exp;
            } else if (atom == Atom::deriv("x", 't', 1)) {
                t.v_pow = exp;
            } else if (atom.kind == AtomKind::FormalDeriv) {
                t.dvdx_pow = exp;
                out.uses_potential = true;
            } else if (atom.kind == AtomKind::Symbol) {
                coeff *= ipow(fold_constant(atom, constants), exp);
            } else {
                throw StencilError("unsupported factor " + atom.str() +
                                   " in particle equation of motion");
            }
            if ((t.x_pow < 0) || (t.v_pow < 0) || (t.dvdx_pow < 0))
                throw StencilError("negative power of dynamical factor " + atom.str());
        }
        if (std::abs(coeff.imag()) > 1e-12)
            throw StencilError("particle equation of motion has a complex coefficient");
        t.coeff = coeff.real();
        out.terms.push_back(t);
    }
    return out;
}

CompiledFieldRhs compile_field_rhs(const Polynomial& rhs,
                                   const std::map<std::string, double>& constants) {
    CompiledFieldRhs out;
    for (const Monomial& m : rhs.terms()) {
        std::complex<double> coeff = m.coeff;
        FieldRhsTerm t;
        for (const auto& [atom, exp] : m.factors) {
            if (atom == Atom::symbol("psi")) {
                t.psi_pow = exp;
            } else if (atom == Atom::deriv("psi", 'x', 1)) {
                t.dpsidx_pow = exp;
            } else if (atom == Atom::deriv("psi", 'x', 2)) {
                t.d2psidx_pow = exp;
            } else if (atom == Atom::symbol("V") ||
                       (atom.kind == AtomKind::Opaque && atom.name == "V")) {
                t.v_pow = exp;
            } else if (atom.kind == AtomKind::Symbol) {
                coeff *= ipow(fold_constant(atom, constants), exp);
            } else {
                throw StencilError("unsupported factor " + atom.str() +
                                   " in field equation of motion");
            }
            if (t.psi_pow < 0 || t.dpsidx_pow < 0 || t.d2psidx_pow < 0 || t.v_pow < 0)
                throw StencilError("negative power of lattice factor " + atom.str());
        }
        t.coeff = coeff;
        if (t.dpsidx_pow > 0) out.uses_dpsidx = true;
        if (t.v_pow > 0) out.uses_potential = true;
        out.terms.push_back(t);
    }
    // Fast-path classification.
    bool wave_ok = true, schro_ok = true;
    double a = 0, b = 0, c = 0;
    std::complex<double> c1 = 0, c2 = 0;
    for (const auto& t : out.terms) {
        bool is_d2 = t.d2psidx_pow == 1 && t.psi_pow == 0 && t.dpsidx_pow == 0 && t.v_pow == 0;
        bool is_psi = t.psi_pow == 1 && t.d2psidx_pow == 0 && t.dpsidx_pow == 0 && t.v_pow == 0;
        bool is_const = t.psi_pow == 0 && t.d2psidx_pow == 0 && t.dpsidx_pow == 0 && t.v_pow == 0;
        bool is_vpsi = t.psi_pow == 1 && t.v_pow == 1 && t.d2psidx_pow == 0 && t.dpsidx_pow == 0;
        bool real = t.coeff.imag() == 0.0;
        if (is_d2 && real) a += t.coeff.real();
        else if (is_psi && real) b += t.coeff.real();
        else if (is_const && real) c += t.coeff.real();
        else wave_ok = false;
        if (is_d2) c1 += t.coeff;
        else if (is_vpsi) c2 += t.coeff;
        else schro_ok = false;
    }
    out.linear_wave = wave_ok;
    out.wave_a = a; out.wave_b = b; out.wave_c = c;
    out.schro_linear = schro_ok;
    out.schro_c1 = c1; out.schro_c2 = c2;
    return out;
}

}  // namespace

StencilProgram compile_stencil(const EquationOfMotion& eom,
                               const std::map<std::string, double>& constants) {
    StencilProgram p;
    p.required_parameters = eom.parameters;
    if (eom.kind == EomKind::Particle) {
        if (eom.time_order != 2)
            throw StencilError("no stencil template for particle equations of order " +
                               std::to_string(eom.time_order));
        p.family = StencilFamily::Particle2;
        p.particle_rhs = compile_particle_rhs(eom.rhs, constants);
        p.step_names = {"evaluate d2(x,t) = rhs", "d(x,t) += d2(x,t)*dtau",
                        "x += d(x,t)*dtau"};
        p.lookback_slices = 0;
        return p;
    }
    p.field_rhs = compile_field_rhs(eom.rhs, constants);
    if (eom.time_order == 2) {
        p.family = StencilFamily::FieldSecondOrder;
        p.step_names = {"t += dt", "Dpsidx", "D2psidx", "D2psidt = rhs",
                        "psi(t+dt) = D2psidt*dt*dt + 2*psi(t) - psi(t-dt)"};
        p.lookback_slices = 2;
    } else if (eom.time_order == 1) {
        p.family = StencilFamily::FieldFirstOrder;
        p.step_names = {"t += dt", "Dpsidx", "D2psidx", "Dpsidt = rhs",
                        "Dpsidt += D2psidt*dt", "psi(t+dt) = psi(t) + Dpsidt*dt"};
        p.lookback_slices = 1;
    } else {
        throw StencilError("no stencil template for field equations of order " +
                           std::to_string(eom.time_order));
    }
    return p;
}

std::size_t FieldState::cells() const {
    std::size_t n = 1;
    for (std::size_t e : extents) n *= e;
    return n;
}

std::size_t FieldState::cell_index(std::size_t ix, std::size_t iy) const {
    return dim == 1 ? ix : iy * extents[0] + ix;
}

namespace {

using Cx = std::complex<double>;

inline double* flat(std::vector<Cx>& v) { return reinterpret_cast<double*>(v.data()); }
inline const double* flat(const std::vector<Cx>& v) {
    return reinterpret_cast<const double*>(v.data());
}

// Neighbor lookup honoring the boundary mode.
inline Cx sample(const FieldState& f, const std::vector<Cx>& in, long ix, long iy) {
    const long nx = static_cast<long>(f.extents[0]);
    const long ny = f.dim == 2 ? static_cast<long>(f.extents[1]) : 1;
    if (f.boundary == BoundaryMode::Periodic) {
        ix = (ix % nx + nx) % nx;
        iy = (iy % ny + ny) % ny;
    } else if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) {
        return 0.0;
    }
    return in[static_cast<std::size_t>(iy) * nx + ix];
}

inline Cx second_diff_at(const FieldState& f, const std::vector<Cx>& in, long ix,
                         long iy, long ox, long oy, double inv_h2) {
    Cx fp = sample(f, in, ix + ox, iy + oy);
    Cx fc = sample(f, in, ix, iy);
    Cx fm = sample(f, in, ix - ox, iy - oy);
    return ((fp - 2.0 * fc) + fm) * inv_h2;
}

void second_diff_axis(const FieldState& f, const std::vector<Cx>& in,
                      std::vector<Cx>& out, int axis) {
    const KernelSet& K = active_kernels();
    const double inv_h2 = 1.0 / (f.dx * f.dx);
    const long nx = static_cast<long>(f.extents[0]);
    const long ny = f.dim == 2 ? static_cast<long>(f.extents[1]) : 1;
    const std::size_t n = 2 * in.size();
    const std::size_t off = axis == 0 ? 2 : 2 * static_cast<std::size_t>(nx);
    K.second_diff(flat(in), n, off, inv_h2, flat(out));
    if (axis == 0) {
        // edge columns of every row wrapped into the neighbor row; redo them
        for (long iy = 0; iy < ny; ++iy) {
            out[iy * nx + 0] = second_diff_at(f, in, 0, iy, 1, 0, inv_h2);
            out[iy * nx + nx - 1] = second_diff_at(f, in, nx - 1, iy, 1, 0, inv_h2);
        }
    } else {
        for (long ix = 0; ix < nx; ++ix) {
            out[0 * nx + ix] = second_diff_at(f, in, ix, 0, 0, 1, inv_h2);
            out[(ny - 1) * nx + ix] = second_diff_at(f, in, ix, ny - 1, 0, 1, inv_h2);
        }
    }
}

// Generic per-cell evaluation of the compiled rhs (slow path).
void eval_generic_rhs(const FieldState& f, const std::vector<Cx>& d2,
                      const std::vector<Cx>* d1, std::vector<Cx>& out) {
    const std::size_t n = f.psi.size();
    for (std::size_t j = 0; j < n; ++j) {
        Cx sum = 0.0;
        double vj = f.potential.empty() ? 0.0 : f.potential[j];
        for (const auto& t : f.program.field_rhs.terms) {
            Cx p = t.coeff;
            for (int k = 0; k < t.psi_pow; ++k) p *= f.psi[j];
            for (int k = 0; k < t.dpsidx_pow; ++k) p *= (*d1)[j];
            for (int k = 0; k < t.d2psidx_pow; ++k) p *= d2[j];
            for (int k = 0; k < t.v_pow; ++k) p *= vj;
            sum += p;
        }
        out[j] = sum;
    }
}

void guard_finite(const FieldState& f, const char* step) {
    for (std::size_t j = 0; j < f.psi.size(); ++j)
        if (!std::isfinite(f.psi[j].real()) || !std::isfinite(f.psi[j].imag()))
            throw StencilError("non-finite field value in '" + f.id + "' at cell " +
                               std::to_string(j) + " after step " + step);
}

}  // namespace

void spatial_first_difference_x(const FieldState& f, const std::vector<Cx>& in,
                                std::vector<Cx>& out) {
    const KernelSet& K = active_kernels();
    const double inv_2h = 1.0 / (2.0 * f.dx);
    const long nx = static_cast<long>(f.extents[0]);
    const long ny = f.dim == 2 ? static_cast<long>(f.extents[1]) : 1;
    out.resize(in.size());
    K.first_diff(flat(in), 2 * in.size(), 2, inv_2h, flat(out));
    for (long iy = 0; iy < ny; ++iy) {
        out[iy * nx + 0] =
            (sample(f, in, 1, iy) - sample(f, in, -1, iy)) * inv_2h;
        out[iy * nx + nx - 1] =
            (sample(f, in, nx, iy) - sample(f, in, nx - 2, iy)) * inv_2h;
    }
}

void spatial_second_difference(const FieldState& f, const std::vector<Cx>& in,
                               std::vector<Cx>& out) {
    out.resize(in.size());
    second_diff_axis(f, in, out, 0);
    if (f.dim == 2) {
        std::vector<Cx> tmp(in.size());
        second_diff_axis(f, in, tmp, 1);
        active_kernels().axpy(flat(tmp), 1.0, flat(out), 2 * out.size(), flat(out));
    }
}

void wave_step(FieldState& f, double dt) {
    const KernelSet& K = active_kernels();
    const std::size_t n = f.psi.size();
    std::vector<Cx> d2(n), r(n);
    spatial_second_difference(f, f.psi, d2);
    const CompiledFieldRhs& rhs = f.program.field_rhs;
    if (rhs.linear_wave) {
        K.lin3(flat(d2), flat(f.psi), 2 * n, rhs.wave_a, rhs.wave_b, rhs.wave_c,
               flat(r));
    } else {
        std::vector<Cx> d1;
        if (rhs.uses_dpsidx) spatial_first_difference_x(f, f.psi, d1);
        eval_generic_rhs(f, d2, &d1, r);
    }
    std::vector<Cx> next(n);
    K.wave_combine(flat(r), flat(f.psi), flat(f.psi_prev), 2 * n, dt * dt,
                   flat(next));
    f.psi_prev = std::move(f.psi);
    f.psi = std::move(next);
    guard_finite(f, "psi(t+dt) update");
    double norm = field_norm(f);
    if (!std::isfinite(norm) || norm > f.norm_limit)
        throw StencilError("field '" + f.id + "' norm diverged to " +
                           std::to_string(norm));
}

void schrodinger_step(FieldState& f, double dt, SchroMode mode) {
    const KernelSet& K = active_kernels();
    const std::size_t n = f.psi.size();
    std::vector<Cx> d2(n), rate(n);
    spatial_second_difference(f, f.psi, d2);
    const CompiledFieldRhs& rhs = f.program.field_rhs;
    if (rhs.schro_linear) {
        if (f.potential.empty()) f.potential.assign(n, 0.0);
        K.schro_rhs(flat(d2), flat(f.psi), f.potential.data(), n, rhs.schro_c1,
                    rhs.schro_c2, flat(rate));
    } else {
        std::vector<Cx> d1;
        if (rhs.uses_dpsidx) spatial_first_difference_x(f, f.psi, d1);
        eval_generic_rhs(f, d2, &d1, rate);
    }
    if (mode == SchroMode::Literal) {
        // step 5 as printed: accumulate into the stored Dpsidt state first
        if (f.dpsi_dt.size() != n) f.dpsi_dt.assign(n, 0.0);
        K.axpy(flat(rate), dt, flat(f.dpsi_dt), 2 * n, flat(f.dpsi_dt));
        K.axpy(flat(f.dpsi_dt), dt, flat(f.psi), 2 * n, flat(f.psi));
    } else {
        K.axpy(flat(rate), dt, flat(f.psi), 2 * n, flat(f.psi));
    }
    guard_finite(f, "psi(t+dt) update");
    double norm = field_norm(f);
    if (!std::isfinite(norm) || norm > f.norm_limit)
        throw StencilError("field '" + f.id + "' norm diverged to " +
                           std::to_string(norm));
}

ParticleKinematics particle_step(ParticleKinematics p, const CompiledParticleRhs& rhs,
                                 const std::function<double(double)>& dvdx,
                                 double dtau) {
    double slope = rhs.uses_potential ? dvdx(p.x) : 0.0;
    double a = rhs.eval(p.x, p.v, slope);
    if (!std::isfinite(a))
        throw StencilError("particle acceleration is not finite (x=" +
                           std::to_string(p.x) + ", v=" + std::to_string(p.v) +
                           ", dV/dx=" + std::to_string(slope) + ")");
    p.v += a * dtau;
    p.x += p.v * dtau;
    return p;
}

double field_norm(const FieldState& f) {
    double measure = 1.0;
    for (int d = 0; d < f.dim; ++d) measure *= f.dx;
    double sum = 0.0;
    for (const Cx& z : f.psi) sum += z.real() * z.real() + z.imag() * z.imag();
    return sum * measure;
}

}  // namespace qftca
