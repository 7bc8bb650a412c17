#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qftca/kernels.hpp"
#include "qftca/lagrangian.hpp"

namespace qftca {

enum class StencilFamily { Particle2, FieldSecondOrder, FieldFirstOrder };
enum class BoundaryMode { Periodic, Dirichlet };
enum class SchroMode { Corrected, Literal };

const char* family_name(StencilFamily f);

// One additive term of a compiled field rhs:
//   coeff * psi^a * (d psi/dx)^b * (d2 psi/dx2)^c * V^d
struct FieldRhsTerm {
    std::complex<double> coeff;
    int psi_pow = 0, dpsidx_pow = 0, d2psidx_pow = 0, v_pow = 0;
};

struct CompiledFieldRhs {
    std::vector<FieldRhsTerm> terms;

    // a*d2 + b*psi + c with real coefficients: the wave fast path.
    bool linear_wave = false;
    double wave_a = 0, wave_b = 0, wave_c = 0;

    // c1*d2 + c2*V*psi: the Schroedinger fast path.
    bool schro_linear = false;
    std::complex<double> schro_c1, schro_c2;

    bool uses_dpsidx = false;
    bool uses_potential = false;
};

struct ParticleRhsTerm {
    double coeff;
    int x_pow = 0, v_pow = 0, dvdx_pow = 0;  // dvdx = the formal dV/dx sample
};

struct CompiledParticleRhs {
    std::vector<ParticleRhsTerm> terms;
    bool uses_potential = false;
    double eval(double x, double v, double dvdx) const;
};

// Executable update schedule.  The step list follows the derivation template
// of its family; step 4 (the Lagrangian-specific equation of motion) is the
// compiled rhs, everything else is fixed machinery.
struct StencilProgram {
    StencilFamily family = StencilFamily::Particle2;
    CompiledFieldRhs field_rhs;
    CompiledParticleRhs particle_rhs;
    std::vector<std::string> step_names;   // length 3 / 5 / 6
    int lookback_slices = 0;               // field 2nd: 2, field 1st: 1
    std::vector<std::string> required_parameters;
};

struct StencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binds the EOM to an executable schedule, folding the scenario constants
// into numeric coefficients.
StencilProgram compile_stencil(const EquationOfMotion& eom,
                               const std::map<std::string, double>& constants);

// Field lattice with the lookback data its stencil family requires.
struct FieldState {
    std::string id;
    int dim = 1;
    std::vector<std::size_t> extents;              // cells per axis
    double dx = 1.0;
    BoundaryMode boundary = BoundaryMode::Periodic;
    std::vector<std::complex<double>> psi;         // current slice
    std::vector<std::complex<double>> psi_prev;    // 2nd-order family only
    std::vector<std::complex<double>> dpsi_dt;     // 1st-order family only
    std::vector<double> potential;                 // V lattice; empty = zero
    StencilProgram program;
    double norm_limit = 1e6;
    double occupancy_threshold = 1e-12;

    std::size_t cells() const;
    std::size_t cell_index(std::size_t ix, std::size_t iy = 0) const;
};

// Central first and three-point second difference along x; 2D second
// difference sums both axes.  Boundary cells use periodic wrap or Dirichlet
// (zero) ghost values.
void spatial_first_difference_x(const FieldState& f,
                                const std::vector<std::complex<double>>& in,
                                std::vector<std::complex<double>>& out);
void spatial_second_difference(const FieldState& f,
                               const std::vector<std::complex<double>>& in,
                               std::vector<std::complex<double>>& out);

// psi(t+dt) = rhs*dt^2 + 2 psi(t) - psi(t-dt); swaps slices.
void wave_step(FieldState& f, double dt);

// Six-step first-order schedule; `literal` applies step 5 exactly as the
// template prints it (integrating the stored dpsi/dt state), `corrected`
// feeds step 4 straight into step 6.
void schrodinger_step(FieldState& f, double dt, SchroMode mode = SchroMode::Corrected);

// Semi-explicit Euler: v += a*dtau first, then x += v*dtau.
// dvdx(x) supplies the sampled potential slope where the rhs needs it.
struct ParticleKinematics {
    double x, v;
};
ParticleKinematics particle_step(ParticleKinematics p, const CompiledParticleRhs& rhs,
                                 const std::function<double(double)>& dvdx,
                                 double dtau);

double field_norm(const FieldState& f);  // sum |psi|^2 dx (dx^dim)

}  // namespace qftca
