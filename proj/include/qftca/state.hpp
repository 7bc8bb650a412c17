#pragma once

#include <functional>
#include <unordered_map>

#include "qftca/particle.hpp"
#include "qftca/rng.hpp"
#include "qftca/stencil.hpp"

namespace qftca {

struct GridSpec {
    int dim = 1;
    std::vector<std::size_t> extents;
    double dx = 1.0;
    double origin = 0.0;
    BoundaryMode boundary = BoundaryMode::Periodic;

    std::size_t cells() const;
    // Maps a continuous position to a cell index (periodic wrap or clamp).
    std::size_t cell_of(double x) const;
    double x_of(std::size_t cell) const;  // cell center
};

// How the formal dV/dx of a particle equation of motion is bound at runtime.
struct PotentialBinding {
    enum class Kind { None, ConstantForce, Lattice };
    Kind kind = Kind::None;
    double force = 0.0;              // F = -dV/dx
    std::vector<double> lattice;     // sampled V per cell

    double slope_at(const GridSpec& grid, double x) const;
};

struct InteractionEvent {
    long tick;
    std::size_t cell;
    std::string in1, in2;
    std::string out1, out2;  // empty when the interaction was voided
};

struct SystemState {
    GridSpec grid;
    std::vector<FieldState> fields;
    std::vector<ParticleWave> particles;
    long tick_count = 0;
    double time = 0.0;
    Generator rng{0};
    StencilProgram particle_program;   // shared by all particles
    PotentialBinding potential;
    SchroMode schro_mode = SchroMode::Corrected;
    InteractionConfig interaction;
    std::vector<InteractionEvent> events;

    // cell -> object ids, rebuilt after every tick
    std::unordered_map<std::size_t, std::vector<std::string>> occupancy;

    FieldState* find_field(const std::string& id);
    ParticleWave* find_particle(const std::string& id);
    const FieldState* find_field(const std::string& id) const;
    const ParticleWave* find_particle(const std::string& id) const;

    void rebuild_occupancy();
    std::vector<std::size_t> object_cells(const std::string& id) const;
    std::vector<std::string> objects_at_cell(std::size_t cell) const;
};

struct TickError : std::runtime_error {
    long tick;
    TickError(const std::string& msg, long t)
        : std::runtime_error(msg + " (at tick " + std::to_string(t) + ")"), tick(t) {}
};

// dtau = dt/gamma, gamma = sqrt(1 + (p/(m*c))^2), c = 1; non-relativistic
// particles (and massless/generic ones) keep dtau = dt.
double proper_timestep(const ParticleWave& p, double dt);

// One global update: fields advance from previous-slice data only, particles
// advance by their proper time, then at most one interaction is processed.
void tick(SystemState& state, double dt);

struct StopCondition {
    long max_ticks = -1;          // <0: unbounded
    double max_time = -1.0;       // <0: unbounded
    double all_fields_below = -1.0;  // >=0: stop when every field norm is below
};

// Runs until the stop condition, invoking on_snapshot at t0 and then every
// `snapshot_every` ticks (and on the final state if not already emitted).
void run(SystemState& state, double dt, const StopCondition& stop,
         long snapshot_every, const std::function<void(const SystemState&)>& on_snapshot);

}  // namespace qftca
