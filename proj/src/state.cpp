#include "qftca/state.hpp"

#include <algorithm>
#include <cmath>

#include "qftca/interaction.hpp"

namespace qftca {

// ---------------------------------------------------------------- particles

const char* particle_type_name(ParticleType t) {
    switch (t) {
        case ParticleType::Electron: return "e-";
        case ParticleType::Positron: return "e+";
        case ParticleType::Photon: return "gamma";
        case ParticleType::Generic: return "generic";
    }
    return "?";
}

std::optional<ParticleType> parse_particle_type(const std::string& name) {
    if (name == "e-" || name == "electron") return ParticleType::Electron;
    if (name == "e+" || name == "positron") return ParticleType::Positron;
    if (name == "gamma" || name == "photon") return ParticleType::Photon;
    if (name == "generic") return ParticleType::Generic;
    return std::nullopt;
}

double PwCollection::total_weight() const {
    double w = 0.0;
    for (const auto& r : rows) w += std::norm(r.amplitude);
    return w;
}

void PwCollection::renormalize() {
    double w = total_weight();
    if (w <= 0.0) throw std::runtime_error("path table has zero total weight");
    double s = 1.0 / std::sqrt(w);
    for (auto& r : rows) r.amplitude *= s;
}

void PwCollection::check_homogeneous() const {
    if (rows.empty()) return;
    const auto& first = rows[0].members;
    for (const auto& r : rows) {
        if (r.members.size() != first.size())
            throw std::runtime_error("path table rows have differing arity");
        for (std::size_t i = 0; i < first.size(); ++i)
            if (r.members[i].n != first[i].n)
                throw std::runtime_error("path table column has mixed particle types");
    }
}

std::string VertexRule::str() const {
    std::string s = kind == Kind::Split ? "split(" : "combine(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i) s += ",";
        s += particle_type_name(inputs[i]);
    }
    s += ")->(";
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (i) s += ",";
        s += particle_type_name(outputs[i]);
    }
    s += ")";
    return s;
}

std::vector<VertexRule> qed_vertex_rules(double g) {
    using K = VertexRule::Kind;
    const auto E = ParticleType::Electron;
    const auto P = ParticleType::Positron;
    const auto G = ParticleType::Photon;
    std::vector<VertexRule> r;
    r.push_back({K::Split, {G}, {E, P}, g, true});     // pair creation
    r.push_back({K::Split, {E}, {E, G}, g, true});     // emission
    r.push_back({K::Split, {P}, {P, G}, g, true});
    r.push_back({K::Combine, {E, P}, {G}, g, true});   // annihilation
    r.push_back({K::Combine, {E, G}, {E}, g, true});   // absorption
    r.push_back({K::Combine, {P, G}, {P}, g, true});
    // vacuum emission/absorption of a full triple: kinematically forbidden
    // on-shell, kept in the table but switched off
    r.push_back({K::Split, {G}, {G, G}, 0.0, false});
    r.push_back({K::Combine, {G, G}, {G}, 0.0, false});
    return r;
}

// --------------------------------------------------------------------- grid

std::size_t GridSpec::cells() const {
    std::size_t n = 1;
    for (auto e : extents) n *= e;
    return n;
}

std::size_t GridSpec::cell_of(double x) const {
    // 1D mapping; 2D objects are fields, addressed by index directly
    double u = (x - origin) / dx;
    auto n = static_cast<long long>(extents.empty() ? 0 : extents[0]);
    if (n == 0) return 0;
    long long c = static_cast<long long>(std::floor(u + 0.5));
    if (boundary == BoundaryMode::Periodic) {
        c %= n;
        if (c < 0) c += n;
    } else {
        c = std::clamp(c, 0LL, n - 1);
    }
    return static_cast<std::size_t>(c);
}

double GridSpec::x_of(std::size_t cell) const {
    return origin + static_cast<double>(cell) * dx;
}

double PotentialBinding::slope_at(const GridSpec& grid, double x) const {
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::ConstantForce:
            return -force;  // F = -dV/dx
        case Kind::Lattice: {
            if (lattice.size() < 2) return 0.0;
            std::size_t c = grid.cell_of(x);
            std::size_t n = lattice.size();
            std::size_t lo, hi;
            if (grid.boundary == BoundaryMode::Periodic) {
                lo = (c + n - 1) % n;
                hi = (c + 1) % n;
            } else {
                lo = c == 0 ? 0 : c - 1;
                hi = c + 1 >= n ? n - 1 : c + 1;
            }
            double span = static_cast<double>(hi >= lo ? hi - lo : 2) * grid.dx;
            if (grid.boundary == BoundaryMode::Periodic) span = 2.0 * grid.dx;
            if (span == 0.0) return 0.0;
            return (lattice[hi] - lattice[lo]) / span;
        }
    }
    return 0.0;
}

// -------------------------------------------------------------------- state

FieldState* SystemState::find_field(const std::string& id) {
    for (auto& f : fields)
        if (f.id == id) return &f;
    return nullptr;
}

ParticleWave* SystemState::find_particle(const std::string& id) {
    for (auto& p : particles)
        if (p.id == id) return &p;
    return nullptr;
}

const FieldState* SystemState::find_field(const std::string& id) const {
    return const_cast<SystemState*>(this)->find_field(id);
}

const ParticleWave* SystemState::find_particle(const std::string& id) const {
    return const_cast<SystemState*>(this)->find_particle(id);
}

std::vector<std::size_t> SystemState::object_cells(const std::string& id) const {
    std::vector<std::size_t> cells;
    if (const FieldState* f = find_field(id)) {
        double thr2 = f->occupancy_threshold * f->occupancy_threshold;
        for (std::size_t k = 0; k < f->psi.size(); ++k)
            if (std::norm(f->psi[k]) > thr2) cells.push_back(k);
        return cells;
    }
    if (const ParticleWave* p = find_particle(id)) {
        double thr = interaction.occupancy_threshold;
        if (p->paths && !p->paths->rows.empty()) {
            for (const auto& row : p->paths->rows) {
                if (std::abs(row.amplitude) <= thr) continue;
                cells.push_back(grid.cell_of(row.members[p->member].x));
            }
            std::sort(cells.begin(), cells.end());
            cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        } else {
            cells.push_back(grid.cell_of(p->x));
        }
    }
    return cells;
}

void SystemState::rebuild_occupancy() {
    occupancy.clear();
    for (const auto& f : fields)
        for (std::size_t c : object_cells(f.id)) occupancy[c].push_back(f.id);
    for (const auto& p : particles)
        for (std::size_t c : object_cells(p.id)) occupancy[c].push_back(p.id);
}

std::vector<std::string> SystemState::objects_at_cell(std::size_t cell) const {
    auto it = occupancy.find(cell);
    if (it == occupancy.end()) return {};
    return it->second;
}

// --------------------------------------------------------------------- tick

double proper_timestep(const ParticleWave& p, double dt) {
    if (!p.relativistic || p.mass <= 0.0) return dt;
    double pm = p.momentum / p.mass;  // c = 1
    return dt / std::sqrt(1.0 + pm * pm);
}

static void advance_particle(SystemState& state, ParticleWave& p, double dt) {
    double dtau = proper_timestep(p, dt);
    auto dvdx = [&](double x) { return state.potential.slope_at(state.grid, x); };
    ParticleKinematics k{p.x, p.v};
    k = particle_step(k, state.particle_program.particle_rhs, dvdx, dtau);
    p.x = k.x;
    p.v = k.v;
    p.tau += dtau;
    if (p.mass > 0.0) p.momentum = p.mass * p.v;
    // every alternative path advances ballistically by its own momentum
    if (p.paths) {
        for (auto& row : p.paths->rows) {
            auto& m = row.members[p.member];
            if (p.paths->arity() == 1 && p.paths->rows.size() == 1) {
                m.x = p.x;  // single-path particle mirrors the aggregate
            } else {
                double vel = p.mass > 0.0
                                 ? m.p * state.interaction.momentum_quantum / p.mass
                                 : (m.p >= 0 ? 1.0 : -1.0);
                m.x += vel * dtau;
            }
            m.t += dtau;
        }
    }
}

void tick(SystemState& state, double dt) {
    try {
        for (auto& f : state.fields) {
            if (f.program.family == StencilFamily::FieldSecondOrder)
                wave_step(f, dt);
            else if (f.program.family == StencilFamily::FieldFirstOrder)
                schrodinger_step(f, dt, state.schro_mode);
            else
                throw StencilError("field '" + f.id + "' bound to a particle stencil");
        }
        for (auto& p : state.particles) advance_particle(state, p, dt);

        state.tick_count += 1;
        state.time += dt;
        state.rebuild_occupancy();

        if (state.interaction.enabled) {
            auto candidates = detect_interaction(state);
            if (!candidates.empty()) {
                std::size_t pick = select_interaction_cell(candidates, state.rng);
                perform_interaction(state, candidates[pick]);
                state.rebuild_occupancy();
            }
        }
    } catch (const TickError&) {
        throw;
    } catch (const std::exception& e) {
        throw TickError(e.what(), state.tick_count);
    }
}

void run(SystemState& state, double dt, const StopCondition& stop, long snapshot_every,
         const std::function<void(const SystemState&)>& on_snapshot) {
    auto fields_quiet = [&] {
        if (stop.all_fields_below < 0.0) return false;
        for (const auto& f : state.fields)
            if (field_norm(f) >= stop.all_fields_below) return false;
        return true;
    };
    auto done = [&] {
        if (stop.max_ticks >= 0 && state.tick_count >= stop.max_ticks) return true;
        if (stop.max_time >= 0.0 && state.time >= stop.max_time - 0.5 * dt) return true;
        return fields_quiet();
    };

    state.rebuild_occupancy();
    long last_emitted = -1;
    if (on_snapshot) {
        on_snapshot(state);
        last_emitted = state.tick_count;
    }
    while (!done()) {
        tick(state, dt);
        if (on_snapshot && snapshot_every > 0 && state.tick_count % snapshot_every == 0) {
            on_snapshot(state);
            last_emitted = state.tick_count;
        }
    }
    if (on_snapshot && last_emitted != state.tick_count) on_snapshot(state);
}

}  // namespace qftca
