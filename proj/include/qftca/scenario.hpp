#pragma once

#include "qftca/state.hpp"

namespace qftca {

struct SourceLoc {
    std::string file;
    int line = 0;
    std::string str() const { return file + ":" + std::to_string(line); }
};

struct Diagnostic {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Error;
    std::string message;
    SourceLoc loc;
    std::string str() const {
        return loc.str() + ": " +
               (severity == Severity::Error ? "error: " : "warning: ") + message;
    }
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSection {
    std::string id;
    std::string profile = "gaussian";  // gaussian | sine | constant | impulse
    double center = 0.0, center_y = 0.0;
    double width = 1.0;
    double amplitude = 1.0;
    double wavenumber = 0.0;  // phase factor exp(i k x)
    int mode_number = 1;      // sine profile
    double velocity = 0.0;    // traveling-profile speed (2nd-order fields)
    double norm_limit = 1e6;
    double occupancy_threshold = 1e-12;
    SourceLoc loc;
};

struct ParticleSection {
    std::string id;
    std::string type = "generic";
    double x = 0.0, v = 0.0, mass = 1.0;
    bool has_momentum = false;
    double momentum = 0.0;
    bool relativistic = false;
    SourceLoc loc;
};

// Parsed scenario file: raw values plus where each came from.
struct Scenario {
    std::string path;

    // either a Lagrangian or a directly-given solved equation, per class
    std::string particle_lagrangian, field_lagrangian;
    std::string particle_eom_lhs, particle_eom_rhs;
    std::string field_eom_lhs, field_eom_rhs;

    std::map<std::string, double> constants;
    GridSpec grid;

    bool have_dt = false;
    double dt = 0.0;
    long ticks = 100;
    double max_time = -1.0;
    std::uint64_t seed = 0;
    long snapshot_every = 0;
    SchroMode mode = SchroMode::Corrected;

    std::string potential_kind = "none";  // none | constant_force | expr
    double potential_force = 0.0;
    std::string potential_expr;

    std::vector<FieldSection> fields;
    std::vector<ParticleSection> particles;
    InteractionConfig interaction;

    std::map<std::string, SourceLoc> provenance;  // "section.key" -> origin
    SourceLoc loc_of(const std::string& key) const;
};

Scenario parse_scenario_text(const std::string& text, const std::string& name);
Scenario load_scenario(const std::string& path);

// Static checks: model syntax, symbol binding, stability bounds, interaction
// references.  CFL violations are errors unless allow_unstable.
std::vector<Diagnostic> validate_scenario(const Scenario& sc, bool allow_unstable = false);

struct CompiledScenario {
    SystemState state;
    double dt = 0.0;
    StopCondition stop;
    long snapshot_every = 0;
    std::vector<EquationOfMotion> eoms;  // what `derive` prints
    std::vector<Diagnostic> warnings;
};

// Builds the runnable state; throws ScenarioError carrying the first
// validation error when the scenario is unusable.
CompiledScenario init_state(const Scenario& sc, bool allow_unstable = false);

}  // namespace qftca
