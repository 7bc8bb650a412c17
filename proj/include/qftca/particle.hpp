#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qftca {

enum class ParticleType { Electron, Positron, Photon, Generic };

const char* particle_type_name(ParticleType t);
std::optional<ParticleType> parse_particle_type(const std::string& name);

// One member's attribute tuple in a path row: (t, x, p, sigma, n).
// Momenta are integer ticks of the configured momentum quantum so that
// conservation checks are exact.
struct MemberState {
    double t = 0.0;
    double x = 0.0;
    std::int64_t p = 0;
    int sigma = 0;
    ParticleType n = ParticleType::Generic;

    bool operator==(const MemberState&) const = default;
};

struct PathRow {
    std::vector<MemberState> members;
    std::complex<double> amplitude;
};

// Path table: N rows of alternative attribute tuples with complex amplitudes.
struct PwCollection {
    std::vector<PathRow> rows;

    std::size_t arity() const { return rows.empty() ? 0 : rows[0].members.size(); }
    double total_weight() const;  // sum of |amplitude|^2
    void renormalize();           // scale to total_weight() == 1
    // Column homogeneity: every row has the same arity and member types.
    void check_homogeneous() const;
};

// A particle/wave: aggregate kinematics plus its path table.  Out-particles
// of an interaction share one PwCollection (correlated rows); `member`
// selects this particle's column.
struct ParticleWave {
    std::string id;
    ParticleType type = ParticleType::Generic;
    double mass = 1.0;
    bool relativistic = false;
    double x = 0.0;      // aggregate position
    double v = 0.0;      // aggregate velocity
    double momentum = 0.0;
    double tau = 0.0;    // accumulated proper time
    std::shared_ptr<PwCollection> paths;
    std::size_t member = 0;
};

// Allowed particle-type transformation with its coupling constant.
struct VertexRule {
    enum class Kind { Split, Combine };
    Kind kind;
    std::vector<ParticleType> inputs;   // 1 for split, 2 for combine
    std::vector<ParticleType> outputs;  // 2 for split, 1 for combine
    double coupling = 1.0;
    bool enabled = true;

    std::string str() const;
};

// The QED table: the absorption/emission variants expressed as split/combine
// entries.  Vacuum-to-three-particle variants are present but disabled.
std::vector<VertexRule> qed_vertex_rules(double coupling);

struct InteractionConfig {
    bool enabled = false;
    std::vector<std::pair<std::string, std::string>> eligible_pairs;
    std::vector<VertexRule> rules;
    int granularity = 8;                       // paths per split
    std::int64_t momentum_window = 4;          // split grid half-width, ticks
    double momentum_quantum = 1.0 / 64.0;      // tick size
    double occupancy_threshold = 1e-12;
    double path_prune_threshold = 1e-12;
    std::map<std::string, int> sign_table;     // channel label -> +1/-1
    double coupling = 0.302822;                // sqrt(4*pi*alpha)
};

}  // namespace qftca
