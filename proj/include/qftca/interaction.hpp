#pragma once

#include <array>

#include "qftca/state.hpp"

namespace qftca {

struct InteractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transient merged state of the two interacting particles/waves, reduced to
// the paths covering the interaction cell.
struct InteractionObject {
    PwCollection rows;  // arity 2, renormalized
    std::size_t cell = 0;
    long created_tick = 0;
    int lifetime_ticks = 0;  // decays within the same tick
    std::int64_t total_momentum = 0;  // exact tick sum at the cell
};

// One split() + one combine() bound to vertex rules, in one of the five
// template orderings.
struct InteractionChannel {
    int template_id = 1;  // 1: combine-then-split; 2..5: split-then-combine
    VertexRule split_rule, combine_rule;
    std::array<ParticleType, 2> in_types{};
    std::array<ParticleType, 2> out_types{};  // sorted by type

    std::string label() const;         // operator notation, one line
    // Diagram-topology equivalence key: which external legs share a vertex
    // and the internal line's type modulo particle/antiparticle.
    std::string topology_key() const;
};

// Instantiates the five templates over the rule table, filters by rule
// applicability and deduplicates topology-equivalent channels.
std::vector<InteractionChannel> enumerate_channels(
    ParticleType n1, ParticleType n2, const std::vector<VertexRule>& rules);

struct InteractionCandidate {
    std::size_t pair_index;  // index into InteractionConfig::eligible_pairs
    std::size_t cell;
    double weight;  // |psi1 psi2|^2 (or squared path-amplitude product)
};

// All cells where two distinct eligible objects are both above the occupancy
// threshold.
std::vector<InteractionCandidate> detect_interaction(const SystemState& state);

// One weighted draw; advances the generator exactly once.
std::size_t select_interaction_cell(const std::vector<InteractionCandidate>& candidates,
                                    Generator& rng);

InteractionObject form_interaction_object(const SystemState& state,
                                          const ParticleWave& pw1,
                                          const ParticleWave& pw2, std::size_t cell);

// Deterministic two-fold splitting on a uniform momentum grid, momentum
// conserved exactly per row; amplitudes scaled by coupling/sqrt(N).
std::vector<PathRow> apply_split(const MemberState& parent,
                                 std::complex<double> amplitude,
                                 const VertexRule& rule, int granularity,
                                 std::int64_t window);

// p_c = p_a + p_b; amplitude multiplied by the coupling.
std::pair<MemberState, std::complex<double>> apply_combine(
    const MemberState& a, const MemberState& b, std::complex<double> amplitude,
    const VertexRule& rule);

struct ChannelResult {
    InteractionChannel channel;
    PwCollection out;  // canonical kinematic grid rows
};

// Applies each channel's operator pair to the object's rows.  Channels that
// share an out-type pair end with the same path set, differing only in
// amplitudes.
std::vector<ChannelResult> process_channels(const InteractionObject& obj,
                                            const std::vector<InteractionChannel>& channels,
                                            const InteractionConfig& cfg);

struct MergedGroup {
    std::array<ParticleType, 2> out_types{};
    PwCollection merged;   // renormalized
    double weight = 0.0;   // total squared amplitude before renormalization
};

// Row-wise signed amplitude summation per out-type pair, pruning and
// renormalizing; groups cancelling to nothing are dropped.
std::vector<MergedGroup> merge_channels(const std::vector<ChannelResult>& results,
                                        const InteractionConfig& cfg);

// Collapse: removes the in particles/waves (all their paths), installs two
// out particles sharing the merged path table.  Returns false when the
// interaction was voided (no surviving group).
bool generate_out_pw(SystemState& state, const std::vector<MergedGroup>& groups,
                     const InteractionObject& obj, const std::string& in1,
                     const std::string& in2);

// Steps 0-3 within a single tick for an already-selected candidate.
void perform_interaction(SystemState& state, const InteractionCandidate& candidate);

}  // namespace qftca
