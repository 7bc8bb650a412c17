#include "qftca/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace qftca {

// --------------------------------------------------------------- channels

std::string InteractionChannel::label() const {
    if (template_id == 1) return combine_rule.str() + "; " + split_rule.str();
    return split_rule.str() + "; " + combine_rule.str();
}

static std::string norm_type(ParticleType t) {
    // internal lines compare modulo particle/antiparticle
    switch (t) {
        case ParticleType::Electron:
        case ParticleType::Positron: return "e";
        case ParticleType::Photon: return "g";
        case ParticleType::Generic: return "?";
    }
    return "?";
}

std::string InteractionChannel::topology_key() const {
    std::string k;
    if (template_id == 1) {
        // both in-legs share a vertex ("s" topology); internal = combine output
        k = "s|";
        k += particle_type_name(out_types[0]);
        k += "|";
        k += particle_type_name(out_types[1]);
        k += "|";
        k += norm_type(combine_rule.outputs[0]);
        return k;
    }
    // "t" topology: in1 sits at one vertex, in2 at the other.  Record the
    // out-leg attached to each and the internal line type.
    ParticleType a = split_rule.outputs[0];
    ParticleType b = split_rule.outputs[1];
    ParticleType c = combine_rule.outputs[0];
    ParticleType out_at_1, out_at_2, internal;
    switch (template_id) {
        case 2: out_at_1 = b; out_at_2 = c; internal = a; break;
        case 3: out_at_1 = a; out_at_2 = c; internal = b; break;
        case 4: out_at_1 = c; out_at_2 = b; internal = a; break;
        default: out_at_1 = c; out_at_2 = a; internal = b; break;  // 5
    }
    k = "t|";
    k += particle_type_name(out_at_1);
    k += "|";
    k += particle_type_name(out_at_2);
    k += "|";
    k += norm_type(internal);
    return k;
}

static bool combine_matches(const VertexRule& r, ParticleType a, ParticleType b) {
    return (r.inputs[0] == a && r.inputs[1] == b) ||
           (r.inputs[0] == b && r.inputs[1] == a);
}

static std::array<ParticleType, 2> sorted_pair(ParticleType a, ParticleType b) {
    if (static_cast<int>(b) < static_cast<int>(a)) std::swap(a, b);
    return {a, b};
}

std::vector<InteractionChannel> enumerate_channels(ParticleType n1, ParticleType n2,
                                                   const std::vector<VertexRule>& rules) {
    std::vector<const VertexRule*> splits, combines;
    bool known1 = false, known2 = false;
    for (const auto& r : rules) {
        if (!r.enabled) continue;
        (r.kind == VertexRule::Kind::Split ? splits : combines).push_back(&r);
        for (auto t : r.inputs) {
            known1 |= t == n1;
            known2 |= t == n2;
        }
        for (auto t : r.outputs) {
            known1 |= t == n1;
            known2 |= t == n2;
        }
    }
    if (!known1 || !known2)
        throw InteractionError(std::string("no vertex rules mention particle type ") +
                               particle_type_name(known1 ? n2 : n1));

    // the pair must couple directly at some vertex; without that gate the
    // templates would manufacture higher-order processes (e.g. two photons
    // pair-producing through an intermediate fermion)
    bool couples = false;
    for (const auto* cb : combines) couples |= combine_matches(*cb, n1, n2);
    if (!couples) return {};

    std::vector<InteractionChannel> out;
    std::vector<std::string> seen;
    auto add = [&](InteractionChannel ch) {
        std::string key = ch.topology_key();
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
        seen.push_back(key);
        out.push_back(std::move(ch));
    };

    // template 1: combine(pw1,pw2) then split the product
    for (const auto* cb : combines) {
        if (!combine_matches(*cb, n1, n2)) continue;
        for (const auto* sp : splits) {
            if (sp->inputs[0] != cb->outputs[0]) continue;
            InteractionChannel ch;
            ch.template_id = 1;
            ch.split_rule = *sp;
            ch.combine_rule = *cb;
            ch.in_types = {n1, n2};
            ch.out_types = sorted_pair(sp->outputs[0], sp->outputs[1]);
            add(std::move(ch));
        }
    }
    // templates 2/3: split pw1 -> (a,b); combine (a,pw2) resp. (b,pw2)
    // templates 4/5: split pw2 -> (a,b); combine (pw1,a) resp. (pw1,b)
    for (int tmpl = 2; tmpl <= 5; ++tmpl) {
        ParticleType parent = (tmpl <= 3) ? n1 : n2;
        ParticleType other = (tmpl <= 3) ? n2 : n1;
        for (const auto* sp : splits) {
            if (sp->inputs[0] != parent) continue;
            ParticleType a = sp->outputs[0], b = sp->outputs[1];
            ParticleType recombined = (tmpl == 2 || tmpl == 4) ? a : b;
            ParticleType leftover = (tmpl == 2 || tmpl == 4) ? b : a;
            for (const auto* cb : combines) {
                if (!combine_matches(*cb, recombined, other)) continue;
                InteractionChannel ch;
                ch.template_id = tmpl;
                ch.split_rule = *sp;
                ch.combine_rule = *cb;
                ch.in_types = {n1, n2};
                ch.out_types = sorted_pair(leftover, cb->outputs[0]);
                add(std::move(ch));
            }
        }
    }
    return out;
}

// -------------------------------------------------------------- detection

static double weight_at(const SystemState& s, const std::string& id, std::size_t cell) {
    if (const FieldState* f = s.find_field(id)) {
        if (cell >= f->psi.size()) return 0.0;
        double w = std::norm(f->psi[cell]);
        double thr2 = f->occupancy_threshold * f->occupancy_threshold;
        return w > thr2 ? w : 0.0;
    }
    if (const ParticleWave* p = s.find_particle(id)) {
        if (!p->paths || p->paths->rows.empty())
            return s.grid.cell_of(p->x) == cell ? 1.0 : 0.0;
        double w = 0.0;
        for (const auto& row : p->paths->rows)
            if (s.grid.cell_of(row.members[p->member].x) == cell)
                w += std::norm(row.amplitude);
        return w > s.interaction.occupancy_threshold * s.interaction.occupancy_threshold
                   ? w
                   : 0.0;
    }
    return 0.0;
}

std::vector<InteractionCandidate> detect_interaction(const SystemState& state) {
    std::vector<InteractionCandidate> out;
    for (std::size_t pi = 0; pi < state.interaction.eligible_pairs.size(); ++pi) {
        const auto& [id1, id2] = state.interaction.eligible_pairs[pi];
        if (id1 == id2) continue;
        auto c1 = state.object_cells(id1);
        auto c2 = state.object_cells(id2);
        std::vector<std::size_t> both;
        std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(),
                              std::back_inserter(both));
        for (std::size_t cell : both) {
            double w = weight_at(state, id1, cell) * weight_at(state, id2, cell);
            if (w > 0.0) out.push_back({pi, cell, w});
        }
    }
    return out;
}

std::size_t select_interaction_cell(const std::vector<InteractionCandidate>& candidates,
                                    Generator& rng) {
    std::vector<double> w;
    w.reserve(candidates.size());
    for (const auto& c : candidates) w.push_back(c.weight);
    return rng.pick_weighted(w);
}

// ---------------------------------------------------------- object forming

static std::vector<PathRow> covering_rows(const SystemState& state,
                                          const ParticleWave& pw, std::size_t cell) {
    std::vector<PathRow> rows;
    if (!pw.paths || pw.paths->rows.empty()) {
        MemberState m;
        m.t = state.time;
        m.x = state.grid.x_of(cell);
        m.p = static_cast<std::int64_t>(
            std::llround(pw.momentum / state.interaction.momentum_quantum));
        m.n = pw.type;
        rows.push_back({{m}, {1.0, 0.0}});
        return rows;
    }
    for (const auto& row : pw.paths->rows)
        if (state.grid.cell_of(row.members[pw.member].x) == cell)
            rows.push_back({{row.members[pw.member]}, row.amplitude});
    return rows;
}

InteractionObject form_interaction_object(const SystemState& state,
                                          const ParticleWave& pw1,
                                          const ParticleWave& pw2, std::size_t cell) {
    auto r1 = covering_rows(state, pw1, cell);
    auto r2 = covering_rows(state, pw2, cell);
    if (r1.empty() || r2.empty())
        throw InteractionError("interaction cell lies outside an object's support");
    InteractionObject obj;
    obj.cell = cell;
    obj.created_tick = state.tick_count;
    for (const auto& a : r1)
        for (const auto& b : r2)
            obj.rows.rows.push_back(
                {{a.members[0], b.members[0]}, a.amplitude * b.amplitude});
    obj.rows.renormalize();
    obj.rows.check_homogeneous();
    // conserved total at the point of maximal joint weight (exact in ticks)
    const PathRow* best = &obj.rows.rows[0];
    for (const auto& r : obj.rows.rows)
        if (std::norm(r.amplitude) > std::norm(best->amplitude)) best = &r;
    obj.total_momentum = best->members[0].p + best->members[1].p;
    return obj;
}

// --------------------------------------------------------------- operators

static std::int64_t grid_step(std::int64_t parent_p, int n, std::int64_t window) {
    std::int64_t span = std::llabs(parent_p) + window;
    std::int64_t w = span / n;
    return w > 0 ? w : 1;
}

static std::int64_t floordiv2(std::int64_t p) {
    return p >= 0 ? p / 2 : -((-p + 1) / 2);
}

std::vector<PathRow> apply_split(const MemberState& parent,
                                 std::complex<double> amplitude,
                                 const VertexRule& rule, int granularity,
                                 std::int64_t window) {
    if (rule.kind != VertexRule::Kind::Split)
        throw InteractionError("apply_split given a combine rule");
    if (rule.inputs[0] != parent.n)
        throw InteractionError(std::string("split rule does not accept ") +
                               particle_type_name(parent.n));
    if (granularity < 1) throw InteractionError("split granularity must be >= 1");

    std::int64_t w = grid_step(parent.p, granularity, window);
    std::complex<double> a = amplitude * (rule.coupling / std::sqrt(double(granularity)));
    std::vector<PathRow> rows;
    rows.reserve(granularity);
    std::int64_t half = floordiv2(parent.p);
    for (int j = 0; j < granularity; ++j) {
        std::int64_t off = (2LL * j + 1 - granularity) * w;
        MemberState b = parent, c = parent;
        b.n = rule.outputs[0];
        c.n = rule.outputs[1];
        b.p = half + off;
        c.p = parent.p - b.p;  // conservation is exact by construction
        rows.push_back({{b, c}, a});
    }
    return rows;
}

std::pair<MemberState, std::complex<double>> apply_combine(
    const MemberState& a, const MemberState& b, std::complex<double> amplitude,
    const VertexRule& rule) {
    if (rule.kind != VertexRule::Kind::Combine)
        throw InteractionError("apply_combine given a split rule");
    if (!combine_matches(rule, a.n, b.n))
        throw InteractionError(std::string("combine rule does not accept (") +
                               particle_type_name(a.n) + "," + particle_type_name(b.n) +
                               ")");
    MemberState c;
    c.t = a.t;
    c.x = a.x;
    c.p = a.p + b.p;
    c.sigma = a.sigma + b.sigma;
    c.n = rule.outputs[0];
    return {c, amplitude * rule.coupling};
}

// -------------------------------------------------------------- processing

// Every channel with the same out-type pair must land its rows on the same
// momentum grid so that merge can sum row-by-row: row (i,j) carries
//   p_first = floor(p_tot/2) + (2j+1-N) W,   p_second = p_tot - p_first
// where "first" is the type-sorted first out slot.
static PwCollection channel_out_rows(const InteractionChannel& ch,
                                     const InteractionObject& obj,
                                     const InteractionConfig& cfg) {
    PwCollection out;
    int n = cfg.granularity;
    double scale = ch.split_rule.coupling * ch.combine_rule.coupling / std::sqrt(double(n));
    for (const auto& in_row : obj.rows.rows) {
        std::int64_t ptot = in_row.members[0].p + in_row.members[1].p;
        std::int64_t w = grid_step(ptot, n, cfg.momentum_window);
        std::int64_t half = floordiv2(ptot);
        for (int j = 0; j < n; ++j) {
            std::int64_t off = (2LL * j + 1 - n) * w;
            MemberState m1, m2;
            m1.t = m2.t = in_row.members[0].t;
            m1.x = m2.x = in_row.members[0].x;
            m1.n = ch.out_types[0];
            m2.n = ch.out_types[1];
            m1.p = half + off;
            m2.p = ptot - m1.p;
            out.rows.push_back({{m1, m2}, in_row.amplitude * scale});
        }
    }
    return out;
}

std::vector<ChannelResult> process_channels(const InteractionObject& obj,
                                            const std::vector<InteractionChannel>& channels,
                                            const InteractionConfig& cfg) {
    std::vector<ChannelResult> results;
    for (const auto& ch : channels)
        results.push_back({ch, channel_out_rows(ch, obj, cfg)});
    return results;
}

// ----------------------------------------------------------------- merging

std::vector<MergedGroup> merge_channels(const std::vector<ChannelResult>& results,
                                        const InteractionConfig& cfg) {
    std::vector<MergedGroup> groups;
    for (const auto& res : results) {
        int sign = 1;
        auto it = cfg.sign_table.find(res.channel.label());
        if (it != cfg.sign_table.end()) sign = it->second;
        double fsign = sign < 0 ? -1.0 : 1.0;

        MergedGroup* g = nullptr;
        for (auto& cand : groups)
            if (cand.out_types == res.channel.out_types) {
                g = &cand;
                break;
            }
        if (!g) {
            groups.push_back({res.channel.out_types, {}, 0.0});
            g = &groups.back();
        }
        if (g->merged.rows.empty()) {
            g->merged = res.out;
            for (auto& r : g->merged.rows) r.amplitude *= fsign;
        } else {
            if (g->merged.rows.size() != res.out.rows.size())
                throw InteractionError("channel path tables disagree in size");
            for (std::size_t i = 0; i < res.out.rows.size(); ++i) {
                if (g->merged.rows[i].members[0].p != res.out.rows[i].members[0].p)
                    throw InteractionError("channel path tables disagree in momenta");
                g->merged.rows[i].amplitude += fsign * res.out.rows[i].amplitude;
            }
        }
    }

    std::vector<MergedGroup> kept;
    for (auto& g : groups) {
        auto& rows = g.merged.rows;
        rows.erase(std::remove_if(rows.begin(), rows.end(),
                                  [&](const PathRow& r) {
                                      return std::abs(r.amplitude) <=
                                             cfg.path_prune_threshold;
                                  }),
                   rows.end());
        if (rows.empty()) continue;
        g.weight = g.merged.total_weight();
        g.merged.renormalize();
        kept.push_back(std::move(g));
    }
    return kept;
}

// ---------------------------------------------------------------- collapse

static double aggregate_momentum(const PwCollection& pc, std::size_t member,
                                 double quantum) {
    double p = 0.0;
    for (const auto& r : pc.rows)
        p += std::norm(r.amplitude) * static_cast<double>(r.members[member].p);
    return p * quantum;
}

bool generate_out_pw(SystemState& state, const std::vector<MergedGroup>& groups,
                     const InteractionObject& obj, const std::string& in1,
                     const std::string& in2) {
    InteractionEvent ev{state.tick_count, obj.cell, in1, in2, "", ""};
    if (groups.empty()) {
        state.events.push_back(ev);
        return false;
    }
    std::size_t pick = 0;
    if (groups.size() > 1) {
        std::vector<double> w;
        for (const auto& g : groups) w.push_back(g.weight);
        pick = state.rng.pick_weighted(w);
    }
    const MergedGroup& g = groups[pick];

    double mass1 = 1.0, mass2 = 1.0;
    for (const std::string& id : {in1, in2}) {
        if (const ParticleWave* p = state.find_particle(id)) {
            if (p->type == g.out_types[0]) mass1 = p->mass;
            if (p->type == g.out_types[1]) mass2 = p->mass;
        }
    }
    if (g.out_types[0] == ParticleType::Photon) mass1 = 0.0;
    if (g.out_types[1] == ParticleType::Photon) mass2 = 0.0;

    // collapse: the in objects vanish entirely, all paths included
    auto drop = [&](const std::string& id) {
        state.particles.erase(std::remove_if(state.particles.begin(),
                                             state.particles.end(),
                                             [&](const ParticleWave& p) {
                                                 return p.id == id;
                                             }),
                              state.particles.end());
        state.fields.erase(std::remove_if(state.fields.begin(), state.fields.end(),
                                          [&](const FieldState& f) {
                                              return f.id == id;
                                          }),
                           state.fields.end());
    };
    drop(in1);
    drop(in2);

    auto shared = std::make_shared<PwCollection>(g.merged);
    std::string suffix = "_t" + std::to_string(state.tick_count);
    for (std::size_t member = 0; member < 2; ++member) {
        ParticleWave pw;
        pw.id = std::string(particle_type_name(g.out_types[member])) + suffix +
                (member ? "b" : "a");
        pw.type = g.out_types[member];
        pw.mass = member ? mass2 : mass1;
        pw.relativistic = false;
        pw.x = state.grid.x_of(obj.cell);
        pw.momentum =
            aggregate_momentum(*shared, member, state.interaction.momentum_quantum);
        pw.v = pw.mass > 0.0 ? pw.momentum / pw.mass
                             : (pw.momentum >= 0 ? 1.0 : -1.0);
        pw.paths = shared;
        pw.member = member;
        (member ? ev.out2 : ev.out1) = pw.id;
        state.particles.push_back(std::move(pw));
    }
    state.events.push_back(ev);
    return true;
}

void perform_interaction(SystemState& state, const InteractionCandidate& candidate) {
    const auto& [id1, id2] = state.interaction.eligible_pairs[candidate.pair_index];

    auto as_pw = [&](const std::string& id) -> ParticleWave {
        if (const ParticleWave* p = state.find_particle(id)) return *p;
        const FieldState* f = state.find_field(id);
        if (!f) throw InteractionError("interaction names unknown object '" + id + "'");
        // a field enters the pipeline as a single-path wave at the cell
        ParticleWave pw;
        pw.id = f->id;
        pw.type = ParticleType::Generic;
        pw.x = state.grid.x_of(candidate.cell);
        return pw;
    };

    ParticleWave pw1 = as_pw(id1);
    ParticleWave pw2 = as_pw(id2);
    std::vector<InteractionChannel> channels;
    try {
        channels = enumerate_channels(pw1.type, pw2.type, state.interaction.rules);
    } catch (const InteractionError&) {
        // no rule mentions the pair: the encounter is recorded but inert
    }
    if (channels.empty()) {
        state.events.push_back(
            {state.tick_count, candidate.cell, id1, id2, "", ""});
        return;
    }
    InteractionObject obj = form_interaction_object(state, pw1, pw2, candidate.cell);
    auto results = process_channels(obj, channels, state.interaction);
    auto groups = merge_channels(results, state.interaction);
    generate_out_pw(state, groups, obj, id1, id2);
}

}  // namespace qftca
