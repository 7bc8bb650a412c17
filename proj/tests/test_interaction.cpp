#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "qftca/interaction.hpp"

using namespace qftca;

namespace {

const auto E = ParticleType::Electron;
const auto P = ParticleType::Positron;
const auto G = ParticleType::Photon;

// Independent equivalence oracle: instantiate the five templates literally
// and canonicalize each instantiation as an unordered diagram -- two
// vertices, each a sorted list of leg labels, with internal lines reduced
// modulo particle/antiparticle.  Channels are equivalent iff their diagrams
// coincide.
std::string leg_internal(ParticleType t) {
    return (t == G) ? "int:g" : (t == ParticleType::Generic ? "int:?" : "int:e");
}
std::string leg_out(ParticleType t) { return std::string("out:") + particle_type_name(t); }

using Diagram = std::set<std::vector<std::string>>;

std::set<Diagram> oracle_classes(ParticleType n1, ParticleType n2,
                                 const std::vector<VertexRule>& rules) {
    std::vector<VertexRule> splits, combines;
    for (const auto& r : rules) {
        if (!r.enabled) continue;
        (r.kind == VertexRule::Kind::Split ? splits : combines).push_back(r);
    }
    auto matches = [](const VertexRule& r, ParticleType a, ParticleType b) {
        return (r.inputs[0] == a && r.inputs[1] == b) ||
               (r.inputs[0] == b && r.inputs[1] == a);
    };
    bool couples = false;
    for (const auto& cb : combines) couples |= matches(cb, n1, n2);
    std::set<Diagram> classes;
    if (!couples) return classes;

    auto diagram = [](std::vector<std::string> v1, std::vector<std::string> v2) {
        std::sort(v1.begin(), v1.end());
        std::sort(v2.begin(), v2.end());
        return Diagram{v1, v2};
    };

    // template 1
    for (const auto& cb : combines) {
        if (!matches(cb, n1, n2)) continue;
        for (const auto& sp : splits)
            if (sp.inputs[0] == cb.outputs[0])
                classes.insert(diagram(
                    {"in1", "in2", leg_internal(cb.outputs[0])},
                    {leg_internal(cb.outputs[0]), leg_out(sp.outputs[0]),
                     leg_out(sp.outputs[1])}));
    }
    // templates 2..5
    for (int tmpl = 2; tmpl <= 5; ++tmpl) {
        ParticleType parent = tmpl <= 3 ? n1 : n2;
        ParticleType other = tmpl <= 3 ? n2 : n1;
        const char* pleg = tmpl <= 3 ? "in1" : "in2";
        const char* oleg = tmpl <= 3 ? "in2" : "in1";
        for (const auto& sp : splits) {
            if (sp.inputs[0] != parent) continue;
            ParticleType a = sp.outputs[0], b = sp.outputs[1];
            ParticleType re = (tmpl == 2 || tmpl == 4) ? a : b;
            ParticleType keep = (tmpl == 2 || tmpl == 4) ? b : a;
            for (const auto& cb : combines)
                if (matches(cb, re, other))
                    classes.insert(diagram({pleg, leg_out(keep), leg_internal(re)},
                                           {oleg, leg_internal(re), leg_out(cb.outputs[0])}));
        }
    }
    return classes;
}

SystemState scattering_state(std::int64_t p_el_ticks, std::int64_t p_ph_ticks) {
    SystemState st;
    st.grid.extents = {64};
    st.grid.dx = 1.0;
    st.interaction.enabled = true;
    st.interaction.eligible_pairs = {{"el", "ph"}};
    st.interaction.rules = qed_vertex_rules(0.302822);
    st.interaction.granularity = 8;
    st.interaction.momentum_quantum = 1.0 / 64.0;

    auto add = [&](const std::string& id, ParticleType t, double mass,
                   std::int64_t pticks) {
        ParticleWave p;
        p.id = id;
        p.type = t;
        p.mass = mass;
        p.x = 5.0;
        p.momentum = static_cast<double>(pticks) * st.interaction.momentum_quantum;
        MemberState m;
        m.x = p.x;
        m.p = pticks;
        m.n = t;
        p.paths = std::make_shared<PwCollection>();
        p.paths->rows.push_back({{m}, {1.0, 0.0}});
        st.particles.push_back(std::move(p));
    };
    add("el", E, 1.0, p_el_ticks);
    add("ph", G, 0.0, p_ph_ticks);
    st.rebuild_occupancy();
    return st;
}

}  // namespace

// [DERIVED] enumeration equals the brute-force template x rule oracle for
// every ordered pair over {e-, e+, gamma}; every channel is structurally a
// two-in two-out sequence of exactly one split and one combine.
TEST_CASE("channel enumeration vs oracle") {
    auto rules = qed_vertex_rules(1.0);
    for (ParticleType n1 : {E, P, G})
        for (ParticleType n2 : {E, P, G}) {
            CAPTURE(particle_type_name(n1));
            CAPTURE(particle_type_name(n2));
            auto got = enumerate_channels(n1, n2, rules);
            auto want = oracle_classes(n1, n2, rules);
            CHECK(got.size() == want.size());
            std::set<std::string> keys;
            for (const auto& ch : got) {
                keys.insert(ch.topology_key());
                // Rule 2: exactly one split and one combine
                CHECK(ch.split_rule.kind == VertexRule::Kind::Split);
                CHECK(ch.combine_rule.kind == VertexRule::Kind::Combine);
                // Rule 1: two in, two out
                CHECK(ch.in_types.size() == 2);
                CHECK(ch.out_types.size() == 2);
                CHECK(ch.split_rule.outputs.size() == 2);
                CHECK(ch.combine_rule.inputs.size() == 2);
            }
            CHECK(keys.size() == got.size());  // no equivalent duplicates survive
        }
}

TEST_CASE("channel enumeration examples") {
    auto rules = qed_vertex_rules(1.0);
    auto compton = enumerate_channels(E, G, rules);
    REQUIRE(compton.size() == 2);
    CHECK(compton[0].template_id == 1);
    CHECK(compton[0].label() == "combine(e-,gamma)->(e-); split(e-)->(e-,gamma)");
    CHECK(compton[1].label() == "split(e-)->(e-,gamma); combine(e-,gamma)->(e-)");

    auto pair = enumerate_channels(E, P, rules);
    bool has_annihilation = false;
    for (const auto& ch : pair)
        has_annihilation |= ch.label() == "combine(e-,e+)->(gamma); split(gamma)->(e-,e+)";
    CHECK(has_annihilation);

    CHECK(enumerate_channels(G, G, rules).empty());  // no gamma-gamma vertex
    CHECK_THROWS_AS(enumerate_channels(ParticleType::Generic, G, rules),
                    InteractionError);
}

// [DERIVED] split: N alternatives, exact per-row conservation, amplitude
// coupling/sqrt(N); zero-momentum parents split into symmetric pairs.
TEST_CASE("apply_split") {
    VertexRule sp{VertexRule::Kind::Split, {E}, {E, G}, 0.5, true};
    MemberState parent;
    parent.n = E;
    parent.p = 0;
    auto rows = apply_split(parent, {1.0, 0.0}, sp, 4, 4);
    REQUIRE(rows.size() == 4);
    double weight = 0.0;
    std::set<std::int64_t> firsts;
    for (const auto& r : rows) {
        REQUIRE(r.members.size() == 2);
        CHECK(r.members[0].n == E);
        CHECK(r.members[1].n == G);
        CHECK(r.members[0].p + r.members[1].p == parent.p);
        CHECK(std::abs(r.amplitude) == doctest::Approx(0.5 / 2.0));
        weight += std::norm(r.amplitude);
        firsts.insert(r.members[0].p);
    }
    CHECK(weight == doctest::Approx(0.25));  // coupling^2
    for (std::int64_t p : firsts) CHECK(firsts.count(-p));  // symmetric grid

    parent.p = 97;
    for (const auto& r : apply_split(parent, {0.3, 0.4}, sp, 8, 4))
        CHECK(r.members[0].p + r.members[1].p == 97);

    CHECK_THROWS_AS(apply_split(parent, {1, 0}, sp, 0, 4), InteractionError);
    parent.n = G;
    CHECK_THROWS_AS(apply_split(parent, {1, 0}, sp, 4, 4), InteractionError);
}

TEST_CASE("apply_combine") {
    VertexRule cb{VertexRule::Kind::Combine, {E, G}, {E}, 0.7, true};
    MemberState a, b;
    a.n = E;
    a.p = 40;
    b.n = G;
    b.p = -13;
    auto [c, amp] = apply_combine(a, b, {1.0, 0.0}, cb);
    CHECK(c.n == E);
    CHECK(c.p == 27);
    CHECK(amp == std::complex<double>(0.7, 0.0));
    // operand order is a type multiset, not a sequence
    auto [c2, amp2] = apply_combine(b, a, {1.0, 0.0}, cb);
    CHECK(c2.p == 27);
    b.n = P;
    CHECK_THROWS_AS(apply_combine(a, b, {1.0, 0.0}, cb), InteractionError);
}

TEST_CASE("interaction object from covering rows") {
    SystemState st = scattering_state(64, -16);
    auto obj = form_interaction_object(st, st.particles[0], st.particles[1], 5);
    CHECK(obj.rows.arity() == 2);
    CHECK(obj.rows.rows.size() == 1);  // 1 x 1 covering paths
    CHECK(obj.rows.total_weight() == doctest::Approx(1.0));
    CHECK(obj.total_momentum == 48);
    CHECK_THROWS_AS(form_interaction_object(st, st.particles[0], st.particles[1], 40),
                    InteractionError);
}

// [DERIVED] end-to-end electron + photon pipeline, N = 8.
TEST_CASE("interaction pipeline") {
    SystemState st = scattering_state(64, -16);
    auto channels = enumerate_channels(E, G, st.interaction.rules);
    auto obj = form_interaction_object(st, st.particles[0], st.particles[1], 5);
    auto results = process_channels(obj, channels, st.interaction);
    REQUIRE(results.size() == 2);
    for (const auto& res : results) {
        CHECK(res.out.rows.size() == 8);
        for (const auto& row : res.out.rows)
            CHECK(row.members[0].p + row.members[1].p == 48);  // exact
    }
    auto groups = merge_channels(results, st.interaction);
    REQUIRE(groups.size() == 1);
    CHECK(std::abs(groups[0].merged.total_weight() - 1.0) <= 1e-9);
    for (const auto& row : groups[0].merged.rows)
        CHECK(row.members[0].p + row.members[1].p == 48);

    auto old_el_paths = st.find_particle("el")->paths;
    bool made = generate_out_pw(st, groups, obj, "el", "ph");
    CHECK(made);
    // collapse completeness: the in objects are gone, paths and all
    CHECK(st.find_particle("el") == nullptr);
    CHECK(st.find_particle("ph") == nullptr);
    REQUIRE(st.particles.size() == 2);
    CHECK(st.particles[0].paths == st.particles[1].paths);  // correlated table
    CHECK(st.particles[0].paths != old_el_paths);
    CHECK(st.particles[0].paths->rows.size() == 8);
    CHECK(std::abs(st.particles[0].paths->total_weight() - 1.0) <= 1e-9);
    REQUIRE(st.events.size() == 1);
    CHECK(st.events[0].in1 == "el");
    CHECK(!st.events[0].out1.empty());
}

// [DERIVED] the out-collection depends on the in-state only through the
// conserved totals: distinct in-partitions of the same total momentum give
// identical out paths, so the interaction map is not injective.
TEST_CASE("non-injectivity witness") {
    SystemState s1 = scattering_state(64, -16);
    SystemState s2 = scattering_state(32, 16);
    auto channels = enumerate_channels(E, G, s1.interaction.rules);
    auto g1 = merge_channels(
        process_channels(form_interaction_object(s1, s1.particles[0], s1.particles[1], 5),
                         channels, s1.interaction),
        s1.interaction);
    auto g2 = merge_channels(
        process_channels(form_interaction_object(s2, s2.particles[0], s2.particles[1], 5),
                         channels, s2.interaction),
        s2.interaction);
    REQUIRE(g1.size() == 1);
    REQUIRE(g2.size() == 1);
    REQUIRE(g1[0].merged.rows.size() == g2[0].merged.rows.size());
    for (std::size_t i = 0; i < g1[0].merged.rows.size(); ++i) {
        const auto& r1 = g1[0].merged.rows[i];
        const auto& r2 = g2[0].merged.rows[i];
        CHECK(r1.members[0].p == r2.members[0].p);
        CHECK(r1.members[1].p == r2.members[1].p);
        CHECK(r1.amplitude == r2.amplitude);
    }
}

// [DERIVED] a -1 sign on one of two equal-amplitude channels cancels the
// group entirely: the interaction is voided and the in-particles survive.
TEST_CASE("signed merge can cancel") {
    SystemState st = scattering_state(64, -16);
    auto channels = enumerate_channels(E, G, st.interaction.rules);
    REQUIRE(channels.size() == 2);
    st.interaction.sign_table[channels[1].label()] = -1;
    auto obj = form_interaction_object(st, st.particles[0], st.particles[1], 5);
    auto groups = merge_channels(process_channels(obj, channels, st.interaction),
                                 st.interaction);
    CHECK(groups.empty());
    CHECK_FALSE(generate_out_pw(st, groups, obj, "el", "ph"));
    CHECK(st.find_particle("el") != nullptr);
    CHECK(st.find_particle("ph") != nullptr);
    REQUIRE(st.events.size() == 1);
    CHECK(st.events[0].out1.empty());  // recorded as void
}

TEST_CASE("detection and selection") {
    SystemState st = scattering_state(64, -16);
    auto cands = detect_interaction(st);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].cell == 5);
    CHECK(cands[0].weight == doctest::Approx(1.0));

    // one rng draw, no matter how many candidates
    Generator g(9);
    auto g_copy = g;
    g_copy.next_double();
    std::vector<InteractionCandidate> two{{0, 5, 1.0}, {0, 6, 2.0}};
    select_interaction_cell(two, g);
    CHECK(g.state() == g_copy.state());

    st.particles[1].paths->rows[0].members[0].x = 30.0;  // move apart
    st.rebuild_occupancy();
    CHECK(detect_interaction(st).empty());
}

// [DERIVED] weighted selection statistics: weights (1,3) over 1e5 seeded
// trials hit 25/75 within 1.5 points, chi-square p > 0.01 (1 dof).
TEST_CASE("selection statistics") {
    Generator g(20260823);
    const int trials = 100000;
    std::vector<double> w{1.0, 3.0};
    int n0 = 0;
    for (int i = 0; i < trials; ++i)
        if (g.pick_weighted(w) == 0) ++n0;
    double frac = static_cast<double>(n0) / trials;
    CHECK(std::abs(frac - 0.25) <= 0.015);
    double e0 = 0.25 * trials, e1 = 0.75 * trials;
    double chi2 = (n0 - e0) * (n0 - e0) / e0 +
                  (trials - n0 - e1) * (trials - n0 - e1) / e1;
    CHECK(chi2 < 6.635);  // chi-square(1) critical value at p = 0.01
}

// whole-tick integration: the encounter fires exactly once
TEST_CASE("tick processes at most one interaction") {
    SystemState st = scattering_state(64, -16);
    st.particle_program.family = StencilFamily::Particle2;
    tick(st, 1.0);
    CHECK(st.events.size() == 1);
    CHECK(st.particles.size() == 2);
    tick(st, 1.0);  // out particles are not an eligible pair
    CHECK(st.events.size() == 1);
}
