#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qftca/interaction.hpp"
#include "qftca/parse.hpp"
#include "qftca/scenario.hpp"
#include "qftca/snapshot.hpp"

using namespace qftca;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;   // aborted while ticking
constexpr int exit_invalid = 2;   // syntax / validation / usage

struct RunFlags {
    std::string scenario;
    std::string out;
    std::string plot;
    std::string mode;
    bool allow_unstable = false;
    long seed = -1;
    long ticks = -1;
    long snapshot_every = -1;
};

Scenario load_with_overrides(const RunFlags& fl) {
    Scenario sc = load_scenario(fl.scenario);
    if (fl.seed >= 0) sc.seed = static_cast<std::uint64_t>(fl.seed);
    if (fl.ticks >= 0) sc.ticks = fl.ticks;
    if (fl.snapshot_every >= 0) sc.snapshot_every = fl.snapshot_every;
    if (fl.mode == "literal") sc.mode = SchroMode::Literal;
    else if (fl.mode == "corrected") sc.mode = SchroMode::Corrected;
    return sc;
}

int cmd_derive(const RunFlags& fl) {
    Scenario sc = load_scenario(fl.scenario);
    CompiledScenario cs = init_state(sc, fl.allow_unstable);
    for (const auto& d : cs.warnings) std::cerr << d.str() << "\n";
    for (const auto& eom : cs.eoms) {
        std::cout << eom.str() << "\n";
        const StencilProgram& prog = eom.kind == EomKind::Particle
                                         ? cs.state.particle_program
                                         : cs.state.fields.empty()
                                               ? cs.state.particle_program
                                               : cs.state.fields.front().program;
        std::cout << "  family: " << family_name(prog.family) << "\n";
        int n = 0;
        for (const auto& s : prog.step_names)
            std::cout << "  step " << ++n << ": " << s << "\n";
        if (!eom.parameters.empty()) {
            std::cout << "  parameters:";
            for (const auto& p : eom.parameters) std::cout << " " << p;
            std::cout << "\n";
        }
    }
    if (!sc.field_lagrangian.empty()) {
        const std::string& text = sc.field_lagrangian;
        SymbolTable t = SymbolTable::standard();
        for (const auto& [k, v] : sc.constants) t.declare_constant(k);
        DensityCheckReport rep = check_density_requirements(parse_expression(text, t));
        std::cout << "density requirements: dynamical-variables-only="
                  << (rep.dynamical_variables_only ? "pass" : "fail")
                  << " no-explicit-coordinates="
                  << (rep.no_explicit_coordinates ? "pass" : "fail")
                  << " local-first-order=" << (rep.local_first_order ? "pass" : "fail")
                  << " real-valued=" << (rep.real_valued ? "pass" : "fail")
                  << " symmetries=" << DensityCheckReport::symmetries << "\n";
    }
    return exit_ok;
}

int cmd_validate(const RunFlags& fl) {
    Scenario sc = load_scenario(fl.scenario);
    auto diags = validate_scenario(sc, fl.allow_unstable);
    bool bad = false;
    for (const auto& d : diags) {
        std::cerr << d.str() << "\n";
        bad |= d.severity == Diagnostic::Severity::Error;
    }
    if (!bad) std::cout << "ok\n";
    return bad ? exit_invalid : exit_ok;
}

int cmd_run(const RunFlags& fl) {
    Scenario sc = load_with_overrides(fl);
    CompiledScenario cs = init_state(sc, fl.allow_unstable);
    for (const auto& d : cs.warnings) std::cerr << d.str() << "\n";

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!fl.out.empty()) {
        out_file.open(fl.out);
        if (!out_file) {
            std::cerr << "error: cannot write '" << fl.out << "'\n";
            return exit_invalid;
        }
        out = &out_file;
    }

    RunRecord rec;
    rec.seed = sc.seed;
    rec.dt = cs.dt;
    rec.mode = sc.mode == SchroMode::Literal ? "literal" : "corrected";
    rec.allow_unstable = fl.allow_unstable;

    *out << snapshot_header << "\n";
    rec.digest = fnv1a(rec.digest, std::string(snapshot_header) + "\n");
    auto emit = [&](const SystemState& st) {
        std::string block = format_snapshot(st);
        *out << block;
        rec.digest = fnv1a(rec.digest, block);
    };

    try {
        run(cs.state, cs.dt, cs.stop, cs.snapshot_every, emit);
    } catch (const TickError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    rec.ticks = cs.state.tick_count;
    rec.events = cs.state.events;

    if (!fl.plot.empty()) {
        std::ofstream plot(fl.plot);
        if (!plot) {
            std::cerr << "error: cannot write '" << fl.plot << "'\n";
            return exit_invalid;
        }
        plot << format_plot_data(cs.state);
    }
    std::cerr << rec.str();
    return exit_ok;
}

int cmd_channels(const std::string& t1, const std::string& t2, double coupling) {
    auto p1 = parse_particle_type(t1);
    auto p2 = parse_particle_type(t2);
    if (!p1 || !p2) {
        std::cerr << "error: unknown particle type '" << (p1 ? t2 : t1) << "'\n";
        return exit_invalid;
    }
    auto channels = enumerate_channels(*p1, *p2, qed_vertex_rules(coupling));
    std::cout << channels.size() << " channel" << (channels.size() == 1 ? "" : "s")
              << " for (" << particle_type_name(*p1) << ", " << particle_type_name(*p2)
              << ")\n";
    for (const auto& ch : channels)
        std::cout << "  [template " << ch.template_id << "] " << ch.label() << " -> ("
                  << particle_type_name(ch.out_types[0]) << ", "
                  << particle_type_name(ch.out_types[1]) << ")\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice simulator: Lagrangian-derived update rules plus a\n"
                 "path-table interaction layer"};
    app.require_subcommand(1);

    RunFlags fl;
    std::string ch1, ch2;
    double coupling = 0.302822;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", fl.scenario, "scenario file")->required();
        cmd->add_flag("--allow-unstable", fl.allow_unstable,
                      "downgrade stability errors to warnings");
    };

    CLI::App* derive = app.add_subcommand("derive", "print the derived equations and step schedule");
    add_common(derive);

    CLI::App* runc = app.add_subcommand("run", "run a scenario");
    add_common(runc);
    runc->add_option("--seed", fl.seed, "override the scenario seed");
    runc->add_option("--ticks", fl.ticks, "override the tick count");
    runc->add_option("--snapshot-every", fl.snapshot_every, "snapshot cadence in ticks");
    runc->add_option("--mode", fl.mode, "first-order integration mode")
        ->check(CLI::IsMember({"literal", "corrected"}));
    runc->add_option("--out", fl.out, "write snapshots to a file instead of stdout");
    runc->add_option("--plot", fl.plot, "also write gnuplot-ready final-state data");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario without running it");
    add_common(validate);

    CLI::App* channels = app.add_subcommand("channels", "list interaction channels for a type pair");
    channels->add_option("type1", ch1, "first particle type")->required();
    channels->add_option("type2", ch2, "second particle type")->required();
    channels->add_option("--coupling", coupling, "vertex coupling constant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (derive->parsed()) return cmd_derive(fl);
        if (runc->parsed()) return cmd_run(fl);
        if (validate->parsed()) return cmd_validate(fl);
        return cmd_channels(ch1, ch2, coupling);
    } catch (const ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return exit_invalid;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const TickError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
}
