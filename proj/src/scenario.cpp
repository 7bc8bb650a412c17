#include "qftca/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qftca/parse.hpp"

namespace qftca {

SourceLoc Scenario::loc_of(const std::string& key) const {
    auto it = provenance.find(key);
    if (it != provenance.end()) return it->second;
    return {path, 0};
}

// ----------------------------------------------------------------- parsing

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_num(const std::string& v, const SourceLoc& loc) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ScenarioError(loc.str() + ": error: '" + v + "' is not a number");
    }
}

long parse_int(const std::string& v, const SourceLoc& loc) {
    try {
        std::size_t used = 0;
        long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ScenarioError(loc.str() + ": error: '" + v + "' is not an integer");
    }
}

bool parse_bool(const std::string& v, const SourceLoc& loc) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ScenarioError(loc.str() + ": error: '" + v + "' is not a boolean");
}

std::vector<std::string> split_ws(const std::string& v) {
    std::istringstream in(v);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    Scenario sc;
    sc.path = name;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section, section_id;
    FieldSection* cur_field = nullptr;
    ParticleSection* cur_particle = nullptr;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        SourceLoc loc{name, lineno};

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioError(loc.str() + ": error: unterminated section header");
            auto words = split_ws(line.substr(1, line.size() - 2));
            if (words.empty())
                throw ScenarioError(loc.str() + ": error: empty section header");
            section = words[0];
            section_id = words.size() > 1 ? words[1] : "";
            cur_field = nullptr;
            cur_particle = nullptr;
            if (section == "field") {
                if (section_id.empty())
                    throw ScenarioError(loc.str() + ": error: [field] needs an id");
                sc.fields.push_back({});
                cur_field = &sc.fields.back();
                cur_field->id = section_id;
                cur_field->loc = loc;
            } else if (section == "particle") {
                if (section_id.empty())
                    throw ScenarioError(loc.str() + ": error: [particle] needs an id");
                sc.particles.push_back({});
                cur_particle = &sc.particles.back();
                cur_particle->id = section_id;
                cur_particle->loc = loc;
            } else if (section != "lagrangian" && section != "eom" &&
                       section != "constants" && section != "grid" && section != "run" &&
                       section != "potential" && section != "interaction") {
                throw ScenarioError(loc.str() + ": error: unknown section [" + section +
                                    "]");
            }
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(loc.str() + ": error: expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            throw ScenarioError(loc.str() + ": error: expected 'key = value' in a section");
        std::string pkey = section + (section_id.empty() ? "" : " " + section_id) + "." + key;
        sc.provenance[pkey] = loc;

        auto unknown = [&]() -> ScenarioError {
            return ScenarioError(loc.str() + ": error: unknown key '" + key + "' in [" +
                                 section + "]");
        };

        if (section == "lagrangian") {
            if (key == "particle") sc.particle_lagrangian = value;
            else if (key == "field") sc.field_lagrangian = value;
            else throw unknown();
        } else if (section == "eom") {
            // value looks like "d2(x,t) = -k*x/m"
            std::size_t e2 = value.find('=');
            if (e2 == std::string::npos)
                throw ScenarioError(loc.str() + ": error: eom needs 'lhs = rhs'");
            std::string lhs = trim(value.substr(0, e2));
            std::string rhs = trim(value.substr(e2 + 1));
            if (key == "particle") {
                sc.particle_eom_lhs = lhs;
                sc.particle_eom_rhs = rhs;
            } else if (key == "field") {
                sc.field_eom_lhs = lhs;
                sc.field_eom_rhs = rhs;
            } else throw unknown();
        } else if (section == "constants") {
            sc.constants[key] = parse_num(value, loc);
        } else if (section == "grid") {
            if (key == "dim") sc.grid.dim = static_cast<int>(parse_int(value, loc));
            else if (key == "cells") {
                sc.grid.extents.clear();
                for (const auto& w : split_ws(value)) {
                    long n = parse_int(w, loc);
                    if (n < 1)
                        throw ScenarioError(loc.str() + ": error: cell count must be >= 1");
                    sc.grid.extents.push_back(static_cast<std::size_t>(n));
                }
            } else if (key == "dx") sc.grid.dx = parse_num(value, loc);
            else if (key == "origin") sc.grid.origin = parse_num(value, loc);
            else if (key == "boundary") {
                if (value == "periodic") sc.grid.boundary = BoundaryMode::Periodic;
                else if (value == "dirichlet") sc.grid.boundary = BoundaryMode::Dirichlet;
                else
                    throw ScenarioError(loc.str() +
                                        ": error: boundary must be periodic|dirichlet");
            } else throw unknown();
        } else if (section == "run") {
            if (key == "dt") {
                sc.dt = parse_num(value, loc);
                sc.have_dt = true;
            } else if (key == "ticks") sc.ticks = parse_int(value, loc);
            else if (key == "max_time") sc.max_time = parse_num(value, loc);
            else if (key == "seed")
                sc.seed = static_cast<std::uint64_t>(parse_int(value, loc));
            else if (key == "snapshot_every") sc.snapshot_every = parse_int(value, loc);
            else if (key == "mode") {
                if (value == "corrected") sc.mode = SchroMode::Corrected;
                else if (value == "literal") sc.mode = SchroMode::Literal;
                else
                    throw ScenarioError(loc.str() +
                                        ": error: mode must be literal|corrected");
            } else throw unknown();
        } else if (section == "potential") {
            if (key == "kind") {
                if (value != "none" && value != "constant_force" && value != "expr")
                    throw ScenarioError(
                        loc.str() + ": error: kind must be none|constant_force|expr");
                sc.potential_kind = value;
            } else if (key == "force") sc.potential_force = parse_num(value, loc);
            else if (key == "expr") sc.potential_expr = value;
            else throw unknown();
        } else if (section == "field") {
            FieldSection& f = *cur_field;
            if (key == "profile") f.profile = value;
            else if (key == "center") f.center = parse_num(value, loc);
            else if (key == "center_y") f.center_y = parse_num(value, loc);
            else if (key == "width") f.width = parse_num(value, loc);
            else if (key == "amplitude") f.amplitude = parse_num(value, loc);
            else if (key == "wavenumber") f.wavenumber = parse_num(value, loc);
            else if (key == "mode_number")
                f.mode_number = static_cast<int>(parse_int(value, loc));
            else if (key == "velocity") f.velocity = parse_num(value, loc);
            else if (key == "norm_limit") f.norm_limit = parse_num(value, loc);
            else if (key == "occupancy_threshold")
                f.occupancy_threshold = parse_num(value, loc);
            else throw unknown();
        } else if (section == "particle") {
            ParticleSection& p = *cur_particle;
            if (key == "type") p.type = value;
            else if (key == "x") p.x = parse_num(value, loc);
            else if (key == "v") p.v = parse_num(value, loc);
            else if (key == "mass") p.mass = parse_num(value, loc);
            else if (key == "momentum") {
                p.momentum = parse_num(value, loc);
                p.has_momentum = true;
            } else if (key == "relativistic") p.relativistic = parse_bool(value, loc);
            else throw unknown();
        } else if (section == "interaction") {
            InteractionConfig& ic = sc.interaction;
            if (key == "enabled") ic.enabled = parse_bool(value, loc);
            else if (key == "pair") {
                auto ids = split_ws(value);
                if (ids.size() != 2)
                    throw ScenarioError(loc.str() + ": error: pair needs two object ids");
                ic.eligible_pairs.emplace_back(ids[0], ids[1]);
            } else if (key == "granularity")
                ic.granularity = static_cast<int>(parse_int(value, loc));
            else if (key == "window") ic.momentum_window = parse_int(value, loc);
            else if (key == "momentum_quantum") ic.momentum_quantum = parse_num(value, loc);
            else if (key == "occupancy_threshold")
                ic.occupancy_threshold = parse_num(value, loc);
            else if (key == "prune_threshold")
                ic.path_prune_threshold = parse_num(value, loc);
            else if (key == "coupling") ic.coupling = parse_num(value, loc);
            else if (key == "rules") {
                if (value != "qed" && value != "none")
                    throw ScenarioError(loc.str() + ": error: rules must be qed|none");
                if (value == "qed") ic.rules = qed_vertex_rules(ic.coupling);
                else ic.rules.clear();
            } else if (key == "sign") {
                // "sign = -1 <channel label>"
                std::size_t sp = value.find(' ');
                if (sp == std::string::npos)
                    throw ScenarioError(loc.str() +
                                        ": error: sign needs '<+1|-1> <channel label>'");
                long s = parse_int(trim(value.substr(0, sp)), loc);
                if (s != 1 && s != -1)
                    throw ScenarioError(loc.str() + ": error: sign must be +1 or -1");
                ic.sign_table[trim(value.substr(sp + 1))] = static_cast<int>(s);
            } else throw unknown();
        }
    }

    if (sc.grid.extents.empty()) sc.grid.extents.assign(sc.grid.dim, 64);
    if (static_cast<int>(sc.grid.extents.size()) != sc.grid.dim)
        throw ScenarioError(sc.loc_of("grid.cells").str() +
                            ": error: cell counts do not match grid dim");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

// ---------------------------------------------------------------- building

namespace {

struct BuildAbort {};  // fatal diagnostic already recorded

class Builder {
public:
    Builder(const Scenario& sc, bool allow_unstable, std::vector<Diagnostic>& diags)
        : sc_(sc), allow_unstable_(allow_unstable), diags_(diags) {}

    void error(const std::string& msg, const SourceLoc& loc) {
        diags_.push_back({Diagnostic::Severity::Error, msg, loc});
    }
    [[noreturn]] void fatal(const std::string& msg, const SourceLoc& loc) {
        error(msg, loc);
        throw BuildAbort{};
    }
    void warn(const std::string& msg, const SourceLoc& loc) {
        diags_.push_back({Diagnostic::Severity::Warning, msg, loc});
    }

    CompiledScenario build();

private:
    const Scenario& sc_;
    bool allow_unstable_;
    std::vector<Diagnostic>& diags_;

    SymbolTable symbols() const {
        SymbolTable t = SymbolTable::standard();
        for (const auto& [k, v] : sc_.constants) t.declare_constant(k);
        return t;
    }

    Polynomial parse_checked(const std::string& text, const SourceLoc& loc) {
        try {
            return parse_expression(text, symbols());
        } catch (const SyntaxError& e) {
            fatal(e.what(), loc);
        }
    }

    Atom solved_atom(const std::string& lhs_text, const SourceLoc& loc) {
        Polynomial lhs = parse_checked(lhs_text, loc);
        auto atoms = lhs.atoms();
        if (atoms.size() == 1 && atoms[0].kind == AtomKind::Deriv &&
            lhs == Polynomial(atoms[0]))
            return atoms[0];
        fatal("equation left side must be a single time derivative", loc);
    }

    EquationOfMotion derive(const std::string& lagrangian, const std::string& eom_lhs,
                            const std::string& eom_rhs, const std::string& what) {
        SourceLoc lloc = sc_.loc_of("lagrangian." + what);
        SourceLoc eloc = sc_.loc_of("eom." + what);
        try {
            if (!lagrangian.empty())
                return euler_lagrange(parse_checked(lagrangian, lloc));
            return classify_eom(solved_atom(eom_lhs, eloc), parse_checked(eom_rhs, eloc));
        } catch (const UnsupportedLagrangian& e) {
            fatal(e.what(), lagrangian.empty() ? eloc : lloc);
        } catch (const DegenerateLagrangian& e) {
            fatal(e.what(), lloc);
        } catch (const UnsupportedExpr& e) {
            fatal(e.what(), lagrangian.empty() ? eloc : lloc);
        }
    }

    StencilProgram compile(const EquationOfMotion& eom, const SourceLoc& loc) {
        try {
            return compile_stencil(eom, sc_.constants);
        } catch (const StencilError& e) {
            fatal(e.what(), loc);
        }
    }

    std::vector<double> sample_potential(const SourceLoc& loc) {
        std::vector<double> v(sc_.grid.extents[0]);
        Polynomial p = parse_checked(sc_.potential_expr, loc);
        for (std::size_t c = 0; c < v.size(); ++c) {
            double xc = sc_.grid.x_of(c);
            try {
                auto val = p.evaluate([&](const Atom& a) -> std::complex<double> {
                    if (a.kind == AtomKind::Symbol) {
                        if (a.name == "x") return xc;
                        if (a.name == "pi") return std::numbers::pi;
                        auto it = sc_.constants.find(a.name);
                        if (it != sc_.constants.end()) return it->second;
                    }
                    throw UnsupportedExpr("potential expression may only use x and constants (got " +
                                          a.str() + ")");
                });
                if (std::abs(val.imag()) > 1e-12)
                    fatal("potential expression must be real-valued", loc);
                v[c] = val.real();
            } catch (const UnsupportedExpr& e) {
                fatal(e.what(), loc);
            }
        }
        return v;
    }

    std::complex<double> profile_value(const FieldSection& fs, double x, double y) const {
        using namespace std::complex_literals;
        if (fs.profile == "gaussian") {
            double r2 = (x - fs.center) * (x - fs.center);
            if (sc_.grid.dim == 2) r2 += (y - fs.center_y) * (y - fs.center_y);
            double env = fs.amplitude * std::exp(-r2 / (2.0 * fs.width * fs.width));
            return env * std::exp(1i * (fs.wavenumber * x));
        }
        if (fs.profile == "sine") {
            std::size_t n = sc_.grid.extents[0];
            double L = (sc_.grid.boundary == BoundaryMode::Dirichlet)
                           ? (static_cast<double>(n) + 1.0) * sc_.grid.dx
                           : static_cast<double>(n) * sc_.grid.dx;
            double u = x - sc_.grid.origin +
                       (sc_.grid.boundary == BoundaryMode::Dirichlet ? sc_.grid.dx : 0.0);
            return fs.amplitude *
                   std::sin(static_cast<double>(fs.mode_number) * std::numbers::pi * u / L);
        }
        if (fs.profile == "constant") return fs.amplitude;
        return 0.0;  // impulse handled cell-wise
    }

    FieldState make_field(const FieldSection& fs, const StencilProgram& prog, double dt) {
        FieldState f;
        f.id = fs.id;
        f.dim = sc_.grid.dim;
        f.extents = sc_.grid.extents;
        f.dx = sc_.grid.dx;
        f.boundary = sc_.grid.boundary;
        f.program = prog;
        f.norm_limit = fs.norm_limit;
        f.occupancy_threshold = fs.occupancy_threshold;
        std::size_t n = f.cells();
        f.psi.assign(n, 0.0);

        auto coords = [&](std::size_t c) {
            std::size_t nx = f.extents[0];
            double x = sc_.grid.origin + static_cast<double>(c % nx) * f.dx;
            double y = sc_.grid.origin + static_cast<double>(c / nx) * f.dx;
            return std::pair{x, y};
        };

        if (fs.profile == "impulse") {
            f.psi[sc_.grid.cell_of(fs.center)] = fs.amplitude;
        } else {
            for (std::size_t c = 0; c < n; ++c) {
                auto [x, y] = coords(c);
                f.psi[c] = profile_value(fs, x, y);
            }
        }

        if (prog.family == StencilFamily::FieldSecondOrder) {
            f.psi_prev.assign(n, 0.0);
            if (fs.profile == "impulse" || fs.velocity == 0.0) {
                f.psi_prev = f.psi;  // zero initial time derivative
            } else {
                // traveling profile: previous slice is the profile shifted back
                for (std::size_t c = 0; c < n; ++c) {
                    auto [x, y] = coords(c);
                    f.psi_prev[c] = profile_value(fs, x + fs.velocity * dt, y);
                }
            }
        } else {
            f.dpsi_dt.assign(n, 0.0);
        }

        if (prog.field_rhs.uses_potential) {
            if (sc_.potential_kind == "expr")
                f.potential = sample_potential(sc_.loc_of("potential.expr"));
            else if (sc_.potential_kind == "constant_force") {
                f.potential.resize(n);
                for (std::size_t c = 0; c < n; ++c)
                    f.potential[c] = -sc_.potential_force * coords(c).first;
            } else {
                f.potential.assign(n, 0.0);
            }
        }
        return f;
    }
};

CompiledScenario Builder::build() {
    CompiledScenario out;
    SystemState& st = out.state;
    st.grid = sc_.grid;
    st.schro_mode = sc_.mode;
    st.rng = Generator(sc_.seed);
    st.interaction = sc_.interaction;

    if (sc_.grid.dim != 1 && sc_.grid.dim != 2)
        fatal("grid dim must be 1 or 2", sc_.loc_of("grid.dim"));
    if (sc_.grid.dx <= 0.0) fatal("dx must be positive", sc_.loc_of("grid.dx"));
    for (std::size_t e : sc_.grid.extents)
        if (e < 3) fatal("grid needs at least 3 cells per axis", sc_.loc_of("grid.cells"));

    bool want_field_model = !sc_.fields.empty();
    bool want_particle_model = !sc_.particles.empty();
    if (want_field_model && sc_.field_lagrangian.empty() && sc_.field_eom_lhs.empty())
        fatal("scenario declares fields but no field model",
              sc_.fields.front().loc);
    if (want_particle_model && sc_.particle_lagrangian.empty() &&
        sc_.particle_eom_lhs.empty())
        fatal("scenario declares particles but no particle model",
              sc_.particles.front().loc);

    StencilProgram field_prog;
    if (want_field_model) {
        EquationOfMotion eom =
            derive(sc_.field_lagrangian, sc_.field_eom_lhs, sc_.field_eom_rhs, "field");
        if (eom.kind != EomKind::Field)
            fatal("field model derives a particle equation",
                  sc_.loc_of(sc_.field_lagrangian.empty() ? "eom.field"
                                                          : "lagrangian.field"));
        out.eoms.push_back(eom);
        field_prog = compile(eom, sc_.loc_of(sc_.field_lagrangian.empty()
                                                 ? "eom.field"
                                                 : "lagrangian.field"));
    }
    if (want_particle_model) {
        EquationOfMotion eom = derive(sc_.particle_lagrangian, sc_.particle_eom_lhs,
                                      sc_.particle_eom_rhs, "particle");
        if (eom.kind != EomKind::Particle)
            fatal("particle model derives a field equation",
                  sc_.loc_of(sc_.particle_lagrangian.empty() ? "eom.particle"
                                                             : "lagrangian.particle"));
        out.eoms.push_back(eom);
        st.particle_program =
            compile(eom, sc_.loc_of(sc_.particle_lagrangian.empty()
                                        ? "eom.particle"
                                        : "lagrangian.particle"));
    }

    // timestep: explicit, or half the CFL bound of a second-order field
    double dt = sc_.dt;
    double wave_speed = 0.0;
    if (want_field_model && field_prog.family == StencilFamily::FieldSecondOrder &&
        field_prog.field_rhs.linear_wave && field_prog.field_rhs.wave_a > 0.0)
        wave_speed = std::sqrt(field_prog.field_rhs.wave_a);
    if (!sc_.have_dt) {
        if (wave_speed > 0.0)
            dt = 0.5 * sc_.grid.dx / wave_speed;
        else
            fatal("run.dt is required for this scenario", sc_.loc_of("run.dt"));
    }
    if (dt <= 0.0) fatal("dt must be positive", sc_.loc_of("run.dt"));
    out.dt = dt;

    if (wave_speed > 0.0) {
        double cfl = wave_speed * dt / sc_.grid.dx;
        if (cfl > 1.0 + 1e-12) {
            std::string msg = "unstable timestep: wave CFL number " +
                              format_number(cfl) + " exceeds 1";
            if (allow_unstable_)
                warn(msg + " (proceeding as requested)", sc_.loc_of("run.dt"));
            else
                error(msg, sc_.loc_of("run.dt"));
        }
    }
    if (want_field_model && field_prog.family == StencilFamily::FieldFirstOrder &&
        field_prog.field_rhs.schro_linear) {
        double r = std::abs(field_prog.field_rhs.schro_c1) * dt /
                   (sc_.grid.dx * sc_.grid.dx);
        if (r > 0.1)
            warn("diffusion number " + format_number(r) +
                     " exceeds 0.1; expect visible integration error",
                 sc_.loc_of("run.dt"));
    }

    for (const auto& fs : sc_.fields) {
        if (st.find_field(fs.id) || st.find_particle(fs.id))
            fatal("duplicate object id '" + fs.id + "'", fs.loc);
        if (fs.profile != "gaussian" && fs.profile != "sine" &&
            fs.profile != "constant" && fs.profile != "impulse")
            fatal("unknown profile '" + fs.profile + "'",
                  sc_.loc_of("field " + fs.id + ".profile"));
        if (fs.width <= 0.0)
            fatal("field width must be positive", sc_.loc_of("field " + fs.id + ".width"));
        st.fields.push_back(make_field(fs, field_prog, dt));
    }

    for (const auto& ps : sc_.particles) {
        if (st.find_field(ps.id) || st.find_particle(ps.id))
            fatal("duplicate object id '" + ps.id + "'", ps.loc);
        auto type = parse_particle_type(ps.type);
        if (!type)
            fatal("unknown particle type '" + ps.type + "'",
                  sc_.loc_of("particle " + ps.id + ".type"));
        ParticleWave p;
        p.id = ps.id;
        p.type = *type;
        p.mass = p.type == ParticleType::Photon ? 0.0 : ps.mass;
        p.relativistic = ps.relativistic;
        p.x = ps.x;
        p.v = ps.v;
        p.momentum = ps.has_momentum ? ps.momentum : p.mass * ps.v;
        if (p.mass > 0.0 && ps.has_momentum) p.v = p.momentum / p.mass;
        if (p.relativistic && p.mass <= 0.0)
            fatal("a massless particle cannot use the relativistic clock",
                  sc_.loc_of("particle " + ps.id + ".relativistic"));
        MemberState m;
        m.x = p.x;
        m.p = static_cast<std::int64_t>(
            std::llround(p.momentum / sc_.interaction.momentum_quantum));
        m.n = p.type;
        p.paths = std::make_shared<PwCollection>();
        p.paths->rows.push_back({{m}, {1.0, 0.0}});
        p.member = 0;
        st.particles.push_back(std::move(p));
    }

    if (sc_.potential_kind == "constant_force") {
        st.potential.kind = PotentialBinding::Kind::ConstantForce;
        st.potential.force = sc_.potential_force;
    } else if (sc_.potential_kind == "expr") {
        if (!sc_.particles.empty()) {
            st.potential.kind = PotentialBinding::Kind::Lattice;
            st.potential.lattice = sample_potential(sc_.loc_of("potential.expr"));
        }
    }
    bool particle_needs_potential =
        want_particle_model && st.particle_program.particle_rhs.uses_potential;
    if (particle_needs_potential && sc_.potential_kind == "none")
        fatal("the particle equation reads dV/dx but no [potential] is given",
              sc_.loc_of(sc_.particle_lagrangian.empty() ? "eom.particle"
                                                         : "lagrangian.particle"));

    if (st.interaction.enabled) {
        if (st.interaction.rules.empty())
            st.interaction.rules = qed_vertex_rules(st.interaction.coupling);
        if (st.interaction.granularity < 1)
            fatal("interaction granularity must be >= 1",
                  sc_.loc_of("interaction.granularity"));
        if (st.interaction.momentum_quantum <= 0.0)
            fatal("momentum_quantum must be positive",
                  sc_.loc_of("interaction.momentum_quantum"));
        for (const auto& [a, b] : st.interaction.eligible_pairs) {
            for (const std::string& id : {a, b})
                if (!st.find_field(id) && !st.find_particle(id))
                    fatal("interaction pair names unknown object '" + id + "'",
                          sc_.loc_of("interaction.pair"));
            if (a == b)
                fatal("interaction pair must name two distinct objects",
                      sc_.loc_of("interaction.pair"));
        }
    }

    out.stop.max_ticks = sc_.ticks;
    out.stop.max_time = sc_.max_time;
    out.snapshot_every = sc_.snapshot_every;
    return out;
}

}  // namespace

std::vector<Diagnostic> validate_scenario(const Scenario& sc, bool allow_unstable) {
    std::vector<Diagnostic> diags;
    try {
        Builder(sc, allow_unstable, diags).build();
    } catch (const BuildAbort&) {
        // the fatal diagnostic is already in the list
    }
    return diags;
}

CompiledScenario init_state(const Scenario& sc, bool allow_unstable) {
    std::vector<Diagnostic> diags;
    try {
        CompiledScenario out = Builder(sc, allow_unstable, diags).build();
        for (const auto& d : diags) {
            if (d.severity == Diagnostic::Severity::Error) throw ScenarioError(d.str());
            out.warnings.push_back(d);
        }
        return out;
    } catch (const BuildAbort&) {
        for (const auto& d : diags)
            if (d.severity == Diagnostic::Severity::Error) throw ScenarioError(d.str());
        throw ScenarioError("scenario build failed");
    }
}

}  // namespace qftca
