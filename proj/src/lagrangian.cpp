#include "qftca/lagrangian.hpp"

#include <algorithm>

namespace qftca {

namespace {

// Constant symbols appearing in a polynomial (everything that is neither a
// dynamical symbol nor a derivative/opaque form).
std::vector<std::string> constant_symbols(const Polynomial& p) {
    std::vector<std::string> out;
    for (const Atom& a : p.atoms())
        if (a.kind == AtomKind::Symbol && a.name != "x" && a.name != "psi" &&
            a.name != "i" && a.name != "pi" &&
            std::find(out.begin(), out.end(), a.name) == out.end())
            out.push_back(a.name);
    return out;
}

// Solves the residual c*solved + rest = 0 for `solved`.  The coefficient c
// must not involve dynamical quantities.
EquationOfMotion solve_for(const Polynomial& residual, const Atom& solved,
                           EomKind kind, int time_order) {
    Polynomial c = residual.differentiate(solved);
    if (c.contains(solved) || c.contains(Atom::symbol("x")) ||
        c.contains(Atom::symbol("psi")) || c.contains(Atom::deriv("x", 't', 1)) ||
        c.contains(Atom::deriv("psi", 't', 1)) || c.contains(Atom::deriv("psi", 'x', 1)))
        throw UnsupportedLagrangian("coefficient of " + solved.str() +
                                    " is not constant: " + c.str());
    if (c.is_zero())
        throw DegenerateLagrangian("coefficient of " + solved.str() + " vanishes");
    Polynomial rest = residual - c * Polynomial(solved);
    if (rest.contains(solved))
        throw UnsupportedLagrangian("equation is nonlinear in " + solved.str());
    EquationOfMotion eom;
    eom.kind = kind;
    eom.time_order = time_order;
    eom.solved_for = solved;
    eom.rhs = -rest / c;
    eom.parameters = constant_symbols(eom.rhs);
    return eom;
}

}  // namespace

EquationOfMotion euler_lagrange(const Polynomial& L) {
    const Atom x = Atom::symbol("x");
    const Atom xdot = Atom::deriv("x", 't', 1);
    const Atom psi = Atom::symbol("psi");
    const Atom psi_t = Atom::deriv("psi", 't', 1);
    const Atom psi_x = Atom::deriv("psi", 'x', 1);

    bool uses_particle = L.contains(x) || L.contains(xdot);
    bool uses_field = L.contains(psi) || L.contains(psi_t) || L.contains(psi_x);
    for (const Atom& a : L.atoms()) {
        if (a.kind == AtomKind::Deriv && a.order >= 2)
            throw UnsupportedLagrangian("Lagrangian contains " + a.str() +
                                        "; derivatives must be first order");
        if (a.kind == AtomKind::Opaque) uses_particle = true;
    }
    if (uses_particle && uses_field)
        throw UnsupportedLagrangian("Lagrangian mixes particle and field variables");
    if (!uses_particle && !uses_field)
        throw DegenerateLagrangian("Lagrangian contains no dynamical variable");

    if (uses_particle) {
        // d/dt (dL/dxdot) - dL/dx = 0, solved for d2(x,t).
        Polynomial a = L.differentiate(xdot).total_derivative('t', {"x"});
        Polynomial b = L.differentiate(x);
        return solve_for(a - b, Atom::deriv("x", 't', 2), EomKind::Particle, 2);
    }

    // d/dt (dL/dpsi_t) + d/dx (dL/dpsi_x) - dL/dpsi = 0.
    Polynomial residual = L.differentiate(psi_t).total_derivative('t', {"psi"}) +
                          L.differentiate(psi_x).total_derivative('x', {"psi"}) -
                          L.differentiate(psi);
    const Atom psi_tt = Atom::deriv("psi", 't', 2);
    if (residual.contains(psi_tt))
        return solve_for(residual, psi_tt, EomKind::Field, 2);
    if (residual.contains(psi_t))
        return solve_for(residual, psi_t, EomKind::Field, 1);
    throw UnsupportedLagrangian("Euler-Lagrange residual has no time derivative: " +
                                residual.str());
}

EquationOfMotion classify_eom(const Atom& solved_for, const Polynomial& rhs) {
    EquationOfMotion eom;
    if (solved_for == Atom::deriv("x", 't', 2)) {
        eom.kind = EomKind::Particle;
        eom.time_order = 2;
    } else if (solved_for == Atom::deriv("psi", 't', 2)) {
        eom.kind = EomKind::Field;
        eom.time_order = 2;
    } else if (solved_for == Atom::deriv("psi", 't', 1)) {
        eom.kind = EomKind::Field;
        eom.time_order = 1;
    } else {
        throw UnsupportedLagrangian("cannot solve for " + solved_for.str());
    }
    // The right-hand side must not feed back the solved-for derivative or any
    // time derivative of equal or higher order.
    for (const Atom& a : rhs.atoms()) {
        if (a.kind == AtomKind::Deriv && a.var == 't' && a.order >= eom.time_order)
            throw UnsupportedLagrangian("rhs contains time derivative " + a.str());
        if (eom.kind == EomKind::Particle &&
            (a.name == "psi" || (a.kind == AtomKind::Deriv && a.name == "psi")))
            throw UnsupportedLagrangian("particle equation refers to field variable");
        if (eom.kind == EomKind::Field &&
            (a.name == "x" && a.kind == AtomKind::Symbol))
            throw UnsupportedLagrangian("field equation refers to particle position");
    }
    eom.solved_for = solved_for;
    eom.rhs = rhs;
    eom.parameters = constant_symbols(rhs);
    return eom;
}

DensityCheckReport check_density_requirements(const Polynomial& L) {
    DensityCheckReport r;
    r.dynamical_variables_only = true;
    r.no_explicit_coordinates = true;
    r.local_first_order = true;
    r.real_valued = true;
    for (const Atom& a : L.atoms()) {
        switch (a.kind) {
            case AtomKind::Symbol:
                if (a.name == "x" || a.name == "t") r.no_explicit_coordinates = false;
                else if (a.name == "i") r.real_valued = false;
                break;
            case AtomKind::Deriv:
                if (a.order > 1) r.local_first_order = false;
                break;
            case AtomKind::Opaque:
            case AtomKind::FormalDeriv:
                // V(x) depends on the coordinate, not on the field alone.
                r.dynamical_variables_only = false;
                r.no_explicit_coordinates = false;
                break;
        }
    }
    return r;
}

}  // namespace qftca
