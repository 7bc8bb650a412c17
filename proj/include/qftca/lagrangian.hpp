#pragma once

#include <string>
#include <vector>

#include "qftca/expr.hpp"

namespace qftca {

enum class EomKind { Particle, Field };

// Dynamical law solved for the highest time derivative.
struct EquationOfMotion {
    EomKind kind;
    int time_order;        // 1 or 2
    Atom solved_for;       // d2(x,t), d2(psi,t) or d(psi,t)
    Polynomial rhs;
    std::vector<std::string> parameters;  // constant symbols the rhs reads

    std::string str() const { return solved_for.str() + " = " + rhs.str(); }
};

struct UnsupportedLagrangian : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateLagrangian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Applies the Euler-Lagrange equation and solves for the highest time
// derivative.  Supported families: polynomial L in {x, d(x,t)} plus an
// opaque V(x) (particle), and polynomial L in {psi, d(psi,t), d(psi,x)}
// (field).
EquationOfMotion euler_lagrange(const Polynomial& L);

// Builds an equation of motion from an already-solved form
// "d2(x,t) = ..." / "d(psi,t) = ..." (the scenario files' `eom =` input).
EquationOfMotion classify_eom(const Atom& solved_for, const Polynomial& rhs);

struct DensityCheckReport {
    bool dynamical_variables_only = false;  // requirement 1
    bool no_explicit_coordinates = false;   // requirement 2
    bool local_first_order = false;         // requirement 3
    bool real_valued = false;               // requirement 4
    // requirement 5 (symmetries / Poincare invariance) is reported, never checked
    static constexpr const char* symmetries = "not checked";

    bool all_checked_pass() const {
        return dynamical_variables_only && no_explicit_coordinates &&
               local_first_order && real_valued;
    }
};

DensityCheckReport check_density_requirements(const Polynomial& L);

}  // namespace qftca
