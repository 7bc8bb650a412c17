#pragma once

#include <set>
#include <string>

#include "qftca/expr.hpp"

namespace qftca {

struct SyntaxError : std::runtime_error {
    int line, column;
    SyntaxError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " +
                             std::to_string(c)),
          line(l), column(c) {}
};

struct UndeclaredSymbol : SyntaxError {
    using SyntaxError::SyntaxError;
};

// Declared vocabulary the parser checks identifiers against.
struct SymbolTable {
    std::set<std::string> constants;
    std::set<std::string> dynamical;  // x, psi
    std::set<std::string> opaque;     // V

    // x, psi, the usual physical constants, pi and the imaginary unit i.
    static SymbolTable standard();

    void declare_constant(const std::string& n) { constants.insert(n); }
    bool known(const std::string& n) const {
        return constants.count(n) || dynamical.count(n) || opaque.count(n);
    }
};

// Grammar (see docs/grammar.md):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'? base ('^' integer)?
//   base   := number | '(' expr ')' | deriv | call | identifier
//   deriv  := ('d'|'d2') '(' identifier ',' ('t'|'x') ')'
//   call   := identifier '(' identifier ')'        (opaque functions only)
Polynomial parse_expression(const std::string& source, const SymbolTable& symbols);

inline Polynomial parse_lagrangian(const std::string& source, const SymbolTable& symbols) {
    return parse_expression(source, symbols);
}

}  // namespace qftca
