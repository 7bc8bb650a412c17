#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qftca {

// Atoms are the indivisible factors of a monomial: plain symbols,
// derivatives of a dynamical symbol, opaque function applications like V(x),
// and formal derivatives of opaque functions like d(V,x).
enum class AtomKind { Symbol, Deriv, Opaque, FormalDeriv };

struct Atom {
    AtomKind kind = AtomKind::Symbol;
    std::string name;   // symbol name, derivative base symbol, or function name
    char var = 0;       // derivative variable: 't' or 'x'
    int order = 0;      // derivative order, 1 or 2
    std::string arg;    // opaque call argument symbol

    auto operator<=>(const Atom&) const = default;

    static Atom symbol(std::string n) { return {AtomKind::Symbol, std::move(n), 0, 0, {}}; }
    static Atom deriv(std::string base, char v, int ord) {
        return {AtomKind::Deriv, std::move(base), v, ord, {}};
    }
    static Atom opaque(std::string fn, std::string a) {
        return {AtomKind::Opaque, std::move(fn), 0, 0, std::move(a)};
    }
    static Atom formal_deriv(std::string fn, char v) {
        return {AtomKind::FormalDeriv, std::move(fn), v, 1, {}};
    }

    std::string str() const;
};

// One product term: coeff * prod(factor^exponent). Factors are kept sorted
// and exponents are nonzero integers (negative exponents arise from division).
struct Monomial {
    double coeff = 0.0;
    std::vector<std::pair<Atom, int>> factors;

    bool same_factors(const Monomial& o) const { return factors == o.factors; }
    bool operator==(const Monomial&) const = default;
};

// Canonical sum-of-products form. All expression arithmetic normalizes into
// this representation; structural equality is equality of the term lists.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(double c);
    explicit Polynomial(Atom a, int exponent = 1);

    static Polynomial zero() { return Polynomial{}; }

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    double constant_value() const;  // valid only when is_constant()

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    // Division is supported only when the divisor is a single monomial.
    Polynomial operator/(const Polynomial& o) const;
    Polynomial pow(int exponent) const;

    bool operator==(const Polynomial& o) const = default;

    // Partial derivative treating every atom other than `wrt` as constant.
    // Opaque calls V(x) differentiated with respect to their argument yield
    // the formal derivative atom d(V,x).
    Polynomial differentiate(const Atom& wrt) const;

    // Total derivative with respect to variable v ('t' or 'x'), chaining
    // through dynamical symbols.  d/dt x = d(x,t); d/dt d(x,t) = d2(x,t);
    // mixed second derivatives (e.g. d/dt of d(psi,x)) are rejected.
    Polynomial total_derivative(char v, const std::vector<std::string>& dynamical) const;

    // All distinct atoms appearing in the terms.
    std::vector<Atom> atoms() const;
    bool contains(const Atom& a) const;

    // Substitute an atom by a polynomial (atom must appear with positive
    // integer exponents only).
    Polynomial substitute(const Atom& a, const Polynomial& repl) const;

    std::complex<double> evaluate(
        const std::function<std::complex<double>(const Atom&)>& bind) const;

    std::string str() const;

    static Polynomial from_terms(std::vector<Monomial> terms);

private:
    std::vector<Monomial> terms_;
    void normalize();
};

struct UnsupportedExpr : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_number(double v);

}  // namespace qftca
