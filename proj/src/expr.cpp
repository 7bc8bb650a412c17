#include "qftca/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace qftca {

std::string format_number(double v) {
    // Shortest representation that round-trips through the parser.
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Atom::str() const {
    switch (kind) {
        case AtomKind::Symbol: return name;
        case AtomKind::Deriv:
            return (order == 1 ? "d(" : "d2(") + name + "," + var + ")";
        case AtomKind::Opaque: return name + "(" + arg + ")";
        case AtomKind::FormalDeriv:
            return (order == 1 ? "d(" : "d2(") + name + "," + var + ")";
    }
    return "?";
}

Polynomial::Polynomial(double c) {
    if (c != 0.0) terms_.push_back({c, {}});
}

Polynomial::Polynomial(Atom a, int exponent) {
    if (exponent != 0) terms_.push_back({1.0, {{std::move(a), exponent}}});
    else terms_.push_back({1.0, {}});
    normalize();
}

Polynomial Polynomial::from_terms(std::vector<Monomial> terms) {
    Polynomial p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

void Polynomial::normalize() {
    static const Atom imag = Atom::symbol("i");
    for (auto& m : terms_) {
        std::sort(m.factors.begin(), m.factors.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Atom, int>> merged;
        for (auto& f : m.factors) {
            if (!merged.empty() && merged.back().first == f.first)
                merged.back().second += f.second;
            else
                merged.push_back(f);
        }
        std::erase_if(merged, [](const auto& f) { return f.second == 0; });
        // Fold powers of the imaginary unit: i^2 = -1.
        for (auto& f : merged) {
            if (f.first == imag) {
                int e = ((f.second % 4) + 4) % 4;
                if (e >= 2) { m.coeff = -m.coeff; e -= 2; }
                f.second = e;
            }
        }
        std::erase_if(merged, [](const auto& f) { return f.second == 0; });
        m.factors = std::move(merged);
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return a.factors < b.factors; });
    std::vector<Monomial> out;
    for (auto& m : terms_) {
        if (!out.empty() && out.back().same_factors(m))
            out.back().coeff += m.coeff;
        else
            out.push_back(std::move(m));
    }
    std::erase_if(out, [](const Monomial& m) { return m.coeff == 0.0; });
    terms_ = std::move(out);
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].factors.empty());
}

double Polynomial::constant_value() const {
    return terms_.empty() ? 0.0 : terms_[0].coeff;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Monomial> t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(std::move(t));
}

Polynomial Polynomial::operator-() const {
    std::vector<Monomial> t = terms_;
    for (auto& m : t) m.coeff = -m.coeff;
    return from_terms(std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<Monomial> t;
    t.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            Monomial m;
            m.coeff = a.coeff * b.coeff;
            m.factors = a.factors;
            m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
            t.push_back(std::move(m));
        }
    return from_terms(std::move(t));
}

Polynomial Polynomial::operator/(const Polynomial& o) const {
    if (o.terms_.size() != 1)
        throw UnsupportedExpr("division by a sum is not supported");
    const Monomial& d = o.terms_[0];
    std::vector<Monomial> t = terms_;
    for (auto& m : t) {
        m.coeff /= d.coeff;
        for (const auto& f : d.factors) m.factors.push_back({f.first, -f.second});
    }
    return from_terms(std::move(t));
}

Polynomial Polynomial::pow(int exponent) const {
    if (exponent == 0) return Polynomial(1.0);
    if (exponent < 0) return Polynomial(1.0) / this->pow(-exponent);
    Polynomial r = *this;
    for (int k = 1; k < exponent; ++k) r = r * *this;
    return r;
}

Polynomial Polynomial::differentiate(const Atom& wrt) const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        for (size_t k = 0; k < m.factors.size(); ++k) {
            const auto& [atom, exp] = m.factors[k];
            // d(atom)/d(wrt): 1 when equal, the formal derivative for an
            // opaque call differentiated by its argument, otherwise 0.
            Polynomial inner;
            if (atom == wrt) {
                inner = Polynomial(1.0);
            } else if (atom.kind == AtomKind::Opaque &&
                       wrt.kind == AtomKind::Symbol && wrt.name == atom.arg) {
                inner = Polynomial(Atom::formal_deriv(atom.name, 'x'));
            } else {
                continue;
            }
            Monomial dm;
            dm.coeff = m.coeff * exp;
            for (size_t j = 0; j < m.factors.size(); ++j) {
                int e = m.factors[j].second - (j == k ? 1 : 0);
                if (e != 0) dm.factors.push_back({m.factors[j].first, e});
            }
            Polynomial piece = from_terms({dm}) * inner;
            out.insert(out.end(), piece.terms().begin(), piece.terms().end());
        }
    }
    return from_terms(std::move(out));
}

Polynomial Polynomial::total_derivative(char v,
                                        const std::vector<std::string>& dynamical) const {
    auto is_dyn = [&](const std::string& s) {
        return std::find(dynamical.begin(), dynamical.end(), s) != dynamical.end();
    };
    Polynomial result;
    for (const Atom& a : atoms()) {
        Polynomial partial = differentiate(a);
        if (partial.is_zero()) continue;
        Polynomial da;  // d(a)/dv
        switch (a.kind) {
            case AtomKind::Symbol:
                if (is_dyn(a.name)) da = Polynomial(Atom::deriv(a.name, v, 1));
                break;
            case AtomKind::Deriv:
                if (a.var == v) {
                    if (a.order >= 2)
                        throw UnsupportedExpr("derivative of order > 2 of " + a.name);
                    da = Polynomial(Atom::deriv(a.name, v, a.order + 1));
                } else {
                    throw UnsupportedExpr("mixed second derivative of " + a.name +
                                          " is not supported");
                }
                break;
            case AtomKind::Opaque:
                if (is_dyn(a.arg))
                    da = Polynomial(Atom::formal_deriv(a.name, 'x')) *
                         Polynomial(Atom::deriv(a.arg, v, 1));
                else if (v == 'x' && a.arg == "x")
                    da = Polynomial(Atom::formal_deriv(a.name, 'x'));
                break;
            case AtomKind::FormalDeriv:
                throw UnsupportedExpr("second derivative of opaque function " + a.name);
        }
        result = result + partial * da;
    }
    return result;
}

std::vector<Atom> Polynomial::atoms() const {
    std::vector<Atom> out;
    for (const auto& m : terms_)
        for (const auto& f : m.factors)
            if (std::find(out.begin(), out.end(), f.first) == out.end())
                out.push_back(f.first);
    return out;
}

bool Polynomial::contains(const Atom& a) const {
    for (const auto& m : terms_)
        for (const auto& f : m.factors)
            if (f.first == a) return true;
    return false;
}

Polynomial Polynomial::substitute(const Atom& a, const Polynomial& repl) const {
    Polynomial result;
    for (const auto& m : terms_) {
        Polynomial piece(m.coeff);
        for (const auto& [atom, exp] : m.factors) {
            if (atom == a) {
                if (exp < 0) throw UnsupportedExpr("substitution into negative power");
                piece = piece * repl.pow(exp);
            } else {
                piece = piece * Polynomial(atom, exp);
            }
        }
        result = result + piece;
    }
    return result;
}

std::complex<double> Polynomial::evaluate(
    const std::function<std::complex<double>(const Atom&)>& bind) const {
    std::complex<double> sum = 0.0;
    for (const auto& m : terms_) {
        std::complex<double> prod = m.coeff;
        for (const auto& [atom, exp] : m.factors) {
            std::complex<double> v = bind(atom);
            std::complex<double> p = 1.0;
            for (int k = 0; k < std::abs(exp); ++k) p *= v;
            prod *= (exp >= 0) ? p : 1.0 / p;
        }
        sum += prod;
    }
    return sum;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t t = 0; t < terms_.size(); ++t) {
        const Monomial& m = terms_[t];
        double c = m.coeff;
        if (t == 0) {
            if (c < 0) { out += "-"; c = -c; }
        } else {
            out += (c < 0) ? " - " : " + ";
            if (c < 0) c = -c;
        }
        std::string num, den;
        for (const auto& [atom, exp] : m.factors) {
            std::string f = atom.str();
            if (std::abs(exp) > 1) f += "^" + std::to_string(std::abs(exp));
            if (exp > 0) {
                if (!num.empty()) num += "*";
                num += f;
            } else {
                den += "/" + f;
            }
        }
        if (num.empty())
            out += format_number(c);
        else if (c != 1.0)
            out += format_number(c) + "*" + num;
        else
            out += num;
        out += den;
    }
    return out;
}

}  // namespace qftca
