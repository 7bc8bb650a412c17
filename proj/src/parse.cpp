#include "qftca/parse.hpp"

#include <cctype>
#include <cstdlib>

namespace qftca {

SymbolTable SymbolTable::standard() {
    SymbolTable t;
    t.dynamical = {"x", "psi"};
    t.constants = {"m", "k", "F", "v", "c_w", "nu", "psi0", "hbar", "q", "pi", "i"};
    t.opaque = {"V"};
    return t;
}

namespace {

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line, col); }

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' ||
                                    src[pos] == '\n' || src[pos] == '\r')) {
            if (src[pos] == '\n') { ++line; col = 1; } else ++col;
            ++pos;
        }
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    char get() {
        char c = peek();
        if (pos < src.size()) { ++pos; ++col; }
        return c;
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }

    static bool ident_start(unsigned char c) {
        return std::isalpha(c) || c == '_' || c >= 0x80;
    }
    static bool ident_char(unsigned char c) {
        return std::isalnum(c) || c == '_' || c >= 0x80;
    }

    std::string identifier() {
        skip_ws();
        if (pos >= src.size() || !ident_start(src[pos])) fail("expected identifier");
        size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) { ++pos; ++col; }
        return src.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        char* end = nullptr;
        double v = std::strtod(src.c_str() + pos, &end);
        size_t len = end - (src.c_str() + pos);
        if (len == 0) fail("expected number");
        pos += len;
        col += static_cast<int>(len);
        return v;
    }

    int integer() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') { get(); neg = true; }
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            fail("expected integer exponent");
        int v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + (src[pos] - '0');
            ++pos; ++col;
        }
        return neg ? -v : v;
    }
};

struct Parser {
    Lexer lex;
    const SymbolTable& sym;

    Parser(const std::string& s, const SymbolTable& t) : lex(s), sym(t) {}

    Polynomial expr() {
        Polynomial p = term();
        for (;;) {
            char c = lex.peek();
            if (c == '+') { lex.get(); p = p + term(); }
            else if (c == '-') { lex.get(); p = p - term(); }
            else return p;
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        for (;;) {
            char c = lex.peek();
            if (c == '*') { lex.get(); p = p * factor(); }
            else if (c == '/') { lex.get(); p = p / factor(); }
            else return p;
        }
    }

    Polynomial factor() {
        if (lex.peek() == '-') { lex.get(); return -factor(); }
        Polynomial b = base();
        if (lex.peek() == '^') {
            lex.get();
            int e = lex.integer();
            if (e < 1) lex.fail("power exponent must be >= 1");
            return b.pow(e);
        }
        return b;
    }

    Polynomial base() {
        char c = lex.peek();
        if (c == '(') {
            lex.get();
            Polynomial p = expr();
            lex.expect(')');
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return Polynomial(lex.number());
        int at_line = lex.line, at_col = lex.col;
        std::string name = lex.identifier();
        if ((name == "d" || name == "d2") && lex.peek() == '(') {
            int order = name == "d" ? 1 : 2;
            lex.get();
            std::string target = lex.identifier();
            lex.expect(',');
            std::string var = lex.identifier();
            lex.expect(')');
            if (var != "t" && var != "x")
                lex.fail("derivative variable must be t or x");
            if (sym.dynamical.count(target))
                return Polynomial(Atom::deriv(target, var[0], order));
            if (sym.opaque.count(target))
                return Polynomial(Atom::formal_deriv(target, var[0]));
            throw UndeclaredSymbol("undeclared symbol '" + target + "'", at_line, at_col);
        }
        if (lex.peek() == '(') {
            if (!sym.opaque.count(name))
                throw UndeclaredSymbol("undeclared function '" + name + "'", at_line, at_col);
            lex.get();
            std::string arg = lex.identifier();
            lex.expect(')');
            return Polynomial(Atom::opaque(name, arg));
        }
        if (!sym.known(name))
            throw UndeclaredSymbol("undeclared symbol '" + name + "'", at_line, at_col);
        return Polynomial(Atom::symbol(name));
    }
};

}  // namespace

Polynomial parse_expression(const std::string& source, const SymbolTable& symbols) {
    Parser p(source, symbols);
    Polynomial result = p.expr();
    if (p.lex.peek() != '\0') p.lex.fail("unexpected trailing input");
    return result;
}

}  // namespace qftca
