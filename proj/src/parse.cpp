#include "backorb/parse.hpp"

#include <cctype>
#include <cmath>

#include "backorb/sphere.hpp"

namespace backorb {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : t_(text) {}

    Polynomial parse_expr() {
        skip_ws();
        bool negate = false;
        if (peek() == '-') {
            negate = true;
            ++pos_;
        }
        Polynomial acc = parse_term();
        if (negate) acc = Complex(-1.0) * acc;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Polynomial rhs = parse_term();
                acc = (c == '+') ? acc + rhs : acc - rhs;
            } else {
                return acc;
            }
        }
    }

    void expect_end() {
        skip_ws();
        if (pos_ != t_.size()) throw ParseError("unexpected trailing input", pos_);
    }

    bool at_slash() {
        skip_ws();
        return peek() == '/';
    }
    void eat_slash() { ++pos_; }

private:
    Polynomial parse_term() {
        Polynomial acc = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * parse_factor();
            } else {
                return acc;
            }
        }
    }

    Polynomial parse_factor() {
        Polynomial base = parse_base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            size_t start = pos_;
            while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
            if (pos_ == start) throw ParseError("expected integer exponent", pos_);
            unsigned long e = std::stoul(t_.substr(start, pos_ - start));
            if (e > 64) throw ParseError("exponent too large", start);
            Polynomial out = Polynomial::constant(1.0);
            for (unsigned long k = 0; k < e; ++k) out = out * base;
            return out;
        }
        return base;
    }

    Polynomial parse_base() {
        skip_ws();
        char c = peek();
        if (c == 'z') {
            ++pos_;
            return Polynomial::z();
        }
        if (c == 'i') {
            ++pos_;
            return Polynomial::constant(Complex(0.0, 1.0));
        }
        if (c == '(') {
            ++pos_;
            Polynomial inner = parse_expr();
            skip_ws();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        throw ParseError("expected 'z', 'i', a number, or '('", pos_);
    }

    Polynomial parse_number() {
        size_t start = pos_;
        while (pos_ < t_.size() &&
               (std::isdigit(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) throw ParseError("expected number", pos_);
        if (pos_ < t_.size() && (t_[pos_] == 'e' || t_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < t_.size() && (t_[pos_] == '+' || t_[pos_] == '-')) ++pos_;
            size_t exp_begin = pos_;
            while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
            if (pos_ == exp_begin) pos_ = mark;  // bare 'e': not an exponent
        }
        try {
            size_t used = 0;
            double v = std::stod(t_.substr(start, pos_ - start), &used);
            if (used != pos_ - start) throw ParseError("bad number", start);
            return Polynomial::constant(v);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("bad number", start);
        }
    }

    char peek() const { return pos_ < t_.size() ? t_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }

    const std::string& t_;
    size_t pos_ = 0;
};

void append_signed(std::string& out, bool& first, const std::string& term, bool negative) {
    if (first) {
        if (negative) out += "-";
        out += term;
        first = false;
    } else {
        out += negative ? " - " : " + ";
        out += term;
    }
}

std::string coeff_text(Complex c) {
    // A coefficient usable as one grammar factor; complex values go in
    // parentheses so they parse as a base.
    if (c.imag() == 0.0) return format_double(c.real());
    std::string s = "(";
    s += format_double(c.real());
    if (std::signbit(c.imag()))
        s += " - " + format_double(-c.imag()) + "*i";
    else
        s += " + " + format_double(c.imag()) + "*i";
    s += ")";
    return s;
}

}  // namespace

Polynomial parse_polynomial_expr(const std::string& text) {
    Parser p(text);
    Polynomial out = p.parse_expr();
    p.expect_end();
    return out;
}

RationalMap parse_map(const std::string& text, Tolerances tols) {
    Parser p(text);
    Polynomial num = p.parse_expr();
    Polynomial den = Polynomial::constant(1.0);
    if (p.at_slash()) {
        p.eat_slash();
        den = p.parse_expr();
    }
    p.expect_end();
    return RationalMap::create(std::move(num), std::move(den), tols);
}

std::string print_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Complex c = p.coeff(i);
        if (c == Complex(0.0)) continue;
        bool neg = c.imag() == 0.0 && std::signbit(c.real());
        Complex shown = neg ? -c : c;
        std::string term;
        bool coeff_is_one = shown == Complex(1.0);
        if (i == 0) {
            term = coeff_text(shown);
        } else {
            std::string zpow = (i == 1) ? "z" : "z^" + std::to_string(i);
            term = coeff_is_one ? zpow : coeff_text(shown) + "*" + zpow;
        }
        append_signed(out, first, term, neg);
    }
    return out;
}

std::string print_map(const RationalMap& map) {
    std::string num = print_polynomial(map.p());
    if (map.q().degree() == 0 && map.q().coeff(0) == Complex(1.0)) return num;
    return "(" + num + ") / (" + print_polynomial(map.q()) + ")";
}

}  // namespace backorb
