#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/ratmap.hpp"

// Input language for rational maps in the variable z, e.g.
//   (2z^2+2z+2)/(-z^2+2z+2)     1/z^2     2z + 5/z     (3/2)*z^2 - z
// '*' is optional before z or a parenthesized group; coefficients are
// integers or integer ratios. Output of format_map always re-parses to the
// same canonical map.

namespace quadconj {

inline Rational field_from_bigint(const Rational&, const BigInt& n) {
    return Rational(n);
}
inline Fp field_from_bigint(const Fp& exemplar, const BigInt& n) {
    BigInt r = n % BigInt(exemplar.modulus());
    if (r < 0) r += exemplar.modulus();
    return Fp(exemplar.modulus(), r.convert_to<std::int64_t>());
}

inline bool coeff_is_negative(const Rational& c) { return c.sign() < 0; }
inline bool coeff_is_negative(const Fp&) { return false; }
inline Rational coeff_abs(const Rational& c) { return c.abs(); }
inline Fp coeff_abs(const Fp& c) { return c; }

namespace detail {

enum class Tok { Int, Z, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t pos;
    BigInt value;  // for Int
};

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t start = i;
            BigInt value = 0;  // accumulate digits (leading zeros are fine)
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                value = value * 10 + (text[i] - '0');
                ++i;
            }
            out.push_back({Tok::Int, start, value});
            continue;
        }
        Tok kind;
        switch (ch) {
            case 'z': kind = Tok::Z; break;
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default:
                throw parse_error(std::string("unexpected character '") + ch + "'", i);
        }
        out.push_back({kind, i, BigInt(0)});
        ++i;
    }
    out.push_back({Tok::End, text.size(), BigInt(0)});
    return out;
}

// Exact rational function used while folding the parse tree; reduced only at
// the very end.
template <class F>
struct RatFunc {
    Poly<F> num, den;

    static RatFunc constant(const F& c) {
        return {Poly<F>::constant(c), Poly<F>::constant(c.one())};
    }
    static RatFunc variable(const F& exemplar) {
        return {Poly<F>::monomial(exemplar.one(), 1),
                Poly<F>::constant(exemplar.one())};
    }
};

inline constexpr int kMaxExprDegree = 256;

template <class F>
void guard_degree(const RatFunc<F>& f, std::size_t pos) {
    if (f.num.degree() > kMaxExprDegree || f.den.degree() > kMaxExprDegree)
        throw parse_error("expression degree too large", pos);
}

template <class F>
class Parser {
public:
    Parser(std::string_view text, const F& exemplar)
        : toks_(lex(text)), one_(exemplar.one()) {}

    RatFunc<F> parse() {
        RatFunc<F> v = expr();
        expect(Tok::End, "trailing input");
        return v;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token next() { return toks_[i_++]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw parse_error(std::string("expected ") + what, peek().pos);
    }

    RatFunc<F> expr() {
        bool neg = false;
        if (peek().kind == Tok::Minus) {
            next();
            neg = true;
        } else if (peek().kind == Tok::Plus) {
            next();
        }
        RatFunc<F> acc = term();
        if (neg) acc.num = -acc.num;
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = next().kind == Tok::Minus;
            std::size_t pos = peek().pos;
            RatFunc<F> rhs = term();
            Poly<F> n = acc.num * rhs.den;
            Poly<F> m = rhs.num * acc.den;
            acc = {minus ? n - m : n + m, acc.den * rhs.den};
            guard_degree(acc, pos);
        }
        return acc;
    }

    // Products and quotients, left-associative; '*' may be omitted before z
    // or '('.
    RatFunc<F> term() {
        RatFunc<F> acc = power();
        while (true) {
            Tok k = peek().kind;
            if (k == Tok::Star || k == Tok::Slash) {
                bool div = next().kind == Tok::Slash;
                std::size_t pos = peek().pos;
                RatFunc<F> rhs = power();
                if (div) {
                    if (rhs.num.is_zero()) throw parse_error("division by zero", pos);
                    acc = {acc.num * rhs.den, acc.den * rhs.num};
                } else {
                    acc = {acc.num * rhs.num, acc.den * rhs.den};
                }
                guard_degree(acc, pos);
            } else if (k == Tok::Z || k == Tok::LParen) {
                std::size_t pos = peek().pos;
                RatFunc<F> rhs = power();
                acc = {acc.num * rhs.num, acc.den * rhs.den};
                guard_degree(acc, pos);
            } else {
                break;
            }
        }
        return acc;
    }

    RatFunc<F> power() {
        RatFunc<F> base = primary();
        if (peek().kind != Tok::Caret) return base;
        std::size_t pos = next().pos;
        expect(Tok::Int, "integer exponent");
        BigInt e = next().value;
        if (e > 16) throw parse_error("exponent too large", pos);
        int k = e.convert_to<int>();
        RatFunc<F> acc = RatFunc<F>::constant(one_);
        for (int j = 0; j < k; ++j) {
            acc = {acc.num * base.num, acc.den * base.den};
            guard_degree(acc, pos);
        }
        return acc;
    }

    RatFunc<F> primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                Token tok = next();
                return RatFunc<F>::constant(field_from_bigint(one_, tok.value));
            }
            case Tok::Z:
                next();
                return RatFunc<F>::variable(one_);
            case Tok::LParen: {
                next();
                RatFunc<F> v = expr();
                expect(Tok::RParen, "')'");
                next();
                return v;
            }
            default:
                throw parse_error("expected a number, 'z', or '('", t.pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    F one_;
};

}  // namespace detail

// Parses the map language into a canonical rational map over the field of
// `exemplar`. Common factors are cancelled; the reduced degree must be <= 2.
template <class F>
RatMap<F> parse_map(std::string_view text, const F& exemplar) {
    detail::Parser<F> parser(text, exemplar);
    detail::RatFunc<F> v = parser.parse();
    if (v.den.is_zero()) throw parse_error("denominator is identically zero", 0);
    return RatMap<F>::reduce(v.num, v.den);
}

// Parses a Moebius transformation (a*z + b)/(c*z + e) from the same language.
template <class F>
Moebius<F> parse_moebius(std::string_view text, const F& exemplar) {
    detail::Parser<F> parser(text, exemplar);
    detail::RatFunc<F> v = parser.parse();
    if (v.den.is_zero()) throw parse_error("denominator is identically zero", 0);
    Poly<F> g = gcd_monic(v.num, v.den);
    Poly<F> n = v.num, d = v.den;
    if (!v.num.is_zero() && g.degree() > 0) {
        n = exact_div(v.num, g);
        d = exact_div(v.den, g);
    }
    if (n.degree() > 1 || d.degree() > 1)
        throw user_error("not a Moebius transformation: degree exceeds 1");
    F a = n.coeff(1), b = n.coeff(0), c = d.coeff(1), e = d.coeff(0);
    if ((a * e - b * c).is_zero())
        throw user_error("not a Moebius transformation: determinant is zero");
    return Moebius<F>(a, b, c, e);
}

// ---- canonical formatting ---------------------------------------------------

template <class F>
std::string format_poly(const Poly<F>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        F c = p.coeff(i);
        if (c.is_zero()) continue;
        bool neg = coeff_is_negative(c);
        F mag = coeff_abs(c);
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (i == 0) {
            out += mag.str();
        } else {
            if (!mag.is_one()) out += mag.str() + "*";
            out += i == 1 ? "z" : "z^" + std::to_string(i);
        }
    }
    return out;
}

namespace detail {

// A formatted side can stand unparenthesized next to '/' only if it is a
// plain integer or a bare power of z.
inline bool fraction_atom(const std::string& s) {
    if (s.empty()) return false;
    bool digits = true;
    for (char ch : s) digits = digits && std::isdigit(static_cast<unsigned char>(ch));
    if (digits) return true;
    if (s[0] != 'z') return false;
    if (s.size() == 1) return true;
    if (s.size() < 3 || s[1] != '^') return false;
    for (std::size_t i = 2; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace detail

template <class F>
std::string format_map(const RatMap<F>& m) {
    std::string num = format_poly(m.num());
    if (m.den().is_constant() && m.den().coeff(0).is_one()) return num;
    std::string den = format_poly(m.den());
    bool num_single = m.num().is_zero() ||
                      [&] {
                          int nonzero = 0;
                          for (const F& c : m.num().coeffs()) nonzero += !c.is_zero();
                          return nonzero <= 1;
                      }();
    if (!num_single || num[0] == '-') num = "(" + num + ")";
    if (!detail::fraction_atom(den)) den = "(" + den + ")";
    return num + "/" + den;
}

template <class F>
std::string format_moebius(const Moebius<F>& h) {
    Poly<F> n = Poly<F>::of({h.b(), h.a()});
    Poly<F> d = Poly<F>::of({h.e(), h.c()});
    std::string num = format_poly(n);
    if (d.is_constant() && d.coeff(0).is_one()) return num;
    std::string den = format_poly(d);
    bool num_single = n.is_zero() || n.coeff(0).is_zero() || n.coeff(1).is_zero();
    if (!num_single || num[0] == '-') num = "(" + num + ")";
    if (!detail::fraction_atom(den)) den = "(" + den + ")";
    return num + "/" + den;
}

} // namespace quadconj
