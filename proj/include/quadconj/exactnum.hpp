#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/fp.hpp"
#include "quadconj/rational.hpp"

// Square-class and cube-class arithmetic over Q and F_p: the number-theoretic
// decision procedures behind the conjugacy criteria.

namespace quadconj {

// Exhaustive searches over F_p are intentional (the fields we classify over
// are small); this bound turns runaway moduli into a clean error.
inline constexpr std::uint64_t kMaxExhaustiveP = 1u << 22;

inline void require_desk_scale(std::uint64_t p, const char* what) {
    if (p > kMaxExhaustiveP)
        throw user_error(std::string(what) +
                         " uses an exhaustive search and needs p <= " +
                         std::to_string(kMaxExhaustiveP));
}

// ---- squares over Q --------------------------------------------------------

inline bool is_square(const Rational& q) {
    if (q.sign() < 0) return false;
    return is_perfect_square(q.num()) && is_perfect_square(q.den());
}

inline std::optional<Rational> exact_sqrt(const Rational& q) {
    if (!is_square(q)) return std::nullopt;
    return Rational(isqrt(q.num()), isqrt(q.den()));
}

// q = core * cofactor^2 with core a square-free integer carrying q's sign.
struct SquareFreeDecomp {
    BigInt core;
    Rational cofactor;
};

inline SquareFreeDecomp squarefree_part(const Rational& q,
                                        std::uint64_t bound = 1000000) {
    if (q.is_zero()) throw user_error("squarefree_part of zero");
    // n/d = (n*d) / d^2, so it is enough to split the integer n*d.
    BigInt nd = q.num() * q.den();
    BigInt core = nd < 0 ? -1 : 1;
    BigInt root = 1;
    for (const auto& [p, e] : factorize(nd, bound)) {
        if (e % 2 == 1) core *= p;
        for (int k = 0; k < e / 2; ++k) root *= p;
    }
    return {core, Rational(root, q.den())};
}

inline bool same_square_class(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero())
        throw user_error("square class of zero is undefined");
    return is_square(a / b);
}

// Square-free integer representative of q's class in Q*/(Q*)^2.
inline Rational square_class_rep(const Rational& q,
                                 std::uint64_t bound = 1000000) {
    return Rational(squarefree_part(q, bound).core);
}

// ---- squares over F_p ------------------------------------------------------

inline bool is_square(const Fp& a) {
    if (a.is_zero()) return true;
    return a.pow((a.modulus() - 1) / 2).is_one();  // Euler's criterion
}

inline Fp least_nonresidue(std::uint64_t p) {
    for (std::uint64_t n = 2; n < p; ++n) {
        Fp c(p, static_cast<std::int64_t>(n));
        if (!is_square(c)) return c;
    }
    throw internal_error("no quadratic nonresidue found");
}

// Tonelli-Shanks.
inline std::optional<Fp> exact_sqrt(const Fp& a) {
    const std::uint64_t p = a.modulus();
    if (a.is_zero()) return a;
    if (!is_square(a)) return std::nullopt;
    if (p % 4 == 3) return a.pow((p + 1) / 4);
    std::uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    Fp z = least_nonresidue(p);
    Fp m_c = z.pow(q);
    Fp t = a.pow(q);
    Fp r = a.pow((q + 1) / 2);
    std::uint64_t m = s;
    while (!t.is_one()) {
        Fp t2 = t;
        std::uint64_t i = 0;
        while (!t2.is_one()) { t2 *= t2; ++i; }
        Fp b = m_c;
        for (std::uint64_t k = 0; k + i + 1 < m; ++k) b *= b;
        m_c = b * b;
        t *= m_c;
        r *= b;
        m = i;
    }
    return r;
}

inline bool same_square_class(const Fp& a, const Fp& b) {
    if (a.is_zero() || b.is_zero())
        throw user_error("square class of zero is undefined");
    return is_square(a / b);
}

inline Fp square_class_rep(const Fp& a) {
    if (a.is_zero()) throw user_error("square class of zero is undefined");
    return is_square(a) ? a.one() : least_nonresidue(a.modulus());
}

// ---- cubes over Q ----------------------------------------------------------

inline std::optional<Rational> cube_root(const Rational& q) {
    if (q.is_zero()) throw user_error("cube root of zero is excluded");
    if (!is_perfect_cube(q.num()) || !is_perfect_cube(q.den())) return std::nullopt;
    return Rational(exact_icbrt(q.num()), exact_icbrt(q.den()));
}

inline bool is_cube(const Rational& q) { return cube_root(q).has_value(); }

// q = core * cofactor^3 where core has all numerator and denominator prime
// exponents in {0,1,2}. The sign of q is kept on the core; -1 is never
// absorbed into the cofactor here (cube-class canonicalization happens in
// cube_class_rep instead).
struct CubeFreeDecomp {
    Rational core;
    Rational cofactor;
};

inline CubeFreeDecomp cubefree_part(const Rational& q,
                                    std::uint64_t bound = 1000000) {
    if (q.is_zero()) throw user_error("cubefree_part of zero");
    auto split = [&](const BigInt& n) {
        BigInt core = 1, root = 1;
        for (const auto& [p, e] : factorize(n, bound)) {
            for (int k = 0; k < e % 3; ++k) core *= p;
            for (int k = 0; k < e / 3; ++k) root *= p;
        }
        return std::pair<BigInt, BigInt>(core, root);
    };
    auto [ncore, nroot] = split(q.num());
    auto [dcore, droot] = split(q.den());
    if (q.sign() < 0) ncore = -ncore;
    return {Rational(ncore, dcore), Rational(nroot, droot)};
}

// Canonical representative of q's class in Q*/(Q*)^3: the signed exponent of
// every prime reduced mod 3 into {0,1,2}, which always yields a positive
// cube-free integer (signs are absorbable since -1 = (-1)^3). Note that a
// cube-free *number* is not class-canonical: 1/4 = 2 * (1/2)^3 shares the
// class of 2.
inline Rational cube_class_rep(const Rational& q,
                               std::uint64_t bound = 1000000) {
    if (q.is_zero()) throw user_error("cube class of zero is undefined");
    BigInt rep = 1;
    for (const auto& [p, e] : factorize(q.num(), bound)) {
        for (int k = 0; k < e % 3; ++k) rep *= p;
    }
    for (const auto& [p, e] : factorize(q.den(), bound)) {
        for (int k = 0; k < (3 - e % 3) % 3; ++k) rep *= p;
    }
    return Rational(rep);
}

// ---- cubes over F_p --------------------------------------------------------

inline bool is_cube(const Fp& a) {
    if (a.is_zero()) throw user_error("cube root of zero is excluded");
    const std::uint64_t p = a.modulus();
    if (p % 3 == 2) return true;
    return a.pow((p - 1) / 3).is_one();
}

inline std::optional<Fp> cube_root(const Fp& a) {
    if (a.is_zero()) throw user_error("cube root of zero is excluded");
    const std::uint64_t p = a.modulus();
    if (p % 3 == 2) {
        // Cubing is a bijection; invert the exponent 3 mod p-1.
        std::uint64_t e = (2 * (p - 1) + 1) / 3 % (p - 1);
        Fp r = a.pow(e);
        check_internal(r * r * r == a, "cube root exponent trick failed");
        return r;
    }
    if (!is_cube(a)) return std::nullopt;
    require_desk_scale(p, "cube root in F_p with p = 1 mod 3");
    for (std::uint64_t c = 1; c < p; ++c) {
        Fp r(p, static_cast<std::int64_t>(c));
        if (r * r * r == a) return r;
    }
    throw internal_error("cube residue without cube root");
}

// ---- canonical radicands ---------------------------------------------------
//
// Splits a nonsquare delta as d * s^2 with d the canonical radicand for the
// field (square-free core over Q, the least nonresidue over F_p). Two
// deltas in the same square class always land on the same d, so quadratic
// irrationals from different sources share one K(sqrt d) representation.

inline std::pair<Rational, Rational> canonical_radicand(const Rational& delta) {
    check_internal(!delta.is_zero() && !is_square(delta),
                   "canonical_radicand needs a nonsquare");
    SquareFreeDecomp sf = squarefree_part(delta);
    return {Rational(sf.core), sf.cofactor};
}

inline std::pair<Fp, Fp> canonical_radicand(const Fp& delta) {
    check_internal(!delta.is_zero() && !is_square(delta),
                   "canonical_radicand needs a nonsquare");
    Fp d = least_nonresidue(delta.modulus());
    auto s = exact_sqrt(delta / d);
    check_internal(s.has_value(), "nonresidue ratio must be square");
    return {d, *s};
}

// Least representative of the cube-class pair {[a], [1/a]}; this is the
// right canonical value for t in t/z^2, where t and 1/t present the same map.
inline Fp cube_pair_class_rep(const Fp& a) {
    if (a.is_zero()) throw user_error("cube class of zero is undefined");
    const std::uint64_t p = a.modulus();
    if (p % 3 == 2 || is_cube(a)) return a.one();
    require_desk_scale(p, "cube class representative");
    for (std::uint64_t c = 2; c < p; ++c) {
        Fp r(p, static_cast<std::int64_t>(c));
        if (is_cube(r / a) || is_cube(r * a)) return r;
    }
    throw internal_error("no cube class representative");
}

} // namespace quadconj
