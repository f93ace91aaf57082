#pragma once

#include <string>
#include <utility>

#include "quadconj/errors.hpp"
#include "quadconj/ratmap.hpp"

namespace quadconj {

// Coordinates (sigma1, sigma2) on the moduli space of quadratic rational
// maps: the first two symmetric functions of the three fixed-point
// multipliers. The third one is always sigma1 - 2.
template <class F>
struct ModuliPoint {
    F s1, s2;

    friend bool operator==(const ModuliPoint& a, const ModuliPoint& b) {
        return a.s1 == b.s1 && a.s2 == b.s2;
    }
    friend bool operator!=(const ModuliPoint& a, const ModuliPoint& b) {
        return !(a == b);
    }
};

// x^3 - sigma1 x^2 + sigma2 x - (sigma1 - 2), the monic cubic whose roots
// are the three multipliers.
template <class F>
Poly<F> multiplier_cubic(const ModuliPoint<F>& s) {
    const F two = s.s1.from_int(2);
    return Poly<F>::of({-(s.s1 - two), s.s2, -s.s1, s.s1.one()});
}

// Exact (sigma1, sigma2) without factoring anything: move infinity off the
// fixed locus, then read the multiplier cubic off the characteristic
// polynomial of the multiplier function acting on K[z]/(num - z den).
template <class F>
ModuliPoint<F> sigma_invariants(const RatMap<F>& phi) {
    if (phi.degree() != 2) throw user_error("sigma invariants need a degree-2 map");
    RatMap<F> psi = phi;
    if (psi.den().coeff(2).is_zero()) {
        // infinity is fixed; conjugate by z -> c + 1/z for the first c that
        // is not itself fixed (at most three points are).
        bool moved = false;
        for (long long c : {0, 1, -1, 2}) {
            ProjPoint<F> pc = ProjPoint<F>::affine(phi.field_one().from_int(c));
            if (phi.evaluate(pc) == pc) continue;
            Moebius<F> h(phi.field_one().from_int(c), phi.field_one(),
                         phi.field_one(), phi.field_zero());
            psi = conjugate(phi, h);
            moved = true;
            break;
        }
        check_internal(moved, "could not move infinity off the fixed locus");
        check_internal(!psi.den().coeff(2).is_zero(), "infinity still fixed");
    }
    Poly<F> fix = psi.num() - Poly<F>::monomial(psi.field_one(), 1) * psi.den();
    check_internal(fix.degree() == 3, "fixed-point polynomial must be cubic here");
    Poly<F> u = psi.num().derivative() * psi.den() -
                psi.num() * psi.den().derivative();
    Poly<F> chi = charpoly_mult(u, psi.den() * psi.den(), fix);
    check_internal(chi.degree() == 3, "multiplier charpoly must be cubic");
    F s1 = -chi.coeff(2);
    F s2 = chi.coeff(1);
    F s3 = -chi.coeff(0);
    check_internal(s3 == s1 - s1.from_int(2),
                   "sigma3 = sigma1 - 2 violated: arithmetic bug");
    return {s1, s2};
}

// The canonical representative family for maps with trivial automorphisms:
// numerator and denominator of
//   (2 z^2 + (2-s1) z + (2-s1)) / (-z^2 + (2+s1) z + (2-s1-s2)).
template <class F>
std::pair<Poly<F>, Poly<F>> trivial_family_polys(const ModuliPoint<F>& s) {
    const F one = s.s1.one();
    const F two = one.from_int(2);
    Poly<F> num = Poly<F>::of({two - s.s1, two - s.s1, two});
    Poly<F> den = Poly<F>::of({two - s.s1 - s.s2, two + s.s1, -one});
    return {num, den};
}

// Value of the symmetry-locus cubic at (sigma1, sigma2): zero exactly when
// the conjugacy class has a nontrivial automorphism group. Computed as the
// resultant of the trivial-family numerator and denominator; the closed form
//   -2 s1^3 - s1^2 s2 + s1^2 + 8 s1 s2 + 4 s2^2 - 12 s1 - 12 s2 + 36
// was derived from that resultant and is cross-checked on every call.
template <class F>
F symmetry_locus_value(const ModuliPoint<F>& s) {
    auto [num, den] = trivial_family_polys(s);
    F res = resultant(num, den);
    const F c2 = s.s1.from_int(2), c4 = s.s1.from_int(4), c8 = s.s1.from_int(8),
            c12 = s.s1.from_int(12), c36 = s.s1.from_int(36);
    F closed = -c2 * s.s1 * s.s1 * s.s1 - s.s1 * s.s1 * s.s2 + s.s1 * s.s1 +
               c8 * s.s1 * s.s2 + c4 * s.s2 * s.s2 - c12 * s.s1 - c12 * s.s2 +
               c36;
    check_internal(res == closed, "symmetry locus closed form out of sync");
    return res;
}

enum class AutClass { Trivial, C2, S3 };

inline std::string to_string(AutClass a) {
    switch (a) {
        case AutClass::Trivial: return "trivial";
        case AutClass::C2: return "c2";
        case AutClass::S3: return "s3";
    }
    return "?";
}

// Automorphism class from the multiplier cubic alone, by gcd with the
// derivative; no factoring over the closure.
//   distinct roots, or 1 with multiplicity exactly 2  -> trivial
//   repeated root != 1 of multiplicity 2, or triple 1 -> C2
//   triple root -2, i.e. (sigma1,sigma2) = (-6,12)    -> S3
template <class F>
AutClass aut_class_of(const ModuliPoint<F>& s) {
    const F one = s.s1.one();
    if (s.s1 == one.from_int(-6) && s.s2 == one.from_int(12)) return AutClass::S3;
    Poly<F> f = multiplier_cubic(s);
    Poly<F> g = gcd_monic(f, f.derivative());
    if (g.degree() <= 0) return AutClass::Trivial;
    if (g.degree() == 1) {
        F root = -g.coeff(0);
        return root.is_one() ? AutClass::Trivial : AutClass::C2;
    }
    check_internal(g.degree() == 2, "multiplier cubic gcd of impossible degree");
    // Triple root r satisfies r^3 - 3r + 2 = 0, so r = 1 or r = -2; the S3
    // point was already dispatched above.
    F root = -g.coeff(1) / one.from_int(2);
    check_internal(root.is_one(), "triple multiplier outside {1, -2}");
    return AutClass::C2;
}

template <class F>
AutClass aut_class(const RatMap<F>& phi) {
    return aut_class_of(sigma_invariants(phi));
}

} // namespace quadconj
