#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/poly.hpp"
#include "quadconj/quadext.hpp"

namespace quadconj {

// ---- canonical scaling of coefficient vectors ------------------------------
//
// Rational maps and Moebius transformations are only defined up to a scalar;
// these pick the canonical representative. Over Q: integer entries, jointly
// primitive, with the entry at sign_pivot (or the first nonzero one) made
// positive. Over F_p: first nonzero entry scaled to 1.

inline void canonical_scale(std::vector<Rational>& v, std::size_t sign_pivot) {
    BigInt lcm = 1;
    for (const Rational& q : v) {
        BigInt d = q.den();
        lcm = lcm / big_gcd(lcm, d) * d;
    }
    BigInt content = 0;
    for (Rational& q : v) {
        q *= Rational(lcm);
        content = big_gcd(content, q.num());
    }
    if (content == 0) return;
    if (sign_pivot >= v.size() || v[sign_pivot].is_zero()) {
        sign_pivot = 0;
        while (sign_pivot < v.size() && v[sign_pivot].is_zero()) ++sign_pivot;
    }
    if (v[sign_pivot].sign() < 0) content = -content;
    for (Rational& q : v) q /= Rational(content);
}

inline void canonical_scale(std::vector<Fp>& v, std::size_t /*sign_pivot*/) {
    for (const Fp& a : v) {
        if (!a.is_zero()) {
            Fp inv = a.inverse();
            for (Fp& b : v) b *= inv;
            return;
        }
    }
}

// Extension coefficients only appear in intermediate computations; scaling
// the first nonzero entry to 1 is enough there (and makes Galois descent a
// matter of reading off the irrational parts).
template <class F>
void canonical_scale(std::vector<QuadExt<F>>& v, std::size_t /*sign_pivot*/) {
    for (const QuadExt<F>& a : v) {
        if (!a.is_zero()) {
            QuadExt<F> inv = a.inverse();
            for (QuadExt<F>& b : v) b *= inv;
            return;
        }
    }
}

// ---- points of P^1 ---------------------------------------------------------

template <class F>
class ProjPoint {
public:
    static ProjPoint affine(F x) { return ProjPoint(std::move(x), false); }
    static ProjPoint infinity(const F& exemplar) {
        return ProjPoint(exemplar.zero(), true);
    }
    // [x : y] with (x, y) != (0, 0).
    static ProjPoint from_homogeneous(const F& x, const F& y) {
        if (y.is_zero()) {
            check_internal(!x.is_zero(), "projective point [0:0]");
            return infinity(x);
        }
        return affine(x / y);
    }

    bool is_infinity() const { return inf_; }
    const F& value() const {
        check_internal(!inf_, "affine value of the point at infinity");
        return x_;
    }
    F hom_x() const { return inf_ ? x_.one() : x_; }
    F hom_y() const { return inf_ ? x_.zero() : x_.one(); }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.x_ == b.x_;
    }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) {
        return !(a == b);
    }

    std::string str() const { return inf_ ? "inf" : x_.str(); }

private:
    ProjPoint(F x, bool inf) : x_(std::move(x)), inf_(inf) {}
    F x_;
    bool inf_;
};

// ---- Moebius transformations -----------------------------------------------

// Element of PGL_2(K): z -> (a z + b)/(c z + e), stored canonically scaled.
template <class F>
class Moebius {
public:
    Moebius(F a, F b, F c, F e)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), e_(std::move(e)) {
        check_internal(!det().is_zero(), "Moebius transformation must be invertible");
        normalize();
    }

    static Moebius identity(const F& exemplar) {
        return Moebius(exemplar.one(), exemplar.zero(), exemplar.zero(),
                       exemplar.one());
    }
    static Moebius translation(const F& t) {
        return Moebius(t.one(), t, t.zero(), t.one());
    }
    static Moebius scaling(const F& m) {
        return Moebius(m, m.zero(), m.zero(), m.one());
    }
    static Moebius inversion(const F& exemplar) {
        return Moebius(exemplar.zero(), exemplar.one(), exemplar.one(),
                       exemplar.zero());
    }

    const F& a() const { return a_; }
    const F& b() const { return b_; }
    const F& c() const { return c_; }
    const F& e() const { return e_; }

    F det() const { return a_ * e_ - b_ * c_; }

    Moebius inverse() const { return Moebius(e_, -b_, -c_, a_); }

    // Composition as maps: (g * h)(z) = g(h(z)).
    friend Moebius operator*(const Moebius& g, const Moebius& h) {
        return Moebius(g.a_ * h.a_ + g.b_ * h.c_, g.a_ * h.b_ + g.b_ * h.e_,
                       g.c_ * h.a_ + g.e_ * h.c_, g.c_ * h.b_ + g.e_ * h.e_);
    }

    ProjPoint<F> apply(const ProjPoint<F>& p) const {
        F x = p.hom_x(), y = p.hom_y();
        return ProjPoint<F>::from_homogeneous(a_ * x + b_ * y, c_ * x + e_ * y);
    }

    friend bool operator==(const Moebius& g, const Moebius& h) {
        return g.a_ == h.a_ && g.b_ == h.b_ && g.c_ == h.c_ && g.e_ == h.e_;
    }
    friend bool operator!=(const Moebius& g, const Moebius& h) { return !(g == h); }

    std::array<F, 4> entries() const { return {a_, b_, c_, e_}; }

private:
    void normalize() {
        std::vector<F> v{a_, b_, c_, e_};
        canonical_scale(v, 0);
        a_ = v[0]; b_ = v[1]; c_ = v[2]; e_ = v[3];
    }

    F a_, b_, c_, e_;
};

// ---- rational maps ---------------------------------------------------------

// Rational map P(z)/Q(z) on P^1, num and den coprime and canonically scaled.
// Degree = max of the degrees; the classification operates on degree 2.
template <class F>
class RatMap {
public:
    // Requires coprime input (factory `reduce` cancels a common factor first).
    RatMap(Poly<F> num, Poly<F> den) : num_(std::move(num)), den_(std::move(den)) {
        check_internal(!(num_.is_zero() && den_.is_zero()),
                       "rational map 0/0");
        if (den_.is_zero()) throw user_error("rational map with zero denominator");
        if (num_.degree() > 2 || den_.degree() > 2)
            throw user_error("rational map degree exceeds 2");
        Poly<F> g = gcd_monic(num_, den_);
        check_internal(g.degree() <= 0, "rational map with common factor");
        normalize();
    }

    static RatMap reduce(const Poly<F>& num, const Poly<F>& den) {
        if (den.is_zero()) throw user_error("rational map with zero denominator");
        if (num.is_zero()) return RatMap(num, Poly<F>::constant(den.field_one()));
        Poly<F> g = gcd_monic(num, den);
        return RatMap(exact_div(num, g), exact_div(den, g));
    }

    const Poly<F>& num() const { return num_; }
    const Poly<F>& den() const { return den_; }

    int degree() const { return std::max(num_.degree(), den_.degree()); }

    F field_zero() const { return num_.field_zero(); }
    F field_one() const { return num_.field_one(); }

    friend bool operator==(const RatMap& f, const RatMap& g) {
        return f.num_ == g.num_ && f.den_ == g.den_;
    }
    friend bool operator!=(const RatMap& f, const RatMap& g) { return !(f == g); }

    // Coefficients of the degree-d homogenizations, highest X-power first.
    std::array<F, 3> num_form() const { return form(num_); }
    std::array<F, 3> den_form() const { return form(den_); }

    ProjPoint<F> evaluate(const ProjPoint<F>& p) const {
        return evaluate_generic<F>(p);
    }
    ProjPoint<QuadExt<F>> evaluate_ext(const ProjPoint<QuadExt<F>>& p) const {
        return evaluate_generic<QuadExt<F>>(p);
    }

    // Derivative value at a finite non-pole point.
    F derivative_at(const F& z) const {
        F d = den_.eval(z);
        check_internal(!d.is_zero(), "derivative at a pole");
        F w = num_.derivative().eval(z) * d - num_.eval(z) * den_.derivative().eval(z);
        return w / (d * d);
    }
    QuadExt<F> derivative_at_ext(const QuadExt<F>& z) const {
        QuadExt<F> d = den_.template eval_in<QuadExt<F>>(z);
        check_internal(!d.is_zero(), "derivative at a pole");
        QuadExt<F> w = num_.derivative().template eval_in<QuadExt<F>>(z) * d -
                       num_.template eval_in<QuadExt<F>>(z) *
                           den_.derivative().template eval_in<QuadExt<F>>(z);
        return w / (d * d);
    }

    std::string debug_str() const;

private:
    template <class X>
    ProjPoint<X> evaluate_generic(const ProjPoint<X>& p) const {
        check_internal(degree() == 2, "evaluation expects a degree-2 map");
        X x = p.hom_x(), y = p.hom_y();
        auto lift = [&](const F& c) {
            if constexpr (std::is_same_v<X, F>) return c;
            else return X::from_base(c, x.radicand());
        };
        auto nf = num_form();
        auto df = den_form();
        X nx = lift(nf[0]) * x * x + lift(nf[1]) * x * y + lift(nf[2]) * y * y;
        X dx = lift(df[0]) * x * x + lift(df[1]) * x * y + lift(df[2]) * y * y;
        return ProjPoint<X>::from_homogeneous(nx, dx);
    }

    std::array<F, 3> form(const Poly<F>& p) const {
        return {p.coeff(2), p.coeff(1), p.coeff(0)};
    }

    void normalize() {
        std::vector<F> v{num_.coeff(2), num_.coeff(1), num_.coeff(0),
                         den_.coeff(2), den_.coeff(1), den_.coeff(0)};
        // Sign pivot: the numerator's leading coefficient (denominator's when
        // the numerator vanishes).
        std::size_t pivot = 0;
        while (pivot < 6 && v[pivot].is_zero()) ++pivot;
        canonical_scale(v, pivot);
        num_ = Poly<F>::of({v[2], v[1], v[0]});
        den_ = Poly<F>::of({v[5], v[4], v[3]});
    }

    Poly<F> num_, den_;
};

// phi^h = h^{-1} . phi . h, the coordinate-change action of PGL_2.
template <class F>
RatMap<F> conjugate(const RatMap<F>& phi, const Moebius<F>& h) {
    check_internal(phi.degree() == 2, "conjugation expects a degree-2 map");
    const F a = h.a(), b = h.b(), c = h.c(), e = h.e();
    auto nf = phi.num_form();
    auto df = phi.den_form();
    const F two = a.from_int(2);
    // Substitute (X, Y) -> (aX + bY, cX + eY) into both quadratic forms.
    auto subst = [&](const std::array<F, 3>& f) {
        return std::array<F, 3>{
            f[0] * a * a + f[1] * a * c + f[2] * c * c,
            f[0] * two * a * b + f[1] * (a * e + b * c) + f[2] * two * c * e,
            f[0] * b * b + f[1] * b * e + f[2] * e * e};
    };
    auto n1 = subst(nf);
    auto d1 = subst(df);
    // Post-compose with h^{-1} = adj(h).
    const F z0 = a.zero();
    std::array<F, 3> n2{z0, z0, z0}, d2{z0, z0, z0};
    for (std::size_t i = 0; i < 3; ++i) {
        n2[i] = e * n1[i] - b * d1[i];
        d2[i] = -c * n1[i] + a * d1[i];
    }
    RatMap<F> out(Poly<F>::of({n2[2], n2[1], n2[0]}),
                  Poly<F>::of({d2[2], d2[1], d2[0]}));
    check_internal(out.degree() == 2, "conjugation dropped the degree");
    return out;
}

// ---- fixed points ----------------------------------------------------------

template <class F>
struct AffineFixedPoint {
    F point;
    int multiplicity;
    F multiplier;
};

template <class F>
struct InfinityFixedPoint {
    int multiplicity;
    F multiplier;
};

// Galois-conjugate pair of fixed points with irrational coordinates; `point`
// is the embedding x + y*sqrt(d) of one of them, the other is its conjugate.
template <class F>
struct QuadraticFixedPair {
    Poly<F> min_poly;        // monic quadratic, irreducible over K
    QuadExt<F> point;
    QuadExt<F> multiplier;   // multiplier at `point`; conjugate at the other
};

// Galois orbit of three conjugate fixed points. The points are never
// materialized; the multipliers are carried as the monic cubic they satisfy.
template <class F>
struct CubicFixedOrbit {
    Poly<F> fixed_cubic;          // monic, irreducible over K
    Poly<F> multiplier_charpoly;  // roots = the three multipliers
};

template <class F>
using FixedPointEntry = std::variant<AffineFixedPoint<F>, InfinityFixedPoint<F>,
                                     QuadraticFixedPair<F>, CubicFixedOrbit<F>>;

template <class F>
struct FixedPointData {
    std::vector<FixedPointEntry<F>> entries;

    int total_multiplicity() const {
        int total = 0;
        for (const auto& entry : entries) {
            std::visit(
                [&](const auto& e) {
                    using T = std::decay_t<decltype(e)>;
                    if constexpr (std::is_same_v<T, AffineFixedPoint<F>> ||
                                  std::is_same_v<T, InfinityFixedPoint<F>>) {
                        total += e.multiplicity;
                    } else if constexpr (std::is_same_v<T, QuadraticFixedPair<F>>) {
                        total += 2;
                    } else {
                        total += 3;
                    }
                },
                entry);
        }
        return total;
    }
};

// Multiplier at a fixed point at infinity: move infinity to 0 and take the
// derivative there.
template <class F>
F multiplier_at_infinity(const RatMap<F>& phi) {
    RatMap<F> psi = conjugate(phi, Moebius<F>::inversion(phi.field_one()));
    return psi.derivative_at(phi.field_zero());
}

// The degree-3 fixed-point divisor with multipliers. Finite fixed points are
// the roots of num - z*den; infinity contributes 3 - deg(num - z*den).
template <class F>
FixedPointData<F> fixed_point_data(const RatMap<F>& phi) {
    check_internal(phi.degree() == 2, "fixed points of a non-quadratic map");
    FixedPointData<F> data;
    Poly<F> fix = phi.num() - Poly<F>::monomial(phi.field_one(), 1) * phi.den();
    check_internal(!fix.is_zero(), "identity-like fixed-point polynomial");
    if (fix.degree() < 3) {
        data.entries.push_back(InfinityFixedPoint<F>{3 - fix.degree(),
                                                     multiplier_at_infinity(phi)});
    }
    Poly<F> remaining = fix;
    for (const auto& [root, mult] : rational_roots(fix)) {
        data.entries.push_back(AffineFixedPoint<F>{root, mult, phi.derivative_at(root)});
        Poly<F> lin = Poly<F>::of({-root, phi.field_one()});
        for (int k = 0; k < mult; ++k) remaining = exact_div(remaining, lin);
    }
    if (remaining.degree() == 2) {
        Poly<F> mp = remaining.monic();
        const F b = mp.coeff(1), c = mp.coeff(0);
        const F disc = b * b - b.from_int(4) * c;
        auto [d, s] = canonical_radicand(disc);
        const F half = b.from_int(2).inverse();
        QuadExt<F> theta((-b) * half, s * half, d);
        data.entries.push_back(
            QuadraticFixedPair<F>{mp, theta, phi.derivative_at_ext(theta)});
    } else if (remaining.degree() == 3) {
        Poly<F> w = phi.num().derivative() * phi.den() -
                    phi.num() * phi.den().derivative();
        Poly<F> den2 = phi.den() * phi.den();
        data.entries.push_back(
            CubicFixedOrbit<F>{remaining.monic(),
                               charpoly_mult(w, den2, remaining)});
    } else {
        check_internal(remaining.degree() <= 0,
                       "unexpected leftover fixed-point factor");
    }
    check_internal(data.total_multiplicity() == 3,
                   "fixed-point divisor must have degree 3");
    return data;
}

// ---- second dynatomic polynomial -------------------------------------------

// (P2 - z Q2)/(P1 - z Q1) where phi^2 = P2/Q2: the monic-free polynomial
// whose roots are the finite points of period 2. Degree < 2 means the
// two-cycle passes through infinity. The division is always exact.
template <class F>
Poly<F> second_dynatomic(const RatMap<F>& phi) {
    check_internal(phi.degree() == 2, "second dynatomic of a non-quadratic map");
    const Poly<F>&n = phi.num(), &d = phi.den();
    auto nf = phi.num_form();
    auto df = phi.den_form();
    Poly<F> n2 = Poly<F>::constant(nf[0]) * n * n + Poly<F>::constant(nf[1]) * n * d +
                 Poly<F>::constant(nf[2]) * d * d;
    Poly<F> d2 = Poly<F>::constant(df[0]) * n * n + Poly<F>::constant(df[1]) * n * d +
                 Poly<F>::constant(df[2]) * d * d;
    Poly<F> z = Poly<F>::monomial(phi.field_one(), 1);
    Poly<F> f2 = n2 - z * d2;
    Poly<F> f1 = n - z * d;
    return exact_div(f2, f1);
}

// ---- critical points -------------------------------------------------------

// A degree-2 map has exactly two distinct critical points; they are either
// both K-rational (infinity allowed) or a Galois-conjugate pair.
template <class F>
struct CriticalPoints {
    bool rational;
    ProjPoint<F> p1, p2;            // when rational
    std::optional<QuadExt<F>> theta;  // when a conjugate pair
};

template <class F>
CriticalPoints<F> critical_points(const RatMap<F>& phi) {
    check_internal(phi.degree() == 2, "critical points of a non-quadratic map");
    Poly<F> w = phi.num().derivative() * phi.den() -
                phi.num() * phi.den().derivative();
    check_internal(!w.is_zero() && w.degree() <= 2, "bad Wronskian degree");
    const F one = phi.field_one();
    std::vector<ProjPoint<F>> pts;
    if (w.degree() < 2) pts.push_back(ProjPoint<F>::infinity(one));
    auto roots = rational_roots(w);
    for (const auto& [r, m] : roots) {
        check_internal(m == 1, "critical points of a quadratic map are simple");
        pts.push_back(ProjPoint<F>::affine(r));
    }
    if (pts.size() == 2) {
        check_internal(pts[0] != pts[1], "critical points must be distinct");
        return {true, pts[0], pts[1], std::nullopt};
    }
    check_internal(pts.empty() && w.degree() == 2,
                   "critical divisor must have two points");
    Poly<F> mw = w.monic();
    const F b = mw.coeff(1), c = mw.coeff(0);
    const F disc = b * b - one.from_int(4) * c;
    auto [d, s] = canonical_radicand(disc);
    const F half = one.from_int(2).inverse();
    QuadExt<F> theta((-b) * half, s * half, d);
    ProjPoint<F> inf = ProjPoint<F>::infinity(one);
    return {false, inf, inf, theta};
}

template <class F>
std::string RatMap<F>::debug_str() const {
    std::string s = "(";
    for (const F& c : num_.coeffs()) s += c.str() + ",";
    s += ")/(";
    for (const F& c : den_.coeffs()) s += c.str() + ",";
    s += ")";
    return s;
}

} // namespace quadconj
