#pragma once

#include <algorithm>
#include <optional>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/exactnum.hpp"

namespace quadconj {

// Degree assigned to the zero polynomial.
inline constexpr int kZeroDegree = -1;

// Dense univariate polynomial over a field, coefficients lowest degree
// first. The coefficient vector is never empty (the zero polynomial keeps a
// single zero entry), so every polynomial can mint constants of its field.
template <class F>
class Poly {
public:
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) {
        check_internal(!c_.empty(), "polynomial needs at least one coefficient");
        trim();
    }
    static Poly zero(const F& exemplar) { return Poly({exemplar.zero()}); }
    static Poly constant(const F& value) { return Poly({value}); }
    // c0 + c1*x + ... from an initializer-style vector.
    static Poly of(std::vector<F> coeffs) { return Poly(std::move(coeffs)); }
    static Poly monomial(const F& coeff, int deg) {
        std::vector<F> v(static_cast<std::size_t>(deg) + 1, coeff.zero());
        v.back() = coeff;
        return Poly(std::move(v));
    }

    int degree() const {
        return is_zero() ? kZeroDegree : static_cast<int>(c_.size()) - 1;
    }
    bool is_zero() const { return c_.size() == 1 && c_[0].is_zero(); }
    bool is_constant() const { return c_.size() == 1; }

    const F& lc() const { return c_.back(); }
    const F& operator[](std::size_t i) const { return c_[i]; }
    F coeff(int i) const {
        return (i < 0 || i >= static_cast<int>(c_.size())) ? c_[0].zero()
                                                           : c_[static_cast<std::size_t>(i)];
    }
    const std::vector<F>& coeffs() const { return c_; }
    F field_zero() const { return c_[0].zero(); }
    F field_one() const { return c_[0].one(); }

    Poly operator-() const {
        std::vector<F> v;
        v.reserve(c_.size());
        for (const F& a : c_) v.push_back(-a);
        return Poly(std::move(v));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<F> v(std::max(a.c_.size(), b.c_.size()), a.field_zero());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        }
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return zero(a.field_zero());
        std::vector<F> v(a.c_.size() + b.c_.size() - 1, a.field_zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(v));
    }
    friend Poly operator*(const F& s, const Poly& p) {
        std::vector<F> v;
        v.reserve(p.c_.size());
        for (const F& a : p.c_) v.push_back(s * a);
        return Poly(std::move(v));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    F eval(const F& x) const {
        F acc = c_.back();
        for (std::size_t i = c_.size(); i-- > 1;) acc = acc * x + c_[i - 1];
        return acc;
    }

    // Horner over any ring the coefficients embed into (quadratic extensions,
    // polynomials, ...). X needs X*X, X+X and a from_base-style promotion.
    template <class X>
    X eval_in(const X& x) const {
        X acc = x.zero() + promote(c_.back(), x);
        for (std::size_t i = c_.size(); i-- > 1;) {
            acc = acc * x + promote(c_[i - 1], x);
        }
        return acc;
    }

    Poly derivative() const {
        if (c_.size() == 1) return zero(field_zero());
        std::vector<F> v;
        v.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) {
            v.push_back(c_[i] * c_[i].from_int(static_cast<long long>(i)));
        }
        return Poly(std::move(v));
    }

    Poly monic() const {
        check_internal(!is_zero(), "monic() of zero polynomial");
        return lc().inverse() * *this;
    }

private:
    template <class X>
    static X promote(const F& a, const X& exemplar) {
        if constexpr (std::is_same_v<X, F>) {
            return a;
        } else {
            return X::from_base(a, exemplar.radicand());
        }
    }

    void trim() {
        while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<F> c_;
};

template <class F>
F field_pow(F base, int e) {
    check_internal(e >= 0, "field_pow with negative exponent");
    F acc = base.one();
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

// Quotient and remainder; the divisor must be nonzero.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const Poly<F>& a, const Poly<F>& b) {
    check_internal(!b.is_zero(), "polynomial division by zero");
    Poly<F> r = a;
    std::size_t qlen = 1;
    if (a.degree() >= b.degree())
        qlen = static_cast<std::size_t>(a.degree() - b.degree()) + 1;
    std::vector<F> q(qlen, a.field_zero());
    F binv = b.lc().inverse();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        F factor = r.lc() * binv;
        q[static_cast<std::size_t>(shift)] = factor;
        r = r - Poly<F>::monomial(factor, shift) * b;
    }
    return {Poly<F>(std::move(q)), r};
}

template <class F>
Poly<F> exact_div(const Poly<F>& a, const Poly<F>& b) {
    auto [q, r] = divmod(a, b);
    check_internal(r.is_zero(), "polynomial division was not exact");
    return q;
}

template <class F>
Poly<F> gcd_monic(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic or zero.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> xgcd(const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0 = Poly<F>::constant(a.field_one()), s1 = Poly<F>::zero(a.field_zero());
    Poly<F> t0 = Poly<F>::zero(a.field_zero()), t1 = Poly<F>::constant(a.field_one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1; r1 = r;
        Poly<F> s2 = s0 - q * s1;
        s0 = s1; s1 = s2;
        Poly<F> t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = r0.lc().inverse();
    return {inv * r0, inv * s0, inv * t0};
}

// Determinant by fraction-free (Bareiss) elimination. Exact over any field;
// division by the previous pivot is always exact by construction.
template <class F>
F bareiss_det(std::vector<std::vector<F>> m) {
    const std::size_t n = m.size();
    if (n == 0) throw internal_error("determinant of empty matrix");
    F prev = m[0][0].one();
    F sign = m[0][0].one();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return m[0][0].zero();
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = m[i][k].zero();
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Resultant via the Sylvester matrix for the actual degrees (deg p, deg q).
// Vanishes exactly when p and q share a root in the algebraic closure.
template <class F>
F resultant(const Poly<F>& p, const Poly<F>& q) {
    if (p.is_zero() && q.is_zero())
        throw user_error("resultant of two zero polynomials");
    const int dp = p.degree(), dq = q.degree();
    const F one = p.is_zero() ? q.field_one() : p.field_one();
    if (p.is_zero() || q.is_zero()) {
        // Res(c, 0) = 0 for deg >= 1 partner; Res(c, c') = 1 by convention.
        const Poly<F>& nz = p.is_zero() ? q : p;
        return nz.degree() == 0 ? one : one.zero();
    }
    if (dp == 0 && dq == 0) return one;
    if (dp == 0) return field_pow(p.lc(), dq);
    if (dq == 0) return field_pow(q.lc(), dp);
    const std::size_t n = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<F>> m(n, std::vector<F>(n, one.zero()));
    for (int row = 0; row < dq; ++row) {
        for (int j = 0; j <= dp; ++j) m[row][row + j] = p.coeff(dp - j);
    }
    for (int row = 0; row < dp; ++row) {
        for (int j = 0; j <= dq; ++j) m[dq + row][row + j] = q.coeff(dq - j);
    }
    return bareiss_det(std::move(m));
}

template <class F>
Poly<F> poly_matrix_det(const std::vector<std::vector<Poly<F>>>& m);

// Characteristic polynomial of multiplication by u_num/u_den on K[x]/(F):
// the monic polynomial whose roots are u evaluated at the roots of F,
// with multiplicities carried over. Requires gcd(u_den, F) = 1.
template <class F>
Poly<F> charpoly_mult(const Poly<F>& u_num, const Poly<F>& u_den,
                      const Poly<F>& modulus) {
    check_internal(modulus.degree() >= 1, "charpoly modulus must be nonconstant");
    Poly<F> f = modulus.monic();
    auto [g, s, t] = xgcd(u_den, f);
    if (g.degree() != 0)
        throw user_error("charpoly_mult: denominator not invertible modulo F");
    // s * u_den = 1 (mod f)
    Poly<F> r = divmod(u_num * s, f).second;
    const int n = f.degree();
    // Columns of the multiplication matrix: r * x^j mod f.
    std::vector<std::vector<F>> m(static_cast<std::size_t>(n),
                                  std::vector<F>(static_cast<std::size_t>(n),
                                                 f.field_zero()));
    Poly<F> col = r;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col.coeff(i);
        col = divmod(Poly<F>::monomial(f.field_one(), 1) * col, f).second;
    }
    // det(x*I - M) by cofactor expansion with polynomial entries; the
    // dimensions here are tiny (n <= 3 in every internal use).
    std::vector<std::vector<Poly<F>>> xm;
    xm.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<Poly<F>> row;
        row.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            Poly<F> e = Poly<F>::constant(-m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            if (i == j) e = e + Poly<F>::monomial(f.field_one(), 1);
            row.push_back(std::move(e));
        }
        xm.push_back(std::move(row));
    }
    return poly_matrix_det(xm);
}

template <class F>
Poly<F> poly_matrix_det(const std::vector<std::vector<Poly<F>>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Poly<F> acc = Poly<F>::zero(m[0][0].field_zero());
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly<F>>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly<F>> row;
            row.reserve(n - 1);
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) row.push_back(m[i][k]);
            }
            minor.push_back(std::move(row));
        }
        Poly<F> term = m[0][j] * poly_matrix_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// ---- rational roots --------------------------------------------------------

// Roots in Q with multiplicities, by the rational-root theorem on the
// primitive integer model.
inline std::vector<std::pair<Rational, int>> rational_roots(Poly<Rational> p) {
    if (p.is_zero()) throw user_error("roots of the zero polynomial");
    std::vector<std::pair<Rational, int>> out;
    auto record = [&](const Rational& r) {
        Poly<Rational> lin = Poly<Rational>::of({-r, Rational(1)});
        int mult = 0;
        while (true) {
            auto [q, rem] = divmod(p, lin);
            if (!rem.is_zero()) break;
            p = q;
            ++mult;
        }
        if (mult > 0) out.emplace_back(r, mult);
    };
    record(Rational(0));
    if (p.degree() >= 1) {
        // Scale to integer coefficients.
        BigInt lcm = 1;
        for (const Rational& c : p.coeffs()) {
            BigInt d = c.den();
            lcm = lcm / big_gcd(lcm, d) * d;
        }
        Poly<Rational> ip = Rational(lcm) * p;
        BigInt a0 = ip.coeff(0).num();
        BigInt an = ip.lc().num();
        check_internal(a0 != 0 && an != 0, "integer model lost coefficients");
        for (const BigInt& x : divisors(big_abs(a0))) {
            for (const BigInt& y : divisors(big_abs(an))) {
                if (big_gcd(x, y) != 1) continue;
                for (int sgn : {1, -1}) {
                    Rational cand(sgn * x, y);
                    if (p.eval(cand).is_zero()) record(cand);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Roots in F_p with multiplicities, by exhaustive evaluation.
inline std::vector<std::pair<Fp, int>> rational_roots(Poly<Fp> p) {
    if (p.is_zero()) throw user_error("roots of the zero polynomial");
    const std::uint64_t q = p.field_one().modulus();
    require_desk_scale(q, "root search in F_p");
    std::vector<std::pair<Fp, int>> out;
    for (std::uint64_t r = 0; r < q && p.degree() >= 1; ++r) {
        Fp cand(q, static_cast<std::int64_t>(r));
        if (!p.eval(cand).is_zero()) continue;
        Poly<Fp> lin = Poly<Fp>::of({-cand, cand.one()});
        int mult = 0;
        while (true) {
            auto [quo, rem] = divmod(p, lin);
            if (!rem.is_zero()) break;
            p = quo;
            ++mult;
        }
        out.emplace_back(cand, mult);
    }
    return out;
}

// Roots of a monic quadratic inside the base field, if the discriminant is a
// square there.
template <class F>
std::optional<std::pair<F, F>> split_monic_quadratic(const Poly<F>& p) {
    check_internal(p.degree() == 2 && p.lc().is_one(),
                   "split_monic_quadratic needs a monic quadratic");
    const F b = p.coeff(1), c = p.coeff(0);
    const F disc = b * b - c.from_int(4) * c;
    auto s = exact_sqrt(disc);
    if (!s) return std::nullopt;
    const F half = c.from_int(2).inverse();
    return std::make_pair((-b + *s) * half, (-b - *s) * half);
}

} // namespace quadconj
