#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/exactnum.hpp"

namespace quadconj {

// Element x + y*sqrt(d) of the quadratic extension K(sqrt(d)). d must be a
// nonzero nonsquare of K, so the extension is a field and norms vanish only
// at zero. Arithmetic only combines elements with identical d.
template <class F>
class QuadExt {
public:
    QuadExt(F x, F y, F d) : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
        check_internal(!d_.is_zero(), "quadratic extension with d = 0");
        check_internal(!is_square(d_), "quadratic extension with square d");
    }

    static QuadExt from_base(const F& x, const F& d) {
        return QuadExt(x, x.zero(), d);
    }
    static QuadExt sqrt_d(const F& d) { return QuadExt(d.zero(), d.one(), d); }

    const F& x() const { return x_; }
    const F& y() const { return y_; }
    const F& radicand() const { return d_; }

    bool is_zero() const { return x_.is_zero() && y_.is_zero(); }
    bool is_one() const { return x_.is_one() && y_.is_zero(); }
    bool is_rational() const { return y_.is_zero(); }

    QuadExt zero() const { return QuadExt(x_.zero(), x_.zero(), d_); }
    QuadExt one() const { return QuadExt(x_.one(), x_.zero(), d_); }
    QuadExt from_int(long long n) const {
        return QuadExt(x_.from_int(n), x_.zero(), d_);
    }

    QuadExt conj() const { return QuadExt(x_, -y_, d_); }
    F norm() const { return x_ * x_ - d_ * y_ * y_; }
    F trace() const { return x_ + x_; }

    QuadExt operator-() const { return QuadExt(-x_, -y_, d_); }

    QuadExt& operator+=(const QuadExt& o) {
        same_ext(o);
        x_ += o.x_;
        y_ += o.y_;
        return *this;
    }
    QuadExt& operator-=(const QuadExt& o) {
        same_ext(o);
        x_ -= o.x_;
        y_ -= o.y_;
        return *this;
    }
    QuadExt& operator*=(const QuadExt& o) {
        same_ext(o);
        F nx = x_ * o.x_ + d_ * y_ * o.y_;
        F ny = x_ * o.y_ + y_ * o.x_;
        x_ = nx;
        y_ = ny;
        return *this;
    }
    QuadExt& operator/=(const QuadExt& o) { return *this *= o.inverse(); }

    friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
    friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
    friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
    friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }

    QuadExt inverse() const {
        F n = norm();
        check_internal(!n.is_zero(), "inverse of zero in K(sqrt d)");
        F ninv = n.inverse();
        return QuadExt(x_ * ninv, -y_ * ninv, d_);
    }

    friend bool operator==(const QuadExt& a, const QuadExt& b) {
        return a.d_ == b.d_ && a.x_ == b.x_ && a.y_ == b.y_;
    }
    friend bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }

    std::string str() const {
        return x_.str() + " + (" + y_.str() + ")*sqrt(" + d_.str() + ")";
    }

private:
    void same_ext(const QuadExt& o) const {
        check_internal(d_ == o.d_, "mixed quadratic extensions");
    }

    F x_, y_, d_;
};

// Cube root of a norm-1 element of Q(sqrt d), staying inside the norm-1
// group. A norm-1 beta with trace t satisfies beta^2 = t*beta - 1, hence
// trace(beta^3) = t^3 - 3t; solving that cubic for rational t and
// reconstructing beta = (alpha + t)/(t^2 - 1) covers every possible root.
// The reconstruction is verified exactly before returning, so correctness
// does not rest on the derivation.
inline std::optional<QuadExt<Rational>> cube_root_norm_one(
    const QuadExt<Rational>& alpha) {
    if (!alpha.norm().is_one())
        throw user_error("cube_root_norm_one requires a norm-1 argument");
    const Rational one(1);
    if (alpha.is_rational()) {
        // norm = x^2 = 1, so alpha = 1 or -1; both are their own cube root
        // candidates' cubes via beta = alpha.
        return QuadExt<Rational>::from_base(alpha.x(), alpha.radicand());
    }
    // Rational roots t of t^3 - 3t - trace(alpha): clear denominators and run
    // the rational-root theorem on the primitive integer model.
    const Rational s = alpha.trace();
    const BigInt u = s.num(), v = s.den();
    // v*t^3 - 3v*t - u = 0, t = x/y in lowest terms: x | u (u != 0 branch), y | v.
    std::vector<Rational> candidates;
    if (u == 0) {
        candidates.push_back(Rational(0));
    }
    for (const BigInt& x : divisors(u == 0 ? BigInt(1) : big_abs(u))) {
        for (const BigInt& y : divisors(big_abs(v))) {
            candidates.emplace_back(x, y);
            candidates.emplace_back(-x, y);
        }
    }
    for (const Rational& t : candidates) {
        if (t * t * t - Rational(3) * t != s) continue;
        if (t == one || t == -one) continue;  // would be alpha = -1 or 1
        Rational denom = t * t - one;
        QuadExt<Rational> beta((alpha.x() + t) / denom, alpha.y() / denom,
                               alpha.radicand());
        if (beta.norm().is_one() && beta * beta * beta == alpha) return beta;
    }
    return std::nullopt;
}

} // namespace quadconj
