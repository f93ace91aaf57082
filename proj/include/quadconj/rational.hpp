#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "quadconj/errors.hpp"

namespace quadconj {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact rational scalar, always in lowest terms with positive denominator
// (the backing type maintains that canonical form).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}                      // NOLINT: implicit by design
    explicit Rational(BigInt n) : v_(std::move(n)) {}
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw internal_error("rational with zero denominator");
        v_ = BigRat(num);
        v_ /= BigRat(den);
    }
    static Rational from_ratio(long long n, long long d) {
        return Rational(BigInt(n), BigInt(d));
    }

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return denominator(v_) == 1; }
    int sign() const { return v_ == 0 ? 0 : (v_ < 0 ? -1 : 1); }

    // Same-field constants; the instance argument style keeps the interface
    // uniform with prime-field elements, which need a modulus to exist.
    Rational zero() const { return Rational(); }
    Rational one() const { return Rational(1); }
    Rational from_int(long long n) const { return Rational(n); }

    Rational operator-() const { Rational r; r.v_ = -v_; return r; }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.v_ == 0) throw internal_error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    Rational inverse() const {
        if (v_ == 0) throw internal_error("inverse of zero");
        Rational r;
        r.v_ = 1 / v_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return v_ < 0 ? -*this : *this; }

    // "5", "-3/7"; integers print without a denominator.
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) s += "/" + den().str();
        return s;
    }

private:
    BigRat v_;
};

// ---- integer helpers ------------------------------------------------------

inline BigInt big_abs(const BigInt& n) { return n < 0 ? BigInt(-n) : n; }

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

// Floor of the square root of n >= 0.
inline BigInt isqrt(const BigInt& n) {
    check_internal(n >= 0, "isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt r = isqrt(n);
    return r * r == n;
}

// Floor of the cube root of n >= 0.
inline BigInt icbrt_floor(const BigInt& n) {
    check_internal(n >= 0, "icbrt_floor of negative");
    if (n == 0) return 0;
    BigInt lo = 0, hi = 1;
    while (hi * hi * hi <= n) hi <<= 1;
    while (lo + 1 < hi) {
        BigInt mid = (lo + hi) / 2;
        if (mid * mid * mid <= n) lo = mid; else hi = mid;
    }
    return lo;
}

inline bool is_perfect_cube(const BigInt& n) {
    BigInt r = icbrt_floor(big_abs(n));
    return r * r * r == big_abs(n);
}

// Exact signed cube root; requires n to be a perfect cube.
inline BigInt exact_icbrt(const BigInt& n) {
    BigInt r = icbrt_floor(big_abs(n));
    check_internal(r * r * r == big_abs(n), "exact_icbrt of non-cube");
    return n < 0 ? BigInt(-r) : r;
}

// Trial-division factorization. Primes are found up to `bound`; a leftover
// cofactor below bound^2 is necessarily prime. Anything bigger is an error:
// inputs here are desk-scale and we do not ship a general-purpose factorer.
inline std::vector<std::pair<BigInt, int>> factorize(BigInt n,
                                                     std::uint64_t bound = 1000000) {
    check_internal(n != 0, "factorize(0)");
    std::vector<std::pair<BigInt, int>> out;
    n = big_abs(n);
    auto strip = [&](const BigInt& p) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e > 0) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (BigInt d = 5; d <= bound && d * d <= n; d += 6) {
        strip(d);
        strip(d + 2);
    }
    if (n > 1) {
        if (n > BigInt(bound) * BigInt(bound))
            throw user_error("integer factorization bound exceeded (cofactor " +
                             n.str() + ")");
        out.emplace_back(n, 1);
    }
    return out;
}

// All positive divisors (desk-scale inputs only).
inline std::vector<BigInt> divisors(const BigInt& n,
                                    std::uint64_t bound = 1000000) {
    std::vector<BigInt> out{1};
    for (const auto& [p, e] : factorize(n, bound)) {
        std::size_t base = out.size();
        BigInt pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

} // namespace quadconj
