#pragma once

#include <cstdint>
#include <string>

#include "quadconj/errors.hpp"

namespace quadconj {

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
        if (n % d == 0) return n == d;
    }
    for (std::uint64_t d = 11; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

// Element of F_p for a runtime prime p > 3. Every element carries its
// modulus; mixing moduli is an internal error.
class Fp {
public:
    Fp(std::uint64_t p, std::int64_t value) : p_(p) {
        check_internal(p > 3, "prime field needs p > 3");
        std::int64_t m = value % static_cast<std::int64_t>(p);
        v_ = static_cast<std::uint64_t>(m < 0 ? m + static_cast<std::int64_t>(p) : m);
    }

    static Fp checked(std::uint64_t p, std::int64_t value) {
        if (p <= 3 || !is_prime_u64(p))
            throw user_error("field modulus must be a prime greater than 3");
        return Fp(p, value);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp zero() const { return Fp(p_, 0); }
    Fp one() const { return Fp(p_, 1); }
    Fp from_int(long long n) const { return Fp(p_, n); }

    Fp operator-() const { return Fp(p_, v_ == 0 ? 0 : static_cast<std::int64_t>(p_ - v_)); }

    Fp& operator+=(const Fp& o) {
        same_field(o);
        v_ += o.v_;
        if (v_ >= p_) v_ -= p_;
        return *this;
    }
    Fp& operator-=(const Fp& o) {
        same_field(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return *this;
    }
    Fp& operator*=(const Fp& o) {
        same_field(o);
        v_ = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(v_) * o.v_ % p_);
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }

    Fp pow(std::uint64_t e) const {
        Fp base = *this, acc = one();
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    Fp inverse() const {
        check_internal(v_ != 0, "inverse of zero in F_p");
        return pow(p_ - 2);
    }

    friend bool operator==(const Fp& a, const Fp& b) {
        return a.p_ == b.p_ && a.v_ == b.v_;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    std::string str() const { return std::to_string(v_); }

private:
    void same_field(const Fp& o) const {
        check_internal(p_ == o.p_, "mixed prime-field moduli");
    }

    std::uint64_t p_;
    std::uint64_t v_;
};

} // namespace quadconj
