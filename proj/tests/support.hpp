#pragma once

// Shared helpers for the test suites: seeded random generators and the
// independent oracles the expected values are computed with.

#include <random>
#include <vector>

#include "quadconj/normalform.hpp"
#include "quadconj/parser.hpp"

namespace testsupport {

using namespace quadconj;

// ---- random generators (all deterministic via caller-owned engines) --------

inline Rational random_rational(std::mt19937_64& rng, long long height,
                                bool allow_zero = true) {
    std::uniform_int_distribution<long long> num(-height, height);
    std::uniform_int_distribution<long long> den(1, height);
    while (true) {
        Rational q(num(rng), den(rng));
        if (allow_zero || !q.is_zero()) return q;
    }
}

inline Fp random_fp(std::mt19937_64& rng, std::uint64_t p, bool allow_zero = true) {
    std::uniform_int_distribution<std::uint64_t> pick(allow_zero ? 0 : 1, p - 1);
    return Fp(p, static_cast<std::int64_t>(pick(rng)));
}

// Uniform valid degree-2 map with integer coefficient height <= h.
inline RatMap<Rational> random_map_q(std::mt19937_64& rng, long long h = 20) {
    std::uniform_int_distribution<long long> coeff(-h, h);
    while (true) {
        std::vector<Rational> nc, dc;
        for (int i = 0; i < 3; ++i) nc.emplace_back(coeff(rng));
        for (int i = 0; i < 3; ++i) dc.emplace_back(coeff(rng));
        Poly<Rational> num(nc), den(dc);
        if (den.is_zero() || num.is_zero()) continue;
        if (std::max(num.degree(), den.degree()) != 2) continue;
        if (gcd_monic(num, den).degree() != 0) continue;
        return RatMap<Rational>(num, den);
    }
}

inline RatMap<Fp> random_map_fp(std::mt19937_64& rng, std::uint64_t p) {
    std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
    while (true) {
        std::vector<Fp> nc, dc;
        for (int i = 0; i < 3; ++i)
            nc.emplace_back(p, static_cast<std::int64_t>(coeff(rng)));
        for (int i = 0; i < 3; ++i)
            dc.emplace_back(p, static_cast<std::int64_t>(coeff(rng)));
        Poly<Fp> num(nc), den(dc);
        if (den.is_zero() || num.is_zero()) continue;
        if (std::max(num.degree(), den.degree()) != 2) continue;
        if (gcd_monic(num, den).degree() != 0) continue;
        return RatMap<Fp>(num, den);
    }
}

inline Moebius<Rational> random_moebius_q(std::mt19937_64& rng, long long h = 10) {
    std::uniform_int_distribution<long long> entry(-h, h);
    while (true) {
        Rational a(entry(rng)), b(entry(rng)), c(entry(rng)), e(entry(rng));
        if ((a * e - b * c).is_zero()) continue;
        return Moebius<Rational>(a, b, c, e);
    }
}

inline Moebius<Fp> random_moebius_fp(std::mt19937_64& rng, std::uint64_t p) {
    std::uniform_int_distribution<std::uint64_t> entry(0, p - 1);
    while (true) {
        Fp a(p, static_cast<std::int64_t>(entry(rng)));
        Fp b(p, static_cast<std::int64_t>(entry(rng)));
        Fp c(p, static_cast<std::int64_t>(entry(rng)));
        Fp e(p, static_cast<std::int64_t>(entry(rng)));
        if ((a * e - b * c).is_zero()) continue;
        return Moebius<Fp>(a, b, c, e);
    }
}

// Random norm-1 element of Q(sqrt d) as (x - y sqrt d)/(x + y sqrt d);
// every norm-1 element has this shape.
inline QuadExt<Rational> random_norm_one(std::mt19937_64& rng, const Rational& d,
                                         long long h = 50) {
    std::uniform_int_distribution<long long> pick(-h, h);
    while (true) {
        Rational x(pick(rng)), y(pick(rng));
        if (x.is_zero() && y.is_zero()) continue;
        QuadExt<Rational> gamma(x, y, d);
        QuadExt<Rational> alpha = gamma.conj() / gamma;
        check_internal(alpha.norm().is_one(), "norm-1 construction broken");
        return alpha;
    }
}

// Random square-free d in [-30, 30] \ {0, 1}.
inline Rational random_squarefree_d(std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> pick(-30, 30);
    while (true) {
        long long v = pick(rng);
        if (v == 0 || v == 1) continue;
        Rational d(v);
        if (is_square(d)) continue;
        if (!squarefree_part(d).cofactor.is_one()) continue;
        return d;
    }
}

// ---- independent oracles -----------------------------------------------------

// Plain Laplace-expansion determinant, kept separate from the library's
// Bareiss elimination on purpose.
template <class F>
F laplace_det(const std::vector<std::vector<F>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    F acc = m[0][0].zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<F>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<F> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        F term = m[0][j] * laplace_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Sylvester-matrix resultant built independently of the library routine.
template <class F>
F sylvester_resultant_oracle(const Poly<F>& p, const Poly<F>& q) {
    const int dp = p.degree(), dq = q.degree();
    const std::size_t n = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<F>> m(n, std::vector<F>(n, p.field_zero()));
    for (int row = 0; row < dq; ++row)
        for (int j = 0; j <= dp; ++j)
            m[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + j)] =
                p.coeff(dp - j);
    for (int row = 0; row < dp; ++row)
        for (int j = 0; j <= dq; ++j)
            m[static_cast<std::size_t>(dq + row)][static_cast<std::size_t>(row + j)] =
                q.coeff(dq - j);
    return laplace_det(m);
}

// Sum of 1/(1 - lambda) over the fixed-point multipliers, computed in K for
// rational entries, in K(sqrt d) for quadratic pairs, and through the
// logarithmic derivative of the multiplier characteristic polynomial for a
// Galois-conjugate cubic orbit. Requires no multiplier equal to 1.
template <class F>
F multiplier_reciprocal_sum(const FixedPointData<F>& data, const F& one) {
    F acc = one.zero();
    for (const auto& entry : data.entries) {
        if (const auto* a = std::get_if<AffineFixedPoint<F>>(&entry)) {
            acc += one.from_int(a->multiplicity) / (one - a->multiplier);
        } else if (const auto* i = std::get_if<InfinityFixedPoint<F>>(&entry)) {
            acc += one.from_int(i->multiplicity) / (one - i->multiplier);
        } else if (const auto* q = std::get_if<QuadraticFixedPair<F>>(&entry)) {
            QuadExt<F> lift = QuadExt<F>::from_base(one, q->multiplier.radicand());
            QuadExt<F> term = lift / (lift - q->multiplier);
            QuadExt<F> both = term + term.conj();
            check_internal(both.y().is_zero(), "conjugate sum must be rational");
            acc += both.x();
        } else {
            const auto& c = std::get<CubicFixedOrbit<F>>(entry);
            // sum over roots of f of 1/(1-x) = f'(1)/f(1).
            F f1 = c.multiplier_charpoly.eval(one);
            check_internal(!f1.is_zero(), "multiplier 1 in cubic orbit");
            acc += c.multiplier_charpoly.derivative().eval(one) / f1;
        }
    }
    return acc;
}

// True if some multiplier equals 1, read off the invariants: the multiplier
// cubic has f(1) = 3 - 2 s1 + s2.
template <class F>
bool has_multiplier_one(const ModuliPoint<F>& s) {
    return (s.s1.from_int(3) - s.s1.from_int(2) * s.s1 + s.s2).is_zero();
}

}  // namespace testsupport
