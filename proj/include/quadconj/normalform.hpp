#pragma once

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/moduli.hpp"
#include "quadconj/quadext.hpp"
#include "quadconj/ratmap.hpp"

namespace quadconj {

// ---- normal forms ------------------------------------------------------------

template <class F>
struct TrivialAutForm {
    ModuliPoint<F> sigma;
    friend bool operator==(const TrivialAutForm& a, const TrivialAutForm& b) {
        return a.sigma == b.sigma;
    }
};

// k z + b/z with k outside {0, -1/2}, b canonicalized within its square class.
template <class F>
struct C2Form {
    F k, b;
    friend bool operator==(const C2Form& a, const C2Form& b) {
        return a.k == b.k && a.b == b.b;
    }
};

// theta_{d,k} = (k z^2 - 2 d z + d k)/(z^2 - 2 k z + d); d canonical in its
// square class, k not canonical (the equivalence on k is a genuine orbit, so
// equality is decided by s3_dk_conjugate instead).
template <class F>
struct S3GeneralForm {
    F d, k;
    friend bool operator==(const S3GeneralForm& a, const S3GeneralForm& b) {
        return a.d == b.d && a.k == b.k;
    }
};

// t/z^2 with t canonical in the cube-class pair {[t], [1/t]}.
template <class F>
struct S3CycleForm {
    F t;
    friend bool operator==(const S3CycleForm& a, const S3CycleForm& b) {
        return a.t == b.t;
    }
};

template <class F>
using NormalForm =
    std::variant<TrivialAutForm<F>, C2Form<F>, S3GeneralForm<F>, S3CycleForm<F>>;

// ---- representative maps -----------------------------------------------------

template <class F>
RatMap<F> trivial_representative(const ModuliPoint<F>& s) {
    if (symmetry_locus_value(s).is_zero())
        throw user_error(
            "no trivial-automorphism representative: the point lies on the "
            "symmetry locus");
    auto [num, den] = trivial_family_polys(s);
    RatMap<F> rep(num, den);
    check_internal(rep.degree() == 2, "trivial representative degenerated");
    check_internal(sigma_invariants(rep) == s,
                   "trivial representative has wrong invariants");
    return rep;
}

template <class F>
RatMap<F> c2_representative(const F& k, const F& b) {
    const F zero = k.zero(), one = k.one();
    if (k.is_zero() || k == -(one / one.from_int(2)))
        throw user_error("c2 form needs k outside {0, -1/2}");
    if (b.is_zero()) throw user_error("c2 form needs b != 0");
    return RatMap<F>(Poly<F>::of({b, zero, k}), Poly<F>::of({zero, one}));
}

template <class F>
RatMap<F> s3_dk_representative(const F& d, const F& k) {
    const F one = k.one(), two = k.from_int(2);
    if (d.is_zero() || k * k == d)
        throw user_error("theta_{d,k} needs d != 0 and k^2 != d");
    return RatMap<F>(Poly<F>::of({d * k, -two * d, k}),
                     Poly<F>::of({d, -two * k, one}));
}

template <class F>
RatMap<F> s3_t_representative(const F& t) {
    if (t.is_zero()) throw user_error("t/z^2 needs t != 0");
    const F zero = t.zero(), one = t.one();
    return RatMap<F>(Poly<F>::constant(t), Poly<F>::of({zero, zero, one}));
}

template <class F>
RatMap<F> representative_map(const NormalForm<F>& form) {
    return std::visit(
        [](const auto& f) -> RatMap<F> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, TrivialAutForm<F>>)
                return trivial_representative(f.sigma);
            else if constexpr (std::is_same_v<T, C2Form<F>>)
                return c2_representative(f.k, f.b);
            else if constexpr (std::is_same_v<T, S3GeneralForm<F>>)
                return s3_dk_representative(f.d, f.k);
            else
                return s3_t_representative(f.t);
        },
        form);
}

// ---- conjugacy decisions -----------------------------------------------------

template <class F>
struct SquareScaleCert {
    F m;  // b' = b * m^2
};

template <class F>
struct S3OrbitCert {
    F gamma;
    F b;
    bool inverted;  // witness z -> b d / z instead of (z - b d gamma)/(-gamma z + b)
};

template <class F>
struct CubeScaleCert {
    F c;
    bool through_inversion;  // t t' = c^3 (witness z -> c/z) vs t/t' = c^3
};

template <class F>
using Certificate = std::variant<std::monostate, SquareScaleCert<F>,
                                 S3OrbitCert<F>, CubeScaleCert<F>>;

template <class F>
struct ConjDecision {
    bool conjugate = false;
    // Conjugate over the algebraic closure (differs from `conjugate` only
    // when the automorphism group is nontrivial).
    bool kbar_conjugate = false;
    std::optional<Moebius<F>> witness;
    Certificate<F> certificate;
};

// kz + b/z vs k'z + b'/z: conjugate over the closure iff k = k', over K iff
// additionally b/b' is a square.
template <class F>
ConjDecision<F> c2_conjugate(const C2Form<F>& f1, const C2Form<F>& f2) {
    RatMap<F> rep1 = c2_representative(f1.k, f1.b);  // validates the forms
    RatMap<F> rep2 = c2_representative(f2.k, f2.b);
    ConjDecision<F> dec;
    if (f1.k != f2.k) return dec;
    dec.kbar_conjugate = true;
    auto mu = exact_sqrt(f1.b / f2.b);
    if (!mu) return dec;
    dec.conjugate = true;
    dec.witness = Moebius<F>::scaling(*mu);  // z -> mu z sends b to b/mu^2 = b'
    dec.certificate = SquareScaleCert<F>{mu->one() / *mu};
    check_internal(conjugate(rep1, *dec.witness) == rep2,
                   "c2 scaling witness failed verification");
    return dec;
}

// t/z^2 vs t'/z^2: conjugate iff t/t' or t t' is a cube; the witness is
// z -> c z in the first case and z -> c/z in the second.
template <class F>
ConjDecision<F> s3_t_conjugate(const F& t1, const F& t2) {
    RatMap<F> rep1 = s3_t_representative(t1);
    RatMap<F> rep2 = s3_t_representative(t2);
    ConjDecision<F> dec;
    dec.kbar_conjugate = true;
    if (auto c = cube_root(t1 / t2)) {
        dec.conjugate = true;
        dec.witness = Moebius<F>::scaling(*c);
        dec.certificate = CubeScaleCert<F>{*c, false};
    } else if (auto c2 = cube_root(t1 * t2)) {
        dec.conjugate = true;
        dec.witness = Moebius<F>(t1.zero(), *c2, t1.one(), t1.zero());
        dec.certificate = CubeScaleCert<F>{*c2, true};
    }
    if (dec.conjugate) {
        check_internal(conjugate(rep1, *dec.witness) == rep2,
                       "cube-scale witness failed verification");
    }
    return dec;
}

namespace detail {

inline bool is_squarefree_integer(const Rational& d) {
    if (!d.is_integer() || d.is_zero()) return false;
    return squarefree_part(d).cofactor.is_one();
}

// Exhaustive PGL_2(F_p) witness search; the group has p^3 - p elements.
inline std::optional<Moebius<Fp>> pgl2_witness_search(const RatMap<Fp>& phi,
                                                      const RatMap<Fp>& psi) {
    const std::uint64_t p = phi.field_one().modulus();
    if (p > 257)
        throw user_error(
            "exhaustive PGL_2(F_p) witness search is limited to p <= 257");
    const Fp zero(p, 0), one(p, 1);
    auto scan = [&](auto&& emit) -> std::optional<Moebius<Fp>> {
        // Canonical representatives: first nonzero entry equal to 1.
        for (std::uint64_t b = 0; b < p; ++b)
            for (std::uint64_t c = 0; c < p; ++c)
                for (std::uint64_t e = 0; e < p; ++e) {
                    auto r = emit(one, Fp(p, static_cast<std::int64_t>(b)),
                                  Fp(p, static_cast<std::int64_t>(c)),
                                  Fp(p, static_cast<std::int64_t>(e)));
                    if (r) return r;
                }
        for (std::uint64_t c = 0; c < p; ++c)
            for (std::uint64_t e = 0; e < p; ++e) {
                auto r = emit(zero, one, Fp(p, static_cast<std::int64_t>(c)),
                              Fp(p, static_cast<std::int64_t>(e)));
                if (r) return r;
            }
        for (std::uint64_t e = 0; e < p; ++e) {
            auto r = emit(zero, zero, one, Fp(p, static_cast<std::int64_t>(e)));
            if (r) return r;
        }
        return std::nullopt;
    };
    return scan([&](const Fp& a, const Fp& b, const Fp& c,
                    const Fp& e) -> std::optional<Moebius<Fp>> {
        if ((a * e - b * c).is_zero()) return std::nullopt;
        Moebius<Fp> h(a, b, c, e);
        if (conjugate(phi, h) == psi) return h;
        return std::nullopt;
    });
}

}  // namespace detail

// theta_{d,k} vs theta_{d',k'} over Q with d, d' square-free: conjugate iff
// d = d' and one of the two cross ratios
//   (k+sqrt d)(k'-sqrt d) / (k-sqrt d)(k'+sqrt d)
//   (k+sqrt d)(k'+sqrt d) / (k-sqrt d)(k'-sqrt d)
// is a perfect cube of norm 1 in Q(sqrt d). The recovered cube root alpha
// yields the conjugating matrix via gamma*sqrt(d) = (1-alpha)/(1+alpha).
inline ConjDecision<Rational> s3_dk_conjugate(const S3GeneralForm<Rational>& f1,
                                              const S3GeneralForm<Rational>& f2) {
    RatMap<Rational> rep1 = s3_dk_representative(f1.d, f1.k);
    RatMap<Rational> rep2 = s3_dk_representative(f2.d, f2.k);
    if (!detail::is_squarefree_integer(f1.d) || !detail::is_squarefree_integer(f2.d))
        throw user_error("theta_{d,k} conjugacy over Q needs square-free d");
    if (is_square(f1.d) || is_square(f2.d))
        throw user_error(
            "theta_{d,k} with square d has a rational two-cycle; use the t/z^2 "
            "route");
    ConjDecision<Rational> dec;
    dec.kbar_conjugate = true;
    if (f1.d != f2.d) return dec;
    const Rational& d = f1.d;
    const Rational one(1);
    QuadExt<Rational> kp(f1.k, one, d), km(f1.k, -one, d);
    QuadExt<Rational> lp(f2.k, one, d), lm(f2.k, -one, d);
    struct Branch {
        QuadExt<Rational> cross;
        Rational b;
    };
    const std::array<Branch, 2> branches{
        Branch{(kp * lm) / (km * lp), one},
        Branch{(kp * lp) / (km * lm), -one}};
    for (const Branch& br : branches) {
        check_internal(br.cross.norm().is_one(), "cross ratio must have norm 1");
        auto alpha = cube_root_norm_one(br.cross);
        if (!alpha) continue;
        std::optional<Moebius<Rational>> h;
        Certificate<Rational> cert;
        if (*alpha == -alpha->one()) {
            // beta = 0 branch of the conjugating matrix: z -> b d / z.
            h = Moebius<Rational>(Rational(0), br.b * d, one, Rational(0));
            cert = S3OrbitCert<Rational>{Rational(0), br.b, true};
        } else {
            QuadExt<Rational> nu =
                (alpha->one() - *alpha) / (alpha->one() + *alpha);
            check_internal(nu.x().is_zero(),
                           "(1-alpha)/(1+alpha) must be a pure sqrt(d) multiple");
            Rational gamma = nu.y();
            h = Moebius<Rational>(one, -br.b * d * gamma, -gamma, br.b);
            cert = S3OrbitCert<Rational>{gamma, br.b, false};
        }
        if (conjugate(rep1, *h) == rep2) {
            dec.conjugate = true;
            dec.witness = h;
            dec.certificate = cert;
            return dec;
        }
    }
    return dec;
}

// Over F_p the (gamma, b) orbit is not worth unwinding: the group is small,
// so decide by exhaustive witness search.
inline ConjDecision<Fp> s3_dk_conjugate(const S3GeneralForm<Fp>& f1,
                                        const S3GeneralForm<Fp>& f2) {
    RatMap<Fp> rep1 = s3_dk_representative(f1.d, f1.k);
    RatMap<Fp> rep2 = s3_dk_representative(f2.d, f2.k);
    ConjDecision<Fp> dec;
    dec.kbar_conjugate = true;
    auto h = detail::pgl2_witness_search(rep1, rep2);
    if (h) {
        dec.conjugate = true;
        dec.witness = h;
    }
    return dec;
}

// ---- normalization ------------------------------------------------------------

template <class F>
struct NormalizationResult {
    NormalForm<F> form;
    Moebius<F> witness;  // conjugate(input, witness) == representative_map(form)
};

namespace detail {

// Canonical square-class data for the C2 parameter b: returns the canonical
// representative plus the scaling m with b = rep * m^2.
inline std::pair<Rational, Rational> square_class_scale(const Rational& b) {
    SquareFreeDecomp sf = squarefree_part(b);
    return {Rational(sf.core), sf.cofactor};
}
inline std::pair<Fp, Fp> square_class_scale(const Fp& b) {
    Fp rep = square_class_rep(b);
    auto m = exact_sqrt(b / rep);
    check_internal(m.has_value(), "square-class scale must exist");
    return {rep, *m};
}

// Canonical cube-class data for the parameter t of t/z^2. The invariant of
// the class is the unordered pair {[t], [1/t]} in K*/(K*)^3; pick the
// smaller positive cube-free representative.
inline Rational cycle_parameter_rep(const Rational& t) {
    Rational a = cube_class_rep(t);
    Rational b = cube_class_rep(t.inverse());
    auto lex_less = [](const Rational& x, const Rational& y) {
        if (x.num() != y.num()) return x.num() < y.num();
        return x.den() < y.den();
    };
    return lex_less(a, b) ? a : b;
}
inline Fp cycle_parameter_rep(const Fp& t) { return cube_pair_class_rep(t); }

}  // namespace detail

// Conjugates a C2 map to kz + b/z with canonical b and an exact witness.
// The route: the multiplier spectrum is {2k-1, 2k-1, 1/k}; the fixed point
// carrying 1/k is Galois-stable, hence rational or infinite. Send it to
// infinity, translate the finite pole to 0, and rescale.
template <class F>
NormalizationResult<F> normalize_c2(const RatMap<F>& phi) {
    ModuliPoint<F> s = sigma_invariants(phi);
    if (aut_class_of(s) != AutClass::C2)
        throw user_error("normalize_c2 needs a map with automorphism group C2");
    const F one = phi.field_one(), zero = phi.field_zero();
    const F two = one.from_int(2);

    Poly<F> f = multiplier_cubic(s);
    Poly<F> g = gcd_monic(f, f.derivative());
    F lambda = g.degree() == 1 ? -g.coeff(0) : -g.coeff(1) / two;
    F k = (lambda + one) / two;
    check_internal(!k.is_zero() && k != -(one / two), "c2 parameter k out of range");

    // Locate the fixed point with multiplier 1/k (the triple point when k=1).
    FixedPointData<F> data = fixed_point_data(phi);
    std::optional<ProjPoint<F>> target;
    const F want = one / k;
    for (const auto& entry : data.entries) {
        if (const auto* a = std::get_if<AffineFixedPoint<F>>(&entry)) {
            if ((k.is_one() && a->multiplicity == 3) ||
                (!k.is_one() && a->multiplicity == 1 && a->multiplier == want)) {
                target = ProjPoint<F>::affine(a->point);
            }
        } else if (const auto* i = std::get_if<InfinityFixedPoint<F>>(&entry)) {
            if ((k.is_one() && i->multiplicity == 3) ||
                (!k.is_one() && i->multiplicity == 1 && i->multiplier == want)) {
                target = ProjPoint<F>::infinity(one);
            }
        }
    }
    check_internal(target.has_value(), "c2 map without a 1/k fixed point");

    Moebius<F> h = Moebius<F>::identity(one);
    if (!target->is_infinity()) {
        // z -> (r z + 1)/z sends infinity to r.
        h = Moebius<F>(target->value(), one, one, zero);
    }
    RatMap<F> psi = conjugate(phi, h);
    check_internal(psi.den().degree() == 1, "pole structure after the move");
    F pole = -psi.den().coeff(0) / psi.den().coeff(1);
    h = h * Moebius<F>::translation(pole);
    psi = conjugate(phi, h);

    // Now exactly (k z^2 + b0)/z.
    check_internal(psi.num().degree() == 2 && psi.num().coeff(1).is_zero() &&
                       psi.den().degree() == 1 && psi.den().coeff(0).is_zero(),
                   "c2 normalization did not reach kz + b/z");
    F scale = psi.den().coeff(1);
    check_internal(psi.num().coeff(2) / scale == k, "c2 normalization lost k");
    F b0 = psi.num().coeff(0) / scale;
    check_internal(!b0.is_zero(), "c2 normalization lost b");

    auto [b, m] = detail::square_class_scale(b0);
    h = h * Moebius<F>::scaling(m);
    NormalizationResult<F> out{C2Form<F>{k, b}, h};
    check_internal(conjugate(phi, h) == c2_representative(k, b),
                   "c2 witness failed verification");
    return out;
}

// Conjugates an S3 map to t/z^2 (two-cycle defined over K) or theta_{d,k}
// (two-cycle quadratic over K), with an exact witness.
template <class F>
NormalizationResult<F> normalize_s3(const RatMap<F>& phi) {
    ModuliPoint<F> s = sigma_invariants(phi);
    if (aut_class_of(s) != AutClass::S3)
        throw user_error("normalize_s3 needs a map with automorphism group S3");
    const F one = phi.field_one(), zero = phi.field_zero();
    const F two = one.from_int(2);

    Poly<F> dyn = second_dynatomic(phi);
    check_internal(dyn.degree() == 1 || dyn.degree() == 2,
                   "second dynatomic polynomial of unexpected degree");

    auto finish_cycle = [&](Moebius<F> move) -> NormalizationResult<F> {
        RatMap<F> psi = conjugate(phi, move);
        check_internal(psi.num().degree() == 0 && psi.den().degree() == 2 &&
                           psi.den().coeff(1).is_zero() &&
                           psi.den().coeff(0).is_zero(),
                       "s3 normalization did not reach t/z^2");
        F t = psi.num().coeff(0) / psi.den().coeff(2);
        F tc = detail::cycle_parameter_rep(t);
        ConjDecision<F> adj = s3_t_conjugate(t, tc);
        check_internal(adj.conjugate, "canonical t not in the cube-class pair");
        Moebius<F> w = move * *adj.witness;
        NormalizationResult<F> out{S3CycleForm<F>{tc}, w};
        check_internal(conjugate(phi, w) == s3_t_representative(tc),
                       "s3 cycle witness failed verification");
        return out;
    };

    if (dyn.degree() == 1) {
        // Infinity is on the two-cycle; translate the finite cycle point to 0.
        F r = -dyn.coeff(0) / dyn.coeff(1);
        return finish_cycle(Moebius<F>::translation(r));
    }
    Poly<F> mdyn = dyn.monic();
    if (auto roots = split_monic_quadratic(mdyn)) {
        // Rational two-cycle {r1, r2}: send (0, infinity) to it.
        auto [r1, r2] = *roots;
        check_internal(r1 != r2, "two-cycle points must be distinct");
        return finish_cycle(Moebius<F>(r2, r1, one, one));
    }
    // Quadratic two-cycle a +- b sqrt(d): conjugate by f(z) = b z + a, which
    // puts the cycle at +-sqrt(d); the result must be exactly theta_{d,k}.
    const F bq = mdyn.coeff(1), cq = mdyn.coeff(0);
    const F disc = bq * bq - one.from_int(4) * cq;
    auto [d, sc] = canonical_radicand(disc);
    F av = -bq / two;
    F bv = sc / two;
    Moebius<F> move(bv, av, zero, one);
    RatMap<F> psi = conjugate(phi, move);
    check_internal(psi.den().degree() == 2, "theta form needs a quadratic denominator");
    F alpha = psi.den().coeff(2);
    F k = -psi.den().coeff(1) / (two * alpha);
    check_internal(psi.den().coeff(0) / alpha == d, "theta form lost d");
    check_internal(psi == s3_dk_representative(d, k),
                   "s3 normalization did not reach theta_{d,k}");
    return {S3GeneralForm<F>{d, k}, move};
}

// ---- classification -----------------------------------------------------------

template <class F>
struct Classification {
    AutClass aut;
    ModuliPoint<F> sigma;
    NormalForm<F> form;
    // For C2/S3: conjugate(input, witness) == representative_map(form).
    // Trivial-automorphism witnesses are computed on demand via
    // trivial_case_witness (the solve is the expensive step).
    std::optional<Moebius<F>> witness;
};

template <class F>
Classification<F> classify(const RatMap<F>& phi) {
    if (phi.degree() != 2) throw user_error("classification needs a degree-2 map");
    ModuliPoint<F> s = sigma_invariants(phi);
    switch (aut_class_of(s)) {
        case AutClass::Trivial:
            return {AutClass::Trivial, s, TrivialAutForm<F>{s}, std::nullopt};
        case AutClass::C2: {
            auto r = normalize_c2(phi);
            return {AutClass::C2, s, r.form, r.witness};
        }
        case AutClass::S3: {
            auto r = normalize_s3(phi);
            return {AutClass::S3, s, r.form, r.witness};
        }
    }
    throw internal_error("unreachable automorphism class");
}

// ---- the trivial-case witness --------------------------------------------------

namespace detail {

// Unique Moebius transformation with w(src[i]) = dst[i] for three distinct
// points on each side, built from the projective three-point form.
template <class G>
Moebius<G> mobius_through_triples(const std::array<ProjPoint<G>, 3>& src,
                                  const std::array<ProjPoint<G>, 3>& dst) {
    auto to_std = [](const std::array<ProjPoint<G>, 3>& p) {
        // Matrix sending (p0, p1, p2) to (0, infinity, 1).
        G x0 = p[0].hom_x(), y0 = p[0].hom_y();
        G x1 = p[1].hom_x(), y1 = p[1].hom_y();
        G x2 = p[2].hom_x(), y2 = p[2].hom_y();
        G k0 = x2 * y1 - y2 * x1;
        G k1 = x2 * y0 - y2 * x0;
        return Moebius<G>(k0 * y0, -(k0 * x0), k1 * y1, -(k1 * x1));
    };
    return to_std(dst).inverse() * to_std(src);
}

template <class F>
std::optional<Moebius<F>> descend_to_base(const Moebius<QuadExt<F>>& w) {
    // Entries are scaled so the first nonzero one is 1; a matrix that is
    // rational up to scale then has all irrational parts equal to zero.
    auto e = w.entries();
    for (const auto& q : e) {
        if (!q.y().is_zero()) return std::nullopt;
    }
    return Moebius<F>(e[0].x(), e[1].x(), e[2].x(), e[3].x());
}

}  // namespace detail

// The unique h in PGL_2(K) with phi^h = psi for two maps with trivial
// automorphism group and equal invariants. Both maps have the same critical
// divisor structure; h must transport critical points to critical points and
// commute with the dynamics, which pins it on three exactly-known points.
template <class F>
Moebius<F> trivial_case_witness(const RatMap<F>& phi, const RatMap<F>& psi) {
    ModuliPoint<F> s1 = sigma_invariants(phi);
    ModuliPoint<F> s2 = sigma_invariants(psi);
    if (s1 != s2)
        throw user_error("trivial_case_witness needs maps with equal invariants");
    if (aut_class_of(s1) != AutClass::Trivial)
        throw user_error("trivial_case_witness needs trivial automorphism groups");

    CriticalPoints<F> cp_src = critical_points(psi);
    CriticalPoints<F> cp_dst = critical_points(phi);
    check_internal(cp_src.rational == cp_dst.rational,
                   "critical fields of conjugate maps must match");

    auto try_witness = [&](const std::optional<Moebius<F>>& w)
        -> std::optional<Moebius<F>> {
        if (w && conjugate(phi, *w) == psi) return w;
        return std::nullopt;
    };

    if (cp_src.rational) {
        std::array<ProjPoint<F>, 2> c{cp_src.p1, cp_src.p2};
        std::array<ProjPoint<F>, 2> t{cp_dst.p1, cp_dst.p2};
        for (int pick : {0, 1}) {
            ProjPoint<F> v = psi.evaluate(c[static_cast<std::size_t>(pick)]);
            if (v == c[0] || v == c[1]) continue;
            for (int flip : {0, 1}) {
                ProjPoint<F> t0 = t[static_cast<std::size_t>(flip)];
                ProjPoint<F> t1 = t[static_cast<std::size_t>(1 - flip)];
                ProjPoint<F> tv =
                    phi.evaluate(pick == 0 ? t0 : t1);
                if (tv == t0 || tv == t1) continue;
                auto w = detail::mobius_through_triples<F>({c[0], c[1], v},
                                                           {t0, t1, tv});
                if (auto ok = try_witness(w)) return *ok;
            }
        }
    } else {
        using X = QuadExt<F>;
        const X theta_s = *cp_src.theta;
        const X theta_d = *cp_dst.theta;
        check_internal(theta_s.radicand() == theta_d.radicand(),
                       "critical radicands of conjugate maps must match");
        std::array<ProjPoint<X>, 2> c{ProjPoint<X>::affine(theta_s),
                                      ProjPoint<X>::affine(theta_s.conj())};
        std::array<ProjPoint<X>, 2> t{ProjPoint<X>::affine(theta_d),
                                      ProjPoint<X>::affine(theta_d.conj())};
        for (int pick : {0, 1}) {
            ProjPoint<X> v = psi.evaluate_ext(c[static_cast<std::size_t>(pick)]);
            if (v == c[0] || v == c[1]) continue;
            for (int flip : {0, 1}) {
                ProjPoint<X> t0 = t[static_cast<std::size_t>(flip)];
                ProjPoint<X> t1 = t[static_cast<std::size_t>(1 - flip)];
                ProjPoint<X> tv = phi.evaluate_ext(pick == 0 ? t0 : t1);
                if (tv == t0 || tv == t1) continue;
                Moebius<X> wx = detail::mobius_through_triples<X>(
                    {c[0], c[1], v}, {t0, t1, tv});
                if (auto w = detail::descend_to_base<F>(wx)) {
                    if (auto ok = try_witness(*w)) return *ok;
                }
            }
        }
    }
    throw internal_error("trivial-case witness search failed");
}

// ---- the full decision procedure ----------------------------------------------

template <class F>
ConjDecision<F> are_conjugate(const RatMap<F>& phi, const RatMap<F>& psi,
                              bool want_witness = true) {
    if (phi.degree() != 2 || psi.degree() != 2)
        throw user_error("conjugacy test needs degree-2 maps");
    if (phi.field_one() != psi.field_one())
        throw user_error("conjugacy test needs maps over the same field");
    ConjDecision<F> dec;
    ModuliPoint<F> s1 = sigma_invariants(phi);
    ModuliPoint<F> s2 = sigma_invariants(psi);
    if (s1 != s2) return dec;
    dec.kbar_conjugate = true;  // equal invariants pin the class over the closure

    switch (aut_class_of(s1)) {
        case AutClass::Trivial: {
            dec.conjugate = true;  // unique K-class per point off the locus
            if (want_witness) {
                dec.witness = trivial_case_witness(phi, psi);
            }
            return dec;
        }
        case AutClass::C2: {
            auto n1 = normalize_c2(phi);
            auto n2 = normalize_c2(psi);
            const auto& f1 = std::get<C2Form<F>>(n1.form);
            const auto& f2 = std::get<C2Form<F>>(n2.form);
            ConjDecision<F> inner = c2_conjugate(f1, f2);
            dec.conjugate = inner.conjugate;
            dec.certificate = inner.certificate;
            if (inner.conjugate) {
                dec.witness = n1.witness * *inner.witness * n2.witness.inverse();
                check_internal(conjugate(phi, *dec.witness) == psi,
                               "composed c2 witness failed verification");
            }
            return dec;
        }
        case AutClass::S3: {
            if constexpr (std::is_same_v<F, Fp>) {
                auto h = detail::pgl2_witness_search(phi, psi);
                dec.conjugate = h.has_value();
                dec.witness = h;
                return dec;
            } else {
                auto n1 = normalize_s3(phi);
                auto n2 = normalize_s3(psi);
                const bool cycle1 = std::holds_alternative<S3CycleForm<F>>(n1.form);
                const bool cycle2 = std::holds_alternative<S3CycleForm<F>>(n2.form);
                if (cycle1 != cycle2) return dec;  // two-cycle fields differ
                ConjDecision<F> inner;
                if (cycle1) {
                    inner = s3_t_conjugate(std::get<S3CycleForm<F>>(n1.form).t,
                                           std::get<S3CycleForm<F>>(n2.form).t);
                } else {
                    inner = s3_dk_conjugate(std::get<S3GeneralForm<F>>(n1.form),
                                            std::get<S3GeneralForm<F>>(n2.form));
                }
                dec.conjugate = inner.conjugate;
                dec.certificate = inner.certificate;
                if (inner.conjugate) {
                    dec.witness =
                        n1.witness * *inner.witness * n2.witness.inverse();
                    check_internal(conjugate(phi, *dec.witness) == psi,
                                   "composed s3 witness failed verification");
                }
                return dec;
            }
        }
    }
    throw internal_error("unreachable automorphism class");
}

} // namespace quadconj
