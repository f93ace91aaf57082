#pragma once

#include <random>
#include <string>
#include <vector>

#include "quadconj/normalform.hpp"
#include "quadconj/parser.hpp"

// Built-in fixture suite: the textbook identities the classifier is supposed
// to reproduce exactly, runnable from the shipped binary via `selftest`.

namespace quadconj {

struct FixtureResult {
    std::string name;
    bool passed;
    std::string detail;  // populated on failure
};

namespace detail {

// Multiset of multipliers with multiplicities, for maps whose multipliers
// are all rational (throws otherwise).
inline std::vector<std::pair<Rational, int>> rational_multipliers(
    const FixedPointData<Rational>& data) {
    std::vector<std::pair<Rational, int>> out;
    for (const auto& entry : data.entries) {
        if (const auto* a = std::get_if<AffineFixedPoint<Rational>>(&entry)) {
            out.emplace_back(a->multiplier, a->multiplicity);
        } else if (const auto* i = std::get_if<InfinityFixedPoint<Rational>>(&entry)) {
            out.emplace_back(i->multiplier, i->multiplicity);
        } else if (const auto* q = std::get_if<QuadraticFixedPair<Rational>>(&entry)) {
            if (!q->multiplier.is_rational())
                throw user_error("irrational multiplier in rational multiset");
            out.emplace_back(q->multiplier.x(), 2);
        } else {
            throw user_error("cubic multiplier orbit in rational multiset");
        }
    }
    std::sort(out.begin(), out.end());
    // merge equal values
    std::vector<std::pair<Rational, int>> merged;
    for (const auto& [v, m] : out) {
        if (!merged.empty() && merged.back().first == v) merged.back().second += m;
        else merged.emplace_back(v, m);
    }
    return merged;
}

}  // namespace detail

inline std::vector<FixtureResult> run_fixture_suite() {
    std::vector<FixtureResult> results;
    auto record = [&](const std::string& name, bool ok, std::string detail = "") {
        results.push_back({name, ok, std::move(detail)});
    };
    const Rational one(1);

    try {
        auto phi = parse_map("(2z^2+2z+2)/(-z^2+2z+2)", one);
        auto s = sigma_invariants(phi);
        record("sigma of (2z^2+2z+2)/(-z^2+2z+2) is (0,0)",
               s.s1.is_zero() && s.s2.is_zero());
        record("(2z^2+2z+2)/(-z^2+2z+2) has trivial automorphism group",
               aut_class_of(s) == AutClass::Trivial);
        record("multiplier cubic at (0,0) is x^3 + 2",
               multiplier_cubic(s) ==
                   Poly<Rational>::of({Rational(2), Rational(0), Rational(0), one}));
        record("x^3 + 2 has no rational roots",
               rational_roots(multiplier_cubic(s)).empty());
        record("trivial representative at (0,0) reproduces the map",
               trivial_representative(s) == phi &&
                   format_map(phi) == "(2*z^2 + 2*z + 2)/(-z^2 + 2*z + 2)");
    } catch (const std::exception& ex) {
        record("trivial-case fixtures", false, ex.what());
    }

    try {
        bool all = true;
        std::string detail;
        for (long long c : {1, 2, -1}) {
            std::string text =
                c > 0 ? "z^2 + " + std::to_string(c) : "z^2 - " + std::to_string(-c);
            auto phi = parse_map(text, one);
            auto s = sigma_invariants(phi);
            bool sig = s.s1 == Rational(2) && s.s2 == Rational(4 * c);
            auto cls = classify(phi);
            auto* t = std::get_if<TrivialAutForm<Rational>>(&cls.form);
            std::string want = "2*z^2/(-z^2 + 4*z";
            want += c > 0 ? " - " + Rational(4 * c).str()
                          : " + " + Rational(-4 * c).str();
            want += ")";
            bool form = t && format_map(trivial_representative(t->sigma)) == want;
            if (!(sig && form)) {
                all = false;
                detail = "failed at c = " + std::to_string(c);
            }
        }
        record("z^2 + c normalizes to 2*z^2/(-z^2 + 4*z - 4c) for c in {1,2,-1}",
               all, detail);
    } catch (const std::exception& ex) {
        record("polynomial normal-form fixtures", false, ex.what());
    }

    try {
        std::mt19937_64 rng(20250810);
        std::uniform_int_distribution<long long> coeff(-9, 9), den(1, 6);
        bool all = true;
        std::string detail;
        for (int trial = 0; trial < 50 && all; ++trial) {
            Rational k = Rational(coeff(rng), den(rng));
            Rational b = Rational(coeff(rng), den(rng));
            if (k.is_zero() || b.is_zero()) { --trial; continue; }
            auto phi = RatMap<Rational>(
                Poly<Rational>::of({b, Rational(0), k}),
                Poly<Rational>::of({Rational(0), one}));
            auto spectrum = detail::rational_multipliers(fixed_point_data(phi));
            Rational lam = Rational(2) * k - one;
            Rational inv = one / k;
            std::vector<std::pair<Rational, int>> want;
            if (lam == inv) want = {{lam, 3}};
            else {
                want = {{lam, 2}, {inv, 1}};
                std::sort(want.begin(), want.end());
            }
            if (spectrum != want) {
                all = false;
                detail = "failed at k = " + k.str() + ", b = " + b.str();
            }
        }
        record("multipliers of kz + b/z are {2k-1, 2k-1, 1/k} (50 random cases)",
               all, detail);
    } catch (const std::exception& ex) {
        record("kz + b/z multiplier fixtures", false, ex.what());
    }

    try {
        auto phi = parse_map("1/z^2", one);
        auto spectrum = detail::rational_multipliers(fixed_point_data(phi));
        record("all multipliers of 1/z^2 equal -2",
               spectrum.size() == 1 && spectrum[0].first == Rational(-2) &&
                   spectrum[0].second == 3);
        auto s = sigma_invariants(phi);
        record("1/z^2 lands on the S3 point (-6, 12)",
               s.s1 == Rational(-6) && s.s2 == Rational(12) &&
                   aut_class_of(s) == AutClass::S3);
    } catch (const std::exception& ex) {
        record("1/z^2 fixtures", false, ex.what());
    }

    try {
        auto phi = parse_map("2z + 5/z", one);
        record("2z + 5/z parses to (2*z^2 + 5)/z",
               format_map(phi) == "(2*z^2 + 5)/z");
        Moebius<Rational> neg(Rational(-1), Rational(0), Rational(0), one);
        record("2z + 5/z is invariant under z -> -z", conjugate(phi, neg) == phi);
        auto cls = classify(phi);
        auto* c2 = std::get_if<C2Form<Rational>>(&cls.form);
        record("2z + 5/z classifies as C2 with (k, b) = (2, 5)",
               cls.aut == AutClass::C2 && c2 && c2->k == Rational(2) &&
                   c2->b == Rational(5));
    } catch (const std::exception& ex) {
        record("2z + 5/z fixtures", false, ex.what());
    }

    try {
        ModuliPoint<Rational> s{Rational(5), Rational(7)};
        record("representative at (5,7) is (2*z^2 - 3*z - 3)/(-z^2 + 7*z - 10)",
               format_map(trivial_representative(s)) ==
                   "(2*z^2 - 3*z - 3)/(-z^2 + 7*z - 10)");
        auto d1 = s3_dk_conjugate(S3GeneralForm<Rational>{Rational(2), one},
                                  S3GeneralForm<Rational>{Rational(2), Rational(2)});
        auto d2 = s3_dk_conjugate(S3GeneralForm<Rational>{Rational(2), one},
                                  S3GeneralForm<Rational>{Rational(2), Rational(-1)});
        record("theta_{2,1} is conjugate to theta_{2,2} and theta_{2,-1}",
               d1.conjugate && d2.conjugate);
    } catch (const std::exception& ex) {
        record("normal-form table fixtures", false, ex.what());
    }

    return results;
}

} // namespace quadconj
