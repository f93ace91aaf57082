#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace quadconj;
using testsupport::random_map_fp;
using testsupport::random_map_q;
using testsupport::random_moebius_fp;
using testsupport::random_moebius_q;
using testsupport::random_rational;

namespace {

const Rational kOne(1);

RatMap<Rational> qmap(const std::string& s) { return parse_map(s, kOne); }

// A stream of structured maps hitting all classifier branches.
RatMap<Rational> random_structured_map(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> which(0, 3);
    std::uniform_int_distribution<long long> small(-9, 9);
    while (true) {
        switch (which(rng)) {
            case 0:
                return random_map_q(rng, 9);
            case 1: {
                long long k = small(rng), b = small(rng);
                if (k == 0 || b == 0 || 2 * k + 1 == 0) continue;
                return c2_representative(Rational(k), Rational(b));
            }
            case 2: {
                long long d = small(rng), k = small(rng);
                if (d == 0 || k * k == d) continue;
                return s3_dk_representative(Rational(d), Rational(k));
            }
            default: {
                long long t = small(rng);
                if (t == 0) continue;
                return s3_t_representative(Rational(t));
            }
        }
    }
}

}  // namespace

TEST_CASE("trivial representatives") {
    CHECK(format_map(trivial_representative(ModuliPoint<Rational>{Rational(0),
                                                                  Rational(0)})) ==
          "(2*z^2 + 2*z + 2)/(-z^2 + 2*z + 2)");
    CHECK(format_map(trivial_representative(ModuliPoint<Rational>{Rational(2),
                                                                  Rational(4)})) ==
          "2*z^2/(-z^2 + 4*z - 4)");
    CHECK(format_map(trivial_representative(ModuliPoint<Rational>{Rational(5),
                                                                  Rational(7)})) ==
          "(2*z^2 - 3*z - 3)/(-z^2 + 7*z - 10)");
    // points on the symmetry locus have no such representative
    CHECK_THROWS_AS(trivial_representative(ModuliPoint<Rational>{Rational(-6),
                                                                 Rational(12)}),
                    user_error);
    CHECK_THROWS_AS(trivial_representative(
                        sigma_invariants(qmap("2z + 5/z"))),
                    user_error);
}

TEST_CASE("representative family is self consistent on random points") {
    std::mt19937_64 rng(31);
    int done = 0;
    while (done < 200) {
        ModuliPoint<Rational> s{random_rational(rng, 20), random_rational(rng, 20)};
        if (symmetry_locus_value(s).is_zero()) continue;
        RatMap<Rational> rep = trivial_representative(s);  // verifies internally
        CHECK(sigma_invariants(rep) == s);
        ++done;
    }
}

TEST_CASE("normalize_c2 worked examples") {
    auto r = normalize_c2(qmap("2z + 5/z"));
    auto f = std::get<C2Form<Rational>>(r.form);
    CHECK(f.k == Rational(2));
    CHECK(f.b == Rational(5));
    CHECK(r.witness == Moebius<Rational>::identity(kOne));

    r = normalize_c2(qmap("z^2"));
    f = std::get<C2Form<Rational>>(r.form);
    CHECK(f.k == Rational(1, 2));
    CHECK(f.b == Rational(2));
    CHECK(conjugate(qmap("z^2"), r.witness) ==
          c2_representative(Rational(1, 2), Rational(2)));

    r = normalize_c2(qmap("z + 1/z"));
    f = std::get<C2Form<Rational>>(r.form);
    CHECK(f.k == kOne);
    CHECK(f.b == kOne);
    CHECK(r.witness == Moebius<Rational>::identity(kOne));

    CHECK_THROWS_AS(normalize_c2(qmap("1/z^2")), user_error);
    CHECK_THROWS_AS(normalize_c2(qmap("z^2+1")), user_error);
}

TEST_CASE("normalize_c2 stays inside the legal parameter range") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 150; ++i) {
        std::uniform_int_distribution<long long> small(-7, 7);
        long long kv = small(rng), bv = small(rng);
        if (kv == 0 || bv == 0 || 2 * kv + 1 == 0) continue;
        auto phi = conjugate(c2_representative(Rational(kv), Rational(bv)),
                             random_moebius_q(rng, 6));
        auto r = normalize_c2(phi);
        auto f = std::get<C2Form<Rational>>(r.form);
        CHECK(!f.k.is_zero());
        CHECK(f.k != Rational(-1, 2));
        CHECK(f.k == Rational(kv));  // k is an invariant of the class
        CHECK(squarefree_part(f.b).cofactor.is_one());  // canonical b
        CHECK(conjugate(phi, r.witness) == c2_representative(f.k, f.b));
    }
}

TEST_CASE("c2 conjugacy criterion") {
    auto d = c2_conjugate(C2Form<Rational>{kOne, kOne},
                          C2Form<Rational>{kOne, Rational(4)});
    CHECK(d.conjugate);
    CHECK(d.kbar_conjugate);
    REQUIRE(d.witness.has_value());
    CHECK(std::get<SquareScaleCert<Rational>>(d.certificate).m == Rational(2));

    d = c2_conjugate(C2Form<Rational>{kOne, kOne},
                     C2Form<Rational>{kOne, Rational(2)});
    CHECK_FALSE(d.conjugate);
    CHECK(d.kbar_conjugate);

    d = c2_conjugate(C2Form<Rational>{kOne, kOne},
                     C2Form<Rational>{Rational(2), kOne});
    CHECK_FALSE(d.conjugate);
    CHECK_FALSE(d.kbar_conjugate);

    CHECK_THROWS_AS(c2_conjugate(C2Form<Rational>{Rational(0), kOne},
                                 C2Form<Rational>{kOne, kOne}),
                    user_error);
}

TEST_CASE("normalize_s3 worked examples") {
    auto r = normalize_s3(qmap("1/z^2"));
    CHECK(std::get<S3CycleForm<Rational>>(r.form).t == kOne);
    CHECK(r.witness == Moebius<Rational>::identity(kOne));

    r = normalize_s3(qmap("(z^2-4z+2)/(z^2-2z+2)"));
    auto g = std::get<S3GeneralForm<Rational>>(r.form);
    CHECK(g.d == Rational(2));
    CHECK(g.k == kOne);

    // conjugate of 1/z^2 by z -> z+1 has its cycle at -1 <-> infinity
    auto shifted = conjugate(qmap("1/z^2"), Moebius<Rational>::translation(kOne));
    r = normalize_s3(shifted);
    CHECK(std::get<S3CycleForm<Rational>>(r.form).t == kOne);
    CHECK(r.witness != Moebius<Rational>::identity(kOne));
    CHECK(conjugate(shifted, r.witness) == s3_t_representative(kOne));

    CHECK_THROWS_AS(normalize_s3(qmap("z^2")), user_error);
}

TEST_CASE("s3 cycle-parameter conjugacy") {
    auto d = s3_t_conjugate(Rational(2), Rational(16));
    CHECK(d.conjugate);
    CHECK(*d.witness == Moebius<Rational>::scaling(Rational(1, 2)));
    CHECK_FALSE(std::get<CubeScaleCert<Rational>>(d.certificate).through_inversion);

    d = s3_t_conjugate(Rational(2), Rational(4));
    CHECK(d.conjugate);
    CHECK(*d.witness == Moebius<Rational>(Rational(0), Rational(2), kOne, Rational(0)));
    CHECK(std::get<CubeScaleCert<Rational>>(d.certificate).through_inversion);

    CHECK_FALSE(s3_t_conjugate(Rational(2), Rational(3)).conjugate);
    CHECK(s3_t_conjugate(kOne, kOne).conjugate);
    // negative parameters: -1 and 1 differ by the cube (-1)^3
    CHECK(s3_t_conjugate(Rational(-1), kOne).conjugate);
}

TEST_CASE("s3 theta-form conjugacy over Q") {
    auto yes1 = s3_dk_conjugate(S3GeneralForm<Rational>{Rational(2), kOne},
                                S3GeneralForm<Rational>{Rational(2), Rational(2)});
    CHECK(yes1.conjugate);
    REQUIRE(yes1.witness.has_value());
    CHECK(conjugate(s3_dk_representative(Rational(2), kOne), *yes1.witness) ==
          s3_dk_representative(Rational(2), Rational(2)));

    auto yes2 = s3_dk_conjugate(S3GeneralForm<Rational>{Rational(2), kOne},
                                S3GeneralForm<Rational>{Rational(2), Rational(-1)});
    CHECK(yes2.conjugate);

    auto no = s3_dk_conjugate(S3GeneralForm<Rational>{Rational(2), kOne},
                              S3GeneralForm<Rational>{Rational(3), kOne});
    CHECK_FALSE(no.conjugate);
    CHECK(no.kbar_conjugate);

    // non-square-free and rational-cycle d are rejected
    CHECK_THROWS_AS(s3_dk_conjugate(S3GeneralForm<Rational>{Rational(8), kOne},
                                    S3GeneralForm<Rational>{Rational(2), kOne}),
                    user_error);
    CHECK_THROWS_AS(s3_dk_conjugate(S3GeneralForm<Rational>{kOne, Rational(2)},
                                    S3GeneralForm<Rational>{kOne, Rational(3)}),
                    user_error);
}

TEST_CASE("theta-form degeneracy locus: Res = 4 d (k^2 - d)^2") {
    // Degree <= 3 in d and <= 4 in k, so a 4 x 5 grid of agreements pins the
    // polynomial identity.
    for (long long dv = 1; dv <= 4; ++dv) {
        for (long long kv = -2; kv <= 2; ++kv) {
            Rational d(dv), k(kv);
            Poly<Rational> num({d * k, Rational(-2) * d, k});
            Poly<Rational> den({d, Rational(-2) * k, kOne});
            Rational expected = Rational(4) * d * (k * k - d) * (k * k - d);
            CHECK(resultant(num, den) == expected);
        }
    }
    std::mt19937_64 rng(33);
    for (int i = 0; i < 80; ++i) {
        Rational d = random_rational(rng, 30, false);
        Rational k = random_rational(rng, 30);
        Poly<Rational> num({d * k, Rational(-2) * d, k});
        Poly<Rational> den({d, Rational(-2) * k, kOne});
        CHECK(resultant(num, den).is_zero() == (d == k * k));
    }
}

TEST_CASE("classification dispatch") {
    auto c = classify(qmap("(2z^2+2z+2)/(-z^2+2z+2)"));
    CHECK(c.aut == AutClass::Trivial);
    CHECK(std::get<TrivialAutForm<Rational>>(c.form).sigma.s1.is_zero());
    CHECK_FALSE(c.witness.has_value());

    c = classify(qmap("2z + 5/z"));
    CHECK(c.aut == AutClass::C2);
    CHECK(std::get<C2Form<Rational>>(c.form).k == Rational(2));
    CHECK(std::get<C2Form<Rational>>(c.form).b == Rational(5));

    c = classify(qmap("1/z^2"));
    CHECK(c.aut == AutClass::S3);
    CHECK(std::get<S3CycleForm<Rational>>(c.form).t == kOne);
}

TEST_CASE("are_conjugate on the worked pairs") {
    auto d = are_conjugate(qmap("z^2"), qmap("z/2 + 2/z"));
    CHECK(d.conjugate);
    REQUIRE(d.witness.has_value());
    CHECK(conjugate(qmap("z^2"), *d.witness) == qmap("z/2 + 2/z"));

    d = are_conjugate(qmap("1/z^2"), qmap("2/z^2"));
    CHECK_FALSE(d.conjugate);
    CHECK(d.kbar_conjugate);

    // rational-cycle vs irrational-cycle S3 presentations are never conjugate
    d = are_conjugate(qmap("1/z^2"), qmap("(z^2-4z+2)/(z^2-2z+2)"));
    CHECK_FALSE(d.conjugate);
    CHECK(d.kbar_conjugate);

    CHECK_THROWS_AS(are_conjugate(qmap("z^2+1"), qmap("z")), user_error);
}

TEST_CASE("are_conjugate accepts conjugates with verified witnesses") {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 60; ++i) {
        auto phi = random_structured_map(rng);
        auto h = random_moebius_q(rng, 6);
        auto psi = conjugate(phi, h);
        auto d = are_conjugate(phi, psi, true);
        CHECK(d.conjugate);
        REQUIRE(d.witness.has_value());
        CHECK(conjugate(phi, *d.witness) == psi);  // phi^w = phi^h as maps
    }
}

TEST_CASE("normal forms are stable under conjugation") {
    std::mt19937_64 rng(35);
    for (int i = 0; i < 150; ++i) {
        auto phi = random_structured_map(rng);
        auto h = random_moebius_q(rng, 5);
        auto c1 = classify(phi);
        auto c2 = classify(conjugate(phi, h));
        CHECK(c1.aut == c2.aut);
        CHECK(c1.sigma == c2.sigma);
        if (std::holds_alternative<S3GeneralForm<Rational>>(c1.form)) {
            REQUIRE(std::holds_alternative<S3GeneralForm<Rational>>(c2.form));
            CHECK(s3_dk_conjugate(std::get<S3GeneralForm<Rational>>(c1.form),
                                  std::get<S3GeneralForm<Rational>>(c2.form))
                      .conjugate);
        } else {
            CHECK(c1.form == c2.form);
        }
        if (c1.witness)
            CHECK(conjugate(phi, *c1.witness) == representative_map(c1.form));
    }
}

TEST_CASE("classification is total on random maps") {
    std::mt19937_64 rng(36);
    for (int i = 0; i < 2000; ++i) {
        auto phi = random_map_q(rng, 25);
        auto c = classify(phi);  // must not throw
        if (c.witness)
            CHECK(conjugate(phi, *c.witness) == representative_map(c.form));
    }
}

TEST_CASE("trivial case witnesses") {
    auto rep = trivial_representative(ModuliPoint<Rational>{Rational(0), Rational(0)});
    CHECK(trivial_case_witness(rep, rep) == Moebius<Rational>::identity(kOne));

    auto phi = qmap("z^2+1");
    auto psi = qmap("2z^2/(-z^2+4z-4)");
    auto w = trivial_case_witness(phi, psi);
    CHECK(conjugate(phi, w) == psi);

    std::mt19937_64 rng(37);
    for (int i = 0; i < 80; ++i) {
        auto a = random_map_q(rng, 10);
        if (aut_class(a) != AutClass::Trivial) continue;
        auto h0 = random_moebius_q(rng, 7);
        auto b = conjugate(a, h0);
        auto h = trivial_case_witness(a, b);
        CHECK(conjugate(a, h) == b);
        // uniqueness: the witness is h0 up to scalar, i.e. equal in PGL_2
        CHECK(h == h0);
    }

    CHECK_THROWS_AS(trivial_case_witness(qmap("z^2+1"), qmap("z^2+2")), user_error);
    CHECK_THROWS_AS(trivial_case_witness(qmap("2z + 5/z"), qmap("2z + 5/z")),
                    user_error);
}

TEST_CASE("classification over F_p agrees with exhaustive search") {
    std::mt19937_64 rng(38);
    const std::uint64_t p = 7;
    for (int i = 0; i < 25; ++i) {
        auto phi = random_map_fp(rng, p);
        auto psi = random_map_fp(rng, p);
        auto d = are_conjugate(phi, psi, false);
        bool brute = detail::pgl2_witness_search(phi, psi).has_value();
        CHECK(d.conjugate == brute);
    }
    for (int i = 0; i < 25; ++i) {
        auto phi = random_map_fp(rng, p);
        auto h = random_moebius_fp(rng, p);
        auto d = are_conjugate(phi, conjugate(phi, h), true);
        CHECK(d.conjugate);
        REQUIRE(d.witness.has_value());
        CHECK(conjugate(phi, *d.witness) == conjugate(phi, h));
    }
}
