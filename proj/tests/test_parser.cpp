#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace quadconj;
using testsupport::random_map_fp;
using testsupport::random_map_q;

TEST_CASE("parsing the classical shapes") {
    const Rational one(1);
    auto phi = parse_map("(2z^2+2z+2)/(-z^2+2z+2)", one);
    CHECK(phi.num() == Poly<Rational>({Rational(2), Rational(2), Rational(2)}));
    CHECK(phi.den() == Poly<Rational>({Rational(2), Rational(2), Rational(-1)}));

    auto inv2 = parse_map("1/z^2", one);
    CHECK(inv2.num() == Poly<Rational>::constant(one));
    CHECK(inv2.den() == Poly<Rational>({Rational(0), Rational(0), Rational(1)}));

    auto laurent = parse_map("2z + 5/z", one);
    CHECK(laurent.num() == Poly<Rational>({Rational(5), Rational(0), Rational(2)}));
    CHECK(laurent.den() == Poly<Rational>({Rational(0), Rational(1)}));

    // '*' optional, coefficients may be ratios, parens multiply
    CHECK(parse_map("(3/2)z^2 - z", one) == parse_map("3*z^2/2 - z", one));
    CHECK(parse_map("2(z+1)(z-1)", one) == parse_map("2z^2 - 2", one));
}

TEST_CASE("canonical formatting") {
    const Rational one(1);
    CHECK(format_map(trivial_representative(ModuliPoint<Rational>{Rational(0),
                                                                  Rational(0)})) ==
          "(2*z^2 + 2*z + 2)/(-z^2 + 2*z + 2)");
    CHECK(format_map(parse_map("1/z^2", one)) == "1/z^2");
    CHECK(format_map(s3_dk_representative(Rational(2), Rational(1))) ==
          "(z^2 - 4*z + 2)/(z^2 - 2*z + 2)");
    CHECK(format_map(parse_map("z^2+1", one)) == "z^2 + 1");
    CHECK(format_map(parse_map("(z^2+1)/2", one)) == "(z^2 + 1)/2");
    CHECK(format_map(parse_map("z", one)) == "z");
}

TEST_CASE("content normalization is canonical over Q and F_p") {
    const Rational one(1);
    CHECK(parse_map("(4z^2+4z+4)/(-2z^2+4z+4)", one) ==
          parse_map("(2z^2+2z+2)/(-z^2+2z+2)", one));
    CHECK(parse_map("(z^2+z+1)/((-1/2)z^2+z+1)", one) ==
          parse_map("(2z^2+2z+2)/(-z^2+2z+2)", one));
    const Fp one5(5, 1);
    CHECK(parse_map("(2z^2+2z+2)/(-z^2+2z+2)", one5) ==
          parse_map("(z^2+z+1)/(2z^2+z+1)", one5));
}

TEST_CASE("round trip parse(format(m)) = m on random maps") {
    std::mt19937_64 rng(99);
    const Rational one(1);
    for (int i = 0; i < 500; ++i) {
        RatMap<Rational> m = random_map_q(rng, 30);
        CHECK(parse_map(format_map(m), one) == m);
    }
    const Fp one11(11, 1);
    for (int i = 0; i < 200; ++i) {
        RatMap<Fp> m = random_map_fp(rng, 11);
        CHECK(parse_map(format_map(m), one11) == m);
    }
}

TEST_CASE("rejection with positioned errors") {
    const Rational one(1);
    auto pos_of = [&](const std::string& text) -> long {
        try {
            parse_map(text, one);
        } catch (const parse_error& e) {
            return static_cast<long>(e.pos);
        } catch (const user_error&) {
            return -2;  // structural error without a position
        }
        return -1;
    };
    CHECK(pos_of("(z^2+1") == 6);
    CHECK(pos_of("z^") == 2);
    CHECK(pos_of("w^2") == 0);     // only z is a variable
    CHECK(pos_of("2**z") == 2);
    CHECK(pos_of("1/0") == 2);     // division by zero
    CHECK(pos_of("1/(z-z)") == 2);
    CHECK(pos_of("z^99") == 1);    // exponent cap
    CHECK(pos_of("z^3+1") == -2);  // degree cap is a structural error
    CHECK(pos_of("z^2+1") == -1);

    CHECK_THROWS_AS(parse_map("z^3 + 1", one), user_error);
    CHECK_THROWS_AS(parse_map("", one), parse_error);
}

TEST_CASE("mutation fuzz never crashes and always positions its errors") {
    std::mt19937_64 rng(31337);
    const std::string seeds[] = {"(2z^2+2z+2)/(-z^2+2z+2)", "2z + 5/z", "1/z^2",
                                 "(3/2)z^2 - z/7 + (z+1)(z-1)"};
    const std::string alphabet = "z0123456789+-*/^() ";
    std::uniform_int_distribution<std::size_t> which(0, 3);
    std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
    const Rational one(1);
    for (int i = 0; i < 3000; ++i) {
        std::string s = seeds[which(rng)];
        for (int edits = 0; edits < 3; ++edits) {
            std::size_t at = rng() % s.size();
            switch (rng() % 3) {
                case 0: s[at] = alphabet[letter(rng)]; break;
                case 1: s.insert(at, 1, alphabet[letter(rng)]); break;
                default: s.erase(at, 1); break;
            }
            if (s.empty()) s = "z";
        }
        try {
            RatMap<Rational> m = parse_map(s, one);
            CHECK(parse_map(format_map(m), one) == m);
        } catch (const parse_error& e) {
            CHECK(e.pos <= s.size());
        } catch (const user_error&) {
            // structural rejection is fine
        }
    }
}

TEST_CASE("Moebius transformations parse from the same language") {
    const Rational one(1);
    auto h = parse_moebius("(z+1)/(z-1)", one);
    CHECK(h == Moebius<Rational>(Rational(1), Rational(1), Rational(1), Rational(-1)));
    CHECK(parse_moebius("2z", one) == Moebius<Rational>::scaling(Rational(2)));
    CHECK(parse_moebius("1/z", one) == Moebius<Rational>::inversion(one));
    CHECK_THROWS_AS(parse_moebius("z/z", one), user_error);   // constant
    CHECK_THROWS_AS(parse_moebius("z^2", one), user_error);   // degree 2
    CHECK(format_moebius(parse_moebius("(z + 2)/(z - 2)", one)) == "(z + 2)/(z - 2)");
}
