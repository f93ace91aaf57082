#pragma once

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadconj/census.hpp"
#include "quadconj/normalform.hpp"
#include "quadconj/parser.hpp"
#include "quadconj/selftest.hpp"

namespace quadconj::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Options {
    bool field_fp = false;
    std::uint64_t p = 0;
    bool want_witness = false;
    bool pretty = false;
};

namespace detail {

inline json field_json(const Options& o) {
    if (o.field_fp) return json{{"type", "Fp"}, {"p", o.p}};
    return json{{"type", "Q"}};
}

template <class F>
json sigma_json(const ModuliPoint<F>& s) {
    return json::array({s.s1.str(), s.s2.str()});
}

template <class F>
json witness_json(const Moebius<F>& w) {
    auto e = w.entries();
    return json{{"matrix", {e[0].str(), e[1].str(), e[2].str(), e[3].str()}},
                {"map", format_moebius(w)}};
}

template <class F>
json form_json(const NormalForm<F>& form) {
    return std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, TrivialAutForm<F>>) {
                return json{{"case", "trivial_aut"},
                            {"params",
                             {{"sigma1", f.sigma.s1.str()},
                              {"sigma2", f.sigma.s2.str()}}}};
            } else if constexpr (std::is_same_v<T, C2Form<F>>) {
                return json{{"case", "c2"},
                            {"params", {{"k", f.k.str()}, {"b", f.b.str()}}}};
            } else if constexpr (std::is_same_v<T, S3GeneralForm<F>>) {
                return json{{"case", "s3_general"},
                            {"params", {{"d", f.d.str()}, {"k", f.k.str()}}}};
            } else {
                return json{{"case", "s3_rational_cycle"},
                            {"params", {{"t", f.t.str()}}}};
            }
        },
        form);
}

template <class F>
json certificate_json(const Certificate<F>& cert) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, SquareScaleCert<F>>) {
                return json{{"type", "square_scale"}, {"m", c.m.str()}};
            } else if constexpr (std::is_same_v<T, S3OrbitCert<F>>) {
                return json{{"type", "s3_orbit"},
                            {"gamma", c.gamma.str()},
                            {"b", c.b.str()},
                            {"inverted", c.inverted}};
            } else {
                return json{{"type", "cube_scale"},
                            {"c", c.c.str()},
                            {"through_inversion", c.through_inversion}};
            }
        },
        cert);
}

template <class F>
json run_invariants(const std::string& text, const F& one) {
    RatMap<F> phi = parse_map(text, one);
    ModuliPoint<F> s = sigma_invariants(phi);
    return json{{"inputs", {format_map(phi)}},
                {"sigma", sigma_json(s)},
                {"aut_class", to_string(aut_class_of(s))},
                {"symmetry_locus", symmetry_locus_value(s).str()}};
}

template <class F>
json run_classify(const std::string& text, const F& one, bool witness,
                  bool with_rep_map) {
    RatMap<F> phi = parse_map(text, one);
    Classification<F> cls = classify(phi);
    json out{{"inputs", {format_map(phi)}},
             {"sigma", sigma_json(cls.sigma)},
             {"aut_class", to_string(cls.aut)}};
    json form = form_json(cls.form);
    if (with_rep_map) form["map"] = format_map(representative_map(cls.form));
    out["normal_form"] = form;
    std::optional<Moebius<F>> w = cls.witness;
    if (!w && witness && cls.aut == AutClass::Trivial) {
        w = trivial_case_witness(phi, representative_map(cls.form));
    }
    if (w && (witness || with_rep_map)) out["witness"] = witness_json(*w);
    return out;
}

template <class F>
json run_same_class(const std::string& t1, const std::string& t2, const F& one,
                    bool witness) {
    RatMap<F> phi = parse_map(t1, one);
    RatMap<F> psi = parse_map(t2, one);
    ConjDecision<F> dec = are_conjugate(phi, psi, witness);
    json out{{"inputs", {format_map(phi), format_map(psi)}},
             {"conjugate", dec.conjugate},
             {"kbar_conjugate", dec.kbar_conjugate},
             {"certificate", certificate_json(dec.certificate)}};
    if (witness && dec.witness) out["witness"] = witness_json(*dec.witness);
    return out;
}

inline json with_field_dispatch(const Options& o,
                                const std::function<json(const Rational&)>& fq,
                                const std::function<json(const Fp&)>& fp) {
    if (!o.field_fp) return fq(Rational(1));
    return fp(Fp::checked(o.p, 1));
}

inline std::string census_table(const std::vector<CensusReport>& reports) {
    std::ostringstream out;
    out << "p       maps    orbits  orbits_trivial  orbits_c2  orbits_s3  mismatches\n";
    for (const auto& r : reports) {
        out << r.p << "\t" << r.map_count << "\t" << r.orbit_count << "\t"
            << r.orbits_trivial << "\t\t" << r.orbits_c2 << "\t   "
            << r.orbits_s3 << "\t      " << r.mismatches.size() << "\n";
    }
    return out.str();
}

inline std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, have = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            have = true;
            continue;
        }
        if (!quoted && std::isspace(static_cast<unsigned char>(ch))) {
            if (have || !cur.empty()) out.push_back(cur);
            cur.clear();
            have = false;
            continue;
        }
        cur += ch;
    }
    if (have || !cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

namespace detail {

// One command per line; user errors are reported per line and do not stop
// the stream, internal errors do.
inline int run_batch(const Options& base, std::istream& in, std::ostream& out,
                     std::ostream& err) {
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> toks = tokenize_line(line);
        if (toks.empty()) continue;
        if (base.pretty) toks.push_back("--pretty");
        int rc = ::quadconj::cli::run(toks, out, err);
        if (rc == 2) return 2;
    }
    return 0;
}

}  // namespace detail

// Front end: returns the process exit code (0 ok, 1 user error, 2 internal).
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"quadconj: classify quadratic rational maps on P^1 up to "
                 "PGL_2(K)-conjugacy over Q or F_p"};
    app.require_subcommand(1);
    app.fallthrough(true);  // accept --field/--witness/... after the subcommand

    Options opt;
    std::string field_name = "q";
    app.add_option("--field", field_name, "base field: q or fp")
        ->check(CLI::IsMember({"q", "fp"}));
    app.add_option("--p", opt.p, "prime modulus for --field fp");
    app.add_flag("--witness", opt.want_witness,
                 "include conjugating witnesses in the output");
    app.add_flag("--pretty", opt.pretty, "indented JSON (census: text table)");
    bool json_flag = false;
    app.add_flag("--json", json_flag, "compact JSON output (default)");

    std::string map1, map2;
    auto* inv = app.add_subcommand("invariants",
                                   "multiplier invariants of a map");
    inv->add_option("map", map1, "rational map in z")->required();
    auto* cls = app.add_subcommand("classify",
                                   "automorphism class and normal form");
    cls->add_option("map", map1, "rational map in z")->required();
    auto* nrm = app.add_subcommand("normalize",
                                   "normal form with representative map");
    nrm->add_option("map", map1, "rational map in z")->required();
    auto* sam = app.add_subcommand("same-class",
                                   "decide conjugacy of two maps");
    sam->add_option("map1", map1, "first map")->required();
    sam->add_option("map2", map2, "second map")->required();

    std::uint64_t census_p = 0, census_max_p = 11;
    unsigned census_jobs = 1;
    auto* cen = app.add_subcommand("census",
                                   "brute-force orbit census over F_p");
    cen->add_option("--p", census_p, "run a single prime");
    cen->add_option("--max-p", census_max_p,
                    "run all primes 5 <= p <= max (default 11)");
    cen->add_option("--jobs", census_jobs, "worker threads");

    auto* st = app.add_subcommand("selftest", "run the embedded fixture suite");
    auto* bat = app.add_subcommand("batch",
                                   "read commands from stdin, one per line");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("quadconj");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy;
        int rc = app.exit(e, dummy, dummy);
        (rc == 0 ? out : err) << dummy.str();
        return rc == 0 ? 0 : 1;
    }

    opt.field_fp = field_name == "fp";
    if (opt.field_fp && opt.p == 0) {
        err << "error: --field fp requires --p <prime>\n";
        return 1;
    }

    json result{{"schema", kSchemaVersion}, {"field", detail::field_json(opt)},
                {"errors", json::array()}};
    auto emit = [&](json j) {
        j["schema"] = kSchemaVersion;
        out << (opt.pretty ? j.dump(2) : j.dump()) << "\n";
    };

    try {
        if (bat->parsed()) return detail::run_batch(opt, std::cin, out, err);

        if (st->parsed()) {
            auto fixtures = run_fixture_suite();
            bool all = true;
            json list = json::array();
            for (const auto& f : fixtures) {
                all = all && f.passed;
                list.push_back({{"name", f.name},
                                {"passed", f.passed},
                                {"detail", f.detail}});
                if (opt.pretty)
                    out << (f.passed ? "[PASS] " : "[FAIL] ") << f.name
                        << (f.detail.empty() ? "" : " (" + f.detail + ")") << "\n";
            }
            if (!opt.pretty) {
                result["command"] = "selftest";
                result["fixtures"] = list;
                result["passed"] = all;
                emit(result);
            }
            return all ? 0 : 2;
        }

        if (cen->parsed()) {
            std::vector<std::uint64_t> primes;
            if (census_p != 0) {
                primes.push_back(census_p);
            } else {
                for (std::uint64_t p = 5; p <= census_max_p; ++p)
                    if (is_prime_u64(p)) primes.push_back(p);
            }
            std::vector<CensusReport> reports;
            for (std::uint64_t p : primes) {
                Census census(p);
                reports.push_back(census.crosscheck(census_jobs));
            }
            if (opt.pretty) {
                out << detail::census_table(reports);
            } else {
                result["command"] = "census";
                json rows = json::array();
                for (const auto& r : reports) {
                    rows.push_back({{"p", r.p},
                                    {"maps", r.map_count},
                                    {"orbits", r.orbit_count},
                                    {"orbits_trivial", r.orbits_trivial},
                                    {"orbits_c2", r.orbits_c2},
                                    {"orbits_s3", r.orbits_s3},
                                    {"mismatches", r.mismatches}});
                }
                result["results"] = rows;
                emit(result);
            }
            for (const auto& r : reports) {
                if (!r.mismatches.empty()) return 2;
            }
            return 0;
        }

        json body;
        if (inv->parsed()) {
            result["command"] = "invariants";
            body = detail::with_field_dispatch(
                opt,
                [&](const Rational& one) { return detail::run_invariants(map1, one); },
                [&](const Fp& one) { return detail::run_invariants(map1, one); });
        } else if (cls->parsed()) {
            result["command"] = "classify";
            body = detail::with_field_dispatch(
                opt,
                [&](const Rational& one) {
                    return detail::run_classify(map1, one, opt.want_witness, false);
                },
                [&](const Fp& one) {
                    return detail::run_classify(map1, one, opt.want_witness, false);
                });
        } else if (nrm->parsed()) {
            result["command"] = "normalize";
            body = detail::with_field_dispatch(
                opt,
                [&](const Rational& one) {
                    return detail::run_classify(map1, one, opt.want_witness, true);
                },
                [&](const Fp& one) {
                    return detail::run_classify(map1, one, opt.want_witness, true);
                });
        } else if (sam->parsed()) {
            result["command"] = "same-class";
            body = detail::with_field_dispatch(
                opt,
                [&](const Rational& one) {
                    return detail::run_same_class(map1, map2, one, opt.want_witness);
                },
                [&](const Fp& one) {
                    return detail::run_same_class(map1, map2, one, opt.want_witness);
                });
        }
        result.update(body);
        emit(result);
        return 0;
    } catch (const parse_error& ex) {
        err << "parse error: " << ex.what() << "\n";
        result["errors"].push_back(
            {{"message", ex.what()}, {"position", ex.pos}});
        emit(result);
        return 1;
    } catch (const user_error& ex) {
        err << "error: " << ex.what() << "\n";
        result["errors"].push_back({{"message", ex.what()}});
        emit(result);
        return 1;
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << "\n";
        return 2;
    }
}

} // namespace quadconj::cli
