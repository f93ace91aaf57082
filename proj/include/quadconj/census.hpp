#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "quadconj/errors.hpp"
#include "quadconj/normalform.hpp"

// Brute-force oracle over small prime fields: enumerate every quadratic
// rational map, partition into PGL_2(F_p) orbits, and cross-check the
// algebraic conjugacy decisions against raw orbit membership.

namespace quadconj {

struct CensusReport {
    std::uint64_t p = 0;
    std::uint64_t map_count = 0;
    std::uint64_t orbit_count = 0;
    std::uint64_t orbits_trivial = 0;
    std::uint64_t orbits_c2 = 0;
    std::uint64_t orbits_s3 = 0;
    std::vector<std::string> mismatches;
};

class Census {
public:
    // Enumeration uses a dense p^6 index table; beyond 17 that stops being a
    // desk-scale amount of memory.
    static constexpr std::uint64_t kMaxPrime = 17;

    explicit Census(std::uint64_t p) : p_(p) {
        if (!is_prime_u64(p) || p <= 3)
            throw user_error("census needs a prime p > 3");
        if (p > kMaxPrime)
            throw user_error("census supports p <= " + std::to_string(kMaxPrime));
        enumerate();
    }

    std::uint64_t p() const { return p_; }
    std::uint64_t map_count() const { return codes_.size(); }

    // Every degree-2 map over F_p exactly once, in canonical representation.
    RatMap<Fp> map_at(std::size_t index) const { return decode(codes_[index]); }

    std::int64_t index_of(const RatMap<Fp>& m) const {
        std::int32_t idx = table_[encode(m)];
        check_internal(idx >= 0, "map missing from the census table");
        return idx;
    }

    // Union-find partition of the maps under conjugation by all of
    // PGL_2(F_p). Workers expand disjoint index ranges with the three group
    // generators; the merge and the orbit labels (least member index) do not
    // depend on the worker count.
    void partition(unsigned jobs = 1) {
        if (!orbit_of_.empty()) return;
        const std::size_t n = codes_.size();
        std::vector<std::uint32_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);

        std::vector<Moebius<Fp>> gens = generators();
        jobs = std::max(1u, jobs);
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges(jobs);
        auto worker = [&](unsigned w) {
            for (std::size_t i = w; i < n; i += jobs) {
                RatMap<Fp> m = map_at(i);
                for (const Moebius<Fp>& g : gens) {
                    std::int64_t j = index_of(conjugate(m, g));
                    edges[w].emplace_back(static_cast<std::uint32_t>(i),
                                          static_cast<std::uint32_t>(j));
                }
            }
        };
        if (jobs == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
            for (auto& t : pool) t.join();
        }

        auto find = [&](std::uint32_t i) {
            while (parent[i] != i) {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            return i;
        };
        for (const auto& batch : edges) {
            for (const auto& [a, b] : batch) {
                std::uint32_t ra = find(a), rb = find(b);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
        // Path-compress to the least index of each orbit: the canonical label.
        orbit_of_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            orbit_of_[i] = find(static_cast<std::uint32_t>(i));
        reps_.clear();
        sizes_.clear();
        std::vector<std::int32_t> orbit_id(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = orbit_of_[i];
            if (orbit_id[r] < 0) {
                orbit_id[r] = static_cast<std::int32_t>(reps_.size());
                reps_.push_back(r);  // r <= i, so reps are least members
                sizes_.push_back(0);
            }
            ++sizes_[static_cast<std::size_t>(orbit_id[r])];
        }
        for (std::size_t i = 0; i < n; ++i)
            orbit_of_[i] = static_cast<std::uint32_t>(orbit_id[orbit_of_[i]]);
    }

    std::uint64_t orbit_count() const { return reps_.size(); }
    std::uint32_t orbit_of(std::size_t index) const { return orbit_of_[index]; }
    std::uint64_t orbit_size(std::uint32_t orbit) const { return sizes_[orbit]; }
    RatMap<Fp> orbit_representative(std::uint32_t orbit) const {
        return map_at(reps_[orbit]);
    }

    // Orbit partition vs the classifier, plus structural sanity checks.
    CensusReport crosscheck(unsigned jobs = 1, std::size_t intra_samples = 3) {
        partition(jobs);
        CensusReport rep;
        rep.p = p_;
        rep.map_count = codes_.size();
        rep.orbit_count = reps_.size();

        std::uint64_t size_sum = 0;
        for (std::uint64_t s : sizes_) size_sum += s;
        if (size_sum != rep.map_count)
            rep.mismatches.push_back("orbit sizes do not sum to the map count");

        std::vector<ModuliPoint<Fp>> sigma;
        std::vector<AutClass> aut;
        sigma.reserve(reps_.size());
        for (std::uint32_t r : reps_) {
            RatMap<Fp> m = map_at(r);
            sigma.push_back(sigma_invariants(m));
            aut.push_back(aut_class_of(sigma.back()));
        }
        for (std::size_t o = 0; o < reps_.size(); ++o) {
            switch (aut[o]) {
                case AutClass::Trivial: ++rep.orbits_trivial; break;
                case AutClass::C2: ++rep.orbits_c2; break;
                case AutClass::S3: ++rep.orbits_s3; break;
            }
        }

        // Distinct orbits must be rejected by the classifier.
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            for (std::size_t j = i + 1; j < reps_.size(); ++j) {
                if (sigma[i] != sigma[j]) continue;  // classifier says no already
                ConjDecision<Fp> d = are_conjugate(map_at(reps_[i]),
                                                   map_at(reps_[j]), false);
                if (d.conjugate) {
                    rep.mismatches.push_back(
                        "distinct orbits " + std::to_string(i) + " and " +
                        std::to_string(j) + " declared conjugate");
                }
            }
        }

        // Sampled members of each orbit must be accepted, and carry the
        // orbit representative's invariants.
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ p_);
        std::vector<std::vector<std::uint32_t>> members(reps_.size());
        for (std::uint32_t i = 0; i < codes_.size(); ++i)
            members[orbit_of_[i]].push_back(i);
        for (std::size_t o = 0; o < reps_.size(); ++o) {
            const auto& ms = members[o];
            for (std::size_t k = 0; k < std::min(intra_samples, ms.size()); ++k) {
                std::uint32_t pick =
                    ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
                RatMap<Fp> m = map_at(pick);
                if (sigma_invariants(m) != sigma[o]) {
                    rep.mismatches.push_back("orbit " + std::to_string(o) +
                                             " member with differing invariants");
                    continue;
                }
                ConjDecision<Fp> d =
                    are_conjugate(map_at(reps_[o]), m, /*want_witness=*/k == 0);
                if (!d.conjugate) {
                    rep.mismatches.push_back("orbit " + std::to_string(o) +
                                             " member rejected by the classifier");
                } else if (d.witness &&
                           conjugate(map_at(reps_[o]), *d.witness) != m) {
                    rep.mismatches.push_back("orbit " + std::to_string(o) +
                                             " witness failed verification");
                }
            }
        }
        return rep;
    }

private:
    void enumerate() {
        const std::uint64_t volume = ipow(p_, 6);
        table_.assign(volume, -1);
        // Canonical 6-tuples (n2, n1, n0, d2, d1, d0): first nonzero entry 1.
        std::vector<std::uint64_t> v(6, 0);
        for (std::size_t lead = 0; lead < 6; ++lead) {
            std::fill(v.begin(), v.end(), 0);
            v[lead] = 1;
            const std::size_t free_from = lead + 1;
            bool more = true;
            while (more) {
                consider(v);
                more = false;
                for (std::size_t pos = 6; pos-- > free_from;) {
                    if (++v[pos] < p_) {
                        more = true;
                        break;
                    }
                    v[pos] = 0;
                }
            }
        }
    }

    void consider(const std::vector<std::uint64_t>& v) {
        // Degree exactly 2 needs a leading coefficient somewhere.
        if (v[0] == 0 && v[3] == 0) return;
        auto fp = [&](std::uint64_t x) { return Fp(p_, static_cast<std::int64_t>(x)); };
        Poly<Fp> num = Poly<Fp>::of({fp(v[2]), fp(v[1]), fp(v[0])});
        Poly<Fp> den = Poly<Fp>::of({fp(v[5]), fp(v[4]), fp(v[3])});
        if (num.is_zero() || den.is_zero()) return;
        if (gcd_monic(num, den).degree() != 0) return;
        std::uint64_t code = 0;
        for (std::uint64_t x : v) code = code * p_ + x;
        table_[code] = static_cast<std::int32_t>(codes_.size());
        codes_.push_back(code);
    }

    std::uint64_t encode(const RatMap<Fp>& m) const {
        auto nf = m.num_form();
        auto df = m.den_form();
        std::uint64_t code = 0;
        for (const Fp& c : {nf[0], nf[1], nf[2], df[0], df[1], df[2]})
            code = code * p_ + c.value();
        return code;
    }

    RatMap<Fp> decode(std::uint64_t code) const {
        std::array<std::uint64_t, 6> v{};
        for (std::size_t i = 6; i-- > 0;) {
            v[i] = code % p_;
            code /= p_;
        }
        auto fp = [&](std::uint64_t x) { return Fp(p_, static_cast<std::int64_t>(x)); };
        return RatMap<Fp>(Poly<Fp>::of({fp(v[2]), fp(v[1]), fp(v[0])}),
                          Poly<Fp>::of({fp(v[5]), fp(v[4]), fp(v[3])}));
    }

    std::vector<Moebius<Fp>> generators() const {
        // z+1 and 1/z generate PSL_2; a scaling by a primitive root supplies
        // the nonsquare determinant coset.
        const Fp one(p_, 1);
        Fp g = one;
        for (std::uint64_t c = 2; c < p_ && g.is_one(); ++c) {
            Fp cand(p_, static_cast<std::int64_t>(c));
            std::uint64_t order = 1;
            Fp acc = cand;
            while (!acc.is_one()) {
                acc *= cand;
                ++order;
            }
            if (order == p_ - 1) g = cand;
        }
        check_internal(!g.is_one(), "no primitive root found");
        return {Moebius<Fp>::translation(one), Moebius<Fp>::inversion(one),
                Moebius<Fp>::scaling(g)};
    }

    static std::uint64_t ipow(std::uint64_t b, int e) {
        std::uint64_t r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

    std::uint64_t p_;
    std::vector<std::int32_t> table_;
    std::vector<std::uint64_t> codes_;
    std::vector<std::uint32_t> orbit_of_;
    std::vector<std::uint32_t> reps_;
    std::vector<std::uint64_t> sizes_;
};

} // namespace quadconj
