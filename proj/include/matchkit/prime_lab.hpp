#pragma once

// Quadratic-residue and power-of-two subsets of Z/p, the certificates that
// rule out acyclic matchings from such a subset to itself, and a scanner that
// gathers evidence about which Z/p have the acyclic matching property.

#include "matchkit/criteria.hpp"
#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/matching.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace matchkit {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// The (p-1)/2 nonzero squares mod p, sorted.
inline std::vector<Element> quadratic_residues(std::uint64_t p) {
    detail::require(p >= 3 && is_prime(p), "quadratic residues need an odd prime");
    std::set<Element> s;
    for (std::uint64_t n = 1; n < p; ++n) s.insert(static_cast<Element>(n * n % p));
    return {s.begin(), s.end()};
}

/// Least m >= 1 with a^m = 1 mod p.
inline std::uint64_t multiplicative_order(std::int64_t a, std::uint64_t p) {
    detail::require(is_prime(p), "modulus must be prime");
    const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                              static_cast<std::int64_t>(p));
    detail::require(r != 0, "a must be invertible mod p");
    std::uint64_t m = 1;
    for (std::uint64_t x = r; x != 1; x = x * r % p) ++m;
    return m;
}

/// Powers of 2 in (Z/p)*, sorted.
inline std::vector<Element> two_power_subset(std::uint64_t p) {
    detail::require(p >= 3 && is_prime(p), "power-of-two subset needs an odd prime");
    std::vector<Element> out;
    std::uint64_t x = 1;
    do {
        out.push_back(static_cast<Element>(x));
        x = x * 2 % p;
    } while (x != 1);
    std::sort(out.begin(), out.end());
    return out;
}

/// Whether 2a (computed additively) lands back in A for every a in A.
inline bool is_doubling_closed(const Group& g, std::span<const Element> a) {
    std::set<Element> in(a.begin(), a.end());
    return std::all_of(a.begin(), a.end(), [&](Element x) { return in.count(g.op(x, x)) > 0; });
}

enum class PrimeFamily { quadratic_residues, powers_of_two };

inline std::string to_string(PrimeFamily f) {
    return f == PrimeFamily::quadratic_residues ? "prop22" : "prop23";
}

struct CertificateFact {
    std::string statement;
    bool holds = false;
};

struct PrimeVerdict {
    std::uint64_t p = 0;
    PrimeFamily family = PrimeFamily::quadratic_residues;
    std::vector<Element> subset;
    std::vector<CertificateFact> certificate;
    bool certificate_verified = false;
    bool exhaustive = false;
    std::optional<std::size_t> matchings_total;
    std::optional<std::size_t> acyclic_total;
    std::optional<SearchStatus> acyclic_search;
};

struct ExhaustiveCount {
    std::size_t matchings = 0;
    std::size_t acyclic = 0;
    bool complete = true;
    std::vector<std::vector<std::size_t>> acyclic_sigmas;
};

/// Enumerates every matching of the pair and counts the acyclic ones,
/// stopping (incomplete) after `cap` matchings.
inline ExhaustiveCount count_acyclic_matchings(const SubsetPair& pair, std::size_t cap) {
    ExhaustiveCount out;
    std::set<MultiplicityFunction> rejected;
    out.complete = for_each_matching(pair, [&](const std::vector<std::size_t>& s) {
        if (out.matchings == cap) return false;
        ++out.matchings;
        Matching m(pair, s);
        auto mult = multiplicity(m);
        if (rejected.count(mult)) return true;
        if (is_acyclic(m)) {
            ++out.acyclic;
            out.acyclic_sigmas.push_back(s);
        } else {
            rejected.insert(std::move(mult));
        }
        return true;
    });
    return out;
}

inline constexpr std::uint64_t kDefaultExhaustivePrime = 23;
inline constexpr std::size_t kDefaultExhaustiveCap = 5'000'000;

namespace detail {

inline void run_exhaustive(PrimeVerdict& v, std::size_t cap) {
    const auto g = Group::cyclic(v.p);
    SubsetPair pair(g, v.subset, v.subset);
    auto c = count_acyclic_matchings(pair, cap);
    v.exhaustive = c.complete;
    v.matchings_total = c.matchings;
    v.acyclic_total = c.acyclic;
    if (c.acyclic > 0)
        v.acyclic_search = SearchStatus::found;
    else
        v.acyclic_search = c.complete ? SearchStatus::verified_absent : SearchStatus::inconclusive;
    if (c.complete && c.acyclic > 0)
        throw InvariantViolation("found an acyclic matching from the certified subset of Z/" + std::to_string(v.p) +
                                 " to itself");
}

} // namespace detail

/// p = 7 mod 8: A = QR(p) has odd size and contains 2, so A -> A has no acyclic matching.
inline PrimeVerdict check_prop_2_2(std::uint64_t p, std::uint64_t exhaustive_upto = kDefaultExhaustivePrime,
                                   std::size_t cap = kDefaultExhaustiveCap) {
    detail::require(is_prime(p), "p must be prime");
    detail::require(p % 8 == 7, "p must be congruent to 7 mod 8");
    PrimeVerdict v;
    v.p = p;
    v.family = PrimeFamily::quadratic_residues;
    v.subset = quadratic_residues(p);
    const auto g = Group::cyclic(p);
    const bool odd = v.subset.size() % 2 == 1;
    const bool two_is_square = std::binary_search(v.subset.begin(), v.subset.end(), Element{2 % p});
    v.certificate = {{"|A| = (p-1)/2 is odd", odd},
                     {"2 is a quadratic residue", two_is_square},
                     {"A is closed under doubling", is_doubling_closed(g, v.subset)}};
    v.certificate_verified = std::all_of(v.certificate.begin(), v.certificate.end(), [](auto& f) { return f.holds; });
    if (!v.certificate_verified) throw InvariantViolation("quadratic-residue certificate fails for p = " + std::to_string(p));
    if (p <= exhaustive_upto && v.subset.size() <= kMaxEnumerationSize) detail::run_exhaustive(v, cap);
    return v;
}

/// ord_p(2) odd: A = <2> has odd size and is doubling-closed, so A -> A has no acyclic matching.
inline PrimeVerdict check_prop_2_3(std::uint64_t p, std::size_t exhaustive_max_size = 12,
                                   std::size_t cap = kDefaultExhaustiveCap) {
    detail::require(p >= 3 && is_prime(p), "p must be an odd prime");
    const auto m = multiplicative_order(2, p);
    detail::require(m % 2 == 1, "the order of 2 mod p must be odd");
    PrimeVerdict v;
    v.p = p;
    v.family = PrimeFamily::powers_of_two;
    v.subset = two_power_subset(p);
    const auto g = Group::cyclic(p);
    v.certificate = {{"ord_p(2) is odd", m % 2 == 1},
                     {"|A| = ord_p(2)", v.subset.size() == m},
                     {"A is closed under doubling", is_doubling_closed(g, v.subset)}};
    v.certificate_verified = std::all_of(v.certificate.begin(), v.certificate.end(), [](auto& f) { return f.holds; });
    if (!v.certificate_verified) throw InvariantViolation("power-of-two certificate fails for p = " + std::to_string(p));
    if (v.subset.size() <= exhaustive_max_size) detail::run_exhaustive(v, cap);
    return v;
}

struct AuditResult {
    bool ok = true;
    std::size_t matchings = 0;
    std::size_t acyclic = 0;
    std::optional<std::vector<std::size_t>> counterexample; // acyclic matching without a fixed point
};

/// Every acyclic matching A -> A has a fixed point (|A| odd, abelian group).
inline AuditResult lemma_2_1_audit(const Group& g, std::span<const Element> a) {
    detail::require(g.is_abelian(), "audit needs an abelian group");
    detail::require(a.size() % 2 == 1, "|A| must be odd");
    detail::require(a.size() <= 12, "audit is capped at |A| <= 12");
    std::vector<Element> av(a.begin(), a.end());
    for (auto x : av) detail::require(x != g.identity(), "A must not contain the identity");
    SubsetPair pair(g, av, av);
    auto c = count_acyclic_matchings(pair, static_cast<std::size_t>(-1));
    AuditResult r;
    r.matchings = c.matchings;
    r.acyclic = c.acyclic;
    for (const auto& s : c.acyclic_sigmas) {
        bool fixed = false;
        for (std::size_t i = 0; i < s.size(); ++i) fixed = fixed || s[i] == i;
        if (!fixed) {
            r.ok = false;
            r.counterexample = s;
            break;
        }
    }
    return r;
}

enum class ScanVerdict { acyclic_found, verified_absent, inconclusive };

inline std::string to_string(ScanVerdict v) {
    switch (v) {
    case ScanVerdict::acyclic_found: return "acyclic_found";
    case ScanVerdict::verified_absent: return "verified_absent";
    case ScanVerdict::inconclusive: return "inconclusive";
    }
    return {};
}

struct ScanRecord {
    std::uint64_t seed = 0;
    std::uint64_t p = 0;
    std::size_t index = 0;
    std::vector<Element> a;
    std::vector<Element> b;
    ScanVerdict verdict = ScanVerdict::inconclusive;
    std::size_t matchings_examined = 0;
    std::optional<std::vector<std::size_t>> sigma;
    double elapsed_us = 0;
};

struct ScanReport {
    std::uint64_t p = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    std::size_t pairs = 0;
    std::size_t acyclic_found = 0;
    std::size_t verified_absent = 0;
    std::size_t inconclusive = 0;
    bool budget_exhausted = false;
    std::optional<ScanRecord> failure; // first pair with no acyclic matching
};

struct ScanOptions {
    std::uint64_t p = 0;
    std::size_t size_cap = 1;
    std::size_t budget = 10000; // total matchings examined across the scan
    std::uint64_t seed = 0;
    std::uint64_t exhaustive_upto = 7;
};

namespace detail {

inline void subsets_of_size(std::span<const Element> universe, std::size_t k,
                            const std::function<bool(const std::vector<Element>&)>& visit) {
    std::vector<Element> cur;
    bool go = true;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!go) return;
        if (cur.size() == k) {
            go = visit(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= universe.size() && go; ++i) {
            cur.push_back(universe[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace detail

/// Runs find_acyclic_matching over pairs (A, B) of Z/p with |A| = |B| <= size_cap and 0 not in B:
/// all pairs when p <= exhaustive_upto, otherwise uniformly sampled pairs from a seeded generator.
/// Each pair result is passed to `sink` (the persistent log) before the next pair starts.
inline ScanReport acyclic_property_scan(const ScanOptions& opt, const std::function<void(const ScanRecord&)>& sink) {
    detail::require(is_prime(opt.p), "p must be prime");
    detail::require(opt.size_cap >= 1 && opt.size_cap <= opt.p - 1, "size cap must be in [1, p-1]");
    detail::require(opt.budget >= 1, "budget must be positive");
    const auto g = Group::cyclic(opt.p);
    ScanReport rep;
    rep.p = opt.p;
    rep.seed = opt.seed;
    rep.exhaustive = opt.p <= opt.exhaustive_upto;
    std::size_t remaining = opt.budget;

    auto run_pair = [&](const std::vector<Element>& a, const std::vector<Element>& b) {
        const auto t0 = std::chrono::steady_clock::now();
        ScanRecord r;
        r.seed = opt.seed;
        r.p = opt.p;
        r.index = rep.pairs;
        r.a = a;
        r.b = b;
        SubsetPair pair(g, a, b);
        auto s = find_acyclic_matching(pair, std::max<std::size_t>(remaining, 1));
        r.matchings_examined = s.matchings_examined;
        r.sigma = s.sigma;
        remaining -= std::min(remaining, std::max<std::size_t>(s.matchings_examined, 1));
        switch (s.status) {
        case SearchStatus::found:
            r.verdict = ScanVerdict::acyclic_found;
            ++rep.acyclic_found;
            break;
        case SearchStatus::verified_absent:
            r.verdict = ScanVerdict::verified_absent;
            ++rep.verified_absent;
            if (!rep.failure) rep.failure = r;
            break;
        case SearchStatus::inconclusive:
            r.verdict = ScanVerdict::inconclusive;
            ++rep.inconclusive;
            rep.budget_exhausted = true;
            break;
        }
        r.elapsed_us =
            std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
        ++rep.pairs;
        sink(r);
        return remaining > 0 && r.verdict != ScanVerdict::inconclusive;
    };

    std::vector<Element> all(opt.p), nonzero(opt.p - 1);
    for (Element x = 0; x < opt.p; ++x) all[x] = x;
    for (Element x = 1; x < opt.p; ++x) nonzero[x - 1] = x;

    if (rep.exhaustive) {
        bool go = true;
        for (std::size_t k = 1; k <= opt.size_cap && go; ++k) {
            detail::subsets_of_size(all, k, [&](const std::vector<Element>& a) {
                detail::subsets_of_size(nonzero, k, [&](const std::vector<Element>& b) {
                    go = run_pair(a, b);
                    return go;
                });
                return go;
            });
        }
        if (!go && remaining == 0 && rep.inconclusive == 0) rep.budget_exhausted = true;
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::size_t> size_dist(1, opt.size_cap);
        while (remaining > 0) {
            const auto k = size_dist(rng);
            std::vector<Element> a = all, b = nonzero;
            std::shuffle(a.begin(), a.end(), rng);
            std::shuffle(b.begin(), b.end(), rng);
            a.resize(k);
            b.resize(k);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (!run_pair(a, b)) break;
        }
        rep.budget_exhausted = true;
    }
    return rep;
}

/// Primes up to `upto` in the given family, each with its certificate checked.
inline std::vector<PrimeVerdict> prime_family(PrimeFamily family, std::uint64_t upto,
                                              std::uint64_t exhaustive_upto = 0) {
    std::vector<PrimeVerdict> out;
    for (std::uint64_t p = 3; p <= upto; ++p) {
        if (!is_prime(p)) continue;
        if (family == PrimeFamily::quadratic_residues) {
            if (p % 8 == 7) out.push_back(check_prop_2_2(p, exhaustive_upto));
        } else if (multiplicative_order(2, p) % 2 == 1) {
            out.push_back(check_prop_2_3(p, exhaustive_upto == 0 ? 0 : 12));
        }
    }
    return out;
}

} // namespace matchkit
