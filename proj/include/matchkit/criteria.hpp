#pragma once

// Sufficient conditions for matchability and the coset obstruction.

#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/matching.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace matchkit {

/// A coset xH (left) or Hx (right) of a nontrivial proper subgroup, contained in A.
struct CosetWitness {
    Subgroup subgroup;
    Element translate;
    Side side;
    std::vector<Element> coset;
};

struct CosetFreeResult {
    bool coset_free = true;
    std::optional<CosetWitness> witness;
};

namespace detail {

inline std::vector<char> membership(const Group& g, std::span<const Element> set) {
    std::vector<char> in(g.index_count(), 0);
    for (auto x : set) {
        require(g.contains(x), "set contains an element outside the group");
        in[x] = 1;
    }
    return in;
}

inline bool all_in(const std::vector<Element>& xs, const std::vector<char>& in) {
    return std::all_of(xs.begin(), xs.end(), [&](Element x) { return in[x] != 0; });
}

inline bool is_prime_order(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace detail

/// Whether A contains no left or right coset of a nontrivial proper finite subgroup.
/// The witness is the lowest such subgroup in enumeration order, then the first translate in A.
inline CosetFreeResult is_coset_free(const Group& g, std::span<const Element> a) {
    detail::require(!a.empty(), "A must be nonempty");
    const auto in = detail::membership(g, a);
    if (!g.is_finite()) return {}; // free abelian groups have no nontrivial finite subgroups

    std::vector<Element> translates(a.begin(), a.end());
    std::sort(translates.begin(), translates.end());
    for (const auto& h : enumerate_subgroups(g)) {
        if (h.is_trivial() || h.is_whole()) continue;
        // Every coset containment implies one by a prime-order subgroup, which sorts earlier.
        if (g.is_abelian() && !detail::is_prime_order(h.order())) continue;
        for (auto x : translates) {
            for (auto side : {Side::left, Side::right}) {
                if (side == Side::right && g.is_abelian()) continue;
                auto c = coset(g, x, h, side);
                if (detail::all_in(c, in)) return {false, CosetWitness{h, x, side, std::move(c)}};
            }
        }
    }
    return {};
}

/// The obstruction pair A = xH, B = (H \ {e}) u {outside}; it never has a matching.
inline SubsetPair counterexample_pair(const Group& g, const Subgroup& h, Element x, Element outside) {
    detail::require(!h.is_trivial() && !h.is_whole(), "H must be nontrivial and proper");
    detail::require(g.contains(x) && g.contains(outside), "x and outside must be group elements");
    detail::require(!h.contains(outside), "outside element must not lie in H");
    std::vector<Element> a, b;
    for (auto y : h.elements()) {
        a.push_back(g.op(x, y));
        if (y != g.identity()) b.push_back(y);
    }
    b.push_back(outside);
    return SubsetPair(g, std::move(a), std::move(b));
}

struct Prop14Witness {
    Element b;
    std::vector<Element> coset; // x + <b>, contained in A
};

struct Prop14Result {
    bool holds = true;
    std::optional<Prop14Witness> witness;
};

/// Holds iff for every b in B, A contains no coset of the cyclic subgroup <b>.
inline Prop14Result prop_1_4_condition(const Group& g, std::span<const Element> a, std::span<const Element> b) {
    detail::require(g.is_abelian(), "the cyclic-coset condition is defined for abelian groups");
    detail::require(g.is_finite(), "the cyclic-coset condition needs a finite group");
    detail::require(a.size() == b.size(), "A and B must have the same size");
    const auto in = detail::membership(g, a);
    for (auto y : b) {
        detail::require(g.contains(y), "B contains an element outside the group");
        const Element gens[] = {y};
        const auto h = generated_subgroup(g, gens);
        for (auto x : a) {
            auto c = coset(g, x, h, Side::left);
            if (detail::all_in(c, in)) return {false, Prop14Witness{y, std::move(c)}};
        }
    }
    return {};
}

} // namespace matchkit
