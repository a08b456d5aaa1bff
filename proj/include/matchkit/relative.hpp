#pragma once

// Matchings between n-tuples (repetition allowed) relative to a normal
// subgroup N: a permutation sigma with a_i * b_sigma(i) outside a_j N for all i, j.

#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/matching.hpp"

#include <map>
#include <optional>
#include <vector>

namespace matchkit {

class TupleOfElements {
public:
    TupleOfElements(Group g, std::vector<Element> entries) : group_(std::move(g)), entries_(std::move(entries)) {
        detail::require(!entries_.empty(), "tuple must have at least one entry");
        for (auto x : entries_) detail::require(group_.contains(x), "tuple entry is not a group element");
    }

    const Group& group() const { return group_; }
    const std::vector<Element>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Distinct entries, sorted.
    std::vector<Element> support() const {
        std::vector<Element> s;
        for (const auto& [x, c] : multiplicities()) s.push_back(x);
        return s;
    }

    std::map<Element, std::size_t> multiplicities() const {
        std::map<Element, std::size_t> m;
        for (auto x : entries_) ++m[x];
        return m;
    }

private:
    Group group_;
    std::vector<Element> entries_;
};

struct RelativeMatching {
    std::vector<std::size_t> sigma;
};

/// The literal condition: for all i, j, a_i b_sigma(i) is not in a_j N.
inline bool is_relative_matching(const TupleOfElements& a, const TupleOfElements& b, const Subgroup& n,
                                 const std::vector<std::size_t>& sigma) {
    const auto& g = a.group();
    if (sigma.size() != a.size()) return false;
    std::vector<char> used(a.size(), 0);
    for (auto s : sigma) {
        if (s >= a.size() || used[s]) return false;
        used[s] = 1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Element prod = g.op(a.entries()[i], b.entries()[sigma[i]]);
        for (auto aj : a.entries())
            if (n.contains(g.op(g.inverse(aj), prod))) return false;
    }
    return true;
}

inline std::optional<RelativeMatching> find_relative_matching(const TupleOfElements& a, const TupleOfElements& b,
                                                              const Subgroup& n) {
    const auto& g = a.group();
    detail::require(b.group() == g && n.group() == g, "tuples and subgroup must live in the same group");
    detail::require(a.size() == b.size(), "tuples must have the same length");
    detail::require(n.is_normal(), "relative matchings need a normal subgroup");
    // Union of the cosets a_j N, computed once.
    std::vector<char> forbidden(g.index_count(), 0);
    for (auto aj : a.entries())
        for (auto x : n.elements()) forbidden[g.op(aj, x)] = 1;
    Adjacency adj(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (!forbidden[g.op(a.entries()[i], b.entries()[k])]) adj[i].push_back(k);
    auto m = detail::max_bipartite_matching(adj, b.size());
    if (m.size != a.size()) return std::nullopt;
    return RelativeMatching{m.left_to_right};
}

inline TupleOfElements push_forward(const Homomorphism& h, const TupleOfElements& a) {
    detail::require(a.group() == h.source(), "tuple does not live in the homomorphism source");
    std::vector<Element> out;
    out.reserve(a.size());
    for (auto x : a.entries()) out.push_back(h.apply(x));
    return TupleOfElements(h.target(), std::move(out));
}

/// Matchability of the images (plain) agrees with matchability relative to the kernel.
inline bool verify_hom_transfer(const Homomorphism& h, const TupleOfElements& a, const TupleOfElements& b) {
    detail::require(a.size() == b.size(), "tuples must have the same length");
    const bool relative = find_relative_matching(a, b, h.kernel()).has_value();
    const bool image =
        find_relative_matching(push_forward(h, a), push_forward(h, b), Subgroup::trivial(h.target())).has_value();
    return relative == image;
}

/// Lifts a matching f: Supp(a) -> Supp(b) to the tuples, sending the k-th
/// occurrence of s to the k-th occurrence of f(s) in index order.
/// The lift is validated as a_i b_sigma(i) not in Supp(a).
inline std::optional<RelativeMatching> lift_support_matching(const TupleOfElements& a, const TupleOfElements& b,
                                                             const std::map<Element, Element>& f) {
    const auto& g = a.group();
    detail::require(b.group() == g, "tuples must live in the same group");
    detail::require(a.size() == b.size(), "tuples must have the same length");
    const auto ma = a.multiplicities();
    const auto mb = b.multiplicities();
    detail::require(f.size() == ma.size(), "f must be defined on every support element of a");
    std::map<Element, std::size_t> hit;
    for (const auto& [s, c] : ma) {
        auto it = f.find(s);
        detail::require(it != f.end(), "f is not defined on the whole support of a");
        auto jt = mb.find(it->second);
        detail::require(jt != mb.end(), "f maps outside the support of b");
        detail::require(++hit[it->second] == 1, "f is not injective");
        if (jt->second != c)
            throw InvalidInput("multiplicity mismatch: " + std::to_string(s) + " occurs " + std::to_string(c) +
                               " times but its image occurs " + std::to_string(jt->second) + " times");
        detail::require(ma.count(g.op(s, it->second)) == 0, "f is not a matching on the supports");
    }
    std::map<Element, std::vector<std::size_t>> positions;
    for (std::size_t k = 0; k < b.size(); ++k) positions[b.entries()[k]].push_back(k);
    std::map<Element, std::size_t> next;
    RelativeMatching out;
    for (auto x : a.entries()) {
        const Element y = f.at(x);
        out.sigma.push_back(positions[y][next[y]++]);
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (ma.count(g.op(a.entries()[i], b.entries()[out.sigma[i]]))) return std::nullopt;
    return out;
}

} // namespace matchkit
