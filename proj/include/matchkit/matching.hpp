#pragma once

// Matchings between equal-size subsets A, B of a group: a bijection f with
// a*f(a) outside A for every a. Matchability is bipartite perfect matching on
// the compatibility graph; failures come with a Hall-violator certificate.

#include "matchkit/error.hpp"
#include "matchkit/group.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

inline constexpr std::size_t kMaxEnumerationSize = 20;

/// Per left vertex, the admissible right vertices in increasing order.
using Adjacency = std::vector<std::vector<std::size_t>>;

namespace detail {

struct BipartiteMatching {
    std::vector<std::size_t> left_to_right; // npos when unmatched
    std::vector<std::size_t> right_to_left;
    std::size_t size = 0;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Augmenting-path maximum matching. Left vertices are processed in index
/// order and neighbours tried in adjacency order, so the result is deterministic.
inline BipartiteMatching max_bipartite_matching(const Adjacency& adj, std::size_t right_count) {
    BipartiteMatching m;
    m.left_to_right.assign(adj.size(), BipartiteMatching::npos);
    m.right_to_left.assign(right_count, BipartiteMatching::npos);
    std::vector<char> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
        for (auto v : adj[u]) {
            if (visited[v]) continue;
            visited[v] = 1;
            if (m.right_to_left[v] == BipartiteMatching::npos || augment(m.right_to_left[v])) {
                m.left_to_right[u] = v;
                m.right_to_left[v] = u;
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < adj.size(); ++u) {
        visited.assign(right_count, 0);
        if (augment(u)) ++m.size;
    }
    return m;
}

} // namespace detail

/// Two equal-size subsets A, B with the identity outside B.
class SubsetPair {
public:
    SubsetPair(Group g, std::vector<Element> a, std::vector<Element> b)
        : group_(std::move(g)), a_(std::move(a)), b_(std::move(b)) {
        detail::require(!a_.empty(), "A must be nonempty");
        detail::require(a_.size() == b_.size(), "A and B must have the same size (" + std::to_string(a_.size()) +
                                                    " vs " + std::to_string(b_.size()) + ")");
        in_a_.assign(group_.index_count(), 0);
        std::vector<char> in_b(group_.index_count(), 0);
        for (auto x : a_) {
            detail::require(group_.contains(x), "A contains an element outside the group");
            detail::require(!in_a_[x], "A has a repeated element");
            in_a_[x] = 1;
        }
        for (auto y : b_) {
            detail::require(group_.contains(y), "B contains an element outside the group");
            detail::require(!in_b[y], "B has a repeated element");
            in_b[y] = 1;
        }
        detail::require(!in_b[group_.identity()], "B must not contain the identity");
    }

    const Group& group() const { return group_; }
    const std::vector<Element>& a() const { return a_; }
    const std::vector<Element>& b() const { return b_; }
    std::size_t size() const { return a_.size(); }
    bool in_a(Element x) const { return x < in_a_.size() && in_a_[x]; }
    Element product(std::size_t i, std::size_t j) const { return group_.op(a_[i], b_[j]); }

private:
    Group group_;
    std::vector<Element> a_;
    std::vector<Element> b_;
    std::vector<char> in_a_;
};

using MultiplicityFunction = std::map<Element, std::size_t>;

/// A bijection between A and B given as a permutation of indices: A[i] -> B[sigma[i]].
class Matching {
public:
    Matching(SubsetPair pair, std::vector<std::size_t> sigma) : pair_(std::move(pair)), sigma_(std::move(sigma)) {
        detail::require(sigma_.size() == pair_.size(), "matching permutation has the wrong length");
        std::vector<char> used(pair_.size(), 0);
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            detail::require(sigma_[i] < pair_.size() && !used[sigma_[i]], "matching is not a bijection");
            used[sigma_[i]] = 1;
            detail::require(!pair_.in_a(pair_.product(i, sigma_[i])), "a*f(a) lands in A");
        }
    }

    const SubsetPair& pair() const { return pair_; }
    const std::vector<std::size_t>& sigma() const { return sigma_; }
    Element image(std::size_t i) const { return pair_.b()[sigma_[i]]; }
    std::vector<Element> products() const {
        std::vector<Element> out;
        for (std::size_t i = 0; i < sigma_.size(); ++i) out.push_back(pair_.product(i, sigma_[i]));
        return out;
    }

    friend bool operator==(const Matching& x, const Matching& y) { return x.sigma_ == y.sigma_; }

private:
    SubsetPair pair_;
    std::vector<std::size_t> sigma_;
};

/// Edge (i, j) iff A[i] * B[j] is not in A.
inline Adjacency compatibility_graph(const SubsetPair& p) {
    Adjacency adj(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (!p.in_a(p.product(i, j))) adj[i].push_back(j);
    return adj;
}

inline std::optional<Matching> find_matching(const SubsetPair& p) {
    auto m = detail::max_bipartite_matching(compatibility_graph(p), p.size());
    if (m.size != p.size()) return std::nullopt;
    return Matching(p, m.left_to_right);
}

/// Certificate that no matching exists: |subset| > |neighborhood|.
struct HallViolator {
    std::vector<std::size_t> subset;       // A-indices
    std::vector<std::size_t> neighborhood; // B-indices adjacent to some member of subset
};

/// Hall violator for a graph without a perfect matching, taken from the
/// alternating-reachability set of an unmatched left vertex.
inline std::optional<HallViolator> hall_violator(const Adjacency& adj, std::size_t right_count) {
    auto m = detail::max_bipartite_matching(adj, right_count);
    if (m.size == adj.size()) return std::nullopt;
    std::size_t root = 0;
    while (m.left_to_right[root] != detail::BipartiteMatching::npos) ++root;
    std::vector<char> left_seen(adj.size(), 0), right_seen(right_count, 0);
    std::vector<std::size_t> stack{root};
    left_seen[root] = 1;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto v : adj[u]) {
            if (right_seen[v]) continue;
            right_seen[v] = 1;
            auto w = m.right_to_left[v];
            if (w == detail::BipartiteMatching::npos)
                throw InvariantViolation("augmenting path left after maximum matching");
            if (!left_seen[w]) {
                left_seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    HallViolator h;
    for (std::size_t i = 0; i < adj.size(); ++i)
        if (left_seen[i]) h.subset.push_back(i);
    for (std::size_t j = 0; j < right_count; ++j)
        if (right_seen[j]) h.neighborhood.push_back(j);
    return h;
}

/// Throws InvalidInput when a matching exists.
inline HallViolator hall_violator(const SubsetPair& p) {
    auto h = hall_violator(compatibility_graph(p), p.size());
    if (!h) throw InvalidInput("a matching exists; there is no Hall violator");
    return *h;
}

inline MultiplicityFunction multiplicity(const Matching& m) {
    MultiplicityFunction out;
    for (auto x : m.products()) ++out[x];
    return out;
}

struct MatchingList {
    std::vector<std::vector<std::size_t>> sigmas;
    bool truncated = false;
};

namespace detail {

inline void check_enumeration_size(const SubsetPair& p) {
    if (p.size() > kMaxEnumerationSize)
        throw LimitExceeded("matching enumeration is capped at |A| <= " + std::to_string(kMaxEnumerationSize));
}

} // namespace detail

/// Visits perfect matchings in lexicographic sigma order until `visit` returns false.
/// Returns false if the visit was stopped early.
inline bool for_each_matching(const SubsetPair& p, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    detail::check_enumeration_size(p);
    const auto adj = compatibility_graph(p);
    const std::size_t n = p.size();
    std::vector<std::size_t> sigma(n);
    std::vector<char> used(n, 0);
    bool keep_going = true;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            keep_going = visit(sigma);
            return;
        }
        for (auto j : adj[i]) {
            if (used[j]) continue;
            used[j] = 1;
            sigma[i] = j;
            rec(i + 1);
            used[j] = 0;
            if (!keep_going) return;
        }
    };
    rec(0);
    return keep_going;
}

inline MatchingList enumerate_matchings(const SubsetPair& p, std::size_t cap) {
    detail::require(cap >= 1, "enumeration cap must be positive");
    MatchingList out;
    for_each_matching(p, [&](const std::vector<std::size_t>& s) {
        if (out.sigmas.size() == cap) {
            out.truncated = true;
            return false;
        }
        out.sigmas.push_back(s);
        return true;
    });
    return out;
}

/// Number of matchings g (up to `stop_at`) whose multiplicity function equals `target`.
inline std::size_t count_matchings_with_multiplicity(const SubsetPair& p, const MultiplicityFunction& target,
                                                     std::size_t stop_at) {
    detail::check_enumeration_size(p);
    const std::size_t n = p.size();
    std::vector<Element> values;
    std::vector<std::size_t> remaining;
    for (const auto& [x, c] : target) {
        values.push_back(x);
        remaining.push_back(c);
    }
    // options[i]: admissible (j, value slot) pairs whose product lies in the target support.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> options(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Element prod = p.product(i, j);
            if (p.in_a(prod)) continue;
            auto it = std::lower_bound(values.begin(), values.end(), prod);
            if (it == values.end() || *it != prod) continue;
            options[i].emplace_back(j, static_cast<std::size_t>(it - values.begin()));
        }
    }
    std::vector<char> used(n, 0);
    std::size_t count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (count >= stop_at) return;
        if (i == n) {
            ++count;
            return;
        }
        for (auto [j, v] : options[i]) {
            if (used[j] || remaining[v] == 0) continue;
            used[j] = 1;
            --remaining[v];
            rec(i + 1);
            ++remaining[v];
            used[j] = 0;
            if (count >= stop_at) return;
        }
    };
    rec(0);
    return count;
}

/// True iff m is the only matching with its multiplicity function.
inline bool is_acyclic(const Matching& m) {
    return count_matchings_with_multiplicity(m.pair(), multiplicity(m), 2) == 1;
}

enum class SearchStatus { found, verified_absent, inconclusive };

inline std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::verified_absent: return "verified_absent";
    case SearchStatus::inconclusive: return "inconclusive";
    }
    return {};
}

struct AcyclicSearch {
    SearchStatus status = SearchStatus::inconclusive;
    std::optional<std::vector<std::size_t>> sigma;
    std::size_t matchings_examined = 0;
};

/// First acyclic matching in enumeration order. `cap` bounds the number of
/// matchings examined; hitting it before a verdict yields `inconclusive`.
inline AcyclicSearch find_acyclic_matching(const SubsetPair& p, std::size_t cap) {
    detail::require(cap >= 1, "search cap must be positive");
    AcyclicSearch out;
    std::set<MultiplicityFunction> rejected;
    const bool completed = for_each_matching(p, [&](const std::vector<std::size_t>& s) {
        if (out.matchings_examined == cap) return false;
        ++out.matchings_examined;
        Matching m(p, s);
        auto mult = multiplicity(m);
        if (rejected.count(mult)) return true;
        if (count_matchings_with_multiplicity(p, mult, 2) == 1) {
            out.status = SearchStatus::found;
            out.sigma = s;
            return false;
        }
        rejected.insert(std::move(mult));
        return true;
    });
    if (completed) out.status = SearchStatus::verified_absent;
    return out;
}

} // namespace matchkit
