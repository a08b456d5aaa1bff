#include "matchkit/matching.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace matchkit;

namespace {

std::vector<long> as_long(const std::vector<Element>& v) { return {v.begin(), v.end()}; }

/// Every (A, B) in Z/n with |A| = |B| = k and 0 not in B.
template <class F>
void for_each_pair(std::size_t n, std::size_t k, F f) {
    for (std::size_t ma = 0; ma < (std::size_t{1} << n); ++ma) {
        if (static_cast<std::size_t>(__builtin_popcountll(ma)) != k) continue;
        for (std::size_t mb = 0; mb < (std::size_t{1} << n); mb += 2) {
            if (static_cast<std::size_t>(__builtin_popcountll(mb)) != k) continue;
            std::vector<Element> a, b;
            for (std::size_t x = 0; x < n; ++x) {
                if (ma >> x & 1) a.push_back(x);
                if (mb >> x & 1) b.push_back(x);
            }
            f(a, b);
        }
    }
}

} // namespace

TEST(Matching, CompatibilityGraph) {
    const auto z7 = Group::cyclic(7);
    const auto g = compatibility_graph(SubsetPair(z7, {1, 2, 4}, {1, 2, 4}));
    EXPECT_EQ(g, (Adjacency{{1, 2}, {0, 2}, {0, 1}}));
    const auto g6 = compatibility_graph(SubsetPair(Group::cyclic(6), {1, 4}, {3, 2}));
    EXPECT_EQ(g6, (Adjacency{{1}, {1}}));
}

TEST(Matching, FindMatchingExamples) {
    const auto m = find_matching(SubsetPair(Group::cyclic(5), {1, 2}, {1, 2}));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->sigma(), (std::vector<std::size_t>{1, 0}));
    EXPECT_FALSE(find_matching(SubsetPair(Group::cyclic(6), {1, 4}, {3, 2})));
    EXPECT_TRUE(find_matching(SubsetPair(Group::cyclic(7), {1, 2, 4}, {1, 2, 4})));
}

TEST(Matching, PairValidation) {
    const auto z6 = Group::cyclic(6);
    EXPECT_THROW(SubsetPair(z6, {1, 2}, {3}), InvalidInput);
    EXPECT_THROW(SubsetPair(z6, {1, 2}, {0, 3}), InvalidInput);
    EXPECT_THROW(SubsetPair(z6, {1, 1}, {2, 3}), InvalidInput);
    EXPECT_THROW(SubsetPair(z6, {}, {}), InvalidInput);
    EXPECT_THROW(Matching(SubsetPair(z6, {1, 4}, {3, 2}), {0, 1}), InvalidInput);
}

TEST(Matching, HallViolators) {
    const SubsetPair p(Group::cyclic(6), {1, 4}, {3, 2});
    const auto h = hall_violator(p);
    EXPECT_EQ(h.subset, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(h.neighborhood, (std::vector<std::size_t>{1}));
    const auto h4 = hall_violator(SubsetPair(Group::cyclic(4), {0, 2}, {2, 1}));
    EXPECT_EQ(h4.subset.size(), 2u);
    EXPECT_THROW(hall_violator(SubsetPair(Group::cyclic(5), {1, 2}, {1, 2})), InvalidInput);
    EXPECT_EQ(hall_violator(Adjacency{{}}, 1)->subset, (std::vector<std::size_t>{0}));
}

TEST(Matching, MultiplicityAndAcyclicityAtSeven) {
    const SubsetPair p(Group::cyclic(7), {1, 2, 4}, {1, 2, 4});
    const auto list = enumerate_matchings(p, 100);
    ASSERT_EQ(list.sigmas.size(), 2u);
    EXPECT_FALSE(list.truncated);
    const MultiplicityFunction expected{{3, 1}, {5, 1}, {6, 1}};
    for (const auto& s : list.sigmas) {
        const Matching m(p, s);
        EXPECT_EQ(multiplicity(m), expected);
        EXPECT_FALSE(is_acyclic(m));
    }
    EXPECT_EQ(multiplicity(Matching(p, {1, 2, 0})), expected);
    EXPECT_EQ(multiplicity(Matching(p, {2, 0, 1})), expected);
    const auto r = find_acyclic_matching(p, 1000);
    EXPECT_EQ(r.status, SearchStatus::verified_absent);
    EXPECT_FALSE(r.sigma);
}

TEST(Matching, SmallCases) {
    const SubsetPair one(Group::cyclic(5), {1}, {2});
    const auto l = enumerate_matchings(one, 10);
    ASSERT_EQ(l.sigmas.size(), 1u);
    EXPECT_TRUE(is_acyclic(Matching(one, l.sigmas[0])));
    EXPECT_EQ(multiplicity(Matching(one, l.sigmas[0])), (MultiplicityFunction{{3, 1}}));
    const auto r = find_acyclic_matching(one, 10);
    EXPECT_EQ(r.status, SearchStatus::found);

    const SubsetPair z5(Group::cyclic(5), {1, 2}, {1, 2});
    const Matching m(z5, {1, 0});
    EXPECT_EQ(multiplicity(m), (MultiplicityFunction{{3, 2}}));
    EXPECT_EQ(is_acyclic(m), oracle::cyclic_acyclic_count(5, {1, 2}, {1, 2}) == 1);
    EXPECT_EQ(enumerate_matchings(SubsetPair(Group::cyclic(6), {1, 4}, {3, 2}), 10).sigmas.size(), 0u);
}

TEST(Matching, TruncationAndCaps) {
    const SubsetPair p(Group::cyclic(11), {1, 2, 3}, {4, 5, 6});
    const auto l = enumerate_matchings(p, 3);
    EXPECT_EQ(l.sigmas.size(), 3u);
    EXPECT_TRUE(l.truncated);
    EXPECT_EQ(find_acyclic_matching(SubsetPair(Group::cyclic(7), {1, 2, 4}, {1, 2, 4}), 1).status,
              SearchStatus::inconclusive);
    std::vector<Element> big;
    for (Element x = 1; x <= 21; ++x) big.push_back(x);
    EXPECT_THROW(enumerate_matchings(SubsetPair(Group::cyclic(23), big, big), 1), LimitExceeded);
}

TEST(Matching, AgreesWithBruteForceOracle) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto g = Group::cyclic(n);
        for (std::size_t k = 1; k <= std::min<std::size_t>(4, n - 1); ++k) {
            for_each_pair(n, k, [&](const std::vector<Element>& a, const std::vector<Element>& b) {
                const SubsetPair p(g, a, b);
                const auto ref = oracle::cyclic_matchings(static_cast<long>(n), as_long(a), as_long(b));
                const auto list = enumerate_matchings(p, 100000);
                ASSERT_EQ(list.sigmas, ref);
                const auto m = find_matching(p);
                ASSERT_EQ(m.has_value(), !ref.empty());
                if (!m) {
                    const auto h = hall_violator(p);
                    const auto adj = compatibility_graph(p);
                    std::set<std::size_t> nb;
                    for (auto i : h.subset) nb.insert(adj[i].begin(), adj[i].end());
                    EXPECT_GT(h.subset.size(), nb.size());
                    EXPECT_EQ(std::vector<std::size_t>(nb.begin(), nb.end()), h.neighborhood);
                    return;
                }
                std::size_t acyclic = 0;
                for (const auto& s : list.sigmas) {
                    const Matching mm(p, s);
                    const auto mult = multiplicity(mm);
                    std::size_t total = 0;
                    for (const auto& [x, c] : mult) {
                        EXPECT_FALSE(p.in_a(x));
                        total += c;
                    }
                    EXPECT_EQ(total, k);
                    acyclic += is_acyclic(mm);
                }
                EXPECT_EQ(acyclic, oracle::cyclic_acyclic_count(static_cast<long>(n), as_long(a), as_long(b)));
                const auto r = find_acyclic_matching(p, 100000);
                EXPECT_EQ(r.status == SearchStatus::found, acyclic > 0);
            });
        }
    }
}

TEST(Matching, InverseMatchingHasSameMultiplicity) {
    const auto g = Group::cyclic(9);
    for_each_pair(9, 3, [&](const std::vector<Element>& a, const std::vector<Element>& b) {
        if (a != b || std::find(a.begin(), a.end(), 0) != a.end()) return;
        const SubsetPair p(g, a, a);
        for (const auto& s : enumerate_matchings(p, 1000).sigmas) {
            std::vector<std::size_t> inv(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) inv[s[i]] = i;
            const Matching m(p, s);
            const Matching mi(p, inv);
            EXPECT_EQ(multiplicity(m), multiplicity(mi));
        }
    });
}
