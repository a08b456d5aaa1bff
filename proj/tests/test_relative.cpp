#include "matchkit/relative.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace matchkit;

TEST(Relative, FindExamples) {
    const auto z6 = Group::cyclic(6);
    const auto n = generated_subgroup(z6, {3});
    const auto m = find_relative_matching(TupleOfElements(z6, {1}), TupleOfElements(z6, {1}), n);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->sigma, (std::vector<std::size_t>{0}));
    EXPECT_FALSE(find_relative_matching(TupleOfElements(z6, {1, 2}), TupleOfElements(z6, {1, 1}), n));
    const auto s3 = Group::symmetric(3);
    const auto h = generated_subgroup(s3, {1});
    EXPECT_FALSE(h.is_normal());
    EXPECT_THROW(find_relative_matching(TupleOfElements(s3, {1}), TupleOfElements(s3, {1}), h), InvalidInput);
}

TEST(Relative, TrivialSubgroupMatchesPlainMatching) {
    const auto z7 = Group::cyclic(7);
    for (std::size_t ma = 1; ma < 128; ++ma)
        for (std::size_t mb = 2; mb < 128; mb += 2) {
            if (__builtin_popcountll(ma) != __builtin_popcountll(mb) || __builtin_popcountll(ma) > 3) continue;
            std::vector<Element> a, b;
            for (Element x = 0; x < 7; ++x) {
                if (ma >> x & 1) a.push_back(x);
                if (mb >> x & 1) b.push_back(x);
            }
            const bool plain = find_matching(SubsetPair(z7, a, b)).has_value();
            const bool rel = find_relative_matching(TupleOfElements(z7, a), TupleOfElements(z7, b),
                                                    Subgroup::trivial(z7))
                                 .has_value();
            ASSERT_EQ(plain, rel);
        }
}

TEST(Relative, PushForward) {
    const auto h = Homomorphism::reduction(6, 3);
    EXPECT_EQ(push_forward(h, TupleOfElements(h.source(), {1, 2, 4})).entries(), (std::vector<Element>{1, 2, 1}));
    const auto id = Homomorphism::identity(Group::cyclic(5));
    EXPECT_EQ(push_forward(id, TupleOfElements(id.source(), {1, 3})).entries(), (std::vector<Element>{1, 3}));
    const auto h2 = Homomorphism::reduction(4, 2);
    EXPECT_EQ(push_forward(h2, TupleOfElements(h2.source(), {1, 3})).entries(), (std::vector<Element>{1, 1}));
}

TEST(Relative, TransferExamples) {
    const auto h = Homomorphism::reduction(6, 3);
    const auto& g = h.source();
    EXPECT_TRUE(verify_hom_transfer(h, TupleOfElements(g, {1}), TupleOfElements(g, {1})));
    EXPECT_TRUE(find_relative_matching(TupleOfElements(g, {1}), TupleOfElements(g, {1}), h.kernel()));
    EXPECT_TRUE(verify_hom_transfer(h, TupleOfElements(g, {1, 2}), TupleOfElements(g, {1, 1})));
    EXPECT_FALSE(find_relative_matching(TupleOfElements(g, {1, 2}), TupleOfElements(g, {1, 1}), h.kernel()));
}

TEST(Relative, MonotoneInTheSubgroup) {
    const auto z12 = Group::cyclic(12);
    const auto big = generated_subgroup(z12, {4});
    const auto small = Subgroup::trivial(z12);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Element> pick(0, 11);
    std::size_t checked = 0;
    for (int t = 0; t < 2000; ++t) {
        std::vector<Element> a(3), b(3);
        for (auto& x : a) x = pick(rng);
        for (auto& x : b) x = pick(rng);
        const TupleOfElements ta(z12, a), tb(z12, b);
        if (auto m = find_relative_matching(ta, tb, big)) {
            EXPECT_TRUE(is_relative_matching(ta, tb, small, m->sigma));
            ++checked;
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(Relative, LiftSupportMatching) {
    const auto z9 = Group::cyclic(9);
    const TupleOfElements a(z9, {1, 1, 2}), b(z9, {3, 3, 5});
    const auto m = lift_support_matching(a, b, {{1, 3}, {2, 5}});
    ASSERT_TRUE(m);
    EXPECT_EQ(m->sigma, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_THROW(lift_support_matching(TupleOfElements(z9, {1, 1}), TupleOfElements(z9, {3, 5}), {{1, 3}}),
                 InvalidInput);
    const auto one = lift_support_matching(TupleOfElements(z9, {4}), TupleOfElements(z9, {2}), {{4, 2}});
    ASSERT_TRUE(one);
    EXPECT_EQ(one->sigma, (std::vector<std::size_t>{0}));
}
