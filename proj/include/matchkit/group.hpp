#pragma once

// Finite groups (cyclic, products of cyclics, operation tables) and bounded
// windows of free abelian groups. Every element is a canonical integer index,
// so subsets can be handled as index lists or membership masks regardless of
// the group kind.

#include "matchkit/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

using Element = std::size_t;

enum class GroupKind { cyclic, product, table, free_abelian };

enum class Side { left, right };

inline constexpr std::size_t kMaxSubgroupEnumerationOrder = 512;
inline constexpr std::size_t kExhaustiveAssociativityOrder = 64;

class Group {
public:
    static Group cyclic(std::size_t n) {
        detail::require(n >= 1, "cyclic group order must be positive");
        return product_impl(GroupKind::cyclic, {n});
    }

    static Group product(std::vector<std::size_t> factors) {
        detail::require(!factors.empty(), "product group needs at least one factor");
        for (auto f : factors) detail::require(f >= 1, "product factors must be positive");
        return product_impl(GroupKind::product, std::move(factors));
    }

    /// `table[i][j]` is the index of element i * element j.
    static Group table(std::vector<std::string> names, const std::vector<std::vector<Element>>& table) {
        const std::size_t n = table.size();
        detail::require(n >= 1, "operation table must be nonempty");
        if (names.empty()) {
            for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
        }
        detail::require(names.size() == n, "element name count does not match table size");
        auto d = std::make_shared<Data>();
        d->kind = GroupKind::table;
        d->size = n;
        d->names = std::move(names);
        d->table.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            detail::require(table[i].size() == n, "operation table must be square");
            for (std::size_t j = 0; j < n; ++j) {
                detail::require(table[i][j] < n, "operation table entry out of range");
                d->table[i * n + j] = table[i][j];
            }
        }
        validate_table(*d);
        return Group(std::move(d));
    }

    /// Z^rank restricted to coordinates in [-window, window].
    static Group free_abelian(std::size_t rank, long window) {
        detail::require(rank >= 1, "free abelian rank must be positive");
        detail::require(window >= 0, "free abelian window must be nonnegative");
        auto d = std::make_shared<Data>();
        d->kind = GroupKind::free_abelian;
        d->window = window;
        d->factors.assign(rank, static_cast<std::size_t>(2 * window + 1));
        d->size = 1;
        for (auto f : d->factors) {
            detail::require(d->size <= (std::size_t{1} << 24) / f, "free abelian window too large to index");
            d->size *= f;
        }
        return Group(std::move(d));
    }

    /// Symmetric group on {0..n-1} as an operation table; (p*q)(k) = p(q(k)).
    static Group symmetric(int n) {
        detail::require(n >= 1 && n <= 5, "symmetric group degree must be in [1, 5]");
        std::vector<std::vector<int>> perms;
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::string> names;
        for (const auto& q : perms) {
            std::string s = "[";
            for (std::size_t k = 0; k < q.size(); ++k) s += (k ? " " : "") + std::to_string(q[k]);
            names.push_back(s + "]");
        }
        std::vector<std::vector<Element>> tab(perms.size(), std::vector<Element>(perms.size()));
        for (std::size_t i = 0; i < perms.size(); ++i) {
            for (std::size_t j = 0; j < perms.size(); ++j) {
                std::vector<int> r(static_cast<std::size_t>(n));
                for (int k = 0; k < n; ++k) r[k] = perms[i][perms[j][k]];
                tab[i][j] = static_cast<Element>(std::lower_bound(perms.begin(), perms.end(), r) - perms.begin());
            }
        }
        return table(std::move(names), tab);
    }

    GroupKind kind() const { return d_->kind; }
    bool is_finite() const { return d_->kind != GroupKind::free_abelian; }
    bool is_abelian() const { return d_->kind != GroupKind::table || d_->abelian; }

    /// Number of encodable elements: the group order, or the window size for free-abelian kinds.
    std::size_t index_count() const { return d_->size; }

    std::size_t order() const {
        if (!is_finite()) throw InvalidInput("free abelian group has infinite order");
        return d_->size;
    }

    const std::vector<std::size_t>& factors() const { return d_->factors; }
    long window() const { return d_->window; }
    std::size_t rank() const { return d_->factors.size(); }

    bool contains(Element x) const { return x < d_->size; }

    Element identity() const {
        switch (d_->kind) {
        case GroupKind::table: return d_->identity;
        case GroupKind::free_abelian: {
            std::vector<long> zero(rank(), 0);
            return from_coordinates(zero);
        }
        default: return 0;
        }
    }

    Element op(Element x, Element y) const {
        check(x);
        check(y);
        switch (d_->kind) {
        case GroupKind::cyclic: return (x + y) % d_->size;
        case GroupKind::table: return d_->table[x * d_->size + y];
        case GroupKind::product: {
            Element r = 0, place = 1;
            for (std::size_t k = d_->factors.size(); k-- > 0;) {
                const auto f = d_->factors[k];
                r += ((x % f + y % f) % f) * place;
                x /= f;
                y /= f;
                place *= f;
            }
            return r;
        }
        case GroupKind::free_abelian: {
            auto cx = coordinates(x);
            auto cy = coordinates(y);
            for (std::size_t k = 0; k < cx.size(); ++k) {
                cx[k] += cy[k];
                if (cx[k] < -d_->window || cx[k] > d_->window)
                    throw WindowOverflow("free abelian product leaves the window [-" + std::to_string(d_->window) +
                                         ", " + std::to_string(d_->window) + "]");
            }
            return from_coordinates(cx);
        }
        }
        return 0;
    }

    Element inverse(Element x) const {
        check(x);
        switch (d_->kind) {
        case GroupKind::table: return d_->inverse[x];
        case GroupKind::cyclic: return (d_->size - x) % d_->size;
        default: {
            auto c = coordinates(x);
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (d_->kind == GroupKind::product) {
                    const auto f = static_cast<long>(d_->factors[k]);
                    c[k] = (f - c[k]) % f;
                } else {
                    c[k] = -c[k];
                }
            }
            return from_coordinates(c);
        }
        }
    }

    /// Coordinates per factor (cyclic: one coordinate; table: the index itself).
    std::vector<long> coordinates(Element x) const {
        check(x);
        if (d_->kind == GroupKind::table) return {static_cast<long>(x)};
        std::vector<long> c(d_->factors.size());
        for (std::size_t k = d_->factors.size(); k-- > 0;) {
            c[k] = static_cast<long>(x % d_->factors[k]);
            x /= d_->factors[k];
        }
        if (d_->kind == GroupKind::free_abelian)
            for (auto& v : c) v -= d_->window;
        return c;
    }

    Element from_coordinates(std::span<const long> c) const {
        if (d_->kind == GroupKind::table) {
            detail::require(c.size() == 1 && c[0] >= 0 && static_cast<std::size_t>(c[0]) < d_->size,
                            "invalid table element");
            return static_cast<Element>(c[0]);
        }
        detail::require(c.size() == d_->factors.size(), "coordinate count does not match group rank");
        Element r = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            long v = c[k];
            if (d_->kind == GroupKind::free_abelian) {
                if (v < -d_->window || v > d_->window) throw WindowOverflow("coordinate outside free abelian window");
                v += d_->window;
            } else {
                detail::require(v >= 0 && static_cast<std::size_t>(v) < d_->factors[k], "coordinate out of range");
            }
            r = r * d_->factors[k] + static_cast<Element>(v);
        }
        return r;
    }

    const std::string& name(Element x) const {
        check(x);
        detail::require(d_->kind == GroupKind::table, "only table groups carry element names");
        return d_->names[x];
    }

    const std::vector<std::string>& names() const { return d_->names; }

    std::string describe() const {
        switch (d_->kind) {
        case GroupKind::cyclic: return "Z/" + std::to_string(d_->size);
        case GroupKind::product: {
            std::string s;
            for (auto f : d_->factors) s += (s.empty() ? "" : "x") + ("Z/" + std::to_string(f));
            return s;
        }
        case GroupKind::table: return "table group of order " + std::to_string(d_->size);
        case GroupKind::free_abelian:
            return "Z^" + std::to_string(rank()) + " window " + std::to_string(d_->window);
        }
        return {};
    }

    /// Order of x, or 0 if x has infinite order (free-abelian non-identity).
    std::size_t element_order(Element x) const {
        if (!is_finite()) return x == identity() ? 1 : 0;
        std::size_t k = 1;
        for (Element y = x; y != identity(); y = op(y, x)) ++k;
        return k;
    }

    friend bool operator==(const Group& a, const Group& b) {
        if (a.d_ == b.d_) return true;
        return a.d_->kind == b.d_->kind && a.d_->size == b.d_->size && a.d_->factors == b.d_->factors &&
               a.d_->window == b.d_->window && a.d_->table == b.d_->table;
    }

private:
    struct Data {
        GroupKind kind = GroupKind::cyclic;
        std::size_t size = 1;
        std::vector<std::size_t> factors;
        long window = 0;
        std::vector<Element> table;
        std::vector<Element> inverse;
        std::vector<std::string> names;
        Element identity = 0;
        bool abelian = true;
    };

    explicit Group(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    static Group product_impl(GroupKind kind, std::vector<std::size_t> factors) {
        auto d = std::make_shared<Data>();
        d->kind = kind;
        d->factors = std::move(factors);
        d->size = 1;
        for (auto f : d->factors) {
            detail::require(d->size <= (std::size_t{1} << 24) / f, "group too large to index");
            d->size *= f;
        }
        return Group(std::move(d));
    }

    static void validate_table(Data& d) {
        const std::size_t n = d.size;
        auto at = [&](Element i, Element j) { return d.table[i * n + j]; };
        bool found = false;
        for (Element e = 0; e < n && !found; ++e) {
            bool ok = true;
            for (Element x = 0; x < n && ok; ++x) ok = at(e, x) == x && at(x, e) == x;
            if (ok) {
                d.identity = e;
                found = true;
            }
        }
        detail::require(found, "operation table has no identity element");
        d.inverse.assign(n, n);
        for (Element x = 0; x < n; ++x) {
            for (Element y = 0; y < n; ++y) {
                if (at(x, y) == d.identity && at(y, x) == d.identity) {
                    d.inverse[x] = y;
                    break;
                }
            }
            detail::require(d.inverse[x] < n, "operation table element without two-sided inverse");
        }
        auto assoc = [&](Element x, Element y, Element z) { return at(at(x, y), z) == at(x, at(y, z)); };
        if (n <= kExhaustiveAssociativityOrder) {
            for (Element x = 0; x < n; ++x)
                for (Element y = 0; y < n; ++y)
                    for (Element z = 0; z < n; ++z)
                        detail::require(assoc(x, y, z), "operation table is not associative");
        } else {
            std::mt19937_64 rng(0x5eed);
            std::uniform_int_distribution<Element> pick(0, n - 1);
            for (int t = 0; t < 20000; ++t)
                detail::require(assoc(pick(rng), pick(rng), pick(rng)), "operation table is not associative");
        }
        d.abelian = true;
        for (Element x = 0; x < n && d.abelian; ++x)
            for (Element y = x + 1; y < n && d.abelian; ++y) d.abelian = at(x, y) == at(y, x);
    }

    void check(Element x) const {
        if (x >= d_->size) throw InvalidInput("element index " + std::to_string(x) + " is not in " + describe());
    }

    std::shared_ptr<const Data> d_;
};

/// A subgroup, stored as the sorted list of its elements.
class Subgroup {
public:
    /// Validates closure under the operation and inverses.
    Subgroup(Group g, std::vector<Element> elements) : group_(std::move(g)), elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        detail::require(contains(group_.identity()), "subgroup must contain the identity");
        for (auto x : elements_) {
            detail::require(contains(group_.inverse(x)), "subgroup is not closed under inverses");
            for (auto y : elements_)
                detail::require(contains(group_.op(x, y)), "subgroup is not closed under the operation");
        }
    }

    static Subgroup trivial(const Group& g) { return Subgroup(g, {g.identity()}, Trusted{}); }

    const Group& group() const { return group_; }
    const std::vector<Element>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool is_trivial() const { return elements_.size() == 1; }
    bool is_whole() const { return group_.is_finite() && elements_.size() == group_.order(); }

    bool contains(Element x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

    bool is_normal() const {
        if (group_.is_abelian()) return true;
        for (Element g = 0; g < group_.index_count(); ++g) {
            const Element gi = group_.inverse(g);
            for (auto n : elements_)
                if (!contains(group_.op(group_.op(g, n), gi))) return false;
        }
        return true;
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements_ == b.elements_; }

private:
    struct Trusted {};
    Subgroup(Group g, std::vector<Element> sorted, Trusted) : group_(std::move(g)), elements_(std::move(sorted)) {}

    friend Subgroup generated_subgroup(const Group& g, std::span<const Element> gens);

    Group group_;
    std::vector<Element> elements_;
};

/// Smallest subgroup containing `gens`, computed by closure.
inline Subgroup generated_subgroup(const Group& g, std::span<const Element> gens) {
    detail::require(!gens.empty(), "generator set must be nonempty");
    for (auto x : gens) detail::require(g.contains(x), "generator is not a group element");
    if (!g.is_finite()) {
        for (auto x : gens)
            if (x != g.identity())
                throw InvalidInput("generator has infinite order in a free abelian group; closure does not terminate");
        return Subgroup::trivial(g);
    }
    std::vector<char> seen(g.index_count(), 0);
    std::vector<Element> out{g.identity()};
    seen[g.identity()] = 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (auto s : gens) {
            const Element y = g.op(out[i], s);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return Subgroup(g, std::move(out), Subgroup::Trusted{});
}

inline Subgroup generated_subgroup(const Group& g, std::initializer_list<Element> gens) {
    return generated_subgroup(g, std::span<const Element>(gens.begin(), gens.size()));
}

/// All subgroups, sorted by order and then lexicographically by element list.
inline std::vector<Subgroup> enumerate_subgroups(const Group& g) {
    if (!g.is_finite()) return {Subgroup::trivial(g)};
    if (g.order() > kMaxSubgroupEnumerationOrder)
        throw LimitExceeded("subgroup enumeration is capped at order " + std::to_string(kMaxSubgroupEnumerationOrder));

    // Breadth-first over generating sets: each found subgroup is extended by one outside element.
    std::set<std::vector<Element>> found;
    std::deque<std::pair<std::vector<Element>, std::vector<Element>>> queue; // (elements, generators)
    auto trivial = Subgroup::trivial(g);
    found.insert(trivial.elements());
    queue.emplace_back(trivial.elements(), std::vector<Element>{});
    while (!queue.empty()) {
        auto [elems, gens] = std::move(queue.front());
        queue.pop_front();
        std::vector<char> inside(g.order(), 0);
        for (auto x : elems) inside[x] = 1;
        for (Element x = 0; x < g.order(); ++x) {
            if (inside[x]) continue;
            auto next_gens = gens;
            next_gens.push_back(x);
            auto h = generated_subgroup(g, next_gens);
            if (found.insert(h.elements()).second) queue.emplace_back(h.elements(), std::move(next_gens));
        }
    }
    std::vector<std::vector<Element>> sorted(found.begin(), found.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
    std::vector<Subgroup> out;
    out.reserve(sorted.size());
    for (auto& s : sorted) out.push_back(generated_subgroup(g, s));
    return out;
}

/// xH (left) or Hx (right), sorted.
inline std::vector<Element> coset(const Group& g, Element x, const Subgroup& h, Side side) {
    std::vector<Element> out;
    out.reserve(h.order());
    for (auto y : h.elements()) out.push_back(side == Side::left ? g.op(x, y) : g.op(y, x));
    std::sort(out.begin(), out.end());
    return out;
}

/// A homomorphism between finite groups, given by the image of every element.
class Homomorphism {
public:
    Homomorphism(Group source, Group target, std::vector<Element> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)),
          kernel_(Subgroup::trivial(source_)) {
        detail::require(source_.is_finite(), "homomorphism source must be finite");
        detail::require(images_.size() == source_.order(), "image map must list one image per source element");
        for (auto y : images_) detail::require(target_.contains(y), "image is not an element of the target group");
        const std::size_t n = source_.order();
        auto hom_at = [&](Element x, Element y) {
            return images_[source_.op(x, y)] == target_.op(images_[x], images_[y]);
        };
        if (n <= kExhaustiveAssociativityOrder) {
            for (Element x = 0; x < n; ++x)
                for (Element y = 0; y < n; ++y)
                    detail::require(hom_at(x, y), "map is not a homomorphism");
        } else {
            std::mt19937_64 rng(0x40a1);
            std::uniform_int_distribution<Element> pick(0, n - 1);
            for (int t = 0; t < 4096; ++t) detail::require(hom_at(pick(rng), pick(rng)), "map is not a homomorphism");
        }
        std::vector<Element> ker;
        for (Element x = 0; x < n; ++x)
            if (images_[x] == target_.identity()) ker.push_back(x);
        kernel_ = Subgroup(source_, std::move(ker));
        if (!kernel_.is_normal()) throw InvariantViolation("homomorphism kernel is not normal");
    }

    /// Z/n -> Z/k, x -> x mod k (requires k | n).
    static Homomorphism reduction(std::size_t n, std::size_t k) {
        detail::require(k >= 1 && n % k == 0, "x mod k is a homomorphism Z/n -> Z/k only when k divides n");
        std::vector<Element> images(n);
        for (std::size_t x = 0; x < n; ++x) images[x] = x % k;
        return Homomorphism(Group::cyclic(n), Group::cyclic(k), std::move(images));
    }

    /// Projection of a product group onto one factor.
    static Homomorphism projection(const Group& product, std::size_t factor) {
        detail::require(product.kind() == GroupKind::product || product.kind() == GroupKind::cyclic,
                        "projection needs a product of cyclic groups");
        detail::require(factor < product.factors().size(), "projection factor out of range");
        auto target = Group::cyclic(product.factors()[factor]);
        std::vector<Element> images(product.order());
        for (Element x = 0; x < product.order(); ++x)
            images[x] = static_cast<Element>(product.coordinates(x)[factor]);
        return Homomorphism(product, std::move(target), std::move(images));
    }

    static Homomorphism identity(const Group& g) {
        std::vector<Element> images(g.order());
        std::iota(images.begin(), images.end(), Element{0});
        return Homomorphism(g, g, std::move(images));
    }

    const Group& source() const { return source_; }
    const Group& target() const { return target_; }
    const std::vector<Element>& images() const { return images_; }
    const Subgroup& kernel() const { return kernel_; }

    Element apply(Element x) const {
        detail::require(source_.contains(x), "element is not in the homomorphism source");
        return images_[x];
    }

private:
    Group source_;
    Group target_;
    std::vector<Element> images_;
    Subgroup kernel_;
};

inline Element apply_hom(const Homomorphism& h, Element x) { return h.apply(x); }
inline const Subgroup& kernel(const Homomorphism& h) { return h.kernel(); }

} // namespace matchkit
