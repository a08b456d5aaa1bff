#pragma once

// Ambient algebras for subspace computations over Q:
//  - Laurent windows: Laurent polynomials with degrees in [dmin, dmax] inside Q(t).
//    The window is metadata; products and sums widen it instead of truncating.
//  - Structure-constant algebras: commutative associative unital Q-algebras of
//    finite dimension, e.g. Q[x]/(x^4 - 2).
// Subspaces are stored in reduced row echelon form, columns ordered by basis index
// (ascending degree for Laurent windows).

#include "matchkit/error.hpp"
#include "matchkit/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

class StructureConstants {
public:
    /// `tensor[i][j][k]` is the coefficient of e_k in e_i * e_j.
    StructureConstants(std::vector<std::vector<Vector>> tensor, Vector unity, std::vector<std::string> labels = {})
        : dim_(tensor.size()), unity_(std::move(unity)), labels_(std::move(labels)) {
        detail::require(dim_ >= 1, "structure constants need dimension >= 1");
        detail::require(unity_.size() == dim_, "unity vector has the wrong length");
        flat_.reserve(dim_ * dim_ * dim_);
        for (const auto& row : tensor) {
            detail::require(row.size() == dim_, "structure tensor must be dim x dim x dim");
            for (const auto& v : row) {
                detail::require(v.size() == dim_, "structure tensor must be dim x dim x dim");
                flat_.insert(flat_.end(), v.begin(), v.end());
            }
        }
        if (labels_.empty())
            for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i));
        detail::require(labels_.size() == dim_, "label count does not match dimension");
        validate();
    }

    /// Q[x]/(f) for monic f = x^d + c_{d-1} x^{d-1} + ... + c_0; `lower` = (c_0, ..., c_{d-1}).
    static StructureConstants from_minimal_polynomial(const Vector& lower) {
        const std::size_t d = lower.size();
        detail::require(d >= 1, "minimal polynomial must have degree >= 1");
        // power[k] = coordinates of x^k reduced mod f, for k < 2d - 1.
        std::vector<Vector> power;
        for (std::size_t k = 0; k + 1 < 2 * d; ++k) {
            Vector v(d, Rational(0));
            if (k < d) {
                v[k] = 1;
            } else {
                const Vector& prev = power[k - 1];
                for (std::size_t i = 0; i + 1 < d; ++i) v[i + 1] = prev[i];
                for (std::size_t i = 0; i < d; ++i) v[i] -= prev[d - 1] * lower[i];
            }
            power.push_back(std::move(v));
        }
        std::vector<std::vector<Vector>> t(d, std::vector<Vector>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) t[i][j] = power[i + j];
        Vector unity(d, Rational(0));
        unity[0] = 1;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < d; ++i) labels.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
        return StructureConstants(std::move(t), std::move(unity), std::move(labels));
    }

    std::size_t dim() const { return dim_; }
    const Vector& unity() const { return unity_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Rational& at(std::size_t i, std::size_t j, std::size_t k) const { return flat_[(i * dim_ + j) * dim_ + k]; }

    Vector multiply(const Vector& x, const Vector& y) const {
        Vector out(dim_, Rational(0));
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (y[j] == 0) continue;
                const Rational c = x[i] * y[j];
                for (std::size_t k = 0; k < dim_; ++k)
                    if (at(i, j, k) != 0) out[k] += c * at(i, j, k);
            }
        }
        return out;
    }

    /// Matrix of y -> x * y (column j = x * e_j).
    Matrix multiplication_matrix(const Vector& x) const {
        Matrix m(dim_, Vector(dim_, Rational(0)));
        for (std::size_t j = 0; j < dim_; ++j) {
            Vector e(dim_, Rational(0));
            e[j] = 1;
            const auto col = multiply(x, e);
            for (std::size_t i = 0; i < dim_; ++i) m[i][j] = col[i];
        }
        return m;
    }

    friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
        return a.dim_ == b.dim_ && a.flat_ == b.flat_ && a.unity_ == b.unity_;
    }

private:
    void validate() const {
        auto basis = [&](std::size_t i) {
            Vector e(dim_, Rational(0));
            e[i] = 1;
            return e;
        };
        for (std::size_t i = 0; i < dim_; ++i) {
            const auto ei = basis(i);
            detail::require(multiply(unity_, ei) == ei && multiply(ei, unity_) == ei,
                            "unity is not a two-sided identity");
            for (std::size_t j = 0; j < dim_; ++j) {
                const auto ej = basis(j);
                detail::require(multiply(ei, ej) == multiply(ej, ei), "structure constants are not commutative");
                for (std::size_t k = 0; k < dim_; ++k) {
                    const auto ek = basis(k);
                    detail::require(multiply(multiply(ei, ej), ek) == multiply(ei, multiply(ej, ek)),
                                    "structure constants are not associative");
                }
            }
        }
    }

    std::size_t dim_;
    std::vector<Rational> flat_;
    Vector unity_;
    std::vector<std::string> labels_;
};

class Ambient {
public:
    enum class Kind { laurent, algebra };

    static Ambient laurent(long dmin, long dmax) {
        detail::require(dmin <= dmax, "Laurent window needs dmin <= dmax");
        detail::require(dmax - dmin <= 4096, "Laurent window too wide");
        Ambient a;
        a.kind_ = Kind::laurent;
        a.dmin_ = dmin;
        a.dmax_ = dmax;
        return a;
    }

    static Ambient algebra(StructureConstants sc) {
        Ambient a;
        a.kind_ = Kind::algebra;
        a.table_ = std::make_shared<const StructureConstants>(std::move(sc));
        return a;
    }

    Kind kind() const { return kind_; }
    bool is_laurent() const { return kind_ == Kind::laurent; }
    long dmin() const { return dmin_; }
    long dmax() const { return dmax_; }
    std::size_t dim() const {
        return is_laurent() ? static_cast<std::size_t>(dmax_ - dmin_ + 1) : table_->dim();
    }
    const StructureConstants& constants() const {
        detail::require(!is_laurent(), "Laurent windows have no structure constants");
        return *table_;
    }

    std::string label(std::size_t i) const {
        if (!is_laurent()) return table_->labels()[i];
        const long d = dmin_ + static_cast<long>(i);
        return d == 0 ? "1" : d == 1 ? "t" : "t^" + std::to_string(d);
    }

    /// Same algebra; Laurent windows of any extent are compatible.
    bool compatible(const Ambient& o) const {
        if (kind_ != o.kind_) return false;
        return is_laurent() || table_ == o.table_ || *table_ == *o.table_;
    }

    friend bool operator==(const Ambient& a, const Ambient& b) {
        if (!a.compatible(b)) return false;
        return !a.is_laurent() || (a.dmin_ == b.dmin_ && a.dmax_ == b.dmax_);
    }

private:
    Kind kind_ = Kind::laurent;
    long dmin_ = 0;
    long dmax_ = 0;
    std::shared_ptr<const StructureConstants> table_;
};

namespace detail {

inline void require_compatible(const Ambient& a, const Ambient& b) {
    if (!a.compatible(b)) throw InvalidInput("ambient mismatch");
}

} // namespace detail

/// Smallest ambient containing both (Laurent: union window).
inline Ambient hull(const Ambient& a, const Ambient& b) {
    detail::require_compatible(a, b);
    if (!a.is_laurent()) return a;
    return Ambient::laurent(std::min(a.dmin(), b.dmin()), std::max(a.dmax(), b.dmax()));
}

/// Ambient holding all products (Laurent: windows add).
inline Ambient product_ambient(const Ambient& a, const Ambient& b) {
    detail::require_compatible(a, b);
    if (!a.is_laurent()) return a;
    return Ambient::laurent(a.dmin() + b.dmin(), a.dmax() + b.dmax());
}

class AlgebraElement {
public:
    AlgebraElement(Ambient amb, Vector coeffs) : amb_(std::move(amb)), coeffs_(std::move(coeffs)) {
        detail::require(coeffs_.size() == amb_.dim(), "coefficient vector length does not match the ambient");
    }

    static AlgebraElement zero(const Ambient& amb) { return {amb, Vector(amb.dim(), Rational(0))}; }

    /// c * t^k; the window is exactly [k, k].
    static AlgebraElement monomial(long k, Rational c = 1) { return {Ambient::laurent(k, k), Vector{std::move(c)}}; }

    static AlgebraElement basis(const Ambient& amb, std::size_t i) {
        auto e = zero(amb);
        e.coeffs_.at(i) = 1;
        return e;
    }

    const Ambient& ambient() const { return amb_; }
    const Vector& coeffs() const { return coeffs_; }
    bool is_zero() const { return linalg::is_zero(coeffs_); }

    /// Laurent coefficient of t^d (zero outside the window).
    Rational coeff_of_degree(long d) const {
        if (d < amb_.dmin() || d > amb_.dmax()) return 0;
        return coeffs_[static_cast<std::size_t>(d - amb_.dmin())];
    }

    friend bool operator==(const AlgebraElement& x, const AlgebraElement& y);

private:
    Ambient amb_;
    Vector coeffs_;
};

/// Re-expresses x in `target`; throws WindowOverflow if a nonzero coefficient would be lost.
inline AlgebraElement embed(const AlgebraElement& x, const Ambient& target) {
    detail::require_compatible(x.ambient(), target);
    if (!target.is_laurent()) return AlgebraElement(target, x.coeffs());
    Vector c(target.dim(), Rational(0));
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
        if (x.coeffs()[i] == 0) continue;
        const long d = x.ambient().dmin() + static_cast<long>(i);
        if (d < target.dmin() || d > target.dmax())
            throw WindowOverflow("t^" + std::to_string(d) + " lies outside the target window");
        c[static_cast<std::size_t>(d - target.dmin())] = x.coeffs()[i];
    }
    return AlgebraElement(target, std::move(c));
}

inline bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
    if (!x.amb_.compatible(y.amb_)) return false;
    const auto h = hull(x.amb_, y.amb_);
    return embed(x, h).coeffs_ == embed(y, h).coeffs_;
}

inline AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y) {
    const auto h = hull(x.ambient(), y.ambient());
    auto a = embed(x, h).coeffs();
    const auto b = embed(y, h).coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return {h, std::move(a)};
}

inline AlgebraElement scale(const AlgebraElement& x, const Rational& c) {
    auto v = x.coeffs();
    for (auto& e : v) e *= c;
    return {x.ambient(), std::move(v)};
}

/// Linear combination sum_k w[k] * xs[k] (ambient of the first element, widened as needed).
inline AlgebraElement combine(const std::vector<AlgebraElement>& xs, const Vector& w) {
    detail::require(!xs.empty() && xs.size() == w.size(), "combination needs matching weights");
    auto acc = scale(xs[0], w[0]);
    for (std::size_t k = 1; k < xs.size(); ++k) acc = add(acc, scale(xs[k], w[k]));
    return acc;
}

/// Exact product; Laurent windows add.
inline AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
    const auto amb = product_ambient(x.ambient(), y.ambient());
    if (!amb.is_laurent()) return {amb, amb.constants().multiply(x.coeffs(), y.coeffs())};
    Vector out(amb.dim(), Rational(0));
    const auto& a = x.coeffs();
    const auto& b = y.coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
    return {amb, std::move(out)};
}

/// The unit element; for Laurent ambients it is t^0 in the window [0, 0].
inline AlgebraElement unity(const Ambient& amb) {
    if (amb.is_laurent()) return AlgebraElement::monomial(0);
    return {amb, amb.constants().unity()};
}

/// Multiplicative inverse. Laurent elements must be monomials c t^k.
inline AlgebraElement invert(const AlgebraElement& x) {
    if (x.is_zero()) throw InvalidInput("zero is not invertible");
    if (x.ambient().is_laurent()) {
        std::optional<long> deg;
        Rational c;
        for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
            if (x.coeffs()[i] == 0) continue;
            if (deg) throw InvalidInput("only monomials are invertible inside Laurent windows");
            deg = x.ambient().dmin() + static_cast<long>(i);
            c = x.coeffs()[i];
        }
        return AlgebraElement::monomial(-*deg, 1 / c);
    }
    const auto& sc = x.ambient().constants();
    auto sol = linalg::solve(sc.multiplication_matrix(x.coeffs()), sc.unity(), sc.dim());
    if (!sol) throw InvalidInput("element is not invertible in the algebra");
    return {x.ambient(), std::move(*sol)};
}

/// A subspace as the reduced row echelon basis of its span.
class Subspace {
public:
    explicit Subspace(Ambient amb) : amb_(std::move(amb)) {}

    /// Echelonizes the span of `vectors` (each embedded into `amb`).
    Subspace(Ambient amb, const std::vector<AlgebraElement>& vectors) : amb_(std::move(amb)) {
        for (const auto& v : vectors) rows_.push_back(embed(v, amb_).coeffs());
        pivots_ = linalg::rref(rows_);
    }

    static Subspace from_rows(Ambient amb, Matrix rows) {
        Subspace s(std::move(amb));
        for (const auto& r : rows) detail::require(r.size() == s.amb_.dim(), "basis row length does not match ambient");
        s.rows_ = std::move(rows);
        s.pivots_ = linalg::rref(s.rows_);
        return s;
    }

    const Ambient& ambient() const { return amb_; }
    const Matrix& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::size_t dim() const { return rows_.size(); }
    bool is_zero() const { return rows_.empty(); }

    std::vector<AlgebraElement> basis() const {
        std::vector<AlgebraElement> out;
        for (const auto& r : rows_) out.emplace_back(amb_, r);
        return out;
    }

    /// Same span, re-expressed in a compatible ambient.
    Subspace embed_in(const Ambient& target) const { return Subspace(target, basis()); }

    bool contains(const AlgebraElement& x) const {
        const auto h = hull(amb_, x.ambient());
        if (h == amb_) {
            auto v = embed(x, amb_).coeffs();
            linalg::reduce(v, rows_, pivots_);
            return linalg::is_zero(v);
        }
        return embed_in(h).contains(x);
    }

    /// Residual of x modulo this subspace, in this subspace's ambient (x must fit).
    Vector residual(const AlgebraElement& x) const {
        auto v = embed(x, amb_).coeffs();
        linalg::reduce(v, rows_, pivots_);
        return v;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        if (!a.amb_.compatible(b.amb_)) return false;
        if (a.amb_ == b.amb_) return a.rows_ == b.rows_;
        const auto h = hull(a.amb_, b.amb_);
        return a.embed_in(h).rows_ == b.embed_in(h).rows_;
    }

private:
    Ambient amb_;
    Matrix rows_;
    std::vector<std::size_t> pivots_;
};

inline Subspace echelonize(const Ambient& amb, const std::vector<AlgebraElement>& vectors) {
    return Subspace(amb, vectors);
}

inline Subspace sum(const Subspace& u, const Subspace& v) {
    const auto h = hull(u.ambient(), v.ambient());
    auto vecs = u.basis();
    for (auto& x : v.basis()) vecs.push_back(std::move(x));
    return Subspace(h, vecs);
}

/// Intersection by the kernel of [U; -V]: sum c_i u_i = sum d_j v_j.
inline Subspace intersect(const Subspace& u, const Subspace& v) {
    const auto h = hull(u.ambient(), v.ambient());
    const auto ub = u.embed_in(h).rows();
    const auto vb = v.embed_in(h).rows();
    const std::size_t n = ub.size() + vb.size();
    Matrix system(h.dim(), Vector(n, Rational(0)));
    for (std::size_t k = 0; k < h.dim(); ++k) {
        for (std::size_t i = 0; i < ub.size(); ++i) system[k][i] = ub[i][k];
        for (std::size_t j = 0; j < vb.size(); ++j) system[k][ub.size() + j] = -vb[j][k];
    }
    std::vector<AlgebraElement> gens;
    for (const auto& sol : linalg::nullspace(system, n)) {
        Vector x(h.dim(), Rational(0));
        for (std::size_t i = 0; i < ub.size(); ++i)
            for (std::size_t k = 0; k < h.dim(); ++k) x[k] += sol[i] * ub[i][k];
        gens.emplace_back(h, std::move(x));
    }
    return Subspace(h, gens);
}

/// Span of all pairwise basis products.
inline Subspace minkowski_span(const Subspace& a, const Subspace& b) {
    const auto amb = product_ambient(a.ambient(), b.ambient());
    std::vector<AlgebraElement> prods;
    for (const auto& x : a.basis())
        for (const auto& y : b.basis()) prods.push_back(multiply(x, y));
    return Subspace(amb, prods);
}

/// Random element with integer coefficients uniform in [-radius, radius].
template <class Rng>
AlgebraElement random_element(const Ambient& amb, Rng& rng, int radius = 9) {
    std::uniform_int_distribution<int> coef(-radius, radius);
    Vector v(amb.dim());
    for (auto& c : v) c = coef(rng);
    return {amb, std::move(v)};
}

/// Random subspace of the requested dimension (vectors redrawn until independent).
/// With `avoid_unity`, the unit element is kept out of the span.
template <class Rng>
Subspace random_subspace(const Ambient& amb, std::size_t dim, Rng& rng, bool avoid_unity = false, int radius = 9) {
    detail::require(dim <= amb.dim(), "requested dimension exceeds the ambient");
    if (avoid_unity) detail::require(dim < amb.dim(), "the whole ambient always contains the unit");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<AlgebraElement> vecs;
        for (std::size_t k = 0; k < dim; ++k) vecs.push_back(random_element(amb, rng, radius));
        Subspace s(amb, vecs);
        if (s.dim() != dim) continue;
        if (avoid_unity && s.contains(unity(amb))) continue;
        return s;
    }
    throw InvalidInput("could not draw a random subspace with the requested properties");
}

} // namespace matchkit
