#pragma once

#include "matchkit/linear_core.hpp"
#include "oracles.hpp"

#include <initializer_list>
#include <utility>

namespace fixture {

using namespace matchkit;

/// Laurent element from (degree, coefficient) terms.
inline AlgebraElement lp(std::initializer_list<std::pair<long, long>> terms) {
    long lo = 0, hi = 0;
    bool first = true;
    for (const auto& [d, c] : terms) {
        lo = first ? d : std::min(lo, d);
        hi = first ? d : std::max(hi, d);
        first = false;
    }
    Vector v(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    for (const auto& [d, c] : terms) v[static_cast<std::size_t>(d - lo)] += c;
    return {Ambient::laurent(lo, hi), std::move(v)};
}

inline Subspace span(const std::vector<AlgebraElement>& xs) {
    Ambient amb = xs.front().ambient();
    for (const auto& x : xs) amb = hull(amb, x.ambient());
    return Subspace(amb, xs);
}

inline oracle::Laurent to_oracle(const AlgebraElement& x) {
    oracle::Laurent out;
    for (std::size_t i = 0; i < x.coeffs().size(); ++i)
        if (x.coeffs()[i] != 0) out[x.ambient().dmin() + static_cast<long>(i)] = x.coeffs()[i];
    return out;
}

/// Q[x]/(x^d - c).
inline Ambient radical(std::size_t d, long c) {
    Vector lower(d, Rational(0));
    lower[0] = -c;
    return Ambient::algebra(StructureConstants::from_minimal_polynomial(lower));
}

inline AlgebraElement alg(const Ambient& amb, std::initializer_list<long> coeffs) {
    Vector v;
    for (auto c : coeffs) v.push_back(c);
    v.resize(amb.dim(), Rational(0));
    return {amb, std::move(v)};
}

} // namespace fixture
