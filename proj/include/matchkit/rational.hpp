#pragma once

// Exact rationals and the dense row-reduction kernels everything linear is built on.

#include "matchkit/error.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matchkit {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>; // row-major

/// Accepts "p", "-p" and "p/q".
inline Rational parse_rational(std::string_view s) {
    auto bad = [&] { return InvalidInput("not a rational number: \"" + std::string(s) + "\""); };
    if (s.empty()) throw bad();
    auto valid_int = [](std::string_view t) {
        if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    const auto slash = s.find('/');
    auto strip_plus = [](std::string_view t) { return std::string(!t.empty() && t[0] == '+' ? t.substr(1) : t); };
    if (slash == std::string_view::npos) {
        if (!valid_int(s)) throw bad();
        return Rational(Integer(strip_plus(s)));
    }
    auto num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) throw bad();
    Integer d(strip_plus(den));
    if (d == 0) throw InvalidInput("zero denominator in \"" + std::string(s) + "\"");
    return Rational(Integer(strip_plus(num)), d);
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

namespace linalg {

inline bool is_zero(const Vector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

/// In-place reduced row echelon form; zero rows are dropped. Returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& rows) {
    const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const Rational inv = 1 / rows[r][c];
        for (std::size_t k = c; k < ncols; ++k) rows[r][k] *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t k = c; k < ncols; ++k) rows[i][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

inline std::size_t rank(Matrix rows) { return rref(rows).size(); }

/// Basis of {x : rows * x = 0}; each basis vector has a 1 at one free column.
inline Matrix nullspace(Matrix rows, std::size_t ncols) {
    const auto pivots = rref(rows);
    std::vector<char> is_pivot(ncols, 0);
    for (auto p : pivots) is_pivot[p] = 1;
    Matrix out;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vector x(ncols, Rational(0));
        x[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -rows[i][f];
        out.push_back(std::move(x));
    }
    return out;
}

/// Subtracts multiples of the rref rows so that v is zero at every pivot column.
inline void reduce(Vector& v, const Matrix& rref_rows, const std::vector<std::size_t>& pivots) {
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const Rational f = v[pivots[i]];
        if (f == 0) continue;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f * rref_rows[i][k];
    }
}

inline Matrix transpose(const Matrix& m, std::size_t ncols) {
    Matrix t(ncols, Vector(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < ncols; ++j) t[j][i] = m[i][j];
    return t;
}

inline Matrix identity(std::size_t n) {
    Matrix m(n, Vector(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t inner = b.size();
    const std::size_t ncols = inner ? b.front().size() : 0;
    Matrix out(a.size(), Vector(ncols, Rational(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < ncols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline Vector apply(const Matrix& a, const Vector& x) {
    Vector out(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < x.size(); ++k) out[i] += a[i][k] * x[k];
    return out;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix aug(n, Vector(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw InvalidInput("inverse needs a square matrix");
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    const auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, Vector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

/// Some x with m * x = rhs, if one exists.
inline std::optional<Vector> solve(const Matrix& m, const Vector& rhs, std::size_t ncols) {
    Matrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == ncols) return std::nullopt;
    Vector x(ncols, Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][ncols];
    return x;
}

} // namespace linalg
} // namespace matchkit
