#pragma once

// JSON codecs for groups, subsets, tuples, homomorphisms, matchings and subspaces.
//
// Element encoding by group kind:
//   cyclic        integer residue
//   product       coordinate array [x_1, ..., x_k] (a plain index is also accepted)
//   free_abelian  signed coordinate array
//   table         element name, or integer index
// Rationals are written as "p" or "p/q" strings; integers are accepted on input.

#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/linear_core.hpp"
#include "matchkit/linear_matching.hpp"
#include "matchkit/matching.hpp"
#include "matchkit/prime_lab.hpp"
#include "matchkit/relative.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace matchkit::io {

using json = nlohmann::json;

/// Parses text, reporting malformed JSON with line and column.
inline json parse_text(const std::string& text, const std::string& origin = "<input>") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InvalidInput(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw InvalidInput(std::string("expected an object with field \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("missing field \"") + key + "\"");
    return *it;
}

template <class T>
T get(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("field \"") + what + "\" has the wrong type");
    }
}

} // namespace detail

// ---- groups -----------------------------------------------------------------

inline Group group_from_json(const json& j) {
    const auto kind = detail::get<std::string>(detail::field(j, "kind"), "kind");
    if (kind == "cyclic") return Group::cyclic(detail::get<std::size_t>(detail::field(j, "n"), "n"));
    if (kind == "product")
        return Group::product(detail::get<std::vector<std::size_t>>(detail::field(j, "factors"), "factors"));
    if (kind == "free_abelian")
        return Group::free_abelian(detail::get<std::size_t>(detail::field(j, "rank"), "rank"),
                                   detail::get<long>(detail::field(j, "window"), "window"));
    if (kind == "symmetric") return Group::symmetric(detail::get<int>(detail::field(j, "n"), "n"));
    if (kind == "table") {
        std::vector<std::string> names;
        for (const auto& e : detail::field(j, "elements"))
            names.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        std::vector<std::vector<Element>> table;
        for (const auto& row : detail::field(j, "table")) {
            std::vector<Element> r;
            for (const auto& e : row) {
                if (e.is_number_unsigned()) {
                    r.push_back(e.get<Element>());
                } else {
                    const auto s = e.is_string() ? e.get<std::string>() : e.dump();
                    const auto it = std::find(names.begin(), names.end(), s);
                    if (it == names.end()) throw InvalidInput("table entry \"" + s + "\" is not an element name");
                    r.push_back(static_cast<Element>(it - names.begin()));
                }
            }
            table.push_back(std::move(r));
        }
        return Group::table(std::move(names), table);
    }
    throw InvalidInput("unknown group kind \"" + kind + "\"");
}

inline json group_to_json(const Group& g) {
    switch (g.kind()) {
    case GroupKind::cyclic: return {{"kind", "cyclic"}, {"n", g.order()}};
    case GroupKind::product: return {{"kind", "product"}, {"factors", g.factors()}};
    case GroupKind::free_abelian: return {{"kind", "free_abelian"}, {"rank", g.rank()}, {"window", g.window()}};
    case GroupKind::table: {
        std::vector<std::vector<std::string>> t;
        for (Element x = 0; x < g.order(); ++x) {
            std::vector<std::string> row;
            for (Element y = 0; y < g.order(); ++y) row.push_back(g.name(g.op(x, y)));
            t.push_back(std::move(row));
        }
        return {{"kind", "table"}, {"elements", g.names()}, {"table", t}};
    }
    }
    return {};
}

inline Element element_from_json(const Group& g, const json& j) {
    Element x = 0;
    if (g.kind() == GroupKind::table && j.is_string()) {
        const auto& names = g.names();
        const auto it = std::find(names.begin(), names.end(), j.get<std::string>());
        if (it == names.end()) throw InvalidInput("unknown element name " + j.dump());
        return static_cast<Element>(it - names.begin());
    }
    if (j.is_array()) {
        const auto c = detail::get<std::vector<long>>(j, "element");
        return g.from_coordinates(c);
    }
    if (!j.is_number_integer()) throw InvalidInput("cannot read group element " + j.dump());
    const long v = j.get<long>();
    if (g.kind() == GroupKind::free_abelian) {
        const long c[] = {v};
        return g.from_coordinates(c);
    }
    if (v < 0 || !g.contains(static_cast<Element>(v))) throw InvalidInput("element " + j.dump() + " is not in the group");
    x = static_cast<Element>(v);
    return x;
}

inline json element_to_json(const Group& g, Element x) {
    switch (g.kind()) {
    case GroupKind::cyclic: return x;
    case GroupKind::table: return g.name(x);
    case GroupKind::product:
    case GroupKind::free_abelian: return g.coordinates(x);
    }
    return {};
}

inline std::vector<Element> elements_from_json(const Group& g, const json& j) {
    if (!j.is_array()) throw InvalidInput("expected an array of group elements");
    std::vector<Element> out;
    for (const auto& e : j) out.push_back(element_from_json(g, e));
    return out;
}

inline json elements_to_json(const Group& g, const std::vector<Element>& xs) {
    json out = json::array();
    for (auto x : xs) out.push_back(element_to_json(g, x));
    return out;
}

// ---- subset pairs, matchings, tuples, homomorphisms ---------------------------

inline SubsetPair pair_from_json(const json& j) {
    auto g = group_from_json(detail::field(j, "group"));
    auto a = elements_from_json(g, detail::field(j, "A"));
    auto b = elements_from_json(g, detail::field(j, "B"));
    return SubsetPair(std::move(g), std::move(a), std::move(b));
}

inline json pair_to_json(const SubsetPair& p) {
    return {{"group", group_to_json(p.group())},
            {"A", elements_to_json(p.group(), p.a())},
            {"B", elements_to_json(p.group(), p.b())}};
}

inline json multiplicity_to_json(const Group& g, const MultiplicityFunction& m) {
    json out = json::object();
    for (const auto& [x, c] : m) out[element_to_json(g, x).dump()] = c;
    return out;
}

inline json matching_to_json(const Matching& m) {
    const auto& g = m.pair().group();
    std::vector<Element> images;
    for (std::size_t i = 0; i < m.sigma().size(); ++i) images.push_back(m.image(i));
    return {{"sigma", m.sigma()},
            {"images", elements_to_json(g, images)},
            {"products", elements_to_json(g, m.products())},
            {"multiplicity", multiplicity_to_json(g, multiplicity(m))}};
}

inline TupleOfElements tuple_from_json(const Group& g, const json& j) {
    return TupleOfElements(g, elements_from_json(g, j.is_object() ? detail::field(j, "entries") : j));
}

inline json tuple_to_json(const TupleOfElements& t) {
    return {{"group", group_to_json(t.group())}, {"entries", elements_to_json(t.group(), t.entries())}};
}

/// {"source":G,"target":H,"map":"mod_k" | [images by source index] | {"projection":factor}}
inline Homomorphism hom_from_json(const json& j) {
    auto source = group_from_json(detail::field(j, "source"));
    auto target = group_from_json(detail::field(j, "target"));
    const auto& map = detail::field(j, "map");
    if (map.is_string()) {
        const auto s = map.get<std::string>();
        if (s.rfind("mod", 0) != 0) throw InvalidInput("unknown map \"" + s + "\"");
        if (source.kind() != GroupKind::cyclic || target.kind() != GroupKind::cyclic)
            throw InvalidInput("reduction maps need cyclic source and target");
        const auto k = target.order();
        if (s != "mod_k" && s != "mod" && s != "mod_" + std::to_string(k))
            throw InvalidInput("map \"" + s + "\" does not match the target order " + std::to_string(k));
        return Homomorphism::reduction(source.order(), k);
    }
    if (map.is_object()) {
        const auto factor = detail::get<std::size_t>(detail::field(map, "projection"), "projection");
        auto h = Homomorphism::projection(source, factor);
        if (!(h.target() == target)) throw InvalidInput("projection target does not match the declared target");
        return h;
    }
    if (!source.is_finite()) throw InvalidInput("homomorphism source must be finite");
    return Homomorphism(source, target, elements_from_json(target, map));
}

inline json hom_to_json(const Homomorphism& h) {
    return {{"source", group_to_json(h.source())},
            {"target", group_to_json(h.target())},
            {"map", elements_to_json(h.target(), h.images())}};
}

// ---- rationals, ambients, subspaces -------------------------------------------

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InvalidInput("expected a rational (integer or \"p/q\" string), got " + j.dump());
}

inline json rational_to_json(const Rational& q) { return to_string(q); }

inline Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("expected an array of rationals");
    Vector v;
    for (const auto& e : j) v.push_back(rational_from_json(e));
    return v;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rational_to_json(q));
    return out;
}

inline json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (const auto& r : m) out.push_back(vector_to_json(r));
    return out;
}

/// {"kind":"laurent","dmin":a,"dmax":b} | {"kind":"algebra","dim":d,"tensor":[...],"unity":[...]}
/// | {"kind":"algebra","minpoly":[c_0,...,c_{d-1}]} for Q[x]/(x^d + ... + c_0).
inline Ambient ambient_from_json(const json& j) {
    const auto kind = detail::get<std::string>(detail::field(j, "kind"), "kind");
    if (kind == "laurent")
        return Ambient::laurent(detail::get<long>(detail::field(j, "dmin"), "dmin"),
                                detail::get<long>(detail::field(j, "dmax"), "dmax"));
    if (kind != "algebra") throw InvalidInput("unknown ambient kind \"" + kind + "\"");
    if (j.contains("minpoly")) return Ambient::algebra(StructureConstants::from_minimal_polynomial(vector_from_json(j["minpoly"])));
    const auto d = detail::get<std::size_t>(detail::field(j, "dim"), "dim");
    const auto& tj = detail::field(j, "tensor");
    matchkit::detail::require(tj.is_array(), "tensor must be an array");
    std::vector<std::vector<Vector>> t(d, std::vector<Vector>(d));
    if (tj.size() == d * d * d && !tj.empty() && !tj[0].is_array()) {
        const auto flat = vector_from_json(tj);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                t[i][k] = Vector(flat.begin() + static_cast<long>((i * d + k) * d),
                                 flat.begin() + static_cast<long>((i * d + k + 1) * d));
    } else {
        matchkit::detail::require(tj.size() == d, "tensor must be dim x dim x dim");
        for (std::size_t i = 0; i < d; ++i) {
            matchkit::detail::require(tj[i].is_array() && tj[i].size() == d, "tensor must be dim x dim x dim");
            for (std::size_t k = 0; k < d; ++k) t[i][k] = vector_from_json(tj[i][k]);
        }
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = detail::get<std::vector<std::string>>(j["labels"], "labels");
    return Ambient::algebra(StructureConstants(std::move(t), vector_from_json(detail::field(j, "unity")), labels));
}

inline json ambient_to_json(const Ambient& a) {
    if (a.is_laurent()) return {{"kind", "laurent"}, {"dmin", a.dmin()}, {"dmax", a.dmax()}};
    const auto& sc = a.constants();
    const auto d = sc.dim();
    json t = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < d; ++k) {
            Vector v;
            for (std::size_t l = 0; l < d; ++l) v.push_back(sc.at(i, k, l));
            row.push_back(vector_to_json(v));
        }
        t.push_back(std::move(row));
    }
    return {{"kind", "algebra"}, {"dim", d}, {"tensor", t}, {"unity", vector_to_json(sc.unity())}, {"labels", sc.labels()}};
}

inline std::vector<AlgebraElement> elements_from_json(const Ambient& amb, const json& rows) {
    if (!rows.is_array()) throw InvalidInput("basis must be an array of coefficient arrays");
    std::vector<AlgebraElement> out;
    for (const auto& r : rows) {
        auto v = vector_from_json(r);
        if (v.size() != amb.dim())
            throw InvalidInput("coefficient array of length " + std::to_string(v.size()) + " does not match ambient dimension " +
                               std::to_string(amb.dim()));
        out.emplace_back(amb, std::move(v));
    }
    return out;
}

/// Coefficients over the ambient basis, plus for Laurent elements the window they live in.
inline json algebra_element_to_json(const AlgebraElement& x) {
    json out = {{"coeffs", vector_to_json(x.coeffs())}};
    if (x.ambient().is_laurent()) {
        out["dmin"] = x.ambient().dmin();
        out["dmax"] = x.ambient().dmax();
    }
    return out;
}

inline Subspace subspace_from_json(const json& j) {
    auto amb = ambient_from_json(detail::field(j, "ambient"));
    return Subspace(amb, elements_from_json(amb, detail::field(j, "basis")));
}

inline json subspace_to_json(const Subspace& s) {
    return {{"ambient", ambient_to_json(s.ambient())}, {"basis", matrix_to_json(s.rows())}};
}

/// Ordered basis rows over the given ambient (each row embedded, Laurent windows widened).
inline json basis_rows(const Ambient& amb, const std::vector<AlgebraElement>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(vector_to_json(embed(x, amb).coeffs()));
    return out;
}

struct LinearPair {
    Ambient ambient;
    std::vector<AlgebraElement> a; // as given (ordered)
    std::vector<AlgebraElement> b;
    Subspace a_space() const { return Subspace(ambient, a); }
    Subspace b_space() const { return Subspace(ambient, b); }
};

/// {"ambient":{...},"A":[[...]],"B":[[...]]}
inline LinearPair linear_pair_from_json(const json& j) {
    auto amb = ambient_from_json(detail::field(j, "ambient"));
    auto a = elements_from_json(amb, detail::field(j, "A"));
    auto b = elements_from_json(amb, detail::field(j, "B"));
    matchkit::detail::require(!a.empty() && !b.empty(), "A and B must be nonempty");
    return LinearPair{amb, std::move(a), std::move(b)};
}

// ---- scans --------------------------------------------------------------------

inline json scan_record_to_json(const ScanRecord& r) {
    const auto g = Group::cyclic(r.p);
    json out = {{"seed", r.seed},
                {"p", r.p},
                {"index", r.index},
                {"A", elements_to_json(g, r.a)},
                {"B", elements_to_json(g, r.b)},
                {"verdict", to_string(r.verdict)},
                {"matchings_examined", r.matchings_examined},
                {"elapsed_us", r.elapsed_us}};
    out["sigma"] = r.sigma ? json(*r.sigma) : json(nullptr);
    return out;
}

} // namespace matchkit::io
