#pragma once

// Command dispatch behind the matchkit executable. Each run yields one JSON
// report; exit codes: 0 verdict computed, 1 invariant violation, 2 bad input,
// 3 inconclusive or budget exhausted.

#include "matchkit/criteria.hpp"
#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/io.hpp"
#include "matchkit/linear_matching.hpp"
#include "matchkit/matching.hpp"
#include "matchkit/prime_lab.hpp"
#include "matchkit/relative.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>

namespace matchkit::cli {

using json = nlohmann::json;

inline constexpr const char* kToolName = "matchkit";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, invariant_violation = 1, bad_input = 2, inconclusive = 3 };

struct RunConfig {
    std::string command;    // e.g. "match find"
    std::string pair_path;  // --pair
    std::string problem_path; // --problem
    std::string log_path;   // --log (scans)
    std::uint64_t seed = 0;
    std::size_t cap = 100000;      // enumeration / search cap
    std::size_t budget = 10000;    // scan budget (matchings examined)
    std::size_t size_cap = 3;      // scan subset size cap
    std::size_t retries = 64;      // match_basis random attempts
    std::uint64_t p = 0;
    std::uint64_t n = 0;
    std::uint64_t upto = 100;
    std::uint64_t exhaustive_upto = 0;
    std::size_t max_size = 5;
    int prop = 22;
    std::size_t threads = 1;

    json echo() const {
        return {{"command", command},   {"pair", pair_path}, {"problem", problem_path}, {"log", log_path},
                {"seed", seed},         {"cap", cap},        {"budget", budget},        {"size_cap", size_cap},
                {"retries", retries},   {"p", p},            {"n", n},                  {"upto", upto},
                {"exhaustive_upto", exhaustive_upto}, {"max_size", max_size}, {"prop", prop}, {"threads", threads}};
    }
};

struct RunResult {
    int exit_code = ok;
    json report;
};

/// MATCHKIT_THREADS, if set, must be a positive integer. Work here is single-threaded, so it only caps at 1.
inline std::size_t thread_cap_from_env() {
    const char* v = std::getenv("MATCHKIT_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw InvalidInput("MATCHKIT_THREADS must be a positive integer");
    return 1;
}

namespace detail {

inline json one_based(const std::vector<std::size_t>& idx) {
    json out = json::array();
    for (auto i : idx) out.push_back(i + 1);
    return out;
}

inline void need(const std::string& value, const char* flag) {
    if (value.empty()) throw InvalidInput(std::string("missing required option ") + flag);
}

inline int match_cmd(const RunConfig& c, const std::string& sub, json& out) {
    need(c.pair_path, "--pair");
    const auto pair = io::pair_from_json(io::read_file(c.pair_path));
    const auto& g = pair.group();
    if (sub == "find") {
        if (auto m = find_matching(pair)) {
            out["matching"] = io::matching_to_json(*m);
            out["hall_violator"] = nullptr;
            return ok;
        }
        const auto h = hall_violator(pair);
        std::vector<Element> s, nb;
        for (auto i : h.subset) s.push_back(pair.a()[i]);
        for (auto j : h.neighborhood) nb.push_back(pair.b()[j]);
        out["matching"] = nullptr;
        out["hall_violator"] = io::elements_to_json(g, s);
        out["neighborhood"] = io::elements_to_json(g, nb);
        return ok;
    }
    if (sub == "enumerate") {
        const auto list = enumerate_matchings(pair, c.cap);
        json ms = json::array();
        for (const auto& s : list.sigmas) ms.push_back(io::matching_to_json(Matching(pair, s)));
        out["count"] = list.sigmas.size();
        out["truncated"] = list.truncated;
        out["matchings"] = std::move(ms);
        return list.truncated ? inconclusive : ok;
    }
    if (sub == "acyclic") {
        const auto r = find_acyclic_matching(pair, c.cap);
        out["status"] = to_string(r.status);
        out["matchings_examined"] = r.matchings_examined;
        out["matching"] = r.sigma ? io::matching_to_json(Matching(pair, *r.sigma)) : json(nullptr);
        return r.status == SearchStatus::inconclusive ? inconclusive : ok;
    }
    throw InvalidInput("unknown subcommand match " + sub);
}

inline int criteria_cmd(const RunConfig& c, json& out) {
    need(c.pair_path, "--pair");
    const auto pair = io::pair_from_json(io::read_file(c.pair_path));
    const auto& g = pair.group();
    const auto cf = is_coset_free(g, pair.a());
    out["coset_free"] = cf.coset_free;
    if (cf.witness) {
        const auto& w = *cf.witness;
        out["witness"] = {{"subgroup", io::elements_to_json(g, w.subgroup.elements())},
                          {"translate", io::element_to_json(g, w.translate)},
                          {"side", w.side == Side::left ? "left" : "right"},
                          {"coset", io::elements_to_json(g, w.coset)}};
    } else {
        out["witness"] = nullptr;
    }
    if (g.is_abelian() && g.is_finite()) {
        const auto p = prop_1_4_condition(g, pair.a(), pair.b());
        out["prop14"] = p.holds;
        out["prop14_witness"] = p.witness ? json{{"b", io::element_to_json(g, p.witness->b)},
                                                 {"coset", io::elements_to_json(g, p.witness->coset)}}
                                          : json(nullptr);
    } else {
        out["prop14"] = nullptr;
        out["prop14_witness"] = nullptr;
    }
    const bool matched = find_matching(pair).has_value();
    out["matching_exists"] = matched;
    // Either sufficient condition must imply a matching.
    if ((cf.coset_free || out["prop14"] == true) && !matched)
        throw InvariantViolation("a sufficient condition holds but no matching exists");
    return ok;
}

inline int relative_cmd(const RunConfig& c, const std::string& sub, json& out) {
    need(c.problem_path, "--problem");
    const auto j = io::read_file(c.problem_path);
    if (sub == "find") {
        const auto g = io::group_from_json(io::detail::field(j, "group"));
        const auto a = io::tuple_from_json(g, io::detail::field(j, "a"));
        const auto b = io::tuple_from_json(g, io::detail::field(j, "b"));
        const auto gens = io::elements_from_json(g, io::detail::field(j, "normal"));
        const auto n = generated_subgroup(g, gens);
        const auto m = find_relative_matching(a, b, n);
        out["normal_subgroup"] = io::elements_to_json(g, n.elements());
        out["matching"] = m ? json(m->sigma) : json(nullptr);
        if (m && !is_relative_matching(a, b, n, m->sigma))
            throw InvariantViolation("relative matching failed its defining check");
        return ok;
    }
    if (sub == "transfer") {
        const auto h = io::hom_from_json(io::detail::field(j, "hom"));
        const auto a = io::tuple_from_json(h.source(), io::detail::field(j, "a"));
        const auto b = io::tuple_from_json(h.source(), io::detail::field(j, "b"));
        const auto rel = find_relative_matching(a, b, h.kernel());
        const auto img = find_relative_matching(push_forward(h, a), push_forward(h, b), Subgroup::trivial(h.target()));
        out["kernel"] = io::elements_to_json(h.source(), h.kernel().elements());
        out["image_a"] = io::elements_to_json(h.target(), push_forward(h, a).entries());
        out["image_b"] = io::elements_to_json(h.target(), push_forward(h, b).entries());
        out["relative_matching"] = rel ? json(rel->sigma) : json(nullptr);
        out["image_matching"] = img ? json(img->sigma) : json(nullptr);
        out["agree"] = rel.has_value() == img.has_value();
        if (rel.has_value() != img.has_value())
            throw InvariantViolation("image matchability disagrees with kernel-relative matchability");
        return ok;
    }
    throw InvalidInput("unknown subcommand relative " + sub);
}

inline json verdict_json(const PrimeVerdict& v) {
    json facts = json::array();
    for (const auto& f : v.certificate) facts.push_back({{"statement", f.statement}, {"holds", f.holds}});
    return {{"p", v.p},
            {"subset_size", v.subset.size()},
            {"subset", v.subset},
            {"certificate", facts},
            {"certificate_verified", v.certificate_verified},
            {"exhaustive", v.exhaustive},
            {"matchings_total", v.matchings_total ? json(*v.matchings_total) : json(nullptr)},
            {"acyclic_total", v.acyclic_total ? json(*v.acyclic_total) : json(nullptr)},
            {"acyclic_search", v.acyclic_search ? json(to_string(*v.acyclic_search)) : json(nullptr)}};
}

inline int primes_cmd(const RunConfig& c, const std::string& sub, json& out) {
    if (sub == "family") {
        if (c.prop != 22 && c.prop != 23) throw InvalidInput("--prop must be 22 or 23");
        const auto fam = c.prop == 22 ? PrimeFamily::quadratic_residues : PrimeFamily::powers_of_two;
        const auto table = prime_family(fam, c.upto, c.exhaustive_upto);
        json ps = json::array(), rows = json::array();
        for (const auto& v : table) {
            ps.push_back(v.p);
            rows.push_back(verdict_json(v));
        }
        out["family"] = to_string(fam);
        out["primes"] = std::move(ps);
        out["table"] = std::move(rows);
        return ok;
    }
    if (sub == "scan") {
        if (c.p == 0) throw InvalidInput("missing required option --p");
        ScanOptions opt;
        opt.p = c.p;
        opt.size_cap = c.size_cap;
        opt.budget = c.budget;
        opt.seed = c.seed;
        opt.exhaustive_upto = c.exhaustive_upto ? c.exhaustive_upto : 7;
        std::ofstream log;
        if (!c.log_path.empty()) {
            log.open(c.log_path, std::ios::trunc);
            if (!log) throw InvalidInput("cannot write log " + c.log_path);
        }
        const auto rep = acyclic_property_scan(opt, [&](const ScanRecord& r) {
            if (log) log << io::scan_record_to_json(r).dump() << '\n';
        });
        out["p"] = rep.p;
        out["exhaustive"] = rep.exhaustive;
        out["pairs"] = rep.pairs;
        out["acyclic_found"] = rep.acyclic_found;
        out["verified_absent"] = rep.verified_absent;
        out["inconclusive"] = rep.inconclusive;
        out["budget_exhausted"] = rep.budget_exhausted;
        if (rep.failure) {
            auto f = io::scan_record_to_json(*rep.failure);
            f.erase("elapsed_us");
            out["failure"] = f;
        } else {
            out["failure"] = nullptr;
        }
        return rep.budget_exhausted || rep.inconclusive ? inconclusive : ok;
    }
    if (sub == "audit") {
        if (c.n == 0) throw InvalidInput("missing required option --n");
        const auto g = Group::cyclic(c.n);
        std::size_t subsets = 0, matchings = 0, acyclic = 0;
        json violations = json::array();
        std::vector<Element> universe;
        for (Element x = 1; x < c.n; ++x) universe.push_back(x);
        for (std::size_t k = 1; k <= c.max_size && k <= universe.size(); k += 2) {
            matchkit::detail::subsets_of_size(universe, k, [&](const std::vector<Element>& a) {
                ++subsets;
                const auto r = lemma_2_1_audit(g, a);
                matchings += r.matchings;
                acyclic += r.acyclic;
                if (!r.ok) violations.push_back({{"A", a}, {"sigma", *r.counterexample}});
                return true;
            });
        }
        out["n"] = c.n;
        out["subsets"] = subsets;
        out["matchings"] = matchings;
        out["acyclic"] = acyclic;
        out["violations"] = violations;
        if (!violations.empty()) throw InvariantViolation("acyclic matching without a fixed point");
        return ok;
    }
    throw InvalidInput("unknown subcommand primes " + sub);
}

inline json scaling_json(const Scaling& s) {
    const auto e = s.as_element();
    return {{"numerator", io::algebra_element_to_json(s.numerator)},
            {"denominator", io::algebra_element_to_json(s.denominator)},
            {"element", e ? io::algebra_element_to_json(*e) : json(nullptr)}};
}

inline int linear_cmd(const RunConfig& c, const std::string& sub, json& out) {
    need(c.pair_path, "--pair");
    const auto lp = io::linear_pair_from_json(io::read_file(c.pair_path));
    const auto a = lp.a_space();
    const auto b = lp.b_space();
    if (a.dim() != lp.a.size() || b.dim() != lp.b.size()) throw InvalidInput("A and B rows must be independent");
    if (a.dim() != b.dim()) throw InvalidInput("A and B must have the same dimension");
    if (sub == "match") {
        std::mt19937_64 rng(c.seed);
        const OrderedBasis ab(lp.ambient, lp.a);
        const auto r = match_basis(ab, b, rng, c.retries);
        out["basis_A"] = io::basis_rows(lp.ambient, lp.a);
        out["basis_B"] = r.basis ? io::basis_rows(r.basis->space().ambient(), r.basis->elements()) : json(nullptr);
        out["violator"] = r.violator ? one_based(*r.violator) : json(nullptr);
        out["attempts"] = r.attempts;
        out["fallback"] = r.used_fallback;
        if (!r.basis && !r.violator) return inconclusive;
        return ok;
    }
    if (sub == "strong") {
        const auto d = decide_strong_matching(a, b);
        out["strong_matching"] = to_string(d.status);
        out["certificate"] = d.certificate;
        out["prime"] = d.prime ? json(d.prime) : json(nullptr);
        out["witness"] = d.witness_a ? json{{"a", io::algebra_element_to_json(*d.witness_a)},
                                            {"x", io::algebra_element_to_json(*d.witness_x)}}
                                     : json(nullptr);
        return d.status == StrongStatus::undetermined ? inconclusive : ok;
    }
    if (sub == "scaling") {
        const auto s = find_scaling(a, b);
        out["alpha"] = s ? scaling_json(*s) : json(nullptr);
        return ok;
    }
    if (sub == "acyclic") {
        const auto r = find_acyclic_linear_matching(a, b);
        out["certificate"] = r.certificate;
        out["matrix"] = io::matrix_to_json(r.iso.matrix());
        out["domain_basis"] = io::matrix_to_json(a.rows());
        out["codomain_basis"] = io::matrix_to_json(b.rows());
        out["alpha"] = r.alpha ? scaling_json(*r.alpha) : json(nullptr);
        out["acyclicity_claimed"] = r.acyclicity_claimed;
        return ok;
    }
    throw InvalidInput("unknown subcommand linear " + sub);
}

inline int dispatch(const RunConfig& c, json& out) {
    const auto sp = c.command.find(' ');
    const std::string group = c.command.substr(0, sp);
    const std::string sub = sp == std::string::npos ? "" : c.command.substr(sp + 1);
    if (group == "match") return match_cmd(c, sub, out);
    if (group == "criteria" && sub == "check") return criteria_cmd(c, out);
    if (group == "relative") return relative_cmd(c, sub, out);
    if (group == "primes") return primes_cmd(c, sub, out);
    if (group == "linear") return linear_cmd(c, sub, out);
    throw InvalidInput("unknown command \"" + c.command + "\"");
}

} // namespace detail

inline RunResult run(const RunConfig& config) {
    RunResult r;
    r.report = {{"tool", kToolName}, {"version", kVersion}, {"config", config.echo()}, {"seed", config.seed}};
    auto fail = [&](int code, const char* kind, const std::exception& e) {
        r.exit_code = code;
        r.report["error"] = {{"kind", kind}, {"message", e.what()}};
    };
    try {
        if (config.cap == 0 || config.budget == 0 || config.size_cap == 0 || config.retries == 0)
            throw InvalidInput("caps and budgets must be positive");
        r.exit_code = detail::dispatch(config, r.report);
    } catch (const InvariantViolation& e) {
        fail(invariant_violation, "invariant_violation", e);
    } catch (const Inconclusive& e) {
        fail(inconclusive, "inconclusive", e);
    } catch (const InvalidInput& e) {
        fail(bad_input, "invalid_input", e);
    } catch (const std::exception& e) {
        fail(invariant_violation, "internal_error", e);
    }
    return r;
}

} // namespace matchkit::cli
