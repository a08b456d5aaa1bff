#include "matchkit/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using matchkit::cli::RunConfig;

struct Sub {
    CLI::App* app;
    std::string command;
};

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string output;
    CLI::App app{"matchkit: matchings in groups and field extensions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", matchkit::cli::kVersion);

    std::vector<Sub> leaves;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto* s = parent->add_subcommand(name, help);
        leaves.push_back({s, parent->get_name() + " " + name});
        s->add_option("--seed", cfg.seed, "random seed");
        s->add_option("--output,-o", output, "write the report here instead of stdout");
        return s;
    };

    auto* match = app.add_subcommand("match", "matchings between subsets of a group");
    match->require_subcommand(1);
    for (auto [name, help] : {std::pair{"find", "find a matching or a Hall violator"},
                              std::pair{"enumerate", "list all matchings"},
                              std::pair{"acyclic", "search for an acyclic matching"}}) {
        auto* s = leaf(match, name, help);
        s->add_option("--pair", cfg.pair_path, "subset pair JSON")->required();
        s->add_option("--cap", cfg.cap, "maximum number of matchings examined");
    }

    auto* criteria = app.add_subcommand("criteria", "sufficient conditions for matchability");
    criteria->require_subcommand(1);
    leaf(criteria, "check", "coset-freeness and the cyclic-coset condition")
        ->add_option("--pair", cfg.pair_path, "subset pair JSON")
        ->required();

    auto* relative = app.add_subcommand("relative", "matchings of tuples relative to a normal subgroup");
    relative->require_subcommand(1);
    for (auto name : {"find", "transfer"})
        leaf(relative, name, std::string("relative ") + name)
            ->add_option("--problem", cfg.problem_path, "problem JSON")
            ->required();

    auto* primes = app.add_subcommand("primes", "prime-order families without acyclic matchings");
    primes->require_subcommand(1);
    auto* family = leaf(primes, "family", "certificate table for a prime family");
    family->add_option("--prop", cfg.prop, "22 (quadratic residues) or 23 (powers of two)")->required();
    family->add_option("--upto", cfg.upto, "largest prime considered");
    family->add_option("--exhaustive-upto", cfg.exhaustive_upto, "also enumerate matchings for small primes");
    auto* scan = leaf(primes, "scan", "search for pairs without an acyclic matching");
    scan->add_option("--p", cfg.p, "prime")->required();
    scan->add_option("--size-cap", cfg.size_cap, "largest subset size");
    scan->add_option("--budget", cfg.budget, "total matchings examined");
    scan->add_option("--exhaustive-upto", cfg.exhaustive_upto, "enumerate every pair when p is at most this");
    scan->add_option("--log", cfg.log_path, "JSONL log of pair results");
    auto* audit = leaf(primes, "audit", "every acyclic matching A -> A has a fixed point");
    audit->add_option("--n", cfg.n, "cyclic group order")->required();
    audit->add_option("--max-size", cfg.max_size, "largest odd subset size");

    auto* linear = app.add_subcommand("linear", "matchings between subspaces of a field extension");
    linear->require_subcommand(1);
    for (auto name : {"match", "strong", "scaling", "acyclic"}) {
        auto* s = leaf(linear, name, std::string("linear ") + name);
        s->add_option("--pair", cfg.pair_path, "subspace pair JSON")->required();
        if (std::string(name) == "match") s->add_option("--retries", cfg.retries, "random attempts before the fallback");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : matchkit::cli::bad_input;
    }

    for (const auto& l : leaves)
        if (l.app->parsed()) cfg.command = l.command;

    matchkit::cli::RunResult result;
    try {
        cfg.threads = matchkit::cli::thread_cap_from_env();
        result = matchkit::cli::run(cfg);
    } catch (const matchkit::InvalidInput& e) {
        result.exit_code = matchkit::cli::bad_input;
        result.report = {{"tool", matchkit::cli::kToolName},
                         {"version", matchkit::cli::kVersion},
                         {"config", cfg.echo()},
                         {"seed", cfg.seed},
                         {"error", {{"kind", "invalid_input"}, {"message", e.what()}}}};
    }
    const auto text = result.report.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::trunc);
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            return matchkit::cli::bad_input;
        }
        out << text;
    }
    return result.exit_code;
}
