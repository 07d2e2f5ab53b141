// cli.hpp - subcommands behind the fairpart tool
//
//   gen         write a generated graph as an edge list
//   run         partition a graph with one algorithm
//   audit       envy and core audit of a stored partition
//   experiment  config-driven sweep, CSV out
//   bounds      print the guarantee bundle for given parameters
//
// Exit codes: 0 ok, 1 usage or malformed input, 2 refusal or failed
// precondition, 3 internal invariant violation.
#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpart/audit.hpp"
#include "fairpart/errors.hpp"
#include "fairpart/experiment.hpp"
#include "fairpart/generators.hpp"
#include "fairpart/graph_io.hpp"
#include "fairpart/guarantees.hpp"
#include "fairpart/lll.hpp"
#include "fairpart/mincut2.hpp"
#include "fairpart/partition_io.hpp"
#include "fairpart/samplers.hpp"

namespace fairpart {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRefused = 2, kExitInvariant = 3 };

namespace cli {

class UsageError : public Error {
public:
    using Error::Error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return load_edge_list(in).graph;
}

// Writes to path, or to `fallback` when path is empty or "-".
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    write(file);
}

inline nlohmann::json bundle_to_json(const GuaranteeBundle& b) {
    return {{"regime", to_string(b.regime)}, {"n", b.n},
            {"k", b.k},
            {"delta", b.max_degree},
            {"eps", b.eps},
            {"min_eps", b.min_eps},
            {"degree_threshold", b.degree_threshold},
            {"ef_radius", b.ef_radius},
            {"core_alpha", b.core_alpha},
            {"core_beta", b.core_beta}};
}

struct GenArgs {
    std::string model;
    std::vector<double> params;
    std::uint64_t seed = 0;
    std::string out;
};

inline int do_gen(const GenArgs& a, std::ostream& out) {
    Graph g;
    try {
        g = gen::generate(a.model, a.params, a.seed);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    emit(a.out, out, [&](std::ostream& s) { write_edge_list(g, s); });
    return kExitOk;
}

struct RunArgs {
    std::string graph;
    std::string algo;
    std::size_t k = 2;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::size_t budget = 0;  // 0 = algorithm default
    std::string out;
    std::string report;
    bool full_trace = true;
};

inline int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    const auto algo = parse_algorithm(a.algo);
    if (!algo) throw UsageError("unknown algorithm '" + a.algo + "'");
    if (is_two_part(*algo) && a.k != 2) throw UsageError(a.algo + " needs --k 2");
    const Graph g = read_graph(a.graph);
    const std::size_t n = g.size();
    nlohmann::json report;
    report["algorithm"] = a.algo;
    report["n"] = n;
    report["k"] = a.k;
    report["eps"] = a.eps;
    report["seed"] = a.seed;
    std::optional<Partition> x;
    double file_eps = 0.0;
    int code = kExitOk;

    switch (*algo) {
        case Algorithm::random:
            x = sample_uniform(n, a.k, a.seed);
            break;
        case Algorithm::reject: {
            const std::size_t budget = a.budget ? a.budget : default_rejection_budget(n, a.k);
            auto r = rejection_sample_desirable(g, a.k, budget, a.seed);
            report["attempts"] = r.stats.attempts;
            report["balanced_hits"] = r.stats.balanced_hits;
            report["condition_ii_failures"] = r.stats.condition_ii_failures;
            report["success"] = r.stats.accepted;
            x = std::move(r.partition);
            break;
        }
        case Algorithm::lll: {
            MoserTardosOptions opt;
            if (a.budget) opt.round_budget = a.budget;
            auto r = moser_tardos(g, a.k, a.eps, a.seed, opt);
            report["success"] = r.success;
            report["trace"] = trace_to_json(r.trace);
            if (r.success) x = std::move(r.partition);
            file_eps = a.eps;
            break;
        }
        case Algorithm::mincut2_local:
        case Algorithm::mincut2_exact: {
            auto r = *algo == Algorithm::mincut2_local ? local_min_cut(g, a.seed) : exact_min_balanced_cut(g);
            report["cut"] = {{"cut_value", r.report.cut_value},
                             {"locally_minimal", r.report.locally_minimal},
                             {"swaps_performed", r.report.swaps_performed}};
            x = std::move(r.partition);
            break;
        }
        case Algorithm::core2: {
            auto r = two_core_partition(g, a.eps, a.seed);
            report["provenance"] = to_string(r.provenance);
            report["guaranteed_alpha"] = r.guaranteed_alpha;
            report["cut"] = {{"cut_value", cut_value(g, r.partition)}};
            x = std::move(r.partition);
            break;
        }
    }
    if (!x) {
        err << "no partition within the budget\n";
        code = kExitRefused;
    } else {
        emit(a.out, out, [&](std::ostream& s) { s << serialize_partition(*x, file_eps); });
    }
    if (!a.report.empty())
        emit(a.report, out, [&](std::ostream& s) { s << report.dump(2) << '\n'; });
    return code;
}

struct AuditArgs {
    std::string graph;
    std::string partition;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::string attacker = "auto";
    std::size_t restarts = 64;
    std::uint64_t seed = 0;
    std::string out;
};

inline int do_audit(const AuditArgs& a, std::ostream& out) {
    const Graph g = read_graph(a.graph);
    const auto file = parse_partition(read_file(a.partition));
    const Partition& x = file.partition;
    if (x.n() != g.size())
        throw UsageError("partition has " + std::to_string(x.n()) + " nodes, graph has " +
                         std::to_string(g.size()));
    AttackMode mode;
    if (a.attacker == "auto") mode = AttackMode::automatic;
    else if (a.attacker == "exact") mode = AttackMode::exact;
    else if (a.attacker == "greedy") mode = AttackMode::greedy;
    else throw UsageError("unknown attacker '" + a.attacker + "'");

    const Regime regime = file.eps > 0.0 ? Regime::eps : Regime::balanced;
    const auto bundle = guarantee_bundle(regime, g.max_degree(), x.k(), std::max<std::size_t>(g.size(), 1), file.eps);
    const double alpha = a.alpha.value_or(bundle.core_alpha);
    const double beta = a.beta.value_or(bundle.core_beta);
    const auto q = CoreQuery::eps_balanced(alpha, beta, g.size(), x.k(), file.eps);
    GreedyOptions greedy;
    greedy.restarts = a.restarts;
    greedy.seed = a.seed;
    const auto envy = envy_audit(g, x);
    const auto outcome = attack(g, x, q, mode, greedy);

    nlohmann::json report;
    report["ef"] = envy_to_json(envy);
    report["ef"]["bound"] = bundle.ef_radius;
    report["core"] = query_to_json(q);
    report["verdict"] = to_string(outcome.verdict);
    report["method"] = outcome.method;
    report["certificate"] = outcome.certificate ? certificate_to_json(*outcome.certificate) : nlohmann::json();
    if (!outcome.note.empty()) report["note"] = outcome.note;
    emit(a.out, out, [&](std::ostream& s) { s << report.dump(2) << '\n'; });
    return outcome.verdict == AttackVerdict::refused ? kExitRefused : kExitOk;
}

struct ExperimentArgs {
    std::string config;
    std::string out;
    std::string summary;
};

inline int do_experiment(const ExperimentArgs& a, std::ostream& out) {
    ExperimentConfig c;
    try {
        c = parse_experiment_config(read_file(a.config));
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const auto rows = run_experiment(c);
    const std::string csv_path = a.out.empty() ? c.output : a.out;
    emit(csv_path, out, [&](std::ostream& s) { write_csv(rows, s); });
    emit(a.summary, out, [&](std::ostream& s) { write_summary(c, rows, s); });
    return kExitOk;
}

struct BoundsArgs {
    std::string regime = "balanced";
    std::size_t delta = 0;
    std::size_t k = 2;
    std::size_t n = 0;
    double eps = 0.0;
    bool json = false;
};

inline int do_bounds(const BoundsArgs& a, std::ostream& out) {
    Regime regime;
    if (a.regime == "balanced") regime = Regime::balanced;
    else if (a.regime == "eps") regime = Regime::eps;
    else throw UsageError("regime must be 'balanced' or 'eps'");
    const auto b = guarantee_bundle(regime, a.delta, a.k, a.n, a.eps);
    const auto doc = bundle_to_json(b);
    if (a.json) {
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    for (const char* key : {"regime", "n", "k", "delta", "eps", "min_eps", "degree_threshold",
                            "ef_radius", "core_alpha", "core_beta"}) {
        out << key << " = ";
        const auto& v = doc[key];
        if (v.is_number_float()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
            out << buf;
        } else if (v.is_string()) {
            out << v.get<std::string>();
        } else {
            out << v.dump();
        }
        out << '\n';
    }
    return kExitOk;
}

}  // namespace cli

// argv without the program name.
inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fair graph partitioning: desirability sampling, resampling, min-cut cores, audits",
                 "fairpart"};
    app.require_subcommand(1);

    cli::GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
    gen->add_option("--model", gen_args.model, "complete|path|cycle|grid|regular|gnp|cliques")->required();
    gen->add_option("--params", gen_args.params, "model parameters")->delimiter(',')->required();
    gen->add_option("--seed", gen_args.seed);
    gen->add_option("--out", gen_args.out, "edge list path (default stdout)");

    cli::RunArgs run_args;
    auto* run = app.add_subcommand("run", "partition a graph");
    run->add_option("--graph", run_args.graph, "edge list")->required();
    run->add_option("--algo", run_args.algo, "random|reject|lll|mincut2-local|mincut2-exact|core2")->required();
    run->add_option("--k", run_args.k);
    run->add_option("--eps", run_args.eps);
    run->add_option("--seed", run_args.seed);
    run->add_option("--budget", run_args.budget, "attempts or rounds (0 = default)");
    run->add_option("--out", run_args.out, "partition file (default stdout)");
    run->add_option("--report", run_args.report, "JSON run report");

    cli::AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "envy and core audit of a partition");
    audit->add_option("--graph", audit_args.graph)->required();
    audit->add_option("--partition", audit_args.partition)->required();
    audit->add_option("--alpha", audit_args.alpha);
    audit->add_option("--beta", audit_args.beta);
    audit->add_option("--attacker", audit_args.attacker, "auto|exact|greedy");
    audit->add_option("--restarts", audit_args.restarts);
    audit->add_option("--seed", audit_args.seed);
    audit->add_option("--out", audit_args.out, "report path (default stdout)");

    cli::ExperimentArgs exp_args;
    auto* exp = app.add_subcommand("experiment", "run a config sweep");
    exp->add_option("--config", exp_args.config)->required();
    exp->add_option("--out", exp_args.out, "CSV path (default: config 'output', else stdout)");
    exp->add_option("--summary", exp_args.summary, "summary path (default stdout)");

    cli::BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "print the guarantee bundle");
    bounds->add_option("--regime", bounds_args.regime, "balanced|eps");
    bounds->add_option("--delta", bounds_args.delta)->required();
    bounds->add_option("--k", bounds_args.k)->required();
    bounds->add_option("--n", bounds_args.n)->required();
    bounds->add_option("--eps", bounds_args.eps);
    bounds->add_flag("--json", bounds_args.json);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cli::do_gen(gen_args, out);
        if (*run) return cli::do_run(run_args, out, err);
        if (*audit) return cli::do_audit(audit_args, out);
        if (*exp) return cli::do_experiment(exp_args, out);
        if (*bounds) return cli::do_bounds(bounds_args, out);
    } catch (const cli::UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Refusal& e) {
        err << "refused: " << e.what() << '\n';
        return kExitRefused;
    } catch (const DomainError& e) {
        err << "precondition failed: " << e.what() << '\n';
        return kExitRefused;
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitUsage;
}

}  // namespace fairpart
