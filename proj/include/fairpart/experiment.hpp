// experiment.hpp - config-driven sweeps over (instance, seed) cells with CSV output
//
// Config is one flat JSON object:
//   model, params, graph_seed   generated instance (or graph_file for an edge list)
//   fresh_graph                 regenerate the instance per run seed (default false)
//   algorithm                   random | reject | lll | mincut2-local | mincut2-exact | core2
//   k, eps, seeds, budget
//   attacker                    auto | exact | greedy | off (default auto)
//   restarts, alpha, beta       attacker query; alpha/beta default to the algorithm's guarantee
//   output                      CSV path, used by the CLI when --out is absent
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fairpart/audit.hpp"
#include "fairpart/errors.hpp"
#include "fairpart/generators.hpp"
#include "fairpart/graph_io.hpp"
#include "fairpart/guarantees.hpp"
#include "fairpart/lll.hpp"
#include "fairpart/mincut2.hpp"
#include "fairpart/samplers.hpp"

namespace fairpart {

enum class Algorithm { random, reject, lll, mincut2_local, mincut2_exact, core2 };

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::random: return "random";
        case Algorithm::reject: return "reject";
        case Algorithm::lll: return "lll";
        case Algorithm::mincut2_local: return "mincut2-local";
        case Algorithm::mincut2_exact: return "mincut2-exact";
        case Algorithm::core2: return "core2";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
    for (auto a : {Algorithm::random, Algorithm::reject, Algorithm::lll, Algorithm::mincut2_local,
                   Algorithm::mincut2_exact, Algorithm::core2})
        if (s == to_string(a)) return a;
    return std::nullopt;
}

inline bool is_two_part(Algorithm a) {
    return a == Algorithm::mincut2_local || a == Algorithm::mincut2_exact || a == Algorithm::core2;
}

// Malformed or inconsistent config; maps to the usage exit code.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ExperimentConfig {
    std::string model;
    std::vector<double> params;
    std::uint64_t graph_seed = 0;
    std::string graph_file;
    bool fresh_graph = false;

    Algorithm algorithm = Algorithm::lll;
    std::size_t k = 2;
    double eps = 0.0;
    std::vector<std::uint64_t> seeds;
    std::optional<std::size_t> budget;

    std::optional<AttackMode> attacker = AttackMode::automatic;  // nullopt = off
    std::size_t restarts = 64;
    std::optional<double> alpha;
    std::optional<double> beta;

    std::string output;
};

namespace detail {

template <class T>
T config_field(const nlohmann::json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known = {
        "model", "params", "graph_seed", "graph_file", "fresh_graph", "algorithm", "k", "eps",
        "seeds", "budget", "attacker", "restarts", "alpha", "beta", "output"};
    for (const auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config field '" + key + "'");

    using detail::config_field;
    ExperimentConfig c;
    if (doc.contains("graph_file")) c.graph_file = config_field<std::string>(doc, "graph_file");
    if (doc.contains("model")) {
        c.model = config_field<std::string>(doc, "model");
        c.params = config_field<std::vector<double>>(doc, "params");
    }
    if (c.model.empty() == c.graph_file.empty())
        throw ConfigError("config needs exactly one of 'model' or 'graph_file'");
    if (doc.contains("graph_seed")) c.graph_seed = config_field<std::uint64_t>(doc, "graph_seed");
    if (doc.contains("fresh_graph")) c.fresh_graph = config_field<bool>(doc, "fresh_graph");
    if (c.fresh_graph && c.model.empty()) throw ConfigError("fresh_graph needs a generated model");

    const auto algo = parse_algorithm(config_field<std::string>(doc, "algorithm"));
    if (!algo) throw ConfigError("unknown algorithm '" + doc["algorithm"].get<std::string>() + "'");
    c.algorithm = *algo;
    c.k = config_field<std::size_t>(doc, "k");
    if (c.k == 0) throw ConfigError("k must be at least 1");
    if (is_two_part(c.algorithm) && c.k != 2) throw ConfigError("mincut2 algorithms need k = 2");
    if (doc.contains("eps")) c.eps = config_field<double>(doc, "eps");
    if (c.algorithm == Algorithm::lll || c.algorithm == Algorithm::core2)
        if (!(c.eps > 0.0 && c.eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
    c.seeds = config_field<std::vector<std::uint64_t>>(doc, "seeds");
    if (doc.contains("budget")) {
        c.budget = config_field<std::size_t>(doc, "budget");
        if (*c.budget == 0) throw ConfigError("budget must be at least 1");
    }
    if (doc.contains("attacker")) {
        const auto mode = config_field<std::string>(doc, "attacker");
        if (mode == "auto") c.attacker = AttackMode::automatic;
        else if (mode == "exact") c.attacker = AttackMode::exact;
        else if (mode == "greedy") c.attacker = AttackMode::greedy;
        else if (mode == "off") c.attacker = std::nullopt;
        else throw ConfigError("unknown attacker '" + mode + "'");
    }
    if (doc.contains("restarts")) c.restarts = config_field<std::size_t>(doc, "restarts");
    if (doc.contains("alpha")) c.alpha = config_field<double>(doc, "alpha");
    if (doc.contains("beta")) c.beta = config_field<double>(doc, "beta");
    if (doc.contains("output")) c.output = config_field<std::string>(doc, "output");
    return c;
}

struct ExperimentRow {
    std::string instance;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double eps = 0.0;
    std::size_t delta = 0;
    std::string algorithm;
    std::string status;  // ok | exhausted | refused
    std::size_t rounds = 0;
    std::optional<std::size_t> cut;
    std::optional<std::size_t> max_envy;
    double ef_bound = 0.0;
    double core_alpha = 0.0;
    double core_beta = 0.0;
    std::string attacker_verdict;  // none | blocked | refused | off | skipped
    double runtime = 0.0;          // seconds; excluded from reproducibility checks

    // Set when the algorithm carries a desirability guarantee and produced output.
    std::optional<bool> desirable;
    bool envy_guaranteed = false;
    std::string note;
};

inline const char* kCsvHeader =
    "instance,seed,n,k,eps,delta,algorithm,status,rounds,cut,max_envy,ef_bound,core_alpha,"
    "core_beta,attacker_verdict,runtime";

namespace detail {

inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string instance_name(const ExperimentConfig& c, std::uint64_t graph_seed) {
    if (!c.graph_file.empty()) return c.graph_file;
    std::string s = c.model + "(";
    for (std::size_t i = 0; i < c.params.size(); ++i) s += (i ? ";" : "") + fmt_double(c.params[i]);
    return s + ")@" + std::to_string(graph_seed);
}

// Edges whose endpoints sit in different parts.
inline std::size_t crossing_edges(const Graph& g, const Partition& x) {
    std::size_t cut = 0;
    for (const auto& [u, v] : g.edges()) cut += x.part_of(u) != x.part_of(v);
    return cut;
}

}  // namespace detail

inline std::string csv_line(const ExperimentRow& r) {
    using detail::fmt_double;
    auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
    std::string line;
    line += r.instance + ',' + std::to_string(r.seed) + ',' + std::to_string(r.n) + ',' +
            std::to_string(r.k) + ',' + fmt_double(r.eps) + ',' + std::to_string(r.delta) + ',' +
            r.algorithm + ',' + r.status + ',' + std::to_string(r.rounds) + ',' + opt(r.cut) + ',' +
            opt(r.max_envy) + ',' + fmt_double(r.ef_bound) + ',' + fmt_double(r.core_alpha) + ',' +
            fmt_double(r.core_beta) + ',' + r.attacker_verdict + ',';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.runtime);
    return line + buf;
}

// Loads or generates the graph for one run seed.
inline Graph experiment_graph(const ExperimentConfig& c, std::uint64_t run_seed,
                              std::uint64_t& graph_seed) {
    if (!c.graph_file.empty()) {
        std::ifstream in(c.graph_file);
        if (!in) throw ConfigError("cannot open graph file '" + c.graph_file + "'");
        graph_seed = 0;
        return load_edge_list(in).graph;
    }
    graph_seed = c.fresh_graph ? mix_seed(c.graph_seed, run_seed) : c.graph_seed;
    try {
        return gen::generate(c.model, c.params, graph_seed);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

// One (instance, seed) cell. Refusals are recorded in the row rather than thrown.
inline ExperimentRow run_cell(const ExperimentConfig& c, const Graph& g, const std::string& instance,
                              std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.instance = instance;
    row.seed = seed;
    row.n = g.size();
    row.k = c.k;
    row.eps = c.eps;
    row.delta = g.max_degree();
    row.algorithm = to_string(c.algorithm);
    row.status = "ok";

    const std::size_t n = g.size();
    const Regime regime = c.algorithm == Algorithm::lll ? Regime::eps : Regime::balanced;
    std::optional<Partition> x;
    try {
        const auto bundle = guarantee_bundle(regime, row.delta, c.k, std::max<std::size_t>(n, 1),
                                             regime == Regime::eps ? c.eps : 0.0);
        row.ef_bound = bundle.ef_radius;
        row.core_alpha = bundle.core_alpha;
        row.core_beta = bundle.core_beta;
        switch (c.algorithm) {
            case Algorithm::random:
                x = sample_uniform(n, c.k, seed);
                row.rounds = 1;
                break;
            case Algorithm::reject: {
                auto r = rejection_sample_desirable(g, c.k, c.budget.value_or(default_rejection_budget(n, c.k)), seed);
                row.rounds = r.stats.attempts;
                if (r.partition) {
                    x = std::move(r.partition);
                    row.envy_guaranteed = true;
                } else {
                    row.status = "exhausted";
                }
                break;
            }
            case Algorithm::lll: {
                MoserTardosOptions opt;
                opt.round_budget = c.budget;
                auto r = moser_tardos(g, c.k, c.eps, seed, opt);
                row.rounds = r.trace.total_rounds;
                if (r.success) {
                    x = std::move(r.partition);
                    row.envy_guaranteed = true;
                } else {
                    row.status = "exhausted";
                }
                break;
            }
            case Algorithm::mincut2_local: {
                auto r = local_min_cut(g, seed);
                row.rounds = r.report.swaps_performed;
                x = std::move(r.partition);
                row.core_alpha = n >= 7 ? CoreFactors::local_factor(n) : 1.0;
                row.core_beta = 0.0;
                break;
            }
            case Algorithm::mincut2_exact: {
                auto r = exact_min_balanced_cut(g);
                x = std::move(r.partition);
                row.core_alpha = n >= 7 ? CoreFactors::exact_factor(n) : 1.0;
                row.core_beta = 0.0;
                break;
            }
            case Algorithm::core2: {
                auto r = two_core_partition(g, c.eps, seed);
                x = std::move(r.partition);
                row.core_alpha = r.guaranteed_alpha;
                row.core_beta = 0.0;
                break;
            }
        }
    } catch (const Refusal& e) {
        row.status = "refused";
        row.note = e.what();
    }
    if (c.alpha) row.core_alpha = *c.alpha;
    if (c.beta) row.core_beta = *c.beta;

    if (!x) {
        row.attacker_verdict = "skipped";
    } else {
        row.cut = detail::crossing_edges(g, *x);
        row.max_envy = envy_audit(g, *x).max_envy;
        if (row.envy_guaranteed)
            row.desirable = check_desirability(g, *x, regime, regime == Regime::eps ? c.eps : 0.0).satisfied;
        if (!c.attacker) {
            row.attacker_verdict = "off";
        } else {
            const auto q = regime == Regime::eps
                               ? CoreQuery::eps_balanced(row.core_alpha, row.core_beta, n, c.k, c.eps)
                               : CoreQuery::balanced(row.core_alpha, row.core_beta, n, c.k);
            GreedyOptions greedy;
            greedy.restarts = c.restarts;
            greedy.seed = mix_seed(seed, 0xa77ac4);
            row.attacker_verdict = to_string(attack(g, *x, q, *c.attacker, greedy).verdict);
        }
    }
    row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

// FAIRPART_THREADS caps the worker count; unset or 0 means hardware concurrency.
inline std::size_t experiment_threads() {
    std::size_t cap = 0;
    if (const char* env = std::getenv("FAIRPART_THREADS")) cap = std::strtoull(env, nullptr, 10);
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    return cap;
}

// Runs every seed. Rows come back in seed-list order whatever the thread count.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& c,
                                                 std::size_t threads = experiment_threads()) {
    std::vector<ExperimentRow> rows(c.seeds.size());
    if (c.seeds.empty()) return rows;

    std::optional<Graph> shared;
    std::uint64_t shared_seed = 0;
    if (!c.fresh_graph) shared = experiment_graph(c, 0, shared_seed);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= c.seeds.size()) return;
            try {
                const std::uint64_t seed = c.seeds[i];
                if (shared) {
                    rows[i] = run_cell(c, *shared, detail::instance_name(c, shared_seed), seed);
                } else {
                    std::uint64_t gs = 0;
                    const Graph g = experiment_graph(c, seed, gs);
                    rows[i] = run_cell(c, g, detail::instance_name(c, gs), seed);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = c.seeds.size();
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, c.seeds.size());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

inline void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
}

struct SummaryCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Pass/fail checks for whatever the sweep exercised.
inline std::vector<SummaryCheck> summarize(const ExperimentConfig& c,
                                           const std::vector<ExperimentRow>& rows) {
    std::vector<SummaryCheck> checks;
    std::size_t ok = 0, desirable = 0, guaranteed = 0, envy_ok = 0, attacked = 0, clean = 0;
    double rounds = 0.0;
    for (const auto& r : rows) {
        ok += r.status == "ok";
        rounds += static_cast<double>(r.rounds);
        if (r.desirable) {
            ++guaranteed;
            desirable += *r.desirable;
        }
        if (r.envy_guaranteed && r.max_envy)
            envy_ok += static_cast<double>(*r.max_envy) <= r.ef_bound + kTolerance;
        if (r.attacker_verdict == "none" || r.attacker_verdict == "blocked") {
            ++attacked;
            clean += r.attacker_verdict == "none";
        }
    }
    const std::size_t total = rows.size();
    auto frac = [](std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); };
    checks.push_back({"completed", ok == total, frac(ok, total) + " runs produced a partition"});
    if (guaranteed > 0) {
        checks.push_back({"desirable", desirable == guaranteed, frac(desirable, guaranteed) + " pass re-audit"});
        checks.push_back({"envy_within_bound", envy_ok == guaranteed, frac(envy_ok, guaranteed)});
    }
    if (attacked > 0)
        checks.push_back({"core_attack_clean", clean == attacked, frac(clean, attacked) + " without a blocking set"});
    if (c.algorithm == Algorithm::lll && total > 0 && rows.front().n > 0) {
        const double mean = rounds / static_cast<double>(total);
        const double expected = LLLWeights::make(c.k, std::max<std::size_t>(rows.front().delta, 1), c.eps)
                                    .expected_resamplings(rows.front().n);
        checks.push_back({"mean_rounds", mean <= 10.0 * expected,
                          "mean " + detail::fmt_double(mean) + ", expected " + detail::fmt_double(expected)});
    }
    return checks;
}

inline void write_summary(const ExperimentConfig& c, const std::vector<ExperimentRow>& rows,
                          std::ostream& out) {
    out << "algorithm " << to_string(c.algorithm) << ", k=" << c.k << ", eps=" << c.eps << ", "
        << rows.size() << " runs\n";
    out << "seeds:";
    for (auto s : c.seeds) out << ' ' << s;
    out << '\n';
    for (const auto& r : rows)
        if (!r.note.empty()) out << "seed " << r.seed << ": " << r.note << '\n';
    for (const auto& check : summarize(c, rows))
        out << (check.pass ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
}

}  // namespace fairpart
