// lll.hpp - Moser-Tardos resampling for eps-desirable partitions
//
// Bad events over a uniform random partition:
//   global  - the partition is not eps-balanced;
//   node i  - deg(i) >= 12 k ln(Delta k / eps) and some part's utility for i
//             leaves deg/k +- 4 sqrt((deg/k) ln(Delta k / eps)).
// While an event holds it is resampled: the global event redraws the whole
// partition, a node event redraws i and all of its neighbors. The global event
// is checked first, then node events in ascending id.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairpart/errors.hpp"
#include "fairpart/guarantees.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/random.hpp"

namespace fairpart {

struct EventStatus {
    bool global_bad = false;
    std::vector<NodeId> bad_nodes;  // ascending

    bool any() const noexcept { return global_bad || !bad_nodes.empty(); }
    friend bool operator==(const EventStatus&, const EventStatus&) = default;
};

// Weights for the asymmetric local lemma: x_node = 1 / (k Delta^2 / eps^2 + 1)
// for every node event and 1/2 for the global event.
struct LLLWeights {
    double x_node = 0.0;
    double x_global = 0.5;

    static LLLWeights make(std::size_t k, std::size_t max_degree, double eps) {
        detail::require_eps(eps);
        const double d = static_cast<double>(std::max<std::size_t>(max_degree, 1));
        return {1.0 / (static_cast<double>(k) * d * d / (eps * eps) + 1.0), 0.5};
    }

    // sum_v x_v / (1 - x_v) + x_G / (1 - x_G) = n eps^2 / (k Delta^2) + 1
    double expected_resamplings(std::size_t n) const {
        return static_cast<double>(n) * x_node / (1.0 - x_node) + x_global / (1.0 - x_global);
    }
};

enum class EventKind { global, node };

struct ResampleRound {
    EventKind kind = EventKind::global;
    NodeId node = 0;  // meaningful for node events
    // node events: {i} and its neighbors, ascending. Global rounds redraw
    // every node and leave this empty.
    std::vector<NodeId> resampled;
};

struct ResampleTrace {
    std::vector<ResampleRound> rounds;
    std::size_t total_rounds = 0;
};

inline nlohmann::json trace_to_json(const ResampleTrace& trace) {
    nlohmann::json doc;
    doc["total_rounds"] = trace.total_rounds;
    doc["rounds"] = nlohmann::json::array();
    for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
        const auto& round = trace.rounds[r];
        nlohmann::json row;
        row["round"] = r + 1;
        row["event"] = round.kind == EventKind::global ? "global" : "node";
        if (round.kind == EventKind::node) {
            row["node"] = round.node;
            row["resampled"] = round.resampled;
        }
        doc["rounds"].push_back(std::move(row));
    }
    return doc;
}

// Full evaluation of every bad event on a fixed partition.
inline EventStatus evaluate_events(const Graph& g, const Partition& x, std::size_t k, double eps) {
    detail::require_eps(eps);
    if (x.k() != k || x.n() != g.size()) throw DomainError("partition does not match graph and k");
    EventStatus status;
    status.global_bad = !is_eps_balanced(x, BalanceSpec::make(g.size(), k, eps));
    const std::size_t delta = g.max_degree();
    for (NodeId i = 0; i < g.size(); ++i) {
        const auto window = eps_desirable_interval(g.degree(i), k, delta, eps);
        if (!window) continue;
        const auto counts = part_utilities(g, x, i);
        for (std::size_t c : counts)
            if (!window->contains(static_cast<double>(c))) {
                status.bad_nodes.push_back(i);
                break;
            }
    }
    return status;
}

// 1000 (n eps^2 / (k Delta^2) + 1) + 1000
inline std::size_t default_round_budget(std::size_t n, std::size_t k, std::size_t max_degree,
                                        double eps) {
    const double expected = LLLWeights::make(k, max_degree, eps).expected_resamplings(n);
    return static_cast<std::size_t>(std::ceil(1000.0 * expected)) + 1000;
}

struct MoserTardosOptions {
    std::optional<std::size_t> round_budget;  // default_round_budget when unset
    // Re-evaluate every event from scratch after each round and compare with
    // the incremental bookkeeping.
    bool verify_incremental = false;
    // Skip the eps >= min_eps(k, n) check. Small or sparse instances can still
    // converge below the existence threshold, they just lose the guarantee.
    bool allow_below_min_eps = false;
    // Starting partition; a uniform draw when unset.
    std::optional<Partition> initial;
};

struct MoserTardosResult {
    bool success = false;
    // the eps-desirable output on success, the last state otherwise
    Partition partition;
    ResampleTrace trace;
};

namespace detail {

class ResampleState {
public:
    ResampleState(const Graph& g, std::size_t k, double eps)
        : g_(g), k_(k), spec_(BalanceSpec::make(g.size(), k, eps)), assign_(g.size()),
          counts_(g.size() * k), sizes_(k), windows_(g.size()) {
        const std::size_t delta = g.max_degree();
        for (NodeId i = 0; i < g.size(); ++i)
            windows_[i] = eps_desirable_interval(g.degree(i), k, delta, eps);
    }

    void redraw_all(Rng& rng) {
        for (auto& a : assign_) a = static_cast<PartId>(rng.below(k_));
        rebuild();
    }

    void load(const Partition& x) {
        for (NodeId v = 0; v < g_.size(); ++v) assign_[v] = x.part_of(v);
        rebuild();
    }

    // Redraws the given nodes in order; returns after refreshing affected events.
    void redraw(std::span<const NodeId> nodes, Rng& rng) {
        touched_.clear();
        for (NodeId v : nodes) {
            const PartId old_part = assign_[v];
            const auto new_part = static_cast<PartId>(rng.below(k_));
            if (new_part == old_part) continue;
            assign_[v] = new_part;
            --sizes_[old_part];
            ++sizes_[new_part];
            for (NodeId w : g_.neighbors(v)) {
                --counts_[w * k_ + old_part];
                ++counts_[w * k_ + new_part];
                touched_.push_back(w);
            }
        }
        for (NodeId w : touched_) refresh(w);
    }

    bool global_bad() const {
        for (std::size_t s : sizes_)
            if (!spec_.admits(s)) return true;
        return false;
    }

    const std::set<NodeId>& bad_nodes() const noexcept { return bad_; }

    EventStatus status() const { return {global_bad(), {bad_.begin(), bad_.end()}}; }

    Partition snapshot() const { return Partition(k_, assign_); }

private:
    void rebuild() {
        std::fill(counts_.begin(), counts_.end(), 0);
        std::fill(sizes_.begin(), sizes_.end(), 0);
        for (NodeId v = 0; v < g_.size(); ++v) {
            ++sizes_[assign_[v]];
            for (NodeId w : g_.neighbors(v)) ++counts_[w * k_ + assign_[v]];
        }
        bad_.clear();
        for (NodeId v = 0; v < g_.size(); ++v) refresh(v);
    }

    void refresh(NodeId i) {
        const auto& window = windows_[i];
        if (!window) return;
        bool bad = false;
        for (std::size_t j = 0; j < k_ && !bad; ++j)
            bad = !window->contains(static_cast<double>(counts_[i * k_ + j]));
        if (bad)
            bad_.insert(i);
        else
            bad_.erase(i);
    }

    const Graph& g_;
    std::size_t k_;
    BalanceSpec spec_;
    std::vector<PartId> assign_;
    std::vector<std::size_t> counts_;  // counts_[i * k + j] = u_i(X_j)
    std::vector<std::size_t> sizes_;
    std::vector<std::optional<Interval>> windows_;
    std::set<NodeId> bad_;
    std::vector<NodeId> touched_;
};

}  // namespace detail

// Runs the resampling loop. Throws Refusal when eps < min_eps(k, n) or n < k;
// an exhausted budget is reported with success == false and the full trace.
inline MoserTardosResult moser_tardos(const Graph& g, std::size_t k, double eps, std::uint64_t seed,
                                      const MoserTardosOptions& options = {}) {
    detail::require_eps(eps);
    const std::size_t n = g.size();
    if (k == 0 || n < k) throw Refusal("resampling needs n >= k >= 1");
    const double floor_eps = min_eps(k, n);
    if (!options.allow_below_min_eps && eps < floor_eps - kTolerance)
        throw Refusal("eps=" + std::to_string(eps) + " is below the existence threshold " +
                      std::to_string(floor_eps) + " for k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
    const std::size_t budget =
        options.round_budget.value_or(default_round_budget(n, k, g.max_degree(), eps));
    if (budget == 0) throw DomainError("round budget must be at least 1");

    Rng rng(seed);
    detail::ResampleState state(g, k, eps);
    if (options.initial) {
        if (options.initial->k() != k || options.initial->n() != n)
            throw DomainError("initial partition does not match graph and k");
        state.load(*options.initial);
    } else {
        state.redraw_all(rng);
    }
    MoserTardosResult result;
    std::vector<NodeId> batch;
    while (true) {
        const bool global_bad = state.global_bad();
        if (!global_bad && state.bad_nodes().empty()) {
            result.success = true;
            break;
        }
        if (result.trace.total_rounds == budget) break;
        ++result.trace.total_rounds;
        ResampleRound round;
        if (global_bad) {
            round.kind = EventKind::global;
            state.redraw_all(rng);
        } else {
            const NodeId i = *state.bad_nodes().begin();
            batch.assign(g.neighbors(i).begin(), g.neighbors(i).end());
            batch.insert(std::upper_bound(batch.begin(), batch.end(), i), i);
            round.kind = EventKind::node;
            round.node = i;
            round.resampled = batch;
            state.redraw(batch, rng);
        }
        result.trace.rounds.push_back(std::move(round));
        if (options.verify_incremental) {
            const auto fresh = evaluate_events(g, state.snapshot(), k, eps);
            if (fresh != state.status())
                throw InvariantViolation("incremental event bookkeeping diverged in round " +
                                         std::to_string(result.trace.total_rounds));
        }
    }
    result.partition = state.snapshot();
    return result;
}

}  // namespace fairpart
