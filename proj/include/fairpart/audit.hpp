// audit.hpp - envy measurement and blocking-coalition search
//
// A coalition S is (alpha, beta)-blocking for a partition X when every member
// i has u_i(S) > alpha * u_i(X) + beta and |S| is one of the allowed coalition
// sizes. Two attackers are provided: an exhaustive one with degree pruning for
// small instances and a restart hill climber that is sound but incomplete.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/guarantees.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/random.hpp"

namespace fairpart {

struct EnvyReport {
    // max_j u_i(X_j) - u_i(X); never negative since j may be i's own part
    std::vector<std::size_t> per_node_envy;
    std::size_t max_envy = 0;
    NodeId argmax = 0;  // lowest id attaining max_envy
};

inline EnvyReport envy_audit(const Graph& g, const Partition& x) {
    if (x.n() != g.size()) throw DomainError("partition size does not match graph");
    EnvyReport report;
    report.per_node_envy.resize(g.size(), 0);
    std::vector<std::size_t> counts(x.k());
    for (NodeId i = 0; i < g.size(); ++i) {
        std::fill(counts.begin(), counts.end(), 0);
        for (NodeId j : g.neighbors(i)) ++counts[x.part_of(j)];
        const std::size_t best = *std::max_element(counts.begin(), counts.end());
        const std::size_t envy = best - counts[x.part_of(i)];
        report.per_node_envy[i] = envy;
        if (envy > report.max_envy) {
            report.max_envy = envy;
            report.argmax = i;
        }
    }
    return report;
}

struct CoreQuery {
    double alpha = 1.0;
    double beta = 0.0;
    std::vector<std::size_t> sizes;  // ascending, distinct

    // Coalitions of size floor(n/k) or ceil(n/k).
    static CoreQuery balanced(double alpha, double beta, std::size_t n, std::size_t k) {
        return eps_balanced(alpha, beta, n, k, 0.0);
    }

    // Coalitions of any size in [floor((1-eps) n/k), ceil((1+eps) n/k)].
    static CoreQuery eps_balanced(double alpha, double beta, std::size_t n, std::size_t k,
                                  double eps) {
        const auto spec = BalanceSpec::make(n, k, eps);
        std::vector<std::size_t> sizes;
        for (std::size_t s = spec.lower; s <= spec.upper; ++s) sizes.push_back(s);
        return with_sizes(alpha, beta, std::move(sizes));
    }

    static CoreQuery with_sizes(double alpha, double beta, std::vector<std::size_t> sizes) {
        if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("alpha and beta must be >= 0");
        std::sort(sizes.begin(), sizes.end());
        sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
        return {alpha, beta, std::move(sizes)};
    }

    bool allows(std::size_t size) const {
        return std::binary_search(sizes.begin(), sizes.end(), size);
    }
};

// lhs > alpha * own + beta. Integral alpha and beta are compared exactly;
// otherwise lhs must clear the right side by kTolerance.
inline bool strictly_exceeds(std::size_t lhs, double alpha, double beta, std::size_t own) {
    const double rhs = alpha * static_cast<double>(own) + beta;
    const double l = static_cast<double>(lhs);
    if (alpha == std::floor(alpha) && beta == std::floor(beta)) return l > rhs;
    return l > rhs + kTolerance;
}

struct BlockingCertificate {
    NodeSet coalition;
    std::vector<double> slacks;  // u_i(S) - (alpha u_i(X) + beta), member order

    std::size_t size() const noexcept { return coalition.size(); }
};

struct CertificateCheck {
    bool valid = false;
    bool size_ok = false;
    std::vector<double> slacks;
};

inline CertificateCheck verify_certificate(const Graph& g, const Partition& x, const CoreQuery& q,
                                           const NodeSet& s) {
    if (x.n() != g.size() || s.universe() != g.size())
        throw DomainError("certificate does not match graph");
    CertificateCheck check;
    check.size_ok = q.allows(s.size());
    bool all = true;
    for (NodeId i : s) {
        const std::size_t gain = utility_for_set(g, i, s);
        const std::size_t own = utility(g, x, i);
        check.slacks.push_back(static_cast<double>(gain) - (q.alpha * static_cast<double>(own) + q.beta));
        all = all && strictly_exceeds(gain, q.alpha, q.beta, own);
    }
    check.valid = check.size_ok && all && !s.empty();
    return check;
}

namespace detail {

// Nodes that could belong to some blocking set: u_i(S) <= deg(i), so a node
// with deg(i) <= alpha u_i(X) + beta never qualifies.
inline std::vector<NodeId> blocking_candidates(const Graph& g, const Partition& x,
                                               const CoreQuery& q) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < g.size(); ++i)
        if (strictly_exceeds(g.degree(i), q.alpha, q.beta, utility(g, x, i))) out.push_back(i);
    return out;
}

inline double binomial(std::size_t n, std::size_t r) {
    if (r > n) return 0.0;
    return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(r) + 1) -
                    std::lgamma(static_cast<double>(n - r) + 1));
}

class ExactBlockingSearch {
public:
    ExactBlockingSearch(const Graph& g, const Partition& x, const CoreQuery& q,
                        std::vector<NodeId> candidates)
        : g_(g), q_(q), cand_(std::move(candidates)), own_(g.size()), is_cand_(g.size(), 0),
          chosen_flag_(g.size(), 0), avail_(g.size(), 0) {
        for (NodeId i = 0; i < g.size(); ++i) own_[i] = utility(g, x, i);
        for (NodeId c : cand_) is_cand_[c] = 1;
        for (NodeId c : cand_)
            for (NodeId w : g.neighbors(c)) avail_[w] += is_cand_[c] ? 1 : 0;
    }

    // Lexicographically first blocking set of exactly `size` members.
    std::optional<std::vector<NodeId>> first_of_size(std::size_t size) {
        target_ = size;
        chosen_.clear();
        if (size == 0 || size > cand_.size()) return std::nullopt;
        if (descend(0)) return result_;
        return std::nullopt;
    }

private:
    bool qualifies(NodeId i, std::size_t count) const {
        return strictly_exceeds(count, q_.alpha, q_.beta, own_[i]);
    }

    bool descend(std::size_t idx) {
        if (chosen_.size() == target_) {
            for (NodeId m : chosen_) {
                std::size_t inside = 0;
                for (NodeId w : g_.neighbors(m)) inside += chosen_flag_[w];
                if (!qualifies(m, inside)) return false;
            }
            result_ = chosen_;
            return true;
        }
        if (cand_.size() - idx < target_ - chosen_.size()) return false;
        const NodeId c = cand_[idx];
        // take c
        if (qualifies(c, avail_[c])) {
            chosen_.push_back(c);
            chosen_flag_[c] = 1;
            const bool found = descend(idx + 1);
            chosen_flag_[c] = 0;
            chosen_.pop_back();
            if (found) return true;
        }
        // drop c: members adjacent to it lose one potential neighbor
        bool viable = true;
        for (NodeId w : g_.neighbors(c)) {
            if (!is_cand_[w]) continue;
            --avail_[w];
            if (chosen_flag_[w] && !qualifies(w, avail_[w])) viable = false;
        }
        const bool found = viable && descend(idx + 1);
        for (NodeId w : g_.neighbors(c))
            if (is_cand_[w]) ++avail_[w];
        return found;
    }

    const Graph& g_;
    const CoreQuery& q_;
    std::vector<NodeId> cand_;
    std::vector<std::size_t> own_;
    std::vector<char> is_cand_;
    std::vector<char> chosen_flag_;
    // neighbors among chosen members and still-undecided candidates
    std::vector<std::size_t> avail_;
    std::vector<NodeId> chosen_;
    std::vector<NodeId> result_;
    std::size_t target_ = 0;
};

}  // namespace detail

inline constexpr double kExactSearchLimit = 1e8;

// Number of coalitions the exhaustive attacker would have to consider after
// degree pruning.
inline double exact_search_work(const Graph& g, const Partition& x, const CoreQuery& q) {
    const auto cand = detail::blocking_candidates(g, x, q);
    double work = 0.0;
    for (std::size_t s : q.sizes) work += detail::binomial(cand.size(), s);
    return work;
}

// Exhaustive search. Returns the lexicographically smallest blocking set over
// all allowed sizes, or nullopt when the partition is in the (alpha, beta)-core
// for these sizes. Throws Refusal when the pruned search space exceeds `limit`.
inline std::optional<BlockingCertificate> find_blocking_exact(const Graph& g, const Partition& x,
                                                              const CoreQuery& q,
                                                              double limit = kExactSearchLimit) {
    if (x.n() != g.size()) throw DomainError("partition size does not match graph");
    auto cand = detail::blocking_candidates(g, x, q);
    double work = 0.0;
    for (std::size_t s : q.sizes) work += detail::binomial(cand.size(), s);
    if (work > limit)
        throw Refusal("exhaustive blocking search would visit ~" + std::to_string(work) +
                      " coalitions (limit " + std::to_string(limit) + ")");
    detail::ExactBlockingSearch search(g, x, q, std::move(cand));
    std::optional<std::vector<NodeId>> best;
    for (std::size_t s : q.sizes) {
        auto found = search.first_of_size(s);
        if (found && (!best || std::lexicographical_compare(found->begin(), found->end(),
                                                            best->begin(), best->end())))
            best = std::move(found);
    }
    if (!best) return std::nullopt;
    NodeSet coalition(g.size(), *best);
    auto check = verify_certificate(g, x, q, coalition);
    if (!check.valid) throw InvariantViolation("exact search produced an invalid certificate");
    return BlockingCertificate{std::move(coalition), std::move(check.slacks)};
}

struct GreedyOptions {
    std::size_t restarts = 64;
    std::uint64_t seed = 0;
    std::size_t max_steps = 0;     // per climb; 0 picks 4 * size + 64
    std::size_t swap_breadth = 64;  // outsiders scored per step
};

// Restart hill climber over fixed-size coalitions. Each climb seeds with a
// random high-degree candidate and its candidate neighbors, then swaps the
// weakest member for the outsider that most improves (minimum slack, total
// slack). Anything returned has passed verify_certificate; nullopt proves
// nothing.
inline std::optional<BlockingCertificate> find_blocking_greedy(const Graph& g, const Partition& x,
                                                               const CoreQuery& q,
                                                               const GreedyOptions& opt = {}) {
    if (x.n() != g.size()) throw DomainError("partition size does not match graph");
    const std::size_t n = g.size();
    auto cand = detail::blocking_candidates(g, x, q);
    if (cand.empty() || opt.restarts == 0) return std::nullopt;

    std::vector<double> rhs(n);
    for (NodeId i = 0; i < n; ++i)
        rhs[i] = q.alpha * static_cast<double>(utility(g, x, i)) + q.beta;
    std::vector<char> is_cand(n, 0);
    for (NodeId c : cand) is_cand[c] = 1;

    // seeds come from the top quarter of candidates by degree
    auto by_degree = cand;
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
    const std::size_t seed_pool = std::max<std::size_t>(1, by_degree.size() / 4);

    std::vector<std::size_t> inside(n);  // |N(v) ∩ S|
    std::vector<char> member(n);
    std::vector<std::uint32_t> near_weak(n, 0), near_new(n, 0);
    std::uint32_t clock = 0;

    auto add = [&](NodeId v) {
        member[v] = 1;
        for (NodeId w : g.neighbors(v)) ++inside[w];
    };
    auto remove = [&](NodeId v) {
        member[v] = 0;
        for (NodeId w : g.neighbors(v)) --inside[w];
    };
    auto slack = [&](NodeId v, std::size_t count) { return static_cast<double>(count) - rhs[v]; };
    auto exceeds = [&](NodeId v, std::size_t count) {
        return strictly_exceeds(count, q.alpha, q.beta, utility(g, x, v));
    };

    for (std::size_t restart = 0; restart < opt.restarts; ++restart) {
        Rng rng(mix_seed(opt.seed, restart));
        const NodeId origin = by_degree[rng.below(seed_pool)];
        for (std::size_t size : q.sizes) {
            if (size == 0 || size > cand.size()) continue;
            std::fill(inside.begin(), inside.end(), 0);
            std::fill(member.begin(), member.end(), 0);
            std::vector<NodeId> coalition{origin};
            add(origin);
            std::vector<NodeId> ring;
            for (NodeId w : g.neighbors(origin))
                if (is_cand[w]) ring.push_back(w);
            std::stable_sort(ring.begin(), ring.end(),
                             [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
            for (NodeId w : ring) {
                if (coalition.size() == size) break;
                coalition.push_back(w);
                add(w);
            }
            while (coalition.size() < size) {
                NodeId pick = 0;
                bool have = false;
                for (NodeId c : cand)
                    if (!member[c] && (!have || inside[c] > inside[pick])) {
                        pick = c;
                        have = true;
                    }
                coalition.push_back(pick);
                add(pick);
            }

            const std::size_t steps = opt.max_steps ? opt.max_steps : 4 * size + 64;
            for (std::size_t step = 0; step <= steps; ++step) {
                double worst = std::numeric_limits<double>::infinity();
                double total = 0.0;
                NodeId weakest = 0;
                bool blocking = true;
                for (NodeId m : coalition) {
                    const double s = slack(m, inside[m]);
                    total += s;
                    blocking = blocking && exceeds(m, inside[m]);
                    if (s < worst || (s == worst && m < weakest)) {
                        worst = s;
                        weakest = m;
                    }
                }
                if (blocking) {
                    NodeSet set(n, coalition);
                    auto check = verify_certificate(g, x, q, set);
                    if (check.valid) return BlockingCertificate{std::move(set), std::move(check.slacks)};
                    break;
                }
                if (step == steps) break;

                // outsiders with the most slack they would already have
                std::vector<NodeId> pool;
                for (NodeId c : cand)
                    if (!member[c]) pool.push_back(c);
                const std::size_t breadth = std::min(pool.size(), opt.swap_breadth);
                std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(breadth),
                                  pool.end(), [&](NodeId a, NodeId b) {
                                      const double sa = slack(a, inside[a]), sb = slack(b, inside[b]);
                                      return sa != sb ? sa > sb : a < b;
                                  });
                pool.resize(breadth);
                std::sort(pool.begin(), pool.end());

                // members adjacent to the weakest lose one inside-neighbor,
                // members adjacent to the newcomer gain one
                ++clock;
                for (NodeId w : g.neighbors(weakest)) near_weak[w] = clock;
                const std::uint32_t weak_mark = clock;
                double best_min = worst, best_total = total;
                NodeId best_in = 0;
                bool improved = false;
                for (NodeId b : pool) {
                    ++clock;
                    for (NodeId w : g.neighbors(b)) near_new[w] = clock;
                    const std::uint32_t new_mark = clock;
                    double new_min = slack(b, inside[b]) - (near_weak[b] == weak_mark ? 1.0 : 0.0);
                    double new_total = new_min;
                    for (NodeId m : coalition) {
                        if (m == weakest) continue;
                        const double delta = (near_new[m] == new_mark ? 1.0 : 0.0) -
                                             (near_weak[m] == weak_mark ? 1.0 : 0.0);
                        const double s = slack(m, inside[m]) + delta;
                        new_total += s;
                        new_min = std::min(new_min, s);
                    }
                    if (new_min > best_min || (new_min == best_min && new_total > best_total)) {
                        best_min = new_min;
                        best_total = new_total;
                        best_in = b;
                        improved = true;
                    }
                }
                if (!improved) break;
                remove(weakest);
                add(best_in);
                std::replace(coalition.begin(), coalition.end(), weakest, best_in);
            }
        }
    }
    return std::nullopt;
}

enum class AttackMode { exact, greedy, automatic };

enum class AttackVerdict { none, blocked, refused };

inline const char* to_string(AttackVerdict v) {
    switch (v) {
        case AttackVerdict::none: return "none";
        case AttackVerdict::blocked: return "blocked";
        case AttackVerdict::refused: return "refused";
    }
    return "?";
}

struct AttackOutcome {
    AttackVerdict verdict = AttackVerdict::none;
    std::string method;  // "exact" or "greedy"
    std::optional<BlockingCertificate> certificate;
    std::string note;
};

// automatic: exhaustive when the pruned space fits under the limit, otherwise greedy.
inline AttackOutcome attack(const Graph& g, const Partition& x, const CoreQuery& q, AttackMode mode,
                            const GreedyOptions& greedy = {}) {
    AttackOutcome out;
    const bool exhaustive = mode == AttackMode::exact ||
                            (mode == AttackMode::automatic && exact_search_work(g, x, q) <= kExactSearchLimit);
    if (exhaustive) {
        out.method = "exact";
        try {
            out.certificate = find_blocking_exact(g, x, q);
        } catch (const Refusal& e) {
            out.verdict = AttackVerdict::refused;
            out.note = e.what();
            return out;
        }
    } else {
        out.method = "greedy";
        out.certificate = find_blocking_greedy(g, x, q, greedy);
    }
    out.verdict = out.certificate ? AttackVerdict::blocked : AttackVerdict::none;
    return out;
}

inline nlohmann::json envy_to_json(const EnvyReport& e) {
    return {{"max_envy", e.max_envy}, {"argmax", e.argmax}, {"per_node_envy", e.per_node_envy}};
}

inline nlohmann::json query_to_json(const CoreQuery& q) {
    return {{"alpha", q.alpha}, {"beta", q.beta}, {"sizes", q.sizes}};
}

inline nlohmann::json certificate_to_json(const BlockingCertificate& c) {
    return {{"coalition", std::vector<NodeId>(c.coalition.begin(), c.coalition.end())},
            {"size", c.size()},
            {"slacks", c.slacks}};
}

}  // namespace fairpart
