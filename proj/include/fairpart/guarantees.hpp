// guarantees.hpp - closed-form fairness bounds and the desirability predicates
//
// Two regimes are covered. In the balanced regime a partition is desirable
// when it is balanced and every node with deg >= 18 k^2 ln n sees each part
// within deg/k +- 5 sqrt(deg ln n). In the eps regime the partition only has
// to be eps-balanced, the degree threshold is 12 k ln(Delta k / eps) and the
// window is deg/k +- 4 sqrt((deg/k) ln(Delta k / eps)).
//
// All comparisons against thresholds and window ends are inclusive with an
// absolute slack of kTolerance.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/partition.hpp"

namespace fairpart {

inline constexpr double kTolerance = 1e-9;

enum class Regime { balanced, eps };

inline const char* to_string(Regime r) { return r == Regime::balanced ? "balanced" : "eps"; }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return v >= lo - kTolerance && v <= hi + kTolerance; }
    double center() const noexcept { return 0.5 * (lo + hi); }
    double half_width() const noexcept { return 0.5 * (hi - lo); }
};

namespace detail {

inline void require_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
}

inline bool reaches(double value, double threshold) { return value >= threshold - kTolerance; }

}  // namespace detail

// ln(Delta k / eps). Delta = 0 (edgeless graph) is treated as 1 so the term
// stays finite and non-negative.
inline double eps_log_term(std::size_t max_degree, std::size_t k, double eps) {
    detail::require_eps(eps);
    const double delta = static_cast<double>(std::max<std::size_t>(max_degree, 1));
    return std::log(delta * static_cast<double>(k) / eps);
}

inline double balanced_degree_threshold(std::size_t k, std::size_t n) {
    const double kk = static_cast<double>(k);
    return 18.0 * kk * kk * std::log(static_cast<double>(n));
}

inline double eps_degree_threshold(std::size_t k, std::size_t max_degree, double eps) {
    return 12.0 * static_cast<double>(k) * eps_log_term(max_degree, k, eps);
}

// Allowed range for u_i(X_j) in the balanced regime, or nullopt when the node
// is below the degree threshold and therefore unconstrained.
inline std::optional<Interval> desirable_interval(std::size_t deg, std::size_t k, std::size_t n) {
    if (k == 0 || n == 0) throw DomainError("desirable_interval needs k >= 1 and n >= 1");
    if (deg == 0 || !detail::reaches(static_cast<double>(deg), balanced_degree_threshold(k, n)))
        return std::nullopt;
    const double d = static_cast<double>(deg);
    const double mean = d / static_cast<double>(k);
    const double half = 5.0 * std::sqrt(d * std::log(static_cast<double>(n)));
    return Interval{mean - half, mean + half};
}

// Allowed range for u_i(X_j) in the eps regime, nullopt for exempt nodes.
inline std::optional<Interval> eps_desirable_interval(std::size_t deg, std::size_t k,
                                                      std::size_t max_degree, double eps) {
    detail::require_eps(eps);
    if (k == 0) throw DomainError("eps_desirable_interval needs k >= 1");
    if (deg > max_degree)
        throw DomainError("degree exceeds the maximum degree");
    if (deg == 0 || !detail::reaches(static_cast<double>(deg), eps_degree_threshold(k, max_degree, eps)))
        return std::nullopt;
    const double mean = static_cast<double>(deg) / static_cast<double>(k);
    const double half = 4.0 * std::sqrt(mean * eps_log_term(max_degree, k, eps));
    return Interval{mean - half, mean + half};
}

struct Violation {
    NodeId node = 0;
    PartId part = 0;
    std::size_t observed = 0;
    Interval allowed;
};

struct DesirabilityReport {
    Regime regime = Regime::balanced;
    bool satisfied = false;
    bool balance_ok = false;
    double threshold_used = 0.0;
    std::vector<Violation> violations;
};

// Audits both desirability conditions. eps is ignored in the balanced regime.
inline DesirabilityReport check_desirability(const Graph& g, const Partition& x, Regime regime,
                                             double eps = 0.0) {
    if (x.n() != g.size()) throw DomainError("partition size does not match graph");
    DesirabilityReport report;
    report.regime = regime;
    const std::size_t n = g.size();
    const std::size_t k = x.k();
    const std::size_t delta = g.max_degree();
    if (regime == Regime::balanced) {
        report.balance_ok = is_eps_balanced(x, BalanceSpec::make(n, k, 0.0));
        report.threshold_used = n == 0 ? 0.0 : balanced_degree_threshold(k, n);
    } else {
        detail::require_eps(eps);
        report.balance_ok = is_eps_balanced(x, BalanceSpec::make(n, k, eps));
        report.threshold_used = eps_degree_threshold(k, delta, eps);
    }
    std::vector<std::size_t> counts(k);
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t deg = g.degree(i);
        const auto window = regime == Regime::balanced ? desirable_interval(deg, k, n)
                                                       : eps_desirable_interval(deg, k, delta, eps);
        if (!window) continue;
        std::fill(counts.begin(), counts.end(), 0);
        for (NodeId j : g.neighbors(i)) ++counts[x.part_of(j)];
        for (PartId j = 0; j < k; ++j)
            if (!window->contains(static_cast<double>(counts[j])))
                report.violations.push_back({i, j, counts[j], *window});
    }
    report.satisfied = report.balance_ok && report.violations.empty();
    return report;
}

// Smallest eps for which eps-desirable partitions are known to exist:
// 6 sqrt(k ln k / n), and 0 for k = 1.
inline double min_eps(std::size_t k, std::size_t n) {
    if (k <= 1) return 0.0;
    if (n == 0) throw DomainError("min_eps needs n >= 1");
    const double kk = static_cast<double>(k);
    return 6.0 * std::sqrt(kk * std::log(kk) / static_cast<double>(n));
}

// Fairness guarantees implied by (eps-)desirability for one parameter tuple.
struct GuaranteeBundle {
    Regime regime = Regime::balanced;
    std::size_t max_degree = 0;
    std::size_t k = 1;
    std::size_t n = 0;
    double eps = 0.0;

    double ef_radius = 0.0;
    double core_alpha = 0.0;
    double core_beta = 0.0;
    double degree_threshold = 0.0;
    double min_eps = 0.0;

    // Half-width of the per-part utility window for a node of this degree.
    double half_width(std::size_t deg) const {
        const double d = static_cast<double>(deg);
        if (regime == Regime::balanced) return 5.0 * std::sqrt(d * std::log(static_cast<double>(n)));
        return 4.0 * std::sqrt(d / static_cast<double>(k) * eps_log_term(max_degree, k, eps));
    }
};

inline GuaranteeBundle guarantee_bundle(Regime regime, std::size_t max_degree, std::size_t k,
                                        std::size_t n, double eps = 0.0) {
    if (k == 0 || n == 0) throw DomainError("guarantee_bundle needs k >= 1 and n >= 1");
    GuaranteeBundle b;
    b.regime = regime;
    b.max_degree = max_degree;
    b.k = k;
    b.n = n;
    const double kk = static_cast<double>(k);
    const double dd = static_cast<double>(max_degree);
    b.core_alpha = kk + std::sqrt(kk);
    if (regime == Regime::balanced) {
        const double ln_n = std::log(static_cast<double>(n));
        b.eps = 0.0;
        b.ef_radius = 18.0 * std::max(std::sqrt(dd), kk * kk) * ln_n;
        b.core_beta = 25.0 * std::pow(kk, 2.5) * ln_n;
        b.degree_threshold = balanced_degree_threshold(k, n);
        b.min_eps = 0.0;
    } else {
        const double log_term = eps_log_term(max_degree, k, eps);
        b.eps = eps;
        b.ef_radius = 12.0 * std::max(std::sqrt(dd / kk), kk) * log_term;
        b.core_beta = 16.0 * std::pow(kk, 1.5) * log_term;
        b.degree_threshold = 12.0 * kk * log_term;
        b.min_eps = min_eps(k, n);
    }
    return b;
}

// Two-sided Chernoff bound 2 exp(-delta^2 mu / 3) on P(|X - mu| >= delta mu).
inline double chernoff_tail(double mu, double delta) {
    if (!(mu > 0.0)) throw DomainError("chernoff_tail needs mu > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("chernoff_tail needs delta in (0, 1)");
    return 2.0 * std::exp(-delta * delta * mu / 3.0);
}

// Union bound over parts: P(some part of a uniform k-partition misses
// n/k +- eps n/k) <= 2k exp(-eps^2 n / (3k)).
inline double global_balance_tail(std::size_t n, std::size_t k, double eps) {
    detail::require_eps(eps);
    const double kk = static_cast<double>(k);
    return 2.0 * kk * std::exp(-eps * eps * static_cast<double>(n) / (3.0 * kk));
}

// ln of 1/2 (2ne/k)^(-2k), usable when the value itself underflows.
inline double log_rejection_success_lower_bound(std::size_t n, std::size_t k) {
    if (k == 0 || n < k) throw DomainError("rejection bound needs n >= k >= 1");
    const double kk = static_cast<double>(k);
    return -std::log(2.0) - 2.0 * kk * std::log(2.0 * static_cast<double>(n) * std::numbers::e / kk);
}

// Lower bound on the probability that a uniform random partition is desirable.
inline double rejection_success_lower_bound(std::size_t n, std::size_t k) {
    return std::exp(log_rejection_success_lower_bound(n, k));
}

}  // namespace fairpart
