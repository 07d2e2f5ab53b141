// samplers.hpp - uniform random partitions and rejection sampling of desirable ones
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "fairpart/errors.hpp"
#include "fairpart/guarantees.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/random.hpp"

namespace fairpart {

// Every node draws its part independently and uniformly from [0, k).
inline Partition sample_uniform(std::size_t n, std::size_t k, Rng& rng) {
    if (k == 0 || n < k)
        throw DomainError("sample_uniform needs n >= k >= 1 (n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ")");
    std::vector<PartId> assign(n);
    for (auto& a : assign) a = static_cast<PartId>(rng.below(k));
    return Partition(k, std::move(assign));
}

inline Partition sample_uniform(std::size_t n, std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    return sample_uniform(n, k, rng);
}

struct SampleStats {
    std::size_t attempts = 0;
    bool accepted = false;
    std::size_t balanced_hits = 0;
    // balanced draws rejected because some node left its utility window
    std::size_t condition_ii_failures = 0;
};

struct RejectionResult {
    std::optional<Partition> partition;
    SampleStats stats;
};

inline constexpr std::size_t kRejectionBudgetCap = 10'000'000;

// 2 (2ne/k)^(2k) draws give constant success probability; capped at 10^7.
inline std::size_t default_rejection_budget(std::size_t n, std::size_t k) {
    // 2 (2ne/k)^(2k) = 1 / (1/2 (2ne/k)^(-2k))
    const double log_budget = -log_rejection_success_lower_bound(n, k);
    if (log_budget >= std::log(static_cast<double>(kRejectionBudgetCap))) return kRejectionBudgetCap;
    return static_cast<std::size_t>(std::ceil(std::exp(log_budget)));
}

// Draws uniform partitions until one is desirable (balanced regime) or the
// budget runs out. Running out is reported through an empty partition.
inline RejectionResult rejection_sample_desirable(const Graph& g, std::size_t k, std::size_t budget,
                                                  std::uint64_t seed) {
    if (budget == 0) throw DomainError("rejection budget must be at least 1");
    const std::size_t n = g.size();
    const auto spec = BalanceSpec::make(n, k, 0.0);
    Rng rng(seed);
    RejectionResult result;
    while (result.stats.attempts < budget) {
        ++result.stats.attempts;
        auto x = sample_uniform(n, k, rng);
        if (!is_eps_balanced(x, spec)) continue;
        ++result.stats.balanced_hits;
        if (!check_desirability(g, x, Regime::balanced).satisfied) {
            ++result.stats.condition_ii_failures;
            continue;
        }
        result.stats.accepted = true;
        result.partition = std::move(x);
        break;
    }
    return result;
}

}  // namespace fairpart
