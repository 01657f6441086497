#pragma once

#include "fedgoal/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace fedgoal {

struct PartitionConfig {
    std::size_t k_count = 1;
    double overlap_ratio = 0.0; // 0 = disjoint tiling, 1 = each range spans both neighbours
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0; // half-open

    std::size_t length() const { return end - begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
};

struct PartitionPlan {
    std::vector<IndexRange> ranges;

    std::size_t total_length() const {
        std::size_t sum = 0;
        for (const auto &r : ranges) sum += r.length();
        return sum;
    }
};

/// Equal base segments [kT/K, (k+1)T/K) extended symmetrically by
/// round(overlap_ratio * base_length) on each side, clipped to [0, T).
inline PartitionPlan plan_partitions(std::size_t series_length, const PartitionConfig &config) {
    if (config.k_count < 1) throw InvalidConfig("k_count must be >= 1");
    if (config.overlap_ratio < 0.0 || config.overlap_ratio > 1.0)
        throw InvalidConfig("overlap_ratio must lie in [0, 1]");
    if (config.k_count > series_length)
        throw TooManyPartitions("more partitions than series points");

    const std::size_t T = series_length;
    const std::size_t K = config.k_count;
    PartitionPlan plan;
    plan.ranges.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t base_begin = k * T / K;
        const std::size_t base_end = (k + 1) * T / K;
        const std::size_t base_len = base_end - base_begin;
        // half-up rounding of the extension, documented tie-break
        const auto ext = static_cast<std::size_t>(
            std::floor(config.overlap_ratio * static_cast<double>(base_len) + 0.5));
        IndexRange range;
        range.begin = ext > base_begin ? 0 : base_begin - ext;
        range.end = std::min(base_end + ext, T);
        plan.ranges.push_back(range);
    }

    // Half-up rounding can push the summed lengths a fraction past the
    // (1 + 2 rho) T budget. Trim extensions (never base segments) from the
    // last partition backwards until the budget holds.
    const double budget = (1.0 + 2.0 * config.overlap_ratio) * static_cast<double>(T);
    std::size_t total = plan.total_length();
    while (static_cast<double>(total) > budget) {
        bool trimmed = false;
        for (std::size_t k = K; k-- > 0 && static_cast<double>(total) > budget;) {
            auto &range = plan.ranges[k];
            if (range.end > (k + 1) * T / K) {
                --range.end;
                --total;
                trimmed = true;
            } else if (range.begin < k * T / K) {
                ++range.begin;
                --total;
                trimmed = true;
            }
        }
        if (!trimmed) break; // all ranges are at their bases; total == T
    }
    return plan;
}

} // namespace fedgoal
