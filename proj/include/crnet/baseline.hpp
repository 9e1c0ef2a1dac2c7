#pragma once

#include "crnet/network.hpp"
#include "crnet/pareto.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace crnet {

class PlanContext;

/// Traditional distributed architecture: each user takes the lowest path
/// loss BS that has capacity, coverage and a channel that BS believes is
/// free from the TV database and what it senses locally. No sleep mode and
/// no power control.
NetworkSolution baseline_optimize(const PlanContext& ctx, std::uint64_t seed);

/// Same topology and EIRPs with every sleeping BS held idle instead.
NetworkSolution with_idle_floor(NetworkSolution solution, const Scenario& scenario);

/// Paired-seed comparison of the cloud sweep markers with the baseline.
struct ComparisonReport {
    std::vector<std::uint64_t> seeds;
    /// cloud[m][i]: marker m+1 of the single-run sweep for seeds[i]
    std::array<std::vector<KpiMeans>, 4> cloud;
    std::vector<KpiMeans> baseline;
    std::vector<int> baseline_violations;
    std::array<std::vector<int>, 4> cloud_violations;

    KpiMeans cloud_mean(Marker marker) const;
    KpiMeans baseline_mean() const;
};

ComparisonReport compare_architectures(const PlanContext& ctx,
                                       double resolution,
                                       std::uint64_t base_seed,
                                       int seed_count,
                                       int jobs);

/// (baseline - cloud) / baseline in percent; positive means the cloud
/// architecture is better.
double differential_pct(double baseline, double cloud);

/// One-sided exact sign test p-value for "first < second" over the pairs.
double sign_test_p(std::span<const double> first, std::span<const double> second);

} // namespace crnet
