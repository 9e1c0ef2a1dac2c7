#pragma once

#include "crnet/network.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace crnet {

class PlanContext;

/// Per-KPI means over the runs that produced a Pareto point.
struct KpiMeans {
    double power_w = 0.0;
    double exposure_v_per_m = 0.0;
    double spectrum_channels = 0.0;
    double wa_mean = 0.0;
};

struct ParetoPoint {
    Weights weights;
    KpiMeans metrics;
    int runs = 0;
    bool converged = false;
    bool all_feasible = true;
    std::uint64_t seed = 0; ///< base seed of the run sequence
};

/// Every triple on the simplex with components in {0, r, 2r, ..., 1},
/// sorted lexicographically. Throws std::invalid_argument unless 1/r is a
/// positive integer.
std::vector<Weights> enumerate_weights(double resolution);

/// p dominates q iff p <= q in power, exposure and spectrum and p < q in at
/// least one of them.
bool dominates(const KpiMeans& p, const KpiMeans& q);

/// Indices of the non-dominated points, in input order.
std::vector<std::size_t> pareto_front_indices(std::span<const ParetoPoint> points);
std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points);

enum class Marker { best_power = 1, best_spectrum = 2, best_exposure = 3, balanced = 4 };

/// Normalisers for the balanced marker.
struct KpiScale {
    double power_w = 1.0;
    double exposure_v_per_m = 1.0;
    double spectrum_channels = 1.0;
};

/// Indices of markers 1..4 (array slot m-1). Requires a non-empty list.
std::array<std::size_t, 4> find_markers(std::span<const ParetoPoint> points, const KpiScale& scale);

struct SweepOptions {
    int max_sim = 0; ///< 0: scenario max_sim
    int jobs = 1;
};

struct SweepResult {
    std::vector<ParetoPoint> points;
    std::vector<bool> on_front;
    std::array<std::size_t, 4> markers{};

    std::optional<Marker> marker_of(std::size_t i) const;
};

/// run_converged for every weight triple; jobs only changes the schedule.
SweepResult sweep(const PlanContext& ctx, double resolution, std::uint64_t base_seed, const SweepOptions& options = {});

} // namespace crnet
