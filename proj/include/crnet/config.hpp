#pragma once

// Plain configuration records shared by the scenario and the modules that
// consume it. Defaults are the values used when a scenario file omits a key.

#include <limits>
#include <optional>
#include <vector>

namespace crnet {

enum class PathLossModel { one_slope, log_distance_tv };

/// PL(d) = pl0_db + 10 * exponent * log10(max(d, d0_m) / d0_m)
struct PathLossParams {
    PathLossModel model = PathLossModel::one_slope;
    double pl0_db = 40.0;
    double d0_m = 1.0;
    double exponent = 3.0;
};

/// Separate parameter blocks for CR links (BSs and user devices) and for
/// broadcast TV towers.
struct PathLossSpec {
    PathLossParams cr{};
    PathLossParams tv{PathLossModel::log_distance_tv, 40.0, 1.0, 3.5};
};

struct IslConstraints {
    double cr_threshold_dbm = -93.0;
    double tv_threshold_dbm = -95.0;
};

struct McsEntry {
    double max_path_loss_db = 0.0;
    double bitrate_bps = 0.0;
};

struct CoverageSpec {
    double cell_edge_coverage = 0.95;
    double temporal_availability = 0.99;
    double shadowing_sigma_db = 0.0;
    /// Descending by max_path_loss_db. Path losses apply to a BS radiating
    /// at its site's max EIRP.
    std::vector<McsEntry> mcs_table;

    /// z(temporal_availability) * shadowing_sigma_db.
    double shadowing_margin_db() const;

    /// Largest max path loss among entries whose bitrate covers the demand;
    /// empty when no entry does.
    std::optional<double> max_path_loss_for(double bitrate_bps) const;
};

struct PowerModel {
    double p_sleep_w = 9.0;
    double p_idle_w = 38.0;
    double p_peak_w = 64.0;
    /// Blend between traffic and radiated power for an active BS.
    double traffic_weight = 0.5;
};

enum class Aggregation { linear_sum, max_source };

struct AllocatorOptions {
    Aggregation aggregation = Aggregation::linear_sum;
    double user_eirp_dbm = 20.0;
};

enum class E50Mode { median, mean };

struct ExposureOptions {
    E50Mode e50 = E50Mode::median;
};

struct BaselineConfig {
    /// Sensing floor relative to the CR threshold.
    double sensing_floor_offset_db = -10.0;
    double visibility_radius_m = std::numeric_limits<double>::infinity();
};

struct OptimizerOptions {
    double trim_step_db = 1.0;
    int convergence_window = 10;
};

} // namespace crnet
