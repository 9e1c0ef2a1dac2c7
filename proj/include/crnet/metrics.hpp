#pragma once

#include "crnet/network.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace crnet {

/// Power draw of one BS. Active power interpolates between idle and peak by
/// traffic_weight * traffic_frac + (1 - traffic_weight) * eirp_frac.
double bs_power(const PowerModel& model, BsState state, double traffic_frac, double eirp_frac);

/// Linear ratio of radiated power to the site maximum.
double eirp_fraction(double eirp_dbm, double max_eirp_dbm);

double bs_power(const PowerModel& model, const BaseStation& bs);

double network_power(const NetworkSolution& solution, const PowerModel& model);

struct ExposureSummary {
    double e50_v_per_m = 0.0;
    double e95_v_per_m = 0.0;
    double eg_v_per_m = 0.0;
};

/// Nearest-rank percentile (p in (0,100]) of an unsorted sample. The input
/// is reordered.
double nearest_rank_percentile(std::span<double> values, int p);

/// E50 and E95 over the grid, EG their mean. Throws std::invalid_argument
/// on an empty grid.
ExposureSummary global_exposure(std::span<const double> values_v_per_m, E50Mode mode = E50Mode::median);
ExposureSummary global_exposure(const FieldGrid& grid, E50Mode mode = E50Mode::median);

/// Same as global_exposure but on squared field values, which it reorders.
ExposureSummary global_exposure_from_squared(std::span<double> squared, E50Mode mode);

/// Number of distinct channels carried by at least one link.
int spectrum_usage(std::span<const Link> links);

struct WhiteSpaceGrid {
    Lattice lattice;
    std::vector<int> available_channels;
    double mean_availability = 0.0;
};

/// Per grid point, S_max minus the channels on which some co-channel source
/// arrives above its threshold (TV sources against tv_threshold, CR against
/// cr_threshold).
WhiteSpaceGrid white_space_map(const NetworkSolution& solution, const Scenario& scenario);

WhiteSpaceGrid white_space_map(std::span<const ChannelEmitter> tv,
                               std::span<const ChannelEmitter> cr,
                               const Scenario& scenario);

namespace reference {
WhiteSpaceGrid white_space_map(std::span<const ChannelEmitter> tv,
                               std::span<const ChannelEmitter> cr,
                               const Scenario& scenario);
} // namespace reference

/// `x_m,y_m,wa` rows.
void write_white_space_csv(std::ostream& out, const WhiteSpaceGrid& grid);

/// Binary PGM, one byte per point scaled so that S_max maps to 255, top row
/// first (largest y).
void write_white_space_pgm(std::ostream& out, const WhiteSpaceGrid& grid, int s_max);

} // namespace crnet
