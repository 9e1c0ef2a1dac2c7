// Grid kernels. Each has a serial reference in crnet::reference and an
// OpenMP version; both evaluate every point with the same per-point routine,
// so their outputs are bit-identical.

#include "crnet/metrics.hpp"
#include "crnet/propagation.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace crnet {

namespace {

double field_at(std::span<const Emitter> emitters, Point p, const PathLossSpec& spec)
{
    return total_field(emitters, p, spec);
}

/// Co-channel sources reduced to discs: a source occupies its channel at p
/// iff p lies strictly inside the disc where it arrives above threshold.
struct OccupancyDiscs {
    std::vector<std::size_t> offsets; // channel c owns [offsets[c], offsets[c+1])
    std::vector<Point> centers;
    std::vector<double> radius_sq;
};

double occupancy_radius_sq(const ChannelEmitter& src, double threshold_dbm, const PathLossSpec& spec)
{
    const auto& params = src.emitter.kind == EmitterKind::tv ? spec.tv : spec.cr;
    const double budget = src.emitter.eirp_dbm - threshold_dbm;
    if (!(budget > params.pl0_db)) {
        return 0.0;
    }
    const double r = params.d0_m * std::pow(10.0, (budget - params.pl0_db) / (10.0 * params.exponent));
    return r * r;
}

OccupancyDiscs build_discs(std::span<const ChannelEmitter> tv, std::span<const ChannelEmitter> cr, const Scenario& s)
{
    const auto channels = static_cast<std::size_t>(s.s_max());
    std::vector<std::vector<std::pair<Point, double>>> per_channel(channels);
    for (const auto& src : tv) {
        const double r2 = occupancy_radius_sq(src, s.isl.tv_threshold_dbm, s.path_loss);
        if (r2 > 0.0) {
            per_channel[static_cast<std::size_t>(src.channel)].emplace_back(src.emitter.position, r2);
        }
    }
    for (const auto& src : cr) {
        const double r2 = occupancy_radius_sq(src, s.isl.cr_threshold_dbm, s.path_loss);
        if (r2 > 0.0) {
            per_channel[static_cast<std::size_t>(src.channel)].emplace_back(src.emitter.position, r2);
        }
    }
    OccupancyDiscs discs;
    discs.offsets.push_back(0);
    for (const auto& list : per_channel) {
        for (const auto& [c, r2] : list) {
            discs.centers.push_back(c);
            discs.radius_sq.push_back(r2);
        }
        discs.offsets.push_back(discs.centers.size());
    }
    return discs;
}

int available_at(const OccupancyDiscs& discs, Point p, int s_max)
{
    int occupied = 0;
    for (int c = 0; c < s_max; ++c) {
        const auto end = discs.offsets[static_cast<std::size_t>(c) + 1];
        for (auto i = discs.offsets[static_cast<std::size_t>(c)]; i < end; ++i) {
            if (distance_sq(discs.centers[i], p) < discs.radius_sq[i]) {
                ++occupied;
                break;
            }
        }
    }
    return s_max - occupied;
}

double mean_of(const std::vector<int>& values)
{
    double sum = 0.0;
    for (int v : values) {
        sum += v;
    }
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

} // namespace

FieldGrid field_grid(std::span<const Emitter> emitters, const Lattice& lattice, const PathLossSpec& spec)
{
    FieldGrid grid{lattice, std::vector<double>(lattice.size())};
    const long n = static_cast<long>(lattice.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        grid.values_v_per_m[static_cast<std::size_t>(k)] =
            field_at(emitters, lattice.point(static_cast<std::size_t>(k)), spec);
    }
    return grid;
}

WhiteSpaceGrid white_space_map(std::span<const ChannelEmitter> tv, std::span<const ChannelEmitter> cr, const Scenario& scenario)
{
    const auto lattice = scenario.lattice();
    const auto discs = build_discs(tv, cr, scenario);
    WhiteSpaceGrid grid{lattice, std::vector<int>(lattice.size()), 0.0};
    const long n = static_cast<long>(lattice.size());
    const int s_max = scenario.s_max();
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        grid.available_channels[static_cast<std::size_t>(k)] =
            available_at(discs, lattice.point(static_cast<std::size_t>(k)), s_max);
    }
    grid.mean_availability = mean_of(grid.available_channels);
    return grid;
}

namespace reference {

FieldGrid field_grid(std::span<const Emitter> emitters, const Lattice& lattice, const PathLossSpec& spec)
{
    FieldGrid grid{lattice, std::vector<double>(lattice.size())};
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        grid.values_v_per_m[k] = field_at(emitters, lattice.point(k), spec);
    }
    return grid;
}

WhiteSpaceGrid white_space_map(std::span<const ChannelEmitter> tv, std::span<const ChannelEmitter> cr, const Scenario& scenario)
{
    const auto lattice = scenario.lattice();
    const auto discs = build_discs(tv, cr, scenario);
    WhiteSpaceGrid grid{lattice, std::vector<int>(lattice.size()), 0.0};
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        grid.available_channels[k] = available_at(discs, lattice.point(k), scenario.s_max());
    }
    grid.mean_availability = mean_of(grid.available_channels);
    return grid;
}

} // namespace reference

} // namespace crnet
