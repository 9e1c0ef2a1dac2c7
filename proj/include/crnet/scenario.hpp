#pragma once

#include "crnet/config.hpp"
#include "crnet/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crnet {

struct SiteSpec {
    std::string id;
    Point position;
    double max_eirp_dbm = 0.0;
    double capacity_bps = 0.0;
};

struct TvTransmitter {
    std::string id;
    Point position;
    double eirp_dbm = 0.0;
    int channel_index = 0;
};

struct ChannelSpec {
    int index = 0;
    double center_frequency_mhz = 0.0;
};

struct User {
    int id = 0;
    Point position;
    double demanded_bitrate_bps = 0.0;
};

/// Immutable world description. Build it with load_scenario(); the loader
/// checks every invariant, so downstream code may rely on them.
struct Scenario {
    std::string name;
    Rect area;
    double grid_resolution_m = 50.0;
    std::vector<SiteSpec> candidate_sites;
    std::vector<TvTransmitter> tv_transmitters;
    std::vector<ChannelSpec> channels;
    int user_count = 0;
    double bitrate_per_user_bps = 1e6;
    IslConstraints isl;
    PowerModel power_model;
    CoverageSpec coverage;
    PathLossSpec path_loss;
    int max_sim = 30;
    double convergence_rel_std = 0.02;
    AllocatorOptions allocator;
    ExposureOptions exposure;
    BaselineConfig baseline;
    OptimizerOptions optimizer;

    int s_max() const { return static_cast<int>(channels.size()); }
    Lattice lattice() const { return Lattice(area, grid_resolution_m); }
    const SiteSpec& site(std::string_view id) const;
};

/// Configuration error, carrying the JSON path of the offending field.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field_path, const std::string& message);
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Throws ScenarioError on the first violated invariant.
void validate(const Scenario& scenario);

/// Name of the generator behind generate_users; recorded in run manifests.
inline constexpr std::string_view kUserRngId = "mt19937_64/53bit";

/// user_count users, i.i.d. uniform over the area, in generation order.
/// A pure function of (scenario, seed).
std::vector<User> generate_users(const Scenario& scenario, std::uint64_t seed);

std::vector<Point> grid_points(const Scenario& scenario);

} // namespace crnet
