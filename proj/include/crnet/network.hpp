#pragma once

// Network solution records shared by the allocator, the optimizer, the
// traditional-architecture baseline and the exporters.

#include "crnet/propagation.hpp"
#include "crnet/scenario.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace crnet {

enum class BsState { sleep, idle, active };

std::string_view to_string(BsState state);

enum class Architecture { cloud, traditional };

std::string_view to_string(Architecture arch);

/// Pareto coefficients of the fitness function; components sum to one.
struct Weights {
    double w1 = 0.0; ///< power consumption
    double w2 = 0.0; ///< global exposure
    double w3 = 0.0; ///< spectrum usage

    auto operator<=>(const Weights&) const = default;
};

struct MetricVector {
    double power_w = 0.0;
    double exposure_v_per_m = 0.0;
    int spectrum_channels = 0;
};

struct Link {
    int user = 0;    ///< index into NetworkSolution::users
    int bs = 0;      ///< index into NetworkSolution::base_stations
    int channel = 0; ///< index into the scenario channel table
    double user_eirp_dbm = 0.0;
    double bs_eirp_dbm = 0.0;
    double bitrate_bps = 0.0;
};

struct BaseStation {
    SiteSpec site;
    BsState state = BsState::sleep;
    double eirp_dbm = 0.0;
    double load_bps = 0.0;
    std::vector<int> served_links; ///< indices into NetworkSolution::links
};

struct NetworkSolution {
    Architecture architecture = Architecture::cloud;
    std::vector<BaseStation> base_stations;
    std::vector<User> users;
    std::vector<Link> links;
    std::vector<int> unconnected_users;
    MetricVector metrics;
    double wa_mean = 0.0;
    Weights weights;
    std::uint64_t seed = 0;

    bool feasible() const { return unconnected_users.empty(); }
};

/// Channels in use at a BS, ascending.
std::vector<int> bs_channels(const NetworkSolution& solution, int bs);

/// Downlink emitters for exposure: one per active BS at its EIRP and the
/// frequency of its highest carrier.
std::vector<Emitter> exposure_emitters(const NetworkSolution& solution, const Scenario& scenario);

/// A CR or TV source occupying one channel.
struct ChannelEmitter {
    Emitter emitter;
    int channel = 0;
};

/// Every BS carrier (one per channel in use, at the BS EIRP) and every
/// linked user device.
std::vector<ChannelEmitter> cr_channel_emitters(const NetworkSolution& solution, const Scenario& scenario);

std::vector<ChannelEmitter> tv_channel_emitters(const Scenario& scenario);

} // namespace crnet
