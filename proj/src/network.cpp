#include "crnet/network.hpp"

#include <algorithm>

namespace crnet {

std::string_view to_string(BsState state)
{
    switch (state) {
    case BsState::sleep: return "sleep";
    case BsState::idle: return "idle";
    case BsState::active: return "active";
    }
    return "unknown";
}

std::string_view to_string(Architecture arch)
{
    return arch == Architecture::cloud ? "cloud" : "traditional";
}

std::vector<int> bs_channels(const NetworkSolution& solution, int bs)
{
    std::vector<int> channels;
    for (int li : solution.base_stations[static_cast<std::size_t>(bs)].served_links) {
        channels.push_back(solution.links[static_cast<std::size_t>(li)].channel);
    }
    std::sort(channels.begin(), channels.end());
    channels.erase(std::unique(channels.begin(), channels.end()), channels.end());
    return channels;
}

std::vector<Emitter> exposure_emitters(const NetworkSolution& solution, const Scenario& scenario)
{
    std::vector<Emitter> out;
    for (std::size_t b = 0; b < solution.base_stations.size(); ++b) {
        const auto& bs = solution.base_stations[b];
        if (bs.state != BsState::active) {
            continue;
        }
        const auto channels = bs_channels(solution, static_cast<int>(b));
        if (channels.empty()) {
            continue;
        }
        const double f = scenario.channels[static_cast<std::size_t>(channels.back())].center_frequency_mhz;
        out.push_back({bs.site.position, bs.eirp_dbm, f, EmitterKind::cr_bs});
    }
    return out;
}

std::vector<ChannelEmitter> cr_channel_emitters(const NetworkSolution& solution, const Scenario& scenario)
{
    std::vector<ChannelEmitter> out;
    for (std::size_t b = 0; b < solution.base_stations.size(); ++b) {
        const auto& bs = solution.base_stations[b];
        for (int c : bs_channels(solution, static_cast<int>(b))) {
            out.push_back({{bs.site.position, bs.eirp_dbm, scenario.channels[static_cast<std::size_t>(c)].center_frequency_mhz,
                            EmitterKind::cr_bs},
                           c});
        }
    }
    for (const auto& link : solution.links) {
        const auto& user = solution.users[static_cast<std::size_t>(link.user)];
        out.push_back({{user.position, link.user_eirp_dbm,
                        scenario.channels[static_cast<std::size_t>(link.channel)].center_frequency_mhz, EmitterKind::cr_user},
                       link.channel});
    }
    return out;
}

std::vector<ChannelEmitter> tv_channel_emitters(const Scenario& scenario)
{
    std::vector<ChannelEmitter> out;
    for (const auto& tv : scenario.tv_transmitters) {
        out.push_back({{tv.position, tv.eirp_dbm,
                        scenario.channels[static_cast<std::size_t>(tv.channel_index)].center_frequency_mhz, EmitterKind::tv},
                       tv.channel_index});
    }
    return out;
}

} // namespace crnet
