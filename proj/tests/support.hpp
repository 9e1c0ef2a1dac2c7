#pragma once

#include "crnet/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace crnet::test {

inline std::filesystem::path data_dir()
{
    return CRNET_DATA_DIR;
}

inline Scenario shipped(const std::string& name)
{
    return load_scenario_file(data_dir() / name);
}

/// Small in-memory scenario: area w x h, `sites` on a horizontal line,
/// `channels` channels from 500 MHz in 8 MHz steps, no TV.
inline Scenario micro_scenario(double w, double h, int sites, int channels, int users)
{
    Scenario s;
    s.name = "micro";
    s.area = {0.0, 0.0, w, h};
    s.grid_resolution_m = 50.0;
    for (int i = 0; i < sites; ++i) {
        const double x = (i + 0.5) * w / sites;
        s.candidate_sites.push_back({"s" + std::to_string(i), {x, h / 2}, 30.0, 10e6});
    }
    for (int c = 0; c < channels; ++c) {
        s.channels.push_back({c, 500.0 + 8.0 * c});
    }
    s.user_count = users;
    s.bitrate_per_user_bps = 1e6;
    s.coverage.shadowing_sigma_db = 0.0;
    s.coverage.mcs_table = {{130.0, 2e6}};
    validate(s);
    return s;
}

/// Hand-rolled generator wrapper for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    bool coin() { return integer(0, 1) == 1; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace crnet::test
