#include "crnet/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace crnet {

double bs_power(const PowerModel& model, BsState state, double traffic_frac, double eirp_frac)
{
    switch (state) {
    case BsState::sleep: return model.p_sleep_w;
    case BsState::idle: return model.p_idle_w;
    case BsState::active: {
        const double a = model.traffic_weight;
        const double blend = a * std::clamp(traffic_frac, 0.0, 1.0) + (1.0 - a) * std::clamp(eirp_frac, 0.0, 1.0);
        return model.p_idle_w + (model.p_peak_w - model.p_idle_w) * blend;
    }
    }
    return 0.0;
}

double eirp_fraction(double eirp_dbm, double max_eirp_dbm)
{
    return std::min(1.0, std::pow(10.0, (eirp_dbm - max_eirp_dbm) / 10.0));
}

double bs_power(const PowerModel& model, const BaseStation& bs)
{
    return bs_power(model, bs.state, bs.load_bps / bs.site.capacity_bps, eirp_fraction(bs.eirp_dbm, bs.site.max_eirp_dbm));
}

double network_power(const NetworkSolution& solution, const PowerModel& model)
{
    double total = 0.0;
    for (const auto& bs : solution.base_stations) {
        total += bs_power(model, bs);
    }
    return total;
}

double nearest_rank_percentile(std::span<double> values, int p)
{
    if (values.empty()) {
        throw std::invalid_argument("percentile of an empty sample");
    }
    const std::size_t n = values.size();
    // rank = ceil(p * n / 100), computed in integers
    std::size_t rank = (static_cast<std::size_t>(p) * n + 99) / 100;
    rank = std::clamp<std::size_t>(rank, 1, n);
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

ExposureSummary global_exposure_from_squared(std::span<double> squared, E50Mode mode)
{
    if (squared.empty()) {
        throw std::invalid_argument("global exposure of an empty grid");
    }
    ExposureSummary s;
    if (mode == E50Mode::mean) {
        double sum = 0.0;
        for (double v : squared) {
            sum += std::sqrt(v);
        }
        s.e50_v_per_m = sum / static_cast<double>(squared.size());
    } else {
        s.e50_v_per_m = std::sqrt(nearest_rank_percentile(squared, 50));
    }
    s.e95_v_per_m = std::sqrt(nearest_rank_percentile(squared, 95));
    s.eg_v_per_m = 0.5 * (s.e50_v_per_m + s.e95_v_per_m);
    return s;
}

ExposureSummary global_exposure(std::span<const double> values_v_per_m, E50Mode mode)
{
    if (values_v_per_m.empty()) {
        throw std::invalid_argument("global exposure of an empty grid");
    }
    std::vector<double> work(values_v_per_m.begin(), values_v_per_m.end());
    ExposureSummary s;
    if (mode == E50Mode::mean) {
        double sum = 0.0;
        for (double v : work) {
            sum += v;
        }
        s.e50_v_per_m = sum / static_cast<double>(work.size());
    } else {
        s.e50_v_per_m = nearest_rank_percentile(work, 50);
    }
    s.e95_v_per_m = nearest_rank_percentile(work, 95);
    s.eg_v_per_m = 0.5 * (s.e50_v_per_m + s.e95_v_per_m);
    return s;
}

ExposureSummary global_exposure(const FieldGrid& grid, E50Mode mode)
{
    return global_exposure(grid.values_v_per_m, mode);
}

int spectrum_usage(std::span<const Link> links)
{
    std::vector<int> channels;
    channels.reserve(links.size());
    for (const auto& l : links) {
        channels.push_back(l.channel);
    }
    std::sort(channels.begin(), channels.end());
    return static_cast<int>(std::unique(channels.begin(), channels.end()) - channels.begin());
}

WhiteSpaceGrid white_space_map(const NetworkSolution& solution, const Scenario& scenario)
{
    const auto tv = tv_channel_emitters(scenario);
    const auto cr = cr_channel_emitters(solution, scenario);
    return white_space_map(tv, cr, scenario);
}

void write_white_space_csv(std::ostream& out, const WhiteSpaceGrid& grid)
{
    out << "x_m,y_m,wa\n";
    for (std::size_t k = 0; k < grid.lattice.size(); ++k) {
        const auto p = grid.lattice.point(k);
        out << fmt::format("{:.9g},{:.9g},{}\n", p.x, p.y, grid.available_channels[k]);
    }
}

void write_white_space_pgm(std::ostream& out, const WhiteSpaceGrid& grid, int s_max)
{
    const auto nx = grid.lattice.nx();
    const auto ny = grid.lattice.ny();
    out << "P5\n" << nx << ' ' << ny << "\n255\n";
    for (std::size_t row = ny; row-- > 0;) {
        for (std::size_t col = 0; col < nx; ++col) {
            const int wa = grid.available_channels[row * nx + col];
            const int level = s_max > 0 ? static_cast<int>(std::lround(255.0 * wa / s_max)) : 0;
            out.put(static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0, 255))));
        }
    }
}

} // namespace crnet
