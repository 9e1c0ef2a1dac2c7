#include "crnet/pareto.hpp"

#include "crnet/optimizer.hpp"
#include "crnet/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace crnet {

std::vector<Weights> enumerate_weights(double resolution)
{
    if (!(resolution > 0.0 && resolution <= 1.0)) {
        throw std::invalid_argument(fmt::format("weight resolution {} outside (0,1]", resolution));
    }
    const double inverse = 1.0 / resolution;
    const long k = std::lround(inverse);
    if (k < 1 || std::abs(inverse - static_cast<double>(k)) > 1e-9 * inverse) {
        throw std::invalid_argument(fmt::format("1/{} is not a positive integer", resolution));
    }
    std::vector<Weights> out;
    const double kd = static_cast<double>(k);
    for (long i = 0; i <= k; ++i) {
        for (long j = 0; i + j <= k; ++j) {
            const long l = k - i - j;
            out.push_back({static_cast<double>(i) / kd, static_cast<double>(j) / kd, static_cast<double>(l) / kd});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool dominates(const KpiMeans& p, const KpiMeans& q)
{
    const bool no_worse = p.power_w <= q.power_w && p.exposure_v_per_m <= q.exposure_v_per_m &&
                          p.spectrum_channels <= q.spectrum_channels;
    const bool better = p.power_w < q.power_w || p.exposure_v_per_m < q.exposure_v_per_m ||
                        p.spectrum_channels < q.spectrum_channels;
    return no_worse && better;
}

std::vector<std::size_t> pareto_front_indices(std::span<const ParetoPoint> points)
{
    // Sort by (power, exposure, spectrum): a dominator always precedes what it
    // dominates, so each point only needs checking against kept front members.
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    auto key = [&](std::size_t i) {
        const auto& m = points[i].metrics;
        return std::tuple(m.power_w, m.exposure_v_per_m, m.spectrum_channels);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    std::vector<std::size_t> kept;
    for (auto i : order) {
        const bool dominated = std::any_of(kept.begin(), kept.end(),
                                           [&](std::size_t f) { return dominates(points[f].metrics, points[i].metrics); });
        if (!dominated) {
            kept.push_back(i);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points)
{
    std::vector<ParetoPoint> out;
    for (auto i : pareto_front_indices(points)) {
        out.push_back(points[i]);
    }
    return out;
}

std::array<std::size_t, 4> find_markers(std::span<const ParetoPoint> points, const KpiScale& scale)
{
    if (points.empty()) {
        throw std::invalid_argument("markers of an empty sweep");
    }
    auto argmin = [&](auto key) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (key(points[i].metrics) < key(points[best].metrics)) {
                best = i;
            }
        }
        return best;
    };
    std::array<std::size_t, 4> m{};
    m[0] = argmin([](const KpiMeans& k) { return std::tuple(k.power_w, k.exposure_v_per_m, k.spectrum_channels); });
    m[1] = argmin([](const KpiMeans& k) { return std::tuple(k.spectrum_channels, k.power_w, k.exposure_v_per_m); });
    m[2] = argmin([](const KpiMeans& k) { return std::tuple(k.exposure_v_per_m, k.power_w, k.spectrum_channels); });
    m[3] = argmin([&](const KpiMeans& k) {
        const double balanced = (k.power_w / scale.power_w + k.exposure_v_per_m / scale.exposure_v_per_m +
                                 k.spectrum_channels / scale.spectrum_channels) /
                                3.0;
        return std::tuple(balanced, k.power_w, k.exposure_v_per_m, k.spectrum_channels);
    });
    return m;
}

std::optional<Marker> SweepResult::marker_of(std::size_t i) const
{
    for (std::size_t m = 0; m < markers.size(); ++m) {
        if (markers[m] == i) {
            return static_cast<Marker>(m + 1);
        }
    }
    return std::nullopt;
}

SweepResult sweep(const PlanContext& ctx, double resolution, std::uint64_t base_seed, const SweepOptions& options)
{
    const auto weights = enumerate_weights(resolution);
    SweepResult result;
    result.points.resize(weights.size());
    parallel_for_jobs(weights.size(), options.jobs, [&](std::size_t i) {
        result.points[i] = run_converged(ctx, weights[i], base_seed, options.max_sim);
    });
    const auto front = pareto_front_indices(result.points);
    result.on_front.assign(result.points.size(), false);
    for (auto i : front) {
        result.on_front[i] = true;
    }
    const auto& f = ctx.fitness_context();
    result.markers = find_markers(result.points, {f.p_max_w, f.e_max_v_per_m, static_cast<double>(f.s_max)});
    return result;
}

} // namespace crnet
