#include "crnet/baseline.hpp"

#include "crnet/allocator.hpp"
#include "crnet/metrics.hpp"
#include "crnet/optimizer.hpp"
#include "crnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crnet {

NetworkSolution baseline_optimize(const PlanContext& ctx, std::uint64_t seed)
{
    const auto& s = ctx.scenario();
    const auto& sites = ctx.sites();
    NetworkSolution sol;
    sol.architecture = Architecture::traditional;
    sol.seed = seed;
    sol.users = generate_users(s, seed);

    std::vector<Point> bs_pos;
    std::vector<double> bs_eirp;
    for (const auto& site : sites) {
        bs_pos.push_back(site.position);
        bs_eirp.push_back(site.max_eirp_dbm);
        sol.base_stations.push_back({site, BsState::idle, site.max_eirp_dbm, 0.0, {}});
    }
    std::vector<Point> user_pos;
    for (const auto& u : sol.users) {
        user_pos.push_back(u.position);
    }
    SpectrumState spectrum(s, std::move(bs_pos), std::move(bs_eirp), std::move(user_pos));
    const LocalView view{s.isl.cr_threshold_dbm + s.baseline.sensing_floor_offset_db, s.baseline.visibility_radius_m};

    const int nb = static_cast<int>(sites.size());
    for (int u = 0; u < static_cast<int>(sol.users.size()); ++u) {
        const auto& user = sol.users[static_cast<std::size_t>(u)];
        std::vector<double> pl(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) {
            pl[static_cast<std::size_t>(b)] = path_loss(s.path_loss.cr, distance(sites[static_cast<std::size_t>(b)].position, user.position));
        }
        std::vector<int> order(static_cast<std::size_t>(nb));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double pa = pl[static_cast<std::size_t>(a)];
            const double pb = pl[static_cast<std::size_t>(b)];
            return pa != pb ? pa < pb : sites[static_cast<std::size_t>(a)].id < sites[static_cast<std::size_t>(b)].id;
        });
        bool connected = false;
        for (int b : order) {
            auto& bs = sol.base_stations[static_cast<std::size_t>(b)];
            if (bs.load_bps + user.demanded_bitrate_bps > bs.site.capacity_bps ||
                !within_link_budget(s, bs.site, bs.eirp_dbm, user)) {
                continue;
            }
            const auto channel = spectrum.assign_channel_local(u, b, view);
            if (!channel) {
                continue;
            }
            spectrum.add_link(u, b, *channel);
            bs.state = BsState::active;
            bs.load_bps += user.demanded_bitrate_bps;
            bs.served_links.push_back(static_cast<int>(sol.links.size()));
            sol.links.push_back({u, b, *channel, s.allocator.user_eirp_dbm, bs.eirp_dbm, user.demanded_bitrate_bps});
            connected = true;
            break;
        }
        if (!connected) {
            sol.unconnected_users.push_back(u);
        }
    }
    finalize_metrics(sol, s);
    return sol;
}

NetworkSolution with_idle_floor(NetworkSolution solution, const Scenario& scenario)
{
    for (auto& bs : solution.base_stations) {
        if (bs.state == BsState::sleep) {
            bs.state = BsState::idle;
        }
    }
    solution.metrics.power_w = network_power(solution, scenario.power_model);
    return solution;
}

namespace {

KpiMeans kpis(const NetworkSolution& sol)
{
    return {sol.metrics.power_w, sol.metrics.exposure_v_per_m, static_cast<double>(sol.metrics.spectrum_channels), sol.wa_mean};
}

KpiMeans mean_of(const std::vector<KpiMeans>& rows)
{
    KpiMeans m;
    for (const auto& r : rows) {
        m.power_w += r.power_w;
        m.exposure_v_per_m += r.exposure_v_per_m;
        m.spectrum_channels += r.spectrum_channels;
        m.wa_mean += r.wa_mean;
    }
    if (!rows.empty()) {
        const double n = static_cast<double>(rows.size());
        m = {m.power_w / n, m.exposure_v_per_m / n, m.spectrum_channels / n, m.wa_mean / n};
    }
    return m;
}

} // namespace

KpiMeans ComparisonReport::cloud_mean(Marker marker) const
{
    return mean_of(cloud[static_cast<std::size_t>(marker) - 1]);
}

KpiMeans ComparisonReport::baseline_mean() const
{
    return mean_of(baseline);
}

ComparisonReport compare_architectures(const PlanContext& ctx,
                                       double resolution,
                                       std::uint64_t base_seed,
                                       int seed_count,
                                       int jobs)
{
    if (seed_count < 1) {
        throw std::invalid_argument("comparison needs at least one seed");
    }
    const auto weights = enumerate_weights(resolution);
    const auto n_seeds = static_cast<std::size_t>(seed_count);
    const auto n_weights = weights.size();

    struct Run {
        KpiMeans kpi;
        int violations = 0;
    };
    // Slots [0, seeds*weights) are cloud builds, the rest one baseline per seed.
    std::vector<Run> runs(n_seeds * n_weights + n_seeds);
    parallel_for_jobs(runs.size(), jobs, [&](std::size_t i) {
        if (i < n_seeds * n_weights) {
            const auto seed = base_seed + i / n_weights;
            const auto sol = phase2_optimize(ctx, weights[i % n_weights], seed);
            runs[i] = {kpis(sol), isl_violations(sol, ctx.scenario())};
        } else {
            const auto seed = base_seed + (i - n_seeds * n_weights);
            const auto sol = baseline_optimize(ctx, seed);
            runs[i] = {kpis(sol), isl_violations(sol, ctx.scenario())};
        }
    });

    ComparisonReport report;
    const auto& f = ctx.fitness_context();
    const KpiScale scale{f.p_max_w, f.e_max_v_per_m, static_cast<double>(f.s_max)};
    for (std::size_t k = 0; k < n_seeds; ++k) {
        report.seeds.push_back(base_seed + k);
        std::vector<ParetoPoint> points(n_weights);
        for (std::size_t w = 0; w < n_weights; ++w) {
            points[w] = {weights[w], runs[k * n_weights + w].kpi, 1, false, true, base_seed + k};
        }
        const auto markers = find_markers(points, scale);
        for (std::size_t m = 0; m < 4; ++m) {
            report.cloud[m].push_back(points[markers[m]].metrics);
            report.cloud_violations[m].push_back(runs[k * n_weights + markers[m]].violations);
        }
        const auto& base = runs[n_seeds * n_weights + k];
        report.baseline.push_back(base.kpi);
        report.baseline_violations.push_back(base.violations);
    }
    return report;
}

double differential_pct(double baseline, double cloud)
{
    if (baseline == 0.0) {
        return cloud == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
    return 100.0 * (baseline - cloud) / baseline;
}

double sign_test_p(std::span<const double> first, std::span<const double> second)
{
    if (first.size() != second.size()) {
        throw std::invalid_argument("sign test needs paired samples");
    }
    int wins = 0;
    int n = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i] < second[i]) {
            ++wins;
            ++n;
        } else if (first[i] > second[i]) {
            ++n;
        }
    }
    if (n == 0) {
        return 1.0;
    }
    // P(X >= wins), X ~ Binomial(n, 1/2)
    double p = 0.0;
    for (int k = wins; k <= n; ++k) {
        p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
    }
    return std::min(1.0, p);
}

} // namespace crnet
