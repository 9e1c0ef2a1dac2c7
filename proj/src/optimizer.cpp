#include "crnet/optimizer.hpp"

#include "crnet/allocator.hpp"
#include "crnet/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Site indices sorted by id.
std::vector<std::size_t> id_order(const std::vector<SiteSpec>& sites)
{
    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sites[a].id < sites[b].id; });
    return order;
}

double cr_path_loss(const Scenario& s, Point a, Point b)
{
    return path_loss(s.path_loss.cr, distance(a, b));
}

} // namespace

void validate_weights(const Weights& w)
{
    for (double v : {w.w1, w.w2, w.w3}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument(fmt::format("weight {} outside [0,1]", v));
        }
    }
    if (std::abs(w.w1 + w.w2 + w.w3 - 1.0) > 1e-12) {
        throw std::invalid_argument(fmt::format("weights ({}, {}, {}) do not sum to 1", w.w1, w.w2, w.w3));
    }
}

double fitness(const MetricVector& m, const Weights& w, const FitnessContext& ctx)
{
    validate_weights(w);
    // Ratios are clamped against last-ulp excursions of the incremental
    // exposure sums; by construction of ctx they never exceed one.
    auto term = [](double weight, double value, double max) {
        return weight == 0.0 ? 0.0 : weight * (1.0 - std::clamp(value / max, 0.0, 1.0));
    };
    return term(w.w1, m.power_w, ctx.p_max_w) + term(w.w2, m.exposure_v_per_m, ctx.e_max_v_per_m) +
           term(w.w3, static_cast<double>(m.spectrum_channels), static_cast<double>(ctx.s_max));
}

SiteHistogram phase1_histogram(const Scenario& scenario, std::span<const std::uint64_t> seeds)
{
    const auto& sites = scenario.candidate_sites;
    const auto order = id_order(sites);
    SiteHistogram histogram;
    for (const auto& s : sites) {
        histogram[s.id] = 0;
    }
    for (auto seed : seeds) {
        std::vector<double> load(sites.size(), 0.0);
        for (const auto& user : generate_users(scenario, seed)) {
            std::optional<std::size_t> best;
            double best_pl = std::numeric_limits<double>::infinity();
            for (auto j : order) {
                const double pl = cr_path_loss(scenario, sites[j].position, user.position);
                if (pl < best_pl && load[j] + user.demanded_bitrate_bps <= sites[j].capacity_bps) {
                    best_pl = pl;
                    best = j;
                }
            }
            if (best) {
                load[*best] += user.demanded_bitrate_bps;
                ++histogram[sites[*best].id];
            }
        }
    }
    return histogram;
}

std::vector<SiteSpec> select_sites(const Scenario& scenario, const SiteHistogram& histogram, int n)
{
    if (n < 0 || n > static_cast<int>(scenario.candidate_sites.size())) {
        throw std::invalid_argument(
            fmt::format("cannot select {} sites out of {} candidates", n, scenario.candidate_sites.size()));
    }
    std::vector<std::pair<std::string, long>> ranked(histogram.begin(), histogram.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<SiteSpec> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(scenario.site(ranked[static_cast<std::size_t>(i)].first));
    }
    return out;
}

bool within_link_budget(const Scenario& scenario, const SiteSpec& site, double eirp_dbm, const User& user)
{
    const auto mapl = scenario.coverage.max_path_loss_for(user.demanded_bitrate_bps);
    if (!mapl) {
        return false;
    }
    const double pl = cr_path_loss(scenario, site.position, user.position);
    return pl <= *mapl - (site.max_eirp_dbm - eirp_dbm);
}

double coverage_fraction(const Scenario& scenario, std::span<const SiteSpec> sites, std::span<const User> users)
{
    if (users.empty()) {
        return 0.0;
    }
    const double margin = scenario.coverage.shadowing_margin_db();
    std::size_t covered = 0;
    for (const auto& u : users) {
        const auto mapl = scenario.coverage.max_path_loss_for(u.demanded_bitrate_bps);
        if (!mapl) {
            continue;
        }
        for (const auto& s : sites) {
            if (cr_path_loss(scenario, s.position, u.position) + margin <= *mapl) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(users.size());
}

int minimum_nbs(const Scenario& scenario, std::span<const std::uint64_t> seeds)
{
    return minimum_nbs(scenario, phase1_histogram(scenario, seeds), seeds);
}

int minimum_nbs(const Scenario& scenario, const SiteHistogram& histogram, std::span<const std::uint64_t> seeds)
{
    if (seeds.empty()) {
        throw std::invalid_argument("minimum_nbs needs at least one seed");
    }
    const int candidates = static_cast<int>(scenario.candidate_sites.size());
    const auto ranked = select_sites(scenario, histogram, candidates);
    const double margin = scenario.coverage.shadowing_margin_db();

    // best_pl[seed][user] tracks the best path loss over the top-n sites.
    std::vector<std::vector<User>> users;
    std::vector<std::vector<double>> best_pl;
    for (auto seed : seeds) {
        users.push_back(generate_users(scenario, seed));
        best_pl.emplace_back(users.back().size(), std::numeric_limits<double>::infinity());
    }
    double best_fraction = 0.0;
    for (int n = 1; n <= candidates; ++n) {
        const auto& site = ranked[static_cast<std::size_t>(n - 1)];
        double fraction_sum = 0.0;
        for (std::size_t s = 0; s < users.size(); ++s) {
            std::size_t covered = 0;
            for (std::size_t u = 0; u < users[s].size(); ++u) {
                auto& pl = best_pl[s][u];
                pl = std::min(pl, cr_path_loss(scenario, site.position, users[s][u].position));
                const auto mapl = scenario.coverage.max_path_loss_for(users[s][u].demanded_bitrate_bps);
                if (mapl && pl + margin <= *mapl) {
                    ++covered;
                }
            }
            fraction_sum += static_cast<double>(covered) / static_cast<double>(users[s].size());
        }
        const double fraction = fraction_sum / static_cast<double>(users.size());
        best_fraction = std::max(best_fraction, fraction);
        if (fraction >= scenario.coverage.cell_edge_coverage) {
            return n;
        }
    }
    throw CoverageError(fmt::format("no site count reaches {:.4g} coverage (best {:.4g})",
                                    scenario.coverage.cell_edge_coverage, best_fraction),
                        best_fraction);
}

PlanContext::PlanContext(Scenario scenario, std::vector<SiteSpec> sites)
    : scenario_(std::move(scenario)), sites_(std::move(sites)), lattice_(scenario_.lattice())
{
    if (sites_.empty()) {
        throw std::invalid_argument("PlanContext needs at least one site");
    }
    const auto n = static_cast<long>(lattice_.size());
    unit_field_sq_.resize(sites_.size());
    for (std::size_t b = 0; b < sites_.size(); ++b) {
        auto& grid = unit_field_sq_[b];
        grid.resize(lattice_.size());
        const Point site = sites_[b].position;
#pragma omp parallel for schedule(static)
        for (long k = 0; k < n; ++k) {
            const double pl = path_loss(scenario_.path_loss.cr, distance(site, lattice_.point(static_cast<std::size_t>(k))));
            grid[static_cast<std::size_t>(k)] = std::pow(10.0, (-43.15 - pl) / 10.0);
        }
    }

    const double f_top = scenario_.channels.back().center_frequency_mhz;
    std::vector<double> all_on(lattice_.size(), 0.0);
    double p_max = 0.0;
    for (std::size_t b = 0; b < sites_.size(); ++b) {
        const double coef = dbm_to_mw(sites_[b].max_eirp_dbm) * f_top * f_top;
        for (std::size_t k = 0; k < all_on.size(); ++k) {
            all_on[k] += coef * unit_field_sq_[b][k];
        }
        p_max += bs_power(scenario_.power_model, BsState::active, 1.0, 1.0);
    }
    fitness_.p_max_w = p_max;
    fitness_.e_max_v_per_m = global_exposure_from_squared(all_on, scenario_.exposure.e50).eg_v_per_m;
    fitness_.s_max = scenario_.s_max();
}

namespace {

/// Greedy Phase-2 build over one user realisation. BS metrics are tracked
/// per site; the exposure raster is rebuilt from the unit rasters whenever a
/// committed change alters any BS's radiated signature.
class Phase2Build {
public:
    Phase2Build(const PlanContext& ctx, const Weights& weights, std::uint64_t seed)
        : ctx_(ctx),
          s_(ctx.scenario()),
          weights_(weights),
          seed_(seed),
          users_(generate_users(s_, seed)),
          spectrum_(make_spectrum(ctx, users_)),
          track_exposure_(weights.w2 > 0.0)
    {
        validate_weights(weights);
        const auto nb = ctx.sites().size();
        const auto nu = users_.size();
        pl_.resize(nb * nu);
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t u = 0; u < nu; ++u) {
                pl_[b * nu + u] = cr_path_loss(s_, ctx.sites()[b].position, users_[u].position);
            }
        }
        budget_.resize(nu);
        for (std::size_t u = 0; u < nu; ++u) {
            const auto mapl = s_.coverage.max_path_loss_for(users_[u].demanded_bitrate_bps);
            budget_[u] = mapl ? *mapl : kNegInf;
        }
        bs_.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            bs_[b].eirp_dbm = ctx.sites()[b].max_eirp_dbm;
            bs_[b].channel_links.assign(static_cast<std::size_t>(s_.s_max()), 0);
        }
        channel_links_.assign(static_cast<std::size_t>(s_.s_max()), 0);
        user_bs_.assign(nu, -1);
        if (track_exposure_) {
            committed_coef_.assign(nb, 0.0);
            field_sq_.assign(ctx.lattice().size(), 0.0);
            scratch_.resize(field_sq_.size());
            committed_eg_ = 0.0;
        }
    }

    NetworkSolution run(MetricVector* tracked)
    {
        std::vector<int> unconnected;
        for (int u = 0; u < static_cast<int>(users_.size()); ++u) {
            if (!connect(u)) {
                unconnected.push_back(u);
            }
        }
        if (tracked) {
            *tracked = current_metrics();
        }
        return to_solution(std::move(unconnected));
    }

private:
    struct Bs {
        BsState state = BsState::sleep;
        double eirp_dbm = 0.0;
        double load_bps = 0.0;
        int links = 0;
        int top_channel = -1;
        std::vector<int> channel_links;
    };

    struct Candidate {
        bool feasible = false;
        int bs = -1;
        int channel = -1;
        double fit = kNegInf;
    };

    static SpectrumState make_spectrum(const PlanContext& ctx, const std::vector<User>& users)
    {
        std::vector<Point> bs_pos;
        std::vector<double> bs_eirp;
        for (const auto& s : ctx.sites()) {
            bs_pos.push_back(s.position);
            bs_eirp.push_back(s.max_eirp_dbm);
        }
        std::vector<Point> user_pos;
        for (const auto& u : users) {
            user_pos.push_back(u.position);
        }
        return SpectrumState(ctx.scenario(), std::move(bs_pos), std::move(bs_eirp), std::move(user_pos));
    }

    double pl(int b, int u) const { return pl_[static_cast<std::size_t>(b) * users_.size() + static_cast<std::size_t>(u)]; }

    const SiteSpec& site(int b) const { return ctx_.sites()[static_cast<std::size_t>(b)]; }

    double frequency(int channel) const { return s_.channels[static_cast<std::size_t>(channel)].center_frequency_mhz; }

    double power_of(int b, BsState state, double load, double eirp) const
    {
        const auto& st = site(b);
        return bs_power(s_.power_model, state, load / st.capacity_bps, eirp_fraction(eirp, st.max_eirp_dbm));
    }

    double coef_of(BsState state, double eirp, int top_channel) const
    {
        if (state != BsState::active || top_channel < 0) {
            return 0.0;
        }
        const double f = frequency(top_channel);
        return dbm_to_mw(eirp) * f * f;
    }

    double live_coef(int b) const
    {
        const auto& x = bs_[static_cast<std::size_t>(b)];
        return coef_of(x.state, x.eirp_dbm, x.top_channel);
    }

    bool covers(int b, int u) const
    {
        const auto& x = bs_[static_cast<std::size_t>(b)];
        return pl(b, u) <= budget_[static_cast<std::size_t>(u)] - (site(b).max_eirp_dbm - x.eirp_dbm);
    }

    int spectrum_in_use() const
    {
        int n = 0;
        for (int c : channel_links_) {
            n += c > 0 ? 1 : 0;
        }
        return n;
    }

    MetricVector current_metrics() const
    {
        MetricVector m;
        for (int b = 0; b < static_cast<int>(bs_.size()); ++b) {
            const auto& x = bs_[static_cast<std::size_t>(b)];
            m.power_w += power_of(b, x.state, x.load_bps, x.eirp_dbm);
        }
        m.spectrum_channels = spectrum_in_use();
        m.exposure_v_per_m = track_exposure_ ? committed_eg_ : 0.0;
        return m;
    }

    /// Metrics and fitness of the live state with (u -> b) added.
    Candidate evaluate(int u, int b)
    {
        Candidate cand;
        cand.bs = b;
        const auto& x = bs_[static_cast<std::size_t>(b)];
        const double demand = users_[static_cast<std::size_t>(u)].demanded_bitrate_bps;
        if (x.load_bps + demand > site(b).capacity_bps || !covers(b, u)) {
            return cand;
        }
        const auto channel = spectrum_.assign_channel(u, b);
        if (!channel) {
            return cand;
        }
        cand.feasible = true;
        cand.channel = *channel;

        const int new_top = std::max(x.top_channel, *channel);
        MetricVector m;
        for (int j = 0; j < static_cast<int>(bs_.size()); ++j) {
            const auto& y = bs_[static_cast<std::size_t>(j)];
            m.power_w += j == b ? power_of(j, BsState::active, y.load_bps + demand, y.eirp_dbm)
                                : power_of(j, y.state, y.load_bps, y.eirp_dbm);
        }
        m.spectrum_channels = spectrum_in_use() + (channel_links_[static_cast<std::size_t>(*channel)] == 0 ? 1 : 0);
        if (track_exposure_) {
            m.exposure_v_per_m = exposure_with(b, coef_of(BsState::active, x.eirp_dbm, new_top));
        }
        cand.fit = fitness(m, weights_, ctx_.fitness_context());
        return cand;
    }

    /// E_G of the live state with BS `changed` radiating `changed_coef`.
    double exposure_with(int changed, double changed_coef)
    {
        bool any = false;
        for (int j = 0; j < static_cast<int>(bs_.size()); ++j) {
            const double coef = j == changed ? changed_coef : live_coef(j);
            const double delta = coef - committed_coef_[static_cast<std::size_t>(j)];
            if (delta == 0.0) {
                continue;
            }
            if (!any) {
                std::copy(field_sq_.begin(), field_sq_.end(), scratch_.begin());
                any = true;
            }
            const auto unit = ctx_.unit_field_sq(j);
            for (std::size_t k = 0; k < scratch_.size(); ++k) {
                scratch_[k] += delta * unit[k];
            }
        }
        if (!any) {
            return committed_eg_;
        }
        for (auto& v : scratch_) {
            v = std::max(v, 0.0);
        }
        return global_exposure_from_squared(scratch_, s_.exposure.e50).eg_v_per_m;
    }

    void sync_exposure()
    {
        if (!track_exposure_) {
            return;
        }
        bool changed = false;
        for (int j = 0; j < static_cast<int>(bs_.size()); ++j) {
            if (live_coef(j) != committed_coef_[static_cast<std::size_t>(j)]) {
                changed = true;
                break;
            }
        }
        if (!changed) {
            return;
        }
        std::fill(field_sq_.begin(), field_sq_.end(), 0.0);
        for (int j = 0; j < static_cast<int>(bs_.size()); ++j) {
            const double coef = live_coef(j);
            committed_coef_[static_cast<std::size_t>(j)] = coef;
            if (coef == 0.0) {
                continue;
            }
            const auto unit = ctx_.unit_field_sq(j);
            for (std::size_t k = 0; k < field_sq_.size(); ++k) {
                field_sq_[k] += coef * unit[k];
            }
        }
        std::copy(field_sq_.begin(), field_sq_.end(), scratch_.begin());
        committed_eg_ = global_exposure_from_squared(scratch_, s_.exposure.e50).eg_v_per_m;
    }

    void attach(int u, int b, int channel)
    {
        auto& x = bs_[static_cast<std::size_t>(b)];
        spectrum_.add_link(u, b, channel);
        if (x.state != BsState::active) {
            x.state = BsState::active;
            x.eirp_dbm = site(b).max_eirp_dbm;
        }
        x.load_bps += users_[static_cast<std::size_t>(u)].demanded_bitrate_bps;
        ++x.links;
        ++x.channel_links[static_cast<std::size_t>(channel)];
        x.top_channel = std::max(x.top_channel, channel);
        ++channel_links_[static_cast<std::size_t>(channel)];
        user_bs_[static_cast<std::size_t>(u)] = b;
        sync_exposure();
    }

    /// Drops u's link without touching the committed exposure raster.
    int detach(int u)
    {
        const int b = user_bs_[static_cast<std::size_t>(u)];
        const int channel = spectrum_.channel_of(u);
        auto& x = bs_[static_cast<std::size_t>(b)];
        spectrum_.remove_link(u);
        x.load_bps -= users_[static_cast<std::size_t>(u)].demanded_bitrate_bps;
        --x.links;
        --x.channel_links[static_cast<std::size_t>(channel)];
        --channel_links_[static_cast<std::size_t>(channel)];
        user_bs_[static_cast<std::size_t>(u)] = -1;
        x.top_channel = -1;
        for (int c = s_.s_max() - 1; c >= 0; --c) {
            if (x.channel_links[static_cast<std::size_t>(c)] > 0) {
                x.top_channel = c;
                break;
            }
        }
        if (x.links == 0) {
            x.state = BsState::sleep;
            x.load_bps = 0.0;
        }
        return channel;
    }

    std::vector<int> scan_order(int u) const
    {
        std::vector<int> order(bs_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double pa = pl(a, u);
            const double pb = pl(b, u);
            return pa != pb ? pa < pb : site(a).id < site(b).id;
        });
        return order;
    }

    bool connect(int u)
    {
        const auto order = scan_order(u);
        Candidate best;
        for (int b : order) {
            if (bs_[static_cast<std::size_t>(b)].state == BsState::active) {
                auto cand = evaluate(u, b);
                if (cand.feasible && cand.fit > best.fit) {
                    best = cand;
                }
            }
        }
        if (best.feasible) {
            attach(u, best.bs, best.channel);
            return true;
        }
        for (int b : order) {
            if (bs_[static_cast<std::size_t>(b)].state != BsState::active) {
                auto cand = evaluate(u, b);
                if (cand.feasible && cand.fit > best.fit) {
                    best = cand;
                }
            }
        }
        if (!best.feasible) {
            return false;
        }
        attach(u, best.bs, best.channel);
        load_balance(best.bs, u);
        return true;
    }

    /// One pass over the connected users, moving each to the newly active BS
    /// when that strictly improves fitness.
    void load_balance(int fresh, int trigger)
    {
        for (int v = 0; v < static_cast<int>(users_.size()); ++v) {
            const int from = user_bs_[static_cast<std::size_t>(v)];
            if (v == trigger || from < 0 || from == fresh) {
                continue;
            }
            const double current = fitness(current_metrics(), weights_, ctx_.fitness_context());
            const int old_channel = detach(v);
            const auto cand = evaluate(v, fresh);
            if (cand.feasible && cand.fit > current) {
                attach(v, fresh, cand.channel);
            } else {
                attach(v, from, old_channel);
            }
        }
    }

    NetworkSolution to_solution(std::vector<int> unconnected) const
    {
        NetworkSolution sol;
        sol.architecture = Architecture::cloud;
        sol.users = users_;
        sol.weights = weights_;
        sol.seed = seed_;
        sol.unconnected_users = std::move(unconnected);
        for (std::size_t b = 0; b < bs_.size(); ++b) {
            BaseStation bs;
            bs.site = ctx_.sites()[b];
            bs.state = bs_[b].state;
            bs.eirp_dbm = bs_[b].eirp_dbm;
            bs.load_bps = bs_[b].load_bps;
            sol.base_stations.push_back(std::move(bs));
        }
        for (int u = 0; u < static_cast<int>(users_.size()); ++u) {
            const int b = user_bs_[static_cast<std::size_t>(u)];
            if (b < 0) {
                continue;
            }
            sol.base_stations[static_cast<std::size_t>(b)].served_links.push_back(static_cast<int>(sol.links.size()));
            sol.links.push_back({u, b, spectrum_.channel_of(u), s_.allocator.user_eirp_dbm,
                                 bs_[static_cast<std::size_t>(b)].eirp_dbm, users_[static_cast<std::size_t>(u)].demanded_bitrate_bps});
        }
        return sol;
    }

    const PlanContext& ctx_;
    const Scenario& s_;
    Weights weights_;
    std::uint64_t seed_;
    std::vector<User> users_;
    SpectrumState spectrum_;
    bool track_exposure_;

    std::vector<double> pl_;     // bs x user
    std::vector<double> budget_; // allowable path loss at max EIRP, per user
    std::vector<Bs> bs_;
    std::vector<int> channel_links_;
    std::vector<int> user_bs_;

    std::vector<double> committed_coef_;
    std::vector<double> field_sq_;
    std::vector<double> scratch_;
    double committed_eg_ = 0.0;
};

} // namespace

NetworkSolution phase2_build(const PlanContext& ctx, const Weights& weights, std::uint64_t seed, MetricVector* tracked)
{
    Phase2Build build(ctx, weights, seed);
    return build.run(tracked);
}

NetworkSolution phase2_optimize(const PlanContext& ctx, const Weights& weights, std::uint64_t seed)
{
    auto solution = phase2_build(ctx, weights, seed);
    trim_eirp(solution, ctx.scenario());
    finalize_metrics(solution, ctx.scenario());
    return solution;
}

int trim_eirp(NetworkSolution& solution, const Scenario& scenario)
{
    const double step = scenario.optimizer.trim_step_db;
    int steps = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& bs : solution.base_stations) {
            if (bs.state != BsState::active || bs.served_links.empty()) {
                continue;
            }
            const double lowered = bs.eirp_dbm - step;
            const bool keeps_all = std::all_of(bs.served_links.begin(), bs.served_links.end(), [&](int li) {
                const auto& user = solution.users[static_cast<std::size_t>(solution.links[static_cast<std::size_t>(li)].user)];
                return within_link_budget(scenario, bs.site, lowered, user);
            });
            if (keeps_all) {
                bs.eirp_dbm = lowered;
                ++steps;
                changed = true;
            }
        }
    }
    for (auto& link : solution.links) {
        link.bs_eirp_dbm = solution.base_stations[static_cast<std::size_t>(link.bs)].eirp_dbm;
    }
    return steps;
}

void finalize_metrics(NetworkSolution& solution, const Scenario& scenario)
{
    solution.metrics.power_w = network_power(solution, scenario.power_model);
    const auto emitters = exposure_emitters(solution, scenario);
    solution.metrics.exposure_v_per_m = global_exposure(field_grid(emitters, scenario), scenario.exposure.e50).eg_v_per_m;
    solution.metrics.spectrum_channels = spectrum_usage(solution.links);
    solution.wa_mean = white_space_map(solution, scenario).mean_availability;
}

double trailing_rel_std(std::span<const double> values, int window)
{
    const auto w = static_cast<std::size_t>(window);
    if (window < 2 || values.size() < w) {
        return std::numeric_limits<double>::infinity();
    }
    const auto tail = values.subspan(values.size() - w);
    double mean = 0.0;
    for (double v : tail) {
        mean += v;
    }
    mean /= static_cast<double>(w);
    double ss = 0.0;
    for (double v : tail) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(w - 1));
    if (mean == 0.0) {
        return sd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return sd / std::abs(mean);
}

ParetoPoint run_converged(const PlanContext& ctx, const Weights& weights, std::uint64_t base_seed, int max_sim)
{
    const auto& s = ctx.scenario();
    const int limit = max_sim > 0 ? max_sim : s.max_sim;
    const int window = s.optimizer.convergence_window;

    ParetoPoint point;
    point.weights = weights;
    point.seed = base_seed;
    KpiMeans sum;
    std::vector<double> prog_power;
    std::vector<double> prog_exposure;
    std::vector<double> prog_spectrum;
    for (int i = 0; i < limit; ++i) {
        const auto sol = phase2_optimize(ctx, weights, base_seed + static_cast<std::uint64_t>(i));
        point.all_feasible = point.all_feasible && sol.feasible();
        sum.power_w += sol.metrics.power_w;
        sum.exposure_v_per_m += sol.metrics.exposure_v_per_m;
        sum.spectrum_channels += sol.metrics.spectrum_channels;
        sum.wa_mean += sol.wa_mean;
        const double n = i + 1;
        prog_power.push_back(sum.power_w / n);
        prog_exposure.push_back(sum.exposure_v_per_m / n);
        prog_spectrum.push_back(sum.spectrum_channels / n);
        point.runs = i + 1;
        if (point.runs >= window && trailing_rel_std(prog_power, window) <= s.convergence_rel_std &&
            trailing_rel_std(prog_exposure, window) <= s.convergence_rel_std &&
            trailing_rel_std(prog_spectrum, window) <= s.convergence_rel_std) {
            point.converged = true;
            break;
        }
    }
    const double n = point.runs;
    point.metrics = {sum.power_w / n, sum.exposure_v_per_m / n, sum.spectrum_channels / n, sum.wa_mean / n};
    return point;
}

} // namespace crnet
