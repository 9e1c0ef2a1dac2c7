#include "support.hpp"

#include "crnet/allocator.hpp"
#include "crnet/metrics.hpp"
#include "crnet/optimizer.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

using namespace crnet;

namespace {

Scenario random_micro(test::Gen& gen)
{
    auto s = test::micro_scenario(2000, 2000, 1, gen.integer(1, 4), gen.integer(10, 40));
    s.candidate_sites.clear();
    const int n = gen.integer(2, 6);
    for (int i = 0; i < n; ++i) {
        s.candidate_sites.push_back({"s" + std::to_string(i), {gen.uniform(0, 2000), gen.uniform(0, 2000)},
                                     gen.uniform(25, 40), gen.uniform(3e6, 15e6)});
    }
    s.coverage.mcs_table = {{gen.uniform(115, 135), 2e6}};
    s.isl.cr_threshold_dbm = gen.uniform(-110, -90);
    s.grid_resolution_m = 100.0;
    validate(s);
    return s;
}

Weights random_weights(test::Gen& gen)
{
    const int a = gen.integer(0, 10);
    const int b = gen.integer(0, 10 - a);
    return {a / 10.0, b / 10.0, (10 - a - b) / 10.0};
}

/// Structural invariants of any cloud build.
void check_solution(const NetworkSolution& sol, const Scenario& s)
{
    std::vector<int> link_count(sol.users.size(), 0);
    std::vector<double> load(sol.base_stations.size(), 0.0);
    for (std::size_t li = 0; li < sol.links.size(); ++li) {
        const auto& l = sol.links[li];
        ++link_count[static_cast<std::size_t>(l.user)];
        load[static_cast<std::size_t>(l.bs)] += l.bitrate_bps;
        const auto& bs = sol.base_stations[static_cast<std::size_t>(l.bs)];
        CHECK(bs.state == BsState::active);
        CHECK(l.bs_eirp_dbm == bs.eirp_dbm);
        CHECK(l.channel >= 0);
        CHECK(l.channel < s.s_max());
        CHECK(within_link_budget(s, bs.site, bs.eirp_dbm, sol.users[static_cast<std::size_t>(l.user)]));
    }
    std::set<int> unconnected(sol.unconnected_users.begin(), sol.unconnected_users.end());
    for (std::size_t u = 0; u < sol.users.size(); ++u) {
        CHECK(link_count[u] == (unconnected.count(static_cast<int>(u)) ? 0 : 1));
    }
    for (std::size_t b = 0; b < sol.base_stations.size(); ++b) {
        const auto& bs = sol.base_stations[b];
        CHECK(bs.load_bps == doctest::Approx(load[b]));
        CHECK(bs.load_bps <= bs.site.capacity_bps);
        CHECK(bs.eirp_dbm <= bs.site.max_eirp_dbm);
        CHECK((bs.state == BsState::active) == !bs.served_links.empty());
        CHECK(bs.state != BsState::idle);
    }
    CHECK(isl_violations(sol, s) == 0);
    CHECK(spectrum_usage(sol.links) <= s.s_max());
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int n)
{
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
    std::iota(seeds.begin(), seeds.end(), first);
    return seeds;
}

} // namespace

TEST_CASE("weights must sit on the simplex")
{
    CHECK_NOTHROW(validate_weights({1, 0, 0}));
    CHECK_NOTHROW(validate_weights({0.2, 0.3, 0.5}));
    CHECK_NOTHROW(validate_weights({0.1, 0.1, 0.8}));
    CHECK_THROWS_AS(validate_weights({0.5, 0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate_weights({-0.1, 0.6, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate_weights({0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_weights({std::nan(""), 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("fitness: worked examples")
{
    const FitnessContext ctx{1000.0, 0.01, 16};
    CHECK(fitness({0, 0, 0}, {1, 0, 0}, ctx) == 1.0);
    CHECK(fitness({0, 0, 0}, {0.2, 0.3, 0.5}, ctx) == doctest::Approx(1.0));
    CHECK(fitness({1000.0, 0.01, 16}, {0.2, 0.3, 0.5}, ctx) == 0.0);
    CHECK(fitness({500.0, 0.0, 0}, {1, 0, 0}, ctx) == 0.5);
    CHECK(fitness({500.0, 0.005, 8}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, ctx) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fitness({250.0, 0.0075, 4}, {0.5, 0.5, 0}, ctx) == doctest::Approx(0.5 * 0.75 + 0.5 * 0.25));
    // A dropped term ignores whatever sits in its slot.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(fitness({0.0, nan, 4}, {0, 0, 1}, ctx) == doctest::Approx(0.75));
}

TEST_CASE("fitness: bounded, monotone in each KPI")
{
    const FitnessContext ctx{1500.0, 0.002, 40};
    test::Gen gen(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto w = random_weights(gen);
        const MetricVector m{gen.uniform(0, 1500), gen.uniform(0, 0.002), gen.integer(0, 40)};
        const double f = fitness(m, w, ctx);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-15);
        auto worse = m;
        worse.power_w = std::min(1500.0, m.power_w + gen.uniform(0, 100));
        worse.exposure_v_per_m = std::min(0.002, m.exposure_v_per_m + gen.uniform(0, 1e-4));
        worse.spectrum_channels = std::min(40, m.spectrum_channels + gen.integer(0, 3));
        CHECK(fitness(worse, w, ctx) <= f);
    }
}

TEST_CASE("phase 1 histogram: unlimited capacity votes for the nearest site")
{
    test::Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_micro(gen);
        for (auto& site : s.candidate_sites) {
            site.capacity_bps = 1e12;
        }
        const auto seeds = seed_range(gen.integer(0, 1000), 3);
        const auto h = phase1_histogram(s, seeds);
        std::map<std::string, long> oracle;
        for (const auto& site : s.candidate_sites) {
            oracle[site.id] = 0;
        }
        for (auto seed : seeds) {
            for (const auto& u : generate_users(s, seed)) {
                const SiteSpec* best = nullptr;
                for (const auto& site : s.candidate_sites) {
                    if (!best || distance(site.position, u.position) < distance(best->position, u.position)) {
                        best = &site;
                    }
                }
                ++oracle[best->id];
            }
        }
        CHECK(h == oracle);
    }
}

TEST_CASE("phase 1 histogram respects capacity")
{
    test::Gen gen(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_micro(gen);
        for (auto& site : s.candidate_sites) {
            site.capacity_bps = s.bitrate_per_user_bps * gen.integer(1, 4);
        }
        const auto seeds = seed_range(7, 4);
        const auto h = phase1_histogram(s, seeds);
        long total = 0;
        long cap_total = 0;
        for (const auto& site : s.candidate_sites) {
            const long cap = std::lround(site.capacity_bps / s.bitrate_per_user_bps);
            CHECK(h.at(site.id) <= cap * 4);
            total += h.at(site.id);
            cap_total += cap;
        }
        CHECK(total == 4 * std::min<long>(s.user_count, cap_total));
    }
}

TEST_CASE("site selection orders by votes then id")
{
    auto s = test::micro_scenario(1000, 1000, 4, 1, 1);
    const SiteHistogram h{{"s0", 3}, {"s1", 5}, {"s2", 3}, {"s3", 0}};
    const auto top = select_sites(s, h, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].id == "s1");
    CHECK(top[1].id == "s0");
    CHECK(top[2].id == "s2");
    CHECK(select_sites(s, h, 0).empty());
    CHECK_THROWS_AS(select_sites(s, h, 5), std::invalid_argument);
}

TEST_CASE("link budget: EIRP backoff eats path-loss headroom one for one")
{
    auto s = test::micro_scenario(1000, 1000, 1, 1, 1);
    s.coverage.mcs_table = {{130.0, 2e6}};
    // 40 + 30 log10(d) = 120 at d = 1000^(80/30).
    const SiteSpec site{"a", {0, 0}, 30.0, 10e6};
    const double d120 = std::pow(10.0, 80.0 / 30.0);
    const User u{0, {d120, 0}, 1e6};
    CHECK(within_link_budget(s, site, 30.0, u));
    CHECK(within_link_budget(s, site, 20.0 + 1e-9, u));
    CHECK_FALSE(within_link_budget(s, site, 19.9, u));
    const User greedy{1, {10, 0}, 5e6};
    CHECK_FALSE(within_link_budget(s, site, 30.0, greedy));
}

TEST_CASE("minimum_nbs agrees with a brute-force coverage scan")
{
    test::Gen gen(77);
    int found = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto s = random_micro(gen);
        s.coverage.shadowing_sigma_db = gen.uniform(0, 4);
        s.coverage.cell_edge_coverage = gen.uniform(0.3, 0.95);
        const auto seeds = seed_range(gen.integer(0, 100), 3);
        const auto h = phase1_histogram(s, seeds);
        std::optional<int> expected;
        double best = 0.0;
        double prev = 0.0;
        for (int n = 1; n <= static_cast<int>(s.candidate_sites.size()); ++n) {
            const auto sites = select_sites(s, h, n);
            double sum = 0.0;
            for (auto seed : seeds) {
                sum += coverage_fraction(s, sites, generate_users(s, seed));
            }
            const double frac = sum / 3.0;
            CHECK(frac >= prev);
            prev = frac;
            best = std::max(best, frac);
            if (!expected && frac >= s.coverage.cell_edge_coverage) {
                expected = n;
            }
        }
        if (expected) {
            CHECK(minimum_nbs(s, seeds) == *expected);
            ++found;
        } else {
            try {
                minimum_nbs(s, seeds);
                FAIL("expected CoverageError");
            } catch (const CoverageError& e) {
                CHECK(e.best_fraction() == doctest::Approx(best));
            }
        }
    }
    CHECK(found > 5);
}

TEST_CASE("unreachable coverage reports the best fraction")
{
    auto s = test::micro_scenario(20000, 20000, 2, 1, 30);
    s.coverage.mcs_table = {{80.0, 2e6}};
    const auto seeds = seed_range(1, 2);
    CHECK_THROWS_AS(minimum_nbs(s, seeds), CoverageError);
    CHECK_THROWS_AS(minimum_nbs(s, std::span<const std::uint64_t>{}), std::invalid_argument);
}

TEST_CASE("plan context normalisers")
{
    auto s = test::micro_scenario(1000, 1000, 3, 2, 5);
    const PlanContext ctx(s, s.candidate_sites);
    CHECK(ctx.fitness_context().p_max_w == 3 * 64.0);
    CHECK(ctx.fitness_context().s_max == 2);
    // All sites at max EIRP on the top channel, through the public field path.
    std::vector<Emitter> all;
    for (const auto& site : s.candidate_sites) {
        all.push_back({site.position, site.max_eirp_dbm, s.channels.back().center_frequency_mhz, EmitterKind::cr_bs});
    }
    const double eg = global_exposure(field_grid(all, s)).eg_v_per_m;
    CHECK(ctx.fitness_context().e_max_v_per_m == doctest::Approx(eg).epsilon(1e-12));
    CHECK_THROWS_AS(PlanContext(s, {}), std::invalid_argument);
}

TEST_CASE("phase 2: invariants over random scenarios and weights")
{
    test::Gen gen(99);
    int infeasible = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = random_micro(gen);
        const PlanContext ctx(s, s.candidate_sites);
        for (int k = 0; k < 3; ++k) {
            const auto w = random_weights(gen);
            const auto seed = static_cast<std::uint64_t>(gen.integer(0, 1 << 20));
            CAPTURE(trial);
            CAPTURE(w.w1);
            CAPTURE(w.w2);
            const auto sol = phase2_optimize(ctx, w, seed);
            check_solution(sol, s);
            infeasible += sol.feasible() ? 0 : 1;
            const auto again = phase2_optimize(ctx, w, seed);
            CHECK(again.metrics.power_w == sol.metrics.power_w);
            CHECK(again.metrics.exposure_v_per_m == sol.metrics.exposure_v_per_m);
            CHECK(again.links.size() == sol.links.size());
        }
    }
    // The generator should produce some crowded cases too.
    CHECK(infeasible > 0);
}

TEST_CASE("phase 2: a user that no site can reach stays unconnected")
{
    auto s = test::micro_scenario(1000, 1000, 1, 2, 6);
    s.coverage.mcs_table = {{45.0, 2e6}};
    const PlanContext ctx(s, s.candidate_sites);
    const auto sol = phase2_optimize(ctx, {1, 0, 0}, 1);
    CHECK(sol.links.empty());
    CHECK(sol.unconnected_users.size() == 6);
    CHECK(sol.metrics.power_w == 9.0);
    CHECK(sol.metrics.exposure_v_per_m == 0.0);
    CHECK(sol.metrics.spectrum_channels == 0);
    CHECK(sol.wa_mean == 2.0);
}

TEST_CASE("phase 2: incremental metrics match a from-scratch evaluation")
{
    test::Gen gen(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_micro(gen);
        const PlanContext ctx(s, s.candidate_sites);
        const Weights w = gen.coin() ? Weights{0.2, 0.5, 0.3} : Weights{0, 1, 0};
        MetricVector tracked;
        auto sol = phase2_build(ctx, w, static_cast<std::uint64_t>(trial), &tracked);
        finalize_metrics(sol, s);
        CHECK(tracked.power_w == doctest::Approx(sol.metrics.power_w).epsilon(1e-12));
        CHECK(tracked.spectrum_channels == sol.metrics.spectrum_channels);
        CHECK(tracked.exposure_v_per_m == doctest::Approx(sol.metrics.exposure_v_per_m).epsilon(1e-9));
    }
}

TEST_CASE("trim: idempotent, maximal and never raises a KPI")
{
    test::Gen gen(321);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_micro(gen);
        const PlanContext ctx(s, s.candidate_sites);
        const auto w = random_weights(gen);
        auto built = phase2_build(ctx, w, static_cast<std::uint64_t>(trial));
        finalize_metrics(built, s);
        auto trimmed = built;
        trim_eirp(trimmed, s);
        finalize_metrics(trimmed, s);
        check_solution(trimmed, s);
        CHECK(trim_eirp(trimmed, s) == 0);
        CHECK(trimmed.metrics.power_w <= built.metrics.power_w);
        CHECK(trimmed.metrics.exposure_v_per_m <= built.metrics.exposure_v_per_m);
        CHECK(trimmed.metrics.spectrum_channels == built.metrics.spectrum_channels);
        for (const auto& bs : trimmed.base_stations) {
            if (bs.served_links.empty()) {
                continue;
            }
            const double lower = bs.eirp_dbm - s.optimizer.trim_step_db;
            bool someone_drops = false;
            for (int li : bs.served_links) {
                const auto& u = trimmed.users[static_cast<std::size_t>(trimmed.links[static_cast<std::size_t>(li)].user)];
                someone_drops = someone_drops || !within_link_budget(s, bs.site, lower, u);
            }
            CHECK(someone_drops);
        }
        const auto via_optimize = phase2_optimize(ctx, w, static_cast<std::uint64_t>(trial));
        CHECK(via_optimize.metrics.power_w == trimmed.metrics.power_w);
        CHECK(via_optimize.metrics.exposure_v_per_m == trimmed.metrics.exposure_v_per_m);
    }
}

TEST_CASE("toy scenario: power-only weighting packs users onto fewer sites")
{
    const auto s = test::shipped("toy_3site.json");
    const PlanContext ctx(s, s.candidate_sites);
    int power_active = 0;
    int spread_active = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = phase2_optimize(ctx, {1, 0, 0}, seed);
        const auto e = phase2_optimize(ctx, {0, 0, 1}, seed);
        check_solution(p, s);
        check_solution(e, s);
        CHECK(p.feasible());
        for (const auto& bs : p.base_stations) {
            power_active += bs.state == BsState::active ? 1 : 0;
        }
        for (const auto& bs : e.base_stations) {
            spread_active += bs.state == BsState::active ? 1 : 0;
        }
    }
    CHECK(power_active <= spread_active);
}

TEST_CASE("trailing relative std")
{
    const std::vector<double> flat{3, 3, 3, 3};
    CHECK(trailing_rel_std(flat, 3) == 0.0);
    const std::vector<double> zeros{0, 0};
    CHECK(trailing_rel_std(zeros, 2) == 0.0);
    const std::vector<double> jump{-1, 1};
    CHECK(std::isinf(trailing_rel_std(jump, 2)));
    const std::vector<double> pair{1, 3};
    CHECK(trailing_rel_std(pair, 2) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(std::isinf(trailing_rel_std(pair, 3)));
    const std::vector<double> tail{100, 1, 2, 3};
    CHECK(trailing_rel_std(tail, 3) == doctest::Approx(0.5));
}

TEST_CASE("run_converged: capped runs average the individual builds")
{
    const auto s = test::shipped("toy_3site.json");
    const PlanContext ctx(s, s.candidate_sites);
    const Weights w{0.4, 0.4, 0.2};
    const auto capped = run_converged(ctx, w, 50, 4);
    CHECK(capped.runs == 4);
    CHECK_FALSE(capped.converged);
    double p = 0.0;
    double e = 0.0;
    double sp = 0.0;
    for (std::uint64_t seed = 50; seed < 54; ++seed) {
        const auto sol = phase2_optimize(ctx, w, seed);
        p += sol.metrics.power_w;
        e += sol.metrics.exposure_v_per_m;
        sp += sol.metrics.spectrum_channels;
    }
    CHECK(capped.metrics.power_w == doctest::Approx(p / 4));
    CHECK(capped.metrics.exposure_v_per_m == doctest::Approx(e / 4));
    CHECK(capped.metrics.spectrum_channels == doctest::Approx(sp / 4));
    CHECK(capped.seed == 50);

    const auto full = run_converged(ctx, w, 50);
    CHECK(full.converged);
    CHECK(full.runs >= s.optimizer.convergence_window);
    CHECK(full.runs <= s.max_sim);
    const auto repeat = run_converged(ctx, w, 50);
    CHECK(repeat.runs == full.runs);
    CHECK(repeat.metrics.power_w == full.metrics.power_w);
}
