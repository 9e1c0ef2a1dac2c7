#include "crnet/cli.hpp"

#include "crnet/allocator.hpp"
#include "crnet/baseline.hpp"
#include "crnet/export.hpp"
#include "crnet/metrics.hpp"
#include "crnet/optimizer.hpp"
#include "crnet/pareto.hpp"

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace crnet::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Bad input the user can fix: exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int default_jobs()
{
    if (const char* env = std::getenv(kJobsEnv)) {
        try {
            const int jobs = std::stoi(env);
            if (jobs >= 1) {
                return jobs;
            }
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::string utc_now()
{
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    body(out);
    if (!out) {
        throw std::runtime_error(fmt::format("write failed for {}", path.string()));
    }
}

Scenario load_config(const std::string& path)
{
    if (!fs::exists(path)) {
        throw UsageError(fmt::format("config file not found: {}", path));
    }
    return load_scenario_file(path);
}

void prepare_out(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw UsageError(fmt::format("cannot create output directory {}", dir.string()));
    }
}

/// Run record written before any output and finalised afterwards.
class Manifest {
public:
    Manifest(fs::path dir, std::string command, const std::vector<std::string>& args, const std::string& config)
        : path_(std::move(dir) / "manifest.json")
    {
        doc_["tool"] = "crnet";
        doc_["version"] = kVersion;
        doc_["command"] = std::move(command);
        doc_["arguments"] = args;
        doc_["scenario"] = {{"path", config}, {"sha256", sha256_hex(config)}};
        doc_["rng"] = std::string(kUserRngId);
        doc_["started_utc"] = utc_now();
        doc_["status"] = "running";
    }

    ordered_json& operator[](const char* key) { return doc_[key]; }

    void add_output(const std::string& name) { doc_["outputs"].push_back(name); }

    void save() const
    {
        write_file(path_, [&](std::ostream& o) { o << doc_.dump(2) << '\n'; });
    }

    void finish(const std::string& status)
    {
        doc_["status"] = status;
        doc_["finished_utc"] = utc_now();
        save();
    }

private:
    fs::path path_;
    ordered_json doc_;
};

struct PlanArgs {
    std::string config;
    int seeds = 30;
    std::uint64_t seed = 1;
    std::string out;
};

struct SweepArgs {
    std::string config;
    std::string sites;
    double resolution = 0.25;
    std::optional<double> isl_cr;
    std::optional<double> isl_tv;
    std::uint64_t seed = 1;
    int max_sim = 0;
    std::string out;
    int jobs = 1;
};

struct CompareArgs {
    std::string config;
    std::string sites;
    int seeds = 30;
    std::uint64_t seed = 1;
    double resolution = 0.25;
    std::string out;
    int jobs = 1;
};

std::vector<std::uint64_t> seed_list(std::uint64_t base, int count)
{
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < count; ++i) {
        seeds.push_back(base + static_cast<std::uint64_t>(i));
    }
    return seeds;
}

int cmd_plan(const PlanArgs& a, const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto scenario = load_config(a.config);
    prepare_out(a.out);
    Manifest manifest(a.out, "plan", args, a.config);
    manifest["seeds"] = {{"base", a.seed}, {"count", a.seeds}};
    manifest.save();

    const auto seeds = seed_list(a.seed, a.seeds);
    const auto histogram = phase1_histogram(scenario, seeds);
    write_file(fs::path(a.out) / "histogram.csv", [&](std::ostream& o) { write_histogram_csv(o, histogram); });
    manifest.add_output("histogram.csv");

    ordered_json summary;
    summary["scenario"] = scenario.name;
    summary["candidate_sites"] = scenario.candidate_sites.size();
    int status = exit_ok;
    try {
        const int n = minimum_nbs(scenario, histogram, seeds);
        const int candidates = static_cast<int>(scenario.candidate_sites.size());
        summary["minimum_nbs"] = n;
        out << fmt::format("minimum_nbs {}\n", n);
        std::vector<int> tiers;
        for (int t : {n, static_cast<int>(std::ceil(1.25 * n)), static_cast<int>(std::ceil(1.5 * n))}) {
            t = std::min(t, candidates);
            if (std::find(tiers.begin(), tiers.end(), t) == tiers.end()) {
                tiers.push_back(t);
            }
        }
        for (int t : tiers) {
            const auto sites = select_sites(scenario, histogram, t);
            const auto name = fmt::format("sites_{}.csv", t);
            write_file(fs::path(a.out) / name, [&](std::ostream& o) { write_sites_csv(o, sites); });
            manifest.add_output(name);
            std::vector<std::string> ids;
            for (const auto& s : sites) {
                ids.push_back(s.id);
            }
            summary["tiers"].push_back({{"n", t}, {"file", name}, {"site_ids", ids}});
            out << fmt::format("tier {} -> {}\n", t, name);
        }
    } catch (const CoverageError& e) {
        summary["minimum_nbs"] = nullptr;
        summary["best_coverage_fraction"] = e.best_fraction();
        err << "coverage infeasible: " << e.what() << '\n';
        status = exit_incomplete;
    }
    write_file(fs::path(a.out) / "plan_summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    manifest.add_output("plan_summary.json");
    manifest.finish(status == exit_ok ? "ok" : "infeasible");
    return status;
}

Scenario with_isl(Scenario scenario, std::optional<double> cr, std::optional<double> tv)
{
    if (cr) {
        scenario.isl.cr_threshold_dbm = *cr;
    }
    if (tv) {
        scenario.isl.tv_threshold_dbm = *tv;
    }
    validate(scenario);
    return scenario;
}

std::vector<SiteSpec> load_sites(const std::string& path, const Scenario& scenario)
{
    if (!fs::exists(path)) {
        throw UsageError(fmt::format("sites file not found: {}", path));
    }
    try {
        return read_sites_csv(path, scenario);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void write_marker_maps(const PlanContext& ctx, const ParetoPoint& point, int marker, const fs::path& dir, Manifest& manifest)
{
    // The maps show the first build of the point's seed sequence.
    const auto& s = ctx.scenario();
    const auto solution = phase2_optimize(ctx, point.weights, point.seed);
    const auto stem = fmt::format("marker{}", marker);
    write_file(dir / (stem + "_solution.json"), [&](std::ostream& o) { write_solution_detail(o, solution, s); });
    const auto ws = white_space_map(solution, s);
    write_file(dir / (stem + "_whitespace.csv"), [&](std::ostream& o) { write_white_space_csv(o, ws); });
    write_file(dir / (stem + "_whitespace.mean"),
               [&](std::ostream& o) { o << format_number(ws.mean_availability) << '\n'; });
    write_file(dir / (stem + "_whitespace.pgm"), [&](std::ostream& o) { write_white_space_pgm(o, ws, s.s_max()); });
    const auto field = field_grid(exposure_emitters(solution, s), s);
    write_file(dir / (stem + "_field.csv"), [&](std::ostream& o) { write_field_grid_csv(o, field); });
    for (const char* suffix : {"_solution.json", "_whitespace.csv", "_whitespace.mean", "_whitespace.pgm", "_field.csv"}) {
        manifest.add_output(stem + suffix);
    }
}

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& args, std::ostream& out, std::ostream&)
{
    auto scenario = with_isl(load_config(a.config), a.isl_cr, a.isl_tv);
    auto sites = load_sites(a.sites, scenario);
    enumerate_weights(a.resolution);
    prepare_out(a.out);
    Manifest manifest(a.out, "sweep", args, a.config);
    manifest["sites_file"] = a.sites;
    manifest["base_seed"] = a.seed;
    manifest["resolution"] = a.resolution;
    manifest["isl"] = {{"cr_threshold_dbm", scenario.isl.cr_threshold_dbm}, {"tv_threshold_dbm", scenario.isl.tv_threshold_dbm}};
    manifest["max_sim"] = a.max_sim > 0 ? a.max_sim : scenario.max_sim;
    manifest.save();

    const PlanContext ctx(std::move(scenario), std::move(sites));
    const auto result = sweep(ctx, a.resolution, a.seed, {a.max_sim, a.jobs});
    write_file(fs::path(a.out) / "pareto.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
    manifest.add_output("pareto.csv");
    for (int marker : {2, 4}) {
        write_marker_maps(ctx, result.points[result.markers[static_cast<std::size_t>(marker - 1)]], marker, a.out, manifest);
    }

    const bool complete = std::all_of(result.points.begin(), result.points.end(),
                                      [](const ParetoPoint& p) { return p.converged && p.all_feasible; });
    for (std::size_t m = 0; m < 4; ++m) {
        const auto& p = result.points[result.markers[m]];
        out << fmt::format("marker {}: w=({:g},{:g},{:g}) power {:.4g} W exposure {:.4g} V/m spectrum {:.4g}\n", m + 1,
                           p.weights.w1, p.weights.w2, p.weights.w3, p.metrics.power_w, p.metrics.exposure_v_per_m,
                           p.metrics.spectrum_channels);
    }
    manifest.finish(complete ? "ok" : "incomplete");
    return complete ? exit_ok : exit_incomplete;
}

int cmd_compare(const CompareArgs& a, const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    auto scenario = load_config(a.config);
    auto sites = load_sites(a.sites, scenario);
    enumerate_weights(a.resolution);
    if (a.seeds == 1) {
        err << "warning: single seed, differentials are low confidence\n";
    }
    prepare_out(a.out);
    Manifest manifest(a.out, "compare", args, a.config);
    manifest["sites_file"] = a.sites;
    manifest["seeds"] = {{"base", a.seed}, {"count", a.seeds}};
    manifest["resolution"] = a.resolution;
    manifest.save();

    const PlanContext ctx(std::move(scenario), std::move(sites));
    const auto report = compare_architectures(ctx, a.resolution, a.seed, a.seeds, a.jobs);
    write_file(fs::path(a.out) / "comparison.csv", [&](std::ostream& o) { write_comparison_csv(o, report); });
    write_file(fs::path(a.out) / "differential.csv", [&](std::ostream& o) { write_differential_csv(o, report); });
    manifest.add_output("comparison.csv");
    manifest.add_output("differential.csv");

    const auto base = report.baseline_mean();
    out << "differential vs traditional (positive = cloud better)\n";
    out << fmt::format("{:>6} {:>9} {:>9} {:>9}\n", "marker", "power%", "exposure%", "spectrum%");
    for (int m = 1; m <= 4; ++m) {
        const auto c = report.cloud_mean(static_cast<Marker>(m));
        out << fmt::format("{:>6} {:>9.2f} {:>9.2f} {:>9.2f}\n", m, differential_pct(base.power_w, c.power_w),
                           differential_pct(base.exposure_v_per_m, c.exposure_v_per_m),
                           differential_pct(base.spectrum_channels, c.spectrum_channels));
    }
    long violations = 0;
    for (int v : report.baseline_violations) {
        violations += v;
    }
    out << fmt::format("traditional ISL violations (all seeds): {}\n", violations);
    manifest.finish("ok");
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cognitive-radio network planning and Pareto optimisation", "crnet"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "Phase-1 site histogram, minimum BS count and site tiers");
    plan_cmd->add_option("--config", plan.config, "Scenario JSON")->required();
    plan_cmd->add_option("--seeds", plan.seeds, "Number of user realisations")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--seed", plan.seed, "First seed");
    plan_cmd->add_option("--out", plan.out, "Output directory")->required();

    SweepArgs sw;
    sw.jobs = default_jobs();
    auto* sweep_cmd = app.add_subcommand("sweep", "Weighted-sum Pareto sweep over the selected sites");
    sweep_cmd->add_option("--config", sw.config, "Scenario JSON")->required();
    sweep_cmd->add_option("--sites", sw.sites, "Sites CSV from plan")->required();
    sweep_cmd->add_option("--resolution", sw.resolution, "Weight resolution")->capture_default_str();
    sweep_cmd->add_option("--isl-cr", sw.isl_cr, "CR interference threshold override [dBm]");
    sweep_cmd->add_option("--isl-tv", sw.isl_tv, "TV interference threshold override [dBm]");
    sweep_cmd->add_option("--seed", sw.seed, "First seed of every run sequence");
    sweep_cmd->add_option("--max-sim", sw.max_sim, "Run cap per weight triple (0: scenario value)")->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--out", sw.out, "Output directory")->required();
    sweep_cmd->add_option("--jobs", sw.jobs, fmt::format("Worker threads (default ${} or 1)", kJobsEnv))->check(CLI::PositiveNumber);

    CompareArgs cmp;
    cmp.jobs = default_jobs();
    auto* compare_cmd = app.add_subcommand("compare", "Cloud markers against the traditional architecture");
    compare_cmd->add_option("--config", cmp.config, "Scenario JSON")->required();
    compare_cmd->add_option("--sites", cmp.sites, "Sites CSV from plan")->required();
    compare_cmd->add_option("--seeds", cmp.seeds, "Paired seeds")->check(CLI::PositiveNumber);
    compare_cmd->add_option("--seed", cmp.seed, "First seed");
    compare_cmd->add_option("--resolution", cmp.resolution, "Weight resolution")->capture_default_str();
    compare_cmd->add_option("--out", cmp.out, "Output directory")->required();
    compare_cmd->add_option("--jobs", cmp.jobs, fmt::format("Worker threads (default ${} or 1)", kJobsEnv))->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*plan_cmd) {
            return cmd_plan(plan, args, out, err);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sw, args, out, err);
        }
        return cmd_compare(cmp, args, out, err);
    } catch (const ScenarioError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return exit_incomplete;
    }
}

} // namespace crnet::cli
