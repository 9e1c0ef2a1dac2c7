#include "crnet/scenario.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace crnet {

using json = nlohmann::json;

Lattice::Lattice(Rect area, double resolution_m) : area_(area), resolution_(resolution_m)
{
    // Guard against 1000/50 evaluating to 19.999...
    auto count = [&](double extent) {
        return static_cast<std::size_t>(std::floor(extent / resolution_m * (1.0 + 1e-12) + 1e-9)) + 1;
    };
    nx_ = count(area.width());
    ny_ = count(area.height());
}

std::vector<Point> Lattice::points() const
{
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
        out.push_back(point(k));
    }
    return out;
}

double CoverageSpec::shadowing_margin_db() const
{
    if (shadowing_sigma_db == 0.0) {
        return 0.0;
    }
    const boost::math::normal standard;
    const double z = temporal_availability >= 1.0 ? boost::math::quantile(standard, 1.0 - 1e-12)
                                                  : boost::math::quantile(standard, temporal_availability);
    return z * shadowing_sigma_db;
}

std::optional<double> CoverageSpec::max_path_loss_for(double bitrate_bps) const
{
    std::optional<double> best;
    for (const auto& entry : mcs_table) {
        if (entry.bitrate_bps >= bitrate_bps && (!best || entry.max_path_loss_db > *best)) {
            best = entry.max_path_loss_db;
        }
    }
    return best;
}

ScenarioError::ScenarioError(std::string field_path, const std::string& message)
    : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
      field_path_(std::move(field_path))
{
}

const SiteSpec& Scenario::site(std::string_view id) const
{
    for (const auto& s : candidate_sites) {
        if (s.id == id) {
            return s;
        }
    }
    throw ScenarioError("sites", fmt::format("unknown site id '{}'", id));
}

namespace {

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

class Reader {
public:
    explicit Reader(const json& root) : root_(root) {}

    const json& at(const json& node, const std::string& key, const std::string& path) const
    {
        if (!node.is_object() || !node.contains(key)) {
            throw ScenarioError(join(path, key), "missing required field");
        }
        return node.at(key);
    }

    double number(const json& node, const std::string& key, const std::string& path) const
    {
        const auto& v = at(node, key, path);
        if (!v.is_number()) {
            throw ScenarioError(join(path, key), "expected a number");
        }
        return v.get<double>();
    }

    double number_or(const json& node, const std::string& key, const std::string& path, double fallback) const
    {
        if (!node.is_object() || !node.contains(key) || node.at(key).is_null()) {
            return fallback;
        }
        return number(node, key, path);
    }

    int integer(const json& node, const std::string& key, const std::string& path) const
    {
        const auto& v = at(node, key, path);
        if (!v.is_number_integer()) {
            throw ScenarioError(join(path, key), "expected an integer");
        }
        return v.get<int>();
    }

    std::string string(const json& node, const std::string& key, const std::string& path) const
    {
        const auto& v = at(node, key, path);
        if (!v.is_string()) {
            throw ScenarioError(join(path, key), "expected a string");
        }
        return v.get<std::string>();
    }

    const json& root() const { return root_; }

private:
    const json& root_;
};

PathLossParams read_path_loss(const Reader& r, const json& node, const std::string& path, PathLossParams fallback)
{
    PathLossParams p = fallback;
    if (node.contains("model")) {
        const auto model = r.string(node, "model", path);
        if (model == "one_slope") {
            p.model = PathLossModel::one_slope;
        } else if (model == "log_distance_tv") {
            p.model = PathLossModel::log_distance_tv;
        } else {
            throw ScenarioError(path + ".model", fmt::format("unknown path loss model '{}'", model));
        }
    }
    p.pl0_db = r.number_or(node, "pl0_db", path, p.pl0_db);
    p.d0_m = r.number_or(node, "d0_m", path, p.d0_m);
    p.exponent = r.number_or(node, "exponent", path, p.exponent);
    return p;
}

Scenario from_json(const json& root)
{
    if (!root.is_object()) {
        throw ScenarioError("", "scenario document must be a JSON object");
    }
    const Reader r(root);
    Scenario s;
    s.name = root.value("name", std::string("unnamed"));

    const auto& area = r.at(root, "area", "");
    s.area = {r.number(area, "x_min", "area"), r.number(area, "y_min", "area"),
              r.number(area, "x_max", "area"), r.number(area, "y_max", "area")};
    s.grid_resolution_m = r.number_or(root, "grid_resolution_m", "", 50.0);

    const auto& channels = r.at(root, "channels", "");
    if (!channels.is_array()) {
        throw ScenarioError("channels", "expected an array");
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto path = fmt::format("channels[{}]", i);
        const auto& c = channels[i];
        ChannelSpec spec;
        spec.index = c.contains("index") ? r.integer(c, "index", path) : static_cast<int>(i);
        if (spec.index != static_cast<int>(i)) {
            throw ScenarioError(path + ".index", "channel index must equal its position in the table");
        }
        spec.center_frequency_mhz = r.number(c, "center_frequency_mhz", path);
        s.channels.push_back(spec);
    }

    const auto& sites = r.at(root, "sites", "");
    if (!sites.is_array()) {
        throw ScenarioError("sites", "expected an array");
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto path = fmt::format("sites[{}]", i);
        const auto& v = sites[i];
        s.candidate_sites.push_back({r.string(v, "id", path),
                                     {r.number(v, "x", path), r.number(v, "y", path)},
                                     r.number(v, "max_eirp_dbm", path),
                                     r.number(v, "capacity_bps", path)});
    }

    if (root.contains("tv_transmitters")) {
        const auto& tv = root.at("tv_transmitters");
        if (!tv.is_array()) {
            throw ScenarioError("tv_transmitters", "expected an array");
        }
        for (std::size_t i = 0; i < tv.size(); ++i) {
            const auto path = fmt::format("tv_transmitters[{}]", i);
            const auto& v = tv[i];
            s.tv_transmitters.push_back({r.string(v, "id", path),
                                         {r.number(v, "x", path), r.number(v, "y", path)},
                                         r.number(v, "eirp_dbm", path),
                                         r.integer(v, "channel_index", path)});
        }
    }

    const auto& users = r.at(root, "users", "");
    s.user_count = r.integer(users, "count", "users");
    s.bitrate_per_user_bps = r.number_or(users, "bitrate_bps", "users", 1e6);

    if (root.contains("isl")) {
        const auto& isl = root.at("isl");
        s.isl.cr_threshold_dbm = r.number_or(isl, "cr_threshold_dbm", "isl", s.isl.cr_threshold_dbm);
        s.isl.tv_threshold_dbm = r.number_or(isl, "tv_threshold_dbm", "isl", s.isl.tv_threshold_dbm);
    }

    if (root.contains("power_model")) {
        const auto& pm = root.at("power_model");
        auto& m = s.power_model;
        m.p_sleep_w = r.number_or(pm, "p_sleep_w", "power_model", m.p_sleep_w);
        m.p_idle_w = r.number_or(pm, "p_idle_w", "power_model", m.p_idle_w);
        m.p_peak_w = r.number_or(pm, "p_peak_w", "power_model", m.p_peak_w);
        m.traffic_weight = r.number_or(pm, "traffic_weight", "power_model", m.traffic_weight);
    }

    const auto& cov = r.at(root, "coverage", "");
    s.coverage.cell_edge_coverage = r.number_or(cov, "cell_edge_coverage", "coverage", 0.95);
    s.coverage.temporal_availability = r.number_or(cov, "temporal_availability", "coverage", 0.99);
    s.coverage.shadowing_sigma_db = r.number_or(cov, "shadowing_sigma_db", "coverage", 0.0);
    const auto& mcs = r.at(cov, "mcs_table", "coverage");
    if (!mcs.is_array()) {
        throw ScenarioError("coverage.mcs_table", "expected an array");
    }
    for (std::size_t i = 0; i < mcs.size(); ++i) {
        const auto path = fmt::format("coverage.mcs_table[{}]", i);
        s.coverage.mcs_table.push_back({r.number(mcs[i], "max_path_loss_db", path), r.number(mcs[i], "bitrate_bps", path)});
    }

    if (root.contains("path_loss")) {
        const auto& pl = root.at("path_loss");
        if (pl.contains("cr")) {
            s.path_loss.cr = read_path_loss(r, pl.at("cr"), "path_loss.cr", s.path_loss.cr);
        }
        if (pl.contains("tv")) {
            s.path_loss.tv = read_path_loss(r, pl.at("tv"), "path_loss.tv", s.path_loss.tv);
        }
    }

    if (root.contains("simulation")) {
        const auto& sim = root.at("simulation");
        if (sim.contains("max_sim")) {
            s.max_sim = r.integer(sim, "max_sim", "simulation");
        }
        s.convergence_rel_std = r.number_or(sim, "convergence_rel_std", "simulation", s.convergence_rel_std);
        if (sim.contains("convergence_window")) {
            s.optimizer.convergence_window = r.integer(sim, "convergence_window", "simulation");
        }
        s.optimizer.trim_step_db = r.number_or(sim, "trim_step_db", "simulation", s.optimizer.trim_step_db);
    }

    if (root.contains("allocator")) {
        const auto& a = root.at("allocator");
        s.allocator.user_eirp_dbm = r.number_or(a, "user_eirp_dbm", "allocator", s.allocator.user_eirp_dbm);
        if (a.contains("aggregation")) {
            const auto agg = r.string(a, "aggregation", "allocator");
            if (agg == "linear_sum") {
                s.allocator.aggregation = Aggregation::linear_sum;
            } else if (agg == "max_source") {
                s.allocator.aggregation = Aggregation::max_source;
            } else {
                throw ScenarioError("allocator.aggregation", fmt::format("unknown aggregation '{}'", agg));
            }
        }
    }

    if (root.contains("exposure")) {
        const auto& e = root.at("exposure");
        if (e.contains("e50")) {
            const auto mode = r.string(e, "e50", "exposure");
            if (mode == "median") {
                s.exposure.e50 = E50Mode::median;
            } else if (mode == "mean") {
                s.exposure.e50 = E50Mode::mean;
            } else {
                throw ScenarioError("exposure.e50", fmt::format("unknown E50 mode '{}'", mode));
            }
        }
    }

    if (root.contains("baseline")) {
        const auto& b = root.at("baseline");
        s.baseline.sensing_floor_offset_db =
            r.number_or(b, "sensing_floor_offset_db", "baseline", s.baseline.sensing_floor_offset_db);
        s.baseline.visibility_radius_m = r.number_or(b, "visibility_radius_m", "baseline", s.baseline.visibility_radius_m);
    }
    return s;
}

void require(bool ok, const std::string& path, const std::string& message)
{
    if (!ok) {
        throw ScenarioError(path, message);
    }
}

bool finite_point(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void validate_path_loss(const PathLossParams& p, const std::string& path)
{
    require(p.d0_m > 0.0 && std::isfinite(p.d0_m), path + ".d0_m", "must be positive");
    require(p.exponent > 0.0 && std::isfinite(p.exponent), path + ".exponent", "must be positive");
    require(std::isfinite(p.pl0_db), path + ".pl0_db", "must be finite");
}

} // namespace

void validate(const Scenario& s)
{
    require(std::isfinite(s.area.x_min) && std::isfinite(s.area.y_min) && std::isfinite(s.area.x_max) &&
                std::isfinite(s.area.y_max),
            "area", "bounds must be finite");
    require(s.area.width() >= 0.0 && s.area.height() >= 0.0, "area", "x_max/y_max must not be below x_min/y_min");
    require(s.grid_resolution_m > 0.0 && std::isfinite(s.grid_resolution_m), "grid_resolution_m", "must be positive");

    require(!s.channels.empty(), "channels", "at least one channel is required");
    for (std::size_t i = 0; i < s.channels.size(); ++i) {
        const auto f = s.channels[i].center_frequency_mhz;
        require(f > 0.0 && std::isfinite(f), fmt::format("channels[{}].center_frequency_mhz", i), "must be positive");
        if (i > 0) {
            require(f > s.channels[i - 1].center_frequency_mhz, "channels", "channels not ascending");
        }
    }

    require(!s.candidate_sites.empty(), "sites", "at least one candidate site is required");
    for (std::size_t i = 0; i < s.candidate_sites.size(); ++i) {
        const auto& site = s.candidate_sites[i];
        const auto path = fmt::format("sites[{}]", i);
        require(!site.id.empty(), path + ".id", "must not be empty");
        require(finite_point(site.position), path, "position must be finite");
        require(std::isfinite(site.max_eirp_dbm), path + ".max_eirp_dbm", "must be finite");
        require(site.capacity_bps > 0.0 && std::isfinite(site.capacity_bps), path + ".capacity_bps", "must be positive");
        for (std::size_t j = 0; j < i; ++j) {
            require(s.candidate_sites[j].id != site.id, path + ".id", "duplicate site id");
        }
    }

    for (std::size_t i = 0; i < s.tv_transmitters.size(); ++i) {
        const auto& tv = s.tv_transmitters[i];
        const auto path = fmt::format("tv_transmitters[{}]", i);
        require(finite_point(tv.position), path, "position must be finite");
        require(std::isfinite(tv.eirp_dbm), path + ".eirp_dbm", "must be finite");
        require(tv.channel_index >= 0 && tv.channel_index < s.s_max(), path + ".channel_index", "not a valid channel index");
    }

    require(s.user_count > 0, "users.count", "must be positive");
    require(s.bitrate_per_user_bps > 0.0 && std::isfinite(s.bitrate_per_user_bps), "users.bitrate_bps", "must be positive");

    require(std::isfinite(s.isl.cr_threshold_dbm), "isl.cr_threshold_dbm", "must be finite");
    require(std::isfinite(s.isl.tv_threshold_dbm), "isl.tv_threshold_dbm", "must be finite");

    const auto& pm = s.power_model;
    require(pm.p_sleep_w >= 0.0 && pm.p_sleep_w <= pm.p_idle_w && pm.p_idle_w <= pm.p_peak_w, "power_model",
            "requires 0 <= p_sleep_w <= p_idle_w <= p_peak_w");
    require(pm.traffic_weight >= 0.0 && pm.traffic_weight <= 1.0, "power_model.traffic_weight", "must be in [0,1]");

    const auto& cov = s.coverage;
    require(cov.cell_edge_coverage > 0.0 && cov.cell_edge_coverage <= 1.0, "coverage.cell_edge_coverage", "must be in (0,1]");
    require(cov.temporal_availability > 0.0 && cov.temporal_availability <= 1.0, "coverage.temporal_availability",
            "must be in (0,1]");
    require(cov.shadowing_sigma_db >= 0.0 && std::isfinite(cov.shadowing_sigma_db), "coverage.shadowing_sigma_db",
            "must be non-negative");
    require(!cov.mcs_table.empty(), "coverage.mcs_table", "must not be empty");
    for (std::size_t i = 0; i < cov.mcs_table.size(); ++i) {
        const auto& e = cov.mcs_table[i];
        const auto path = fmt::format("coverage.mcs_table[{}]", i);
        require(std::isfinite(e.max_path_loss_db), path + ".max_path_loss_db", "must be finite");
        require(e.bitrate_bps > 0.0, path + ".bitrate_bps", "must be positive");
        if (i > 0) {
            require(e.max_path_loss_db < cov.mcs_table[i - 1].max_path_loss_db, "coverage.mcs_table",
                    "must be sorted by descending max_path_loss_db");
        }
    }

    validate_path_loss(s.path_loss.cr, "path_loss.cr");
    validate_path_loss(s.path_loss.tv, "path_loss.tv");

    require(s.max_sim > 0, "simulation.max_sim", "must be positive");
    require(s.convergence_rel_std > 0.0 && s.convergence_rel_std < 1.0, "simulation.convergence_rel_std", "must be in (0,1)");
    require(s.optimizer.convergence_window >= 2, "simulation.convergence_window", "must be at least 2");
    require(s.optimizer.trim_step_db > 0.0, "simulation.trim_step_db", "must be positive");
    require(std::isfinite(s.allocator.user_eirp_dbm), "allocator.user_eirp_dbm", "must be finite");
    require(s.baseline.visibility_radius_m > 0.0, "baseline.visibility_radius_m", "must be positive");
}

Scenario load_scenario(std::string_view document)
{
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ScenarioError("", fmt::format("parse failure: {}", e.what()));
    }
    Scenario s;
    try {
        s = from_json(root);
    } catch (const json::exception& e) {
        throw ScenarioError("", fmt::format("malformed document: {}", e.what()));
    }
    validate(s);
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError("", fmt::format("cannot open scenario file '{}'", path.string()));
    }
    std::ostringstream text;
    text << in.rdbuf();
    return load_scenario(text.str());
}

std::vector<User> generate_users(const Scenario& scenario, std::uint64_t seed)
{
    std::mt19937_64 engine(seed);
    auto unit = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(scenario.user_count));
    const auto& a = scenario.area;
    for (int i = 0; i < scenario.user_count; ++i) {
        const double x = a.x_min + a.width() * unit();
        const double y = a.y_min + a.height() * unit();
        users.push_back({i, {x, y}, scenario.bitrate_per_user_bps});
    }
    return users;
}

std::vector<Point> grid_points(const Scenario& scenario)
{
    return scenario.lattice().points();
}

} // namespace crnet
