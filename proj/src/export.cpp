#include "crnet/export.hpp"

#include "crnet/allocator.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crnet {

std::string format_number(double value)
{
    if (value == 0.0) {
        return "0";
    }
    return fmt::format("{:.9g}", value);
}

namespace {

const char* flag(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        fields.push_back(field);
    }
    return fields;
}

} // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
    out << "w1,w2,w3,power_w,exposure_v_per_m,spectrum_channels,wa_mean,runs,converged,seed,front,marker\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        const auto marker = result.marker_of(i);
        out << format_number(p.weights.w1) << ',' << format_number(p.weights.w2) << ',' << format_number(p.weights.w3)
            << ',' << format_number(p.metrics.power_w) << ',' << format_number(p.metrics.exposure_v_per_m) << ','
            << format_number(p.metrics.spectrum_channels) << ',' << format_number(p.metrics.wa_mean) << ',' << p.runs
            << ',' << flag(p.converged) << ',' << p.seed << ',' << flag(result.on_front[i]) << ','
            << (marker ? std::to_string(static_cast<int>(*marker)) : std::string("none")) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const SiteHistogram& histogram)
{
    out << "site_id,count\n";
    for (const auto& [id, count] : histogram) {
        out << id << ',' << count << '\n';
    }
}

void write_sites_csv(std::ostream& out, const std::vector<SiteSpec>& sites)
{
    out << "rank,site_id,x_m,y_m\n";
    for (std::size_t i = 0; i < sites.size(); ++i) {
        out << i + 1 << ',' << sites[i].id << ',' << format_number(sites[i].position.x) << ','
            << format_number(sites[i].position.y) << '\n';
    }
}

std::vector<SiteSpec> read_sites_csv(const std::filesystem::path& path, const Scenario& scenario)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open sites file {}", path.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(fmt::format("sites file {} is empty", path.string()));
    }
    const auto header = split_csv_line(line);
    std::size_t column = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "site_id") {
            column = i;
        }
    }
    if (column == header.size()) {
        throw std::runtime_error(fmt::format("sites file {} has no site_id column", path.string()));
    }
    std::vector<SiteSpec> sites;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() <= column) {
            throw std::runtime_error(fmt::format("short row in {}: {}", path.string(), line));
        }
        sites.push_back(scenario.site(fields[column]));
    }
    if (sites.empty()) {
        throw std::runtime_error(fmt::format("sites file {} lists no sites", path.string()));
    }
    return sites;
}

void write_solution_detail(std::ostream& out, const NetworkSolution& solution, const Scenario& scenario)
{
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["architecture"] = std::string(to_string(solution.architecture));
    doc["seed"] = solution.seed;
    doc["weights"] = {solution.weights.w1, solution.weights.w2, solution.weights.w3};
    doc["feasible"] = solution.feasible();
    doc["metrics"] = {{"power_w", solution.metrics.power_w},
                      {"exposure_v_per_m", solution.metrics.exposure_v_per_m},
                      {"spectrum_channels", solution.metrics.spectrum_channels},
                      {"wa_mean", solution.wa_mean},
                      {"isl_violations", isl_violations(solution, scenario)}};
    auto& stations = doc["base_stations"] = ordered_json::array();
    for (std::size_t b = 0; b < solution.base_stations.size(); ++b) {
        const auto& bs = solution.base_stations[b];
        stations.push_back({{"site_id", bs.site.id},
                            {"state", std::string(to_string(bs.state))},
                            {"eirp_dbm", bs.eirp_dbm},
                            {"load_bps", bs.load_bps},
                            {"channels", bs_channels(solution, static_cast<int>(b))}});
    }
    auto& links = doc["links"] = ordered_json::array();
    for (const auto& l : solution.links) {
        const auto& user = solution.users[static_cast<std::size_t>(l.user)];
        links.push_back({{"user", user.id},
                         {"x_m", user.position.x},
                         {"y_m", user.position.y},
                         {"site_id", solution.base_stations[static_cast<std::size_t>(l.bs)].site.id},
                         {"channel", l.channel},
                         {"frequency_mhz", scenario.channels[static_cast<std::size_t>(l.channel)].center_frequency_mhz},
                         {"bs_eirp_dbm", l.bs_eirp_dbm},
                         {"user_eirp_dbm", l.user_eirp_dbm},
                         {"bitrate_bps", l.bitrate_bps}});
    }
    doc["unconnected_users"] = solution.unconnected_users;
    out << doc.dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report)
{
    out << "architecture,marker,seed,power_w,exposure_v_per_m,spectrum_channels,wa_mean,isl_violations\n";
    auto row = [&](std::string_view arch, std::string_view marker, std::uint64_t seed, const KpiMeans& k, int violations) {
        out << arch << ',' << marker << ',' << seed << ',' << format_number(k.power_w) << ','
            << format_number(k.exposure_v_per_m) << ',' << format_number(k.spectrum_channels) << ','
            << format_number(k.wa_mean) << ',' << violations << '\n';
    };
    for (std::size_t i = 0; i < report.seeds.size(); ++i) {
        row("traditional", "none", report.seeds[i], report.baseline[i], report.baseline_violations[i]);
        for (std::size_t m = 0; m < 4; ++m) {
            row("cloud", std::to_string(m + 1), report.seeds[i], report.cloud[m][i], report.cloud_violations[m][i]);
        }
    }
}

void write_differential_csv(std::ostream& out, const ComparisonReport& report)
{
    out << "marker,power_diff_pct,exposure_diff_pct,spectrum_diff_pct,wa_diff_pct,power_p,exposure_p,spectrum_p\n";
    const auto base = report.baseline_mean();
    auto column = [](const std::vector<KpiMeans>& rows, double KpiMeans::*field) {
        std::vector<double> v;
        for (const auto& r : rows) {
            v.push_back(r.*field);
        }
        return v;
    };
    for (int m = 1; m <= 4; ++m) {
        const auto& rows = report.cloud[static_cast<std::size_t>(m - 1)];
        const auto cloud = report.cloud_mean(static_cast<Marker>(m));
        const auto p_power = sign_test_p(column(rows, &KpiMeans::power_w), column(report.baseline, &KpiMeans::power_w));
        const auto p_exposure = sign_test_p(column(rows, &KpiMeans::exposure_v_per_m),
                                            column(report.baseline, &KpiMeans::exposure_v_per_m));
        const auto p_spectrum = sign_test_p(column(rows, &KpiMeans::spectrum_channels),
                                            column(report.baseline, &KpiMeans::spectrum_channels));
        out << m << ',' << format_number(differential_pct(base.power_w, cloud.power_w)) << ','
            << format_number(differential_pct(base.exposure_v_per_m, cloud.exposure_v_per_m)) << ','
            << format_number(differential_pct(base.spectrum_channels, cloud.spectrum_channels)) << ','
            << format_number(-differential_pct(base.wa_mean, cloud.wa_mean)) << ',' << format_number(p_power) << ','
            << format_number(p_exposure) << ',' << format_number(p_spectrum) << '\n';
    }
}

std::string sha256_hex(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 init failed");
    }
    std::array<char, 1 << 15> buffer{};
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(got)) != 1) {
            throw std::runtime_error("sha256 update failed");
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("sha256 final failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

} // namespace crnet
