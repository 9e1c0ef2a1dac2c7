#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <functional>
#include <string>

using namespace crnet;
using nlohmann::json;

namespace {

json minimal_doc()
{
    return json::parse(R"({
      "area": {"x_min": 0, "y_min": 0, "x_max": 100, "y_max": 100},
      "channels": [{"center_frequency_mhz": 600}],
      "sites": [{"id": "A", "x": 50, "y": 50, "max_eirp_dbm": 30, "capacity_bps": 1e7}],
      "users": {"count": 1, "bitrate_bps": 1e6},
      "coverage": {"mcs_table": [{"max_path_loss_db": 120, "bitrate_bps": 2e6}]}
    })");
}

std::string error_path(const json& doc)
{
    try {
        load_scenario(doc.dump());
    } catch (const ScenarioError& e) {
        return e.field_path().empty() ? std::string("<root>") : e.field_path();
    }
    return {};
}

} // namespace

TEST_CASE("minimal document loads with S_max = 1")
{
    const auto s = load_scenario(minimal_doc().dump());
    CHECK(s.s_max() == 1);
    CHECK(s.candidate_sites.size() == 1);
    CHECK(s.user_count == 1);
    CHECK(s.grid_resolution_m == 50.0);
    CHECK(s.convergence_rel_std == 0.02);
    CHECK(s.power_model.p_sleep_w == 9.0);
    CHECK(s.power_model.p_idle_w == 38.0);
    CHECK(s.power_model.p_peak_w == 64.0);
}

TEST_CASE("descending channel table is rejected")
{
    auto doc = minimal_doc();
    doc["channels"] = json::parse(R"([{"center_frequency_mhz": 600}, {"center_frequency_mhz": 500}])");
    try {
        load_scenario(doc.dump());
        FAIL("accepted descending channels");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("channels not ascending") != std::string::npos);
        CHECK(e.field_path() == "channels");
    }
}

TEST_CASE("parse failures are ScenarioErrors")
{
    CHECK_THROWS_AS(load_scenario("{ not json"), ScenarioError);
    CHECK_THROWS_AS(load_scenario("[1, 2]"), ScenarioError);
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("every single-field invariant violation is rejected with its field path")
{
    struct Mutation {
        const char* expected_prefix;
        std::function<void(json&)> apply;
    };
    const std::vector<Mutation> mutations = {
        {"grid_resolution_m", [](json& d) { d["grid_resolution_m"] = 0; }},
        {"grid_resolution_m", [](json& d) { d["grid_resolution_m"] = -5; }},
        {"area", [](json& d) { d["area"]["x_max"] = -1; }},
        {"channels", [](json& d) { d["channels"] = json::array(); }},
        {"channels[0]", [](json& d) { d["channels"][0]["center_frequency_mhz"] = -1; }},
        {"channels", [](json& d) { d["channels"].push_back({{"center_frequency_mhz", 600}}); }},
        {"users.count", [](json& d) { d["users"]["count"] = 0; }},
        {"users.bitrate_bps", [](json& d) { d["users"]["bitrate_bps"] = 0; }},
        {"sites", [](json& d) { d["sites"] = json::array(); }},
        {"sites[0].capacity_bps", [](json& d) { d["sites"][0]["capacity_bps"] = 0; }},
        {"sites[1].id", [](json& d) { d["sites"].push_back(d["sites"][0]); }},
        {"tv_transmitters[0].channel_index",
         [](json& d) { d["tv_transmitters"] = json::parse(R"([{"id":"T","x":0,"y":0,"eirp_dbm":80,"channel_index":4}])"); }},
        {"coverage.mcs_table", [](json& d) { d["coverage"]["mcs_table"] = json::array(); }},
        {"coverage.mcs_table",
         [](json& d) { d["coverage"]["mcs_table"].push_back({{"max_path_loss_db", 130}, {"bitrate_bps", 1e6}}); }},
        {"coverage.cell_edge_coverage", [](json& d) { d["coverage"]["cell_edge_coverage"] = 1.5; }},
        {"coverage.temporal_availability", [](json& d) { d["coverage"]["temporal_availability"] = 0; }},
        {"coverage.shadowing_sigma_db", [](json& d) { d["coverage"]["shadowing_sigma_db"] = -1; }},
        {"power_model", [](json& d) { d["power_model"] = {{"p_sleep_w", 50}}; }},
        {"power_model.traffic_weight", [](json& d) { d["power_model"] = {{"traffic_weight", 2}}; }},
        {"path_loss.cr.d0_m", [](json& d) { d["path_loss"] = {{"cr", {{"d0_m", 0}}}}; }},
        {"path_loss.tv.exponent", [](json& d) { d["path_loss"] = {{"tv", {{"exponent", 0}}}}; }},
        {"simulation.max_sim", [](json& d) { d["simulation"] = {{"max_sim", 0}}; }},
        {"simulation.convergence_rel_std", [](json& d) { d["simulation"] = {{"convergence_rel_std", 1.0}}; }},
        {"simulation.convergence_window", [](json& d) { d["simulation"] = {{"convergence_window", 1}}; }},
        {"allocator.aggregation", [](json& d) { d["allocator"] = {{"aggregation", "median"}}; }},
        {"exposure.e50", [](json& d) { d["exposure"] = {{"e50", "mode"}}; }},
        {"baseline.visibility_radius_m", [](json& d) { d["baseline"] = {{"visibility_radius_m", 0}}; }},
        {"area", [](json& d) { d.erase("area"); }},
        {"sites[0].x", [](json& d) { d["sites"][0]["x"] = "far"; }},
    };
    for (const auto& m : mutations) {
        auto doc = minimal_doc();
        m.apply(doc);
        const auto path = error_path(doc);
        CAPTURE(m.expected_prefix);
        CAPTURE(path);
        CHECK(path.find(m.expected_prefix) != std::string::npos);
    }
}

TEST_CASE("valid random documents are accepted and echoed")
{
    test::Gen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto doc = minimal_doc();
        const int channels = gen.integer(1, 12);
        doc["channels"] = json::array();
        double f = gen.uniform(50, 900);
        for (int c = 0; c < channels; ++c) {
            doc["channels"].push_back({{"center_frequency_mhz", f}});
            f += gen.uniform(0.5, 20);
        }
        const int sites = gen.integer(1, 8);
        doc["sites"] = json::array();
        for (int i = 0; i < sites; ++i) {
            doc["sites"].push_back({{"id", "S" + std::to_string(i)},
                                    {"x", gen.uniform(-50, 150)},
                                    {"y", gen.uniform(-50, 150)},
                                    {"max_eirp_dbm", gen.uniform(10, 50)},
                                    {"capacity_bps", gen.uniform(1e5, 1e8)}});
        }
        doc["users"]["count"] = gen.integer(1, 500);
        doc["grid_resolution_m"] = gen.uniform(1, 200);
        const auto s = load_scenario(doc.dump());
        CHECK(s.s_max() == channels);
        CHECK(static_cast<int>(s.candidate_sites.size()) == sites);
        CHECK(s.user_count == doc["users"]["count"].get<int>());
    }
}

TEST_CASE("shipped scenarios load")
{
    const auto ghent = test::shipped("ghent_like.json");
    CHECK(ghent.candidate_sites.size() == 45);
    CHECK(ghent.user_count == 224);
    CHECK(ghent.grid_resolution_m == 50.0);
    CHECK(ghent.bitrate_per_user_bps == 1e6);
    CHECK(ghent.isl.tv_threshold_dbm == -95.0);

    const auto toy = test::shipped("toy_3site.json");
    CHECK(toy.candidate_sites.size() == 3);
    CHECK(toy.s_max() == 4);
}

TEST_CASE("grid_points lattice counts")
{
    auto s = test::micro_scenario(100, 100, 1, 1, 1);
    CHECK(grid_points(s).size() == 9);
    s.area = {0, 0, 0, 0};
    CHECK(grid_points(s).size() == 1);
    s.area = {0, 0, 1000, 1000};
    CHECK(grid_points(s).size() == 441);

    const auto pts = grid_points(s);
    CHECK(pts.front().x == 0.0);
    CHECK(pts.front().y == 0.0);
    CHECK(pts[1].x == 50.0);
    CHECK(pts[21].y == 50.0);
    CHECK(pts.back().x == 1000.0);
    CHECK(pts.back().y == 1000.0);
}

TEST_CASE("grid_points count matches (floor(w/r)+1)(floor(h/r)+1)")
{
    test::Gen gen(5);
    auto s = test::micro_scenario(100, 100, 1, 1, 1);
    for (int trial = 0; trial < 500; ++trial) {
        const int res = gen.integer(1, 100);
        const int w = gen.integer(0, 3000);
        const int h = gen.integer(0, 3000);
        s.area = {0, 0, static_cast<double>(w), static_cast<double>(h)};
        s.grid_resolution_m = res;
        const std::size_t expected = static_cast<std::size_t>(w / res + 1) * static_cast<std::size_t>(h / res + 1);
        CHECK(grid_points(s).size() == expected);
    }
}

TEST_CASE("generate_users is deterministic and inside the area")
{
    const auto s = test::shipped("ghent_like.json");
    const auto a = generate_users(s, 7);
    const auto b = generate_users(s, 7);
    REQUIRE(a.size() == 224);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].position.y == b[i].position.y);
        CHECK(a[i].demanded_bitrate_bps == 1e6);
        CHECK(a[i].position.x >= s.area.x_min);
        CHECK(a[i].position.x < s.area.x_max);
        CHECK(a[i].position.y >= s.area.y_min);
        CHECK(a[i].position.y < s.area.y_max);
    }
    const auto c = generate_users(s, 8);
    CHECK(c[0].position.x != a[0].position.x);
}

TEST_CASE("user positions are uniform: moments and chi-square over a seed sweep")
{
    auto s = test::micro_scenario(1, 1, 1, 1, 100);
    s.area = {0, 0, 1, 1};
    double sx = 0.0;
    double sy = 0.0;
    std::vector<int> bins(10, 0);
    int n = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const auto& u : generate_users(s, seed)) {
            sx += u.position.x;
            sy += u.position.y;
            ++bins[static_cast<std::size_t>(u.position.x * 10)];
            ++n;
        }
    }
    REQUIRE(n == 10000);
    CHECK(sx / n >= 0.49);
    CHECK(sx / n <= 0.51);
    CHECK(sy / n >= 0.49);
    CHECK(sy / n <= 0.51);
    double chi2 = 0.0;
    for (int b : bins) {
        chi2 += (b - 1000.0) * (b - 1000.0) / 1000.0;
    }
    CHECK(chi2 < 27.88); // chi-square(9) at p = 0.001
}

TEST_CASE("coverage margin and MCS lookup")
{
    CoverageSpec c;
    c.temporal_availability = 0.99;
    c.shadowing_sigma_db = 5.0;
    CHECK(c.shadowing_margin_db() == doctest::Approx(5.0 * 2.3263478740408408).epsilon(1e-12));
    c.shadowing_sigma_db = 0.0;
    CHECK(c.shadowing_margin_db() == 0.0);

    c.mcs_table = {{150, 0.5e6}, {143, 1.5e6}, {136, 4.5e6}};
    CHECK(*c.max_path_loss_for(1e6) == 143.0);
    CHECK(*c.max_path_loss_for(0.5e6) == 150.0);
    CHECK(*c.max_path_loss_for(4.5e6) == 136.0);
    CHECK_FALSE(c.max_path_loss_for(5e6).has_value());
}

TEST_CASE("site lookup by id")
{
    const auto s = test::shipped("toy_3site.json");
    CHECK(s.site("B").position.x == 1600.0);
    CHECK_THROWS_AS(s.site("Z"), ScenarioError);
}
