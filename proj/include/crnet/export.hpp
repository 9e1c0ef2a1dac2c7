#pragma once

// CSV / JSON writers and the sites-file reader. All text output is UTF-8
// with LF line endings and '.' as decimal separator.

#include "crnet/baseline.hpp"
#include "crnet/optimizer.hpp"
#include "crnet/pareto.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace crnet {

/// Number rendering shared by every CSV: 9 significant digits, no negative zero.
std::string format_number(double value);

/// `w1,w2,w3,power_w,exposure_v_per_m,spectrum_channels,wa_mean,runs,converged,seed,front,marker`
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// `site_id,count`, sorted by site id.
void write_histogram_csv(std::ostream& out, const SiteHistogram& histogram);

/// `rank,site_id,x_m,y_m` in selection order.
void write_sites_csv(std::ostream& out, const std::vector<SiteSpec>& sites);

/// Reads the site_id column of a sites CSV and resolves ids in the scenario.
std::vector<SiteSpec> read_sites_csv(const std::filesystem::path& path, const Scenario& scenario);

/// BS states, EIRPs, links and metrics of one solution as JSON.
void write_solution_detail(std::ostream& out, const NetworkSolution& solution, const Scenario& scenario);

/// Per-seed rows `architecture,marker,seed,power_w,exposure_v_per_m,spectrum_channels,wa_mean,isl_violations`.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

/// `marker,power_diff_pct,exposure_diff_pct,spectrum_diff_pct,wa_diff_pct,power_p,exposure_p,spectrum_p`
/// Positive differentials mean the cloud architecture is better; for wa the
/// sign is flipped since more white space is better.
void write_differential_csv(std::ostream& out, const ComparisonReport& report);

std::string sha256_hex(const std::filesystem::path& path);

} // namespace crnet
