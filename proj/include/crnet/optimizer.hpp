#pragma once

#include "crnet/network.hpp"
#include "crnet/pareto.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnet {

struct FitnessContext {
    double p_max_w = 0.0;       ///< every selected BS active at max EIRP and full load
    double e_max_v_per_m = 0.0; ///< E_G of that configuration on the top channel
    int s_max = 0;
};

/// Throws std::invalid_argument unless every weight is in [0,1] and they
/// sum to one within 1e-12.
void validate_weights(const Weights& weights);

/// Weighted complement of the normalised KPIs. A zero weight drops its term
/// entirely, so an unevaluated metric may be left at any value.
double fitness(const MetricVector& metrics, const Weights& weights, const FitnessContext& ctx);

/// Connection votes per candidate site id.
using SiteHistogram = std::map<std::string, long>;

SiteHistogram phase1_histogram(const Scenario& scenario, std::span<const std::uint64_t> seeds);

/// The n most voted sites, ties to the smaller id.
std::vector<SiteSpec> select_sites(const Scenario& scenario, const SiteHistogram& histogram, int n);

/// Whether a user is inside the link budget of a site radiating eirp_dbm:
/// path loss <= allowable path loss - (max EIRP - eirp). No fading margin;
/// that is a planning-stage allowance.
bool within_link_budget(const Scenario& scenario, const SiteSpec& site, double eirp_dbm, const User& user);

/// Fraction of users whose best site (at max EIRP) covers them with the
/// shadowing margin applied.
double coverage_fraction(const Scenario& scenario, std::span<const SiteSpec> sites, std::span<const User> users);

class CoverageError : public std::runtime_error {
public:
    CoverageError(const std::string& message, double best_fraction)
        : std::runtime_error(message), best_fraction_(best_fraction)
    {
    }
    double best_fraction() const { return best_fraction_; }

private:
    double best_fraction_;
};

/// Smallest n whose top-n histogram sites reach the cell-edge coverage
/// target, averaged over the seeds. Throws CoverageError otherwise.
int minimum_nbs(const Scenario& scenario, std::span<const std::uint64_t> seeds);
int minimum_nbs(const Scenario& scenario, const SiteHistogram& histogram, std::span<const std::uint64_t> seeds);

/// Shared, immutable precomputation for one (scenario, selected sites):
/// the test-point lattice, per-site unit field rasters and the fitness
/// normalisers.
class PlanContext {
public:
    PlanContext(Scenario scenario, std::vector<SiteSpec> sites);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<SiteSpec>& sites() const { return sites_; }
    const Lattice& lattice() const { return lattice_; }
    const FitnessContext& fitness_context() const { return fitness_; }

    /// E^2 at each lattice point per mW of EIRP per MHz^2.
    std::span<const double> unit_field_sq(int site) const { return unit_field_sq_[site]; }

private:
    Scenario scenario_;
    std::vector<SiteSpec> sites_;
    Lattice lattice_;
    std::vector<std::vector<double>> unit_field_sq_;
    FitnessContext fitness_;
};

/// Greedy connection stage only: no trim, metrics left empty. `tracked`
/// receives the incrementally maintained metrics of the returned state
/// (exposure only when w2 > 0).
NetworkSolution phase2_build(const PlanContext& ctx, const Weights& weights, std::uint64_t seed,
                             MetricVector* tracked = nullptr);

/// One greedy build for one weight triple and one user realisation.
NetworkSolution phase2_optimize(const PlanContext& ctx, const Weights& weights, std::uint64_t seed);

/// Lowers each active BS in trim_step_db steps while every served user stays
/// inside its link budget. Returns the number of steps taken.
int trim_eirp(NetworkSolution& solution, const Scenario& scenario);

/// Recomputes metrics and white-space mean from the solution state.
void finalize_metrics(NetworkSolution& solution, const Scenario& scenario);

/// phase2_optimize over seeds base_seed, base_seed+1, ... until every
/// progressive KPI mean is stable over the trailing window or max_sim runs.
ParetoPoint run_converged(const PlanContext& ctx, const Weights& weights, std::uint64_t base_seed, int max_sim = 0);

/// Relative standard deviation of the last `window` entries (sample std).
double trailing_rel_std(std::span<const double> values, int window);

} // namespace crnet
