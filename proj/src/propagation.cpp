#include "crnet/propagation.hpp"

#include "crnet/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace crnet {

double path_loss(const PathLossParams& params, double distance_m)
{
    const double d = std::max(distance_m, params.d0_m);
    return params.pl0_db + 10.0 * params.exponent * std::log10(d / params.d0_m);
}

double path_loss(const PathLossSpec& spec, LinkKind kind, double distance_m, double /*frequency_mhz*/)
{
    return path_loss(kind == LinkKind::tv ? spec.tv : spec.cr, distance_m);
}

double efield_v_per_m(double eirp_dbm, double frequency_mhz, double path_loss_db)
{
    return std::pow(10.0, (eirp_dbm - 43.15 + 20.0 * std::log10(frequency_mhz) - path_loss_db) / 20.0);
}

double efield_from_emitter(const Emitter& emitter, Point point, const PathLossSpec& spec)
{
    const double pl = path_loss(spec, link_kind(emitter.kind), distance(emitter.position, point), emitter.frequency_mhz);
    return efield_v_per_m(emitter.eirp_dbm, emitter.frequency_mhz, pl);
}

double total_field(std::span<const Emitter> emitters, Point point, const PathLossSpec& spec)
{
    double sum_sq = 0.0;
    for (const auto& e : emitters) {
        const double field = efield_from_emitter(e, point, spec);
        sum_sq += field * field;
    }
    return std::sqrt(sum_sq);
}

double received_power(const Emitter& emitter, Point point, const PathLossSpec& spec)
{
    return emitter.eirp_dbm -
           path_loss(spec, link_kind(emitter.kind), distance(emitter.position, point), emitter.frequency_mhz);
}

FieldGrid field_grid(std::span<const Emitter> emitters, const Scenario& scenario)
{
    return field_grid(emitters, scenario.lattice(), scenario.path_loss);
}

void write_field_grid_csv(std::ostream& out, const FieldGrid& grid)
{
    out << "x_m,y_m,value\n";
    for (std::size_t k = 0; k < grid.lattice.size(); ++k) {
        const auto p = grid.lattice.point(k);
        out << fmt::format("{:.9g},{:.9g},{:.9g}\n", p.x, p.y, grid.values_v_per_m[k]);
    }
}

} // namespace crnet
