#pragma once

#include "crnet/config.hpp"
#include "crnet/geometry.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace crnet {

struct Scenario;

enum class LinkKind { cr, tv };

enum class EmitterKind { cr_bs, cr_user, tv };

struct Emitter {
    Point position;
    double eirp_dbm = 0.0;
    double frequency_mhz = 0.0;
    EmitterKind kind = EmitterKind::cr_bs;
};

inline LinkKind link_kind(EmitterKind kind)
{
    return kind == EmitterKind::tv ? LinkKind::tv : LinkKind::cr;
}

/// One-slope / log-distance loss, clamped to pl0_db below d0.
double path_loss(const PathLossParams& params, double distance_m);

/// Frequency is accepted for models that need it; both current models are
/// frequency independent.
double path_loss(const PathLossSpec& spec, LinkKind kind, double distance_m, double frequency_mhz);

/// Field strength in V/m for a given EIRP (dBm), frequency (MHz) and path loss (dB).
double efield_v_per_m(double eirp_dbm, double frequency_mhz, double path_loss_db);

double efield_from_emitter(const Emitter& emitter, Point point, const PathLossSpec& spec);

/// Root sum of squares over uncorrelated sources. Zero for an empty list.
double total_field(std::span<const Emitter> emitters, Point point, const PathLossSpec& spec);

double received_power(const Emitter& emitter, Point point, const PathLossSpec& spec);

struct FieldGrid {
    Lattice lattice;
    std::vector<double> values_v_per_m;
};

/// total_field at every lattice point, in grid_points order. Parallel over
/// points; bit-identical to reference::field_grid.
FieldGrid field_grid(std::span<const Emitter> emitters, const Scenario& scenario);
FieldGrid field_grid(std::span<const Emitter> emitters, const Lattice& lattice, const PathLossSpec& spec);

namespace reference {
FieldGrid field_grid(std::span<const Emitter> emitters, const Lattice& lattice, const PathLossSpec& spec);
} // namespace reference

/// `x_m,y_m,value`, row-major, 9 significant digits.
void write_field_grid_csv(std::ostream& out, const FieldGrid& grid);

} // namespace crnet
