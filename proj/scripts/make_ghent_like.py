#!/usr/bin/env python3
"""Generate the synthetic ghent_like scenario.

45 candidate sites on a jittered grid over an 8 km x 8.5 km urban area,
UHF channels 21-60 and a ring of distant broadcast towers. The output is
deterministic for a given --seed.
"""

import argparse
import json

import numpy as np


def build(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    width, height = 8000.0, 8500.0

    sites = []
    cols, rows = 9, 5
    dx, dy = width / cols, height / rows
    k = 0
    for r in range(rows):
        for c in range(cols):
            x = (c + 0.5) * dx + rng.uniform(-0.3, 0.3) * dx
            y = (r + 0.5) * dy + rng.uniform(-0.3, 0.3) * dy
            k += 1
            sites.append({
                "id": f"S{k:02d}",
                "x": round(float(x), 1),
                "y": round(float(y), 1),
                "max_eirp_dbm": 46.0,
                "capacity_bps": 18e6,
            })

    channels = [{"index": i, "center_frequency_mhz": 474.0 + 8.0 * i} for i in range(40)]

    towers = []
    cx, cy = width / 2, height / 2
    tower_channels = rng.choice(40, size=10, replace=False)
    for i, ch in enumerate(sorted(int(c) for c in tower_channels)):
        angle = rng.uniform(0, 2 * np.pi)
        dist = rng.uniform(12e3, 40e3)
        towers.append({
            "id": f"TV{i + 1:02d}",
            "x": round(float(cx + dist * np.cos(angle)), 1),
            "y": round(float(cy + dist * np.sin(angle)), 1),
            "eirp_dbm": round(float(rng.uniform(80.0, 95.0)), 1),
            "channel_index": ch,
        })

    return {
        "name": "ghent_like",
        "description": "Synthetic stand-in for a dense urban TV white space deployment",
        "area": {"x_min": 0.0, "y_min": 0.0, "x_max": width, "y_max": height},
        "grid_resolution_m": 50.0,
        "channels": channels,
        "sites": sites,
        "tv_transmitters": towers,
        "users": {"count": 224, "bitrate_bps": 1e6},
        "isl": {"cr_threshold_dbm": -116.0, "tv_threshold_dbm": -95.0},
        "power_model": {"p_sleep_w": 9.0, "p_idle_w": 38.0, "p_peak_w": 64.0, "traffic_weight": 0.5},
        "coverage": {
            "cell_edge_coverage": 0.95,
            "temporal_availability": 0.99,
            "shadowing_sigma_db": 5.0,
            "mcs_table": [
                {"max_path_loss_db": 156.0, "bitrate_bps": 0.5e6},
                {"max_path_loss_db": 149.0, "bitrate_bps": 1.5e6},
                {"max_path_loss_db": 142.0, "bitrate_bps": 4.5e6},
                {"max_path_loss_db": 134.0, "bitrate_bps": 9e6},
            ],
        },
        "path_loss": {
            "cr": {"model": "one_slope", "pl0_db": 40.0, "d0_m": 1.0, "exponent": 3.0},
            "tv": {"model": "log_distance_tv", "pl0_db": 40.0, "d0_m": 1.0, "exponent": 3.5},
        },
        "simulation": {"max_sim": 30, "convergence_rel_std": 0.02, "convergence_window": 10, "trim_step_db": 1.0},
        "allocator": {"user_eirp_dbm": 20.0, "aggregation": "linear_sum"},
        "exposure": {"e50": "median"},
        "baseline": {"sensing_floor_offset_db": -10.0},
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2016)
    ap.add_argument("--out", default="data/scenarios/ghent_like.json")
    args = ap.parse_args()
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        json.dump(build(args.seed), f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
