#!/usr/bin/env python3
"""Operational budgets: camera dwell time against the cloud round trip at
several flight heights and speeds, plus hover and level-flight power
across the 0.5-3.0 kg mass envelope with the +250 g payload delta.
"""

import argparse
import os
from pathlib import Path

from fogscope import flight
from fogscope.flight import AircraftModel, CameraParams
from fogscope.reporting import ResultTable, RunManifest, render_artifact
from fogscope.scenario import preset


def dwell_rows(cam, heights, speeds):
    rows = []
    for h in heights:
        along, across = flight.ground_coverage(cam, h)
        for v in speeds:
            dwell = flight.dwell_time(cam, h, v)
            verdict = flight.latency_budget_verdict(
                dwell, flight.CLOUD_ROUND_TRIP_S)
            rows.append((h, v, along, across, dwell, verdict.feasible,
                         verdict.margin_s))
    return rows


def power_rows(motor, masses, efficiency):
    def quad(m):
        return AircraftModel(kind=flight.QUAD_ROTOR, mass_kg=m, motor=motor,
                             overall_efficiency=efficiency)

    def wing(m):
        return AircraftModel(kind=flight.FIXED_WING_BIMOTOR, mass_kg=m,
                             motor=motor, wing_area_m2=0.72, drag_coeff=0.05,
                             lift_coeff=0.3, overall_efficiency=efficiency)

    rows = []
    for m in masses:
        hover = flight.hover_power(quad(m))
        hover_delta = flight.hover_power(quad(m + 0.25)) - hover
        level = flight.fixed_wing_level_power(wing(m))
        level_delta = flight.fixed_wing_level_power(wing(m + 0.25)) - level
        rows.append((m, hover, hover_delta, level, level_delta))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.environ.get("FOGSCOPE_OUT", "."))
    parser.add_argument("--efficiency", type=float, default=1.0)
    args = parser.parse_args()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    cam = CameraParams(diagonal_fov_deg=94.0, aspect_w=3, aspect_h=2)
    heights = [10.0, 15.0, 20.0]
    speeds = [2.5, 5.0, 7.5, 10.0, 15.0]
    dwell_table = ResultTable(
        columns=("height_m", "speed_mps", "along_track_m", "across_track_m",
                 "dwell_s", "cloud_feasible", "margin_s"),
        rows=dwell_rows(cam, heights, speeds))
    manifest = RunManifest.create("flight-budgets", "dfov=94.0,aspect=3:2")
    path = out_dir / "dwell_budget.csv"
    path.write_text(render_artifact(manifest, dwell_table), encoding="utf-8")
    print(f"wrote {path}")

    for h in heights:
        along, _ = flight.ground_coverage(cam, h)
        print(f"  h={h:>4.0f} m: dwell feasible below "
              f"{along / flight.CLOUD_ROUND_TRIP_S:.2f} m/s")

    motor = preset("x2212")
    masses = [0.5 + 0.25 * i for i in range(11)]
    power_table = ResultTable(
        columns=("mass_kg", "hover_power_w", "hover_delta_plus_250g_w",
                 "level_power_w", "level_delta_plus_250g_w"),
        rows=power_rows(motor, masses, args.efficiency))
    manifest = RunManifest.create(
        "flight-budgets", f"motor=x2212,efficiency={args.efficiency!r}")
    path = out_dir / "power_budget.csv"
    path.write_text(render_artifact(manifest, power_table), encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
