#!/usr/bin/env python3
"""Desk-scale objective surfaces: how throughput, fog power, and average
latency move with the workload split under different network standards,
fog capability levels, uplink rates, and the transmission-power term.

Writes one plot-ready CSV per family into --out (or FOGSCOPE_OUT).
"""

import argparse
import os
import warnings
from dataclasses import replace
from pathlib import Path

from fogscope import model
from fogscope.reporting import ResultTable, RunManifest, render_artifact
from fogscope.scenario import (CATALOG, default_scenario, parse_grid_spec,
                               scenario_digest, sweep_grid)

COLUMNS = ("family", "member", "r", "throughput_bps", "fog_power_w",
           "avg_latency_s")


def family_rows(name, scenarios, r_steps):
    rows = []
    with warnings.catch_warnings():
        # surfaces deliberately cover the unstable half of the r range
        warnings.simplefilter("ignore", model.InstabilityWarning)
        for member in scenarios:
            for i in range(r_steps):
                r = i / (r_steps - 1)
                vec = model.objectives(member, r)
                rows.append((name, member.name, r,
                             vec.throughput_to_cloud_bps, vec.fog_power_w,
                             vec.avg_latency_s))
    return rows


def write(out_dir, filename, base, rows):
    manifest = RunManifest.create("objective-surfaces", scenario_digest(base))
    path = out_dir / filename
    path.write_text(render_artifact(manifest,
                                    ResultTable(columns=COLUMNS, rows=rows)),
                    encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.environ.get("FOGSCOPE_OUT", "."),
                        help="output directory")
    parser.add_argument("--r-steps", type=int, default=101)
    args = parser.parse_args()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    base = default_scenario()

    networks = sweep_grid(base, parse_grid_spec(
        "network=" + ",".join(CATALOG.networks)))
    write(out_dir, "network_families.csv", base,
          family_rows("network", networks, args.r_steps))

    capabilities = sweep_grid(base,
                              parse_grid_spec("v_fog_frac=0.25,0.5,0.75,1.0"))
    write(out_dir, "fog_capability_families.csv", base,
          family_rows("v_fog_frac", capabilities, args.r_steps))

    uplinks = sweep_grid(base, parse_grid_spec(
        "network.uplink_throughput_bps=4e4,3.84e5,1.5e6,5.76e6,1.15e7"))
    write(out_dir, "uplink_rate_families.csv", base,
          family_rows("uplink", uplinks, args.r_steps))

    # with and without the transmission-power term at equal workloads
    tx = replace(base, fog=replace(base.fog, tx_energy_per_bit=2e-8),
                 modification1_enabled=True, name="default[tx=2e-8]")
    write(out_dir, "tx_power_comparison.csv", base,
          family_rows("tx_term", [base, tx], args.r_steps))


if __name__ == "__main__":
    main()
