"""Command-line surface: evaluate, sweep, optimize, simulate, fov, power,
presets.

Artifacts land in the directory named by FOGSCOPE_OUT (default: current
directory).  Exit codes: 0 success, 2 input error, 3 infeasible
configuration (TDP or motor overload), 4 optimizer failure.
"""

from __future__ import annotations

import sys
import warnings
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import flight, model, reporting, simulation
from .model import TdpExceeded, ValidationError
from .optimizer import NoFeasibleSolution, OptConfig, OptProblem, optimize
from .reporting import ResultTable, RunManifest, write_artifact
from .scenario import (ParseError, Scenario, catalog_checksum, catalog_rows,
                       default_scenario, load_scenario, parse_grid_spec,
                       preset, scenario_digest, sweep_grid, UnknownPreset)

EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_OPTIMIZER = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(scenario_path: Optional[str]) -> Scenario:
    if scenario_path is None:
        return default_scenario()
    try:
        text = Path(scenario_path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read scenario file: {exc}")
    try:
        return load_scenario(text)
    except (ParseError, ValidationError) as exc:
        _fail(EXIT_INPUT, str(exc))


def _emit(filename: str, manifest: RunManifest, table: ResultTable) -> None:
    path = write_artifact(filename, manifest, table)
    click.echo(reporting.render_artifact(manifest, table), nl=False)
    click.echo(f"wrote {path}", err=True)


def _objective_row(scn: Scenario, r: float) -> tuple[tuple, bool]:
    """(row, feasible) for one split; infeasible rows carry the raw power."""
    split = model.DecisionState.from_ratio(scn.workload, r)
    throughput = model.throughput_to_cloud(scn.workload, split)
    feasible = True
    try:
        if scn.modification1_enabled:
            power = model.fog_energy_with_tx(scn.workload, scn.fog, split)
        else:
            power = model.fog_energy(scn.workload, scn.fog, split)
    except TdpExceeded as exc:
        power = exc.power_w
        feasible = False
    fog_lat = model.fog_latency_linear(scn.fog, split)
    cloud_lat = model.cloud_latency(scn.workload, scn.network, scn.cloud, split)
    row = (r, throughput, power, fog_lat, cloud_lat,
           model.avg_latency(fog_lat, cloud_lat), feasible)
    return row, feasible


@click.group()
@click.version_option(version=reporting.TOOL_VERSION, prog_name="fogscope")
def main():
    """Fog-cloud workload splitting feasibility toolkit for UAV fleets."""


@main.command()
@click.option("--scenario", "scenario_path", default=None,
              help="Scenario YAML file (defaults to the built-in scenario).")
@click.option("--r", "r", type=float, required=True,
              help="Fraction of arrivals accepted for fog processing.")
def evaluate(scenario_path: Optional[str], r: float):
    """Evaluate the objective vector for one workload split."""
    scn = _load(scenario_path)
    if not 0.0 <= r <= 1.0:
        _fail(EXIT_INPUT, f"--r={r} violates the bound [0, 1]")
    row, feasible = _objective_row(scn, r)
    if not feasible:
        _fail(EXIT_INFEASIBLE,
              f"fog power {row[2]:.6g} W exceeds TDP {scn.fog.tdp:.6g} W "
              f"at r={r}")
    table = ResultTable(
        columns=("r", "throughput_bps", "fog_power_w", "fog_latency_s",
                 "cloud_latency_s", "avg_latency_s", "feasible"),
        rows=[row])
    manifest = RunManifest.create("evaluate", scenario_digest(scn))
    _emit("evaluate.csv", manifest, table)


@main.command()
@click.option("--scenario", "scenario_path", default=None,
              help="Scenario YAML file (defaults to the built-in scenario).")
@click.option("--grid", "grid_text", default="",
              help="Axis spec, e.g. 'network=gsm,hspa_plus;v_fog_frac=0.25,1.0'.")
@click.option("--r-steps", type=int, default=101, show_default=True,
              help="Number of evenly spaced r values in [0, 1].")
def sweep(scenario_path: Optional[str], grid_text: str, r_steps: int):
    """Evaluate the objectives over a scenario grid times an r-grid."""
    scn = _load(scenario_path)
    if r_steps < 2:
        _fail(EXIT_INPUT, "--r-steps must be >= 2")
    try:
        scenarios = sweep_grid(scn, parse_grid_spec(grid_text))
    except ValidationError as exc:
        _fail(EXIT_INPUT, str(exc))
    r_values = np.linspace(0.0, 1.0, r_steps)
    columns = ("group", "scenario", "r", "throughput_bps", "fog_power_w",
               "fog_latency_s", "cloud_latency_s", "avg_latency_s", "feasible")
    manifest = RunManifest.create("sweep", scenario_digest(scn))
    rows = []
    infeasible = 0
    for gid, member in enumerate(scenarios):
        group_rows = []
        for r in r_values:
            with warnings.catch_warnings():
                # sweeps scan past the stability boundary by design
                warnings.simplefilter("ignore", model.InstabilityWarning)
                row, feasible = _objective_row(member, float(r))
            group_rows.append((gid, member.name) + row)
            infeasible += 0 if feasible else 1
        rows.extend(group_rows)
        write_artifact(f"sweep_g{gid:03d}.csv", manifest,
                       ResultTable(columns=columns, rows=group_rows))
    _emit("sweep.csv", manifest, ResultTable(columns=columns, rows=rows))
    if infeasible:
        _fail(EXIT_INFEASIBLE,
              f"{infeasible} grid point(s) exceed the TDP bound")


@main.command("optimize")
@click.option("--scenario", "scenario_path", default=None,
              help="Scenario YAML file (defaults to the built-in scenario).")
@click.option("--pop", type=int, default=100, show_default=True)
@click.option("--gens", type=int, default=100, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--crossover-rate", type=float, default=0.9, show_default=True)
@click.option("--mutation-rate", type=float, default=0.1, show_default=True)
@click.option("--mutation-sigma", type=float, default=0.05, show_default=True)
def optimize_cmd(scenario_path: Optional[str], pop: int, gens: int, seed: int,
                 crossover_rate: float, mutation_rate: float,
                 mutation_sigma: float):
    """Search for the Pareto front of workload splits."""
    scn = _load(scenario_path)
    try:
        cfg = OptConfig(population_size=pop, generations=gens,
                        crossover_rate=crossover_rate,
                        mutation_rate=mutation_rate,
                        mutation_sigma=mutation_sigma, seed=seed)
        problem = OptProblem(scenario=scn)
    except ValidationError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        front = optimize(problem, cfg)
    except NoFeasibleSolution as exc:
        _fail(EXIT_OPTIMIZER, str(exc))
    members = [(r, vec, crowd)
               for (r, vec), rank, crowd in zip(front.members, front.ranks,
                                                front.crowding)
               if rank == 0]
    members.sort(key=lambda m: m[1].throughput_to_cloud_bps)
    table = ResultTable(
        columns=("r", "throughput_bps", "fog_power_w", "avg_latency_s",
                 "rank", "crowding"),
        rows=[(r, vec.throughput_to_cloud_bps, vec.fog_power_w,
               vec.avg_latency_s, 0, crowd) for r, vec, crowd in members])
    manifest = RunManifest.create("optimize", scenario_digest(scn), seed=seed)
    _emit("optimize.csv", manifest, table)


@main.command()
@click.option("--scenario", "scenario_path", default=None,
              help="Scenario YAML file (defaults to the built-in scenario).")
@click.option("--local-prob", type=float, required=True,
              help="Probability a packet is classified for local processing.")
@click.option("--duration", type=float, required=True,
              help="Simulated seconds.")
@click.option("--warmup", type=float, default=None,
              help="Warmup seconds excluded from statistics "
                   "(default: 10% of duration).")
@click.option("--seed", type=int, required=True)
@click.option("--trace", "trace_path", default=None,
              help="Write a per-packet event trace CSV to this path.")
def simulate(scenario_path: Optional[str], local_prob: float, duration: float,
             warmup: Optional[float], seed: int, trace_path: Optional[str]):
    """Run the packet-level simulation once and compare with the model."""
    scn = _load(scenario_path)
    try:
        sim = simulation.SimScenario(scenario=scn, local_prob=local_prob,
                                     duration_s=duration, warmup_s=warmup)
    except ValidationError as exc:
        _fail(EXIT_INPUT, str(exc))
    metrics, packets = simulation.simulate_trace(sim, seed)
    split = model.DecisionState.from_ratio(scn.workload, local_prob)
    analytic_b = model.throughput_to_cloud(scn.workload, split)
    analytic_lat = model.fog_latency_linear(scn.fog, split)
    table = ResultTable(
        columns=("local_prob", "duration_s", "warmup_s",
                 "mean_local_sojourn_s", "mean_forward_latency_s",
                 "empirical_uplink_throughput_bps", "mean_fog_power_w",
                 "local_queue_max", "unstable", "packets_generated",
                 "packets_local_done", "packets_forwarded_done",
                 "packets_in_flight", "analytic_throughput_bps",
                 "analytic_fog_latency_s"),
        rows=[(local_prob, duration, sim.warmup_s,
               metrics.mean_local_sojourn_s, metrics.mean_forward_latency_s,
               metrics.empirical_uplink_throughput_bps,
               metrics.mean_fog_power_w, metrics.local_queue_max,
               metrics.unstable, metrics.packets_generated,
               metrics.packets_local_done, metrics.packets_forwarded_done,
               metrics.packets_in_flight, analytic_b, analytic_lat)])
    manifest = RunManifest.create("simulate", scenario_digest(scn), seed=seed)
    _emit("simulate.csv", manifest, table)
    if trace_path is not None:
        path = Path(trace_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as stream:
            stream.write(manifest.to_comment_line() + "\n")
            simulation.write_trace(stream, packets)
        click.echo(f"wrote {path}", err=True)


def _float_list(text: str, option: str) -> list[float]:
    values = [v.strip() for v in text.split(",") if v.strip()]
    if not values:
        _fail(EXIT_INPUT, f"{option} needs at least one value")
    try:
        return [float(v) for v in values]
    except ValueError:
        _fail(EXIT_INPUT, f"{option} must be a comma-separated number list")


@main.command()
@click.option("--heights", default="10,15,20", show_default=True,
              help="Flight heights in meters, comma separated.")
@click.option("--speeds", default="5,10", show_default=True,
              help="Ground speeds in m/s, comma separated.")
@click.option("--dfov", type=float, default=94.0, show_default=True,
              help="Diagonal field of view in degrees.")
@click.option("--aspect", default="3:2", show_default=True,
              help="Image aspect ratio W:H; the H side lies along-track.")
def fov(heights: str, speeds: str, dfov: float, aspect: str):
    """Camera footprint, dwell time, and cloud latency-budget verdicts."""
    height_values = _float_list(heights, "--heights")
    speed_values = _float_list(speeds, "--speeds")
    if min(height_values) <= 0 or min(speed_values) <= 0:
        _fail(EXIT_INPUT, "heights and speeds must be > 0")
    try:
        w_txt, _, h_txt = aspect.partition(":")
        cam = flight.CameraParams(diagonal_fov_deg=dfov,
                                  aspect_w=float(w_txt), aspect_h=float(h_txt))
    except ValueError as exc:
        _fail(EXIT_INPUT, f"--aspect/--dfov: {exc}")
    rows = []
    for h in height_values:
        along, _ = flight.ground_coverage(cam, h)
        for v in speed_values:
            dwell = flight.dwell_time(cam, h, v)
            verdict = flight.latency_budget_verdict(dwell,
                                                    flight.CLOUD_ROUND_TRIP_S)
            rows.append((h, v, along, dwell, verdict.feasible))
    table = ResultTable(
        columns=("height_m", "speed_mps", "along_track_m", "dwell_s",
                 "cloud_feasible_at_1.68s"),
        rows=rows)
    manifest = RunManifest.create("fov", f"dfov={dfov!r},aspect={aspect}")
    _emit("fov.csv", manifest, table)


@main.command()
@click.option("--kind", type=click.Choice(["quad", "fixedwing"]),
              default="quad", show_default=True)
@click.option("--mass-min", type=float, default=0.5, show_default=True)
@click.option("--mass-max", type=float, default=3.0, show_default=True)
@click.option("--step", type=float, default=0.25, show_default=True)
@click.option("--motor", "motor_name", default="x2212", show_default=True)
@click.option("--efficiency", type=float, default=1.0, show_default=True,
              help="Overall drivetrain efficiency (1.0 = ideal model).")
@click.option("--wing-area", type=float, default=0.72, show_default=True)
@click.option("--drag-coeff", type=float, default=0.05, show_default=True)
@click.option("--lift-coeff", type=float, default=0.3, show_default=True)
def power(kind: str, mass_min: float, mass_max: float, step: float,
          motor_name: str, efficiency: float, wing_area: float,
          drag_coeff: float, lift_coeff: float):
    """Aircraft power across a mass grid, with the +250 g payload delta."""
    if not 0.0 < mass_min <= mass_max <= 3.0:
        _fail(EXIT_INPUT, "mass range must lie within (0, 3.0] kg")
    if step <= 0:
        _fail(EXIT_INPUT, "--step must be > 0")
    try:
        motor = preset(motor_name)
    except UnknownPreset:
        _fail(EXIT_INPUT, f"unknown motor preset {motor_name!r}")
    if not isinstance(motor, flight.MotorParams):
        _fail(EXIT_INPUT, f"preset {motor_name!r} is not a motor")

    def aircraft(mass: float) -> flight.AircraftModel:
        if kind == "quad":
            return flight.AircraftModel(kind=flight.QUAD_ROTOR, mass_kg=mass,
                                        motor=motor,
                                        overall_efficiency=efficiency)
        return flight.AircraftModel(kind=flight.FIXED_WING_BIMOTOR,
                                    mass_kg=mass, motor=motor,
                                    wing_area_m2=wing_area,
                                    drag_coeff=drag_coeff,
                                    lift_coeff=lift_coeff,
                                    overall_efficiency=efficiency)

    power_fn = (flight.hover_power if kind == "quad"
                else flight.fixed_wing_level_power)
    count = int((mass_max - mass_min) / step + 1e-9) + 1
    rows = []
    try:
        for i in range(count):
            mass = mass_min + i * step
            base = power_fn(aircraft(mass))
            delta = power_fn(aircraft(mass + 0.25)) - base
            rows.append((mass, base, delta))
    except flight.MotorOverload as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    table = ResultTable(
        columns=("mass_kg", "power_w", "delta_power_plus_250g_w"), rows=rows)
    manifest = RunManifest.create(
        "power", f"kind={kind},motor={motor_name},efficiency={efficiency!r}")
    _emit("power.csv", manifest, table)


@main.command()
def presets():
    """Dump the preset catalog with its pinned checksum."""
    table = ResultTable(columns=("group", "name", "field", "value", "source"),
                        rows=catalog_rows())
    manifest = RunManifest.create("presets", "sha256:" + catalog_checksum())
    _emit("presets.csv", manifest, table)


if __name__ == "__main__":
    main()
