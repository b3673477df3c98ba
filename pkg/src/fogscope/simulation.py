"""Packet-level discrete-event simulation of the fog dataflow.

Arrivals are Poisson; each packet is classified important (forwarded to
the cloud through a FIFO uplink channel) or not (queued for local
processing at an exponential-service single server).  The run reproduces
the analytic model's throughput/energy/latency trends empirically; the
exponential service law makes the M/M/1 sojourn formula 1/(mu - lambda)
an independent oracle for the local queue.

Cloud processing and the returned-fraction downlink are fixed per-packet
delays (no cloud queue); the uplink serialization time is size/throughput
scaled by the mean-1 noise multiplier when noise_sigma > 0.
"""

from __future__ import annotations

import csv
import heapq
import random
import warnings
from collections import deque
from dataclasses import dataclass
from typing import IO, Optional

from scipy import stats

from . import model
from .model import ValidationError
from .scenario import Scenario

PATH_LOCAL = "local"
PATH_FORWARDED = "forwarded"

_ARRIVAL, _LOCAL_DONE, _UPLINK_DONE, _SAMPLE = range(4)
_QUEUE_SAMPLES = 32


@dataclass(frozen=True)
class SimScenario:
    """One simulation setup; warmup defaults to 10% of the duration."""

    scenario: Scenario
    local_prob: float
    duration_s: float
    warmup_s: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.local_prob <= 1.0:
            raise ValidationError("local_prob: must be within [0, 1]",
                                  field="local_prob")
        if self.warmup_s is None:
            object.__setattr__(self, "warmup_s", 0.1 * self.duration_s)
        if not 0.0 <= self.warmup_s < self.duration_s:
            raise ValidationError(
                "duration_s: duration must exceed warmup (warmup >= 0)",
                field="duration_s")


@dataclass
class Packet:
    id: int
    arrival_time: float
    size_bits: float
    important: bool
    path: str
    departure_time: Optional[float] = None


@dataclass(frozen=True)
class SimMetrics:
    mean_local_sojourn_s: float
    mean_forward_latency_s: float
    empirical_uplink_throughput_bps: float
    mean_fog_power_w: float
    local_queue_max: int
    unstable: bool
    packets_generated: int
    packets_local_done: int
    packets_forwarded_done: int
    packets_in_flight: int


def simulate(sim: SimScenario, seed: int) -> SimMetrics:
    """Run one seeded simulation; deterministic given (sim, seed)."""
    metrics, _ = simulate_trace(sim, seed)
    return metrics


def simulate_trace(sim: SimScenario, seed: int) -> tuple[SimMetrics, list[Packet]]:
    """Like :func:`simulate` but also returns the per-packet trace."""
    rng = random.Random(seed)
    workload = sim.scenario.workload
    fog = sim.scenario.fog
    net = sim.scenario.network
    cloud = sim.scenario.cloud

    size = workload.packet_size
    # fixed per-packet tail after the uplink: cloud processing plus the
    # returned-fraction downlink, mirroring the analytic latency terms
    tail = (size / (2.0 * cloud.proc_capability)
            + net.return_fraction * size / (2.0 * net.downlink_throughput)
            + net.base_latency)

    duration = sim.duration_s
    warmup = sim.warmup_s
    window = duration - warmup

    events: list[tuple[float, int, int, Optional[Packet]]] = []
    seq = 0

    def push(time: float, kind: int, packet: Optional[Packet] = None) -> None:
        nonlocal seq
        heapq.heappush(events, (time, seq, kind, packet))
        seq += 1

    for i in range(1, _QUEUE_SAMPLES + 1):
        push(duration * i / _QUEUE_SAMPLES, _SAMPLE)
    if workload.arrival_rate > 0:
        push(rng.expovariate(workload.arrival_rate), _ARRIVAL)

    packets: list[Packet] = []
    local_queue: deque[Packet] = deque()
    server_busy = False
    busy_since = 0.0
    busy_time = 0.0          # server busy time inside the stats window
    uplink_queue: deque[Packet] = deque()
    channel_busy = False

    queue_samples: list[int] = []
    local_queue_max = 0
    local_sojourns: list[float] = []
    forward_latencies: list[float] = []
    uplink_bits_window = 0.0
    local_done = 0
    forwarded_done = 0

    def local_system_size() -> int:
        return len(local_queue) + (1 if server_busy else 0)

    def start_service(now: float) -> None:
        nonlocal server_busy, busy_since
        server_busy = True
        busy_since = now
        packet = local_queue[0]
        push(now + rng.expovariate(fog.proc_capability), _LOCAL_DONE, packet)

    def start_transfer(now: float) -> None:
        nonlocal channel_busy
        channel_busy = True
        packet = uplink_queue[0]
        transfer = packet.size_bits / net.uplink_throughput
        if net.noise_sigma > 0:
            transfer *= model.sample_latency_noise(rng, net.noise_sigma)
        push(now + transfer, _UPLINK_DONE, packet)

    while events:
        now, _, kind, packet = heapq.heappop(events)
        if now > duration:
            break

        if kind == _ARRIVAL:
            important = rng.random() >= sim.local_prob
            pkt = Packet(id=len(packets), arrival_time=now, size_bits=size,
                         important=important,
                         path=PATH_FORWARDED if important else PATH_LOCAL)
            packets.append(pkt)
            if important:
                uplink_queue.append(pkt)
                if not channel_busy:
                    start_transfer(now)
            else:
                local_queue.append(pkt)
                if now >= warmup:
                    local_queue_max = max(local_queue_max, local_system_size())
                if not server_busy:
                    start_service(now)
            push(now + rng.expovariate(workload.arrival_rate), _ARRIVAL)

        elif kind == _LOCAL_DONE:
            local_queue.popleft()
            packet.departure_time = now
            local_done += 1
            if packet.arrival_time >= warmup:
                local_sojourns.append(now - packet.arrival_time)
            busy_time += max(0.0, min(now, duration) - max(busy_since, warmup))
            server_busy = False
            if local_queue:
                start_service(now)

        elif kind == _UPLINK_DONE:
            uplink_queue.popleft()
            packet.departure_time = now + tail
            forwarded_done += 1
            if now > warmup:
                uplink_bits_window += packet.size_bits
            if packet.arrival_time >= warmup:
                forward_latencies.append(packet.departure_time
                                         - packet.arrival_time)
            channel_busy = False
            if uplink_queue:
                start_transfer(now)

        else:  # _SAMPLE
            queue_samples.append(local_system_size())

    if server_busy:
        busy_time += max(0.0, duration - max(busy_since, warmup))

    mean_power = fog.idle_power
    if window > 0:
        mean_power += (fog.energy_per_bit * size * fog.proc_capability
                       * busy_time / window)
        if sim.scenario.modification1_enabled:
            mean_power += fog.tx_energy_per_bit * uplink_bits_window / window

    half = queue_samples[len(queue_samples) // 2:]
    unstable = (len(half) >= 2
                and all(b >= a for a, b in zip(half, half[1:]))
                and half[-1] > half[0])

    metrics = SimMetrics(
        mean_local_sojourn_s=_mean(local_sojourns),
        mean_forward_latency_s=_mean(forward_latencies),
        empirical_uplink_throughput_bps=(uplink_bits_window / window
                                         if window > 0 else 0.0),
        mean_fog_power_w=mean_power,
        local_queue_max=local_queue_max,
        unstable=unstable,
        packets_generated=len(packets),
        packets_local_done=local_done,
        packets_forwarded_done=forwarded_done,
        packets_in_flight=len(packets) - local_done - forwarded_done,
    )
    return metrics, packets


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


TRACE_COLUMNS = ("id", "arrival_time", "important", "path", "departure_time",
                 "size_bits")


def write_trace(stream: IO[str], packets: list[Packet]) -> None:
    """One CSV record per generated packet; in-flight packets get an empty
    departure_time."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for p in packets:
        departure = repr(p.departure_time) if p.departure_time is not None else ""
        writer.writerow([p.id, repr(p.arrival_time),
                         "true" if p.important else "false", p.path,
                         departure, repr(p.size_bits)])


# ---------------------------------------------------------------------------
# Analytic-vs-empirical trend comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrendRow:
    r: float
    analytic_throughput_bps: float
    analytic_fog_latency_s: float
    analytic_cloud_latency_s: float
    analytic_avg_latency_s: float
    analytic_fog_power_w: float
    sim_local_sojourn_s: float
    sim_forward_latency_s: float
    sim_uplink_throughput_bps: float
    sim_fog_power_w: float
    sim_unstable: bool


@dataclass(frozen=True)
class TrendComparison:
    rows: list[TrendRow]
    spearman_avg_latency: float


def trend_compare(sim: SimScenario, r_grid: list[float],
                  seed: int) -> TrendComparison:
    """Run the simulator across an r-grid and pair it with the analytic model.

    Each r reuses the scenario with local_prob = r (seeded as seed + index)
    and reports the Spearman rank correlation between the analytic average
    latency and the empirical mean of the local and forward latencies.
    """
    if not r_grid:
        raise ValidationError("r_grid: must be nonempty", field="r_grid")
    scn = sim.scenario
    rows = []
    for i, r in enumerate(r_grid):
        split = model.DecisionState.from_ratio(scn.workload, r)
        with warnings.catch_warnings():
            # grid scans cross the stability boundary on purpose
            warnings.simplefilter("ignore", model.InstabilityWarning)
            fog_lat = model.fog_latency_linear(scn.fog, split)
            vec = model.objectives(scn, r)
        cloud_lat = model.cloud_latency(scn.workload, scn.network, scn.cloud,
                                        split)
        run = SimScenario(scenario=scn, local_prob=r, duration_s=sim.duration_s,
                          warmup_s=sim.warmup_s)
        metrics = simulate(run, seed + i)
        rows.append(TrendRow(
            r=r,
            analytic_throughput_bps=vec.throughput_to_cloud_bps,
            analytic_fog_latency_s=fog_lat,
            analytic_cloud_latency_s=cloud_lat,
            analytic_avg_latency_s=vec.avg_latency_s,
            analytic_fog_power_w=vec.fog_power_w,
            sim_local_sojourn_s=metrics.mean_local_sojourn_s,
            sim_forward_latency_s=metrics.mean_forward_latency_s,
            sim_uplink_throughput_bps=metrics.empirical_uplink_throughput_bps,
            sim_fog_power_w=metrics.mean_fog_power_w,
            sim_unstable=metrics.unstable,
        ))
    if len(rows) < 2:
        rho = float("nan")
    else:
        analytic = [row.analytic_avg_latency_s for row in rows]
        empirical = [model.avg_latency(row.sim_local_sojourn_s,
                                       row.sim_forward_latency_s)
                     for row in rows]
        rho = float(stats.spearmanr(analytic, empirical).statistic)
    return TrendComparison(rows=rows, spearman_avg_latency=rho)
