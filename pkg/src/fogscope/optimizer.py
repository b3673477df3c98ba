"""Evolutionary multiobjective search over the workload split.

NSGA-II scheme: fast non-dominated sorting, crowding distance, binary
tournament selection, blend crossover and Gaussian mutation on the single
decision variable r in [0, 1].  Candidates whose fog power lands above
the TDP are handled with constrained dominance (always ranked below every
feasible candidate, among themselves by violation size).

`brute_force_front` evaluates a regular r-grid and keeps the exact
non-dominated subset; it serves as the independent oracle for `optimize`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence

import numpy as np

from . import model
from .model import (InstabilityWarning, ObjectiveVector, TdpExceeded,
                    ValidationError)

if TYPE_CHECKING:
    from .scenario import Scenario


class NoFeasibleSolution(Exception):
    """Every sampled workload split violated the TDP bound."""


ALWAYS_DOMINATED = "always-dominated"


@dataclass(frozen=True)
class OptProblem:
    scenario: "Scenario"
    decision_bounds: tuple[float, float] = (0.0, 1.0)
    objective_fn: Callable[["Scenario", float], ObjectiveVector] = model.objectives
    infeasibility_policy: str = ALWAYS_DOMINATED

    def __post_init__(self):
        lo, hi = self.decision_bounds
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValidationError(
                "decision_bounds: must be a nonempty closed interval within "
                "[0, 1]", field="decision_bounds")
        if self.infeasibility_policy != ALWAYS_DOMINATED:
            raise ValidationError(
                f"infeasibility_policy: unsupported policy "
                f"{self.infeasibility_policy!r}", field="infeasibility_policy")


@dataclass(frozen=True)
class OptConfig:
    population_size: int = 100
    generations: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    mutation_sigma: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValidationError("population_size: must be >= 4 and even",
                                  field="population_size")
        if self.generations < 1:
            raise ValidationError("generations: must be >= 1",
                                  field="generations")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValidationError(f"{name}: must be within [0, 1]",
                                      field=name)
        if self.mutation_sigma <= 0:
            raise ValidationError("mutation_sigma: must be > 0",
                                  field="mutation_sigma")


@dataclass(frozen=True)
class ParetoFront:
    """Ranked candidate set; members sorted by (rank, -crowding)."""

    members: list[tuple[float, ObjectiveVector]]
    ranks: list[int]
    crowding: list[float]

    def rank_zero(self) -> list[tuple[float, ObjectiveVector]]:
        return [m for m, rk in zip(self.members, self.ranks) if rk == 0]


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance for minimization: a <= b everywhere, < somewhere."""
    if len(a) != len(b):
        raise ValueError("objective vectors must have equal length")
    not_worse = all(x <= y for x, y in zip(a, b))
    strictly_better = any(x < y for x, y in zip(a, b))
    return not_worse and strictly_better


def _dominance_matrix(objs: np.ndarray) -> np.ndarray:
    """Boolean matrix M with M[i, j] true iff point i dominates point j."""
    le = np.all(objs[:, None, :] <= objs[None, :, :], axis=2)
    lt = np.any(objs[:, None, :] < objs[None, :, :], axis=2)
    return le & lt


def _ranks_from_matrix(dom: np.ndarray) -> list[int]:
    """Peel non-dominated fronts off a dominance matrix."""
    n = dom.shape[0]
    dominator_count = dom.sum(axis=0).astype(np.int64)
    ranks = np.full(n, -1, dtype=np.int64)
    current = 0
    remaining = n
    while remaining:
        front = (dominator_count == 0) & (ranks == -1)
        if not front.any():  # pragma: no cover - defensive
            raise RuntimeError("non-dominated sort failed to make progress")
        ranks[front] = current
        dominator_count -= dom[front].sum(axis=0)
        remaining -= int(front.sum())
        current += 1
    return ranks.tolist()


def non_dominated_sort(points: Sequence[Sequence[float]]) -> list[int]:
    """Per-point non-domination rank; rank 0 is the non-dominated set."""
    if len(points) == 0:
        raise ValueError("points must be nonempty")
    objs = np.asarray(points, dtype=float)
    return _ranks_from_matrix(_dominance_matrix(objs))


def crowding_distance(front: Sequence[Sequence[float]]) -> list[float]:
    """Crowding distances within one front.

    Boundary points of every objective get infinity; interior points sum
    the neighbor gaps normalized by the objective range.  An objective
    with zero range contributes nothing (avoids 0/0).
    """
    n = len(front)
    if n == 0:
        return []
    if n <= 2:
        return [float("inf")] * n
    objs = np.asarray(front, dtype=float)
    dist = np.zeros(n)
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        lo, hi = objs[order[0], m], objs[order[-1], m]
        dist[order[0]] = dist[order[-1]] = float("inf")
        span = hi - lo
        if span > 0:
            gaps = (objs[order[2:], m] - objs[order[:-2], m]) / span
            dist[order[1:-1]] += gaps
    return dist.tolist()


# ---------------------------------------------------------------------------
# NSGA-II machinery
# ---------------------------------------------------------------------------

@dataclass
class _Candidate:
    r: float
    objectives: Optional[ObjectiveVector]  # None when infeasible
    violation: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.objectives is not None


def _evaluate(problem: OptProblem, r: float) -> _Candidate:
    # the search scans all of [0, 1]; crossing the fog stability
    # boundary is expected, so the per-point warning is silenced here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InstabilityWarning)
        try:
            return _Candidate(r, problem.objective_fn(problem.scenario, r))
        except TdpExceeded as exc:
            return _Candidate(r, None, violation=exc.power_w - exc.tdp_w)


def _constrained_dominance_matrix(cands: list[_Candidate]) -> np.ndarray:
    """Deb-style constrained dominance across a candidate list."""
    n = len(cands)
    feasible = np.array([c.feasible for c in cands])
    dom = np.zeros((n, n), dtype=bool)
    f_idx = np.flatnonzero(feasible)
    i_idx = np.flatnonzero(~feasible)
    if f_idx.size:
        objs = np.array([cands[i].objectives.as_tuple() for i in f_idx])
        dom[np.ix_(f_idx, f_idx)] = _dominance_matrix(objs)
        dom[np.ix_(f_idx, i_idx)] = True
    if i_idx.size:
        viol = np.array([cands[i].violation for i in i_idx])
        dom[np.ix_(i_idx, i_idx)] = viol[:, None] < viol[None, :]
    return dom


def _rank_and_crowd(cands: list[_Candidate]) -> tuple[list[int], list[float]]:
    ranks = _ranks_from_matrix(_constrained_dominance_matrix(cands))
    crowding = [0.0] * len(cands)
    for rank in range(max(ranks) + 1):
        idx = [i for i, rk in enumerate(ranks) if rk == rank]
        pts = [cands[i].objectives.as_tuple() if cands[i].feasible
               else (cands[i].violation,) * 3 for i in idx]
        for i, d in zip(idx, crowding_distance(pts)):
            crowding[i] = d
    return ranks, crowding


def _tournament(rng: np.random.Generator, ranks: list[int],
                crowding: list[float]) -> int:
    i, j = rng.integers(0, len(ranks), size=2)
    i, j = int(i), int(j)
    if ranks[i] != ranks[j]:
        return i if ranks[i] < ranks[j] else j
    if crowding[i] != crowding[j]:
        return i if crowding[i] > crowding[j] else j
    return i


def _blend_crossover(rng: np.random.Generator, a: float, b: float,
                     rate: float, lo: float, hi: float) -> tuple[float, float]:
    if rng.random() < rate:
        spread = abs(a - b)
        low = min(a, b) - 0.5 * spread
        high = max(a, b) + 0.5 * spread
        a, b = rng.uniform(low, high, size=2)
    return float(np.clip(a, lo, hi)), float(np.clip(b, lo, hi))


def _mutate(rng: np.random.Generator, x: float, rate: float, sigma: float,
            lo: float, hi: float) -> float:
    if rng.random() < rate:
        x += rng.normal(0.0, sigma * (hi - lo))
    return float(np.clip(x, lo, hi))


def optimize(problem: OptProblem, cfg: OptConfig) -> ParetoFront:
    """Run the NSGA-II loop and return the ranked final population.

    Deterministic given cfg.seed.  Only feasible members are returned;
    raises NoFeasibleSolution when the final population contains none.
    """
    rng = np.random.default_rng(cfg.seed)
    lo, hi = problem.decision_bounds
    pop = [_evaluate(problem, float(r))
           for r in rng.uniform(lo, hi, cfg.population_size)]

    for _ in range(cfg.generations):
        ranks, crowding = _rank_and_crowd(pop)
        offspring: list[_Candidate] = []
        while len(offspring) < cfg.population_size:
            p1 = pop[_tournament(rng, ranks, crowding)].r
            p2 = pop[_tournament(rng, ranks, crowding)].r
            c1, c2 = _blend_crossover(rng, p1, p2, cfg.crossover_rate, lo, hi)
            c1 = _mutate(rng, c1, cfg.mutation_rate, cfg.mutation_sigma, lo, hi)
            c2 = _mutate(rng, c2, cfg.mutation_rate, cfg.mutation_sigma, lo, hi)
            offspring.append(_evaluate(problem, c1))
            offspring.append(_evaluate(problem, c2))
        combined = pop + offspring[:cfg.population_size]
        ranks, crowding = _rank_and_crowd(combined)
        order = sorted(range(len(combined)),
                       key=lambda i: (ranks[i], -crowding[i]))
        pop = [combined[i] for i in order[:cfg.population_size]]

    feasible = [c for c in pop if c.feasible]
    if not feasible:
        raise NoFeasibleSolution(
            "no workload split within the TDP bound was found")
    return _build_front(feasible)


def _build_front(cands: list[_Candidate]) -> ParetoFront:
    objs = [c.objectives.as_tuple() for c in cands]
    ranks = non_dominated_sort(objs)
    crowding = [0.0] * len(cands)
    for rank in range(max(ranks) + 1):
        idx = [i for i, rk in enumerate(ranks) if rk == rank]
        for i, d in zip(idx, crowding_distance([objs[i] for i in idx])):
            crowding[i] = d
    order = sorted(range(len(cands)), key=lambda i: (ranks[i], -crowding[i]))
    return ParetoFront(
        members=[(cands[i].r, cands[i].objectives) for i in order],
        ranks=[ranks[i] for i in order],
        crowding=[crowding[i] for i in order],
    )


def brute_force_front(problem: OptProblem, grid_step: float) -> ParetoFront:
    """Exact non-dominated subset of a regular r-grid (oracle path).

    The grid is ``round(width/step) + 1`` evenly spaced points including
    both bounds.  Infeasible grid points are dropped; the result is
    empty when no grid point is feasible.
    """
    if not 0 < grid_step <= 1:
        raise ValidationError("grid_step: must be within (0, 1]",
                              field="grid_step")
    lo, hi = problem.decision_bounds
    steps = max(1, round((hi - lo) / grid_step))
    grid = np.linspace(lo, hi, steps + 1)
    cands = [c for c in (_evaluate(problem, float(r)) for r in grid)
             if c.feasible]
    if not cands:
        return ParetoFront(members=[], ranks=[], crowding=[])
    objs = [c.objectives.as_tuple() for c in cands]
    ranks = non_dominated_sort(objs)
    kept = [c for c, rk in zip(cands, ranks) if rk == 0]
    return _build_front(kept)


# ---------------------------------------------------------------------------
# Hypervolume (minimization, 2 or 3 objectives)
# ---------------------------------------------------------------------------

def _staircase_insert(stairs: list[tuple[float, float]],
                      point: tuple[float, float]) -> None:
    """Insert into an x-ascending, y-descending non-dominated staircase."""
    x, y = point
    for sx, sy in stairs:
        if sx <= x and sy <= y:
            return  # dominated, no change
    stairs[:] = [(sx, sy) for sx, sy in stairs if not (x <= sx and y <= sy)]
    stairs.append((x, y))
    stairs.sort()


def _staircase_area(stairs: list[tuple[float, float]],
                    ref: tuple[float, float]) -> float:
    area = 0.0
    prev_y = ref[1]
    for x, y in stairs:
        if x >= ref[0] or y >= prev_y:
            continue
        area += (ref[0] - x) * (prev_y - y)
        prev_y = y
    return area


def hypervolume(points: Sequence[Sequence[float]],
                reference: Sequence[float]) -> float:
    """Dominated hypervolume of a point set w.r.t. a reference (minimization).

    Supports 2 and 3 objectives; points at or beyond the reference in any
    coordinate contribute nothing.
    """
    ref = tuple(float(v) for v in reference)
    pts = [tuple(float(v) for v in p) for p in points
           if all(v < r for v, r in zip(p, ref))]
    if not pts:
        return 0.0
    dim = len(ref)
    if dim == 2:
        stairs: list[tuple[float, float]] = []
        for p in pts:
            _staircase_insert(stairs, p)
        return _staircase_area(stairs, ref)
    if dim != 3:
        raise ValueError("hypervolume supports 2 or 3 objectives")
    # sweep along the third objective, accumulating 2D slabs
    pts.sort(key=lambda p: p[2])
    stairs = []
    total = 0.0
    prev_z = None
    i = 0
    while i < len(pts):
        z = pts[i][2]
        if prev_z is not None and stairs:
            total += _staircase_area(stairs, ref[:2]) * (z - prev_z)
        while i < len(pts) and pts[i][2] == z:
            _staircase_insert(stairs, pts[i][:2])
            i += 1
        prev_z = z
    total += _staircase_area(stairs, ref[:2]) * (ref[2] - prev_z)
    return total
