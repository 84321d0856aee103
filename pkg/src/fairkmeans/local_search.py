"""Constrained local search for individually fair k-means.

The solver seeds anchors, fills up to k centers with random points, then runs
a fixed number of single-swap steps.  Each step samples a candidate point
with probability proportional to its squared distance to the current centers,
evaluates swapping it against every center that can be removed without
emptying an anchor zone, and applies the cheapest swap when it strictly
reduces the cost.

Swap evaluation is incremental.  With ``dp(x) = dist(x, p)^2`` precomputed in
one pass, the cost of ``S - {q} + {p}`` is::

    sum_x min(d1(x)^2, dp(x))
      + sum_{x: nearest(x)=q} (min(d2(x)^2, dp(x)) - min(d1(x)^2, dp(x)))

because points not assigned to q keep their center or defect to p, while
points assigned to q fall back to their second-nearest center or to p.  The
per-q corrections come from one bincount over the nearest-center labels, so a
full evaluation costs O(nd) for the distance pass plus O(n + k) bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._dist import sq_dist_matrix, sq_dists
from .anchors import AnchorSet, CoverageTable, build_coverage, seed
from .dataset import Dataset, RadiusBounds, aspect_ratio
from .errors import InfeasibleInstanceError
from .metrics import bound_ratio

_RADIUS_SLACK = 1 + 1e-9  # float headroom on the 2*gamma postcondition


@dataclass
class LsConfig:
    """Knobs for :func:`run`.

    ``iterations`` is the number of local-search steps.  With
    ``use_theoretical_iterations`` the count is derived from the instance
    instead, ``ceil(k * ln(n * aspect_ratio))``; computing the aspect ratio
    is quadratic in n, so reserve that flag for small inputs.
    """

    k: int
    gamma: float = 3.0
    iterations: int = 500
    seed: int = 0
    restarts: int = 1
    use_theoretical_iterations: bool = False
    debug_checks: bool = False

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if not self.gamma > 2:
            raise ValueError("gamma must exceed 2")


@dataclass
class RunTrace:
    """Per-iteration cost (after the step) and whether the swap was taken."""

    initial_cost: float
    costs: np.ndarray
    accepted: np.ndarray

    @property
    def accepted_count(self) -> int:
        return int(self.accepted.sum())

    @property
    def final_cost(self) -> float:
        return float(self.costs[-1]) if self.costs.size else self.initial_cost


@dataclass
class SwapCandidate:
    """Best admissible swap for a sampled point: remove ``old_center``
    (slot ``slot``), insert ``point``, reaching ``new_cost``."""

    point: int
    slot: int
    old_center: int
    new_cost: float


@dataclass(eq=False)
class Solution:
    """A k-center solution with the caches the search loop maintains.

    ``center_ids`` are dataset point ids, or ``None`` once a refinement stage
    has moved centers off the data points; ``center_pos`` is always valid.
    ``assign``/``assign2`` hold the slot of each point's nearest and
    second-nearest center and ``d1sq``/``d2sq`` the matching squared
    distances (``assign2 = -1`` and ``d2sq = inf`` when k = 1).
    ``total_cost`` is the k-means cost, kept consistent with a from-scratch
    recomputation to 1e-9 relative.

    Solutions are single-owner: only the loop that created one mutates it.
    """

    ds: Dataset
    anchor_set: AnchorSet
    center_ids: np.ndarray | None
    center_pos: np.ndarray
    assign: np.ndarray
    assign2: np.ndarray
    d1sq: np.ndarray
    d2sq: np.ndarray
    coverage: CoverageTable
    total_cost: float

    @property
    def k(self) -> int:
        return self.center_pos.shape[0]

    @property
    def d1(self) -> np.ndarray:
        return np.sqrt(self.d1sq)

    @property
    def d2(self) -> np.ndarray:
        return np.sqrt(self.d2sq)

    @property
    def nearest_center(self) -> np.ndarray | None:
        """Per-point id of the nearest center (None after refinement)."""
        if self.center_ids is None:
            return None
        return self.center_ids[self.assign]

    def copy(self) -> "Solution":
        return Solution(
            ds=self.ds,
            anchor_set=self.anchor_set,
            center_ids=None if self.center_ids is None else self.center_ids.copy(),
            center_pos=self.center_pos.copy(),
            assign=self.assign.copy(),
            assign2=self.assign2.copy(),
            d1sq=self.d1sq.copy(),
            d2sq=self.d2sq.copy(),
            coverage=self.coverage.copy(),
            total_cost=self.total_cost,
        )

    @classmethod
    def build(
        cls,
        ds: Dataset,
        anchor_set: AnchorSet,
        center_ids: np.ndarray | None = None,
        center_pos: np.ndarray | None = None,
    ) -> "Solution":
        """From-scratch construction of every cache; the oracle the
        incremental updates are checked against."""
        if center_pos is None:
            if center_ids is None:
                raise ValueError("need center ids or positions")
            center_ids = np.asarray(center_ids, dtype=np.int64)
            center_pos = ds.points[center_ids].copy()
        else:
            center_pos = np.array(center_pos, dtype=np.float64)
        assign, assign2, d1sq, d2sq = _build_state(ds.points, center_pos)
        return cls(
            ds=ds,
            anchor_set=anchor_set,
            center_ids=center_ids,
            center_pos=center_pos,
            assign=assign,
            assign2=assign2,
            d1sq=d1sq,
            d2sq=d2sq,
            coverage=build_coverage(anchor_set, center_pos),
            total_cost=float(d1sq.sum()),
        )


def _build_state(X: np.ndarray, centers: np.ndarray):
    """Nearest/second-nearest slots and squared distances for all points."""
    n = X.shape[0]
    k = centers.shape[0]
    M = sq_dist_matrix(X, centers)
    if k == 1:
        assign = np.zeros(n, dtype=np.int64)
        assign2 = np.full(n, -1, dtype=np.int64)
        return assign, assign2, M[:, 0].copy(), np.full(n, np.inf)
    order = np.argsort(M, axis=1, kind="stable")[:, :2]
    assign = order[:, 0].copy()
    assign2 = order[:, 1].copy()
    rows = np.arange(n)
    return assign, assign2, M[rows, assign], M[rows, assign2]


def init_solution(ds: Dataset, anchor_set: AnchorSet, k: int, seed) -> Solution:
    """Anchors plus uniform random distinct non-anchor points, caches built.

    ``seed`` may be an int or a numpy Generator.  Raises
    InfeasibleInstanceError when there are more anchors than k.
    """
    m = len(anchor_set)
    if m > k:
        raise InfeasibleInstanceError(m, k)
    if ds.n < k:
        raise ValueError(f"k={k} exceeds the number of points {ds.n}")
    rng = np.random.default_rng(seed)
    ids = anchor_set.anchors
    if m < k:
        pool = np.setdiff1d(np.arange(ds.n), ids)
        fill = rng.choice(pool, size=k - m, replace=False)
        ids = np.concatenate([ids, np.sort(fill)])
    sol = Solution.build(ds, anchor_set, center_ids=ids.astype(np.int64))
    if m and not np.all(sol.coverage.counts >= 1):
        raise AssertionError("anchor zones uncovered right after initialization")
    return sol


def d2_sample(sol: Solution, rng: np.random.Generator) -> int:
    """Draw a point id with probability d1(p)^2 / sum_q d1(q)^2."""
    cum = np.cumsum(sol.d1sq)
    total = cum[-1]
    if not total > 0:
        raise ValueError("total cost is zero; every point already sits on a center")
    u = rng.random() * total
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, sol.d1sq.shape[0] - 1)


def swap_costs(
    sol: Solution,
    p: int,
    anchor_set: AnchorSet | None = None,
    _dpsq: np.ndarray | None = None,
    _covers_p: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Cost of swapping point p in for each center, and which swaps keep
    every anchor zone covered.

    Returns ``(new_costs, admissible)`` indexed by center slot.
    """
    anchor_set = sol.anchor_set if anchor_set is None else anchor_set
    X = sol.ds.points
    dpsq = sq_dists(X, X[p]) if _dpsq is None else _dpsq
    covers_p = anchor_set.covers_position(X[p]) if _covers_p is None else _covers_p

    a = np.minimum(sol.d1sq, dpsq)
    b = np.minimum(sol.d2sq, dpsq)
    base = float(a.sum())
    corr = np.bincount(sol.assign, weights=b - a, minlength=sol.k)
    new_costs = base + corr

    # Removing q only breaks a zone that q alone covers and p does not enter.
    counts = sol.coverage.counts
    critical = (counts == 1) & ~covers_p
    admissible = ~(sol.coverage.covers & critical).any(axis=1)
    return new_costs, admissible


def evaluate_swaps(
    sol: Solution, p: int, anchor_set: AnchorSet | None = None
) -> SwapCandidate | None:
    """Best admissible swap for candidate point p, or None when every swap
    would empty an anchor zone.  Ties go to the lowest center id."""
    anchor_set = sol.anchor_set if anchor_set is None else anchor_set
    new_costs, admissible = swap_costs(sol, p, anchor_set)
    if not admissible.any():
        return None
    best = new_costs[admissible].min()
    tied = np.flatnonzero(admissible & (new_costs == best))
    if sol.center_ids is not None:
        slot = int(tied[np.argmin(sol.center_ids[tied])])
    else:
        slot = int(tied[0])
    old = int(sol.center_ids[slot]) if sol.center_ids is not None else -1
    return SwapCandidate(point=int(p), slot=slot, old_center=old, new_cost=float(best))


def _apply_swap(sol: Solution, cand: SwapCandidate, dpsq: np.ndarray, covers_p: np.ndarray) -> None:
    """Install the swap and restore every cache.

    Points whose nearest or second-nearest center was the removed one get a
    full k-scan; everyone else only needs a comparison against the new
    center's distances.
    """
    X = sol.ds.points
    j = cand.slot
    if sol.center_ids is not None:
        sol.center_ids[j] = cand.point
    sol.center_pos[j] = X[cand.point]

    affected = (sol.assign == j) | (sol.assign2 == j)
    rows = np.flatnonzero(affected)
    if rows.size:
        a1, a2, d1, d2 = _build_state(X[rows], sol.center_pos)
        sol.assign[rows] = a1
        sol.assign2[rows] = a2
        sol.d1sq[rows] = d1
        sol.d2sq[rows] = d2

    other = np.flatnonzero(~affected)
    if other.size:
        dp_o = dpsq[other]
        closer = dp_o < sol.d1sq[other]
        idx = other[closer]
        sol.d2sq[idx] = sol.d1sq[idx]
        sol.assign2[idx] = sol.assign[idx]
        sol.d1sq[idx] = dpsq[idx]
        sol.assign[idx] = j
        mid = other[~closer & (dp_o < sol.d2sq[other])]
        sol.d2sq[mid] = dpsq[mid]
        sol.assign2[mid] = j

    sol.coverage.covers[j, :] = covers_p
    sol.total_cost = cand.new_cost


def ls_step(
    sol: Solution,
    anchor_set: AnchorSet | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[Solution, bool]:
    """One sampled-swap step; mutates ``sol`` in place.

    Returns the solution and whether a swap was applied.  A zero-cost
    solution short-circuits (nothing left to sample), and a sampled point
    that already is a center can only reproduce the current solution, so it
    is rejected without evaluation.
    """
    anchor_set = sol.anchor_set if anchor_set is None else anchor_set
    if rng is None:
        rng = np.random.default_rng()
    if not sol.total_cost > 0:
        return sol, False
    p = d2_sample(sol, rng)
    if sol.center_ids is not None and p in sol.center_ids:
        return sol, False
    X = sol.ds.points
    dpsq = sq_dists(X, X[p])
    covers_p = anchor_set.covers_position(X[p])
    new_costs, admissible = swap_costs(sol, p, anchor_set, _dpsq=dpsq, _covers_p=covers_p)
    if not admissible.any():
        return sol, False
    best = new_costs[admissible].min()
    if not best < sol.total_cost:
        return sol, False
    tied = np.flatnonzero(admissible & (new_costs == best))
    if sol.center_ids is not None:
        slot = int(tied[np.argmin(sol.center_ids[tied])])
        old = int(sol.center_ids[slot])
    else:
        slot, old = int(tied[0]), -1
    cand = SwapCandidate(point=int(p), slot=slot, old_center=old, new_cost=float(best))
    _apply_swap(sol, cand, dpsq, covers_p)
    return sol, True


def check_solution(sol: Solution, delta: RadiusBounds | None = None) -> None:
    """Debug oracle: caches must match a from-scratch rebuild.

    Verifies distances, coverage, cost coherence at 1e-9 relative, and (when
    radii are supplied) the 2*gamma service bound.
    """
    fresh = Solution.build(
        sol.ds, sol.anchor_set, center_ids=None, center_pos=sol.center_pos
    )
    if not np.array_equal(fresh.d1sq, sol.d1sq):
        raise AssertionError("d1 cache out of sync with the center set")
    if not np.array_equal(fresh.d2sq, sol.d2sq):
        raise AssertionError("d2 cache out of sync with the center set")
    if not np.array_equal(fresh.coverage.covers, sol.coverage.covers):
        raise AssertionError("coverage table out of sync with the center set")
    if len(sol.anchor_set) and not np.all(sol.coverage.counts >= 1):
        raise AssertionError("an anchor zone lost all its centers")
    exact = math.fsum(sol.d1sq)
    if abs(sol.total_cost - exact) > 1e-9 * max(1.0, abs(exact)):
        raise AssertionError("total cost drifted from the recomputed value")
    if delta is not None:
        ratio, worst = bound_ratio(sol.ds, delta, sol.center_pos)
        if ratio > 2 * sol.anchor_set.gamma * _RADIUS_SLACK:
            raise AssertionError(
                f"point {worst} served at {ratio:.3f}x its radius, above "
                f"{2 * sol.anchor_set.gamma}"
            )


def run(ds: Dataset, delta: RadiusBounds, cfg: LsConfig) -> tuple[Solution, RunTrace]:
    """Full pipeline: seeding, random fill, ``iterations`` swap steps.

    Deterministic per seed.  Raises InfeasibleInstanceError (with the anchor
    count) when seeding needs more than k anchors.  Every returned solution
    serves each point within ``2 * gamma * delta(p)``; this is re-checked at
    return and cannot be disabled.

    With ``restarts > 1`` the whole init-plus-search phase repeats on derived
    seed streams and the cheapest final solution wins.
    """
    cfg.validate()
    if cfg.k > ds.n:
        raise ValueError(f"k={cfg.k} exceeds the number of points {ds.n}")
    anchor_set = seed(ds, delta, cfg.gamma)
    if len(anchor_set) > cfg.k:
        raise InfeasibleInstanceError(len(anchor_set), cfg.k)

    iterations = cfg.iterations
    if cfg.use_theoretical_iterations:
        spread = aspect_ratio(ds).value
        iterations = max(1, math.ceil(cfg.k * math.log(ds.n * spread)))

    best: tuple[Solution, RunTrace] | None = None
    for child in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
        rng = np.random.default_rng(child)
        sol = init_solution(ds, anchor_set, cfg.k, rng)
        costs = np.empty(iterations)
        accepted = np.zeros(iterations, dtype=bool)
        initial = sol.total_cost
        for i in range(iterations):
            sol, took = ls_step(sol, anchor_set, rng)
            costs[i] = sol.total_cost
            accepted[i] = took
            if cfg.debug_checks and took:
                check_solution(sol, delta)
        trace = RunTrace(initial_cost=initial, costs=costs, accepted=accepted)
        if best is None or sol.total_cost < best[0].total_cost:
            best = (sol, trace)

    sol, trace = best
    ratio, worst = bound_ratio(ds, delta, sol.center_pos)
    if ratio > 2 * cfg.gamma * _RADIUS_SLACK:
        raise AssertionError(
            f"radius guarantee violated: point {worst} at {ratio:.3f}x its bound"
        )
    return sol, trace
