"""Access point placement solvers.

Three planners share one precomputed model of the venue:

* ``greedy_place`` repeats a weighted set-cover step: among every remaining
  (candidate, steering) pair it picks the one whose beam, allowed to serve
  at most T users, adds the most newly satisfied presence mass, breaking
  ties by the connectivity mass it builds toward not-yet-satisfied users
  and then by the lowest candidate and steering indices.
* ``exact_place`` enumerates candidate subsets in increasing size with all
  steering combinations and searches assignments depth-first, so the first
  feasible size is the minimum number of access points. Intended for small
  instances only and guarded by hard size limits.
* ``uniform_place`` is the coverage-oblivious baseline: spread n mounts by
  farthest-point selection and aim every beam straight down.

Satisfaction of a user is always the scenario-partition probability of its
assigned set meeting the per-user target; all solvers and the standalone
``evaluate_coverage`` recompute it through the same code path, so a
deployment round-trips bit-identically through revalidation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .channel import (
    ChannelParams,
    LinkClass,
    LinkProfile,
    _active_half_width,
    linear_to_db,
    main_lobe_gain,
)
from .angles import AngularInterval
from .errors import (
    DeploymentValidationError,
    GeometryError,
    InfeasibleError,
    SizeLimitError,
)
from .scenarios import (
    ScenarioPartition,
    build_scenarios,
    connectivity_probability,
)
from .venue import Venue, occlusion_matrix

DEPLOYMENT_FORMAT_VERSION = 1

BetaLike = Union[float, Sequence[float]]


@dataclass(frozen=True)
class PlacedAp:
    """One selected mount with its steering and served users."""

    candidate: int
    theta: float
    phi: float
    assigned: Tuple[int, ...]


@dataclass
class Deployment:
    selected: List[PlacedAp]
    per_gp_prob: List[float]
    satisfied: List[bool]
    coverage: float
    normalized_coverage: float

    def assignment_pairs(self) -> List[Tuple[int, int]]:
        return [
            (ap.candidate, m) for ap in self.selected for m in ap.assigned
        ]

    def to_dict(self) -> dict:
        return {
            "format_version": DEPLOYMENT_FORMAT_VERSION,
            "selected": [
                {
                    "loc": ap.candidate,
                    "theta": ap.theta,
                    "phi": ap.phi,
                    "assigned": list(ap.assigned),
                }
                for ap in self.selected
            ],
            "coverage": self.coverage,
            "normalized_coverage": self.normalized_coverage,
            "per_gp": [
                {"id": i, "prob": p, "z": bool(z)}
                for i, (p, z) in enumerate(
                    zip(self.per_gp_prob, self.satisfied)
                )
            ],
        }

    @staticmethod
    def from_dict(data: dict) -> "Deployment":
        selected = [
            PlacedAp(
                candidate=int(s["loc"]),
                theta=float(s["theta"]),
                phi=float(s["phi"]),
                assigned=tuple(int(m) for m in s["assigned"]),
            )
            for s in data["selected"]
        ]
        per_gp = sorted(data["per_gp"], key=lambda r: int(r["id"]))
        return Deployment(
            selected=selected,
            per_gp_prob=[float(r["prob"]) for r in per_gp],
            satisfied=[bool(r["z"]) for r in per_gp],
            coverage=float(data["coverage"]),
            normalized_coverage=float(data["normalized_coverage"]),
        )


@dataclass(frozen=True)
class GpCoverage:
    id: int
    prob: float
    z: bool


@dataclass
class CoverageReport:
    per_gp: List[GpCoverage]
    coverage: float
    normalized_coverage: float


@dataclass(frozen=True)
class CoverSet:
    """The beam committed by one greedy iteration."""

    candidate: int
    theta: float
    phi: float
    members: Tuple[int, ...]
    weight: float


@dataclass(frozen=True)
class GreedyIteration:
    cover: CoverSet
    newly_satisfied: Tuple[int, ...]
    marginal_weight: float
    running_coverage: float


@dataclass
class GreedyTrace:
    iterations: List[GreedyIteration]
    tuple_evaluations: int = 0

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "iterations": [
                {
                    "candidate": it.cover.candidate,
                    "theta": it.cover.theta,
                    "phi": it.cover.phi,
                    "members": list(it.cover.members),
                    "newly_satisfied": list(it.newly_satisfied),
                    "marginal_weight": it.marginal_weight,
                    "running_coverage": it.running_coverage,
                }
                for it in self.iterations
            ],
            "tuple_evaluations": self.tuple_evaluations,
        }


@dataclass(frozen=True)
class IterationChoice:
    """Best subproblem answer for one greedy iteration."""

    candidate: int
    theta_idx: int
    phi_idx: int
    members: Tuple[int, ...]
    new_weight: float
    gain_weight: float


def _normalize_betas(betas: BetaLike, n: int) -> np.ndarray:
    if isinstance(betas, (int, float)):
        arr = np.full(n, float(betas))
    else:
        arr = np.asarray([float(b) for b in betas])
        if arr.shape != (n,):
            raise ValueError(
                f"expected {n} per-user targets, got shape {arr.shape}"
            )
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("per-user targets must lie in [0, 1]")
    return arr


class PlanningModel:
    """Precomputed geometry, link classes, partitions and beam footprints.

    Built once per (venue, params, betas) and shared by every solver and by
    ``evaluate_coverage``, which keeps all satisfaction decisions on a
    single code path.
    """

    def __init__(
        self, venue: Venue, params: ChannelParams, betas: BetaLike
    ) -> None:
        self.venue = venue
        self.params = params
        self.M = venue.n_grid
        self.L = venue.n_candidates
        self.betas = _normalize_betas(betas, self.M)
        self.q = np.array([gp.presence_prob for gp in venue.grid_positions])
        self.total_mass = float(self.q.sum())

        gp_pos = np.array([gp.position for gp in venue.grid_positions])
        ap_pos = np.array([c.position for c in venue.candidates])
        down = gp_pos[:, None, :] - ap_pos[None, :, :]
        self.dist = np.sqrt((down ** 2).sum(axis=2))
        if np.any(self.dist == 0.0):
            raise GeometryError("a device coincides with a candidate mount")
        horiz = np.hypot(down[:, :, 0], down[:, :, 1])
        self.vertical = horiz == 0.0
        self.phi_tx = np.where(
            self.vertical, 0.0, np.arctan2(down[:, :, 1], down[:, :, 0])
        )
        psi_tx = np.arccos(np.clip(down[:, :, 2] / self.dist, -1.0, 1.0))
        self.nadir_tx = math.pi - psi_tx
        self.phi_rx = np.where(
            self.vertical, 0.0, np.arctan2(-down[:, :, 1], -down[:, :, 0])
        )
        self.psi_rx = np.arccos(np.clip(-down[:, :, 2] / self.dist, -1.0, 1.0))
        self.occluded = occlusion_matrix(venue)

        tx_main_db = linear_to_db(main_lobe_gain(params.ap_beamwidth))
        self.reach = np.zeros((self.M, self.L))
        for m in range(self.M):
            tilt = venue.grid_positions[m].elevation
            for l in range(self.L):
                self.reach[m, l] = _active_half_width(
                    params,
                    float(self.dist[m, l]),
                    float(self.psi_rx[m, l]),
                    bool(self.vertical[m, l]),
                    bool(self.occluded[m, l]),
                    tilt,
                    tx_main_db,
                )
        self.usable = self.reach > 0.0

        self.partitions: List[ScenarioPartition] = [
            build_scenarios(venue, m, self._profiles_for(m))
            for m in range(self.M)
        ]

        self.thetas = params.elevation_grid
        self.phis = params.azimuth_grid
        self.n_phi = len(self.phis)
        self.n_tuples = len(self.thetas) * self.n_phi
        # gp ids sorted by descending presence mass, ties by id
        self.gp_order = np.lexsort((np.arange(self.M), -self.q))
        self._build_footprints()

    # -- link profiles -------------------------------------------------

    def profile(self, m: int, l: int) -> LinkProfile:
        reach = self.reach[m, l]
        if reach <= 0.0:
            cls, iv = LinkClass.NEVER_ON, AngularInterval.empty()
        elif reach >= math.pi:
            cls, iv = LinkClass.ALWAYS_ON, AngularInterval.full()
        else:
            cls = LinkClass.ORIENTATION_DEPENDENT
            iv = AngularInterval.from_center(
                float(self.phi_rx[m, l]), float(reach)
            )
        return LinkProfile(
            gp=m,
            ap=l,
            distance=float(self.dist[m, l]),
            link_class=cls,
            effective_interval=iv,
            usable=cls is not LinkClass.NEVER_ON,
        )

    def _profiles_for(self, m: int) -> List[LinkProfile]:
        return [self.profile(m, l) for l in range(self.L)]

    # -- beam footprints -----------------------------------------------

    def _footprint_mask(
        self, l: int, theta: float, phi: float
    ) -> np.ndarray:
        half = self.params.ap_beamwidth / 2.0
        el_ok = np.abs(theta - self.nadir_tx[:, l]) <= half
        d = phi - self.phi_tx[:, l]
        az = np.abs(np.arctan2(np.sin(d), np.cos(d)))
        az_ok = self.vertical[:, l] | (az <= half)
        return self.usable[:, l] & el_ok & az_ok

    def footprint(self, l: int, theta: float, phi: float) -> np.ndarray:
        """Users inside a beam, ordered by descending presence mass."""
        ok = self._footprint_mask(l, theta, phi)
        return self.gp_order[ok[self.gp_order]]

    def _build_footprints(self) -> None:
        self.foot_ok = np.zeros((self.L, self.n_tuples, self.M), dtype=bool)
        self.foot_members: List[List[np.ndarray]] = []
        for l in range(self.L):
            per_tuple = []
            for ti in range(self.n_tuples):
                theta = self.thetas[ti // self.n_phi]
                phi = self.phis[ti % self.n_phi]
                ok = self._footprint_mask(l, theta, phi)
                self.foot_ok[l, ti] = ok
                per_tuple.append(self.gp_order[ok[self.gp_order]])
            self.foot_members.append(per_tuple)

    def steering_angles(self, ti: int) -> Tuple[float, float]:
        return self.thetas[ti // self.n_phi], self.phis[ti % self.n_phi]

    # -- satisfaction --------------------------------------------------

    def conn(self, m: int, mask: int) -> float:
        return connectivity_probability(self.partitions[m], mask)

    def coverage_of(self, z: np.ndarray) -> float:
        return float(np.dot(self.q, z.astype(float)))

    def normalized(self, coverage: float) -> float:
        if self.total_mass <= 0.0:
            return 1.0
        return coverage / self.total_mass

    def finalize(self, selected: Sequence[PlacedAp]) -> Deployment:
        masks = self.assignment_masks(selected)
        probs = np.array(
            [self.conn(m, int(masks[m])) for m in range(self.M)]
        )
        z = probs >= self.betas
        coverage = self.coverage_of(z)
        return Deployment(
            selected=list(selected),
            per_gp_prob=[float(p) for p in probs],
            satisfied=[bool(v) for v in z],
            coverage=coverage,
            normalized_coverage=self.normalized(coverage),
        )

    def assignment_masks(
        self, selected: Sequence[PlacedAp]
    ) -> np.ndarray:
        masks = np.zeros(self.M, dtype=np.int64)
        for ap in selected:
            bit = 1 << ap.candidate
            for m in ap.assigned:
                masks[m] |= bit
        return masks


def build_model(
    venue: Venue, params: ChannelParams, betas: BetaLike
) -> PlanningModel:
    return PlanningModel(venue, params, betas)


# -- evaluation --------------------------------------------------------


def evaluate_coverage(
    venue: Venue,
    params: ChannelParams,
    deployment: Deployment,
    betas: BetaLike,
) -> CoverageReport:
    """Recompute per-user connectivity and coverage from scratch.

    Raises ``DeploymentValidationError`` when the deployment is malformed:
    unknown ids, duplicated candidates, beams over capacity, or users
    assigned outside a beam's footprint or over an unusable link.
    """
    model = PlanningModel(venue, params, betas)
    violations: List[str] = []
    seen: set = set()
    half = params.ap_beamwidth / 2.0
    for ap in deployment.selected:
        l = ap.candidate
        if not (0 <= l < model.L):
            violations.append(f"unknown candidate id {l}")
            continue
        if l in seen:
            violations.append(f"candidate {l} selected more than once")
        seen.add(l)
        if len(ap.assigned) > params.capacity_per_beam:
            violations.append(
                f"candidate {l} serves {len(ap.assigned)} users, capacity "
                f"is {params.capacity_per_beam}"
            )
        if len(set(ap.assigned)) != len(ap.assigned):
            violations.append(f"candidate {l} has duplicate assignments")
        for m in ap.assigned:
            if not (0 <= m < model.M):
                violations.append(f"candidate {l}: unknown user id {m}")
                continue
            if not model.usable[m, l]:
                violations.append(
                    f"user {m} assigned to candidate {l} whose link can "
                    f"never be active"
                )
            el_off = abs(ap.theta - float(model.nadir_tx[m, l]))
            d = ap.phi - float(model.phi_tx[m, l])
            az_off = abs(math.atan2(math.sin(d), math.cos(d)))
            if el_off > half or (
                not model.vertical[m, l] and az_off > half
            ):
                violations.append(
                    f"user {m} lies outside the beam of candidate {l} "
                    f"(azimuth offset {az_off:.3f}, elevation offset "
                    f"{el_off:.3f}, half-width {half:.3f})"
                )
    if violations:
        raise DeploymentValidationError(
            "deployment failed validation", violations
        )
    masks = model.assignment_masks(deployment.selected)
    probs = [model.conn(m, int(masks[m])) for m in range(model.M)]
    z = np.array(probs) >= model.betas
    coverage = model.coverage_of(z)
    return CoverageReport(
        per_gp=[
            GpCoverage(id=m, prob=float(probs[m]), z=bool(z[m]))
            for m in range(model.M)
        ],
        coverage=coverage,
        normalized_coverage=model.normalized(coverage),
    )


# -- greedy ------------------------------------------------------------


@dataclass
class GreedyState:
    """Mutable per-user assignment state threaded through iterations."""

    masks: np.ndarray
    conn: np.ndarray
    satisfied: np.ndarray
    coverage: float

    @staticmethod
    def initial(model: PlanningModel) -> "GreedyState":
        conn = np.zeros(model.M)
        satisfied = conn >= model.betas
        return GreedyState(
            masks=np.zeros(model.M, dtype=np.int64),
            conn=conn,
            satisfied=satisfied,
            coverage=model.coverage_of(satisfied),
        )


def _iteration_tables(
    model: PlanningModel, state: GreedyState, pool: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray]:
    """Per (user, pool candidate): connectivity gain and predicted
    satisfaction if that single candidate were added."""
    P = len(pool)
    bits = np.array([1 << l for l in pool], dtype=np.int64)
    dp = np.zeros((model.M, P))
    pred_sat = np.zeros((model.M, P), dtype=bool)
    for m in np.flatnonzero(~state.satisfied):
        part = model.partitions[m]
        masks = part.cell_masks
        cur = int(state.masks[m])
        uncovered = (masks & cur) == 0
        hit = (masks[:, None] & bits[None, :]) != 0
        gain = part.cell_probs @ (hit & uncovered[:, None])
        dp[m] = gain
        pred = state.conn[m] + gain
        pred = np.where((bits & part.always_on) != 0, 1.0, pred)
        pred_sat[m] = pred >= model.betas[m]
    return dp, pred_sat


def _evaluate_tuple(
    model: PlanningModel,
    l: int,
    ti: int,
    dp_col: np.ndarray,
    pred_col: np.ndarray,
    satisfied: np.ndarray,
    capacity: int,
) -> Optional[Tuple[float, float, np.ndarray]]:
    mem = model.foot_members[l][ti]
    if mem.size == 0:
        return None
    sat = satisfied[mem]
    wins = pred_col[mem] & ~sat
    winners = mem[wins][:capacity]
    primary = float(model.q[winners].sum())
    room = capacity - winners.size
    secondary = 0.0
    fillers = winners[:0]
    if room > 0:
        rest = mem[~wins & ~sat]
        gains = dp_col[rest] * model.q[rest]
        pos = gains > 0.0
        rest, gains = rest[pos], gains[pos]
        if rest.size:
            take = np.lexsort((rest, -gains))[:room]
            fillers = rest[take]
            secondary = float(gains[take].sum())
    members = np.concatenate([winners, fillers])
    if members.size == 0:
        return None
    return primary, secondary, members


def _scan_tuples(
    model: PlanningModel,
    items: Sequence[Tuple[int, int, int]],
    dp: np.ndarray,
    pred_sat: np.ndarray,
    satisfied: np.ndarray,
    capacity: int,
) -> Optional[Tuple[float, float, int, int, np.ndarray]]:
    best = None
    for j, l, ti in items:
        r = _evaluate_tuple(
            model, l, ti, dp[:, j], pred_sat[:, j], satisfied, capacity
        )
        if r is None:
            continue
        primary, secondary, members = r
        if (
            best is None
            or (primary, secondary) > (best[0], best[1])
            or (
                (primary, secondary) == (best[0], best[1])
                and (l, ti) < (best[2], best[3])
            )
        ):
            best = (primary, secondary, l, ti, members)
    return best


def greedy_iteration_best(
    model: PlanningModel,
    pool: Sequence[int],
    state: GreedyState,
    parallel: bool = False,
    max_workers: Optional[int] = None,
) -> Optional[IterationChoice]:
    """Solve one greedy subproblem over the remaining candidate pool.

    Evaluates every (candidate, steering) pair; each pair serves up to the
    beam capacity, preferring users it newly satisfies (by presence mass)
    and filling leftover capacity with the largest mass-weighted
    connectivity gains. Returns None when nothing adds value, which a
    caller must treat as a dead end. The winner is unique: value ties fall
    back to the lowest (candidate, elevation index, azimuth index), and the
    parallel path reduces per-candidate results with the same ordering, so
    serial and parallel runs agree bit-exactly.
    """
    dp, pred_sat = _iteration_tables(model, state, pool)
    capacity = model.params.capacity_per_beam
    items = [
        (j, l, ti)
        for j, l in enumerate(pool)
        for ti in range(model.n_tuples)
    ]
    if not parallel or len(pool) <= 1:
        best = _scan_tuples(
            model, items, dp, pred_sat, state.satisfied, capacity
        )
    else:
        per_candidate = [
            items[j * model.n_tuples : (j + 1) * model.n_tuples]
            for j in range(len(pool))
        ]
        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            results = list(
                ex.map(
                    lambda chunk: _scan_tuples(
                        model, chunk, dp, pred_sat, state.satisfied,
                        capacity,
                    ),
                    per_candidate,
                )
            )
        best = None
        for r in results:
            if r is None:
                continue
            if (
                best is None
                or (r[0], r[1]) > (best[0], best[1])
                or (
                    (r[0], r[1]) == (best[0], best[1])
                    and (r[2], r[3]) < (best[2], best[3])
                )
            ):
                best = r
    if best is None:
        return None
    primary, secondary, l, ti, members = best
    return IterationChoice(
        candidate=l,
        theta_idx=ti // model.n_phi,
        phi_idx=ti % model.n_phi,
        members=tuple(int(m) for m in members),
        new_weight=primary,
        gain_weight=secondary,
    )


def greedy_place(
    venue: Venue,
    params: ChannelParams,
    alpha: float,
    betas: BetaLike,
    parallel: bool = False,
    max_workers: Optional[int] = None,
) -> Tuple[Deployment, GreedyTrace]:
    """Greedy weighted set-cover placement.

    Adds one (candidate, steering) beam per iteration until the normalized
    covered presence mass reaches ``alpha``. Users keep earlier assignments
    when later beams also serve them; serving a user from several access
    points is exactly how high per-user targets get met. Raises
    ``InfeasibleError`` carrying the best partial deployment when the pool
    runs out or no remaining beam adds anything.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError("alpha must lie in [0, 1]")
    model = PlanningModel(venue, params, betas)
    state = GreedyState.initial(model)
    pool = list(range(model.L))
    selected: List[PlacedAp] = []
    iterations: List[GreedyIteration] = []
    evaluations = 0

    def bail(reason: str) -> InfeasibleError:
        partial = model.finalize(selected)
        return InfeasibleError(
            f"greedy placement stopped below target coverage ({reason})",
            partial=partial,
            diagnostics={
                "reason": reason,
                "target_alpha": alpha,
                "achieved_normalized": partial.normalized_coverage,
                "selected": len(selected),
                "unsatisfied": int((~state.satisfied).sum()),
            },
        )

    while model.normalized(state.coverage) < alpha:
        if not pool:
            raise bail("pool_exhausted")
        evaluations += len(pool) * model.n_tuples
        choice = greedy_iteration_best(
            model, pool, state, parallel=parallel, max_workers=max_workers
        )
        if choice is None:
            raise bail("stagnated")
        l = choice.candidate
        bit = np.int64(1 << l)
        for m in choice.members:
            state.masks[m] |= bit
            state.conn[m] = model.conn(m, int(state.masks[m]))
        newly = [
            m
            for m in choice.members
            if not state.satisfied[m] and state.conn[m] >= model.betas[m]
        ]
        for m in newly:
            state.satisfied[m] = True
        state.coverage = model.coverage_of(state.satisfied)
        theta = model.thetas[choice.theta_idx]
        phi = model.phis[choice.phi_idx]
        marginal = float(model.q[newly].sum()) if newly else 0.0
        assigned = tuple(sorted(choice.members))
        selected.append(
            PlacedAp(candidate=l, theta=theta, phi=phi, assigned=assigned)
        )
        pool.remove(l)
        iterations.append(
            GreedyIteration(
                cover=CoverSet(
                    candidate=l,
                    theta=theta,
                    phi=phi,
                    members=assigned,
                    weight=marginal,
                ),
                newly_satisfied=tuple(sorted(newly)),
                marginal_weight=marginal,
                running_coverage=float(state.coverage),
            )
        )
    deployment = model.finalize(selected)
    return deployment, GreedyTrace(
        iterations=iterations, tuple_evaluations=evaluations
    )


# -- exact -------------------------------------------------------------


def _minimal_satisfying_masks(
    model: PlanningModel, m: int
) -> List[int]:
    """All inclusion-minimal candidate sets meeting user m's target."""
    beta = model.betas[m]
    if beta <= 0.0:
        return []
    ids = [int(l) for l in np.flatnonzero(model.usable[m])]
    found: List[int] = []
    for size in range(1, len(ids) + 1):
        for combo in combinations(ids, size):
            mask = 0
            for l in combo:
                mask |= 1 << l
            if any(prev & mask == prev for prev in found):
                continue
            if connectivity_probability(model.partitions[m], mask) >= beta:
                found.append(mask)
    return found


def _assignment_search(
    order: Sequence[int],
    choices: Dict[int, List[int]],
    qv: np.ndarray,
    subset: Sequence[int],
    capacity: int,
    base: float,
) -> Tuple[float, Optional[List[int]]]:
    """Depth-first max-coverage assignment for one configuration.

    Walks users in fixed order; each either takes one of its minimal
    satisfying sets (capacity permitting) or stays unassigned. The
    remaining-mass bound prunes branches that cannot beat the incumbent,
    and the first assignment reaching the maximum is kept, which makes the
    result independent of pruning strength.
    """
    n = len(order)
    suffix = np.zeros(n + 1)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] + qv[order[j]]
    pos_of = {l: p for p, l in enumerate(subset)}
    cap = [capacity] * len(subset)
    cur: List[int] = [0] * n
    best_val = -1.0
    best_assign: Optional[List[int]] = None

    def rec(j: int, val: float) -> None:
        nonlocal best_val, best_assign
        if val + suffix[j] <= best_val:
            return
        if j == n:
            best_val = val
            best_assign = cur.copy()
            return
        m = order[j]
        for ms in choices[m]:
            need = [pos_of[l] for l in _bits(ms)]
            if all(cap[p] > 0 for p in need):
                for p in need:
                    cap[p] -= 1
                cur[j] = ms
                rec(j + 1, val + qv[m])
                for p in need:
                    cap[p] += 1
        cur[j] = 0
        rec(j + 1, val)

    rec(0, 0.0)
    return base + best_val if best_val >= 0.0 else -1.0, best_assign


def _bits(mask: int) -> List[int]:
    out = []
    l = 0
    while mask:
        if mask & 1:
            out.append(l)
        mask >>= 1
        l += 1
    return out


def exact_place(
    venue: Venue,
    params: ChannelParams,
    alpha: float,
    betas: BetaLike,
    max_candidates: int = 6,
    max_positions: int = 12,
    parallel: bool = False,
    max_workers: Optional[int] = None,
) -> Deployment:
    """Minimum access point count by exhaustive enumeration.

    Scans subset sizes in increasing order; within the first feasible size
    every configuration is searched and the one with the largest coverage
    wins, ties resolved toward the lexicographically first subset and
    steering tuple. Guarded by hard instance-size limits because the
    configuration space grows as C(L, k) * (steerings)^k.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError("alpha must lie in [0, 1]")
    L, M = venue.n_candidates, venue.n_grid
    if L > max_candidates or M > max_positions:
        raise SizeLimitError(
            f"instance size {L} candidates x {M} users exceeds exact solver "
            f"limits ({max_candidates} x {max_positions}); use the greedy "
            f"solver or raise the limits explicitly",
            report={
                "candidates": L,
                "max_candidates": max_candidates,
                "grid_positions": M,
                "max_positions": max_positions,
            },
        )
    model = PlanningModel(venue, params, betas)
    capacity = params.capacity_per_beam

    free = model.betas <= 0.0
    base = float(model.q[free].sum())
    full_ok = np.array(
        [
            free[m]
            or connectivity_probability(
                model.partitions[m],
                int(
                    np.bitwise_or.reduce(
                        (np.int64(1) << np.flatnonzero(model.usable[m])),
                        initial=np.int64(0),
                    )
                ),
            )
            >= model.betas[m]
            for m in range(M)
        ]
    )
    reachable = model.coverage_of(full_ok)
    if model.normalized(reachable) < alpha:
        raise InfeasibleError(
            "target coverage unreachable even with every candidate active",
            diagnostics={
                "target_alpha": alpha,
                "max_normalized": model.normalized(reachable),
                "unreachable_users": int((~full_ok).sum()),
            },
        )

    choices_all = {m: _minimal_satisfying_masks(model, m) for m in range(M)}
    demanding = [
        int(m)
        for m in model.gp_order
        if not free[m] and choices_all[m]
    ]
    # capacity lower bound on the subset size
    k_min = 0
    if alpha > 0.0:
        acc = base
        n_needed = None
        for i, m in enumerate(demanding):
            if model.normalized(acc) >= alpha:
                n_needed = i
                break
            acc += float(model.q[m])
        if n_needed is None:
            n_needed = len(demanding)
            if model.normalized(acc) < alpha:
                n_needed += 1  # unreachable; defensive, caught above
        k_min = max(0, math.ceil(n_needed / capacity))

    n_t = model.n_tuples

    def scan_subset(
        subset: Tuple[int, ...]
    ) -> Optional[Tuple[float, Tuple, Tuple, List[int], List[int]]]:
        best = None
        for steer in product(range(n_t), repeat=len(subset)):
            allowed = np.zeros(M, dtype=np.int64)
            for pos, l in enumerate(subset):
                allowed[model.foot_ok[l, steer[pos]]] |= np.int64(1 << l)
            order = []
            choices: Dict[int, List[int]] = {}
            potential = base
            for m in demanding:
                opts = [
                    ms for ms in choices_all[m] if ms & ~int(allowed[m]) == 0
                ]
                if opts:
                    order.append(m)
                    choices[m] = opts
                    potential += float(model.q[m])
            if model.normalized(potential) < alpha:
                continue
            val, assign = _assignment_search(
                order, choices, model.q, subset, capacity, base
            )
            if assign is None or model.normalized(val) < alpha:
                continue
            if best is None or val > best[0]:
                best = (val, subset, steer, order, assign)
        return best

    found = None
    for k in range(max(k_min, 0), L + 1):
        subsets = list(combinations(range(L), k))
        if parallel and len(subsets) > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as ex:
                results = list(ex.map(scan_subset, subsets))
        else:
            results = [scan_subset(s) for s in subsets]
        for r in results:
            if r is None:
                continue
            if found is None or r[0] > found[0]:
                found = r
        if found is not None:
            break
    if found is None:
        raise InfeasibleError(
            "no candidate subset reaches the target coverage",
            diagnostics={"target_alpha": alpha, "candidates": L},
        )
    _, subset, steer, order, assign = found
    by_ap: Dict[int, List[int]] = {l: [] for l in subset}
    for j, m in enumerate(order):
        for l in _bits(assign[j]):
            by_ap[l].append(m)
    selected = [
        PlacedAp(
            candidate=l,
            theta=model.thetas[steer[pos] // model.n_phi],
            phi=model.phis[steer[pos] % model.n_phi],
            assigned=tuple(sorted(by_ap[l])),
        )
        for pos, l in enumerate(subset)
    ]
    return model.finalize(selected)


# -- uniform baseline --------------------------------------------------


def uniform_place(
    venue: Venue,
    params: ChannelParams,
    count: int,
    betas: BetaLike,
) -> Deployment:
    """Coverage-oblivious baseline: farthest-point spread, beams straight
    down, users served by presence mass within each footprint."""
    model = PlanningModel(venue, params, betas)
    if not (1 <= count <= model.L):
        raise ValueError(
            f"count must lie in [1, {model.L}], got {count}"
        )
    xy = np.array([c.position[:2] for c in venue.candidates])
    centroid = xy.mean(axis=0)
    d0 = np.hypot(*(xy - centroid).T)
    chosen = [int(np.argmin(d0))]
    while len(chosen) < count:
        dmin = np.full(model.L, np.inf)
        for l in chosen:
            dmin = np.minimum(dmin, np.hypot(*(xy - xy[l]).T))
        dmin[chosen] = -np.inf
        chosen.append(int(np.argmax(dmin)))
    capacity = params.capacity_per_beam
    selected = []
    for l in chosen:
        members = model.footprint(l, 0.0, 0.0)[:capacity]
        selected.append(
            PlacedAp(
                candidate=l,
                theta=0.0,
                phi=0.0,
                assigned=tuple(sorted(int(m) for m in members)),
            )
        )
    return model.finalize(selected)


__all__ = [
    "DEPLOYMENT_FORMAT_VERSION",
    "PlacedAp",
    "Deployment",
    "GpCoverage",
    "CoverageReport",
    "CoverSet",
    "GreedyIteration",
    "GreedyTrace",
    "IterationChoice",
    "GreedyState",
    "PlanningModel",
    "build_model",
    "evaluate_coverage",
    "greedy_iteration_best",
    "greedy_place",
    "exact_place",
    "uniform_place",
]
