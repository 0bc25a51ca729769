"""Recursive (greedy) Loewner fitting.

Starts from one left and one right measurement and repeatedly promotes the
worst-approximated remaining samples into the interpolation sets, rebuilding
the reduced model after every step.  Rebuilding from scratch keeps the code
simple and is cheap at benchmark sizes; incremental pencil updates would be
an optimization, not a behavioural change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InsufficientDataError, PartitionError, SymmetryError
from .loewner import DataPartition, StateSpaceModel, build_pencil, truncate
from .sampling import SampleSet, conjugate_groups

#: Stop once the selection error has failed to halve this many steps in a row
#: (only after the target order is reachable).
STALL_STEPS = 5
STALL_FACTOR = 0.5

#: Singular values below this (relative) bound do not count towards the
#: usable rank of the interim pencils.
RANK_TOL = 1e-13


@dataclass
class GreedyStep:
    step: int
    n_left: int
    n_right: int
    max_error: float
    chosen: tuple[complex, ...]


@dataclass
class GreedyResult:
    model: StateSpaceModel
    history: list[GreedyStep]
    left_points: np.ndarray
    right_points: np.ndarray


def fit_greedy(
    samples: SampleSet,
    order_target: int,
    seed: int = 0,
    relative_errors: bool = False,
) -> GreedyResult:
    """Greedy Loewner fit of the given target order.

    Each step evaluates the current model at all unused samples, moves the
    worst conjugate group to the left set and the second worst to the right
    set (keeping closure), and refits.  Stops when every measurement is used
    or when the selection error stagnates after the target order is reached;
    the returned model is rebuilt at ``order_target`` from the final sets.
    Ties are broken towards the lowest sample index, so the procedure is a
    pure function of (samples, order_target, seed).
    """
    if samples.values is None:
        raise InsufficientDataError("samples carry no values; run sample_oracle first")
    if len(samples) < 2 * order_target:
        raise InsufficientDataError(
            f"{len(samples)} samples cannot support order {order_target}; "
            f"need at least {2 * order_target}"
        )
    pts = samples.points
    vals = samples.values
    try:
        groups = conjugate_groups(pts)
    except SymmetryError as exc:
        raise PartitionError(f"cannot preserve conjugate closure: {exc}") from exc
    n_groups = len(groups)
    if n_groups < 2:
        raise InsufficientDataError("need at least two conjugate groups")
    group_of = np.empty(pts.size, dtype=int)
    for gi, g in enumerate(groups):
        for i in g:
            group_of[i] = gi

    rng = np.random.default_rng(seed)
    first, second = (int(g) for g in rng.choice(n_groups, size=2, replace=False))
    left_groups = [first]
    right_groups = [second]
    unused = [gi for gi in range(n_groups) if gi not in (first, second)]

    history: list[GreedyStep] = []
    best_error = np.inf
    stall = 0
    step = 0
    while unused:
        step += 1
        left_idx = [i for gi in left_groups for i in groups[gi]]
        right_idx = [i for gi in right_groups for i in groups[gi]]
        model, order = _fit_current(pts, vals, left_idx, right_idx, order_target)
        unused_idx = np.array([i for gi in unused for i in groups[gi]])
        pred = model.eval(pts[unused_idx])
        err = np.abs(pred - vals[unused_idx])
        if relative_errors:
            err = err / np.maximum(np.abs(vals[unused_idx]), np.finfo(float).tiny)
        worst_of_group: dict[int, float] = {}
        for local, i in enumerate(unused_idx):
            gi = int(group_of[i])
            worst_of_group[gi] = max(worst_of_group.get(gi, 0.0), float(err[local]))
        ranked = sorted(worst_of_group.items(), key=lambda kv: (-kv[1], kv[0]))
        max_error = ranked[0][1]

        chosen: list[complex] = []
        g_left = ranked[0][0]
        left_groups.append(g_left)
        unused.remove(g_left)
        chosen.append(complex(pts[groups[g_left][0]]))
        if len(ranked) > 1:
            g_right = ranked[1][0]
            right_groups.append(g_right)
            unused.remove(g_right)
            chosen.append(complex(pts[groups[g_right][0]]))
        history.append(
            GreedyStep(
                step=step,
                n_left=len(left_idx),
                n_right=len(right_idx),
                max_error=max_error,
                chosen=tuple(chosen),
            )
        )
        if order >= order_target:
            if max_error > best_error * STALL_FACTOR:
                stall += 1
            else:
                stall = 0
            best_error = min(best_error, max_error)
            if stall >= STALL_STEPS:
                break

    left_idx = [i for gi in left_groups for i in groups[gi]]
    right_idx = [i for gi in right_groups for i in groups[gi]]
    model, _ = _fit_current(pts, vals, left_idx, right_idx, order_target)
    return GreedyResult(
        model=model,
        history=history,
        left_points=pts[left_idx],
        right_points=pts[right_idx],
    )


def _fit_current(pts, vals, left_idx, right_idx, order_target):
    part = DataPartition(mu=pts[left_idx], v=vals[left_idx], lam=pts[right_idx], w=vals[right_idx])
    pencil = build_pencil(part)
    # cap the interim order at the numerical rank so E stays invertible
    sigma = linalg.svd(np.hstack([pencil.L, pencil.Ls])).singular_values
    rank = max(1, int(np.sum(sigma > RANK_TOL * sigma[0])))
    order = min(order_target, rank, len(left_idx), len(right_idx))
    return truncate(pencil, order=order).model, order
