"""Instrumented Lloyd's algorithm and the misclustering functionals.

Each iteration records the centers, the assignments, the permutation-minimal
misclustering rate ``mis_rate``, the cluster-wise rate ``cluster_rate``, the scaled center
error ``center_err`` and the k-means cost.  Iteration 0 reflects the supplied
initial centers; iteration ``s >= 1`` assigns against the previous centers
and then re-estimates centers as cluster means.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._seeds import derive_seed
from .mixtures import LabeledSample, center_separations, recover_centers

EMPTY_CLUSTER_POLICIES = ("keep-previous-center", "reseed-farthest-point")

_EXHAUSTIVE_K = 8


@dataclass(frozen=True)
class LloydConfig:
    """Iteration budget and degenerate-case policies.

    ``max_iters=None`` resolves to ``ceil(4 ln n)`` at run time.  Ties in the
    assignment step always break to the lowest center index.
    """

    max_iters: int | None = None
    tie_break: str = "lowest-index"
    empty_cluster_policy: str = "keep-previous-center"
    early_stop_on_fixed_point: bool = True

    def __post_init__(self):
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tie_break != "lowest-index":
            raise ValueError("only lowest-index tie breaking is supported")
        if self.empty_cluster_policy not in EMPTY_CLUSTER_POLICIES:
            raise ValueError(f"unknown policy {self.empty_cluster_policy!r}")

    def resolve_max_iters(self, n: int) -> int:
        if self.max_iters is not None:
            return self.max_iters
        return max(1, math.ceil(4.0 * math.log(n)))


@dataclass(frozen=True)
class IterationRecord:
    centers: np.ndarray
    assignments: np.ndarray
    mis_rate: float
    cluster_rate: float
    center_err: float | None
    cost: float


@dataclass(frozen=True)
class Trajectory:
    """Per-iteration Lloyd metrics plus the final label alignment.

    ``fixed_point_at`` is the first iteration index whose centers were left
    unchanged by the update step (None if the run never stabilized).
    """

    iterations: list[IterationRecord]
    aligned_permutation: tuple[int, ...]
    fixed_point_at: int | None = None

    @property
    def terminal(self) -> IterationRecord:
        return self.iterations[-1]

    @property
    def iterations_run(self) -> int:
        """Number of update steps actually computed before stabilizing."""
        if self.fixed_point_at is None:
            return len(self.iterations) - 1
        return self.fixed_point_at

    def metric_array(self) -> np.ndarray:
        """(iters, 4) array of mis_rate, cluster_rate, center_err, cost (gamma NaN if absent)."""
        rows = [
            (
                rec.mis_rate,
                rec.cluster_rate,
                math.nan if rec.center_err is None else rec.center_err,
                rec.cost,
            )
            for rec in self.iterations
        ]
        return np.asarray(rows)

    def to_csv(self, path, centers_path=None) -> None:
        """Columns iter, mis_rate, cluster_rate, center_err, cost; centers optionally dumped too."""
        with open(path, "w") as fh:
            fh.write("iter,mis_rate,cluster_rate,center_err,cost\n")
            for s, rec in enumerate(self.iterations):
                gamma = "" if rec.center_err is None else repr(float(rec.center_err))
                fh.write(
                    f"{s},{float(rec.mis_rate)!r},{float(rec.cluster_rate)!r},{gamma},{float(rec.cost)!r}\n"
                )
        if centers_path is not None:
            k, r = self.iterations[0].centers.shape
            with open(centers_path, "w") as fh:
                fh.write("iter,k," + ",".join(f"c_{j + 1}" for j in range(r)) + "\n")
                for s, rec in enumerate(self.iterations):
                    for kk in range(k):
                        coords = ",".join(repr(float(v)) for v in rec.centers[kk])
                        fh.write(f"{s},{kk},{coords}\n")


def assign_step(y: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest-center labels; equidistant points go to the lowest index."""
    if not np.all(np.isfinite(centers)):
        raise ValueError("centers must be finite")
    d2 = ((y[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def update_step(
    y: np.ndarray,
    assignments: np.ndarray,
    k: int,
    policy: str = "keep-previous-center",
    prev_centers: np.ndarray | None = None,
) -> np.ndarray:
    """Cluster means; empty clusters handled per policy.

    ``keep-previous-center`` leaves an empty cluster's center where it was;
    ``reseed-farthest-point`` moves it onto the point currently farthest from
    its assigned center (deterministic, lowest index on ties).
    """
    if policy not in EMPTY_CLUSTER_POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    centers = np.empty((k, y.shape[1]))
    counts = np.bincount(assignments, minlength=k)
    empties = np.flatnonzero(counts == 0)
    if empties.size and prev_centers is None:
        raise ValueError("empty cluster encountered but no previous centers given")
    for kk in range(k):
        if counts[kk] > 0:
            centers[kk] = y[assignments == kk].mean(axis=0)
        else:
            centers[kk] = prev_centers[kk]
    if policy == "reseed-farthest-point" and empties.size:
        dist = np.linalg.norm(y - centers[assignments], axis=1)
        for kk in empties:
            idx = int(dist.argmax())
            centers[kk] = y[idx]
            dist[idx] = -1.0  # each empty cluster reseeds a distinct point
    return centers


def kmeans_cost(y: np.ndarray, centers: np.ndarray, assignments: np.ndarray) -> float:
    """Average squared distance of each point to its assigned center."""
    return float(((y - centers[assignments]) ** 2).sum() / y.shape[0])


def confusion_counts(z_hat: np.ndarray, z: np.ndarray, k: int) -> np.ndarray:
    """counts[l, m] = #{i : z_i == l and z_hat_i == m}."""
    z_hat = np.asarray(z_hat, dtype=int)
    z = np.asarray(z, dtype=int)
    if z_hat.shape != z.shape:
        raise ValueError("label vectors differ in length")
    if min(z.min(), z_hat.min()) < 0 or max(z.max(), z_hat.max()) >= k:
        raise ValueError(f"labels out of range [0, {k})")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (z, z_hat), 1)
    return counts


def misclustering_rate(
    z_hat: np.ndarray, z: np.ndarray, k: int
) -> tuple[float, tuple[int, ...]]:
    """Permutation-minimal disagreement rate and the optimal alignment.

    The returned permutation maps true label ``l`` to estimated label
    ``perm[l]``.  Exhaustive search for k <= 8, optimal assignment on the
    confusion matrix beyond.
    """
    counts = confusion_counts(z_hat, z, k)
    n = counts.sum()
    if k <= _EXHAUSTIVE_K:
        best_perm, best_agree = None, -1
        for perm in itertools.permutations(range(k)):
            agree = sum(counts[l, perm[l]] for l in range(k))
            if agree > best_agree:
                best_agree, best_perm = agree, perm
    else:
        rows, cols = linear_sum_assignment(counts, maximize=True)
        perm_arr = np.empty(k, dtype=int)
        perm_arr[rows] = cols
        best_perm = tuple(int(v) for v in perm_arr)
        best_agree = counts[rows, cols].sum()
    return float((n - best_agree) / n), tuple(best_perm)


def clusterwise_rate(
    z_hat: np.ndarray, z: np.ndarray, k: int, perm: tuple[int, ...]
) -> float:
    """Worst cluster's max of wrongly-received and wrongly-lost fractions.

    Computed after aligning true labels through ``perm``.  An empty estimated
    cluster contributes 0 when it received nothing, 1 otherwise.
    """
    perm = np.asarray(perm, dtype=int)
    counts = confusion_counts(z_hat, perm[np.asarray(z, dtype=int)], k)
    received = counts.sum(axis=0) - np.diag(counts)  # into cluster k, wrong
    lost = counts.sum(axis=1) - np.diag(counts)  # out of cluster k, wrong
    n_hat = counts.sum(axis=0)
    n_true = counts.sum(axis=1)
    worst = 0.0
    for kk in range(k):
        r1 = (received[kk] / n_hat[kk]) if n_hat[kk] > 0 else (0.0 if received[kk] == 0 else 1.0)
        r2 = (lost[kk] / n_true[kk]) if n_true[kk] > 0 else (0.0 if lost[kk] == 0 else 1.0)
        worst = max(worst, r1, r2)
    return float(worst)


def center_error(
    centers_hat: np.ndarray,
    true_centers: np.ndarray,
    delta: float,
    perm: tuple[int, ...],
) -> float:
    """max_k ||mu_hat[perm[k]] - mu[k]|| / delta."""
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    perm = np.asarray(perm, dtype=int)
    errs = np.linalg.norm(centers_hat[perm] - true_centers, axis=1)
    return float(errs.max() / delta)


def cluster_trajectory(
    y: np.ndarray,
    init_centers: np.ndarray,
    labels: np.ndarray,
    true_centers: np.ndarray | None = None,
    config: LloydConfig | None = None,
) -> Trajectory:
    """Run Lloyd's algorithm on ``y`` and score every iteration against truth.

    ``center_err`` is reported only when ``true_centers`` is supplied and the
    true centers are separated (delta > 0).  With early stopping enabled the
    trajectory still spans ``max_iters`` entries; the fixed point is carried
    forward so iteration indexing stays comparable across runs.
    """
    config = config or LloydConfig()
    y = np.asarray(y, dtype=float)
    centers = np.array(init_centers, dtype=float)
    labels = np.asarray(labels, dtype=int)
    k = centers.shape[0]
    if k < 2:
        raise ValueError("need at least two centers")
    n = y.shape[0]
    max_iters = config.resolve_max_iters(n)

    delta = None
    if true_centers is not None:
        delta = center_separations(true_centers)[0]

    def metrics(cur_centers, cur_assign):
        mis_rate, perm = misclustering_rate(cur_assign, labels, k)
        cluster_rate = clusterwise_rate(cur_assign, labels, k, perm)
        if true_centers is not None and delta > 0:
            gamma = center_error(cur_centers, true_centers, delta, perm)
        else:
            gamma = None
        cost = kmeans_cost(y, cur_centers, cur_assign)
        return IterationRecord(cur_centers.copy(), cur_assign.copy(), mis_rate, cluster_rate, gamma, cost), perm

    assignments = assign_step(y, centers)
    record, perm = metrics(centers, assignments)
    iterations = [record]
    fixed_point_at = None
    for s in range(1, max_iters + 1):
        new_assign = assign_step(y, centers)
        prev_centers = centers
        centers = update_step(
            y, new_assign, k, config.empty_cluster_policy, prev_centers=centers
        )
        record, perm = metrics(centers, new_assign)
        iterations.append(record)
        # Unchanged centers across an update step mean every later iteration
        # repeats verbatim; pad the trajectory with the fixed point.
        if np.array_equal(centers, prev_centers):
            if fixed_point_at is None:
                fixed_point_at = s
            if config.early_stop_on_fixed_point:
                iterations.extend([record] * (max_iters - s))
                break
    return Trajectory(
        iterations=iterations, aligned_permutation=perm, fixed_point_at=fixed_point_at
    )


def run_lloyd(
    sample: LabeledSample,
    init_centers: np.ndarray,
    config: LloydConfig | None = None,
) -> Trajectory:
    """Lloyd trajectory on a labeled sample, scored against its true centers."""
    k = np.asarray(init_centers).shape[0]
    true_centers = recover_centers(sample, k)
    return cluster_trajectory(
        sample.observed, init_centers, sample.labels, true_centers, config
    )


def best_kmeans(
    y: np.ndarray, k: int, restarts: int, seed: int, max_iters: int = 100
) -> tuple[np.ndarray, np.ndarray, float, int]:
    """Best-of-``restarts`` k-means (k-means++ starts, lowest final cost).

    Returns (assignments, centers, cost, iterations of the winning run).
    Restart ``r`` derives its seed from ``derive_seed(seed, r)``, keeping the
    result independent of execution order.
    """
    from .seeding import kmeanspp_seed

    y = np.asarray(y, dtype=float)
    best = None
    for r in range(restarts):
        centers, _ = kmeanspp_seed(y, k, derive_seed(seed, r))
        labels = assign_step(y, centers)
        iters = 0
        for _ in range(max_iters):
            centers = update_step(y, labels, k, prev_centers=centers)
            iters += 1
            new_labels = assign_step(y, centers)
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
        cost = kmeans_cost(y, centers, labels)
        if best is None or cost < best[2]:
            best = (labels, centers, cost, iters)
    return best
