"""Initialization schemes: k-means++ seeding and controlled oracle inits.

Also provides the two analytic quantities attached to the seeding guarantee:
the chi-mean constant ``chi_mean`` and the three-term tail bound ``seeding_tail_bound``.
"""

from __future__ import annotations

import math

import numpy as np

from .mixtures import MixtureSpec, center_separations


def kmeanspp_seed(y: np.ndarray, k: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Squared-distance-weighted sequential seeding.

    The first center is uniform over rows; each subsequent center is drawn
    with probability proportional to the minimal squared distance to the
    centers already chosen.  Returns the chosen rows and their indices.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    min_d2 = ((y - y[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        total = min_d2.sum()
        if total <= 0:
            raise ValueError("zero sampling mass: remaining points coincide with chosen seeds")
        chosen.append(int(rng.choice(n, p=min_d2 / total)))
        min_d2 = np.minimum(min_d2, ((y - y[chosen[-1]]) ** 2).sum(axis=1))
    idx = np.asarray(chosen)
    return y[idx].copy(), idx


def seed_separation_event(chosen_indices: np.ndarray, labels: np.ndarray) -> bool:
    """True iff the two seeds come from different ground-truth clusters."""
    chosen_indices = np.asarray(chosen_indices)
    if chosen_indices.size != 2:
        raise ValueError("separation event is defined for two-seed initializations")
    labels = np.asarray(labels)
    return bool(labels[chosen_indices[0]] != labels[chosen_indices[1]])


def chi_mean(r: int) -> float:
    """sqrt(2) * Gamma((r+1)/2) / Gamma(r/2), via log-gamma for stability."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return math.exp(0.5 * math.log(2.0) + math.lgamma((r + 1) / 2.0) - math.lgamma(r / 2.0))


def seeding_tail_bound(
    truncation: float,
    eps_param: float,
    delta: float,
    sigma: float,
    r: int,
    center_norm: float,
) -> float:
    """Three-term tail bound on the seed-to-center distance exceeding (1/2 - eps)Delta.

    ``truncation`` is the tail cutoff level; the harness default is
    ``center_norm/sigma + chi_mean(r) + 1`` (just above the required lower bound).
    """
    if sigma <= 0 or delta <= 0:
        raise ValueError("need sigma > 0 and delta > 0")
    if not 0 < eps_param < 0.5:
        raise ValueError(f"eps_param must be in (0, 1/2), got {eps_param}")
    psi = chi_mean(r)
    core = (0.5 - eps_param) * delta / sigma - psi
    t1 = 2.0 * math.exp(-0.5 * core**2)
    t2 = 2.0 * math.exp(-0.5 * (truncation - (psi + center_norm / sigma)) ** 2)
    t3 = (8.0 / r) * math.exp(-0.5 * (1.0 - eps_param) * core**2)
    return t1 + t2 + t3


def default_truncation_level(center_norm: float, sigma: float, r: int) -> float:
    """Smallest admissible truncation level plus one."""
    return center_norm / sigma + chi_mean(r) + 1.0


def oracle_init(
    spec: MixtureSpec, offset_fraction: float, direction_seed: int
) -> np.ndarray:
    """True centers displaced by ``offset_fraction * Delta`` in random directions.

    By construction the scaled initial center error equals ``offset_fraction``
    exactly, which makes this the knob for probing the initialization
    condition.
    """
    if offset_fraction < 0:
        raise ValueError(f"offset_fraction must be >= 0, got {offset_fraction}")
    if offset_fraction == 0:
        return spec.centers.copy()
    delta, _ = center_separations(spec.centers)
    rng = np.random.default_rng(direction_seed)
    dirs = rng.standard_normal(spec.centers.shape)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return spec.centers + offset_fraction * delta * dirs
