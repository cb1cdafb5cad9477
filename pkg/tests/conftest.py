"""Shared brute-force oracles used across the test modules.

These deliberately re-derive quantities from first principles (exhaustive
enumeration, direct summation) so library results are checked against an
independent computation path.
"""

import itertools
from fractions import Fraction

import numpy as np


def exhaustive_misclustering(z_hat, z, k):
    """Min disagreement over all label permutations, by direct enumeration."""
    z_hat = np.asarray(z_hat)
    z = np.asarray(z)
    best_rate, best_perm = 1.0 + 1e-9, None
    for perm in itertools.permutations(range(k)):
        mapped = np.asarray(perm)[z]
        rate = float(np.mean(mapped != z_hat))
        if rate < best_rate:
            best_rate, best_perm = rate, perm
    return best_rate, best_perm


def exact_clusterwise_fraction(z_hat, z, k, perm):
    """Worst-cluster rate as an exact Fraction from raw counts (z aligned by perm)."""
    z_aligned = np.asarray(perm)[np.asarray(z)]
    z_hat = np.asarray(z_hat)
    worst = Fraction(0)
    for kk in range(k):
        received = int(np.sum((z_hat == kk) & (z_aligned != kk)))
        lost = int(np.sum((z_aligned == kk) & (z_hat != kk)))
        n_hat = int(np.sum(z_hat == kk))
        n_true = int(np.sum(z_aligned == kk))
        r1 = Fraction(received, n_hat) if n_hat else Fraction(1 if received else 0)
        r2 = Fraction(lost, n_true) if n_true else Fraction(1 if lost else 0)
        worst = max(worst, r1, r2)
    return worst


def bipartition_cost(y, mask):
    """Mean squared distance to the two part means (k-means cost, K=2)."""
    cost = 0.0
    for part in (y[mask], y[~mask]):
        cost += ((part - part.mean(axis=0)) ** 2).sum()
    return cost / y.shape[0]


def brute_force_two_means_cost(y):
    """Exhaustive optimum of the 2-means cost over all bipartitions."""
    n = y.shape[0]
    best = np.inf
    # Point 0 fixed in part A kills the symmetric duplicates.
    for bits in range(2 ** (n - 1)):
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        for j in range(1, n):
            if bits & (1 << (j - 1)):
                mask[j] = True
        if mask.all():
            continue
        best = min(best, bipartition_cost(y, mask))
    return best


def random_orthogonal(r, rng):
    """Haar-ish random orthogonal matrix via QR with positive diagonal."""
    q, rr = np.linalg.qr(rng.standard_normal((r, r)))
    return q * np.sign(np.diag(rr))


def kmeanspp_second_seed_marginal(points):
    """Exact marginal law of the second seed by enumerating both draws."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[0]
    probs = np.zeros(n)
    for i in range(n):
        d2 = ((pts - pts[i]) ** 2).sum(axis=1)
        total = d2.sum()
        probs += (1.0 / n) * d2 / total
    return probs
