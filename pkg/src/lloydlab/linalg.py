"""Dense symmetric linear algebra used by the embedding pipelines.

Everything here is deterministic: eigenvectors carry a fixed sign convention
(largest-magnitude entry nonnegative, first such index on ties) so repeated
runs produce identical embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

ORDERINGS = ("algebraic-descending", "magnitude-descending")

_SYM_TOL = 1e-10


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense symmetric matrix; symmetrized on ingest, rejected if asymmetric."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        scale = max(1.0, np.abs(a).max(initial=0.0))
        if np.abs(a - a.T).max(initial=0.0) > _SYM_TOL * scale:
            raise ValueError("matrix is not symmetric within tolerance")
        object.__setattr__(self, "entries", (a + a.T) / 2.0)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenSystem:
    """Top-k eigenpairs under a declared ordering; columns orthonormal."""

    values: np.ndarray
    vectors: np.ndarray
    ordering: str


def as_symmetric(a) -> np.ndarray:
    """Coerce an array or SymmetricMatrix to a validated symmetric ndarray."""
    if isinstance(a, SymmetricMatrix):
        return a.entries
    return SymmetricMatrix(np.asarray(a, dtype=float)).entries


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so each one's largest-magnitude entry is nonnegative."""
    vectors = np.array(vectors, copy=True)
    lead = np.abs(vectors).argmax(axis=0)
    flip = vectors[lead, np.arange(vectors.shape[1])] < 0
    vectors[:, flip] *= -1.0
    return vectors


def sym_eig(a, k: int | None = None, ordering: str = "algebraic-descending") -> EigenSystem:
    """Top-k eigenpairs of a symmetric matrix under the requested ordering.

    ``algebraic-descending`` sorts lambda_1 >= ... >= lambda_n;
    ``magnitude-descending`` sorts by |lambda| (algebraic value breaks ties).
    """
    a = as_symmetric(a)
    n = a.shape[0]
    if k is None:
        k = n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if ordering not in ORDERINGS:
        raise ValueError(f"unknown ordering {ordering!r}")
    values, vectors = np.linalg.eigh(a)
    if ordering == "algebraic-descending":
        order = np.argsort(-values, kind="stable")
    else:
        order = np.lexsort((-values, -np.abs(values)))
    order = order[:k]
    return EigenSystem(
        values=values[order], vectors=fix_signs(vectors[:, order]), ordering=ordering
    )


def hollow(a) -> SymmetricMatrix:
    """Zero the diagonal, leaving off-diagonal entries untouched."""
    out = as_symmetric(a).copy()
    np.fill_diagonal(out, 0.0)
    return SymmetricMatrix(out)


def double_center(d2) -> SymmetricMatrix:
    """-1/2 J D2 J with J = I - 11'/n; input is a squared-dissimilarity matrix."""
    d2 = as_symmetric(d2)
    if d2.min(initial=0.0) < 0:
        raise ValueError("squared dissimilarities must be nonnegative")
    n = d2.shape[0]
    row_mean = d2.mean(axis=1, keepdims=True)
    grand = d2.mean()
    b = -0.5 * (d2 - row_mean - row_mean.T + grand)
    return SymmetricMatrix(b)


def two_to_inf_norm(x: np.ndarray) -> float:
    """Maximal row Euclidean norm."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return float(np.linalg.norm(x, axis=1).max(initial=0.0))


def matrix_to_csv(a, path: str | Path) -> None:
    """Dump a dense matrix row-major as headerless CSV (debugging aid)."""
    a = a.entries if isinstance(a, SymmetricMatrix) else np.asarray(a, dtype=float)
    np.savetxt(path, np.atleast_2d(a), delimiter=",")


def matrix_from_csv(path: str | Path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))
