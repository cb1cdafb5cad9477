"""Application pipelines that turn structured data into point clouds to cluster.

Generators: stochastic block model, its edge-flipped noisy variant, random
dot product graphs, and dynamic factor model series.  Embeddings: adjacency
spectral embedding (plain and eigenvalue-scaled), hollowed Gram embedding,
classical multidimensional scaling (with optional hollowing) and PCA loading
estimation.  Each embedding returns an ``n x d`` matrix whose rows feed the
Lloyd engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import as_symmetric, double_center, sym_eig


@dataclass(frozen=True)
class SbmSpec:
    """Block-model parameters: base matrix B0, sparsity, optional membership.

    The realized connection matrix is ``rho_n * B0``; membership defaults to a
    balanced random assignment drawn at generation time.
    """

    n: int
    b0: np.ndarray
    rho_n: float
    membership: np.ndarray | None = None

    def __post_init__(self):
        b0 = np.asarray(self.b0, dtype=float)
        object.__setattr__(self, "b0", b0)
        if b0.ndim != 2 or b0.shape[0] != b0.shape[1]:
            raise ValueError("b0 must be square")
        if np.abs(b0 - b0.T).max(initial=0.0) > 1e-12:
            raise ValueError("b0 must be symmetric")
        if np.any(b0 <= 0) or np.any(b0 > 1):
            raise ValueError("b0 entries must lie in (0, 1]")
        if np.linalg.matrix_rank(b0) < b0.shape[0]:
            raise ValueError("b0 must have full rank")
        if self.rho_n < 0 or self.rho_n * b0.max() > 1:
            raise ValueError("rho_n * max(b0) must lie in [0, 1]")
        if self.membership is not None:
            m = np.asarray(self.membership, dtype=int)
            object.__setattr__(self, "membership", m)
            if m.shape != (self.n,):
                raise ValueError("membership length mismatch")
            if m.min() < 0 or m.max() >= b0.shape[0]:
                raise ValueError("membership labels out of range")

    @property
    def k(self) -> int:
        return self.b0.shape[0]


@dataclass(frozen=True)
class GraphInstance:
    """0/1 symmetric adjacency with zero diagonal plus generating metadata.

    ``expected`` holds the off-diagonal edge probabilities (diagonal zero to
    match the zero-diagonal adjacency convention).
    """

    adjacency: np.ndarray
    expected: np.ndarray | None = None
    labels: np.ndarray | None = None
    rho_n: float | None = None
    alpha_n: float | None = None
    beta_n: float | None = None

    def __post_init__(self):
        a = as_symmetric(self.adjacency)
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency diagonal must be zero")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adjacency", a)
        if self.expected is not None:
            object.__setattr__(self, "expected", as_symmetric(self.expected))
        if self.labels is not None:
            object.__setattr__(self, "labels", np.asarray(self.labels, dtype=int))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]


def _bernoulli_graph(p: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample a symmetric 0/1 matrix with independent upper-triangle entries."""
    n = p.shape[0]
    u = rng.random((n, n))
    upper = np.triu(u < p, 1).astype(float)
    return upper + upper.T


def _balanced_labels(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    base = np.arange(n) % k
    return rng.permutation(base)


def gen_sbm(spec: SbmSpec, seed: int) -> GraphInstance:
    """Sample an SBM adjacency matrix with expected matrix Z (rho B0) Z'."""
    rng = np.random.default_rng(seed)
    labels = spec.membership
    if labels is None:
        labels = _balanced_labels(spec.n, spec.k, rng)
    b = spec.rho_n * spec.b0
    p = b[labels][:, labels]
    if p.min() < 0 or p.max() > 1:
        raise ValueError("edge probabilities outside [0, 1]")
    adjacency = _bernoulli_graph(p, rng)
    expected = p.copy()
    np.fill_diagonal(expected, 0.0)
    return GraphInstance(
        adjacency=adjacency, expected=expected, labels=labels, rho_n=spec.rho_n
    )


def gen_noisy_sbm(
    graph: GraphInstance, alpha_n: float, beta_n: float, seed: int
) -> GraphInstance:
    """Flip edges independently: 0 -> 1 with rate alpha_n, 1 -> 0 with rate beta_n."""
    if not (0 <= alpha_n < 1 and 0 <= beta_n < 1):
        raise ValueError("alpha_n and beta_n must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    a = graph.adjacency
    n = a.shape[0]
    u = rng.random((n, n))
    flipped = np.where(a == 0, (u < alpha_n).astype(float), (u >= beta_n).astype(float))
    upper = np.triu(flipped, 1)
    noisy = upper + upper.T
    expected = None
    if graph.expected is not None:
        expected = (1.0 - alpha_n - beta_n) * graph.expected + alpha_n
        np.fill_diagonal(expected, 0.0)
    return GraphInstance(
        adjacency=noisy,
        expected=expected,
        labels=graph.labels,
        rho_n=graph.rho_n,
        alpha_n=alpha_n,
        beta_n=beta_n,
    )


def _adjacency_of(graph_or_matrix) -> np.ndarray:
    if isinstance(graph_or_matrix, GraphInstance):
        return graph_or_matrix.adjacency
    return as_symmetric(graph_or_matrix)


def adjacency_spectral_embedding(graph_or_matrix, k: int) -> np.ndarray:
    """Top-k eigenvectors (algebraically largest eigenvalues) of the adjacency."""
    a = _adjacency_of(graph_or_matrix)
    if a.shape[0] <= k:
        raise ValueError("need more nodes than embedding dimensions")
    return sym_eig(a, k=k, ordering="algebraic-descending").vectors


def ase_scaled(graph_or_matrix, r: int) -> np.ndarray:
    """Eigenvalue-scaled adjacency spectral embedding ``U_r S_r^{1/2}``."""
    a = _adjacency_of(graph_or_matrix)
    es = sym_eig(a, k=r, ordering="algebraic-descending")
    if es.values[-1] <= 0:
        raise ValueError(
            f"eigenvalue {r} of the adjacency is {es.values[-1]:g}; "
            "scaled embedding needs a positive top-r spectrum"
        )
    return es.vectors * np.sqrt(es.values)


def hollowed_gram_embedding(x: np.ndarray, k: int) -> np.ndarray:
    """Scaled top-k eigenvectors of the Gram matrix with its diagonal removed."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    g = x @ x.T
    np.fill_diagonal(g, 0.0)
    es = sym_eig(g, k=k, ordering="algebraic-descending")
    if es.values[-1] <= 0:
        raise ValueError(
            f"eigenvalue {k} of the hollowed Gram matrix is {es.values[-1]:g}; "
            "embedding requires it to be positive"
        )
    return es.vectors * np.sqrt(es.values)


def cmds_embedding(
    points: np.ndarray | None = None,
    sqdist: np.ndarray | None = None,
    r_embed: int = 2,
    hollowed: bool = False,
) -> np.ndarray:
    """Classical multidimensional scaling coordinates.

    Accepts either raw coordinates (``points``, n x p) or a squared
    dissimilarity matrix (``sqdist``, n x n); the two routes agree for
    Euclidean input.  ``hollowed=True`` zeroes the diagonal of the inner
    double-centered matrix before the eigendecomposition.
    """
    if (points is None) == (sqdist is None):
        raise ValueError("supply exactly one of points, sqdist")
    if r_embed < 1:
        raise ValueError("r_embed must be >= 1")
    if points is not None:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        centered = x - x.mean(axis=0)
        b = centered @ centered.T
    else:
        b = double_center(sqdist).entries
    if hollowed:
        b = b.copy()
        np.fill_diagonal(b, 0.0)
    es = sym_eig(b, k=r_embed, ordering="algebraic-descending")
    if es.values[-1] <= 0:
        raise ValueError(
            f"eigenvalue {r_embed} of the double-centered matrix is "
            f"{es.values[-1]:g}; embedding requires it to be positive"
        )
    return es.vectors * np.sqrt(es.values)


def gen_rdpg(ystar: np.ndarray, seed: int) -> GraphInstance:
    """Random dot product graph: edge probability = inner product of latent rows."""
    ystar = np.atleast_2d(np.asarray(ystar, dtype=float))
    p = ystar @ ystar.T
    n = p.shape[0]
    off = ~np.eye(n, dtype=bool)
    bad = (p < 0) | (p > 1)
    bad &= off
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(
            f"inner product of rows ({i}, {j}) is {p[i, j]:g}, outside [0, 1]"
        )
    rng = np.random.default_rng(seed)
    adjacency = _bernoulli_graph(p, rng)
    expected = p.copy()
    np.fill_diagonal(expected, 0.0)
    return GraphInstance(adjacency=adjacency, expected=expected)


def rdpg_gap_params(p_expected, r: int) -> tuple[float, float]:
    """(max expected degree, per-node eigenvalue gap) of an expected matrix.

    The gap is ``min_{i <= r} (lambda_i - lambda_{i+1}) / n`` over the
    algebraically ordered spectrum; a zero gap is reported, not raised.
    """
    p = as_symmetric(p_expected)
    n = p.shape[0]
    if not 1 <= r < n:
        raise ValueError(f"r must be in [1, {n - 1}]")
    degrees = p.sum(axis=1) - np.diag(p)
    values = sym_eig(p, k=r + 1, ordering="algebraic-descending").values
    gaps = np.abs(np.diff(values))
    return float(degrees.max()), float(gaps.min() / n)


FACTOR_MODELS = ("iid-gaussian", "var1")


def gen_dfm(
    loadings: np.ndarray,
    t_len: int,
    factor_model: str = "iid-gaussian",
    noise_variances: float | np.ndarray = 0.0,
    seed: int = 0,
    phi: float | None = None,
) -> np.ndarray:
    """Simulate ``X_t = Lambda f_t + eps_t`` for t = 1..t_len (returns t_len x n).

    Factors are normalized to unit covariance: ``iid-gaussian`` draws f_t ~
    N(0, I_r); ``var1`` runs a stationary AR(1) recursion with coefficient
    ``phi`` scaled so the marginal stays N(0, I_r).  Errors are independent
    Gaussians with the given diagonal variances.
    """
    loadings = np.atleast_2d(np.asarray(loadings, dtype=float))
    n, r = loadings.shape
    if t_len < r:
        raise ValueError(f"need t_len >= {r}, got {t_len}")
    if factor_model not in FACTOR_MODELS:
        raise ValueError(f"unknown factor model {factor_model!r}")
    rng = np.random.default_rng(seed)
    innovations = rng.standard_normal((t_len, r))
    if factor_model == "iid-gaussian":
        factors = innovations
    else:
        if phi is None:
            raise ValueError("var1 factors require phi")
        if abs(phi) >= 1:
            raise ValueError(f"|phi| must be < 1 for stationarity, got {phi}")
        factors = np.empty_like(innovations)
        factors[0] = innovations[0]
        scale = np.sqrt(1.0 - phi**2)
        for t in range(1, t_len):
            factors[t] = phi * factors[t - 1] + scale * innovations[t]
    variances = np.broadcast_to(np.asarray(noise_variances, dtype=float), (n,))
    if np.any(variances < 0):
        raise ValueError("noise variances must be >= 0")
    errors = rng.standard_normal((t_len, n)) * np.sqrt(variances)
    return factors @ loadings.T + errors


def pca_loadings(x: np.ndarray, r: int) -> np.ndarray:
    """PCA loading estimate: top-r covariance eigenvectors scaled by root eigenvalues.

    By construction ``L' L`` is diagonal.  Raises when the requested rank
    exceeds the positive part of the covariance spectrum.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[0] < 2:
        raise ValueError("need at least two time points")
    cov = np.atleast_2d(np.cov(x, rowvar=False, ddof=1))
    es = sym_eig(cov, k=r, ordering="algebraic-descending")
    if es.values[-1] <= 0:
        raise ValueError(
            f"eigenvalue {r} of the sample covariance is {es.values[-1]:g}; "
            "loading estimation needs a positive top-r spectrum"
        )
    return es.vectors * np.sqrt(es.values)


def points_to_csv(
    points: np.ndarray, path: str | Path, labels: np.ndarray | None = None
) -> None:
    """Point-cloud CSV (header x_1..x_d, optional label column)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    d = points.shape[1]
    cols = [f"x_{j + 1}" for j in range(d)] + (["label"] if labels is not None else [])
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i, row in enumerate(points):
            cells = [repr(float(v)) for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            fh.write(",".join(cells) + "\n")


def graph_to_edge_csv(
    graph: GraphInstance, path: str | Path, label_path: str | Path | None = None
) -> None:
    """Write the upper-triangle edge list (0-indexed ``i,j`` lines) and labels."""
    a = graph.adjacency
    with open(path, "w") as fh:
        fh.write("i,j\n")
        for i, j in zip(*np.nonzero(np.triu(a, 1))):
            fh.write(f"{i},{j}\n")
    if label_path is not None:
        if graph.labels is None:
            raise ValueError("graph has no labels to write")
        with open(label_path, "w") as fh:
            fh.write("label\n")
            for lab in graph.labels:
                fh.write(f"{int(lab)}\n")
