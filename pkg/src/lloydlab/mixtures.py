"""Ground-truth clustering template: mixtures, perturbations, and model functionals.

The data model is a K-component sub-Gaussian mixture observed through an
additive, norm-bounded perturbation: each observed row is
``center[label] + noise + perturbation`` with ``||perturbation_row|| <= eps``.
Scalar functionals of the model (minimal/maximal center separation, minimal
cluster density, the two signal-to-noise ratios) feed the misclustering-rate
bound and the initialization check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

NOISE_FAMILIES = ("isotropic-gaussian", "bounded-uniform")
PERTURBATION_MECHANISMS = (
    "spherical-random",
    "adversarial-toward-wrong-center",
    "shared-direction",
)

_EXACT_TOL = 1e-12


@dataclass(frozen=True)
class MixtureSpec:
    """K-component mixture: centers (K x r), weights (K,), common noise scale.

    ``noise_family`` is one of ``isotropic-gaussian`` (N(0, sigma^2 I)) or
    ``bounded-uniform`` (coordinate-wise uniform on [-sigma*sqrt(3),
    sigma*sqrt(3)], variance sigma^2 per coordinate).
    """

    centers: np.ndarray
    sigma: float
    weights: np.ndarray | None = None
    noise_family: str = "isotropic-gaussian"

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        object.__setattr__(self, "centers", centers)
        k = centers.shape[0]
        if k < 2:
            raise ValueError(f"need at least 2 components, got {k}")
        if self.weights is None:
            weights = np.full(k, 1.0 / k)
        else:
            weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", weights)
        if weights.shape != (k,):
            raise ValueError(f"weights shape {weights.shape} != ({k},)")
        if np.any(weights <= 0):
            raise ValueError("weights must be strictly positive")
        if abs(weights.sum() - 1.0) > _EXACT_TOL:
            raise ValueError(f"weights sum to {weights.sum()}, not 1")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.noise_family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.noise_family!r}")

    @property
    def n_components(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def to_dict(self) -> dict:
        return {
            "k": int(self.n_components),
            "dim": int(self.dim),
            "centers": self.centers.tolist(),
            "weights": self.weights.tolist(),
            "noise": {"family": self.noise_family, "sigma": float(self.sigma)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixtureSpec":
        noise = d.get("noise", {})
        spec = cls(
            centers=np.asarray(d["centers"], dtype=float),
            weights=np.asarray(d["weights"], dtype=float) if "weights" in d else None,
            sigma=float(noise.get("sigma", 0.0)),
            noise_family=noise.get("family", "isotropic-gaussian"),
        )
        for key, value in (("k", spec.n_components), ("dim", spec.dim)):
            if key in d and int(d[key]) != value:
                raise ValueError(f"declared {key}={d[key]} but centers imply {value}")
        return spec

    def save(self, path: str | Path) -> None:
        Path(path).write_text(yaml.safe_dump(self.to_dict(), sort_keys=False))

    @classmethod
    def load(cls, path: str | Path) -> "MixtureSpec":
        return cls.from_dict(yaml.safe_load(Path(path).read_text()))


@dataclass(frozen=True)
class LabeledSample:
    """Clean and perturbed data matrices with ground-truth labels.

    Invariants checked on construction: ``observed == clean + perturbation``
    row-wise, ``clean - noise`` is constant within each label class (it equals
    the generating center), and no perturbation row exceeds ``eps_bound``.
    """

    clean: np.ndarray
    observed: np.ndarray
    labels: np.ndarray
    noise: np.ndarray
    perturbation: np.ndarray
    eps_bound: float

    def __post_init__(self):
        for name in ("clean", "observed", "noise", "perturbation"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=int))
        n, r = self.clean.shape
        for name in ("observed", "noise", "perturbation"):
            if getattr(self, name).shape != (n, r):
                raise ValueError(f"{name} shape mismatch")
        if self.labels.shape != (n,):
            raise ValueError("labels shape mismatch")
        if np.any(self.labels < 0):
            raise ValueError("labels must be nonnegative integers")
        resid = np.abs(self.observed - self.clean - self.perturbation).max(initial=0.0)
        if resid > _EXACT_TOL:
            raise ValueError(f"observed != clean + perturbation (max dev {resid:g})")
        signal = self.clean - self.noise
        for lab in np.unique(self.labels):
            rows = signal[self.labels == lab]
            if np.abs(rows - rows[0]).max(initial=0.0) > 1e-9:
                raise ValueError(f"clean - noise not constant within class {lab}")
        norms = np.linalg.norm(self.perturbation, axis=1)
        if norms.size and norms.max() > self.eps_bound:
            raise ValueError(
                f"perturbation row norm {norms.max():g} exceeds eps_bound {self.eps_bound:g}"
            )

    @property
    def n(self) -> int:
        return self.clean.shape[0]

    @property
    def dim(self) -> int:
        return self.clean.shape[1]


@dataclass(frozen=True)
class ModelFunctionals:
    """Scalar model functionals: separations, density, signal-to-noise ratios."""

    delta: float
    max_sep: float
    alpha: float
    snr_noise: float
    snr_perturb: float

    def __post_init__(self):
        if self.delta < 0 or self.max_sep < self.delta:
            raise ValueError("need 0 <= delta <= max_sep")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")


def recover_centers(sample: LabeledSample, k: int | None = None) -> np.ndarray:
    """Per-class generating centers, reconstructed as ``clean - noise`` rows.

    Raises if a class in ``range(k)`` has no representative in the sample.
    """
    labels = sample.labels
    if k is None:
        k = int(labels.max()) + 1
    signal = sample.clean - sample.noise
    centers = np.empty((k, sample.dim))
    for lab in range(k):
        idx = np.flatnonzero(labels == lab)
        if idx.size == 0:
            raise ValueError(f"label class {lab} absent from sample")
        centers[lab] = signal[idx[0]]
    return centers


def sample_mixture(spec: MixtureSpec, n: int, seed: int) -> LabeledSample:
    """Draw ``n`` i.i.d. points from the mixture; perturbation is zero.

    Labels are i.i.d. from ``spec.weights`` and noise rows are i.i.d.
    zero-mean from the chosen family.  Deterministic given ``seed``.
    """
    if n < spec.n_components:
        raise ValueError(f"need n >= {spec.n_components}, got {n}")
    rng = np.random.default_rng(seed)
    k, r = spec.n_components, spec.dim
    labels = rng.choice(k, size=n, p=spec.weights)
    if spec.noise_family == "isotropic-gaussian":
        noise = spec.sigma * rng.standard_normal((n, r))
    else:
        half = spec.sigma * math.sqrt(3.0)
        noise = rng.uniform(-half, half, size=(n, r))
    clean = spec.centers[labels] + noise
    zeros = np.zeros((n, r))
    return LabeledSample(
        clean=clean,
        observed=clean.copy(),
        labels=labels,
        noise=noise,
        perturbation=zeros,
        eps_bound=0.0,
    )


def _cap_row_norms(e: np.ndarray, eps: float) -> np.ndarray:
    # Rounding in the norm computation may leave a row a few ulp above eps;
    # rescale until the bound holds exactly.
    norms = np.linalg.norm(e, axis=1)
    m = norms.max(initial=0.0)
    while m > eps:
        e = e * (eps / m) if m > 0 else e
        e = np.nextafter(e, 0.0)
        m = np.linalg.norm(e, axis=1).max(initial=0.0)
    return e


def apply_perturbation(
    sample: LabeledSample, eps: float, mechanism: str, seed: int
) -> LabeledSample:
    """Replace the sample's perturbation with a fresh draw of norm <= eps.

    Mechanisms:

    - ``spherical-random``: independent rows, uniform direction, norm
      uniform on [0, eps].
    - ``shared-direction``: one fixed unit vector times eps applied to every
      row (all rows identical, exercising cross-row dependence).
    - ``adversarial-toward-wrong-center``: each row pushed distance eps
      toward the nearest center other than its own.
    """
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if mechanism not in PERTURBATION_MECHANISMS:
        raise ValueError(f"unknown mechanism {mechanism!r}")
    rng = np.random.default_rng(seed)
    n, r = sample.clean.shape
    if eps == 0:
        e = np.zeros((n, r))
    elif mechanism == "spherical-random":
        dirs = rng.standard_normal((n, r))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        e = dirs * (eps * rng.random(n))[:, None]
    elif mechanism == "shared-direction":
        d = rng.standard_normal(r)
        d /= np.linalg.norm(d)
        e = np.tile(eps * d, (n, 1))
    else:
        centers = recover_centers(sample)
        diffs = centers[None, :, :] - sample.clean[:, None, :]  # (n, K, r)
        d2 = (diffs**2).sum(axis=2)
        d2[np.arange(n), sample.labels] = np.inf
        wrong = d2.argmin(axis=1)
        vecs = centers[wrong] - sample.clean
        norms = np.linalg.norm(vecs, axis=1, keepdims=True)
        np.divide(vecs, norms, out=vecs, where=norms > 0)
        e = eps * vecs
    e = _cap_row_norms(e, eps)
    return LabeledSample(
        clean=sample.clean,
        observed=sample.clean + e,
        labels=sample.labels,
        noise=sample.noise,
        perturbation=e,
        eps_bound=eps,
    )


def center_separations(centers: np.ndarray) -> tuple[float, float]:
    """(minimal, maximal) pairwise Euclidean distance between center rows."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    k = centers.shape[0]
    if k < 2:
        raise ValueError("need at least two centers")
    d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
    off = d[np.triu_indices(k, 1)]
    return float(off.min()), float(off.max())


def model_functionals(
    spec: MixtureSpec, labels: np.ndarray, eps: float, n: int | None = None
) -> ModelFunctionals:
    """Delta, M, alpha and the signal-to-noise ratios for a realized sample.

    ``snr_noise = (Delta/sigma) * sqrt(alpha / (1 + K r / n))`` and
    ``snr_perturb = sqrt(alpha) * Delta / eps``; either is +inf when its noise
    scale is zero.
    """
    labels = np.asarray(labels, dtype=int)
    if n is None:
        n = labels.size
    k, r = spec.n_components, spec.dim
    counts = np.bincount(labels, minlength=k)
    if labels.max(initial=-1) >= k or np.any(counts == 0):
        missing = [i for i in range(k) if i >= counts.size or counts[i] == 0]
        raise ValueError(f"label classes missing or out of range: {missing or labels.max()}")
    delta, max_sep = center_separations(spec.centers)
    alpha = counts.min() / n
    if spec.sigma > 0:
        snr_noise = (delta / spec.sigma) * math.sqrt(alpha / (1.0 + k * r / n))
    else:
        snr_noise = math.inf
    snr_perturb = math.sqrt(alpha) * delta / eps if eps > 0 else math.inf
    return ModelFunctionals(
        delta=delta, max_sep=max_sep, alpha=alpha, snr_noise=snr_noise, snr_perturb=snr_perturb
    )


def misclustering_bound(delta: float, sigma: float, eps: float):
    """Misclustering-rate ceiling and the sample-size-indexed failure probability.

    Returns ``(bound, failure_prob)`` where ``bound = max(exp(-delta^2 /
    (16 sigma^2)), exp(-delta^2 / (8 eps sigma)))`` and ``failure_prob(n) =
    1/n + 2 exp(-delta/sigma) + 2 exp(-delta/sqrt(eps sigma))``.  Terms whose
    denominator vanishes are dropped (their zero-noise limit).
    """
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if sigma < 0 or eps < 0:
        raise ValueError("sigma and eps must be >= 0")
    t_sigma = math.exp(-(delta**2) / (16.0 * sigma**2)) if sigma > 0 else 0.0
    t_cross = math.exp(-(delta**2) / (8.0 * eps * sigma)) if eps > 0 and sigma > 0 else 0.0
    bound = max(t_sigma, t_cross)

    def failure_prob(n: int) -> float:
        p = 1.0 / n
        if sigma > 0:
            p += 2.0 * math.exp(-delta / sigma)
        if eps > 0 and sigma > 0:
            p += 2.0 * math.exp(-delta / math.sqrt(eps * sigma))
        return p

    return bound, failure_prob


def check_initial_condition(
    g0: float | None,
    gamma0: float | None,
    functionals: ModelFunctionals,
    sigma: float,
) -> str:
    """Which initialization condition (if any) the supplied G0 / Gamma0 meets.

    Returns ``"satisfied_via_G0"``, ``"satisfied_via_Gamma0"`` or
    ``"unsatisfied"``.  Reciprocals of infinite signal-to-noise ratios are
    treated as zero, as is the sqrt(sigma/Delta) term when sigma == 0.
    """
    if g0 is None and gamma0 is None:
        raise ValueError("supply at least one of g0, gamma0")
    f = functionals
    if f.delta <= 0:
        raise ValueError("initial condition undefined for delta == 0")
    inv_rs = 0.0 if math.isinf(f.snr_noise) else 1.0 / f.snr_noise
    inv_re = 0.0 if math.isinf(f.snr_perturb) else 1.0 / f.snr_perturb
    tail = f.alpha ** (-0.25) * math.sqrt(sigma / f.delta)
    sqrt_a = math.sqrt(f.alpha)
    g_threshold = (
        0.5 - (math.sqrt(6.0) + 1.0) * inv_rs - (2.1 * sqrt_a + 1.0) * inv_re - tail
    ) * (f.delta / f.max_sep)
    gamma_threshold = 0.5 - inv_rs - (1.1 * sqrt_a + 1.0) * inv_re - tail
    if g0 is not None and g0 <= g_threshold:
        return "satisfied_via_G0"
    if gamma0 is not None and gamma0 <= gamma_threshold:
        return "satisfied_via_Gamma0"
    return "unsatisfied"


def center_error_bound(
    functionals: ModelFunctionals,
    sigma: float,
    eps: float,
    n: int,
    r: int,
    k: int,
    mis_rate: float,
) -> float:
    """Upper bound on the worst estimated-center error after convergence."""
    if not 0.0 <= mis_rate <= 1.0:
        raise ValueError(f"mis_rate must be in [0, 1], got {mis_rate}")
    f = functionals
    return (
        2.0 * math.sqrt(3.0) * (math.sqrt(k) + 1.0) * sigma
        * math.sqrt((n + r) * mis_rate / (n * f.alpha**2))
        + 2.0 * f.delta * mis_rate / f.alpha
        + 6.0 * sigma * math.sqrt((r + math.log(n)) / (n * f.alpha))
        + eps
    )


def export_sample_csv(
    sample: LabeledSample, path: str | Path, meta: dict | None = None
) -> Path:
    """Write observed rows as CSV (x_1..x_r, label) plus a YAML metadata sidecar.

    The sidecar records whatever is passed in ``meta`` (typically seed, sigma,
    eps) alongside the sample's own eps_bound; it lands next to the CSV with a
    ``.meta.yaml`` suffix.
    """
    path = Path(path)
    r = sample.dim
    header = ",".join([f"x_{j + 1}" for j in range(r)] + ["label"])
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row, lab in zip(sample.observed, sample.labels):
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(lab)}\n")
    sidecar = path.with_suffix(".meta.yaml")
    payload = {"eps_bound": float(sample.eps_bound), "n": int(sample.n), "dim": r}
    payload.update(meta or {})
    sidecar.write_text(yaml.safe_dump(payload, sort_keys=False))
    return sidecar
