"""Config-driven experiment runner: replicated pipelines, CSV records, summaries.

Each experiment kind wires generators, embeddings, seeding and the Lloyd
engine into one replicated pipeline.  Replicate ``i`` of a run with base seed
``b`` always uses ``derive_seed(b, i)``, so records do not depend on
execution order and identical configs reproduce identical CSV bytes (wall
times go to a separate ``timing.csv``, which is exempt from that guarantee).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import embeddings as emb
from ._seeds import derive_seed
from .lloyd import (
    LloydConfig,
    best_kmeans,
    clusterwise_rate,
    misclustering_rate,
    run_lloyd,
)
from .mixtures import (
    LabeledSample,
    MixtureSpec,
    apply_perturbation,
    check_initial_condition,
    model_functionals,
    sample_mixture,
    misclustering_bound,
)
from .seeding import kmeanspp_seed, oracle_init, seed_separation_event
from .sigclust import partition_from_labels, sigclust_test, two_means_partition

RECORD_COLUMNS = (
    "replicate",
    "seed",
    "mis_rate",
    "cluster_rate",
    "center_err",
    "iterations",
    "bound",
    "bound_satisfied",
    "p_value",
    "seed_separated",
    "seed_indices",
    "exact_recovery",
    "oracle_mis_rate",
)

RECORDS_FILE = "records.csv"
SUMMARY_FILE = "summary.txt"
TIMING_FILE = "timing.csv"
SWEEP_FILE = "sweep.csv"


class ConfigError(ValueError):
    """Invalid experiment configuration; maps to CLI exit code 2."""


def _cast_int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}")
    return v


def _cast_float(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}")
    return float(v)


def _cast_str(v):
    if not isinstance(v, str):
        raise ConfigError(f"expected a string, got {v!r}")
    return v


def _cast_matrix(v):
    try:
        arr = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"expected a numeric matrix, got {v!r}") from exc
    return arr


def _cast_opt(cast):
    def inner(v):
        return None if v is None else cast(v)

    return inner


# kind -> (required {name: cast}, optional {name: (cast, default)})
KIND_SCHEMAS: dict[str, tuple[dict, dict]] = {
    "mixture-lloyd": (
        {"n": _cast_int, "delta": _cast_float, "sigma": _cast_float},
        {
            "r": (_cast_int, 2),
            "eps": (_cast_float, 0.0),
            "eps_mechanism": (_cast_str, "spherical-random"),
            "noise_family": (_cast_str, "isotropic-gaussian"),
            "init": (_cast_str, "oracle"),
            "init_offset": (_cast_float, 0.2),
            "max_iters": (_cast_opt(_cast_int), None),
        },
    ),
    "kmeanspp-separation": (
        {"n": _cast_int, "delta": _cast_float, "sigma": _cast_float},
        {"r": (_cast_int, 2)},
    ),
    "sigclust-size-power": (
        {"n": _cast_int, "r": _cast_int, "n_sim": _cast_int},
        {
            "a": (_cast_float, 0.0),
            "sigma": (_cast_float, 1.0),
            "restarts": (_cast_int, 10),
            "level": (_cast_float, 0.05),
        },
    ),
    "sbm-recovery": (
        {"n": _cast_int},
        {
            "k": (_cast_int, 2),
            "b0": (_cast_matrix, np.array([[1.0, 1.0 / 3.0], [1.0 / 3.0, 1.0]])),
            "rho_multiplier": (_cast_opt(_cast_float), 5.0),
            "rho_n": (_cast_opt(_cast_float), None),
            "restarts": (_cast_int, 10),
        },
    ),
    "noisy-sbm": (
        {"n": _cast_int, "alpha_n": _cast_float, "beta_n": _cast_float},
        {
            "k": (_cast_int, 2),
            "b0": (_cast_matrix, np.array([[1.0, 1.0 / 3.0], [1.0 / 3.0, 1.0]])),
            "rho_multiplier": (_cast_opt(_cast_float), 5.0),
            "rho_n": (_cast_opt(_cast_float), None),
            "restarts": (_cast_int, 10),
        },
    ),
    "gram-spectral": (
        {"n": _cast_int, "p": _cast_int, "delta": _cast_float, "sigma": _cast_float},
        {"restarts": (_cast_int, 10), "center_norm": (_cast_float, 3.0)},
    ),
    "mds-cluster": (
        {"n": _cast_int, "p": _cast_int, "delta": _cast_float, "sigma": _cast_float},
        {
            "restarts": (_cast_int, 10),
            "r_embed": (_cast_int, 1),
            "center_norm": (_cast_float, 3.0),
        },
    ),
    "rdpg": (
        {"n": _cast_int},
        {
            "latent_centers": (
                _cast_matrix,
                np.array([[0.75, 0.25], [0.25, 0.75]]),
            ),
            "latent_sigma": (_cast_float, 0.05),
            "restarts": (_cast_int, 10),
        },
    ),
    "dfm": (
        {"n": _cast_int, "t_len": _cast_int},
        {
            "r": (_cast_int, 2),
            "delta": (_cast_float, 6.0),
            "sigma_loading": (_cast_float, 1.0),
            "noise_variance": (_cast_float, 0.25),
            "factor_model": (_cast_str, "iid-gaussian"),
            "phi": (_cast_opt(_cast_float), None),
            "restarts": (_cast_int, 10),
        },
    ),
    "figure1": (
        {},
        {
            "n": (_cast_int, 400),
            "eps": (_cast_float, 1.0),
            "eps_mechanism": (_cast_str, "spherical-random"),
        },
    ),
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    replicates: int
    seed: int
    output_dir: Path
    params: dict = field(default_factory=dict)

    def with_param(self, name: str, value) -> "ExperimentConfig":
        params = dict(self.params)
        params[name] = value
        return ExperimentConfig(
            kind=self.kind,
            replicates=self.replicates,
            seed=self.seed,
            output_dir=self.output_dir,
            params=params,
        )


def validate_config(raw: dict) -> ExperimentConfig:
    """Check kinds, required fields and types; raise ConfigError naming the field."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    for key in ("kind", "replicates", "seed", "output_dir"):
        if key not in raw:
            raise ConfigError(f"missing field: {key}")
    unknown_top = set(raw) - {"kind", "replicates", "seed", "output_dir", "params"}
    if unknown_top:
        raise ConfigError(f"unknown top-level fields: {sorted(unknown_top)}")
    kind = raw["kind"]
    if kind not in KIND_SCHEMAS:
        raise ConfigError(f"kind: unknown kind {kind!r}; valid: {sorted(KIND_SCHEMAS)}")
    replicates = raw["replicates"]
    if not isinstance(replicates, int) or isinstance(replicates, bool) or replicates < 1:
        raise ConfigError(f"replicates: expected a positive integer, got {replicates!r}")
    seed = raw["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed: expected an integer, got {seed!r}")
    raw_params = raw.get("params") or {}
    if not isinstance(raw_params, dict):
        raise ConfigError("params: must be a mapping")
    required, optional = KIND_SCHEMAS[kind]
    unknown = set(raw_params) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"params: unknown fields for kind {kind!r}: {sorted(unknown)}")
    params = {}
    for name, cast in required.items():
        if name not in raw_params:
            raise ConfigError(f"params.{name}: required for kind {kind!r}")
        try:
            params[name] = cast(raw_params[name])
        except ConfigError as exc:
            raise ConfigError(f"params.{name}: {exc}") from None
    for name, (cast, default) in optional.items():
        if name in raw_params:
            try:
                params[name] = cast(raw_params[name])
            except ConfigError as exc:
                raise ConfigError(f"params.{name}: {exc}") from None
        else:
            params[name] = default
    return ExperimentConfig(
        kind=kind,
        replicates=replicates,
        seed=seed,
        output_dir=Path(str(raw["output_dir"])),
        params=params,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from None
    return validate_config(raw)


def _axis_mixture(delta: float, sigma: float, r: int, family: str = "isotropic-gaussian",
                  base: float = 0.0) -> MixtureSpec:
    """Two balanced components separated by delta along the first axis."""
    centers = np.full((2, r), base)
    centers[1, 0] += delta
    return MixtureSpec(centers=centers, sigma=sigma, noise_family=family)


def _lloyd_record(traj) -> dict:
    term = traj.terminal
    return {
        "mis_rate": term.mis_rate,
        "cluster_rate": term.cluster_rate,
        "center_err": term.center_err,
        "iterations": traj.iterations_run,
    }


def _embed_cluster_record(points, labels, k, restarts, seed) -> dict:
    """Best-of-restarts k-means on an embedding, scored against true labels."""
    assign, _, _, iters = best_kmeans(points, k, restarts, seed)
    mis_rate, perm = misclustering_rate(assign, labels, k)
    cluster_rate = clusterwise_rate(assign, labels, k, perm)
    return {
        "mis_rate": mis_rate,
        "cluster_rate": cluster_rate,
        "iterations": iters,
        "exact_recovery": mis_rate == 0.0,
        "_assignments": assign,
    }


def _run_mixture_lloyd(p: dict, seed: int) -> dict:
    spec = _axis_mixture(p["delta"], p["sigma"], p["r"], p["noise_family"])
    sample = sample_mixture(spec, p["n"], seed)
    if p["eps"] > 0:
        sample = apply_perturbation(sample, p["eps"], p["eps_mechanism"], derive_seed(seed, 1))
    if p["init"] == "oracle":
        init = oracle_init(spec, p["init_offset"], derive_seed(seed, 2))
    elif p["init"] == "kmeanspp":
        init, _ = kmeanspp_seed(sample.observed, 2, derive_seed(seed, 2))
    else:
        raise ConfigError(f"params.init: unknown initializer {p['init']!r}")
    traj = run_lloyd(sample, init, LloydConfig(max_iters=p["max_iters"]))
    record = _lloyd_record(traj)
    if p["delta"] > 0:
        bound, _ = misclustering_bound(p["delta"], p["sigma"], p["eps"])
        record["bound"] = bound
        record["bound_satisfied"] = record["mis_rate"] <= bound
    record["exact_recovery"] = record["mis_rate"] == 0.0
    record["_trajectory"] = traj
    record["_sample"] = sample
    return record


def _run_kmeanspp_separation(p: dict, seed: int) -> dict:
    spec = _axis_mixture(p["delta"], p["sigma"], p["r"])
    sample = sample_mixture(spec, p["n"], seed)
    _, idx = kmeanspp_seed(sample.observed, 2, derive_seed(seed, 1))
    return {
        "seed_separated": seed_separation_event(idx, sample.labels),
        "seed_indices": ";".join(str(int(i)) for i in idx),
    }


def _run_sigclust(p: dict, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    n, r = p["n"], p["r"]
    y = p["sigma"] * rng.standard_normal((n, r))
    if p["a"] > 0:
        signs = rng.integers(0, 2, n) * 2 - 1
        y[:, 0] += signs * p["a"]
    labels = two_means_partition(y, p["restarts"], derive_seed(seed, 1))
    report = sigclust_test(
        y, partition_from_labels(labels), p["n_sim"], derive_seed(seed, 2), p["restarts"]
    )
    return {"p_value": report.p_value, "_report": report}


def _resolve_rho(p: dict) -> float:
    if p["rho_n"] is not None:
        return p["rho_n"]
    return p["rho_multiplier"] * math.log(p["n"]) / p["n"]


def _run_sbm(p: dict, seed: int, alpha_n: float = 0.0, beta_n: float = 0.0) -> dict:
    spec = emb.SbmSpec(n=p["n"], b0=p["b0"], rho_n=_resolve_rho(p))
    graph = emb.gen_sbm(spec, seed)
    if alpha_n > 0 or beta_n > 0:
        graph = emb.gen_noisy_sbm(graph, alpha_n, beta_n, derive_seed(seed, 1))
    points = emb.adjacency_spectral_embedding(graph, p["k"])
    record = _embed_cluster_record(points, graph.labels, p["k"], p["restarts"], derive_seed(seed, 2))
    record["_graph"] = graph
    record["_points"] = points
    return record


def _run_noisy_sbm(p: dict, seed: int) -> dict:
    return _run_sbm(p, seed, alpha_n=p["alpha_n"], beta_n=p["beta_n"])


def _run_gram_spectral(p: dict, seed: int) -> dict:
    # Centers offset from the origin so the Gram matrix keeps its signal
    # after hollowing.
    spec = _axis_mixture(p["delta"], p["sigma"], p["p"], base=p["center_norm"])
    sample = sample_mixture(spec, p["n"], seed)
    points = emb.hollowed_gram_embedding(sample.observed, 2)
    record = _embed_cluster_record(points, sample.labels, 2, p["restarts"], derive_seed(seed, 1))
    record["_points"] = points
    return record


def _run_mds_cluster(p: dict, seed: int) -> dict:
    spec = _axis_mixture(p["delta"], p["sigma"], p["p"])
    sample = sample_mixture(spec, p["n"], seed)
    points = emb.cmds_embedding(points=sample.observed, r_embed=p["r_embed"], hollowed=True)
    record = _embed_cluster_record(points, sample.labels, 2, p["restarts"], derive_seed(seed, 1))
    record["_points"] = points
    return record


def _run_rdpg(p: dict, seed: int) -> dict:
    centers = np.asarray(p["latent_centers"], dtype=float)
    # Bounded latent noise keeps all pairwise inner products inside [0, 1].
    spec = MixtureSpec(centers=centers, sigma=p["latent_sigma"], noise_family="bounded-uniform")
    sample = sample_mixture(spec, p["n"], seed)
    graph = emb.gen_rdpg(sample.observed, derive_seed(seed, 1))
    r = centers.shape[1]
    points = emb.ase_scaled(graph, r)
    record = _embed_cluster_record(
        points, sample.labels, centers.shape[0], p["restarts"], derive_seed(seed, 2)
    )
    record["_graph"] = graph
    record["_points"] = points
    return record


def _run_dfm(p: dict, seed: int) -> dict:
    spec = _axis_mixture(p["delta"], p["sigma_loading"], p["r"])
    loading_sample = sample_mixture(spec, p["n"], seed)
    series = emb.gen_dfm(
        loading_sample.observed,
        p["t_len"],
        factor_model=p["factor_model"],
        noise_variances=p["noise_variance"],
        seed=derive_seed(seed, 1),
        phi=p["phi"],
    )
    loadings_hat = emb.pca_loadings(series, p["r"])
    record = _embed_cluster_record(
        loadings_hat, loading_sample.labels, 2, p["restarts"], derive_seed(seed, 2)
    )
    record["_points"] = loadings_hat
    return record


FIGURE1_DELTA = 2.0 * math.sqrt(2.0)


def figure1_geometry() -> tuple[np.ndarray, np.ndarray]:
    """(true centers, adversarial init) for the bad-initialization scenario.

    Four well-separated clusters at the corners of a square; the adversarial
    initializer puts one center on each of the two vertical-pair midpoints
    (merging each pair) and parks the remaining two centers far outside the
    data, where they never capture a point.
    """
    s = math.sqrt(2.0)
    centers = np.array([[s, s], [s, -s], [-s, s], [-s, -s]])
    adversarial = np.array([[s, 0.0], [-s, 0.0], [0.0, 10.0], [0.0, -10.0]])
    return centers, adversarial


def _run_figure1(p: dict, seed: int) -> dict:
    n = p["n"]
    if n % 4 != 0:
        raise ConfigError("params.n: figure1 needs n divisible by 4")
    centers, adversarial = figure1_geometry()
    labels = np.repeat(np.arange(4), n // 4)
    clean = centers[labels]
    zeros = np.zeros_like(clean)
    sample = LabeledSample(
        clean=clean, observed=clean.copy(), labels=labels, noise=zeros,
        perturbation=zeros.copy(), eps_bound=0.0,
    )
    sample = apply_perturbation(sample, p["eps"], p["eps_mechanism"], derive_seed(seed, 1))
    config = LloydConfig()
    adv_traj = run_lloyd(sample, adversarial, config)
    oracle_traj = run_lloyd(sample, centers, config)
    bound, _ = misclustering_bound(FIGURE1_DELTA, 0.0, p["eps"])
    record = _lloyd_record(adv_traj)
    record.update(
        {
            "bound": bound,
            "bound_satisfied": record["mis_rate"] <= bound,
            "oracle_mis_rate": oracle_traj.terminal.mis_rate,
            "exact_recovery": record["mis_rate"] == 0.0,
            "_sample": sample,
            "_trajectory": adv_traj,
            "_oracle_trajectory": oracle_traj,
        }
    )
    return record


KIND_RUNNERS = {
    "mixture-lloyd": _run_mixture_lloyd,
    "kmeanspp-separation": _run_kmeanspp_separation,
    "sigclust-size-power": _run_sigclust,
    "sbm-recovery": _run_sbm,
    "noisy-sbm": _run_noisy_sbm,
    "gram-spectral": _run_gram_spectral,
    "mds-cluster": _run_mds_cluster,
    "rdpg": _run_rdpg,
    "dfm": _run_dfm,
    "figure1": _run_figure1,
}


def _format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return "" if math.isnan(f) else repr(f)
    return str(v)


def _write_records(path: Path, rows: list[dict], lead_cols: tuple[str, ...] = ()) -> None:
    cols = tuple(lead_cols) + RECORD_COLUMNS
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(_format_value(row.get(c)) for c in cols) + "\n")


def _write_timing(path: Path, timings: list[tuple]) -> None:
    with open(path, "w") as fh:
        fh.write("replicate,wall_time_s\n")
        for rep, dt in timings:
            fh.write(f"{rep},{dt:.6f}\n")


def _frequency(rows: list[dict], key: str) -> float | None:
    vals = [r[key] for r in rows if r.get(key) is not None]
    if not vals:
        return None
    return sum(bool(v) for v in vals) / len(vals)


def _mean(rows: list[dict], key: str) -> float | None:
    vals = [r[key] for r in rows if r.get(key) is not None]
    if not vals:
        return None
    return float(np.mean(vals))


def summarize(config: ExperimentConfig, rows: list[dict], artifacts: dict | None = None) -> str:
    """Aggregate per-kind results, comparing empirical rates to the bound formulas."""
    p = config.params
    lines = [
        f"kind: {config.kind}",
        f"replicates: {config.replicates}",
        f"base_seed: {config.seed}",
    ]
    mean_a = _mean(rows, "mis_rate")
    if mean_a is not None:
        lines.append(f"mean_terminal_a_s: {mean_a:.6g}")
        lines.append(f"max_terminal_a_s: {max(r['mis_rate'] for r in rows if r.get('mis_rate') is not None):.6g}")
    sat = _frequency(rows, "bound_satisfied")
    if sat is not None and rows and rows[0].get("bound") is not None:
        lines.append(f"bound_value: {rows[0]['bound']:.6g}")
        lines.append(f"bound_satisfied_frequency: {sat:.4f}")
        if config.kind == "mixture-lloyd":
            _, failure = misclustering_bound(p["delta"], p["sigma"], p["eps"])
            lines.append(f"theoretical_floor_1_minus_delta: {1.0 - failure(p['n']):.6g}")
    rec = _frequency(rows, "exact_recovery")
    if rec is not None:
        lines.append(f"exact_recovery_frequency: {rec:.4f}")
    sep = _frequency(rows, "seed_separated")
    if sep is not None:
        lines.append(f"seed_separation_frequency: {sep:.4f}")
    pvals = [r["p_value"] for r in rows if r.get("p_value") is not None]
    if pvals:
        level = p.get("level", 0.05)
        rate = float(np.mean([v <= level for v in pvals]))
        lines.append(f"rejection_rate_at_{level:g}: {rate:.4f}")
        lines.append(f"mean_p_value: {float(np.mean(pvals)):.4f}")
        if artifacts and "_report" in artifacts:
            first = artifacts["_report"]
            lines.append(f"first_replicate_ci_observed: {first.ci_observed:.6g}")
            lines.append(f"first_replicate_sigma_hat: {first.sigma_hat:.6g}")
            lines.append(f"first_replicate_p_value: {first.p_value:.6g}")
    oracle = _mean(rows, "oracle_mis_rate")
    if oracle is not None:
        lines.append(f"mean_oracle_a_s: {oracle:.6g}")
        worst_adv = min(r["mis_rate"] for r in rows)
        lines.append(f"min_adversarial_a_s: {worst_adv:.6g}")
    if config.kind == "figure1":
        lines.extend(_figure1_diagnostics(p))
    if config.kind == "rdpg" and artifacts and "_graph" in artifacts:
        lines.extend(_rdpg_diagnostics(artifacts["_graph"], p))
    return "\n".join(lines) + "\n"


def _figure1_diagnostics(p: dict) -> list[str]:
    centers, _ = figure1_geometry()
    spec = MixtureSpec(centers=centers, sigma=0.0)
    labels = np.repeat(np.arange(4), 1)
    f = model_functionals(spec, labels, p["eps"], n=4)
    status = check_initial_condition(0.0, 0.0, f, 0.0)
    return [
        f"init_condition_at_zero_error: {status}",
        f"snr_perturb: {f.snr_perturb:.6g}",
    ]


def _rdpg_diagnostics(graph, p: dict) -> list[str]:
    r = np.asarray(p["latent_centers"]).shape[1]
    d_max, gamma = emb.rdpg_gap_params(graph.expected, r)
    return [
        f"rdpg_max_expected_degree: {d_max:.6g}",
        f"rdpg_gamma: {gamma:.6g}",
        "rdpg_tail_constant: 680 (reported, not verified)",
    ]


def run_experiment(
    config: ExperimentConfig, figures: bool = False, output_dir: Path | None = None
) -> tuple[list[dict], str]:
    """Run all replicates, write records.csv / summary.txt / timing.csv.

    Returns the public record rows and the summary text.  ``output_dir``
    overrides the config's destination (the CLI uses this for the
    environment-variable override).
    """
    runner = KIND_RUNNERS[config.kind]
    out = Path(output_dir) if output_dir is not None else config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    rows, timings, artifacts = [], [], None
    for i in range(config.replicates):
        rep_seed = derive_seed(config.seed, i)
        t0 = time.perf_counter()
        record = runner(config.params, rep_seed)
        timings.append((i, time.perf_counter() - t0))
        if i == 0:
            artifacts = {k: v for k, v in record.items() if k.startswith("_")}
        record = {k: v for k, v in record.items() if not k.startswith("_")}
        record["replicate"] = i
        record["seed"] = rep_seed
        rows.append(record)
    summary = summarize(config, rows, artifacts)
    _write_records(out / RECORDS_FILE, rows)
    _write_timing(out / TIMING_FILE, timings)
    (out / SUMMARY_FILE).write_text(summary)
    if figures:
        from . import figures as figs

        figs.render_run_figures(config, rows, artifacts, out / "figures")
    return rows, summary


def sweep(
    config: ExperimentConfig,
    param: str,
    values: list[float],
    figures: bool = False,
    output_dir: Path | None = None,
) -> list[dict]:
    """Run the experiment once per parameter value; emit one long-format CSV."""
    if not values:
        raise ConfigError("sweep values list is empty")
    required, optional = KIND_SCHEMAS[config.kind]
    if param not in required and param not in optional:
        raise ConfigError(f"sweep parameter {param!r} is not a field of kind {config.kind!r}")
    current = config.params.get(param)
    if current is not None and not isinstance(current, (int, float)):
        raise ConfigError(f"sweep parameter {param!r} is not numeric")
    out = Path(output_dir) if output_dir is not None else config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    long_rows = []
    summaries = []
    for value in values:
        sub = config.with_param(param, value)
        sub_rows, _ = run_experiment(sub, figures=False, output_dir=out / f"{param}={value:g}")
        for row in sub_rows:
            long_rows.append(dict(row, param=param, value=value))
        summaries.append((value, sub_rows))
    _write_records(out / SWEEP_FILE, long_rows, lead_cols=("param", "value"))
    lines = [f"sweep over {param}: {[float(v) for v in values]}"]
    for value, sub_rows in summaries:
        parts = [f"{param}={value:g}"]
        for key, label in (
            ("exact_recovery", "recovery"),
            ("seed_separated", "separation"),
            ("bound_satisfied", "bound_ok"),
        ):
            freq = _frequency(sub_rows, key)
            if freq is not None:
                parts.append(f"{label}={freq:.4f}")
        mean_a = _mean(sub_rows, "mis_rate")
        if mean_a is not None:
            parts.append(f"mean_a_s={mean_a:.6g}")
        lines.append("  ".join(parts))
    (out / SUMMARY_FILE).write_text("\n".join(lines) + "\n")
    if figures:
        from . import figures as figs

        figs.render_sweep_figure(config, param, values, long_rows, out / "figures")
    return long_rows
