"""Clustering under perturbation: Lloyd's algorithm, seeding, significance
testing, spectral pipelines, and a Monte Carlo bound-verification harness."""

from ._seeds import derive_seed
from .embeddings import (
    GraphInstance,
    SbmSpec,
    adjacency_spectral_embedding,
    ase_scaled,
    cmds_embedding,
    gen_dfm,
    gen_noisy_sbm,
    gen_rdpg,
    gen_sbm,
    graph_to_edge_csv,
    hollowed_gram_embedding,
    pca_loadings,
    points_to_csv,
    rdpg_gap_params,
)
from .experiments import ExperimentConfig, load_config, run_experiment, sweep
from .linalg import (
    EigenSystem,
    SymmetricMatrix,
    double_center,
    hollow,
    sym_eig,
    two_to_inf_norm,
)
from .lloyd import (
    LloydConfig,
    Trajectory,
    assign_step,
    best_kmeans,
    center_error,
    cluster_trajectory,
    clusterwise_rate,
    kmeans_cost,
    misclustering_rate,
    run_lloyd,
    update_step,
)
from .mixtures import (
    LabeledSample,
    MixtureSpec,
    ModelFunctionals,
    apply_perturbation,
    check_initial_condition,
    center_error_bound,
    model_functionals,
    sample_mixture,
    misclustering_bound,
)
from .seeding import seeding_tail_bound, kmeanspp_seed, oracle_init, chi_mean, seed_separation_event
from .sigclust import (
    SigClustReport,
    cluster_index,
    mad_sigma,
    mds_sigclust,
    null_eigenvalues,
    sigclust_test,
    two_means_partition,
)

__version__ = "0.1.0"
