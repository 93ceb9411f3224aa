"""Concept-drift detection and trust scoring engine (C++ core)."""

from ._core import (
    Autoencoder,
    Dataset,
    GBDTModel,
    TransformerAutoencoder,
    attention,
    build_histogram,
    fit_gbdt,
    generate_dataset,
    jsd,
    kl_divergence,
    psi,
    run_monitoring,
    smote_resample,
    softmax_margin,
    train_autoencoder,
    train_transformer_ae,
    trust_score,
)

__all__ = [
    "Autoencoder",
    "Dataset",
    "GBDTModel",
    "TransformerAutoencoder",
    "attention",
    "build_histogram",
    "fit_gbdt",
    "generate_dataset",
    "jsd",
    "kl_divergence",
    "psi",
    "run_monitoring",
    "smote_resample",
    "softmax_margin",
    "train_autoencoder",
    "train_transformer_ae",
    "trust_score",
]
