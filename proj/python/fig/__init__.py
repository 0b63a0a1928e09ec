"""Noise-resilient time-series distances and diffusion embeddings."""

from ._core import (
    FigError,
    dig_distance_matrix,
    embed,
    euclidean_distance_matrix,
    fig_distance_matrix,
    fourier_features,
    mantel,
    simulate_sphere_walk,
    simulate_staged_surrogate,
)

__all__ = [
    "FigError",
    "dig_distance_matrix",
    "embed",
    "euclidean_distance_matrix",
    "fig_distance_matrix",
    "fourier_features",
    "mantel",
    "simulate_sphere_walk",
    "simulate_staged_surrogate",
]
