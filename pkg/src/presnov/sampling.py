"""Seeded isotropic sampling of directions, spheres, and balls.

All randomness comes from numpy's Philox bit generator (counter-based),
so identical seeds reproduce identical samples bit for bit regardless of
how many points other code has drawn.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "default_direction_count",
    "unit_directions",
    "sphere_points",
    "ball_points",
]


def _generator(seed: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seeds must be non-negative integers")
    return np.random.Generator(np.random.Philox(seed))


def default_direction_count(dimension: int) -> int:
    return 256 if dimension <= 3 else 1024


def _gaussian_directions(dimension, count, rng):
    vecs = rng.standard_normal((count, dimension))
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    # A zero draw is essentially impossible; fall back to the first axis.
    bad = norms[:, 0] < 1e-12
    if bad.any():
        vecs[bad] = 0.0
        vecs[bad, 0] = 1.0
        norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs / norms


def unit_directions(dimension: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic isotropic unit vectors, shape (count, dimension).

    In the plane, half of the directions come from an equispaced angular
    grid (so symmetric features such as eigendirections are hit exactly)
    and the rest are normalized Gaussian draws; in higher dimensions all
    directions are normalized Gaussian draws.
    """
    if count < 1:
        raise ValueError("direction count must be at least 1")
    rng = _generator(seed)
    if dimension == 2 and count >= 2:
        k = count // 2
        angles = 2.0 * np.pi * np.arange(k) / k
        grid = np.column_stack((np.cos(angles), np.sin(angles)))
        rest = _gaussian_directions(2, count - k, rng) if count > k else np.zeros((0, 2))
        return np.vstack((grid, rest))
    return _gaussian_directions(dimension, count, rng)


def sphere_points(dimension: int, count: int, radius: float, seed: int = 0) -> np.ndarray:
    return radius * unit_directions(dimension, count, seed)


def ball_points(dimension: int, count: int, radius: float, seed: int = 0) -> np.ndarray:
    """Uniform seeded points in the open ball of the given radius."""
    rng = _generator(seed)
    directions = _gaussian_directions(dimension, count, rng)
    radii = radius * rng.random(count) ** (1.0 / dimension)
    return directions * radii[:, None]
