"""Shared Euclidean distance kernels.

Every distance in the package goes through :func:`sq_dists` so that cached
values, from-scratch recomputations, and coverage predicates all see
bit-identical numbers for identical inputs.  Do not add alternative distance
formulas (dot-product tricks and the like); they round differently and break
the exact-consistency checks built on top of these kernels.
"""

from __future__ import annotations

import numpy as np


def sq_dists(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from every row of ``points`` to ``center``."""
    diff = points - center
    return np.einsum("ij,ij->i", diff, diff)


def dists(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Euclidean distance from every row of ``points`` to ``center``."""
    return np.sqrt(sq_dists(points, center))


def sq_dist_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) squared distances; column j comes from the ``sq_dists`` kernel."""
    out = np.empty((points.shape[0], centers.shape[0]), dtype=np.float64)
    for j in range(centers.shape[0]):
        out[:, j] = sq_dists(points, centers[j])
    return out


def min_sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Squared distance from every point to its nearest center, O(n) memory."""
    best = sq_dists(points, centers[0])
    for j in range(1, centers.shape[0]):
        np.minimum(best, sq_dists(points, centers[j]), out=best)
    return best
