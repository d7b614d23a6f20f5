"""Input checking helpers shared by the geometry modules."""

import numpy as np

from .exceptions import DimensionError, NonFiniteError


def as_vector(x, n=None, name="vector"):
    """Return ``x`` as a float array whose last axis has length ``n``.

    Leading batch axes are allowed. Raises on non-finite entries.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        raise DimensionError(f"{name} must be at least 1-dimensional")
    if n is not None and arr.shape[-1] != n:
        raise DimensionError(f"{name} has dimension {arr.shape[-1]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def as_matrix(m, shape=None, name="matrix"):
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or (shape is not None and arr.shape != tuple(shape)):
        raise DimensionError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def frozen(arr):
    """Read-only copy, so values stored on dataclasses stay immutable."""
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"non-finite {what}")
    return arr
