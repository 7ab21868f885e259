"""Input checks for the estimator interface."""

from __future__ import annotations

import numpy as np


def check_structures(X) -> list:
    """Structures are JSON-like records (or already parsed objects)."""
    if isinstance(X, (str, bytes, dict)):
        raise TypeError("expected a sequence of structures, got a single value")
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected a sequence of structures, got {type(X).__name__}") from None
    if not items:
        raise ValueError("at least one structure is required")
    return items


def check_labels(y, n: int) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"labels must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != n:
        raise ValueError(f"got {n} structures but {arr.shape[0]} labels")
    values = set(arr.tolist())
    if not values <= {0, 1, True, False}:
        raise ValueError(f"labels must be boolean or 0/1, got {sorted(map(repr, values))}")
    return arr.astype(bool)


def parse_all(evaluator, items: list) -> list:
    out = []
    for i, item in enumerate(items):
        if isinstance(item, dict):
            try:
                out.append(evaluator.parse_structure(item))
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"structure {i}: {exc}") from None
        else:
            out.append(item)
    return out
