"""Input validation helpers used across the package."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import InvalidInputError


def check_positive(name, value, strict=True):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise InvalidInputError(f"{name} must be a finite real number, got {value!r}")
    if strict and value <= 0:
        raise InvalidInputError(f"{name} must be > 0, got {value!r}")
    if not strict and value < 0:
        raise InvalidInputError(f"{name} must be >= 0, got {value!r}")
    return float(value)


def check_int(name, value, minimum=None):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_categorical(data, r):
    """Return ``data`` as a 1-d int64 array with every entry in ``0..r-1``."""
    arr = np.asarray(data)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidInputError(f"categorical data must be 1-d, got shape {arr.shape}")
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise InvalidInputError("categorical data must contain integer indices")
    elif arr.dtype.kind not in "iub":
        raise InvalidInputError(f"categorical data must be integer-valued, got dtype {arr.dtype}")
    arr = arr.astype(np.int64)
    if arr.min() < 0 or arr.max() >= r:
        raise InvalidInputError(f"categorical indices must lie in 0..{r - 1}")
    return arr


def check_real(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidInputError(f"real-valued data must be 1-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("real-valued data must be finite")
    return arr


def check_regression(data, m=None):
    """Validate an ``(X, y)`` pair; returns float arrays of shape (n, m) and (n,)."""
    try:
        X, y = data
    except (TypeError, ValueError):
        raise InvalidInputError("regression data must be an (X, y) pair") from None
    X = np.asarray(X, dtype=float)
    y = check_real(y)
    if X.ndim == 1 and m == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise InvalidInputError(f"design matrix must be 2-d, got shape {X.shape}")
    if X.shape[0] != y.shape[0]:
        raise InvalidInputError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
    if m is not None and X.shape[1] != m:
        raise InvalidInputError(f"design must have {m} columns, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("design matrix must be finite")
    return X, y
