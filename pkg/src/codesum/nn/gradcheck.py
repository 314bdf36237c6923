"""Central finite-difference gradient checking."""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np


def numeric_gradient(
    f: Callable[[], float], x: np.ndarray, eps: float = 1e-6, indices=None
) -> np.ndarray:
    """Central differences of ``f`` w.r.t. ``x`` (perturbed in place and restored).

    With ``indices`` only those flat positions are evaluated; the rest stay 0.
    """
    grad = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size) if indices is None else indices:
        old = flat[i]
        flat[i] = old + eps
        plus = f()
        flat[i] = old - eps
        minus = f()
        flat[i] = old
        gflat[i] = (plus - minus) / (2 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-10) -> float:
    """Largest absolute deviation scaled by the tensor's largest gradient magnitude."""
    scale = max(np.abs(analytic).max(initial=0.0), np.abs(numeric).max(initial=0.0), floor)
    return float(np.abs(analytic - numeric).max(initial=0.0) / scale)


def grad_check(
    loss_fn: Callable[[], float],
    params: Mapping[str, np.ndarray],
    analytic: Mapping[str, np.ndarray],
    eps: float = 1e-6,
    max_entries: int | None = None,
    seed: int = 0,
) -> dict[str, float]:
    """Relative error per parameter between analytic and central-difference gradients.

    ``loss_fn`` must read the arrays in ``params`` (they are perturbed in place).
    ``max_entries`` caps how many entries of each tensor are probed.
    """
    rng = np.random.default_rng(seed)
    errors = {}
    for name, value in params.items():
        if value.dtype != np.float64:
            raise TypeError(f"gradient checks need float64 parameters, {name!r} is {value.dtype}")
        idx = None
        if max_entries is not None and value.size > max_entries:
            idx = np.sort(rng.choice(value.size, size=max_entries, replace=False))
        num = numeric_gradient(loss_fn, value, eps, idx)
        ana = np.asarray(analytic[name], dtype=np.float64)
        if idx is not None:
            ana = ana.reshape(-1)[idx]
            num = num.reshape(-1)[idx]
        errors[name] = relative_error(ana, num)
    return errors


def max_relative_error(errors: Mapping[str, float]) -> float:
    return max(errors.values(), default=0.0)
