"""Named parameter storage with gradient accumulators."""

from __future__ import annotations

from typing import Iterator

import numpy as np


class ParamSet:
    """Ordered ``name -> (value, grad)`` map; gradients always match value shapes."""

    def __init__(self):
        self.values: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}

    def add(self, name: str, value: np.ndarray):
        if name in self.values:
            raise KeyError(f"duplicate parameter name {name!r}")
        self.values[name] = value
        self.grads[name] = np.zeros_like(value)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[name]

    def __setitem__(self, name: str, value: np.ndarray):
        if name not in self.values:
            raise KeyError(name)
        if value.shape != self.values[name].shape:
            raise ValueError(
                f"shape mismatch for {name!r}: {value.shape} vs {self.values[name].shape}"
            )
        self.values[name] = value

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def names(self) -> list[str]:
        return list(self.values)

    def items(self):
        return self.values.items()

    def zero_grad(self):
        for g in self.grads.values():
            g.fill(0)

    def accumulate(self, name: str, grad: np.ndarray):
        self.grads[name] += grad

    def astype(self, dtype) -> ParamSet:
        out = ParamSet()
        for name, v in self.values.items():
            out.add(name, v.astype(dtype, copy=True))
        return out

    def copy(self) -> ParamSet:
        return self.astype(next(iter(self.values.values())).dtype) if self.values else ParamSet()

    def norms(self) -> dict[str, float]:
        return {name: float(np.linalg.norm(v)) for name, v in self.values.items()}

    def n_parameters(self) -> int:
        return sum(v.size for v in self.values.values())


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, int], dtype=np.float32) -> np.ndarray:
    limit = np.sqrt(6.0 / (shape[0] + shape[1]))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


def uniform(rng: np.random.Generator, shape, scale: float = 0.05, dtype=np.float32) -> np.ndarray:
    return rng.uniform(-scale, scale, size=shape).astype(dtype)
