"""Adaptive-moment (Adam) optimizer over a :class:`ParamSet`."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ParamSet


@dataclass
class Adam:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clipnorm: float | None = None

    def __post_init__(self):
        self.t = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def step(self, params: ParamSet):
        """Update every parameter in place from its accumulated gradient."""
        self.t += 1
        scale = 1.0
        if self.clipnorm is not None:
            total = np.sqrt(sum(float((g.astype(np.float64) ** 2).sum()) for g in params.grads.values()))
            if total > self.clipnorm:
                scale = self.clipnorm / total
        lr_t = self.lr * np.sqrt(1 - self.beta2**self.t) / (1 - self.beta1**self.t)
        for name in params:
            g = params.grads[name] * scale if scale != 1.0 else params.grads[name]
            if name not in self.m:
                self.m[name] = np.zeros_like(g)
                self.v[name] = np.zeros_like(g)
            m, v = self.m[name], self.v[name]
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            params.values[name] -= (lr_t * m / (np.sqrt(v) + self.eps)).astype(params.values[name].dtype)

    def state_dict(self) -> dict:
        return {"t": self.t, "m": self.m, "v": self.v}
