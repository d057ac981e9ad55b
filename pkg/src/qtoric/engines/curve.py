"""Sampled decay curves of the order parameter."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class DecayCurve:
    """<X_c(t)> samples with optional Monte Carlo errors and run metadata.

    Values are complex: phase weights can rotate the estimate at intermediate
    times even though the t = 0 slope is real.  `stderr` bounds the error of
    either quadrature (sqrt((Var Re + Var Im)/trials) for MC engines; None
    for deterministic engines).
    """

    times: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have matching shapes")

    def rows(self) -> list[tuple[float, float, float, float]]:
        err = self.stderr if self.stderr is not None else np.zeros_like(self.times)
        return [
            (float(t), float(v.real), float(v.imag), float(e))
            for t, v, e in zip(self.times, self.values, err)
        ]


def time_grid(start: float, stop: float, count: int, spacing: str = "linear") -> np.ndarray:
    if count < 1:
        raise ValueError("need at least one time point")
    if spacing == "linear":
        return np.linspace(start, stop, count)
    if spacing == "log":
        if start <= 0:
            raise ValueError("log spacing needs start > 0")
        return np.geomspace(start, stop, count)
    raise ValueError("spacing must be 'linear' or 'log'")
