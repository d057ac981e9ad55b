"""Initial decay-rate extraction from sampled curves.

The exponential form holds only inside the linear-response window, so the
fit window keeps the drop of Re<X_c> above 1 - eps_lin (default 5%); the
log of the real part is fitted by weighted least squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qtoric.engines.curve import DecayCurve


@dataclass(frozen=True)
class RateFit:
    gamma: float
    uncertainty: float
    window: tuple[float, float]
    n_points: int


def fit_initial_rate(curve: DecayCurve, eps_lin: float = 0.05) -> RateFit:
    t = curve.times
    y = curve.values.real
    y0 = y[np.argmin(t)] if len(t) else np.nan
    if not np.isfinite(y0) or abs(y0) < 1e-12:
        raise ValueError("curve has no usable value near t = 0")
    yn = y / y0
    sel = (t > 0) & (yn >= 1.0 - eps_lin)
    while True:
        idx = np.flatnonzero(sel)
        if len(idx) < 4:
            raise ValueError(
                f"fewer than 4 usable points in the linear window (have {len(idx)})"
            )
        if np.all(yn[idx] > 0):
            break
        sel &= yn > 0  # shrink away nonpositive values
    tt = t[idx]
    ly = np.log(yn[idx])
    if curve.stderr is not None and np.all(curve.stderr[idx] > 0):
        w = (np.abs(y[idx]) / (curve.stderr[idx] * abs(y0))) ** 2  # 1/sigma_log^2
    else:
        w = np.ones_like(tt)
    a = np.vstack([tt, np.ones_like(tt)]).T
    waw = a.T * w
    cov = np.linalg.inv(waw @ a)
    coef = cov @ (waw @ ly)
    gamma = -coef[0]
    if curve.stderr is None:
        resid = ly - a @ coef
        dof = max(len(tt) - 2, 1)
        scale = float(resid @ (w * resid)) / dof
        err = float(np.sqrt(cov[0, 0] * max(scale, 1e-30)))
    else:
        err = float(np.sqrt(cov[0, 0]))
    return RateFit(
        gamma=float(gamma),
        uncertainty=err,
        window=(float(tt.min()), float(tt.max())),
        n_points=len(tt),
    )
