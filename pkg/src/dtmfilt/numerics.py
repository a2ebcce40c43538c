"""Stable p-norm style primitives shared by the filtration and solver code.

The exponent parameter is a plain float: any finite value >= 1, or
``math.inf``.  All helpers accept scalars or numpy arrays elementwise.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError

INF = math.inf


def validate_exponent(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ParameterError(f"exponent p must satisfy p >= 1 (or inf), got {p!r}")
    return p


def pnorm_pair(a, b, p: float):
    """(a^p + b^p)^(1/p) for a, b >= 0, without overflow for large p."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if p == INF:
        out = np.maximum(a, b)
        return float(out) if out.ndim == 0 else out
    if p == 1.0:
        out = a + b
        return float(out) if out.ndim == 0 else out
    if p == 2.0:
        out = np.hypot(a, b)
        return float(out) if out.ndim == 0 else out
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(hi > 0.0, lo / np.where(hi > 0.0, hi, 1.0), 0.0)
        out = hi * np.exp(np.log1p(ratio**p) / p)
    out = np.where(hi > 0.0, out, 0.0)
    return float(out) if out.ndim == 0 else out


def pdiff(t, f, p: float):
    """(t^p - f^p)^(1/p) for t >= f >= 0 (the growing-ball radius scale)."""
    t = np.asarray(t, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if p == INF:
        out = t + 0.0
        return float(out) if out.ndim == 0 else out
    if p == 1.0:
        out = t - f
        return float(out) if out.ndim == 0 else out
    if p == 2.0:
        out = np.sqrt(np.maximum((t - f) * (t + f), 0.0))
        return float(out) if out.ndim == 0 else out
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(t > 0.0, f / np.where(t > 0.0, t, 1.0), 0.0)
        ratio = np.minimum(ratio, 1.0)
        rp = ratio**p
        out = np.where(rp < 1.0, t * np.exp(np.log1p(-rp) / p), 0.0)
    out = np.where(t > 0.0, out, 0.0)
    return float(out) if out.ndim == 0 else out


def pabsdiff(a, b, p: float):
    """|a^p - b^p|^(1/p) for a, b >= 0 (edge branch threshold)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if p == INF:
        out = np.maximum(a, b)
        return float(out) if out.ndim == 0 else out
    return pdiff(np.maximum(a, b), np.minimum(a, b), p)
