"""Point clouds, discrete measures, synthetic generators, and CSV ingestion.

Points are rows of a read-only float64 array of shape (n, d).  Row order is
meaningful: indices are the stable identifiers used by every downstream
module, and coincident points are never deduplicated (a measure may put
separate mass atoms at the same location).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ParameterError, ParseError

MASS_SUM_TOL = 1e-12


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError("points must form a nonempty (n, d) array")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("points must have finite coordinates")
    return arr


@dataclass(frozen=True)
class PointCloud:
    """Ordered list of points in R^d.

    The coordinate array is frozen after construction so instances can be
    shared freely across threads.
    """

    points: np.ndarray

    def __post_init__(self):
        arr = _as_points(self.points)
        arr.flags.writeable = False
        object.__setattr__(self, "points", arr)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point masses: positive weights on ``support`` summing to 1."""

    support: PointCloud
    masses: np.ndarray

    def __post_init__(self):
        if not isinstance(self.support, PointCloud):
            object.__setattr__(self, "support", PointCloud(self.support))
        masses = np.asarray(self.masses, dtype=np.float64).reshape(-1)
        if masses.shape[0] != len(self.support):
            raise ParameterError("one mass per support point required")
        if not np.all(np.isfinite(masses)) or np.any(masses <= 0.0):
            raise ParameterError("masses must be positive and finite")
        if abs(masses.sum() - 1.0) > MASS_SUM_TOL:
            raise ParameterError(
                f"masses must sum to 1 within {MASS_SUM_TOL}, got {masses.sum()!r}"
            )
        masses.flags.writeable = False
        object.__setattr__(self, "masses", masses)

    @classmethod
    def uniform(cls, cloud: PointCloud | np.ndarray) -> "DiscreteMeasure":
        if not isinstance(cloud, PointCloud):
            cloud = PointCloud(cloud)
        n = len(cloud)
        return cls(cloud, np.full(n, 1.0 / n))

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.masses == self.masses[0]))

    @property
    def dim(self) -> int:
        return self.support.dim

    def __len__(self) -> int:
        return len(self.support)


def load_points(path, weighted: bool = False):
    """Parse a point CSV file.

    One point per line, comma-separated decimal floats, no header; UTF-8
    with LF or CRLF line endings.  With ``weighted=True`` the last column
    is a positive mass and the result is a :class:`DiscreteMeasure` whose
    masses are normalized to sum to 1; otherwise a :class:`PointCloud`.

    Raises :class:`ParseError` naming the first offending line on ragged
    rows, non-numeric fields, nonpositive masses, or an empty file.
    """
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        raw_lines = fh.read().splitlines()

    rows = []
    arity = None
    for lineno, line in enumerate(raw_lines, start=1):
        if line.strip() == "":
            if lineno == len(raw_lines):
                continue  # trailing newline
            raise ParseError(f"{path}: line {lineno}: blank line")
        fields = line.split(",")
        if arity is None:
            arity = len(fields)
        elif len(fields) != arity:
            raise ParseError(
                f"{path}: line {lineno}: expected {arity} fields, got {len(fields)}"
            )
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"{path}: line {lineno}: non-numeric field") from None
        if not all(np.isfinite(row)):
            raise ParseError(f"{path}: line {lineno}: non-finite value")
        rows.append(row)

    if not rows:
        raise ParseError(f"{path}: line 1: empty file")

    data = np.array(rows, dtype=np.float64)
    if not weighted:
        return PointCloud(data)

    if data.shape[1] < 2:
        raise ParseError(f"{path}: line 1: weighted file needs >= 2 columns")
    masses = data[:, -1]
    for i, mass in enumerate(masses, start=1):
        if mass <= 0.0:
            raise ParseError(f"{path}: line {i}: nonpositive mass {mass!r}")
    return DiscreteMeasure(PointCloud(data[:, :-1]), masses / masses.sum())


def save_points(path, cloud: PointCloud, masses=None) -> None:
    """Write a point CSV (inverse of :func:`load_points`)."""
    pts = cloud.points if isinstance(cloud, PointCloud) else _as_points(cloud)
    cols = pts if masses is None else np.column_stack([pts, masses])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in cols:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def pairwise_distances(cloud: PointCloud | np.ndarray) -> np.ndarray:
    """Symmetric Euclidean distance matrix with zero diagonal."""
    pts = cloud.points if isinstance(cloud, PointCloud) else _as_points(cloud)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(dist, 0.0)
    return dist


def cross_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def hausdorff(x: PointCloud, y: PointCloud) -> float:
    """Hausdorff distance between two nonempty clouds of equal dimension."""
    xp = x.points if isinstance(x, PointCloud) else _as_points(x)
    yp = y.points if isinstance(y, PointCloud) else _as_points(y)
    if xp.shape[1] != yp.shape[1]:
        raise DimensionMismatchError(
            f"dimension mismatch: {xp.shape[1]} vs {yp.shape[1]}"
        )
    d = cross_distances(xp, yp)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def delay_embedding(samples, dim: int, stride: int = 1) -> PointCloud:
    """Sliding-window embedding of a scalar series into R^dim.

    Point ``k`` is ``(s_k, s_{k+stride}, ..., s_{k+(dim-1)*stride})``; the
    output has exactly ``len(samples) - (dim-1)*stride`` points.
    """
    s = np.asarray(samples, dtype=np.float64).reshape(-1)
    if s.shape[0] < 1 or not np.all(np.isfinite(s)):
        raise ParameterError("series must be nonempty with finite samples")
    if dim < 1 or stride < 1:
        raise ParameterError("dim and stride must be positive integers")
    count = s.shape[0] - (dim - 1) * stride
    if count < 1:
        raise ParameterError(
            f"series of length {s.shape[0]} too short for dim={dim}, stride={stride}"
        )
    idx = np.arange(count)[:, None] + stride * np.arange(dim)[None, :]
    return PointCloud(s[idx])


def synth(kind: str, n: int, outliers: int = 0, seed: int = 0) -> PointCloud:
    """Seeded synthetic clouds (PCG64 generator, reproducible bit-for-bit).

    Kinds: ``circle`` (n uniform points on the unit circle), ``square``
    (n uniform points in [-1,1]^2), ``circle-with-outliers`` (the circle
    sample followed by ``outliers`` square points, drawn from the same
    generator stream so the first n points equal ``synth("circle", n, seed)``).
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    if kind == "circle":
        theta = rng.random(n) * (2.0 * np.pi)
        return PointCloud(np.column_stack([np.cos(theta), np.sin(theta)]))
    if kind == "square":
        return PointCloud(rng.random((n, 2)) * 2.0 - 1.0)
    if kind == "circle-with-outliers":
        theta = rng.random(n) * (2.0 * np.pi)
        circle = np.column_stack([np.cos(theta), np.sin(theta)])
        extra = rng.random((outliers, 2)) * 2.0 - 1.0 if outliers > 0 else np.empty((0, 2))
        return PointCloud(np.vstack([circle, extra]))
    raise ParameterError(f"unknown synthetic kind {kind!r}")
