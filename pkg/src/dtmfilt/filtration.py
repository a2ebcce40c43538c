"""Weighted Cech and Rips filtrations over Euclidean point clouds.

A filtered complex is stored columnar: parallel arrays of filtration
values, dimensions, and padded vertex rows, sorted by
(value, dimension, lexicographic vertices).  Simplices are plain tuples
of strictly increasing point indices.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .dtm import dtm_weights, simplex_filtration_value
from .errors import IntegrityError, ParameterError, SizeGuardError
from .numerics import INF, pabsdiff, pdiff, pnorm_pair, validate_exponent
from .pointcloud import PointCloud, pairwise_distances

DEFAULT_EDGE_TOL = 1e-12
DEFAULT_CECH_TOL = 1e-6
CECH_ENUM_GUARD = 10**6
FLAG_SIZE_GUARD = 3 * 10**7


def radius(f_x: float, t: float, p: float) -> float:
    """Ball radius at time t for a point of weight f_x; -inf means empty."""
    p = validate_exponent(p)
    if f_x < 0.0 or t < 0.0:
        raise ParameterError("radius requires f_x >= 0 and t >= 0")
    if t < f_x:
        return -math.inf
    if p == INF:
        return float(t)
    return float(pdiff(t, f_x, p))


def power_value(y, cloud, f, p: float) -> float:
    """Infimum t at which y enters the union of weighted balls around X."""
    p = validate_exponent(p)
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.shape[0] == 0:
        raise ParameterError("power_value needs a nonempty cloud")
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    dist = np.sqrt(((pts - y) ** 2).sum(axis=1))
    if p == INF:
        return float(np.maximum(dist, f).min())
    return float(np.asarray(pnorm_pair(dist, f, p)).min())


def _edge_root_bisect(dist, f_x, f_y, p, tol):
    """Positive root of pdiff(t,f_x,p) + pdiff(t,f_y,p) = dist, vectorized."""
    lo = np.maximum(f_x, f_y)
    hi = pnorm_pair(dist, lo, p)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = pdiff(mid, f_x, p) + pdiff(mid, f_y, p)
        high_side = val >= dist
        hi = np.where(high_side, mid, hi)
        lo = np.where(high_side, lo, mid)
        if float(np.max(hi - lo)) <= tol:
            break
    return 0.5 * (lo + hi)


def edge_values(dist, f_x, f_y, p: float, tol: float = DEFAULT_EDGE_TOL):
    """Filtration values of edges, elementwise over arrays.

    If the gap condition dist <= |f_x^p - f_y^p|^(1/p) holds, one ball is
    born inside the other and the value is max(f_x, f_y); otherwise the
    value solves r_x(t) + r_y(t) = dist (closed forms at p = 1, 2, inf,
    bisection to ``tol`` elsewhere).
    """
    p = validate_exponent(p)
    dist = np.asarray(dist, dtype=np.float64)
    f_x = np.asarray(f_x, dtype=np.float64)
    f_y = np.asarray(f_y, dtype=np.float64)
    hi = np.maximum(f_x, f_y)
    if p == INF:
        out = np.maximum(hi, 0.5 * dist)
        return float(out) if out.ndim == 0 else out
    dominated = dist <= pabsdiff(f_x, f_y, p)
    if p == 1.0:
        root = 0.5 * (f_x + f_y + dist)
    elif p == 2.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            num = np.sqrt(((f_x + f_y) ** 2 + dist**2) * ((f_x - f_y) ** 2 + dist**2))
            root = np.where(dist > 0.0, num / (2.0 * np.where(dist > 0.0, dist, 1.0)), hi)
    else:
        root = _edge_root_bisect(dist, f_x, f_y, p, tol)
    out = np.where(dominated, hi, root)
    return float(out) if out.ndim == 0 else out


def edge_value(dist: float, f_x: float, f_y: float, p: float, tol: float = DEFAULT_EDGE_TOL) -> float:
    if dist < 0.0 or f_x < 0.0 or f_y < 0.0:
        raise ParameterError("edge_value requires nonnegative inputs")
    return float(np.asarray(edge_values(dist, f_x, f_y, p, tol)))


def cech_simplex_value(points, f_vals, p: float, tol: float = DEFAULT_CECH_TOL) -> float:
    """Nerve filtration value of one simplex: first t its balls all meet."""
    return simplex_filtration_value(points, f_vals, p, tol=tol)


class FilteredComplex:
    """Face-closed simplices with face-monotone filtration values.

    ``values``, ``dims`` and padded ``vertices`` rows run in parallel,
    sorted by (value, dim, lexicographic vertices) when built by the
    constructors in this module.  ``t_max`` records the truncation value
    (None means untruncated).
    """

    def __init__(self, values, dims, vertices, n_points: int, t_max=None):
        self.values = np.asarray(values, dtype=np.float64)
        self.dims = np.asarray(dims, dtype=np.int32)
        verts = np.asarray(vertices, dtype=np.int32)
        if verts.ndim == 1:
            verts = verts.reshape(-1, 1)
        self.vertices = verts
        self.n_points = int(n_points)
        self.t_max = None if t_max is None else float(t_max)
        if not (len(self.values) == len(self.dims) == len(self.vertices)):
            raise ParameterError("parallel arrays must share a length")

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def max_dim(self) -> int:
        return int(self.dims.max(initial=0))

    def simplex(self, i: int) -> tuple:
        row = self.vertices[i]
        return tuple(int(v) for v in row[: self.dims[i] + 1])

    def entries(self):
        """Iterate (simplex tuple, value); meant for small complexes."""
        for i in range(len(self)):
            yield self.simplex(i), float(self.values[i])

    @classmethod
    def from_entries(cls, entries, n_points: int, t_max=None, canonical: bool = True):
        entries = list(entries)
        if not entries:
            return cls(np.empty(0), np.empty(0, np.int32), np.empty((0, 1), np.int32), n_points, t_max)
        width = max(len(s) for s, _ in entries)
        values = np.array([v for _, v in entries], dtype=np.float64)
        dims = np.array([len(s) - 1 for s, _ in entries], dtype=np.int32)
        verts = np.full((len(entries), width), -1, dtype=np.int32)
        for i, (s, _) in enumerate(entries):
            if list(s) != sorted(set(s)):
                raise IntegrityError(f"simplex {s!r} must be strictly increasing")
            verts[i, : len(s)] = s
        out = cls(values, dims, verts, n_points, t_max)
        return out.canonical_sort() if canonical else out

    def canonical_sort(self) -> "FilteredComplex":
        keys = [self.vertices[:, c] for c in range(self.vertices.shape[1] - 1, -1, -1)]
        keys += [self.dims, self.values]
        order = np.lexsort(keys)
        return FilteredComplex(
            self.values[order], self.dims[order], self.vertices[order], self.n_points, self.t_max
        )

    def validate(self) -> None:
        """Check face closure and monotonicity (exhaustive; small inputs)."""
        index = {}
        for i in range(len(self)):
            index[self.simplex(i)] = float(self.values[i])
        for i in range(len(self)):
            s = self.simplex(i)
            if len(s) == 1:
                continue
            for face in combinations(s, len(s) - 1):
                if face not in index:
                    raise IntegrityError(f"missing face {face!r} of {s!r}")
                if index[face] > self.values[i]:
                    raise IntegrityError(
                        f"face {face!r} value {index[face]} exceeds {s!r} value {self.values[i]}"
                    )


def _vertex_entries(f, t_max):
    f = np.asarray(f, dtype=np.float64)
    keep = np.flatnonzero(f <= t_max)
    return keep, f[keep]


def _edge_matrix(dists, f, p, tol):
    n = dists.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    vals = edge_values(dists[iu, ju], f[iu], f[ju], p, tol)
    mat = np.zeros_like(dists)
    mat[iu, ju] = vals
    mat[ju, iu] = vals
    return mat, iu, ju, np.asarray(vals)


def build_weighted_rips(
    cloud,
    f,
    p: float,
    max_dim: int = 1,
    t_max: float | None = None,
    edge_tol: float = DEFAULT_EDGE_TOL,
) -> FilteredComplex:
    """Flag complex of the weighted nerve's 1-skeleton.

    Vertices enter at their weights, edges at their two-ball meeting time,
    and higher simplices at the max over their edges (clique completion).
    ``t_max=None`` uses the cloud diameter; deaths past the truncation are
    reported as censored by downstream reduction.
    """
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(cloud)
    p = validate_exponent(p)
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    n = len(cloud)
    if f.shape[0] != n:
        raise ParameterError("one weight per point required")
    if np.any(f < 0.0) or not np.all(np.isfinite(f)):
        raise ParameterError("weights must be finite and >= 0")
    if max_dim < 0:
        raise ParameterError("max_dim must be >= 0")
    dists = pairwise_distances(cloud)
    if t_max is None:
        # diameter default; degenerate clouds fall back to the weight scale
        t_max = float(dists.max())
        if t_max <= 0.0:
            t_max = max(float(f.max(initial=0.0)), 1.0)
    t_max = float(t_max)
    if t_max <= 0.0:
        raise ParameterError("t_max must be positive")

    values = []
    dims = []
    verts = []
    width = max_dim + 1

    keep_v, f_v = _vertex_entries(f, t_max)
    v_rows = np.full((keep_v.shape[0], width), -1, dtype=np.int32)
    v_rows[:, 0] = keep_v
    values.append(f_v)
    dims.append(np.zeros(keep_v.shape[0], dtype=np.int32))
    verts.append(v_rows)

    if max_dim >= 1 and n >= 2:
        emat, iu, ju, evals = _edge_matrix(dists, f, p, edge_tol)
        keep_e = evals <= t_max
        ei, ej, ev = iu[keep_e], ju[keep_e], evals[keep_e]
        e_rows = np.full((ei.shape[0], width), -1, dtype=np.int32)
        e_rows[:, 0] = ei
        e_rows[:, 1] = ej
        values.append(ev)
        dims.append(np.ones(ei.shape[0], dtype=np.int32))
        verts.append(e_rows)

        adj = emat <= t_max
        np.fill_diagonal(adj, False)
        # vertices above t_max cannot carry edges (edge value >= weights)
        if max_dim >= 2:
            tri_v, tri_val = _expand_triangles(adj, emat, t_max)
            if tri_v.shape[0] > 0:
                t_rows = np.full((tri_v.shape[0], width), -1, dtype=np.int32)
                t_rows[:, :3] = tri_v
                values.append(tri_val)
                dims.append(np.full(tri_v.shape[0], 2, dtype=np.int32))
                verts.append(t_rows)
            prev_v, prev_val = tri_v, tri_val
            for q in range(3, max_dim + 1):
                prev_v, prev_val = _expand_cliques(prev_v, prev_val, adj, emat, t_max)
                if prev_v.shape[0] == 0:
                    break
                rows = np.full((prev_v.shape[0], width), -1, dtype=np.int32)
                rows[:, : q + 1] = prev_v
                values.append(prev_val)
                dims.append(np.full(prev_v.shape[0], q, dtype=np.int32))
                verts.append(rows)

    out = FilteredComplex(
        np.concatenate(values) if values else np.empty(0),
        np.concatenate(dims) if dims else np.empty(0, np.int32),
        np.vstack(verts) if verts else np.empty((0, width), np.int32),
        n,
        t_max,
    )
    return out.canonical_sort()


def _expand_triangles(adj, emat, t_max):
    """All triangles of the adjacency graph with their clique values."""
    n = adj.shape[0]
    out_v = []
    out_val = []
    total = 0
    for i in range(n):
        nbrs = np.flatnonzero(adj[i, i + 1 :]) + i + 1
        k = nbrs.shape[0]
        if k < 2:
            continue
        a, b = np.triu_indices(k, k=1)
        jj, kk = nbrs[a], nbrs[b]
        ok = adj[jj, kk]
        jj, kk = jj[ok], kk[ok]
        if jj.shape[0] == 0:
            continue
        val = np.maximum(np.maximum(emat[i, jj], emat[i, kk]), emat[jj, kk])
        keep = val <= t_max
        jj, kk, val = jj[keep], kk[keep], val[keep]
        m = jj.shape[0]
        total += m
        if total > FLAG_SIZE_GUARD:
            raise SizeGuardError(
                f"flag expansion exceeds {FLAG_SIZE_GUARD} simplices; lower t_max or max_dim"
            )
        rows = np.empty((m, 3), dtype=np.int32)
        rows[:, 0] = i
        rows[:, 1] = jj
        rows[:, 2] = kk
        out_v.append(rows)
        out_val.append(val)
    if not out_v:
        return np.empty((0, 3), np.int32), np.empty(0)
    return np.vstack(out_v), np.concatenate(out_val)


def _expand_cliques(simps, vals, adj, emat, t_max):
    """One flag-expansion step: extend q-cliques by a larger adjacent vertex."""
    out_v = []
    out_val = []
    total = 0
    for row, val in zip(simps, vals):
        cand = np.flatnonzero(np.all(adj[row, :], axis=0))
        cand = cand[cand > row[-1]]
        if cand.shape[0] == 0:
            continue
        new_val = np.maximum(val, emat[row][:, cand].max(axis=0))
        keep = new_val <= t_max
        cand, new_val = cand[keep], new_val[keep]
        m = cand.shape[0]
        if m == 0:
            continue
        total += m
        if total > FLAG_SIZE_GUARD:
            raise SizeGuardError(
                f"flag expansion exceeds {FLAG_SIZE_GUARD} simplices; lower t_max or max_dim"
            )
        rows = np.empty((m, row.shape[0] + 1), dtype=np.int32)
        rows[:, :-1] = row
        rows[:, -1] = cand
        out_v.append(rows)
        out_val.append(new_val)
    if not out_v:
        return np.empty((0, simps.shape[1] + 1), np.int32), np.empty(0)
    return np.vstack(out_v), np.concatenate(out_val)


def build_weighted_cech(
    cloud,
    f,
    p: float,
    max_dim: int = 1,
    t_max: float | None = None,
    tol: float = DEFAULT_CECH_TOL,
) -> FilteredComplex:
    """Nerve of the weighted balls by exhaustive simplex enumeration.

    Every subset of at most max_dim+1 points is assigned its minimax
    meeting time; values are clamped up to the max over facets when the
    solver undershoots within its tolerance, so the output is exactly
    face-monotone.  Guarded by C(n, max_dim+1) <= 10^6.
    """
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(cloud)
    p = validate_exponent(p)
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    n = len(cloud)
    if f.shape[0] != n:
        raise ParameterError("one weight per point required")
    if max_dim < 0:
        raise ParameterError("max_dim must be >= 0")
    if math.comb(n, max_dim + 1) > CECH_ENUM_GUARD:
        raise SizeGuardError(
            f"C({n}, {max_dim + 1}) exceeds the enumeration guard {CECH_ENUM_GUARD}"
        )
    pts = cloud.points
    value_of: dict[tuple, float] = {}
    entries = []
    for q in range(0, max_dim + 1):
        for simplex in combinations(range(n), q + 1):
            if q == 0:
                val = float(f[simplex[0]])
            else:
                idx = list(simplex)
                val = cech_simplex_value(pts[idx], f[idx], p, tol=tol)
                for face in combinations(simplex, q):
                    val = max(val, value_of[face])
            value_of[simplex] = val
            entries.append((simplex, val))
    if t_max is not None:
        entries = [(s, v) for s, v in entries if v <= t_max]
    return FilteredComplex.from_entries(entries, n, t_max=t_max)


def dtm_filtration(
    cloud,
    m: float,
    p: float,
    max_dim: int = 1,
    t_max: float | None = None,
) -> FilteredComplex:
    """Weighted Rips filtration with the cloud's own DTM as weights."""
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(cloud)
    return build_weighted_rips(cloud, dtm_weights(cloud, m), p, max_dim, t_max)


def write_complex(path, complex_: FilteredComplex) -> None:
    """One entry per line: ``value;dim;v0 v1 ... vk`` at 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(len(complex_)):
            simplex = complex_.simplex(i)
            fh.write(
                f"{format(complex_.values[i], '.17g')};{complex_.dims[i]};"
                + " ".join(str(v) for v in simplex)
                + "\n"
            )


def load_complex(path) -> FilteredComplex:
    """Inverse of :func:`write_complex`; trusts the stored order."""
    entries = []
    n_points = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                value_s, dim_s, verts_s = line.split(";")
                value = float(value_s)
                dim = int(dim_s)
                verts = tuple(int(v) for v in verts_s.split())
            except ValueError:
                raise IntegrityError(f"{path}: line {lineno}: malformed complex entry") from None
            if len(verts) != dim + 1:
                raise IntegrityError(f"{path}: line {lineno}: dim/vertex mismatch")
            n_points = max(n_points, max(verts) + 1)
            entries.append((verts, value))
    return FilteredComplex.from_entries(entries, n_points, canonical=False)
