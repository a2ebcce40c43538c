"""Distance-to-measure evaluation and the associated stability constants.

The distance to a discrete measure mu at mass parameter m is the exact
piecewise-constant integral

    d(x)^2 = (1/m) * sum_j (min(m, M_j) - min(m, M_{j-1})) * r_j^2

over support points sorted by distance r_1 <= r_2 <= ... with cumulative
masses M_j.  This follows the strict-inequality convention for the radius
quantile (at a cumulative-mass breakpoint the smaller radius wins), and
for a uniform measure on n points with m = k/n it reduces to the mean
squared distance to the k nearest neighbors.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ParameterError
from .minimax import weighted_one_center
from .numerics import INF, validate_exponent
from .pointcloud import DiscreteMeasure, PointCloud

DEFAULT_SOLVER_TOL = 1e-6


def _check_mass(m: float) -> float:
    m = float(m)
    if not (0.0 < m < 1.0):
        raise ParameterError(f"mass parameter m must lie in (0, 1), got {m!r}")
    return m


def dtm_values(mu: DiscreteMeasure, queries, m: float) -> np.ndarray:
    """Distance to the measure ``mu`` at each query point."""
    m = _check_mass(m)
    q = np.asarray(queries, dtype=np.float64)
    if q.ndim == 1:
        q = q.reshape(1, -1) if q.shape[0] == mu.dim else q.reshape(-1, 1)
    if q.shape[1] != mu.dim:
        raise DimensionMismatchError(
            f"query dimension {q.shape[1]} != support dimension {mu.dim}"
        )
    supp = mu.support.points
    n = supp.shape[0]
    diff = q[:, None, :] - supp[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    order = np.argsort(dist2, axis=1, kind="stable")
    dist2_sorted = np.take_along_axis(dist2, order, axis=1)
    if mu.is_uniform:
        # Exact cumulative masses avoid float drift at k-NN breakpoints.
        cum = np.arange(1, n + 1, dtype=np.float64) / n
        cum = np.broadcast_to(cum, dist2_sorted.shape)
    else:
        cum = np.cumsum(mu.masses[order], axis=1)
    clipped = np.minimum(cum, m)
    weights = np.diff(clipped, axis=1, prepend=0.0)
    return np.sqrt(np.maximum((weights * dist2_sorted).sum(axis=1) / m, 0.0))


def dtm(mu: DiscreteMeasure, query, m: float) -> float:
    """Distance to measure at a single query point."""
    return float(dtm_values(mu, np.asarray(query, dtype=np.float64).reshape(1, -1), m)[0])


def dtm_weights(cloud: PointCloud, m: float) -> np.ndarray:
    """DTM of the uniform empirical measure of ``cloud`` at its own points."""
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(cloud)
    mu = DiscreteMeasure.uniform(cloud)
    return dtm_values(mu, cloud.points, m)


def c_const(mu: DiscreteMeasure, m: float) -> float:
    """Sup of the DTM over the support of its own measure."""
    return float(dtm_values(mu, mu.support.points, m).max())


def simplex_filtration_value(points, weights, p: float, tol: float = DEFAULT_SOLVER_TOL) -> float:
    """First time the weighted balls around ``points`` share a common point.

    For finite p this is the convex minimax value
    min_y max_i (||y - x_i||^p + w_i^p)^(1/p), certified to absolute
    tolerance ``tol``; for p = inf it is max(max_i w_i, ball radius).
    """
    return weighted_one_center(points, weights, p, tol=tol)


def c_const_p(mu: DiscreteMeasure, m: float, p: float, tol: float = DEFAULT_SOLVER_TOL) -> float:
    """Stability constant with the exponent correction kappa(p) = 1 - 1/p.

    Equals ``c_const`` plus kappa(p) times the filtration value of the
    full support simplex under its own DTM weights; at p = 1 the second
    term vanishes and the plain constant is returned.
    """
    m = _check_mass(m)
    p = validate_exponent(p)
    base = c_const(mu, m)
    kappa = 1.0 if p == INF else 1.0 - 1.0 / p
    if kappa == 0.0:
        return base
    f_vals = dtm_values(mu, mu.support.points, m)
    t_full = simplex_filtration_value(mu.support.points, f_vals, p, tol=tol)
    return base + kappa * t_full
