"""Diagram and measure distances, and stability-bound certification.

The bottleneck distance is exact: the optimal value is one of finitely
many candidate costs (pairwise L-infinity distances and half-persistences)
and a binary search with a maximum-matching feasibility test selects the
smallest feasible one.  The quadratic Wasserstein distance is solved as a
transportation problem with integer supplies obtained from exact rational
masses; the LP vertex returned by the simplex solver is an optimal
integral flow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .dtm import c_const, c_const_p, dtm_values
from .errors import DimensionMismatchError, ParameterError
from .filtration import build_weighted_rips
from .numerics import INF, validate_exponent
from .persistence import PersistenceDiagram, reduce
from .pointcloud import DiscreteMeasure, PointCloud, cross_distances, hausdorff

BOUND_SLACK = 1e-9
MASS_DENOMINATOR_CAP = 10**6
MASS_SNAP_TOL = 1e-9

THEOREMS = ("P4.4", "T4.6", "T4.13", "P4.8-bound")


# ---------------------------------------------------------------------------
# bottleneck distance


def _finite_bottleneck(P: np.ndarray, Q: np.ndarray) -> float:
    n1, n2 = P.shape[0], Q.shape[0]
    if n1 == 0 and n2 == 0:
        return 0.0
    diag_p = 0.5 * (P[:, 1] - P[:, 0]) if n1 else np.empty(0)
    diag_q = 0.5 * (Q[:, 1] - Q[:, 0]) if n2 else np.empty(0)
    if n1 == 0:
        return float(diag_q.max())
    if n2 == 0:
        return float(diag_p.max())
    cross = np.maximum(
        np.abs(P[:, None, 0] - Q[None, :, 0]), np.abs(P[:, None, 1] - Q[None, :, 1])
    )
    candidates = np.unique(np.concatenate([cross.ravel(), diag_p, diag_q, [0.0]]))

    def feasible(lam: float) -> bool:
        # Left: P points then diagonal slots for Q; right: Q then slots for P.
        rows = []
        cols = []
        pi, pj = np.nonzero(cross <= lam)
        rows.append(pi)
        cols.append(pj)
        ok_p = np.flatnonzero(diag_p <= lam)
        for j in range(n1):  # P_i may retire to any of its n1 diagonal slots
            rows.append(ok_p)
            cols.append(np.full(ok_p.shape[0], n2 + j))
        ok_q = np.flatnonzero(diag_q <= lam)
        for i in range(n2):
            rows.append(np.full(ok_q.shape[0], n1 + i))
            cols.append(ok_q)
        di = np.arange(n2)
        for j in range(n1):  # diagonal-to-diagonal is free
            rows.append(n1 + di)
            cols.append(np.full(n2, n2 + j))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = csr_matrix(
            (np.ones(r.shape[0], dtype=np.int8), (r, c)), shape=(n1 + n2, n2 + n1)
        )
        match = maximum_bipartite_matching(graph, perm_type="column")
        return int((match >= 0).sum()) == n1 + n2

    lo, hi = 0, candidates.shape[0] - 1
    if not feasible(float(candidates[hi])):  # cannot happen; guards degenerate input
        return float(candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int) -> float:
    """Exact bottleneck distance between the dimension-``dim`` diagrams.

    Infinite-death points match only among themselves at the absolute
    birth difference; mismatched essential counts give +inf.  Points with
    zero persistence are free and ignored.
    """
    ess1 = d1.essential_births(dim)
    ess2 = d2.essential_births(dim)
    if ess1.shape[0] != ess2.shape[0]:
        return math.inf
    ess_cost = float(np.abs(ess1 - ess2).max()) if ess1.shape[0] else 0.0

    def finite_pts(d):
        pts = d.points(dim)
        return pts[np.isfinite(pts[:, 1])]

    return max(ess_cost, _finite_bottleneck(finite_pts(d1), finite_pts(d2)))


# ---------------------------------------------------------------------------
# quadratic Wasserstein distance


def _rational_masses(masses: np.ndarray) -> list[Fraction]:
    fracs = []
    for i, mass in enumerate(masses[:-1]):
        f = Fraction(float(mass)).limit_denominator(MASS_DENOMINATOR_CAP)
        if abs(float(f) - float(mass)) > MASS_SNAP_TOL:
            raise ParameterError(
                f"mass {mass!r} is not within {MASS_SNAP_TOL} of a rational with "
                f"denominator <= {MASS_DENOMINATOR_CAP}"
            )
        fracs.append(f)
    last = Fraction(1) - sum(fracs, Fraction(0))
    if abs(float(last) - float(masses[-1])) > MASS_SNAP_TOL or last <= 0:
        raise ParameterError("masses do not sum to 1 on the rational grid")
    fracs.append(last)
    return fracs


def wasserstein2(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """W2 between discrete measures via an exact transportation solve."""
    if mu.dim != nu.dim:
        raise DimensionMismatchError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    if len(mu) == len(nu) and np.array_equal(mu.support.points, nu.support.points) and np.array_equal(
        mu.masses, nu.masses
    ):
        return 0.0
    fa = _rational_masses(mu.masses)
    fb = _rational_masses(nu.masses)
    lcd = 1
    for f in fa + fb:
        lcd = lcd * f.denominator // math.gcd(lcd, f.denominator)
    supply = np.array([int(f * lcd) for f in fa], dtype=np.float64)
    demand = np.array([int(f * lcd) for f in fb], dtype=np.float64)
    n1, n2 = len(mu), len(nu)
    cost = cross_distances(mu.support.points, nu.support.points) ** 2
    row_idx = np.repeat(np.arange(n1), n2)
    col_idx = np.tile(np.arange(n2), n1)
    var = np.arange(n1 * n2)
    a_eq = coo_matrix(
        (
            np.ones(2 * n1 * n2),
            (
                np.concatenate([row_idx, n1 + col_idx]),
                np.concatenate([var, var]),
            ),
        ),
        shape=(n1 + n2, n1 * n2),
    )
    res = linprog(
        cost.ravel(),
        A_eq=a_eq.tocsr(),
        b_eq=np.concatenate([supply, demand]),
        bounds=(0, None),
        method="highs",
    )
    if res.status != 0:
        raise ParameterError(f"transportation solve failed: {res.message}")
    return float(math.sqrt(max(res.fun / lcd, 0.0)))


# ---------------------------------------------------------------------------
# stability reports


@dataclass(frozen=True)
class StabilityReport:
    """Bound calculator output: named terms, their combination, verdict.

    ``measured_bottleneck`` and ``satisfied`` are None for bound-only
    theorems (the sublevel-set comparison of P4.8 is out of scope).
    """

    theorem: str
    m: float
    p: float
    terms: dict
    bound: float
    measured_bottleneck: float | None = None
    satisfied: bool | None = None
    dims: tuple = ()

    def validate(self) -> None:
        if abs(self.bound - combine_terms(self.theorem, self.m, self.p, self.terms)) > 1e-12:
            raise ParameterError("bound does not match its terms")
        if self.measured_bottleneck is not None:
            ok = self.measured_bottleneck <= self.bound + BOUND_SLACK
            if bool(self.satisfied) != ok:
                raise ParameterError("satisfied flag inconsistent with bound")

    def to_json(self) -> str:
        flat = {"theorem": self.theorem, "m": self.m, "p": None if self.p == INF else self.p}
        flat.update({k: float(v) for k, v in self.terms.items()})
        flat["bound"] = float(self.bound)
        flat["measured_bottleneck"] = (
            None if self.measured_bottleneck is None else float(self.measured_bottleneck)
        )
        flat["satisfied"] = self.satisfied
        if self.dims:
            flat["dims"] = list(self.dims)
        return json.dumps(flat, indent=2, sort_keys=False)


def combine_terms(theorem: str, m: float, p: float, terms: dict) -> float:
    root_m = m ** (-0.5)
    if theorem == "P4.4":
        factor = 1.0 if p == INF else 2.0 ** (1.0 / p)
        return root_m * terms["w2_x_y"] + factor * terms["d_h_x_y"]
    if theorem in ("T4.6", "T4.13"):
        total = terms["w2_x_gamma"] + terms["w2_gamma_omega"] + terms.get("w2_omega_y", 0.0)
        return root_m * total + terms["c_gamma"] + terms["c_omega"]
    if theorem == "P4.8-bound":
        return root_m * terms["w2_mu_mu_x"] + 2.0 * terms["epsilon"] + terms["c_mu"]
    raise ParameterError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")


def _require_subset(sub: PointCloud, sup: PointCloud, name: str) -> None:
    sup_rows = {tuple(row) for row in sup.points}
    for idx, row in enumerate(sub.points):
        if tuple(row) not in sup_rows:
            raise ParameterError(
                f"{name} is not a coordinate subset: point {idx} = {tuple(row)} missing"
            )


def bound_p44(mu: DiscreteMeasure, nu: DiscreteMeasure, m: float, p: float) -> StabilityReport:
    """W2 + Hausdorff bound between two weighted filtrations."""
    p = validate_exponent(p)
    terms = {
        "w2_x_y": wasserstein2(mu, nu),
        "d_h_x_y": hausdorff(mu.support, nu.support),
    }
    return StabilityReport("P4.4", m, p, terms, combine_terms("P4.4", m, p, terms))


def bound_t46(
    x: PointCloud,
    gamma: PointCloud,
    omega: PointCloud | None = None,
    y: PointCloud | None = None,
    *,
    m: float,
) -> StabilityReport:
    """Outlier-robust bound through intermediate subsets (p = 1 constants).

    With ``y`` omitted the two-set variant is used: the second cloud is
    ``omega`` itself and the third transport term drops.
    """
    omega = gamma if omega is None else omega
    _require_subset(gamma, x, "gamma")
    if y is not None:
        _require_subset(omega, y, "omega")
    mu_x = DiscreteMeasure.uniform(x)
    mu_g = DiscreteMeasure.uniform(gamma)
    mu_o = DiscreteMeasure.uniform(omega)
    terms = {
        "w2_x_gamma": wasserstein2(mu_x, mu_g),
        "w2_gamma_omega": wasserstein2(mu_g, mu_o),
    }
    if y is not None:
        terms["w2_omega_y"] = wasserstein2(mu_o, DiscreteMeasure.uniform(y))
    terms["c_gamma"] = c_const(mu_g, m)
    terms["c_omega"] = c_const(mu_o, m)
    return StabilityReport("T4.6", m, 1.0, terms, combine_terms("T4.6", m, 1.0, terms))


def bound_t413(
    x: PointCloud,
    gamma: PointCloud,
    omega: PointCloud | None = None,
    y: PointCloud | None = None,
    *,
    m: float,
    p: float,
    tol: float = 1e-6,
) -> StabilityReport:
    """As ``bound_t46`` with the exponent-corrected constants."""
    p = validate_exponent(p)
    omega = gamma if omega is None else omega
    _require_subset(gamma, x, "gamma")
    if y is not None:
        _require_subset(omega, y, "omega")
    mu_x = DiscreteMeasure.uniform(x)
    mu_g = DiscreteMeasure.uniform(gamma)
    mu_o = DiscreteMeasure.uniform(omega)
    terms = {
        "w2_x_gamma": wasserstein2(mu_x, mu_g),
        "w2_gamma_omega": wasserstein2(mu_g, mu_o),
    }
    if y is not None:
        terms["w2_omega_y"] = wasserstein2(mu_o, DiscreteMeasure.uniform(y))
    terms["c_gamma"] = c_const_p(mu_g, m, p, tol=tol)
    terms["c_omega"] = c_const_p(mu_o, m, p, tol=tol)
    return StabilityReport("T4.13", m, p, terms, combine_terms("T4.13", m, p, terms))


def bound_p48(mu: DiscreteMeasure, x: PointCloud, m: float) -> StabilityReport:
    """Bound between the sublevel filtration of the DTM and the data's own.

    Only the bound is computed; the sublevel filtration itself is not.
    """
    if mu.dim != x.dim:
        raise DimensionMismatchError(f"dimension mismatch: {mu.dim} vs {x.dim}")
    union = PointCloud(np.vstack([mu.support.points, x.points]))
    terms = {
        "w2_mu_mu_x": wasserstein2(mu, DiscreteMeasure.uniform(x)),
        "epsilon": hausdorff(union, x),
        "c_mu": c_const(mu, m),
    }
    return StabilityReport("P4.8-bound", m, 1.0, terms, combine_terms("P4.8-bound", m, 1.0, terms))


# ---------------------------------------------------------------------------
# end-to-end certification


def _measure_diagram(mu: DiscreteMeasure, m, p, max_dim, t_max, dims):
    weights = dtm_values(mu, mu.support.points, m)
    K = build_weighted_rips(mu.support, weights, p, max_dim=max_dim, t_max=t_max)
    return reduce(K, homology_dims=dims)


def certify(
    theorem: str,
    *,
    x: PointCloud | None = None,
    gamma: PointCloud | None = None,
    omega: PointCloud | None = None,
    y: PointCloud | None = None,
    mu: DiscreteMeasure | None = None,
    nu: DiscreteMeasure | None = None,
    m: float,
    p: float = 1.0,
    max_dim: int = 1,
    t_max: float | None = None,
    dims=(0,),
    tol: float = 1e-6,
) -> StabilityReport:
    """Build both filtrations, measure the bottleneck gap, fill the report.

    A violated bound is data (satisfied=False), never an exception.  The
    bound-only theorem ``P4.8-bound`` leaves the measurement fields None.
    """
    dims = tuple(sorted(set(int(d) for d in dims)))
    if theorem not in THEOREMS:
        raise ParameterError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    if theorem == "P4.4":
        if mu is None or nu is None:
            raise ParameterError("P4.4 requires measures mu and nu")
        report = bound_p44(mu, nu, m, p)
        left, right = mu, nu
    elif theorem == "T4.6":
        if x is None or gamma is None:
            raise ParameterError("T4.6 requires clouds x and gamma")
        report = bound_t46(x, gamma, omega, y, m=m)
        p = 1.0
        left = DiscreteMeasure.uniform(x)
        right = DiscreteMeasure.uniform(y if y is not None else (omega if omega is not None else gamma))
    elif theorem == "T4.13":
        if x is None or gamma is None:
            raise ParameterError("T4.13 requires clouds x and gamma")
        report = bound_t413(x, gamma, omega, y, m=m, p=p, tol=tol)
        left = DiscreteMeasure.uniform(x)
        right = DiscreteMeasure.uniform(y if y is not None else (omega if omega is not None else gamma))
    else:  # P4.8-bound
        if mu is None or x is None:
            raise ParameterError("P4.8-bound requires a measure mu and a cloud x")
        report = bound_p48(mu, x, m)
        return StabilityReport(
            report.theorem, report.m, report.p, report.terms, report.bound, None, None, dims
        )

    d_left = _measure_diagram(left, m, p, max_dim, t_max, dims)
    d_right = _measure_diagram(right, m, p, max_dim, t_max, dims)
    measured = max(bottleneck(d_left, d_right, q) for q in dims)
    return StabilityReport(
        report.theorem,
        report.m,
        report.p,
        report.terms,
        report.bound,
        measured,
        bool(measured <= report.bound + BOUND_SLACK),
        dims,
    )
