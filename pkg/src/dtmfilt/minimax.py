"""Weighted one-center solver and exact smallest enclosing ball.

``weighted_one_center`` computes

    min over y in R^d of  max_i (||y - x_i||^p + w_i^p)^(1/p)

for finite p >= 1 with a certified absolute tolerance.  The objective is a
max of convex 1-Lipschitz functions, so a convex combination of active
subgradients yields a rigorous lower bound: if z is in the convex hull of
subgradients taken at functions within theta of the max, then

    F* >= F(y) - theta - ||z|| * max_i ||y - x_i||,

because the minimizer lies in the convex hull of the input points.  The
solver alternates descent along the negated min-norm hull vector with
certificate checks until upper and lower bounds meet within ``tol``.

For p = infinity the value decouples into max(max_i w_i, R(X)) where R(X)
is the smallest-enclosing-ball radius, computed exactly by Welzl's
move-to-front algorithm.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .errors import ParameterError, SolverError
from .numerics import INF, pnorm_pair, validate_exponent

_MNP_CYCLES = 100


def _min_norm_point(vectors: np.ndarray) -> np.ndarray:
    """Min-norm point of the convex hull of the rows (Wolfe's algorithm).

    Always returns an exact convex combination of the rows; on numerical
    stagnation it returns the best combination found, which keeps every
    certificate derived from it valid.
    """
    V = np.asarray(vectors, dtype=np.float64)
    k = V.shape[0]
    norms2 = np.einsum("ij,ij->i", V, V)
    scale = max(1.0, float(norms2.max(initial=0.0)))
    sel = [int(np.argmin(norms2))]
    lam = np.array([1.0])
    x = V[sel[0]].copy()
    best = x.copy()
    best_norm2 = float(x @ x)

    for _ in range(_MNP_CYCLES):
        dots = V @ x
        j = int(np.argmin(dots))
        if float(x @ x) <= dots[j] + 1e-14 * scale or j in sel:
            break
        sel.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(_MNP_CYCLES):
            Vs = V[sel]
            m = len(sel)
            K = Vs @ Vs.T
            A = np.zeros((m + 1, m + 1))
            A[:m, :m] = K
            A[:m, m] = -1.0
            A[m, :m] = 1.0
            rhs = np.zeros(m + 1)
            rhs[m] = 1.0
            alpha = np.linalg.lstsq(A, rhs, rcond=None)[0][:m]
            if np.all(alpha >= -1e-12):
                lam = np.clip(alpha, 0.0, None)
                lam /= lam.sum()
                x = lam @ Vs
                break
            neg = alpha < lam
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = np.where(neg, lam / (lam - alpha), np.inf)
            steps = np.where(alpha < 0.0, steps, np.inf)
            theta = float(steps.min())
            lam = lam + theta * (alpha - lam)
            lam = np.clip(lam, 0.0, None)
            keep = lam > 1e-14
            if not np.any(keep):
                keep[int(np.argmax(lam))] = True
            sel = [s for s, k_ in zip(sel, keep) if k_]
            lam = lam[keep]
            lam /= lam.sum()
            x = lam @ V[sel]
        n2 = float(x @ x)
        if n2 < best_norm2:
            best_norm2 = n2
            best = x.copy()

    n2 = float(x @ x)
    if n2 < best_norm2:
        best = x
    return best


def _circumsphere(boundary: list) -> tuple:
    """Smallest sphere with all boundary points on its surface."""
    pts = np.asarray(boundary, dtype=np.float64)
    base = pts[0]
    if pts.shape[0] == 1:
        return base.copy(), 0.0
    rel = pts[1:] - base
    rhs = 0.5 * np.einsum("ij,ij->i", rel, rel)
    sol, *_ = np.linalg.lstsq(rel, rhs, rcond=None)
    center = base + sol
    radius = float(np.sqrt(np.max(np.einsum("ij,ij->i", pts - center, pts - center))))
    return center, radius


def miniball(points, seed: int = 71) -> tuple:
    """Exact smallest enclosing ball (center, radius), Welzl move-to-front.

    Deterministic: the input order is shuffled once with a fixed seed.
    Intended for desk-scale inputs (recursion depth is bounded by the
    ambient dimension + 1, the point loop is iterative).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    n, d = pts.shape
    if n < 1:
        raise ParameterError("miniball needs at least one point")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    shuffled = [pts[i] for i in order]

    def contains(ball, q) -> bool:
        center, radius = ball
        return float(np.linalg.norm(q - center)) <= radius * (1.0 + 1e-12) + 1e-14

    def mb(stop: int, boundary: list) -> tuple:
        if len(boundary) == d + 1:
            return _circumsphere(boundary)
        ball = _circumsphere(boundary) if boundary else None
        for i in range(stop):
            q = shuffled[i]
            if ball is None or not contains(ball, q):
                ball = mb(i, boundary + [q])
        return ball

    center, radius = mb(n, [])
    return center, float(radius)


def _eval_objective(y, pts, w, p):
    diff = pts - y
    u = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    g = pnorm_pair(u, w, p)
    return u, np.atleast_1d(g)


def _subgradients(y, pts, w, p, idx, u, g):
    """Rows are subgradients of the active component functions at y."""
    rows = np.zeros((len(idx), pts.shape[1]))
    for r, i in enumerate(idx):
        if u[i] <= 0.0 or g[i] <= 0.0:
            continue  # 0 is a valid subgradient at the point itself
        scale = math.exp((p - 1.0) * (math.log(u[i]) - math.log(g[i])))
        rows[r] = (y - pts[i]) * (scale / u[i])
    return rows


_GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))


def _section_search(phi, t_hi, f0, budget):
    """Golden-section minimum of a convex ray function on [0, t_hi].

    Expands the bracket first while the function keeps decreasing.
    Returns (t_best, f_best, evals).
    """
    evals = 0
    f_hi = phi(t_hi)
    evals += 1
    while evals < 12 and f_hi < f0:
        f_next = phi(2.0 * t_hi)
        evals += 1
        if f_next >= f_hi:
            break
        t_hi *= 2.0
        f_hi = f_next
    a, b = 0.0, 2.0 * t_hi
    x1 = a + _GOLDEN * (b - a)
    x2 = b - _GOLDEN * (b - a)
    f1, f2 = phi(x1), phi(x2)
    evals += 2
    best_t, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for _ in range(budget):
        if b - a <= 1e-9 * max(1.0, t_hi):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = a + _GOLDEN * (b - a)
            f1 = phi(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = b - _GOLDEN * (b - a)
            f2 = phi(x2)
        evals += 1
        if f1 < best_f:
            best_t, best_f = x1, f1
        if f2 < best_f:
            best_t, best_f = x2, f2
    return best_t, best_f, evals


def _certificate(y, pts, w, p, theta):
    """Lower bound on the optimum from the theta-active hull at y.

    Valid for any y: F* >= F(y) - theta - nu * max_i ||y - x_i||, with nu
    the norm of a convex combination of active subgradients.
    """
    u, g = _eval_objective(y, pts, w, p)
    top = float(g.max())
    active = np.flatnonzero(g >= top - theta)
    V = _subgradients(y, pts, w, p, active, u, g)
    nu = float(np.linalg.norm(_min_norm_point(V)))
    return top - theta - nu * float(u.max()), top


def _hessian(y, x, u, g, s, p):
    """Hessian of y -> (||y-x||^p + c^p)^(1/p) away from u = 0.

    With s = (u/g)^(p-1) the radial second derivative is
    (p-1) * s * c^p / (u * g^p) and the transverse one is s / u.
    """
    d = y.shape[0]
    e = (y - x) / u
    cp_over_gp = max(1.0 - (u / g) ** p, 0.0)
    radial = (p - 1.0) * s * cp_over_gp / u
    transverse = s / u
    return radial * np.outer(e, e) + transverse * (np.eye(d) - np.outer(e, e))


def _kkt_polish(y, pts, w, p, theta_floor, radius, state):
    """Newton-solve the minimax optimality system for the top functions.

    For each candidate active count k <= d+1, solves g_i(y) = t together
    with sum(lam_i * grad g_i(y)) = 0 and sum(lam) = 1 by a Newton
    iteration.  Value differences and gradient residuals stay numerically
    resolvable long after plain objective descent stalls, so this
    localizes a nondegenerate optimum to machine precision; the hull
    certificate at the polished point then closes the bracket.  Returns
    the best (lower, upper, y) candidate found.
    """
    d = pts.shape[1]
    lo0, up0 = _certificate(y, pts, w, p, theta_floor)
    state["evals"] += 1
    best = [lo0, up0, y]

    def consider(y_c):
        lo, up = _certificate(y_c, pts, w, p, theta_floor)
        state["evals"] += 1
        best[0] = max(best[0], lo)
        if up < best[1]:
            best[1] = up
            best[2] = y_c

    # Candidate: the optimum sits exactly on the heaviest point.
    consider(pts[int(np.argmax(w))].copy())

    u0, g0 = _eval_objective(y, pts, w, p)
    state["evals"] += 1
    order = np.argsort(g0)[::-1]
    for k in range(min(d + 1, pts.shape[0]), 1, -1):
        idx = order[:k]
        y_c = y.copy()
        t_c = float(g0[idx[0]])
        lam = np.full(k, 1.0 / k)
        scale = max(1.0, t_c)
        ok = False
        for _ in range(30):
            u_c, g_c = _eval_objective(y_c, pts, w, p)
            state["evals"] += 1
            if np.any(u_c[idx] <= 1e-13 * max(1.0, radius)):
                break  # kink at a data point; covered by the point candidate
            V = _subgradients(y_c, pts, w, p, idx, u_c, g_c)
            r1 = g_c[idx] - t_c
            r2 = V.T @ lam
            r3 = lam.sum() - 1.0
            res = max(float(np.abs(r1).max()), float(np.abs(r2).max()), abs(r3))
            if res <= 1e-15 * scale:
                ok = True
                break
            H = np.zeros((d, d))
            for j, i in enumerate(idx):
                s = float(np.linalg.norm(V[j]))
                H += lam[j] * _hessian(y_c, pts[i], u_c[i], g_c[i], s, p)
            m = d + 1 + k
            J = np.zeros((m, m))
            rhs = np.zeros(m)
            J[:k, :d] = V
            J[:k, d] = -1.0
            rhs[:k] = -r1
            J[k : k + d, :d] = H
            J[k : k + d, d + 1 :] = V.T
            rhs[k : k + d] = -r2
            J[k + d, d + 1 :] = 1.0
            rhs[k + d] = -r3
            step = np.linalg.lstsq(J, rhs, rcond=None)[0]
            if not np.all(np.isfinite(step)):
                break
            dy = step[:d]
            if np.linalg.norm(dy) > 4.0 * radius:
                break
            y_c = y_c + dy
            t_c += float(step[d])
            lam = lam + step[d + 1 :]
        if ok and np.all(lam >= -1e-9):
            consider(y_c)
    return tuple(best)


def weighted_one_center(
    points,
    weights,
    p: float,
    tol: float = 1e-6,
    max_iter: int = 100_000,
    return_center: bool = False,
):
    """Certified minimax filtration value of a weighted point family.

    Returns the optimal value (and optionally the minimizing center).
    Raises :class:`SolverError` carrying the best (lower, upper) bracket
    if the certificate does not reach ``tol`` within ``max_iter``
    objective evaluations.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if pts.shape[0] != w.shape[0]:
        raise ParameterError("one weight per point required")
    if np.any(w < 0.0) or not np.all(np.isfinite(w)):
        raise ParameterError("weights must be finite and >= 0")
    if not (tol > 0.0):
        raise ParameterError("tol must be positive")
    p = validate_exponent(p)
    n, d = pts.shape

    if n == 1:
        value = float(w[0])
        return (value, pts[0].copy()) if return_center else value

    if p == INF:
        center, radius = miniball(pts)
        value = max(float(w.max()), radius)
        return (value, center) if return_center else value

    # Lower bound seeds: the largest weight, and half the distance between
    # any two points (two-sweep far-point pair).
    far_a = int(np.argmax(np.einsum("ij,ij->i", pts - pts[0], pts - pts[0])))
    dists_a = np.sqrt(np.einsum("ij,ij->i", pts - pts[far_a], pts - pts[far_a]))
    lower = max(float(w.max()), 0.5 * float(dists_a.max()))

    y = pts.mean(axis=0)
    u, g = _eval_objective(y, pts, w, p)
    upper = float(g.max())
    state = {"evals": 1}
    theta_floor = 0.45 * tol

    def phi_from(y0, direction):
        def phi(t):
            state["evals"] += 1
            _, gt = _eval_objective(y0 + t * direction, pts, w, p)
            return float(gt.max())

        return phi

    stalls = 0
    while state["evals"] < max_iter:
        gap = upper - lower
        if gap <= tol:
            break
        theta = max(theta_floor, 0.5 * gap)
        active = np.flatnonzero(g >= upper - theta)
        V = _subgradients(y, pts, w, p, active, u, g)
        z = _min_norm_point(V)
        nu = float(np.linalg.norm(z))
        radius = float(u.max())
        lower = max(lower, upper - theta - nu * radius)
        if upper - lower <= tol:
            break
        if nu * radius <= 0.25 * theta:
            # Hull of active subgradients essentially contains 0; the
            # certificate above shrank the gap, and theta follows it down.
            continue
        direction = -z / nu
        t0 = min(gap / nu, radius)
        t_best, f_best, _ = _section_search(
            phi_from(y, direction), t0, upper, budget=60
        )
        if f_best < upper:
            y = y + t_best * direction
            u, g = _eval_objective(y, pts, w, p)
            state["evals"] += 1
            upper = min(upper, float(g.max()))
        if gap - (upper - lower) >= 0.05 * gap:
            stalls = 0
            continue
        # First-order progress has slowed to a crawl: solve the optimality
        # system for the dominant functions and certify there.
        cand_lower, cand_upper, y_c = _kkt_polish(
            y, pts, w, p, theta_floor, radius, state
        )
        lower = max(lower, cand_lower)
        if cand_upper < upper:
            upper = cand_upper
            y = y_c
            u, g = _eval_objective(y, pts, w, p)
            state["evals"] += 1
        if upper - lower <= tol:
            break
        if upper - lower <= 0.5 * gap:
            stalls = 0
            continue
        stalls += 1
        if stalls >= 3:
            raise SolverError(
                f"minimax solver stalled at bracket [{lower}, {upper}] "
                f"(tol {tol})",
                lower,
                upper,
            )

    if upper - lower > tol:
        raise SolverError(
            f"minimax solver did not certify tol={tol} within {max_iter} "
            f"evaluations; bracket [{lower}, {upper}]",
            lower,
            upper,
        )
    return (upper, y) if return_center else upper
