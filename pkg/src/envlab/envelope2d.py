"""Constrained convex envelopes of 2-d sampled weights.

The envelope of u(tau, s) over a gradient polytope P is the pointwise
maximum of all affine minorants of u whose slope pair lies in P.  The
primary route works directly with that characterisation:

1. cheap certification: a grid node v where some plane with slope in P
   supports u at v is a contact node, so the envelope equals u there.
   Candidate slopes are the local central and one-sided divided-difference
   gradients projected onto P;
2. every remaining node gets the exact best affine minorant from a small
   linear program (three unknowns: slope pair and offset), and the optimal
   plane is propagated to all nodes inside the convex hull of its contact
   set, so only a handful of programs run per face of the envelope.

The independent oracle :func:`hull_envelope_2d` builds the lower convex
hull of the lifted point cloud with Qhull and evaluates its facet planes.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .envelope import _monotone_chain_lower
from .errors import ConvergenceError
from .weights import SampledWeight2D

__all__ = [
    "equilibrium_envelope_2d",
    "hull_envelope_2d",
    "grid_line_defects",
    "polygon_inequalities",
    "project_to_polygon",
]


def polygon_inequalities(poly):
    """Half-plane representation {x : A x <= b} of a convex vertex set."""
    poly = np.asarray(poly, dtype=float)
    if poly.shape[0] == 1:
        v = poly[0]
        a = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        b = np.array([v[0], -v[0], v[1], -v[1]])
        return a, b
    if poly.shape[0] == 2:
        p, q = poly
        d = q - p
        n = np.array([d[1], -d[0]])
        a = np.array([n, -n, d, -d])
        b = np.array([n @ p, -(n @ p), max(d @ p, d @ q), -min(d @ p, d @ q)])
        return a, b
    nxt = np.roll(poly, -1, axis=0)
    d = nxt - poly
    # CCW polygon: outward normal of each edge
    normals = np.stack([d[:, 1], -d[:, 0]], axis=1)
    return normals, np.einsum("ij,ij->i", normals, poly)


def project_to_polygon(points, poly):
    """Euclidean projection of points (n, 2) onto a convex vertex set."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    poly = np.asarray(poly, dtype=float)
    if poly.shape[0] == 1:
        return np.broadcast_to(poly[0], pts.shape).copy()
    a, b = polygon_inequalities(poly)
    inside = np.all(pts @ a.T <= b[None, :] + 1e-12, axis=1)
    out = pts.copy()
    todo = ~inside
    if np.any(todo):
        p = pts[todo]
        best = None
        best_d = np.full(p.shape[0], np.inf)
        m = poly.shape[0]
        segs = [(poly[i], poly[(i + 1) % m]) for i in range(m)] if m > 2 \
            else [(poly[0], poly[1])]
        for s0, s1 in segs:
            d = s1 - s0
            denom = float(d @ d)
            t = ((p - s0) @ d) / denom if denom > 0 else np.zeros(p.shape[0])
            t = np.clip(t, 0.0, 1.0)
            proj = s0 + t[:, None] * d
            dist = np.einsum("ij,ij->i", p - proj, p - proj)
            if best is None:
                best, best_d = proj, dist
            else:
                take = dist < best_d
                best[take] = proj[take]
                best_d[take] = dist[take]
        out[todo] = best
    return out


def _node_arrays(w: SampledWeight2D):
    tt, ss = np.meshgrid(w.grid_tau, w.grid_s, indexing="ij")
    return tt.ravel(), ss.ravel(), w.values.ravel()


def _certify(wt, ws, uu, slopes, candidates, tol):
    """Nodes where the candidate-slope plane through the node is a minorant."""
    n = uu.size
    ok = np.zeros(n, dtype=bool)
    val_v = uu[candidates] - slopes[:, 0] * wt[candidates] - slopes[:, 1] * ws[candidates]
    chunk = max(1, int(2**23 // n))
    for k in range(0, candidates.size, chunk):
        idx = slice(k, k + chunk)
        block = (uu[None, :]
                 - slopes[idx, 0][:, None] * wt[None, :]
                 - slopes[idx, 1][:, None] * ws[None, :])
        ok[candidates[idx]] |= block.min(axis=1) >= val_v[idx] - tol
    return ok


def _one_sided_gradients(w: SampledWeight2D):
    """Forward/backward divided differences along each axis, edge-clamped."""
    u = w.values
    dt = np.diff(w.grid_tau)[:, None]
    ds = np.diff(w.grid_s)[None, :]
    ft = np.diff(u, axis=0) / dt
    fs = np.diff(u, axis=1) / ds
    fwd_t = np.vstack([ft, ft[-1:]])
    bwd_t = np.vstack([ft[:1], ft])
    fwd_s = np.hstack([fs, fs[:, -1:]])
    bwd_s = np.hstack([fs[:, :1], fs])
    return (fwd_t, bwd_t, fwd_s, bwd_s)


def _points_in_polygon(px, py, verts):
    """Vectorised containment test for a CCW convex polygon (closed)."""
    inside = np.ones(px.size, dtype=bool)
    m = verts.shape[0]
    for i in range(m):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % m]
        inside &= (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0) >= -1e-9
    return inside


def equilibrium_envelope_2d(w: SampledWeight2D, max_programs: int = None,
                            contact_tol: float = 1e-11) -> SampledWeight2D:
    """Largest convex minorant of u with gradient in ``w.slope_polytope``.

    Exact at the grid nodes (up to LP solver tolerance); the result is below
    the input and convex along every grid line.

    Raises :class:`ConvergenceError` when the linear-program budget is
    exhausted before every node is resolved.
    """
    wt, ws, uu = _node_arrays(w)
    n = uu.size
    if max_programs is None:
        max_programs = 4 * n + 1024
    scale = max(1.0, float(np.abs(uu).max()))
    tol = contact_tol * scale
    poly = w.slope_polytope

    resolved = np.zeros(n, dtype=bool)
    env = uu.copy()

    # --- certification sweep: central gradients, then one-sided combos
    gt, gs = np.gradient(w.values, w.grid_tau, w.grid_s)
    central = np.stack([gt.ravel(), gs.ravel()], axis=1)
    cand = np.arange(n)
    slopes = project_to_polygon(central, poly)
    resolved |= _certify(wt, ws, uu, slopes[cand], cand, tol)

    fwd_t, bwd_t, fwd_s, bwd_s = _one_sided_gradients(w)
    for st in (fwd_t, bwd_t):
        for ss_ in (fwd_s, bwd_s):
            todo = np.flatnonzero(~resolved)
            if todo.size == 0:
                break
            combo = np.stack([st.ravel()[todo], ss_.ravel()[todo]], axis=1)
            combo = project_to_polygon(combo, poly)
            resolved |= _certify(wt, ws, uu, combo, todo, tol)

    # --- exact best minorant per remaining node.  Each program runs on a
    # small working set of node constraints grown by cutting planes: the
    # relaxed optimum is exact once it violates no constraint on the full
    # grid.  Binding rows are pooled across nodes, so after warmup most
    # nodes settle in a single small solve.
    rows = np.stack([wt, ws, np.ones(n)], axis=1)
    a_poly, b_poly = polygon_inequalities(poly)
    a_poly3 = np.hstack([a_poly, np.zeros((a_poly.shape[0], 1))])
    base = np.arange(0, n, max(1, n // 512))
    carry = np.empty(0, dtype=np.intp)  # binding rows of the previous node
    feas_tol = 1e-9 * scale

    n_programs = 0
    while True:
        todo = np.flatnonzero(~resolved)
        if todo.size == 0:
            break
        v = int(todo[0])
        cost = np.array([-wt[v], -ws[v], -1.0])
        work = np.unique(np.concatenate([base, carry, [v]]))
        while True:
            if n_programs >= max_programs:
                raise ConvergenceError(
                    f"{todo.size} nodes unresolved after {n_programs} programs",
                    residual=int(todo.size))
            res = linprog(c=cost,
                          A_ub=np.concatenate([rows[work], a_poly3]),
                          b_ub=np.concatenate([uu[work], b_poly]),
                          bounds=[(None, None)] * 3, method="highs",
                          options={"primal_feasibility_tolerance": 1e-10,
                                   "dual_feasibility_tolerance": 1e-10})
            n_programs += 1
            if not res.success:
                raise ConvergenceError(
                    f"linear program failed at node {v}: {res.message}",
                    residual=float(todo.size))
            p, q, alpha = res.x
            plane = p * wt + q * ws + alpha
            excess = plane - uu
            if excess.max() <= feas_tol:
                break
            top = np.argpartition(excess, -64)[-64:]
            grown = np.unique(np.concatenate(
                [work, top[excess[top] > feas_tol]]))
            if grown.size == work.size:
                # solver tolerance floor reached; shift-down below makes
                # the plane feasible
                break
            work = grown
        alpha -= max(0.0, float(excess.max()))
        plane = p * wt + q * ws + alpha
        carry = np.flatnonzero(excess >= -1e-7 * scale)
        if carry.size > 384:
            carry = carry[np.argsort(excess[carry])[-384:]]
        env[v] = plane[v]
        resolved[v] = True
        # propagate across the face spanned by the plane's contact set
        touch = np.flatnonzero(uu - plane <= 1e-9 * scale)
        if touch.size >= 3:
            pts_t, pts_s = wt[touch], ws[touch]
            order = np.lexsort((pts_s, pts_t))
            t_sorted, s_sorted = pts_t[order], pts_s[order]
            lower = _monotone_chain_lower(t_sorted, s_sorted)
            upper = _monotone_chain_lower(t_sorted, -s_sorted)
            verts_idx = np.concatenate([lower, upper[::-1][1:-1]])
            verts = np.stack([t_sorted[verts_idx], s_sorted[verts_idx]], axis=1)
            if verts.shape[0] >= 3:
                inface = _points_in_polygon(wt, ws, verts) & ~resolved
                env[inface] = plane[inface]
                resolved[inface] = True
    return w.with_values(np.minimum(env, uu).reshape(w.values.shape))


def hull_envelope_2d(w: SampledWeight2D) -> np.ndarray:
    """Lower convex hull of the lifted grid cloud, evaluated at the nodes.

    Gradient constraints are ignored, so this is an oracle for inputs whose
    envelope gradients stay inside the polytope.
    """
    wt, ws, uu = _node_arrays(w)
    pts = np.stack([wt, ws, uu], axis=1)
    hull = ConvexHull(pts, qhull_options="Qt")
    eqs = hull.equations
    lower = eqs[eqs[:, 2] < -1e-12]
    # each lower facet plane supports the hull from below, so the hull
    # function is the max of the facet planes
    out = np.full(uu.size, -np.inf)
    chunk = max(1, int(2**23 // uu.size))
    for k in range(0, lower.shape[0], chunk):
        block = lower[k:k + chunk]
        planes = -(block[:, 0][:, None] * wt[None, :]
                   + block[:, 1][:, None] * ws[None, :]
                   + block[:, 3][:, None]) / block[:, 2][:, None]
        out = np.maximum(out, planes.max(axis=0))
    return np.minimum(out, uu).reshape(w.values.shape)


def grid_line_defects(values, grid_tau, grid_s) -> float:
    """Worst discrete-convexity violation along grid rows and columns."""
    u = np.asarray(values, dtype=float)
    worst = 0.0
    dt = np.diff(grid_tau)
    d1 = np.diff(u, axis=0) / dt[:, None]
    if d1.shape[0] >= 2:
        second = 2.0 * np.diff(d1, axis=0) / (grid_tau[2:] - grid_tau[:-2])[:, None]
        worst = max(worst, float(np.maximum(0.0, -second).max()))
    ds = np.diff(grid_s)
    d1 = np.diff(u, axis=1) / ds[None, :]
    if d1.shape[1] >= 2:
        second = 2.0 * np.diff(d1, axis=1) / (grid_s[2:] - grid_s[:-2])[None, :]
        worst = max(worst, float(np.maximum(0.0, -second).max()))
    return worst
