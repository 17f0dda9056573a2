"""Brute-force reference solver for the small dual problems.

Solves  min 0.5 * b'Qb + p'b  s.t.  y'b = 0,  0 <= b <= C  by accelerated
projected gradient descent (projection onto the box-hyperplane intersection
via bisection on the hyperplane multiplier), followed by an exact solve on
the detected active set.  Intended for dual dimensions up to a few dozen;
independent of the solver under test.
"""

import numpy as np


def project(v, y, c):
    """Project v onto {0 <= b <= C, y'b = 0} (y entries are +-1).

    The hyperplane multiplier solves y @ clip(v - lam*y, 0, C) = 0, a
    piecewise-linear nonincreasing function of lam; it is located exactly
    from the clip breakpoints.
    """
    pos, neg = y > 0, y < 0
    bps = np.unique(np.concatenate(
        [v[pos] - c, v[pos], -v[neg], c - v[neg]]))
    clipped = np.clip(v[None, :] - bps[:, None] * y[None, :], 0.0, c)
    r = clipped @ y
    above = np.nonzero(r >= 0.0)[0]
    if len(above) == 0:
        lam = bps[0]
    else:
        k = above[-1]
        if r[k] == 0.0 or k + 1 >= len(bps):
            lam = bps[k]
        else:
            lam = bps[k] + (bps[k + 1] - bps[k]) * r[k] / (r[k] - r[k + 1])
    return np.clip(v - lam * y, 0.0, c)


def _objective(q, p, b):
    return 0.5 * float(b @ q @ b) + float(p @ b)


def _active_set_polish(q, p, y, c, b, tol=1e-8):
    """Exact equality-constrained solve on the active set guessed from b."""
    n = len(b)
    lower = b <= tol * max(c, 1.0)
    upper = b >= c - tol * max(c, 1.0)
    free = ~(lower | upper)
    nf = int(free.sum())
    if nf == 0:
        return None
    rhs_fixed = q[:, upper] @ np.full(int(upper.sum()), c)
    kkt = np.zeros((nf + 1, nf + 1))
    kkt[:nf, :nf] = q[np.ix_(free, free)]
    kkt[:nf, nf] = y[free]
    kkt[nf, :nf] = y[free]
    rhs = np.zeros(nf + 1)
    rhs[:nf] = -p[free] - rhs_fixed[free]
    rhs[nf] = -float(y[upper] @ np.full(int(upper.sum()), c))
    try:
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    except np.linalg.LinAlgError:
        return None
    bf = sol[:nf]
    if np.any(bf < -1e-9) or np.any(bf > c + 1e-9):
        return None
    out = np.zeros(n)
    out[upper] = c
    out[free] = np.clip(bf, 0.0, c)
    if abs(float(y @ out)) > 1e-7 * max(c, 1.0):
        return None
    return out


def solve_box_qp(q, p, y, c, iters=4000):
    """Reference optimum (b, objective) of the constrained dual.

    Accelerated projected gradient identifies the active set; the exact
    KKT solve on that set then supplies full precision.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(p)
    lip = max(float(np.max(np.linalg.eigvalsh(q))), 1e-12)
    step = 1.0 / lip

    b = project(np.zeros(n), y, c)
    velocity = b.copy()
    t_prev = 1.0
    best = b
    best_obj = _objective(q, p, b)
    for k in range(iters):
        grad = q @ velocity + p
        b_next = project(velocity - step * grad, y, c)
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_prev * t_prev))
        velocity = b_next + ((t_prev - 1.0) / t_next) * (b_next - b)
        obj = _objective(q, p, b_next)
        if obj < best_obj:
            best_obj = obj
            best = b_next
        b = b_next
        t_prev = t_next
        if k % 20 == 19:
            # Fixed-point residual of the projected gradient map.
            resid = np.max(np.abs(
                best - project(best - step * (q @ best + p), y, c)))
            if resid < 1e-13 * (1.0 + c):
                break

    # Try a few active-set thresholds; keep the best feasible polish.
    for tol in (1e-8, 1e-6, 1e-4):
        polished = _active_set_polish(q, p, y, c, best, tol=tol)
        if polished is not None:
            pobj = _objective(q, p, polished)
            if pobj < best_obj:
                best_obj = pobj
                best = polished
    return best, best_obj


def csvc_dual(kmat, labels, c):
    """Reference optimum of the soft-margin classification dual."""
    labels = np.asarray(labels, dtype=float)
    q = np.outer(labels, labels) * kmat
    p = -np.ones(len(labels))
    return solve_box_qp(q, p, labels, c)


def esvr_dual(kmat, targets, c, epsilon):
    """Reference optimum of the tube-regression dual (2n variables,
    b = [alpha, alpha_star], with the +sum(m(alpha - alpha*)) linear term
    that pairs with the (alpha* - alpha) predictor)."""
    targets = np.asarray(targets, dtype=float)
    n = len(targets)
    q = np.block([[kmat, -kmat], [-kmat, kmat]])
    y = np.concatenate([np.ones(n), -np.ones(n)])
    p = epsilon + y * np.concatenate([targets, targets])
    return solve_box_qp(q, p, y, c)
