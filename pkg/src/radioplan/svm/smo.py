"""Sequential minimal optimization over the shared dual form.

Both trainers reduce to

    min 0.5 * b'Qb + p'b   s.t.  y'b = 0,  0 <= b_t <= C,

where Q[s, t] = y_s * y_t * K[s mod n, t mod n]: classification uses the
training labels directly (dual dimension n), tube regression duplicates the
samples with y = [+1 ... +1, -1 ... -1] (dual dimension 2n).  Each step picks
the maximal-violating pair, takes the exact two-variable Newton step clipped
to the box, and stops when the KKT gap drops to the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import NonConvergence

#: Hard cap on working-set selections before giving up.
DEFAULT_MAX_ITER = 10_000_000

DEFAULT_TOL = 1e-3


@njit(cache=True)
def _smo_core(kmat, y, p, c, tol, max_iter):  # pragma: no cover - jitted
    dim = y.shape[0]
    n = kmat.shape[0]
    beta = np.zeros(dim)
    grad = p.copy()
    it = 0
    gap = 0.0
    while it < max_iter:
        m_val = -np.inf
        big_m_val = np.inf
        i = -1
        j = -1
        for t in range(dim):
            yt = y[t]
            bt = beta[t]
            v = -yt * grad[t]
            if (yt > 0.0 and bt < c) or (yt < 0.0 and bt > 0.0):
                if v > m_val:
                    m_val = v
                    i = t
            if (yt > 0.0 and bt > 0.0) or (yt < 0.0 and bt < c):
                if v < big_m_val:
                    big_m_val = v
                    j = t
        if i < 0 or j < 0:
            gap = 0.0
            break
        gap = m_val - big_m_val
        if gap <= tol:
            break
        ii = i % n
        jj = j % n
        curv = kmat[ii, ii] + kmat[jj, jj] - 2.0 * kmat[ii, jj]
        if curv <= 1e-12:
            curv = 1e-12
        lam = gap / curv
        cap_i = (c - beta[i]) if y[i] > 0.0 else beta[i]
        cap_j = beta[j] if y[j] > 0.0 else (c - beta[j])
        if lam > cap_i:
            lam = cap_i
        if lam > cap_j:
            lam = cap_j
        beta[i] += y[i] * lam
        beta[j] -= y[j] * lam
        if beta[i] < 0.0:
            beta[i] = 0.0
        elif beta[i] > c:
            beta[i] = c
        if beta[j] < 0.0:
            beta[j] = 0.0
        elif beta[j] > c:
            beta[j] = c
        for t in range(dim):
            tt = t % n
            grad[t] += lam * y[t] * (kmat[tt, ii] - kmat[tt, jj])
        it += 1
    return beta, grad, it, gap


@dataclass(frozen=True, eq=False)
class DualSolution:
    beta: np.ndarray
    grad: np.ndarray
    iterations: int
    kkt_gap: float
    objective: float


def solve_dual(kmat: np.ndarray, y: np.ndarray, p: np.ndarray, c: float,
               tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER) -> DualSolution:
    kmat = np.ascontiguousarray(kmat, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    p = np.ascontiguousarray(p, dtype=np.float64)
    beta, grad, iterations, gap = _smo_core(
        kmat, y, p, float(c), float(tol), int(max_iter))
    if gap > tol:
        raise NonConvergence(
            f"SMO stopped after {iterations} selections with KKT gap {gap:.3e}")
    objective = 0.5 * float(beta @ (grad - p)) + float(beta @ p)
    return DualSolution(beta=beta, grad=grad, iterations=iterations,
                        kkt_gap=float(gap), objective=objective)


def kkt_bounds(beta: np.ndarray, grad: np.ndarray, y: np.ndarray,
               c: float) -> tuple[float, float]:
    """(max over the up set, min over the down set) of -y*grad; the KKT gap
    is their difference and the bias sits between them."""
    v = -y * grad
    up = ((y > 0) & (beta < c)) | ((y < 0) & (beta > 0))
    down = ((y > 0) & (beta > 0)) | ((y < 0) & (beta < c))
    m_up = float(np.max(v[up])) if np.any(up) else -np.inf
    m_down = float(np.min(v[down])) if np.any(down) else np.inf
    return m_up, m_down
