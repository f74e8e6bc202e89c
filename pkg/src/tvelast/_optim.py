"""Small dense quasi-Newton minimizer with finite-difference derivatives.

Built for low-dimensional smooth objectives (two or three parameters) where
the caller needs full control over the accepted-iterate sequence and the
convergence tests: BFGS updates on the inverse Hessian, Armijo backtracking,
and a steepest-descent fallback when the curvature condition or the line
search fails. The objective may return +inf to reject a region (used for
box bounds); accepted iterates are strictly non-increasing in f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ARMIJO_C1 = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 60


@dataclass
class OptResult:
    x: np.ndarray
    f: float
    grad: np.ndarray
    n_iter: int
    converged: bool
    reason: str
    accepted_f: list[float]


def fd_step(x: np.ndarray, scale: float = 1e-4) -> np.ndarray:
    """Per-coordinate central-difference step: scale * max(1, |x_i|)."""
    return scale * np.maximum(1.0, np.abs(x))


def fd_gradient(fun: Callable[[np.ndarray], float], x: np.ndarray,
                scale: float = 1e-4) -> np.ndarray:
    """Central differences, degrading to one-sided at an infinite wall.

    The objective may return +inf outside its feasible box; a coordinate
    whose probe crosses the wall uses the finite side only, and 0 when both
    sides are infeasible (the remaining coordinates then drive the step).
    """
    h = fd_step(x, scale)
    g = np.empty_like(x, dtype=float)
    f0 = None
    for i in range(len(x)):
        xp = x.copy(); xp[i] += h[i]
        xm = x.copy(); xm[i] -= h[i]
        fp, fm = fun(xp), fun(xm)
        if np.isfinite(fp) and np.isfinite(fm):
            g[i] = (fp - fm) / (2.0 * h[i])
            continue
        if f0 is None:
            f0 = fun(x)
        if np.isfinite(fp):
            g[i] = (fp - f0) / h[i]
        elif np.isfinite(fm):
            g[i] = (f0 - fm) / h[i]
        else:
            g[i] = 0.0
    return g


def fd_hessian(fun: Callable[[np.ndarray], float], x: np.ndarray,
               scale: float = 1e-4) -> np.ndarray:
    """Observed Hessian by central differences (symmetric by construction)."""
    n = len(x)
    h = fd_step(x, scale)
    hess = np.empty((n, n))
    f0 = fun(x)
    for i in range(n):
        xp = x.copy(); xp[i] += h[i]
        xm = x.copy(); xm[i] -= h[i]
        hess[i, i] = (fun(xp) - 2.0 * f0 + fun(xm)) / (h[i] * h[i])
        for j in range(i + 1, n):
            xpp = x.copy(); xpp[i] += h[i]; xpp[j] += h[j]
            xpm = x.copy(); xpm[i] += h[i]; xpm[j] -= h[j]
            xmp = x.copy(); xmp[i] -= h[i]; xmp[j] += h[j]
            xmm = x.copy(); xmm[i] -= h[i]; xmm[j] -= h[j]
            hess[i, j] = hess[j, i] = (
                fun(xpp) - fun(xpm) - fun(xmp) + fun(xmm)
            ) / (4.0 * h[i] * h[j])
    return hess


def _backtrack(fun, x, f0, g, d, gdot):
    """Armijo backtracking along d; returns (x_new, f_new) or None."""
    step = 1.0
    for _ in range(MAX_BACKTRACKS):
        x_new = x + step * d
        f_new = fun(x_new)
        if np.isfinite(f_new) and f_new <= f0 + ARMIJO_C1 * step * gdot:
            return x_new, f_new
        step *= BACKTRACK_FACTOR
    return None


def minimize(fun: Callable[[np.ndarray], float], x0, *, max_iter: int = 500,
             grad_tol: float = 1e-6, f_rel_tol: float = 1e-9,
             grad_accept: float = 5e-5, fd_scale: float = 1e-4) -> OptResult:
    """Minimize fun from x0; see the module docstring for the method.

    Converges when the finite-difference gradient infinity norm drops below
    grad_tol, or when an accepted step improves f by less than f_rel_tol in
    relative terms (also triggered when no descent step can be found). A
    stalled improvement is only accepted as convergence while the gradient
    is already below grad_accept; otherwise the curvature model is assumed
    stale, reset, and iteration continues.
    """
    x = np.asarray(x0, dtype=float).copy()
    f = fun(x)
    if not np.isfinite(f):
        raise ValueError(f"objective is non-finite at the starting point: {f}")
    g = fd_gradient(fun, x, fd_scale)
    n = len(x)
    hinv = np.eye(n)
    first_update = True
    accepted = [f]

    for it in range(1, max_iter + 1):
        gnorm = float(np.max(np.abs(g)))
        if gnorm < grad_tol:
            return OptResult(x, f, g, it - 1, True, "gradient", accepted)

        d = -hinv @ g
        gdot = float(g @ d)
        if not np.isfinite(gdot) or gdot >= 0.0:
            hinv = np.eye(n)
            first_update = True
            d = -g
            gdot = float(g @ d)

        hit = _backtrack(fun, x, f, g, d, gdot)
        if hit is None and not np.array_equal(d, -g):
            # curvature model is bad; damp to steepest descent and retry
            hinv = np.eye(n)
            first_update = True
            d = -g
            gdot = float(g @ d)
            hit = _backtrack(fun, x, f, g, d, gdot)
        if hit is None:
            # no descent direction makes progress: numerically stationary
            return OptResult(x, f, g, it, True, "no_improvement", accepted)

        x_new, f_new = hit
        g_new = fd_gradient(fun, x_new, fd_scale)
        s = x_new - x
        yvec = g_new - g
        sy = float(s @ yvec)
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(yvec)):
            if first_update:
                hinv = np.eye(n) * (sy / float(yvec @ yvec))
                first_update = False
            rho = 1.0 / sy
            i_mat = np.eye(n)
            left = i_mat - rho * np.outer(s, yvec)
            hinv = left @ hinv @ left.T + rho * np.outer(s, s)

        improvement = f - f_new
        x, f, g = x_new, f_new, g_new
        accepted.append(f)
        if improvement < f_rel_tol * max(1.0, abs(f)):
            if float(np.max(np.abs(g))) < grad_accept:
                return OptResult(x, f, g, it, True, "f_rel_tol", accepted)
            hinv = np.eye(n)
            first_update = True

    return OptResult(x, f, g, max_iter, False, "max_iter", accepted)
