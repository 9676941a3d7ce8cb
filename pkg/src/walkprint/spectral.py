"""Dominant left eigenvectors of the walk operator M = D^-1 A.

M is similar to the symmetric matrix  N_s = D^-1/2 A D^-1/2 : if w is an
eigenvector of N_s with eigenvalue lam, then u = D^1/2 w satisfies
u' M = lam u'. Eigenpairs of N_s are computed by deflated power iteration
on the shifted operator N_s + c I (c > 1 keeps the spectrum positive so the
largest-magnitude eigenvalue is always the largest algebraic one), with the
iterate re-orthogonalized against previously found vectors at every step.

"Dominant" therefore means largest *algebraic* eigenvalue; on bipartite
graphs the magnitude ordering would pick lam = -1 instead, which is not what
the features want.

The first pair is known in closed form: w1 = sqrt(d)/||sqrt(d)|| with
lam = 1, i.e. u1 is the stationary distribution direction. It is emitted
directly and deflated from the rest of the search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .walks import WalkModel

_SHIFT = 1.5
_MAX_ITER = 10_000
# Residual floor the iteration aims for; the contract tolerance (1e-10 * N)
# is only the acceptance bound checked at the end.
_TARGET_FLOOR = 1e-14
_STALL_WINDOW = 100


class EigenConvergenceError(RuntimeError):
    """Deflated iteration hit its iteration cap above tolerance."""

    def __init__(self, index: int, residual: float, tolerance: float):
        super().__init__(
            f"eigenvector {index + 1} did not converge: residual {residual:.3e} "
            f"> tolerance {tolerance:.3e}"
        )
        self.index = index
        self.residual = residual
        self.tolerance = tolerance


@dataclass(frozen=True)
class SpectralBasis:
    """Leading left eigenpairs of M, ordered by descending eigenvalue.

    ``left_eigenvectors`` holds unit 2-norm rows; the sign is fixed so the
    entry of largest magnitude (lowest index on ties) is positive.
    ``residuals[i]`` is ||M' u_i - lam_i u_i||_2.
    """

    eigenvalues: np.ndarray
    left_eigenvectors: np.ndarray
    residuals: np.ndarray

    def __len__(self) -> int:
        return self.eigenvalues.size


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(vec))
    return -vec if vec[lead] < 0 else vec


def dominant_left_eigenvectors(
    m: WalkModel, p: int, tolerance: float | None = None, max_iter: int = _MAX_ITER
) -> SpectralBasis:
    """Compute the first p dominant left eigenpairs of M.

    Requests beyond the graph size are truncated to N vectors (callers pad).
    Raises :class:`EigenConvergenceError` when a vector cannot reach the
    residual tolerance (default 1e-10 * N) within ``max_iter`` steps.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    n = m.graph.num_nodes
    if tolerance is None:
        tolerance = 1e-10 * n
    p_eff = min(p, n)

    adj = m.graph.adjacency
    sqrt_d = np.sqrt(m.degrees)

    def sym_apply(x: np.ndarray) -> np.ndarray:
        return (adj @ (x / sqrt_d)) / sqrt_d

    def left_residual(u: np.ndarray, lam: float) -> float:
        # M' u = A D^-1 u for symmetric A
        return float(np.linalg.norm(adj @ (u / m.degrees) - lam * u))

    ws: list[np.ndarray] = []
    us: list[np.ndarray] = []
    lams: list[float] = []
    residuals: list[float] = []

    # Stationary pair, exact up to rounding.
    w1 = sqrt_d / np.linalg.norm(sqrt_d)
    u1 = _fix_sign(m.pi / np.linalg.norm(m.pi))
    ws.append(w1)
    us.append(u1)
    lams.append(float(w1 @ sym_apply(w1)))
    residuals.append(left_residual(u1, 1.0))

    start = 1.0 + 0.5 * (np.arange(n) + 1.0) / n

    for idx in range(1, p_eff):
        x = start.copy()
        best = np.inf
        stall = 0
        converged = False
        resid = np.inf
        theta = 0.0
        for _ in range(max_iter):
            for w in ws:
                x -= (w @ x) * w
            nrm = np.linalg.norm(x)
            if nrm == 0.0:
                # start vector lies in the found span; reseed from a fixed
                # secondary direction
                x = np.cos(np.arange(n) + float(idx))
                continue
            x /= nrm
            z = sym_apply(x)
            theta = float(x @ z)
            resid = float(np.linalg.norm(z - theta * x))
            if resid <= _TARGET_FLOOR * max(1.0, np.sqrt(n)):
                converged = True
                break
            if resid < best * (1.0 - 1e-3):
                best = resid
                stall = 0
            else:
                stall += 1
                if stall >= _STALL_WINDOW and resid <= tolerance:
                    converged = True
                    break
            x = z + _SHIFT * x

        u = x * sqrt_d
        u = _fix_sign(u / np.linalg.norm(u))
        res_u = left_residual(u, theta)
        if not (converged or resid <= tolerance) or res_u > tolerance:
            raise EigenConvergenceError(idx, max(res_u, resid), tolerance)
        ws.append(x)
        us.append(u)
        lams.append(theta)
        residuals.append(res_u)

    order = np.argsort(-np.asarray(lams), kind="stable")
    return SpectralBasis(
        eigenvalues=np.asarray(lams)[order],
        left_eigenvectors=np.asarray(us)[order],
        residuals=np.asarray(residuals)[order],
    )
