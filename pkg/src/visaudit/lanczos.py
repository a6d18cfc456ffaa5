"""Truncated SVD of an implicit operator by Golub-Kahan-Lanczos bidiagonalization.

Thick restarts keep the leading Ritz vectors between cycles; both Lanczos bases
are fully reorthogonalized. Only matrix-vector products with the operator and
its transpose are needed.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

Matvec = Callable[[np.ndarray], np.ndarray]


@dataclass
class TruncatedSVD:
    u: np.ndarray  # (m, k)
    s: np.ndarray  # (k,), descending
    vt: np.ndarray  # (k, n)
    iterations: int
    residual: float
    method: str


def _orth(w: np.ndarray, basis: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return w
    for _ in range(2):
        w = w - basis @ (basis.T @ w)
    return w


def _fresh_direction(basis: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(5):
        w = _orth(rng.standard_normal(size), basis)
        nrm = np.linalg.norm(w)
        if nrm > 1e-8:
            return w / nrm
    return np.zeros(size)


def _residuals(matvec, rmatvec, u, s, vt):
    res = 0.0
    for i in range(s.shape[0]):
        r1 = np.linalg.norm(matvec(vt[i]) - s[i] * u[:, i])
        r2 = np.linalg.norm(rmatvec(u[:, i]) - s[i] * vt[i])
        res = max(res, r1, r2)
    return res


def lanczos_svd(
    matvec: Matvec,
    rmatvec: Matvec,
    shape: tuple[int, int],
    k: int = 1,
    ncv: int | None = None,
    tol: float = 1e-10,
    maxiter: int = 300,
    seed: int = 0,
) -> TruncatedSVD:
    """Top-``k`` singular triplets of the ``shape`` operator given by ``matvec``/``rmatvec``.

    Converged when every Ritz triplet has residual ``||A^T u - s v|| <= tol * s_1``;
    the returned ``residual`` is recomputed explicitly from the final vectors.
    """
    m, n = shape
    dim = min(m, n)
    if k < 1 or k > dim:
        raise ValueError(f"k must be in [1, {dim}]")
    if n > m:
        # iterate on the transpose so the right basis spans the smaller side
        t = lanczos_svd(rmatvec, matvec, (n, m), k, ncv, tol, maxiter, seed)
        return TruncatedSVD(t.vt.T.copy(), t.s, t.u.T.copy(), t.iterations, t.residual, t.method)
    if ncv is None:
        ncv = max(2 * k + 10, 20)
    ncv = min(ncv, dim)
    # ncv == keep only when the whole space is tiny; one cycle is then exact
    keep = min(ncv - 1, max(k + 2, ncv // 2)) if ncv > k else ncv
    rng = np.random.default_rng(seed)

    V = np.zeros((n, ncv))
    U = np.zeros((m, ncv))
    B = np.zeros((ncv, ncv))
    v0 = rng.standard_normal(n)
    V[:, 0] = v0 / np.linalg.norm(v0)
    start = 0
    r = np.zeros(n)
    beta = 0.0
    Ub = sb = Vbt = None

    for it in range(1, maxiter + 1):
        for j in range(start, ncv):
            w = _orth(matvec(V[:, j]), U[:, :j])
            alpha = np.linalg.norm(w)
            if alpha < 1e-14:
                w = _fresh_direction(U[:, :j], m, rng)
                alpha = 0.0
            else:
                w /= alpha
            U[:, j] = w
            B[j, j] = alpha
            r = _orth(rmatvec(U[:, j]), V[:, : j + 1])
            beta = np.linalg.norm(r)
            if j + 1 < ncv:
                if beta < 1e-14:
                    V[:, j + 1] = _fresh_direction(V[:, : j + 1], n, rng)
                    B[j, j + 1] = 0.0
                else:
                    V[:, j + 1] = r / beta
                    B[j, j + 1] = beta

        Ub, sb, Vbt = np.linalg.svd(B)
        ritz_res = beta * np.abs(Ub[-1, :k])
        scale = max(sb[0], np.finfo(float).tiny)
        if np.all(ritz_res <= tol * scale) or ncv <= keep:
            u = U @ Ub[:, :k]
            vt = (V @ Vbt[:k].T).T
            s = sb[:k].copy()
            return TruncatedSVD(u, s, vt, it, _residuals(matvec, rmatvec, u, s, vt), "lanczos")

        # thick restart on the leading `keep` Ritz vectors
        Vk = V @ Vbt[:keep].T
        Uk = U @ Ub[:, :keep]
        coupling = beta * Ub[-1, :keep]
        V[:] = 0.0
        U[:] = 0.0
        B[:] = 0.0
        V[:, :keep] = Vk
        U[:, :keep] = Uk
        B[:keep, :keep] = np.diag(sb[:keep])
        B[:keep, keep] = coupling
        if beta < 1e-14:
            V[:, keep] = _fresh_direction(V[:, :keep], n, rng)
        else:
            V[:, keep] = _orth(r / beta, V[:, :keep])
            V[:, keep] /= np.linalg.norm(V[:, keep])
        start = keep

    u = U @ Ub[:, :k]
    vt = (V @ Vbt[:k].T).T
    s = sb[:k].copy()
    res = _residuals(matvec, rmatvec, u, s, vt)
    raise ConvergenceError(f"Lanczos bidiagonalization did not converge in {maxiter} restarts", res)


def power_svd(
    matvec: Matvec,
    rmatvec: Matvec,
    shape: tuple[int, int],
    tol: float = 1e-10,
    maxiter: int = 20000,
    seed: int = 0,
) -> TruncatedSVD:
    """Leading singular triplet by power iteration on A^T A."""
    m, n = shape
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    s = 0.0
    u = np.zeros(m)
    res = np.inf
    for it in range(1, maxiter + 1):
        w = matvec(v)
        s = np.linalg.norm(w)
        if s == 0:
            raise ConvergenceError("operator annihilated the iterate", 0.0)
        u = w / s
        z = rmatvec(u)
        res = np.linalg.norm(z - s * v)
        v = z / np.linalg.norm(z)
        if res <= tol * s:
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {maxiter} steps", res)
    w = matvec(v)
    s = np.linalg.norm(w)
    u = w / s
    res = _residuals(matvec, rmatvec, u[:, None], np.array([s]), v[None, :])
    return TruncatedSVD(u[:, None], np.array([s]), v[None, :], it, res, "power")


def truncated_svd(matvec, rmatvec, shape, k=1, tol=1e-10, maxiter=300, seed=0) -> TruncatedSVD:
    """Lanczos first; for ``k == 1`` fall back to power iteration if it stalls."""
    try:
        return lanczos_svd(matvec, rmatvec, shape, k=k, tol=tol, maxiter=maxiter, seed=seed)
    except ConvergenceError:
        if k != 1:
            raise
        return power_svd(matvec, rmatvec, shape, tol=tol, seed=seed)
