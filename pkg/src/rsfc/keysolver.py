"""Division-free solvers for the rational interpolation behind the key equation.

Given points ``x_i`` with value pairs ``(d_i, g_i)`` the solvers build a 2x2
polynomial matrix whose rows ``(W, N)`` satisfy ``d_i W(x_i) + g_i N(x_i) = 0``
at every point, with row ranks ``rank(W, N) = max(2 deg W, 2 deg N + 1)`` kept
minimal. For decoding ``d_i = u(omega[i])`` and ``g_i = 1``, so the selected row
gives ``lambda = W`` and ``z = N = lambda u`` on the points.

``ma_solve`` works on monomial coefficients one instance at a time and serves
as the reference. ``fdma_solve`` and ``fma_solve`` work on X-basis coefficients
for a batch of instances along the leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Basis
from .gf import Arith
from .transforms import eval_point, fft, ifft_extended, ifft_partial


@dataclass
class BasisMatrix:
    entries: np.ndarray  # (..., 2, 2, L) row r = (W_r, N_r)
    r1: np.ndarray
    r2: np.ndarray
    kind: str  # "xbar" or "monomial"


@dataclass
class KeySolution:
    lam: np.ndarray
    z: np.ndarray
    rank: np.ndarray
    kind: str

    @property
    def lam_degree_bound(self) -> np.ndarray:
        return self.rank // 2


def _branch(dj, gj, r1, r2):
    # Row 2 takes x - x_j times row 1 when that keeps the ranks balanced.
    return (gj == 0) | ((dj != 0) & (r1 < r2))


def _next_ranks(b1, r1, r2):
    return np.where(b1, r2, r1), np.where(b1, r1, r2) + 2


# Reference solver


def _pscale(ops: Arith, c: int, p: list[int]) -> list[int]:
    return [ops.mul(c, a) for a in p]


def _padd(ops: Arith, p: list[int], q: list[int]) -> list[int]:
    if len(p) < len(q):
        p, q = q, p
    return [ops.add(a, b) for a, b in zip(p, q)] + p[len(q):]


def _pmul_linear(ops: Arith, p: list[int], xj: int) -> list[int]:
    # (x - xj) p
    return _padd(ops, [0] + p, _pscale(ops, xj, p))


def ma_solve(ops: Arith, xs, d, g, ranks: tuple[int, int] = (0, 1)) -> BasisMatrix:
    """Point-by-point solver on monomial coefficients for one instance."""
    xs = [int(x) for x in xs]
    d = [int(x) for x in d]
    g = [int(x) for x in g]
    rho = len(xs)
    if not len(d) == len(g) == rho:
        raise ValueError("xs, d and g must have equal length")
    if len(set(xs)) != rho:
        raise ValueError("evaluation points must be distinct")
    r1, r2 = ranks
    rows = [[[1], [0]], [[0], [1]]]
    for j in range(rho):
        dj, gj, xj = d[j], g[j], xs[j]
        b1 = gj == 0 or (dj != 0 and r1 < r2)
        for i in range(j + 1, rho):
            di, gi = d[i], g[i]
            d[i] = ops.add(ops.mul(gj, di), ops.mul(dj, gi))
            g[i] = ops.mul(ops.add(xs[i], xj), di if b1 else gi)
        src = rows[0] if b1 else rows[1]
        new1 = [
            _padd(ops, _pscale(ops, gj, rows[0][c]), _pscale(ops, dj, rows[1][c]))
            for c in range(2)
        ]
        new2 = [_pmul_linear(ops, src[c], xj) for c in range(2)]
        rows = [new1, new2]
        r1, r2 = (r2, r1 + 2) if b1 else (r1, r2 + 2)
    entries = np.zeros((2, 2, rho + 1), dtype=np.int64)
    for r in range(2):
        for c in range(2):
            p = rows[r][c][: rho + 1]
            entries[r, c, : len(p)] = p
    return BasisMatrix(entries, np.asarray(r1), np.asarray(r2), "monomial")


def select_solution(M: BasisMatrix) -> KeySolution:
    """Pick the row of minimal rank. Ranks always differ since their sum is odd."""
    if np.any(M.r1 == M.r2):
        raise AssertionError("equal row ranks: rank bookkeeping is broken")
    use2 = M.r1 > M.r2
    e = M.entries
    row = np.where(use2[..., None, None], e[..., 1, :, :], e[..., 0, :, :])
    return KeySolution(row[..., 0, :], row[..., 1, :], np.minimum(M.r1, M.r2), M.kind)


# Fast solvers


def fdma_solve(ops: Arith, basis: Basis, u) -> KeySolution:
    """Key equation solution from ``u`` sampled at ``omega[0..eps-1]``.

    Tracks the first column of the matrix only at ``t + 1`` points and then
    interpolates ``lambda`` and ``z`` in the X-basis.
    """
    u = np.asarray(u, dtype=np.int64)
    lead = u.shape[:-1]
    eps = u.shape[-1]
    u = u.reshape(-1, eps)
    B = u.shape[0]
    npts = eps // 2 + 1
    om = basis.omega
    d = u.copy()
    g = np.ones_like(d)
    W = np.ones((B, npts), dtype=np.int64)
    V = np.zeros((B, npts), dtype=np.int64)
    r1 = np.zeros(B, dtype=np.int64)
    r2 = np.ones(B, dtype=np.int64)
    for j in range(eps):
        dj = d[:, j : j + 1]
        gj = g[:, j : j + 1]
        b1 = _branch(dj, gj, r1[:, None], r2[:, None])
        if j + 1 < eps:
            di, gi = d[:, j + 1 :], g[:, j + 1 :]
            diff = ops.add(om[j + 1 : eps], om[j])
            nd = ops.add(ops.mul(gj, di), ops.mul(dj, gi))
            g[:, j + 1 :] = ops.mul(diff, np.where(b1, di, gi))
            d[:, j + 1 :] = nd
        diff = ops.add(om[:npts], om[j])
        nW = ops.add(ops.mul(gj, W), ops.mul(dj, V))
        V = ops.mul(diff, np.where(b1, W, V))
        W = nW
        r1, r2 = _next_ranks(b1[:, 0], r1, r2)
    use2 = (r1 > r2)[:, None]
    lam_ev = np.where(use2, V, W)
    z_ev = ops.mul(lam_ev, u[:, :npts])
    both = np.stack([lam_ev, z_ev], axis=1)
    coeffs = _interpolate(ops, basis, both, npts)
    rank = np.minimum(r1, r2)
    return KeySolution(
        coeffs[:, 0].reshape(lead + (npts,)),
        coeffs[:, 1].reshape(lead + (npts,)),
        rank.reshape(lead),
        "xbar",
    )


def _interpolate(ops: Arith, basis: Basis, evals: np.ndarray, npts: int) -> np.ndarray:
    # X-coefficients from values at omega[0..npts-1].
    if npts == 1:
        return evals.copy()
    k = npts - 1
    if k & (k - 1) == 0:
        return ifft_extended(ops, basis, evals, k.bit_length() - 1, 0)
    mu = (npts - 1).bit_length()
    coeffs, _ = ifft_partial(ops, basis, evals, npts, mu, 0)
    return coeffs[..., :npts]


def fma_solve(ops: Arith, basis: Basis, d, g, start: int = 0, r1=None, r2=None) -> BasisMatrix:
    """Divide-and-conquer solver for the points ``omega[start..start+rho-1]``.

    ``start`` must be a multiple of ``2^ceil(log2 rho)``. Sub-problems are
    combined by evaluating both halves with FFTs, multiplying pointwise and
    interpolating back.
    """
    d = np.asarray(d, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    lead = d.shape[:-1]
    rho = d.shape[-1]
    if g.shape != d.shape:
        raise ValueError("d and g must have the same shape")
    span = 1 << max(rho - 1, 0).bit_length()
    if start % span:
        raise ValueError(f"start={start} is not aligned to {span}")
    d = d.reshape(-1, rho)
    g = g.reshape(-1, rho)
    B = d.shape[0]
    r1 = np.zeros(B, dtype=np.int64) if r1 is None else np.broadcast_to(r1, lead).reshape(B)
    r2 = np.ones(B, dtype=np.int64) if r2 is None else np.broadcast_to(r2, lead).reshape(B)
    psi, r1, r2 = _fma_any(ops, basis, d, g, r1, r2, start)
    return BasisMatrix(
        psi.reshape(lead + psi.shape[1:]), r1.reshape(lead), r2.reshape(lead), "xbar"
    )


def _leaf(basis: Basis, d, g, r1, r2, j0):
    B = d.shape[0]
    dj, gj = d[:, 0], g[:, 0]
    b1 = _branch(dj, gj, r1, r2)
    psi = np.zeros((B, 2, 2, 2), dtype=np.int64)
    psi[:, 0, 0, 0] = gj
    psi[:, 0, 1, 0] = dj
    # x - omega[j0] = omega[j0] X_0 + v_0 X_1
    col = np.where(b1, 0, 1)
    rows = np.arange(B)
    psi[rows, 1, col, 0] = basis.omega[j0]
    psi[rows, 1, col, 1] = basis.v[0]
    r1n, r2n = _next_ranks(b1, r1, r2)
    return psi, r1n, r2n


def _evaluate(ops: Arith, basis: Basis, psi: np.ndarray, mu: int, j0: int) -> np.ndarray:
    n = 1 << mu
    pad = np.zeros(psi.shape[:-1] + (n,), dtype=np.int64)
    pad[..., : psi.shape[-1]] = psi
    return fft(ops, basis, pad, mu, basis.omega[j0], inplace=True)


def _update(ops: Arith, ev: np.ndarray, d, g):
    d2 = ops.add(ops.mul(ev[:, 0, 0], d), ops.mul(ev[:, 0, 1], g))
    g2 = ops.add(ops.mul(ev[:, 1, 0], d), ops.mul(ev[:, 1, 1], g))
    return d2, g2


def _matmul(ops: Arith, R: np.ndarray, L: np.ndarray) -> np.ndarray:
    out = np.empty(np.broadcast_shapes(R.shape, L.shape), dtype=np.int64)
    for i in range(2):
        for k in range(2):
            out[:, i, k] = ops.add(ops.mul(R[:, i, 0], L[:, 0, k]), ops.mul(R[:, i, 1], L[:, 1, k]))
    return out


def _fma_pow2(ops: Arith, basis: Basis, d, g, r1, r2, j0: int, mu: int):
    if mu == 0:
        return _leaf(basis, d, g, r1, r2, j0)
    h = 1 << (mu - 1)
    n = 1 << mu
    extra = basis.omega[j0 ^ n]

    def evaluate(psi):
        ev = np.empty(psi.shape[:-1] + (n + 1,), dtype=np.int64)
        ev[..., :n] = _evaluate(ops, basis, psi, mu, j0)
        ev[..., n] = eval_point(ops, basis, psi, extra)
        return ev

    psiL, r1, r2 = _fma_pow2(ops, basis, d[:, :h], g[:, :h], r1, r2, j0, mu - 1)
    evL = evaluate(psiL)
    d2, g2 = _update(ops, evL[..., h:n], d[:, h:], g[:, h:])
    psiR, r1, r2 = _fma_pow2(ops, basis, d2, g2, r1, r2, j0 + h, mu - 1)
    evR = evaluate(psiR)
    prod = _matmul(ops, evR, evL)
    return ifft_extended(ops, basis, prod, mu, basis.omega[j0]), r1, r2


def _fma_any(ops: Arith, basis: Basis, d, g, r1, r2, j0: int):
    B, rho = d.shape
    if rho == 0:
        psi = np.zeros((B, 2, 2, 1), dtype=np.int64)
        psi[:, 0, 0, 0] = psi[:, 1, 1, 0] = 1
        return psi, r1, r2
    a = rho.bit_length() - 1
    h = 1 << a
    if rho == h:
        return _fma_pow2(ops, basis, d, g, r1, r2, j0, a)
    mu = a + 1
    psiL, r1, r2 = _fma_pow2(ops, basis, d[:, :h], g[:, :h], r1, r2, j0, a)
    evL = _evaluate(ops, basis, psiL, mu, j0)
    d2, g2 = _update(ops, evL[..., h:rho], d[:, h:], g[:, h:])
    psiR, r1, r2 = _fma_any(ops, basis, d2, g2, r1, r2, j0 + h)
    evR = _evaluate(ops, basis, psiR, mu, j0)
    prod = _matmul(ops, evR[..., : rho + 1], evL[..., : rho + 1])
    coeffs, _ = ifft_partial(ops, basis, prod, rho + 1, mu, basis.omega[j0])
    return coeffs[..., : rho + 1], r1, r2


def solve_key_equation(ops: Arith, basis: Basis, u, method: str = "fma") -> KeySolution:
    """Solve for ``u`` sampled at ``omega[0..eps-1]`` with ``fdma`` or ``fma``."""
    if method == "fdma":
        return fdma_solve(ops, basis, u)
    if method == "fma":
        u = np.asarray(u, dtype=np.int64)
        sol = select_solution(fma_solve(ops, basis, u, np.ones_like(u)))
        t = u.shape[-1] // 2
        return KeySolution(sol.lam[..., : t + 1], sol.z[..., : t + 1], sol.rank, sol.kind)
    raise ValueError(f"unknown solver {method!r}")
