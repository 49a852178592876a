"""Additive FFT and its inverses in the X-basis.

All transforms take arrays whose last axis holds coefficients or evaluations
and whose leading axes are independent lanes. ``beta`` is a field element (or
an array broadcastable to the lane shape) giving the shift of the evaluation
set ``{beta + omega[i]}``. Twiddles are ``shat`` values read from the grid
table and are not counted. Butterfly multiplications and additions are always
counted, including multiplications by a zero twiddle, so every count depends
only on the shapes involved.
"""

from __future__ import annotations

import numpy as np

from .basis import Basis
from .gf import Arith


def _as_index(basis: Basis, beta) -> np.ndarray:
    return basis.omega_index[np.asarray(beta, dtype=np.int64)]


def _check_len(x: np.ndarray, n: int, what: str) -> None:
    if x.ndim == 0 or x.shape[-1] != n:
        raise ValueError(f"{what}: last axis has length {x.shape[-1]}, expected {n}")


def _work(a, inplace: bool) -> np.ndarray:
    if not inplace:
        return np.array(a, dtype=np.int64, copy=True)
    if not (isinstance(a, np.ndarray) and a.dtype == np.int64 and a.flags.c_contiguous):
        raise ValueError("in-place transforms need a C-contiguous int64 array")
    return a


def fft(ops: Arith, basis: Basis, coeffs, tau: int, beta=0, inplace: bool = False) -> np.ndarray:
    """Evaluate ``sum_l f_l X_l`` at ``beta + omega[i]`` for ``i < 2^tau``."""
    x = _work(coeffs, inplace)
    n = 1 << tau
    _check_len(x, n, "fft")
    bidx = _as_index(basis, beta)
    lead = x.shape[:-1]
    for L in range(tau - 1, -1, -1):
        half = 1 << L
        nblk = n // (2 * half)
        v = x.reshape(lead + (nblk, 2, half))
        idx = bidx[..., None] ^ (np.arange(nblk) << (L + 1))
        tw = basis.shat_grid[L][idx]
        lo = v[..., 0, :]
        hi = v[..., 1, :]
        lo ^= ops.mul(tw[..., None], hi)
        ops.counter.add += lo.size
        hi ^= lo
        ops.counter.add += hi.size
    return x


def ifft(ops: Arith, basis: Basis, evals, tau: int, beta=0, inplace: bool = False) -> np.ndarray:
    """Inverse of :func:`fft`: X-basis coefficients from ``2^tau`` evaluations."""
    x = _work(evals, inplace)
    n = 1 << tau
    _check_len(x, n, "ifft")
    bidx = _as_index(basis, beta)
    lead = x.shape[:-1]
    for L in range(tau):
        half = 1 << L
        nblk = n // (2 * half)
        v = x.reshape(lead + (nblk, 2, half))
        idx = bidx[..., None] ^ (np.arange(nblk) << (L + 1))
        tw = basis.shat_grid[L][idx]
        lo = v[..., 0, :]
        hi = v[..., 1, :]
        hi ^= lo
        ops.counter.add += hi.size
        lo ^= ops.mul(tw[..., None], hi)
        ops.counter.add += lo.size
    return x


def eval_point(ops: Arith, basis: Basis, coeffs, x) -> np.ndarray:
    """Evaluate X-basis coefficients ``(..., L)`` at one point per lane.

    Folds the top half onto the bottom with ``shat_i(x)``, costing ``L - 1``
    multiplications and additions.
    """
    f = np.asarray(coeffs, dtype=np.int64)
    L = f.shape[-1]
    if L == 0:
        return np.zeros(f.shape[:-1], dtype=np.int64)
    xi = _as_index(basis, x)
    acc = f.copy()
    while L > 1:
        i = (L - 1).bit_length() - 1
        h = 1 << i
        s = basis.shat_grid[i][xi]
        acc[..., : L - h] = ops.add(acc[..., : L - h], ops.mul(s[..., None], acc[..., h:L]))
        L = h
    return acc[..., 0]


def ifft_extended(ops: Arith, basis: Basis, evals, mu: int, beta=0) -> np.ndarray:
    """``2^mu + 1`` coefficients from evaluations at ``beta + omega[i]``, ``i <= 2^mu``."""
    F = np.asarray(evals, dtype=np.int64)
    n = 1 << mu
    _check_len(F, n + 1, "ifft_extended")
    if mu >= basis.m:
        raise ValueError("extended IFFT needs 2^mu + 1 distinct points")
    bidx = _as_index(basis, beta)
    out = np.zeros(F.shape, dtype=np.int64)
    out[..., :n] = ifft(ops, basis, F[..., :n], mu, beta)
    extra = basis.omega[bidx ^ n]
    delta = ops.add(F[..., n], eval_point(ops, basis, out[..., :n], extra))
    out[..., n] = delta
    s = basis.shat_grid[mu][bidx]
    out[..., 0] = ops.add(out[..., 0], ops.mul(s, delta))
    return out


def ifft_partial(ops: Arith, basis: Basis, known, eps: int, mu: int, beta=0):
    """Interpolate from the ``eps`` lowest points of a ``2^mu`` block.

    The result has zero coefficients at indices ``>= eps``. Returns the
    ``2^mu`` coefficients and the evaluations on the whole block.
    """
    F = np.asarray(known, dtype=np.int64)
    n = 1 << mu
    _check_len(F, eps, "ifft_partial")
    if not 0 <= eps <= n:
        raise ValueError(f"eps={eps} outside [0, {n}]")
    lead = F.shape[:-1]
    if eps == n:
        return ifft(ops, basis, F, mu, beta), F.copy()
    if eps == 0:
        z = np.zeros(lead + (n,), dtype=np.int64)
        return z, z.copy()
    half = n >> 1
    bidx = _as_index(basis, beta)
    b1 = basis.omega[bidx ^ half]
    coeffs = np.zeros(lead + (n,), dtype=np.int64)
    full = np.zeros(lead + (n,), dtype=np.int64)
    if eps <= half:
        c_lo, f_lo = ifft_partial(ops, basis, F, eps, mu - 1, beta)
        coeffs[..., :half] = c_lo
        full[..., :half] = f_lo
        full[..., half:] = fft(ops, basis, c_lo, mu - 1, b1)
        return coeffs, full
    w = ifft(ops, basis, F[..., :half], mu - 1, beta)
    w2 = fft(ops, basis, w, mu - 1, b1)
    rest = ops.add(F[..., half:eps], w2[..., : eps - half])
    f1, f1_full = ifft_partial(ops, basis, rest, eps - half, mu - 1, b1)
    c = basis.shat_grid[mu - 1][bidx]
    coeffs[..., :half] = ops.add(w, ops.mul(c[..., None], f1))
    coeffs[..., half:] = f1
    full[..., :half] = F[..., :half]
    full[..., half:] = ops.add(f1_full, w2)
    return coeffs, full


def ifft_partial_high(ops: Arith, basis: Basis, known, eps: int, mu: int, beta=0):
    """Interpolate from the points ``eps..2^mu-1`` of a block.

    ``known`` has ``2^mu - eps`` values and the result has zero coefficients at
    indices ``>= 2^mu - eps``. Returns coefficients and the full evaluations.
    """
    F = np.asarray(known, dtype=np.int64)
    n = 1 << mu
    K = n - eps
    _check_len(F, K, "ifft_partial_high")
    if not 0 <= eps <= n:
        raise ValueError(f"eps={eps} outside [0, {n}]")
    lead = F.shape[:-1]
    if K == 0:
        z = np.zeros(lead + (n,), dtype=np.int64)
        return z, z.copy()
    if eps == 0:
        return ifft(ops, basis, F, mu, beta), F.copy()
    half = n >> 1
    bidx = _as_index(basis, beta)
    b1 = basis.omega[bidx ^ half]
    coeffs = np.zeros(lead + (n,), dtype=np.int64)
    full = np.zeros(lead + (n,), dtype=np.int64)
    if K <= half:
        c_lo, f_up = ifft_partial_high(ops, basis, F, eps - half, mu - 1, b1)
        coeffs[..., :half] = c_lo
        full[..., half:] = f_up
        full[..., :half] = fft(ops, basis, c_lo, mu - 1, beta)
        return coeffs, full
    upper = F[..., K - half :]
    w = ifft(ops, basis, upper, mu - 1, b1)
    w2 = fft(ops, basis, w, mu - 1, beta)
    rest = ops.add(F[..., : K - half], w2[..., eps:])
    f1, f1_full = ifft_partial_high(ops, basis, rest, eps, mu - 1, beta)
    c = basis.shat_grid[mu - 1][bidx]
    coeffs[..., :half] = ops.add(ops.add(w, ops.mul(c[..., None], f1)), f1)
    coeffs[..., half:] = f1
    full[..., :half] = ops.add(f1_full, w2)
    full[..., half:] = upper
    return coeffs, full


def fft_any(ops: Arith, basis: Basis, coeffs, eps: int, mu: int, beta=0) -> np.ndarray:
    """First ``eps`` evaluations of a polynomial with at most ``2^mu`` coefficients."""
    f = np.asarray(coeffs, dtype=np.int64)
    n = 1 << mu
    if f.shape[-1] > n or eps > n:
        raise ValueError("polynomial or output longer than the block")
    padded = np.zeros(f.shape[:-1] + (n,), dtype=np.int64)
    padded[..., : f.shape[-1]] = f
    return fft(ops, basis, padded, mu, beta, inplace=True)[..., :eps]


def block_ifft_sum(ops: Arith, basis: Basis, blocks, mu: int, first: int = 0) -> np.ndarray:
    """``sum_l IFFT(blocks[..., l, :], mu, omega[(first + l) 2^mu])``.

    For a polynomial of degree below ``2^m`` evaluated on the whole field this
    gives its top ``2^mu`` X-coefficients divided by ``p_const(2^m - 2^mu)``.
    """
    B = np.asarray(blocks, dtype=np.int64)
    nb = B.shape[-2]
    betas = basis.omega[(first + np.arange(nb)) << mu]
    parts = ifft(ops, basis, B, mu, betas)
    acc = np.zeros(B.shape[:-2] + (1 << mu,), dtype=np.int64)
    for l in range(nb):
        ops.iadd(acc, parts[..., l, :])
    return acc
