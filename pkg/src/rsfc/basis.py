"""Subspace polynomials and the novel polynomial basis over GF(2^m).

A basis ``v_0..v_{m-1}`` of GF(2^m) over GF(2) indexes the field as
``omega[l] = XOR of v_i over the set bits i of l``. The subspace polynomial
``s_tau(x) = prod_{l < 2^tau} (x - omega[l])`` is linearized, so it is evaluated
from per-byte tables of its values on single bits. ``shat_tau`` is ``s_tau``
scaled so that ``shat_tau(v_tau) = 1``, and the basis polynomial ``X_l`` is the
product of ``shat_i`` over the set bits of ``l``.

Everything here is precomputation. Nothing touches an operation counter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import Field, FieldError


@dataclass(frozen=True, eq=False)
class Basis:
    field: Field
    v: tuple[int, ...]
    omega: np.ndarray        # omega[l]
    omega_index: np.ndarray  # omega_index[omega[l]] = l
    s_at_v: np.ndarray       # s_tau(v_tau), tau < m
    s_bytes: np.ndarray      # (m+1, nbytes, 256) per-byte value tables of s_tau
    s_grid: np.ndarray       # (m+1, 2^m) s_tau(omega[l])
    shat_grid: np.ndarray    # (m, 2^m) shat_tau(omega[l])
    deriv: np.ndarray        # d/dx shat_i, a constant because shat_i is linearized

    @property
    def m(self) -> int:
        return self.field.m

    def index_of(self, x):
        return self.omega_index[x]


def build_basis(field: Field, v=None) -> Basis:
    """Tables for the basis ``v`` (default: powers of the generator)."""
    m = field.m
    if v is None:
        v = [field.alpha_pow(i) for i in range(m)]
    v = tuple(int(x) for x in v)
    if len(v) != m:
        raise FieldError(f"basis needs {m} elements, got {len(v)}")

    q = field.q
    omega = np.zeros(q, dtype=np.int64)
    for i, vi in enumerate(v):
        omega[1 << i : 2 << i] = omega[: 1 << i] ^ vi
    omega_index = np.full(q, -1, dtype=np.int64)
    omega_index[omega] = np.arange(q)
    if np.any(omega_index < 0):
        raise FieldError("basis elements are linearly dependent over GF(2)")

    # s_{tau+1}(x) = s_tau(x)^2 + s_tau(v_tau) s_tau(x), tracked on single bits.
    nbytes = (m + 7) // 8
    bits = [1 << b for b in range(m)]
    on_bits = list(bits)
    s_at_v = np.zeros(m, dtype=np.int64)
    s_bytes = np.zeros((m + 1, nbytes, 256), dtype=np.int64)
    for tau in range(m + 1):
        s_bytes[tau] = _byte_tables(on_bits, nbytes)
        if tau == m:
            break
        a = _lin_eval(on_bits, v[tau])
        s_at_v[tau] = a
        on_bits = [field.mul(y, y) ^ field.mul(a, y) for y in on_bits]

    s_grid = np.stack([_sliced_eval(s_bytes[tau], omega) for tau in range(m + 1)])
    inv_sv = field.inv(s_at_v)
    shat_grid = field.mul(s_grid[:m], inv_sv[:, None])

    # Linear coefficient of s_tau is prod_{j<tau} s_j(v_j).
    lin = np.ones(m, dtype=np.int64)
    for i in range(1, m):
        lin[i] = field.mul(int(lin[i - 1]), int(s_at_v[i - 1]))
    deriv = field.mul(lin, inv_sv)

    for arr in (omega, omega_index, s_at_v, s_bytes, s_grid, shat_grid, deriv):
        arr.setflags(write=False)
    return Basis(field, v, omega, omega_index, s_at_v, s_bytes, s_grid, shat_grid, deriv)


def _lin_eval(on_bits: list[int], x: int) -> int:
    r = 0
    b = 0
    while x:
        if x & 1:
            r ^= on_bits[b]
        x >>= 1
        b += 1
    return r


def _byte_tables(on_bits: list[int], nbytes: int) -> np.ndarray:
    t = np.zeros((nbytes, 256), dtype=np.int64)
    for k in range(nbytes):
        for bit in range(8):
            b = 8 * k + bit
            if b >= len(on_bits):
                break
            t[k, 1 << bit : 2 << bit] = t[k, : 1 << bit] ^ on_bits[b]
    return t


def _sliced_eval(tables: np.ndarray, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    r = tables[0][x & 0xFF]
    for k in range(1, tables.shape[0]):
        r = r ^ tables[k][(x >> (8 * k)) & 0xFF]
    return r


def subspace_eval(basis: Basis, tau: int, x, normalized: bool = False):
    """``s_tau(x)`` (or ``shat_tau(x)``) for a scalar or array ``x``."""
    if not 0 <= tau <= basis.m:
        raise ValueError(f"tau must lie in [0, {basis.m}]")
    r = _sliced_eval(basis.s_bytes[tau], x)
    if normalized:
        if tau == basis.m:
            raise ValueError("s_m vanishes on the whole field and cannot be normalized")
        r = basis.field.mul(r, basis.field.inv(int(basis.s_at_v[tau])))
    return int(r) if np.ndim(r) == 0 else r


def p_const(basis: Basis, l: int) -> int:
    """``prod s_i(v_i)`` over the set bits of ``l``: the leading coefficient of ``X_l``."""
    f = basis.field
    r = 1
    i = 0
    while l:
        if l & 1:
            r = f.mul(r, int(basis.s_at_v[i]))
        l >>= 1
        i += 1
    return r


def xbar_eval_naive(basis: Basis, l: int, x: int) -> int:
    """``X_l(x)`` straight from root products, independent of the tables."""
    f = basis.field
    num, den = 1, 1
    for i in range(basis.m):
        if (l >> i) & 1:
            for k in range(1 << i):
                w = int(basis.omega[k])
                num = f.mul(num, x ^ w)
                den = f.mul(den, basis.v[i] ^ w)
    return f.div(num, den)


def shat_monomial(basis: Basis, tau: int) -> np.ndarray:
    """Monomial coefficients (ascending) of ``shat_tau``."""
    f = basis.field
    c = np.zeros((1 << tau) + 1, dtype=np.int64)
    c[1] = 1
    # s_{j+1} = s_j^2 + s_j(v_j) s_j on the linearized coefficients.
    lin = [1]
    for j in range(tau):
        a = int(basis.s_at_v[j])
        sq = [0] + [f.mul(x, x) for x in lin]
        lin = [sq[k] ^ (f.mul(a, lin[k]) if k < len(lin) else 0) for k in range(len(sq))]
    inv = f.inv(int(basis.s_at_v[tau])) if tau < basis.m else 1
    for k, x in enumerate(lin):
        c[1 << k] = f.mul(x, inv)
    return c


def xbar_monomials(basis: Basis, count: int) -> np.ndarray:
    """Row ``l`` holds the monomial coefficients of ``X_l`` for ``l < count``."""
    f = basis.field
    out = np.zeros((count, count), dtype=np.int64)
    out[0, 0] = 1
    shat = {}
    for l in range(1, count):
        top = l.bit_length() - 1
        if top not in shat:
            shat[top] = shat_monomial(basis, top)
        prev = out[l - (1 << top)]
        deg_prev = l - (1 << top)
        s = shat[top]
        acc = np.zeros(count, dtype=np.int64)
        for k in np.nonzero(s)[0]:
            acc[k : k + deg_prev + 1] ^= f.mul(prev[: deg_prev + 1], int(s[k]))
        out[l] = acc
    return out


def xbar_to_monomial(basis: Basis, coeffs, table: np.ndarray | None = None) -> np.ndarray:
    """Convert X-basis coefficients ``(..., L)`` to monomial coefficients ``(..., L)``."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    L = coeffs.shape[-1]
    if table is None or table.shape[0] < L:
        table = xbar_monomials(basis, L)
    table = table[:L, :L]
    f = basis.field
    prod = f.mul(coeffs[..., :, None], table)
    return np.bitwise_xor.reduce(prod, axis=-2)
