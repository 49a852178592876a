"""Conventional RS decoder used as the reference point for operation counts.

Narrow-sense code of length ``2^m - 1`` on the powers of the generator:
position ``i`` holds the coefficient of ``x^i`` and syndromes are
``S_j = r(alpha^(j+1))``. Decoding is Horner syndromes, the reformulated
inversionless Berlekamp-Massey recursion, Chien search and Forney's formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codec import DecodeResult
from .gf import Arith, Field, get_field

FIRST_ROOT = 1


@dataclass(frozen=True)
class ClassicParams:
    m: int
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k < self.n <= (1 << self.m) - 1:
            raise ValueError(f"need 1 <= k < n <= 2^m - 1, got n={self.n} k={self.k}")
        if (self.n - self.k) % 2:
            raise ValueError("n - k must be even")

    @property
    def t(self) -> int:
        return (self.n - self.k) // 2


class ClassicRS:
    def __init__(self, params: ClassicParams, field: Field | None = None):
        field = field or get_field(params.m)
        if field.m != params.m:
            raise ValueError("field degree does not match the code parameters")
        self.params = params
        self.field = field
        F = field
        t2 = 2 * params.t
        gen = [1]
        for j in range(t2):
            root = F.alpha_pow(FIRST_ROOT + j)
            nxt = [0] * (len(gen) + 1)
            for i, c in enumerate(gen):
                nxt[i + 1] ^= c
                nxt[i] ^= F.mul(c, root)
            gen = nxt
        self.generator = np.array(gen, dtype=np.int64)
        self.syn_points = np.array([F.alpha_pow(FIRST_ROOT + j) for j in range(t2)], dtype=np.int64)
        i = np.arange(params.n)
        j = np.arange(params.t + 1)
        # alpha^(-i j): Lambda evaluated at alpha^-i reveals an error at position i.
        self.chien_table = F.exp[(-(i[None, :] * j[:, None])) % F.order]
        self.inv_points = F.exp[(-i) % F.order]
        self.forney_scale = F.exp[(-i * t2) % F.order]

    def __repr__(self) -> str:
        p = self.params
        return f"ClassicRS(n={p.n}, k={p.k}, m={p.m})"

    def encode(self, ops: Arith, msg) -> np.ndarray:
        """Systematic encoding: parity in positions ``0..2t-1``."""
        P = self.params
        msg = np.asarray(msg, dtype=np.int64)
        if msg.shape[-1] != P.k:
            raise ValueError(f"message length {msg.shape[-1]} != k={P.k}")
        t2 = 2 * P.t
        g = self.generator[:t2]
        reg = np.zeros(msg.shape[:-1] + (t2,), dtype=np.int64)
        for i in range(P.k - 1, -1, -1):
            fb = ops.add(msg[..., i], reg[..., -1])
            shifted = np.zeros_like(reg)
            shifted[..., 1:] = reg[..., :-1]
            reg = ops.add(shifted, ops.mul(fb[..., None], g))
        out = np.zeros(msg.shape[:-1] + (P.n,), dtype=np.int64)
        out[..., :t2] = reg
        out[..., t2:] = msg
        return out

    def syndromes(self, ops: Arith, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.int64)
        acc = np.zeros(r.shape[:-1] + (2 * self.params.t,), dtype=np.int64)
        for i in range(self.params.n - 1, -1, -1):
            acc = ops.add(ops.mul(acc, self.syn_points), r[..., i : i + 1])
        return acc

    def ribm(self, ops: Arith, S: np.ndarray):
        """Returns ``(Lambda, Omega)``, each ``(..., t+1)`` and ``(..., t)``."""
        t = self.params.t
        lead = S.shape[:-1]
        width = 3 * t + 1
        delta = np.zeros(lead + (width + 1,), dtype=np.int64)
        delta[..., : 2 * t] = S
        delta[..., 3 * t] = 1
        theta = delta[..., :width].copy()
        gamma = np.ones(lead, dtype=np.int64)
        kreg = np.zeros(lead, dtype=np.int64)
        for _ in range(2 * t):
            d0 = delta[..., 0].copy()
            shifted = delta[..., 1:].copy()
            nd = ops.add(ops.mul(gamma[..., None], shifted), ops.mul(d0[..., None], theta))
            swap = (d0 != 0) & (kreg >= 0)
            theta = np.where(swap[..., None], shifted, theta)
            gamma = np.where(swap, d0, gamma)
            kreg = np.where(swap, -kreg - 1, kreg + 1)
            delta[..., :width] = nd
        return delta[..., t : 2 * t + 1].copy(), delta[..., :t].copy()

    def chien(self, ops: Arith, lam: np.ndarray) -> np.ndarray:
        """``Lambda(alpha^-i)`` for every position ``i``."""
        terms = ops.mul(lam[..., :, None], self.chien_table)
        acc = np.zeros(lam.shape[:-1] + (self.params.n,), dtype=np.int64)
        for j in range(terms.shape[-2]):
            acc = ops.add(acc, terms[..., j, :])
        return acc

    def forney(self, ops: Arith, lam: np.ndarray, omega: np.ndarray, pos: np.ndarray) -> np.ndarray:
        """Error values at ``pos`` (one per row of ``lam`` and ``omega``)."""
        t = self.params.t
        x = self.inv_points[pos]
        num = np.zeros(pos.shape, dtype=np.int64)
        for j in range(t - 1, -1, -1):
            num = ops.add(ops.mul(num, x), omega[..., j])
        # Lambda'(x): only odd powers of Lambda survive differentiation.
        den = np.zeros(pos.shape, dtype=np.int64)
        for j in range(t - 1, -1, -1):
            c = lam[..., j + 1] if j % 2 == 0 else np.zeros_like(den)
            den = ops.add(ops.mul(den, x), c)
        # The recursion's evaluator carries an extra factor x^(-2t).
        num = ops.mul(num, self.forney_scale[pos])
        return ops.div(num, den)

    def decode_batch(self, ops: Arith, received) -> DecodeResult:
        P = self.params
        r = np.asarray(received, dtype=np.int64)
        if r.ndim != 2 or r.shape[1] != P.n:
            raise ValueError(f"received words must have shape (B, {P.n})")
        B = r.shape[0]
        out = r.copy()
        ok = np.ones(B, dtype=bool)
        reasons: list[str | None] = [None] * B
        positions = [np.zeros(0, dtype=np.int64) for _ in range(B)]
        values = [np.zeros(0, dtype=np.int64) for _ in range(B)]
        before = {k: v.copy() for k, v in ops.stages.items()}
        with ops.stage("Syndrome"):
            S = self.syndromes(ops, r)
        active = np.nonzero(np.any(S != 0, axis=1))[0]
        if active.size:
            with ops.stage("Key equation"):
                lam, om = self.ribm(ops, S[active])
            with ops.stage("Chien search"):
                ev = self.chien(ops, lam)
            is_root = ev == 0
            nroots = is_root.sum(axis=1)
            nz = lam != 0
            deg = np.where(nz.any(axis=1), lam.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
            good = (deg >= 1) & (nroots == deg) & (lam[:, 0] != 0)
            for i in np.nonzero(~good)[0]:
                ok[active[i]] = False
                reasons[active[i]] = "root_count"
            lane, pos = np.nonzero(is_root & good[:, None])
            with ops.stage("Forney's formula"):
                e = self.forney(ops, lam[lane], om[lane], pos)
            out[active[lane], pos] ^= e
            for i in np.nonzero(good)[0]:
                sel = lane == i
                positions[active[i]] = pos[sel]
                values[active[i]] = e[sel]
        delta = {}
        for k, v in ops.stages.items():
            prev = before.get(k)
            delta[k] = v if prev is None else v - prev
        return DecodeResult(out, ok, reasons, positions, values, delta)

    def is_codeword(self, word) -> np.ndarray:
        S = self.syndromes(Arith(self.field), word)
        return ~np.any(S != 0, axis=-1)
