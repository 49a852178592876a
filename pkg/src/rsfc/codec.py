"""Systematic Reed-Solomon codes on the omega-indexed evaluation points.

A codeword has ``n`` symbols ``c_i`` at the points ``omega[i]``, check symbols
in positions ``0..eps-1`` and message symbols in ``eps..n-1`` where
``eps = n - k``. Points ``omega[n..2^m-1]`` are implicitly zero, which gives
shortened codes. With ``n = 2^m`` and ``eps = 2^mu`` the code is a full-length
code and the decoder takes its simplest form.

Decoding runs in stages named after the rows of the cost tables:
``Syndrome``, ``Key equation``, ``Chien search``, ``Formal derivative`` and
``Forney's formula``. Errors in check positions are fixed by re-encoding the
corrected message, counted under ``Check repair``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .basis import Basis, build_basis, p_const
from .gf import Arith, Field, get_field
from .keysolver import KeySolution, solve_key_equation
from .transforms import block_ifft_sum, eval_point, fft, ifft_partial_high

STAGES = ("Syndrome", "Key equation", "Chien search", "Formal derivative", "Forney's formula")
CHECK_REPAIR = "Check repair"


@dataclass
class DecodeOutcome:
    """Single-word result: a corrected codeword, or ``ok=False`` with a reason."""

    ok: bool
    codeword: np.ndarray | None
    positions: np.ndarray
    values: np.ndarray
    reason: str | None = None


@dataclass(frozen=True)
class CodeParams:
    m: int
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k < self.n <= (1 << self.m):
            raise ValueError(f"need 1 <= k < n <= 2^m, got m={self.m} n={self.n} k={self.k}")

    @property
    def eps(self) -> int:
        return self.n - self.k

    @property
    def t(self) -> int:
        return self.eps // 2

    @property
    def mu(self) -> int:
        return (self.eps - 1).bit_length()

    @property
    def blocks(self) -> int:
        return -(-self.n // (1 << self.mu))

    @property
    def is_pow2(self) -> bool:
        return self.n == 1 << self.m and self.eps == 1 << self.mu


@dataclass
class DecodeResult:
    """Batch decode output. Row ``b`` of ``words`` is meaningful only if ``ok[b]``."""

    words: np.ndarray
    ok: np.ndarray
    reasons: list[str | None]
    positions: list[np.ndarray]
    values: list[np.ndarray]
    stages: dict = dc_field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ok)


class RSCode:
    def __init__(self, params: CodeParams, field: Field | None = None, basis: Basis | None = None):
        if field is None:
            field = basis.field if basis is not None else get_field(params.m)
        if field.m != params.m:
            raise ValueError("field degree does not match the code parameters")
        if basis is None:
            basis = build_basis(field)
        self.params = params
        self.field = field
        self.basis = basis
        P = params
        F = field
        om = basis.omega
        blk = 1 << P.mu
        self.pinv = F.inv(p_const(basis, (1 << P.m) - blk))
        # 1 / prod_{l=eps}^{2^mu-1} (omega_i - omega_l) for the check points i < eps.
        high = np.ones(P.eps, dtype=np.int64)
        for l in range(P.eps, blk):
            high = F.mul(high, om[: P.eps] ^ om[l])
        self.high_inv = F.inv(high)
        # prod_{j<eps} (omega_l - omega_j), nonzero at the message points.
        if P.eps == blk:
            den = basis.s_grid[P.mu][: P.n].copy()
        else:
            den = np.ones(P.n, dtype=np.int64)
            for j in range(P.eps):
                den = F.mul(den, om[: P.n] ^ om[j])
        self.forney_den = den
        for arr in (self.high_inv, self.forney_den):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        p = self.params
        return f"RSCode(n={p.n}, k={p.k}, m={p.m})"

    def _blocks(self, word: np.ndarray) -> np.ndarray:
        P = self.params
        blk = 1 << P.mu
        full = np.zeros(word.shape[:-1] + (P.blocks * blk,), dtype=np.int64)
        full[..., : P.n] = word
        return full.reshape(word.shape[:-1] + (P.blocks, blk))

    # Encoding

    def encode(self, ops: Arith, msg) -> np.ndarray:
        """Systematic encoding of ``(..., k)`` messages."""
        P = self.params
        msg = np.asarray(msg, dtype=np.int64)
        if msg.shape[-1] != P.k:
            raise ValueError(f"message length {msg.shape[-1]} != k={P.k}")
        if np.any((msg < 0) | (msg >= self.field.q)):
            raise ValueError("message symbols outside the field")
        word = np.zeros(msg.shape[:-1] + (P.n,), dtype=np.int64)
        word[..., P.eps :] = msg
        blocks = self._blocks(word)
        blk = 1 << P.mu
        if P.blocks > 1:
            w = block_ifft_sum(ops, self.basis, blocks[..., 1:, :], P.mu, first=1)
        else:
            w = np.zeros(msg.shape[:-1] + (blk,), dtype=np.int64)
        w2 = fft(ops, self.basis, w, P.mu, 0)
        if P.eps < blk:
            known = ops.add(blocks[..., 0, P.eps :], w2[..., P.eps :])
            _, g_full = ifft_partial_high(ops, self.basis, known, P.eps, P.mu, 0)
            checks = ops.add(g_full[..., : P.eps], w2[..., : P.eps])
        else:
            checks = w2
        word[..., : P.eps] = checks
        return word

    # Syndrome

    def syndrome(self, ops: Arith, word) -> np.ndarray:
        """Values at ``omega[0..eps-1]`` of the syndrome polynomial; all zero for codewords."""
        P = self.params
        word = np.asarray(word, dtype=np.int64)
        if word.shape[-1] != P.n:
            raise ValueError(f"word length {word.shape[-1]} != n={P.n}")
        acc = block_ifft_sum(ops, self.basis, self._blocks(word), P.mu)
        ubar = ops.mul(acc, self.pinv)
        u = fft(ops, self.basis, ubar, P.mu, 0)
        if P.eps == 1 << P.mu:
            return u
        _, eta = ifft_partial_high(ops, self.basis, u[..., P.eps :], P.eps, P.mu, 0)
        return ops.mul(ops.add(u[..., : P.eps], eta[..., : P.eps]), self.high_inv)

    # Decoder stages

    def find_roots(self, ops: Arith, lam: np.ndarray) -> np.ndarray:
        """``lambda`` evaluated at every code position, one FFT per block."""
        P = self.params
        blk = 1 << P.mu
        pad = np.zeros(lam.shape[:-1] + (P.blocks, blk), dtype=np.int64)
        pad[..., : lam.shape[-1]] = lam[..., None, :]
        betas = self.basis.omega[np.arange(P.blocks) << P.mu]
        ev = fft(ops, self.basis, pad, P.mu, betas, inplace=True)
        return ev.reshape(lam.shape[:-1] + (P.blocks * blk,))[..., : P.n]

    def formal_derivative(self, ops: Arith, lam: np.ndarray) -> np.ndarray:
        """Derivative in the X-basis over the whole ``2^mu`` coefficient block.

        ``d/dx X_l = sum over set bits i of l of deriv_i X_{l - 2^i}``.
        """
        P = self.params
        blk = 1 << P.mu
        lead = lam.shape[:-1]
        src = np.zeros(lead + (blk,), dtype=np.int64)
        src[..., : lam.shape[-1]] = lam
        out = np.zeros_like(src)
        for i in range(P.mu):
            h = 1 << i
            s = src.reshape(lead + (blk // (2 * h), 2, h))
            o = out.reshape(lead + (blk // (2 * h), 2, h))
            o[..., 0, :] = ops.add(o[..., 0, :], ops.mul(int(self.basis.deriv[i]), s[..., 1, :]))
        return out

    def derivative_evals(self, ops: Arith, dlam: np.ndarray, pos: np.ndarray) -> np.ndarray:
        """``lambda'(omega[pos])`` from derivative coefficients, one row per position."""
        return eval_point(ops, self.basis, dlam[..., : self.params.t], self.basis.omega[pos])

    def forney(self, ops: Arith, z: np.ndarray, dlam: np.ndarray, pos: np.ndarray):
        """Error values at ``pos`` (one per row of ``z`` and ``dlam``).

        Returns ``(values, valid)``; ``valid`` is false where the denominator
        vanishes, which only happens for a repeated root.
        """
        x = self.basis.omega[pos]
        num = eval_point(ops, self.basis, z[..., : self.params.t], x)
        dv = self.derivative_evals(ops, dlam, pos)
        den = ops.mul(self.forney_den[pos], dv)
        valid = den != 0
        return ops.div(num, np.where(valid, den, 1)), valid

    # Decoding

    def decode_batch(
        self,
        ops: Arith,
        received,
        solver: str = "fma",
        repair_checks: bool = True,
        strict: bool = False,
    ) -> DecodeResult:
        """Decode ``(B, n)`` received words.

        ``strict`` re-checks every corrected word with an uncounted syndrome and
        flags mismatches as ``verify``.
        """
        P = self.params
        if solver not in ("fdma", "fma"):
            raise ValueError(f"unknown solver {solver!r}")
        r = np.asarray(received, dtype=np.int64)
        if r.ndim != 2 or r.shape[1] != P.n:
            raise ValueError(f"received words must have shape (B, {P.n})")
        if np.any((r < 0) | (r >= self.field.q)):
            raise ValueError("received symbols outside the field")
        B = r.shape[0]
        out = r.copy()
        ok = np.ones(B, dtype=bool)
        reasons: list[str | None] = [None] * B
        positions = [np.zeros(0, dtype=np.int64) for _ in range(B)]
        values = [np.zeros(0, dtype=np.int64) for _ in range(B)]
        stages_before = {k: v.copy() for k, v in ops.stages.items()}

        with ops.stage("Syndrome"):
            u = self.syndrome(ops, r)
        active = np.nonzero(np.any(u != 0, axis=1))[0]
        if active.size and P.t == 0:
            ok[active] = False
            for b in active:
                reasons[b] = "rank_parity"
            active = active[:0]
        if active.size:
            ua = u[active]
            with ops.stage("Key equation"):
                sol = solve_key_equation(ops, self.basis, ua, solver)
            with ops.stage("Chien search"):
                ev = self.find_roots(ops, sol.lam)
            with ops.stage("Formal derivative"):
                dlam = self.formal_derivative(ops, sol.lam)
            is_root = ev == 0
            nroots = is_root.sum(axis=1)
            good = check_correctable(sol, nroots, self.params)
            for i in np.nonzero(~good)[0]:
                b = active[i]
                ok[b] = False
                reasons[b] = "rank_parity" if sol.rank[i] % 2 else "root_count"
            lane, pos = np.nonzero(is_root & good[:, None])
            msg_sel = pos >= P.eps
            fl, fp = lane[msg_sel], pos[msg_sel]
            with ops.stage("Forney's formula"):
                e, valid = self.forney(ops, sol.z[fl], dlam[fl], fp)
            for i in np.unique(fl[~valid]):
                good[i] = False
                ok[active[i]] = False
                reasons[active[i]] = "root_count"
            keep = good[lane]
            lane, pos = lane[keep], pos[keep]
            keep_m = good[fl]
            fl, fp, e = fl[keep_m], fp[keep_m], e[keep_m]
            msg_sel = pos >= P.eps
            ai = active[fl]
            out[ai, fp] ^= e
            for i in np.nonzero(good)[0]:
                b = active[i]
                sel = lane == i
                positions[b] = pos[sel]
                vals = np.zeros(pos[sel].size, dtype=np.int64)
                vals[pos[sel] >= P.eps] = e[fl == i]
                values[b] = vals
            if repair_checks:
                need = np.unique(lane[~msg_sel])
                if need.size:
                    idx = active[need]
                    with ops.stage(CHECK_REPAIR):
                        fixed = self.encode(ops, out[idx, P.eps :])
                    for j, b in enumerate(idx):
                        cp = positions[b] < P.eps
                        values[b][cp] = fixed[j, positions[b][cp]] ^ r[b, positions[b][cp]]
                    out[idx] = fixed
        if strict:
            bad = np.nonzero(ok & ~self.is_codeword(out))[0]
            for b in bad:
                ok[b] = False
                reasons[b] = "verify"
        delta = {}
        for k, v in ops.stages.items():
            prev = stages_before.get(k)
            delta[k] = v if prev is None else v - prev
        return DecodeResult(out, ok, reasons, positions, values, delta)

    def decode(self, ops: Arith, received, solver: str = "fma", strict: bool = False) -> DecodeOutcome:
        res = self.decode_batch(ops, np.asarray(received)[None, :], solver, strict=strict)
        if not res.ok[0]:
            empty = np.zeros(0, dtype=np.int64)
            return DecodeOutcome(False, None, empty, empty, res.reasons[0])
        return DecodeOutcome(True, res.words[0], res.positions[0], res.values[0])

    def is_codeword(self, word) -> np.ndarray:
        """Membership test on a throwaway counter."""
        u = self.syndrome(Arith(self.field), word)
        return ~np.any(u != 0, axis=-1)


def check_correctable(sol: KeySolution, nroots: np.ndarray, params: CodeParams) -> np.ndarray:
    """Decodability test: even rank, ``deg lambda <= t`` and one root per unit of degree."""
    deg = sol.rank // 2
    return (sol.rank % 2 == 0) & (deg <= params.t) & (nroots == deg)


def encode_pow2(ops: Arith, code: RSCode, msg) -> np.ndarray:
    if not code.params.is_pow2:
        raise ValueError("encode_pow2 needs n = 2^m and n - k a power of two")
    return code.encode(ops, msg)


def encode_any(ops: Arith, code: RSCode, msg) -> np.ndarray:
    return code.encode(ops, msg)


def decode_pow2(ops: Arith, code: RSCode, received, solver: str = "fma") -> DecodeOutcome:
    if not code.params.is_pow2:
        raise ValueError("decode_pow2 needs n = 2^m and n - k a power of two")
    return code.decode(ops, received, solver)


def decode_any(ops: Arith, code: RSCode, received, solver: str = "fma") -> DecodeOutcome:
    return code.decode(ops, received, solver)
