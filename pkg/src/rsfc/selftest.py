"""Reduced-size invariant checks behind ``rsfc selftest``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .basis import build_basis, xbar_eval_naive, xbar_to_monomial, xbar_monomials
from .baseline import ClassicParams, ClassicRS
from .codec import CodeParams, RSCode
from .gf import Arith, get_field, reference_mul
from .keysolver import fdma_solve, fma_solve, ma_solve, select_solution
from .transforms import fft, ifft


def _field_axioms(rng) -> None:
    f = get_field(8)
    a, b, c = (rng.integers(0, 256, 2000) for _ in range(3))
    assert np.array_equal(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c))
    for x, y in zip(a[:200], b[:200]):
        assert f.mul(int(x), int(y)) == reference_mul(int(x), int(y), f)


def _transforms(rng) -> None:
    f = get_field(8)
    bs = build_basis(f)
    ops = Arith(f)
    for tau in range(9):
        c = rng.integers(0, 256, 1 << tau)
        assert np.array_equal(ifft(ops, bs, fft(ops, bs, c, tau), tau), c)
    c = rng.integers(0, 256, 8)
    ev = fft(ops, bs, c, 3, 40)
    for i in range(8):
        x = 40 ^ int(bs.omega[i])
        ref = 0
        for l in range(8):
            ref ^= f.mul(int(c[l]), xbar_eval_naive(bs, l, x))
        assert ev[i] == ref


def _solvers(rng) -> None:
    f = get_field(8)
    bs = build_basis(f)
    ops = Arith(f)
    table = xbar_monomials(bs, 9)
    for eps in (2, 4, 8):
        u = rng.integers(0, 256, (20, eps))
        a = fdma_solve(ops, bs, u)
        b = select_solution(fma_solve(ops, bs, u, np.ones_like(u)))
        t = eps // 2
        assert np.array_equal(a.lam, b.lam[:, : t + 1]) and np.array_equal(a.z, b.z[:, : t + 1])
        lam_m = xbar_to_monomial(bs, a.lam, table)
        for i in range(20):
            ref = select_solution(ma_solve(ops, bs.omega[:eps], u[i], [1] * eps))
            assert np.array_equal(ref.lam[: t + 1], lam_m[i])
    assert ops.counter.div == 0


def _roundtrip(rng) -> None:
    for m, n, k in ((6, 64, 48), (8, 255, 223), (8, 100, 80)):
        code = RSCode(CodeParams(m, n, k))
        ops = Arith(code.field)
        msg = rng.integers(0, 1 << m, (50, k))
        cw = code.encode(ops, msg)
        r = cw.copy()
        t = code.params.t
        for row in r:
            pos = rng.choice(n, t, replace=False)
            row[pos] ^= rng.integers(1, 1 << m, t)
        for solver in ("fdma", "fma"):
            res = code.decode_batch(ops, r, solver)
            assert res.ok.all() and np.array_equal(res.words, cw)


def _counts(rng) -> None:
    code = RSCode(CodeParams(8, 256, 224))
    ops = Arith(code.field)
    code.find_roots(ops, rng.integers(0, 256, (1, 17)))
    assert (ops.counter.mul, ops.counter.add) == (640, 1280)
    classic = ClassicRS(ClassicParams(8, 255, 223))
    ops = Arith(classic.field)
    classic.syndromes(ops, rng.integers(0, 256, (1, 255)))
    assert (ops.counter.mul, ops.counter.add) == (8160, 8160)


CHECKS: list[tuple[str, Callable]] = [
    ("field axioms", _field_axioms),
    ("transform round trip and oracle", _transforms),
    ("solver equivalence", _solvers),
    ("decode round trip", _roundtrip),
    ("structural op counts", _counts),
]


def run(emit=print, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, fn in CHECKS:
        try:
            fn(rng)
            emit(f"PASS {name}")
        except Exception as exc:  # report and continue with the remaining checks
            all_ok = False
            emit(f"FAIL {name}: {type(exc).__name__}: {exc}")
    emit("selftest " + ("passed" if all_ok else "FAILED"))
    return all_ok
