import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import from_roots, oracle_field, pderiv, pdivmod, peval, pmul, subspace_monomial
from rsfc.basis import build_basis
from rsfc.codec import (
    CodeParams,
    RSCode,
    check_correctable,
    decode_any,
    decode_pow2,
    encode_any,
    encode_pow2,
)
from rsfc.gf import Arith, get_field
from rsfc.keysolver import KeySolution
from rsfc.transforms import block_ifft_sum, fft, ifft

ALT_V8 = [0x53, 0xCA, 0x01, 0x9E, 0x35, 0x77, 0xE0, 0x1B]


def make(m, n, k, v=None):
    f = get_field(m)
    return RSCode(CodeParams(m, n, k), f, build_basis(f, v) if v else None)


def corrupt(rng, code, words, weight, pool=None):
    r = words.copy()
    pool = np.arange(code.params.n) if pool is None else pool
    pats = []
    for row in r:
        pos = rng.choice(pool, weight, replace=False)
        val = rng.integers(1, code.field.q, weight)
        row[pos] ^= val
        pats.append(dict(zip(pos.tolist(), val.tolist())))
    return r, pats


def oracle_syndrome(code, word):
    """Syndrome values by monomial polynomial division, no transforms involved."""
    P = code.params
    F = oracle_field(code.field.m, code.field.poly)
    v = list(code.basis.v)
    q = F.q
    om = [int(x) for x in code.basis.omega]
    # Interpolating polynomial over the whole field, word padded with zeros.
    R = [0] * q
    vanish = [0] * q + [1]
    vanish[1] = 1  # x^q + x
    for l, c in enumerate(word):
        if c:
            Lb, _ = pdivmod(F, vanish, [om[l], 1])
            for i, a in enumerate(Lb):
                R[i] ^= F.mul(int(c), a)
    M = [1]
    for i in range(P.mu, P.m):
        M = pmul(F, M, subspace_monomial(F, v, i))
    u, _ = pdivmod(F, R, M)
    if P.eps < 1 << P.mu:
        u, _ = pdivmod(F, u, from_roots(F, om[P.eps : 1 << P.mu]))
    return [peval(F, u, om[i]) for i in range(P.eps)]


def power_sums_vanish(code, word):
    P = code.params
    F = oracle_field(code.field.m, code.field.poly)
    om = [int(x) for x in code.basis.omega[: P.n]]
    for j in range(P.eps):
        s = 0
        for c, x in zip(word, om):
            if c:
                s ^= F.mul(int(c), F.pow(x, j))
        if s:
            return False
    return True


def test_params():
    P = CodeParams(8, 255, 223)
    assert (P.eps, P.t, P.mu, P.blocks, P.is_pow2) == (32, 16, 5, 8, False)
    P = CodeParams(8, 100, 80)
    assert (P.eps, P.t, P.mu, P.blocks) == (20, 10, 5, 4)
    assert CodeParams(8, 256, 224).is_pow2
    for bad in ((8, 257, 200), (8, 100, 100), (8, 100, 0)):
        with pytest.raises(ValueError):
            CodeParams(*bad)
    with pytest.raises(ValueError):
        RSCode(CodeParams(8, 256, 224), get_field(10))


def test_zero_message():
    for m, n, k in ((8, 256, 224), (8, 100, 80)):
        code = make(m, n, k)
        assert not np.any(code.encode(Arith(code.field), np.zeros((1, k), dtype=np.int64)))


def test_encode_rejects_bad_input():
    code = make(6, 64, 32)
    with pytest.raises(ValueError):
        code.encode(Arith(code.field), np.zeros((1, 31), dtype=np.int64))
    with pytest.raises(ValueError):
        code.encode(Arith(code.field), np.full((1, 32), 64))
    with pytest.raises(ValueError):
        encode_pow2(Arith(code.field), make(8, 100, 80), np.zeros((1, 80), dtype=np.int64))


def test_single_message_symbol_check_block():
    code = make(8, 256, 224)
    f = code.field
    bs = code.basis
    msg = np.zeros(224, dtype=np.int64)
    pos = 100  # absolute position 132, block 4
    msg[pos - 32] = 0x77
    cw = code.encode(Arith(f), msg)
    blk = np.zeros(32, dtype=np.int64)
    blk[pos % 32] = 0x77
    expect = fft(Arith(f), bs, ifft(Arith(f), bs, blk, 5, int(bs.omega[(pos // 32) * 32])), 5, 0)
    assert np.array_equal(cw[:32], expect)


@pytest.mark.parametrize("m,n,k,v", [(6, 64, 32, None), (6, 64, 48, [1, 3, 6, 13, 27, 54]), (6, 50, 41, None),
                                     (8, 100, 80, None), (4, 16, 8, None)])
def test_codewords_satisfy_power_sums(rng, m, n, k, v):
    code = make(m, n, k, v)
    cw = code.encode(Arith(code.field), rng.integers(0, 1 << m, (3, k)))
    for w in cw:
        assert power_sums_vanish(code, w)
    assert np.all(code.is_codeword(cw))
    assert not np.any(code.syndrome(Arith(code.field), cw))


def test_encode_any_matches_pow2(rng):
    code = make(8, 256, 224)
    msg = rng.integers(0, 256, (4, 224))
    assert np.array_equal(encode_any(Arith(code.field), code, msg), encode_pow2(Arith(code.field), code, msg))


@pytest.mark.parametrize("m,n,k", [(8, 256, 224), (8, 100, 80), (6, 50, 41)])
def test_syndrome_matches_division_oracle(rng, m, n, k):
    code = make(m, n, k)
    for weight in (1, 2):
        word = np.zeros(n, dtype=np.int64)
        pos = rng.choice(n, weight, replace=False)
        word[pos] = rng.integers(1, 1 << m, weight)
        got = code.syndrome(Arith(code.field), word)
        assert np.any(got)
        assert [int(x) for x in got] == oracle_syndrome(code, word)


def test_syndrome_linearity(rng):
    for m, n, k in ((8, 256, 224), (8, 255, 223)):
        code = make(m, n, k)
        cw = code.encode(Arith(code.field), rng.integers(0, 256, (5, k)))
        e = np.zeros_like(cw)
        e[:, rng.choice(n, 4, replace=False)] = rng.integers(1, 256, (5, 4))
        ops = Arith(code.field)
        assert np.array_equal(code.syndrome(ops, cw ^ e), code.syndrome(ops, e))


def test_syndrome_count_256_224():
    code = make(8, 256, 224)
    ops = Arith(code.field)
    code.syndrome(ops, np.zeros((1, 256), dtype=np.int64))
    # 8 block IFFTs of 80 mul and 160 add, 8 x 32 accumulation, 32 scaling, one FFT.
    assert (ops.counter.mul, ops.counter.add, ops.counter.div) == (8 * 80 + 32 + 80, 8 * 160 + 256 + 160, 0)


def xbar_from_roots(code, roots):
    """X-coefficients of prod (x - r) via its values on the first block."""
    F = oracle_field(code.field.m, code.field.poly)
    mono = from_roots(F, roots)
    blk = 1 << code.params.mu
    vals = [peval(F, mono, int(x)) for x in code.basis.omega[:blk]]
    return ifft(Arith(code.field), code.basis, vals, code.params.mu, 0)


def test_find_roots(rng):
    code = make(8, 256, 224)
    lam = np.zeros((1, 17), dtype=np.int64)
    lam[0, 0] = 5
    assert not np.any(code.find_roots(Arith(code.field), lam) == 0)
    for size in (1, 3, 16):
        E = sorted(rng.choice(256, size, replace=False).tolist())
        lam = xbar_from_roots(code, [int(code.basis.omega[e]) for e in E])[None, :17]
        ev = code.find_roots(Arith(code.field), lam)
        assert np.nonzero(ev[0] == 0)[0].tolist() == E


def test_find_roots_shortened_ignores_unused_points():
    code = make(8, 100, 80)
    lam = xbar_from_roots(code, [int(code.basis.omega[e]) for e in (3, 150)])[None, :11]
    ev = code.find_roots(Arith(code.field), lam)
    assert ev.shape == (1, 100) and np.nonzero(ev[0] == 0)[0].tolist() == [3]


def test_formal_derivative_examples(rng):
    code = make(8, 256, 224)
    F = oracle_field(8, code.field.poly)
    ops = Arith(code.field)
    a, b = 0x35, 0xC2
    d1 = code.formal_derivative(ops, xbar_from_roots(code, [a])[None, :17])
    pts = np.arange(256)
    vals = code.derivative_evals(ops, np.repeat(d1, 256, axis=0), pts)
    assert np.all(vals == 1)
    d2 = code.formal_derivative(ops, xbar_from_roots(code, [a, b])[None, :17])
    assert code.derivative_evals(ops, d2, np.array([int(code.basis.omega_index[a])]))[0] == a ^ b
    for _ in range(5):
        roots = [int(x) for x in rng.choice(256, 8, replace=False)]
        lam = xbar_from_roots(code, roots)[None, :17]
        d = code.formal_derivative(ops, lam)
        ref = pderiv(from_roots(F, roots))
        xs = rng.integers(0, 256, 10)
        got = code.derivative_evals(ops, np.repeat(d, 10, axis=0), code.basis.omega_index[xs])
        assert [int(g) for g in got] == [peval(F, ref, int(x)) for x in xs]


def test_formal_derivative_count():
    code = make(8, 256, 224)
    ops = Arith(code.field)
    code.formal_derivative(ops, np.zeros((1, 17), dtype=np.int64))
    assert (ops.counter.mul, ops.counter.add) == (80, 80)


def test_forney_zero_denominator_flagged():
    code = make(8, 256, 224)
    z = np.ones((2, 17), dtype=np.int64)
    dlam = np.zeros((2, 32), dtype=np.int64)
    dlam[1, 0] = 1
    vals, valid = code.forney(Arith(code.field), z, dlam, np.array([40, 41]))
    assert valid.tolist() == [False, True]


def test_single_error_value(rng):
    for m, n, k in ((8, 256, 224), (8, 100, 80)):
        code = make(m, n, k)
        cw = code.encode(Arith(code.field), rng.integers(0, 256, (1, k)))
        for pos, val in ((k // 2 + code.params.eps, 0x9D), (n - 1, 1)):
            r = cw.copy()
            r[0, pos] ^= val
            out = code.decode(Arith(code.field), r[0], "fdma")
            assert out.ok and out.positions.tolist() == [pos] and out.values.tolist() == [val]
            assert np.array_equal(out.codeword, cw[0])


@pytest.mark.parametrize("solver", ["fdma", "fma"])
def test_check_only_errors_repaired(rng, solver):
    for m, n, k in ((8, 256, 224), (8, 100, 80)):
        code = make(m, n, k)
        cw = code.encode(Arith(code.field), rng.integers(0, 256, (20, k)))
        r, pats = corrupt(rng, code, cw, code.params.t, np.arange(code.params.eps))
        ops = Arith(code.field)
        res = code.decode_batch(ops, r, solver)
        assert res.ok.all() and np.array_equal(res.words, cw)
        assert "Check repair" in res.stages
        assert "Forney's formula" not in res.stages or res.stages["Forney's formula"].div == 0
        for b in range(20):
            assert dict(zip(res.positions[b].tolist(), res.values[b].tolist())) == pats[b]


@pytest.mark.parametrize("m,n,k,solver", [(8, 256, 224, "fdma"), (8, 256, 224, "fma"), (8, 255, 223, "fma"),
                                          (6, 64, 32, "fma"), (6, 50, 41, "fdma"), (4, 16, 8, "fma"),
                                          (8, 256, 128, "fma"), (10, 1024, 896, "fdma")])
def test_round_trip_reports_error_pattern(rng, m, n, k, solver):
    code = make(m, n, k)
    t = code.params.t
    cw = code.encode(Arith(code.field), rng.integers(0, 1 << m, (60, k)))
    for w in (0, 1, t):
        r, pats = corrupt(rng, code, cw, w)
        res = code.decode_batch(Arith(code.field), r, solver)
        assert res.ok.all() and np.array_equal(res.words, cw)
        for b in range(60):
            assert dict(zip(res.positions[b].tolist(), res.values[b].tolist())) == pats[b]


def test_alternative_basis_round_trip_and_counts(rng):
    counts = []
    for v in (None, ALT_V8):
        code = make(8, 256, 224, v)
        cw = code.encode(Arith(code.field), rng.integers(0, 256, (1, 224)))
        pos = np.arange(40, 56)
        r = cw.copy()
        r[0, pos] ^= rng.integers(1, 256, 16)
        res = code.decode_batch(Arith(code.field), r, "fdma")
        assert res.ok[0] and np.array_equal(res.words, cw)
        counts.append({k: v.as_dict() for k, v in res.stages.items()})
    assert counts[0] == counts[1]


def test_check_correctable():
    P = CodeParams(8, 256, 224)
    lam = np.zeros((3, 17), dtype=np.int64)
    sol = KeySolution(lam, lam, np.array([4, 5, 6]), "xbar")
    assert check_correctable(sol, np.array([2, 2, 2]), P).tolist() == [True, False, False]
    big = KeySolution(lam[:1], lam[:1], np.array([34]), "xbar")
    assert not check_correctable(big, np.array([17]), P)[0]


def test_decode_wrappers_and_validation(rng):
    code = make(8, 256, 224)
    cw = code.encode(Arith(code.field), rng.integers(0, 256, (1, 224)))[0]
    out = decode_pow2(Arith(code.field), code, cw)
    assert out.ok and np.array_equal(out.codeword, cw) and out.positions.size == 0
    short = make(8, 100, 80)
    with pytest.raises(ValueError):
        decode_pow2(Arith(short.field), short, np.zeros(100, dtype=np.int64))
    out = decode_any(Arith(short.field), short, np.zeros(100, dtype=np.int64), "fdma")
    assert out.ok
    with pytest.raises(ValueError):
        code.decode_batch(Arith(code.field), np.zeros((1, 255), dtype=np.int64))
    with pytest.raises(ValueError):
        code.decode_batch(Arith(code.field), np.full((1, 256), 256))
    with pytest.raises(ValueError):
        code.decode_batch(Arith(code.field), np.zeros((1, 256)), "ribm")


def test_codeword_closure_beyond_t(rng):
    code = make(6, 64, 56)
    cw = code.encode(Arith(code.field), rng.integers(0, 64, (400, 56)))
    r, _ = corrupt(rng, code, cw, 5)
    for strict in (False, True):
        res = code.decode_batch(Arith(code.field), r, "fma", strict=strict)
        assert np.all(code.is_codeword(res.words[res.ok]))
        assert set(res.reasons) <= {None, "rank_parity", "root_count"}
        assert (~res.ok).sum() > 0


def test_zero_capability_code():
    code = make(4, 16, 15)
    assert code.params.t == 0
    cw = code.encode(Arith(code.field), np.arange(15)[None, :])
    assert code.decode(Arith(code.field), cw[0]).ok
    r = cw.copy()
    r[0, 3] ^= 1
    out = code.decode(Arith(code.field), r[0])
    assert not out.ok and out.reason == "rank_parity"


def test_block_sum_definition_of_syndrome(rng):
    code = make(8, 256, 224)
    r = rng.integers(0, 256, 256)
    acc = block_ifft_sum(Arith(code.field), code.basis, r.reshape(8, 32), 5)
    u = fft(Arith(code.field), code.basis, code.field.mul(acc, code.pinv), 5, 0)
    assert np.array_equal(code.syndrome(Arith(code.field), r), u)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_round_trip_property(data):
    code = make(6, 50, 38)
    k, n, t = 38, 50, code.params.t
    msg = np.array(data.draw(st.lists(st.integers(0, 63), min_size=k, max_size=k)))
    w = data.draw(st.integers(0, t))
    pos = data.draw(st.lists(st.integers(0, n - 1), min_size=w, max_size=w, unique=True))
    vals = data.draw(st.lists(st.integers(1, 63), min_size=w, max_size=w))
    solver = data.draw(st.sampled_from(["fdma", "fma"]))
    cw = code.encode(Arith(code.field), msg)
    r = cw.copy()
    r[pos] ^= np.array(vals, dtype=np.int64)
    out = code.decode(Arith(code.field), r, solver)
    assert out.ok and np.array_equal(out.codeword, cw)
    assert sorted(out.positions.tolist()) == sorted(pos)
