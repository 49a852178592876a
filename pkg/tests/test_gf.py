import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import clmul_mod, oracle_field
from rsfc.gf import DEFAULT_POLYS, Arith, Field, FieldError, FieldSpec, OpCounter, get_field, reference_mul

# Frozen from the shift-and-add oracle.
MUL_0x80_0x02 = 0x1D


def test_add_examples():
    ops = Arith(get_field(8))
    assert ops.add(0x57, 0x57) == 0
    assert ops.add(0x57, 0x00) == 0x57
    assert ops.add(0x0F, 0xF0) == 0xFF
    assert ops.counter.add == 3


def test_mul_examples():
    f = get_field(8)
    assert f.poly == 0x11D
    assert f.mul(0x02, 0x02) == 0x04
    assert clmul_mod(0x80, 0x02, 0x11D, 8) == MUL_0x80_0x02
    assert f.mul(0x80, 0x02) == MUL_0x80_0x02


@pytest.mark.parametrize("m,poly", [(8, 0x11D), (10, 0x409), (12, 0x1053)])
def test_generator_order(m, poly):
    f = get_field(m, poly)
    assert oracle_field(m, poly).order(2) == (1 << m) - 1
    assert f.order == (1 << m) - 1


def test_reducible_polynomial_rejected():
    with pytest.raises(FieldError):
        get_field(8, 0x100)
    with pytest.raises(FieldError):
        get_field(8, 0x1FF)  # (x^9 + 1)/(x + 1), reducible
    with pytest.raises(FieldError):
        get_field(8, 0x3D)  # degree 5
    with pytest.raises(FieldError):
        Field(FieldSpec(8, 0x11D, 0))


def test_non_primitive_generator_rejected():
    # 0x11B is irreducible but x has order 51 modulo it.
    with pytest.raises(FieldError, match="primitive"):
        get_field(8, 0x11B)
    assert get_field(8, 0x11B, 0x03).order == 255


@pytest.mark.parametrize("m", sorted(DEFAULT_POLYS))
def test_default_polys_are_primitive(m):
    f = get_field(m)
    assert np.array_equal(np.sort(f.exp[: f.order]), np.arange(1, f.q))


def test_tables_match_shift_and_add_exhaustively():
    f = get_field(8)
    a = np.repeat(np.arange(256), 256)
    b = np.tile(np.arange(256), 256)
    ref = np.array([clmul_mod(int(x), int(y), 0x11D, 8) for x, y in zip(a, b)])
    assert np.array_equal(f.mul(a, b), ref)


def test_distributivity_exhaustive_m8():
    f = get_field(8)
    a = np.arange(256)[:, None, None]
    b = np.arange(256)[None, :, None]
    for c0 in range(0, 256, 64):
        c = np.arange(c0, c0 + 64)[None, None, :]
        assert np.array_equal(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c))


@pytest.mark.parametrize("m", [10, 12, 16])
def test_distributivity_random(m):
    f = get_field(m)
    rng = np.random.default_rng(m)
    a, b, c = (rng.integers(0, f.q, 100_000) for _ in range(3))
    assert np.array_equal(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c))
    for x, y in zip(a[:300], b[:300]):
        assert f.mul(int(x), int(y)) == clmul_mod(int(x), int(y), f.poly, m)


@pytest.mark.parametrize("m", [4, 8, 12])
def test_exp_log_and_inverse(m):
    f = get_field(m)
    nz = np.arange(1, f.q)
    assert np.array_equal(f.exp[f.log[nz]], nz)
    assert np.all(f.mul(nz, f.inv(nz)) == 1)


def test_zero_operands():
    f = get_field(8)
    assert f.mul(0, 0x53) == 0 and f.mul(0x53, 0) == 0 and f.mul(0, 0) == 0
    assert np.all(f.mul(np.zeros(5, dtype=np.int64), np.arange(5)) == 0)
    with pytest.raises(FieldError):
        f.inv(0)
    assert f.pow(0, 0) == 1 and f.pow(0, 3) == 0


def test_counted_ops():
    ops = Arith(get_field(8))
    x = np.arange(10)
    ops.mul(x, 3)
    ops.add(x, x)
    ops.mul(2, 3)
    assert (ops.counter.mul, ops.counter.add, ops.counter.div) == (11, 10, 0)
    assert ops.div(6, 3) == get_field(8).mul(6, get_field(8).inv(3))
    assert ops.counter.div == 1
    ops.inv(np.arange(1, 5))
    assert ops.counter.div == 5
    with pytest.raises(FieldError):
        ops.div(1, 0)
    with pytest.raises(FieldError):
        ops.div(np.array([1, 2]), np.array([1, 0]))


def test_div_with_zero_numerator():
    ops = Arith(get_field(8))
    assert ops.div(0, 7) == 0
    assert np.array_equal(ops.div(np.array([0, 4]), np.array([9, 2])), [0, 2])


def test_stage_accounting():
    ops = Arith(get_field(8))
    with ops.stage("a"):
        ops.mul(np.arange(4), 2)
    with ops.stage("b"):
        ops.add(1, 2)
    with ops.stage("a"):
        ops.add(np.arange(3), 1)
    assert ops.stages["a"] == OpCounter(4, 3, 0)
    assert ops.stages["b"] == OpCounter(0, 1, 0)
    ops.reset()
    assert ops.counter == OpCounter() and ops.stages == {}


def test_counter_arithmetic():
    a = OpCounter(4, 6, 2)
    assert a + a == OpCounter(8, 12, 4)
    assert (a + a) - a == a
    assert a.scaled_down(2) == OpCounter(2, 3, 1)
    assert a.total == 12
    with pytest.raises(ValueError):
        OpCounter(3, 1, 0).scaled_down(2)


def test_counter_determinism():
    f = get_field(10)
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, f.q, (2, 50))
    runs = []
    for _ in range(2):
        ops = Arith(f)
        ops.mul(ops.add(a, b), a)
        runs.append(ops.counter)
    assert runs[0] == runs[1]


@given(st.integers(0, 4095), st.integers(0, 4095), st.integers(0, 4095))
def test_field_axioms_m12(a, b, c):
    f = get_field(12)
    assert f.mul(a, b) == f.mul(b, a) == reference_mul(a, b, f)
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    if a:
        assert f.mul(a, f.inv(a)) == 1
