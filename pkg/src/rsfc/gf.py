"""Binary extension field GF(2^m) with table arithmetic and operation counting.

Elements are plain integers (or numpy integer arrays) in ``[0, 2^m)`` whose bits
are the coefficients of the polynomial representation. Addition is XOR.
Multiplication goes through exp/log tables; ``log[0]`` points into a zero region
of the extended exp table so a product is a single gather with no branch.

Every arithmetic call made through an :class:`Arith` session increments its
:class:`OpCounter` by the number of scalar results produced, so batched calls
count the total work over all lanes.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

# Primitive reduction polynomials with x (0x02) as a generator.
DEFAULT_POLYS: dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

MAX_M = 16


class FieldError(ValueError):
    """Raised for invalid field parameters or operations such as 1/0."""


@dataclass(frozen=True)
class FieldSpec:
    m: int
    reduction_poly: int | None = None
    generator: int = 2

    def resolved(self) -> "FieldSpec":
        poly = self.reduction_poly
        if poly is None:
            if self.m not in DEFAULT_POLYS:
                raise FieldError(f"no default reduction polynomial for m={self.m}")
            poly = DEFAULT_POLYS[self.m]
        return FieldSpec(self.m, poly, self.generator)


class Field:
    """Immutable lookup tables for one GF(2^m) instance."""

    def __init__(self, spec: FieldSpec):
        spec = spec.resolved()
        m, poly, gen = spec.m, spec.reduction_poly, spec.generator
        if not 1 <= m <= MAX_M:
            raise FieldError(f"m must lie in [1, {MAX_M}], got {m}")
        if poly >> m != 1:
            raise FieldError(f"reduction polynomial {poly:#x} does not have degree {m}")
        if not poly & 1:
            raise FieldError(f"reduction polynomial {poly:#x} is divisible by x")
        q = 1 << m
        if not 0 < gen < q:
            raise FieldError(f"generator {gen:#x} is not a nonzero field element")

        order = q - 1
        exp = np.zeros(order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(order):
            if log[x] != -1:
                raise FieldError(
                    f"generator {gen:#x} is not primitive modulo {poly:#x} (order {i})"
                )
            exp[i] = x
            log[x] = i
            x = _clmul_mod(x, gen, poly, m)
        if x != 1:
            raise FieldError(f"generator {gen:#x} is not primitive modulo {poly:#x}")

        self.spec = spec
        self.m = m
        self.q = q
        self.order = order
        self.poly = poly
        self.generator = gen
        # log[0] = zero_log makes log[a]+log[b] land in the zero tail for any zero operand.
        self.zero_log = 2 * order
        log[0] = self.zero_log
        ext = np.zeros(4 * order + 1, dtype=np.int64)
        ext[: 2 * order] = np.concatenate([exp, exp])
        self.exp = ext
        self.log = log
        self.exp.setflags(write=False)
        self.log.setflags(write=False)
        self._exp_list = ext.tolist()
        self._log_list = log.tolist()

    def __repr__(self) -> str:
        return f"Field(m={self.m}, poly={self.poly:#x})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # Uncounted helpers for precomputation and test oracles.

    def mul(self, a, b):
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        if isinstance(a, (int, np.integer)):
            if a == 0:
                raise FieldError("inverse of zero")
            return self._exp_list[(self.order - self._log_list[a]) % self.order]
        a = np.asarray(a)
        if np.any(a == 0):
            raise FieldError("inverse of zero")
        return self.exp[(self.order - self.log[a]) % self.order]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise FieldError("zero to a negative power")
            return 0
        return self._exp_list[(self._log_list[a] * e) % self.order]

    def alpha_pow(self, e: int) -> int:
        return self._exp_list[e % self.order]

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)


def _clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return r


def reference_mul(a: int, b: int, field: Field) -> int:
    """Shift-and-add product, independent of the tables."""
    return _clmul_mod(a, b, field.poly, field.m)


_FIELD_CACHE: dict[FieldSpec, Field] = {}


def get_field(m: int, reduction_poly: int | None = None, generator: int = 2) -> Field:
    spec = FieldSpec(m, reduction_poly, generator).resolved()
    f = _FIELD_CACHE.get(spec)
    if f is None:
        f = _FIELD_CACHE[spec] = Field(spec)
    return f


@dataclass
class OpCounter:
    mul: int = 0
    add: int = 0
    div: int = 0

    def copy(self) -> "OpCounter":
        return OpCounter(self.mul, self.add, self.div)

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(self.mul + other.mul, self.add + other.add, self.div + other.div)

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(self.mul - other.mul, self.add - other.add, self.div - other.div)

    def scaled_down(self, k: int) -> "OpCounter":
        if self.mul % k or self.add % k or self.div % k:
            raise ValueError(f"counts {self} are not divisible by {k}")
        return OpCounter(self.mul // k, self.add // k, self.div // k)

    @property
    def total(self) -> int:
        return self.mul + self.add + self.div

    def as_dict(self) -> dict[str, int]:
        return {"mul": self.mul, "add": self.add, "div": self.div}


@dataclass
class Arith:
    """Counted arithmetic over one field.

    Subtraction is addition in characteristic two, so there is no ``sub``.
    ``stage(name)`` accumulates the counter delta of a block under ``name``.
    """

    field: Field
    counter: OpCounter = dc_field(default_factory=OpCounter)
    stages: dict[str, OpCounter] = dc_field(default_factory=dict)

    def add(self, a, b):
        if type(a) is int and type(b) is int:
            self.counter.add += 1
            return a ^ b
        r = np.bitwise_xor(a, b)
        self.counter.add += np.size(r)
        return r

    def iadd(self, dst: np.ndarray, src) -> np.ndarray:
        np.bitwise_xor(dst, src, out=dst)
        self.counter.add += dst.size
        return dst

    def mul(self, a, b):
        f = self.field
        if type(a) is int and type(b) is int:
            self.counter.mul += 1
            return f._exp_list[f._log_list[a] + f._log_list[b]]
        r = f.exp[f.log[a] + f.log[b]]
        self.counter.mul += r.size
        return r

    def inv(self, a):
        r = self.field.inv(a)
        self.counter.div += np.size(r)
        return r

    def div(self, a, b):
        f = self.field
        if type(a) is int and type(b) is int:
            if b == 0:
                raise FieldError("division by zero")
            self.counter.div += 1
            return f._exp_list[f._log_list[a] - f._log_list[b] + f.order] if a else 0
        b = np.asarray(b)
        if np.any(b == 0):
            raise FieldError("division by zero")
        a = np.asarray(a)
        e = f.log[a] - f.log[b] + f.order
        r = np.where(a == 0, 0, f.exp[np.where(a == 0, 0, e)])
        self.counter.div += r.size
        return r

    def snapshot(self) -> OpCounter:
        return self.counter.copy()

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        before = self.counter.copy()
        try:
            yield
        finally:
            delta = self.counter - before
            prev = self.stages.get(name)
            self.stages[name] = delta if prev is None else prev + delta

    def reset(self) -> None:
        self.counter = OpCounter()
        self.stages = {}
