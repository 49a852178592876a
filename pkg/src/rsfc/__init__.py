"""FFT-based Reed-Solomon encoding and decoding over GF(2^m) with operation counting."""

from .basis import Basis, build_basis
from .baseline import ClassicParams, ClassicRS
from .codec import CodeParams, DecodeOutcome, DecodeResult, RSCode
from .gf import Arith, Field, FieldSpec, OpCounter, get_field
from .keysolver import BasisMatrix, KeySolution, fdma_solve, fma_solve, ma_solve, select_solution

__all__ = [
    "Arith",
    "Basis",
    "BasisMatrix",
    "ClassicParams",
    "ClassicRS",
    "CodeParams",
    "DecodeOutcome",
    "DecodeResult",
    "Field",
    "FieldSpec",
    "KeySolution",
    "OpCounter",
    "RSCode",
    "build_basis",
    "fdma_solve",
    "fma_solve",
    "get_field",
    "ma_solve",
    "select_solution",
]

__version__ = "0.1.0"
