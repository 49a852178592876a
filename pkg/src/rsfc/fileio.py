"""Codeword file format and raw symbol streams.

A codeword file is a 17-byte header (magic ``RSFC``, a version byte, then
``m``, ``n``, ``k`` as little-endian u32) followed by whole codewords. Symbols
are one byte each for ``m <= 8`` and little-endian u16 for ``8 < m <= 16``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"RSFC"
VERSION = 1
HEADER = struct.Struct("<4sBIII")


class FormatError(ValueError):
    pass


@dataclass
class WordFile:
    m: int
    n: int
    k: int
    words: np.ndarray  # (count, n)


def symbol_dtype(m: int) -> np.dtype:
    if 1 <= m <= 8:
        return np.dtype("u1")
    if m <= 16:
        return np.dtype("<u2")
    raise FormatError(f"symbols of {m} bits are not supported")


def pack_symbols(symbols: np.ndarray, m: int) -> bytes:
    symbols = np.asarray(symbols)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= 1 << m):
        raise FormatError("symbol out of range for the field")
    return symbols.astype(symbol_dtype(m)).tobytes()


def unpack_symbols(data: bytes, m: int) -> np.ndarray:
    dt = symbol_dtype(m)
    if len(data) % dt.itemsize:
        raise FormatError("truncated symbol stream")
    out = np.frombuffer(data, dtype=dt).astype(np.int64)
    if out.size and out.max() >= 1 << m:
        raise FormatError("symbol out of range for the field")
    return out


def dump_words(wf: WordFile) -> bytes:
    words = np.asarray(wf.words)
    if words.ndim != 2 or words.shape[1] != wf.n:
        raise FormatError(f"words must have shape (count, {wf.n})")
    return HEADER.pack(MAGIC, VERSION, wf.m, wf.n, wf.k) + pack_symbols(words, wf.m)


def load_words(data: bytes) -> WordFile:
    if len(data) < HEADER.size:
        raise FormatError("file too short for a header")
    magic, version, m, n, k = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if not (1 <= m <= 16 and 1 <= k < n <= 1 << m):
        raise FormatError(f"invalid code parameters m={m} n={n} k={k}")
    syms = unpack_symbols(data[HEADER.size :], m)
    if syms.size % n:
        raise FormatError("payload is not a whole number of codewords")
    return WordFile(m, n, k, syms.reshape(-1, n))


def read_words(path: str | Path) -> WordFile:
    return load_words(Path(path).read_bytes())


def write_words(path: str | Path, wf: WordFile) -> None:
    Path(path).write_bytes(dump_words(wf))
