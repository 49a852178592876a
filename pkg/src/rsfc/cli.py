"""Command-line front end: encode, corrupt, decode, bench, selftest.

Exit status is 0 on success, 2 if any word was uncorrectable and 1 for usage
or input errors. ``RSFC_FIELD_POLY`` (hex) overrides the reduction polynomial.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import selftest
from .baseline import ClassicParams, ClassicRS
from .bench import PUBLISHED_FIGURES, format_text, run_bench, to_json
from .codec import CodeParams, RSCode
from .fileio import FormatError, WordFile, pack_symbols, read_words, unpack_symbols, write_words
from .gf import Arith, FieldError, get_field

EXIT_OK, EXIT_USAGE, EXIT_UNCORRECTABLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field(m: int):
    env = os.environ.get("RSFC_FIELD_POLY")
    poly = None
    if env:
        try:
            poly = int(env, 16)
        except ValueError:
            raise UsageError(f"RSFC_FIELD_POLY={env!r} is not hexadecimal")
    return get_field(m, poly)


def _code(family: str, m: int, n: int, k: int):
    field = _field(m)
    if family == "classic":
        return ClassicRS(ClassicParams(m, n, k), field)
    return RSCode(CodeParams(m, n, k), field)


def cmd_encode(args) -> int:
    code = _code(args.family, args.m, args.n, args.k)
    data = Path(args.input).read_bytes()
    syms = unpack_symbols(data, args.m)
    k = args.k
    count = -(-syms.size // k)
    msgs = np.zeros(count * k, dtype=np.int64)
    msgs[: syms.size] = syms
    words = code.encode(Arith(code.field), msgs.reshape(count, k))
    write_words(args.output, WordFile(args.m, args.n, args.k, words))
    print(f"encoded {count} codeword(s) of ({args.n},{args.k})", file=sys.stderr)
    return EXIT_OK


def cmd_corrupt(args) -> int:
    wf = read_words(args.input)
    if not 0 <= args.errors <= wf.n:
        raise UsageError(f"--errors must lie in [0, {wf.n}]")
    rng = np.random.default_rng(args.seed)
    words = wf.words.copy()
    q = 1 << wf.m
    for row in words:
        pos = rng.choice(wf.n, args.errors, replace=False)
        row[pos] ^= rng.integers(1, q, args.errors)
    write_words(args.output, WordFile(wf.m, wf.n, wf.k, words))
    return EXIT_OK


def cmd_decode(args) -> int:
    wf = read_words(args.input)
    family = "classic" if args.solver == "ribm" else "omega"
    code = _code(family, wf.m, wf.n, wf.k)
    ops = Arith(code.field)
    if family == "classic":
        res = code.decode_batch(ops, wf.words)
    else:
        res = code.decode_batch(ops, wf.words, args.solver, strict=args.strict)
    write_words(args.output, WordFile(wf.m, wf.n, wf.k, res.words))
    if args.message_out:
        # Both families keep the message in the last k positions.
        Path(args.message_out).write_bytes(pack_symbols(res.words[:, wf.n - wf.k :], wf.m))
    bad = [i for i, ok in enumerate(res.ok) if not ok]
    fixed = sum(len(p) for p in res.positions)
    print(f"{len(res.ok) - len(bad)}/{len(res.ok)} word(s) decoded, {fixed} symbol(s) corrected", file=sys.stderr)
    for i in bad:
        print(f"word {i}: uncorrectable ({res.reasons[i]})", file=sys.stderr)
    return EXIT_UNCORRECTABLE if bad else EXIT_OK


def cmd_bench(args) -> int:
    if args.code == "custom":
        if None in (args.m, args.n, args.k):
            raise UsageError("--code custom needs --m, --n and --k")
        m, n, k = args.m, args.n, args.k
    else:
        m, n, k = PUBLISHED_FIGURES[args.code]["params"]
    solvers = tuple(args.solvers.split(","))
    for s in solvers:
        if s not in ("ribm", "fdma", "fma"):
            raise UsageError(f"unknown solver {s!r}")
    env = os.environ.get("RSFC_FIELD_POLY")
    poly = int(env, 16) if env else None
    report = run_bench(m, n, k, args.trials, args.seed, solvers, poly)
    if args.format == "json":
        print(json.dumps(to_json(report), indent=2))
    else:
        print(format_text(report))
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest.run(seed=args.seed) else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rsfc", description="FFT-based Reed-Solomon codec with operation counting")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("encode", help="encode a raw symbol stream into a codeword file")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--family", choices=("omega", "classic"), default="omega",
                   help="omega: FFT-decodable code; classic: alpha-power code for --solver ribm")
    e.add_argument("input")
    e.add_argument("output")
    e.set_defaults(func=cmd_encode)

    c = sub.add_parser("corrupt", help="add random symbol errors to every codeword")
    c.add_argument("--errors", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_corrupt)

    d = sub.add_parser("decode", help="decode a codeword file")
    d.add_argument("--solver", choices=("fdma", "fma", "ribm"), default="fma")
    d.add_argument("--strict", action="store_true", help="verify every corrected word")
    d.add_argument("--message-out", help="also write the decoded message symbols here")
    d.add_argument("input")
    d.add_argument("output")
    d.set_defaults(func=cmd_decode)

    b = sub.add_parser("bench", help="operation counts next to the published tables")
    b.add_argument("--code", choices=tuple(PUBLISHED_FIGURES) + ("custom",), default="256,224")
    b.add_argument("--m", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--solvers", default="ribm,fdma,fma")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="run reduced invariant checks")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, FieldError, ValueError, OSError) as exc:
        print(f"rsfc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
