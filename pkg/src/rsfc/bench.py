"""Operation-count benchmark against the published cost tables."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field as dc_field

import numpy as np

from .baseline import ClassicParams, ClassicRS
from .codec import CHECK_REPAIR, STAGES, CodeParams, RSCode
from .gf import Arith, OpCounter, get_field

SCHEMA = "rsfc-bench/1"
TOTAL = "Total"

# (mul, add, div) per stage, in table row order.
PUBLISHED_FIGURES: dict[str, dict] = {
    "256,224": {
        "params": (8, 256, 224),
        "classic": (8, 255, 223),
        "solver": "fdma",
        "ribm": [(8160, 8160, 0), (3136, 1568, 0), (4335, 4335, 0), (0, 0, 0), (544, 528, 16), (16175, 14591, 16)],
        "proposed": [(752, 1696, 0), (3233, 2244, 0), (640, 1280, 0), (80, 80, 0), (544, 528, 16), (5249, 5828, 16)],
    },
    "1024,896": {
        "params": (10, 1024, 896),
        "classic": (10, 1023, 895),
        "solver": "fdma",
        "ribm": [(130944, 130944, 0), (49408, 24704, 0), (66495, 66495, 0), (0, 0, 0), (8320, 8256, 64), (255167, 230399, 64)],
        "proposed": [(4160, 9088, 0), (49921, 33796, 0), (3584, 7168, 0), (448, 448, 0), (8320, 8256, 64), (66433, 58756, 64)],
    },
    "4096,3584": {
        "params": (12, 4096, 3584),
        "classic": (12, 4095, 3583),
        "solver": "fma",
        "ribm": [
            (2096640, 2096640, 0), (787456, 393728, 0), (1052415, 1052415, 0),
            (0, 0, 0), (131584, 131328, 256), (4068095, 3674111, 256),
        ],
        "proposed": [
            (21248, 45568, 0), (239616, 357372, 0), (18432, 36864, 0),
            (2304, 2304, 0), (131584, 131328, 256), (413184, 573436, 256),
        ],
    },
}

ROWS = STAGES + (TOTAL,)


@dataclass
class StageStats:
    mode: OpCounter
    low: OpCounter
    high: OpCounter

    @property
    def deterministic(self) -> bool:
        return self.low == self.high


@dataclass
class DecoderReport:
    name: str
    code: tuple[int, int, int]
    stages: dict[str, StageStats]
    extra: dict[str, StageStats]
    conventions: dict[str, str]
    seconds: float
    trials: int
    failures: int
    published: dict[str, OpCounter] | None = None

    @property
    def deterministic(self) -> bool:
        return all(s.deterministic for s in self.stages.values())


@dataclass
class BenchReport:
    code: tuple[int, int, int]
    trials: int
    seed: int
    decoders: list[DecoderReport] = dc_field(default_factory=list)


def _stats(samples: list[OpCounter]) -> StageStats:
    keyed = Counter((c.mul, c.add, c.div) for c in samples)
    mode = OpCounter(*keyed.most_common(1)[0][0])
    low = OpCounter(*(min(getattr(c, f) for c in samples) for f in ("mul", "add", "div")))
    high = OpCounter(*(max(getattr(c, f) for c in samples) for f in ("mul", "add", "div")))
    return StageStats(mode, low, high)


def proposed_conventions(p: CodeParams, solver: str) -> dict[str, str]:
    mu = p.mu
    blk = 1 << mu
    nb = p.blocks
    fm, fa = mu * blk // 2, mu * blk
    syn = (
        f"{nb} block IFFTs ({nb}x{fm} mul, {nb}x{fa} add) + {nb}x{blk} accumulate add"
        f" + {blk} mul by 1/p + FFT of u ({fm} mul, {fa} add)"
    )
    if p.eps != blk:
        syn += " + high-point interpolation and check-point scaling"
    if solver == "fdma":
        key = (
            f"FDMA: per point j, d/g update 3(eps-j-1) mul 2(eps-j-1) add and W/V update"
            f" 3x{p.t + 1} mul 2x{p.t + 1} add; then {p.t + 1} mul for z and 2 interpolations"
        )
    else:
        key = (
            "FMA: per merge of 2^mu points, 8 FFTs + 8 one-point evaluations, 4 mul 2 add per"
            " d/g update, 8 mul 4 add per matrix product point, 4 extended IFFTs"
        )
    return {
        "Syndrome": syn,
        "Key equation": key,
        "Chien search": f"{nb} FFTs of size {blk}: {nb}x{fm} mul, {nb}x{fa} add",
        "Formal derivative": f"X-basis derivative over {blk} coefficients: {mu}x{blk // 2} mul and add",
        "Forney's formula": (
            f"per message-position error: z and lambda' folded at the point ({max(p.t - 1, 0)} mul/add each),"
            " 1 mul by the stored point product, 1 div"
        ),
        CHECK_REPAIR: "re-encode after check-position errors (outside the table rows)",
    }


def ribm_conventions(p: ClassicParams) -> dict[str, str]:
    t = p.t
    return {
        "Syndrome": f"Horner from zero: {p.n}x{2 * t} mul and add",
        "Key equation": f"{2 * t} iterations x {3 * t + 1} cells x (2 mul, 1 add)",
        "Chien search": f"{t + 1} terms per point x {p.n} points, accumulated from zero",
        "Formal derivative": "folded into Forney's formula",
        "Forney's formula": f"per error: Horner of Omega and Lambda' ({2 * t} mul, {2 * t} add), 1 mul scale, 1 div",
    }


def _summarize(samples: list[dict[str, OpCounter]], names) -> dict[str, StageStats]:
    out = {}
    for name in names:
        out[name] = _stats([s.get(name, OpCounter()) for s in samples])
    return out


def _with_total(per_trial: list[dict[str, OpCounter]]) -> list[dict[str, OpCounter]]:
    res = []
    for s in per_trial:
        s = dict(s)
        tot = OpCounter()
        for name in STAGES:
            tot = tot + s.get(name, OpCounter())
        s[TOTAL] = tot
        res.append(s)
    return res


def _published_rows(key: str | None, which: str) -> dict[str, OpCounter] | None:
    if key is None:
        return None
    return {name: OpCounter(*row) for name, row in zip(ROWS, PUBLISHED_FIGURES[key][which])}


def run_proposed(params: CodeParams, solver: str, trials: int, rng: np.random.Generator,
                 poly: int | None = None, published_key: str | None = None) -> DecoderReport:
    """Decode ``trials`` words with ``t`` errors in message positions, one word at a time."""
    code = RSCode(params, get_field(params.m, poly))
    q = code.field.q
    samples = []
    failures = 0
    t0 = time.perf_counter()
    for _ in range(trials):
        msg = rng.integers(0, q, (1, params.k))
        cw = code.encode(Arith(code.field), msg)
        pos = rng.choice(np.arange(params.eps, params.n), params.t, replace=False)
        r = cw.copy()
        r[0, pos] ^= rng.integers(1, q, params.t)
        ops = Arith(code.field)
        res = code.decode_batch(ops, r, solver)
        failures += int(not res.ok[0] or np.any(res.words != cw))
        samples.append(res.stages)
    secs = time.perf_counter() - t0
    samples = _with_total(samples)
    return DecoderReport(
        name=solver.upper(),
        code=(params.m, params.n, params.k),
        stages=_summarize(samples, ROWS),
        extra=_summarize(samples, (CHECK_REPAIR,)),
        conventions=proposed_conventions(params, solver),
        seconds=secs,
        trials=trials,
        failures=failures,
        published=_published_rows(published_key, "proposed") if published_key and PUBLISHED_FIGURES[published_key]["solver"] == solver else None,
    )


def run_ribm(params: ClassicParams, trials: int, rng: np.random.Generator,
             poly: int | None = None, published_key: str | None = None) -> DecoderReport:
    code = ClassicRS(params, get_field(params.m, poly))
    q = code.field.q
    samples = []
    failures = 0
    t0 = time.perf_counter()
    for _ in range(trials):
        msg = rng.integers(0, q, (1, params.k))
        cw = code.encode(Arith(code.field), msg)
        pos = rng.choice(params.n, params.t, replace=False)
        r = cw.copy()
        r[0, pos] ^= rng.integers(1, q, params.t)
        ops = Arith(code.field)
        res = code.decode_batch(ops, r)
        failures += int(not res.ok[0] or np.any(res.words != cw))
        samples.append(res.stages)
    secs = time.perf_counter() - t0
    samples = _with_total(samples)
    return DecoderReport(
        name="RiBM",
        code=(params.m, params.n, params.k),
        stages=_summarize(samples, ROWS),
        extra={},
        conventions=ribm_conventions(params),
        seconds=secs,
        trials=trials,
        failures=failures,
        published=_published_rows(published_key, "ribm"),
    )


def run_bench(m: int, n: int, k: int, trials: int = 3, seed: int = 0,
              solvers=("ribm", "fdma", "fma"), poly: int | None = None) -> BenchReport:
    key = f"{n},{k}" if f"{n},{k}" in PUBLISHED_FIGURES and PUBLISHED_FIGURES[f"{n},{k}"]["params"][0] == m else None
    params = CodeParams(m, n, k)
    rng = np.random.default_rng(seed)
    report = BenchReport((m, n, k), trials, seed)
    for s in solvers:
        if s == "ribm":
            eps = n - k
            cn = (1 << m) - 1
            if eps % 2 or cn - eps < 1:
                continue
            report.decoders.append(run_ribm(ClassicParams(m, cn, cn - eps), trials, rng, poly, key))
        else:
            report.decoders.append(run_proposed(params, s, trials, rng, poly, key))
    return report


def _deviation(measured: int, ref: int) -> str:
    if ref == 0:
        return "exact" if measured == 0 else "n/a"
    return f"{100.0 * (measured - ref) / ref:+.1f}%"


def format_text(report: BenchReport) -> str:
    lines = []
    m, n, k = report.code
    lines.append(f"Operation counts for the ({n},{k}) code over GF(2^{m}), {report.trials} trial(s) per decoder")
    for dec in report.decoders:
        dm, dn, dk = dec.code
        lines.append("")
        lines.append(f"[{dec.name}] ({dn},{dk})  time {dec.seconds:.3f}s  failures {dec.failures}/{dec.trials}"
                     + ("" if dec.deterministic else "  COUNTS VARY ACROSS TRIALS"))
        head = f"{'Component':<18} {'Mul':>10} {'Add':>10} {'Div':>6}"
        if dec.published:
            head += f" {'Publ. mul':>10} {'Publ. add':>10} {'P.div':>6} {'dMul':>8} {'dAdd':>8}"
        head += "  Convention"
        lines.append(head)
        for name in ROWS:
            st = dec.stages[name]
            c = st.mode
            row = f"{name:<18} {c.mul:>10,} {c.add:>10,} {c.div:>6,}"
            if dec.published:
                p = dec.published[name]
                row += (f" {p.mul:>10,} {p.add:>10,} {p.div:>6,}"
                        f" {_deviation(c.mul, p.mul):>8} {_deviation(c.add, p.add):>8}")
            conv = dec.conventions.get(name, "sum of the rows above" if name == TOTAL else "")
            if not st.deterministic:
                conv += f" [min {st.low.as_dict()} max {st.high.as_dict()}]"
            lines.append(row + "  " + conv)
        for name, st in dec.extra.items():
            c = st.high
            lines.append(f"{'(' + name + ')':<18} {c.mul:>10,} {c.add:>10,} {c.div:>6,}  "
                         + dec.conventions.get(name, "") + " (max over trials)")
    return "\n".join(lines)


def to_json(report: BenchReport) -> dict:
    def stats(st: StageStats) -> dict:
        return {"mode": st.mode.as_dict(), "min": st.low.as_dict(), "max": st.high.as_dict()}

    out = {
        "schema": SCHEMA,
        "code": dict(zip(("m", "n", "k"), report.code)),
        "trials": report.trials,
        "seed": report.seed,
        "rows": list(ROWS),
        "decoders": [],
    }
    for dec in report.decoders:
        out["decoders"].append({
            "name": dec.name,
            "code": dict(zip(("m", "n", "k"), dec.code)),
            "seconds": dec.seconds,
            "failures": dec.failures,
            "deterministic": dec.deterministic,
            "stages": {name: stats(st) for name, st in dec.stages.items()},
            "extra": {name: stats(st) for name, st in dec.extra.items()},
            "conventions": dec.conventions,
            "published": None if dec.published is None else {k2: v.as_dict() for k2, v in dec.published.items()},
        })
    return out
