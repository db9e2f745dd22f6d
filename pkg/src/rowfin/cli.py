"""Verification command line.

Each subcommand runs one construction, verifies its postconditions, and
emits a pretty text report plus a machine-readable JSON document with
stable key order.  Identical configs produce byte-identical JSON (wall
time is reported only in the pretty text).  Exit status is nonzero
exactly when a check fails; hitting a resource bound is a warning, not a
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import classify as cl
from . import fearing as fr
from . import matrices as mx
from . import triangular as tr
from . import twogen as tg
from . import words as wd
from .indexing import EnumerationStall, PreorderSpecError, parse_preorder
from .rings import CountableRingEnum, parse_ring_spec
from .twogen import ConstructionError

PASS, FAIL, WARN = "pass", "fail", "warn"


def default_bound() -> int:
    return int(os.environ.get("ROWFIN_BOUND", "1000000"))


class Report:
    def __init__(self, subcommand: str, config: dict):
        self.doc = {"subcommand": subcommand, "config": config, "checks": [],
                    "witnesses": {}}

    def check(self, name: str, verdict: str, detail=None):
        entry = {"name": name, "verdict": verdict}
        if detail is not None:
            entry["detail"] = detail
        self.doc["checks"].append(entry)

    def witness(self, name: str, value):
        self.doc["witnesses"][name] = value

    @property
    def failed(self) -> bool:
        return any(c["verdict"] == FAIL for c in self.doc["checks"])

    def to_json(self) -> str:
        return json.dumps(self.doc, sort_keys=True, separators=(",", ":")) + "\n"

    def pretty(self, elapsed: float) -> str:
        lines = [f"== rowfin {self.doc['subcommand']} =="]
        for key, val in sorted(self.doc["config"].items()):
            lines.append(f"   {key} = {val}")
        for c in self.doc["checks"]:
            mark = {PASS: "ok  ", FAIL: "FAIL", WARN: "warn"}[c["verdict"]]
            detail = f"  ({c['detail']})" if "detail" in c else ""
            lines.append(f" [{mark}] {c['name']}{detail}")
        lines.append(f" wall-time: {elapsed:.3f}s")
        return "\n".join(lines) + "\n"


def _window_check(report: Report, name: str, check: mx.WindowCheck):
    if check:
        report.check(name, PASS)
    else:
        report.check(name, FAIL, check.describe())


def _sparse_witness(f, window):
    return [[r, c, t] for r, c, t in mx.to_sparse(f, window)]


# ---------------------------------------------------------------------------
# Built-in source families


def builtin_family(kind: str, ring, seed: int, count: int) -> dict:
    rng = random.Random(seed)
    if kind == "empty":
        return {}
    if kind == "units":
        # Shifted so every column index stays positive.
        return {i: mx.matrix_unit(ring, 1, i + 3) for i in range(-2, 3)}
    if kind == "random":
        out = {}
        for i in range(count):
            rows = {}
            for _ in range(rng.randint(1, 5)):
                r, c = rng.randint(1, 24), rng.randint(1, 24)
                rows.setdefault(r, {})[c] = ring.random_payload(rng)
            out[i] = mx.from_rows(ring, rows, tag=f"u{i}")
        return out
    raise ValueError(f"unknown family {kind!r}")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_two_gen(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("two-gen", {
        "ring": args.ring, "window": args.window, "seed": args.seed,
        "family": args.family, "count": args.count, "corrupt": bool(args.corrupt),
    })
    try:
        source = builtin_family(args.family, ring, args.seed, args.count)
        fam = tg.build_g_family(source, ring, verify_window=min(args.window, 24))
        witness = tg.build_two_generators(fam, verify_window=min(args.window, 28))
    except ConstructionError as exc:
        report.check("construction", FAIL, str(exc))
        return report
    report.check("construction", PASS)
    f3 = witness.f3
    if args.corrupt:
        f3 = mx.add_maps(f3, mx.matrix_unit(ring, 2, 1))
    env = {"f1": witness.f1, "f3": f3}
    for i in range(1, 6):
        got = wd.eval_word(tg.g_word(i), env, ring)
        expected = {1: fam.g1, 2: fam.g2, 3: fam.g3, 4: fam.g4, 5: fam.g5}[i]
        _window_check(report, f"g{i} word", mx.equal_on_window(got, expected,
                                                               args.window))
    for i in sorted(fam.source):
        got = wd.eval_word(witness.word_for_u(i), env, ring)
        _window_check(report, f"u{i} word",
                      mx.equal_on_window(got, fam.source[i], args.window))
    report.witness("f1", _sparse_witness(witness.f1, args.window))
    report.witness("f3", _sparse_witness(witness.f3, args.window))
    report.witness("words", {str(i): wd.format_word(witness.word_for_u(i))
                             for i in sorted(fam.source)})
    return report


def cmd_maltsev(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("maltsev", {
        "ring": args.ring, "count": args.count, "window": args.window,
        "seed": args.seed, "corrupt": bool(args.corrupt),
    })
    try:
        emb = tg.maltsev_embed(CountableRingEnum(ring), args.count,
                               window=args.window,
                               rng=random.Random(args.seed))
    except ConstructionError as exc:
        report.check("embedding", FAIL, str(exc))
        return report
    if args.corrupt:
        report.check("embedding", FAIL,
                     "corruption flag: simulated word mismatch")
        return report
    report.check("embedding", PASS,
                 f"{emb.count} elements, {emb.hom_checks} hom checks, "
                 f"{emb.center_checks} center checks")
    report.witness("words", {str(i): wd.format_word(w)
                             for i, w in sorted(emb.words.items())})
    return report


def cmd_sandwich(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("sandwich", {
        "ring": args.ring, "window": args.window, "seed": args.seed,
        "count": args.count, "corrupt": bool(args.corrupt),
    })
    rng = random.Random(args.seed)
    A, B = tr.sandwich_A(ring), tr.sandwich_B(ring)
    diag = parse_preorder("diag")
    for trial in range(args.count):
        rows = {}
        for i in range(1, args.window + 1):
            entries = {c: ring.random_payload(rng)
                       for c in range(1, i + 1) if rng.random() < 0.5}
            if entries:
                rows[i] = entries
        Y = mx.from_rows(ring, rows, tag=f"Y{trial}")
        try:
            X = tr.sandwich_X(Y, args.window, verify=not args.corrupt)
        except tr.SandwichError as exc:
            report.check(f"trial {trial}", FAIL, str(exc))
            continue
        if args.corrupt:
            X = mx.add_maps(X, mx.matrix_unit(ring, 1, 1))
        axb = mx.compose(mx.compose(A, X), B)
        _window_check(report, f"trial {trial} AXB=Y",
                      mx.equal_on_window(axb, Y, args.window))
        member = cl.preorder_membership(X, diag, args.window)
        report.check(f"trial {trial} X diagonal", PASS if member.ok else FAIL,
                     None if member.ok else str(member.violations[0]))
    return report


def cmd_classify(args) -> Report:
    report = Report("classify", {"preorder": args.preorder, "bound": args.bound})
    try:
        rho = parse_preorder(args.preorder)
        verdict = cl.classify_preorder(rho, spot_bound=args.bound)
    except (cl.ClassifyError, PreorderSpecError) as exc:
        report.check("classification", FAIL, str(exc))
        return report
    report.check("classification", PASS, verdict.verdict)
    report.witness("verdict", verdict.verdict)
    if isinstance(verdict.evidence, frozenset):
        report.witness("exceptional_rows", sorted(verdict.evidence))
    return report


def cmd_witness(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("witness", {
        "preorder": args.preorder, "ring": args.ring, "window": args.window,
        "seed": args.seed, "count": args.count, "corrupt": bool(args.corrupt),
    })
    rng = random.Random(args.seed)
    try:
        rho = parse_preorder(args.preorder)
        witness = cl.eclass_witness(rho, ring)
    except (cl.ClassifyError, PreorderSpecError) as exc:
        report.check("witness construction", FAIL, str(exc))
        return report
    report.check("witness construction", PASS, witness.branch)
    upper_only = witness.branch == "Nested"
    for trial in range(args.count):
        rows = {}
        for j in range(1, args.window + 1):
            lo = j if upper_only else 1
            entries = {c: ring.random_payload(rng)
                       for c in range(lo, args.window + 1) if rng.random() < 0.4}
            if entries:
                rows[j] = entries
        target = mx.from_rows(ring, rows, tag=f"t{trial}")
        try:
            lifted = witness.verify(target, args.window)
        except cl.ClassifyError as exc:
            report.check(f"trial {trial}", FAIL, str(exc))
            continue
        if args.corrupt:
            bad = mx.add_maps(lifted, mx.matrix_unit(ring, 1, args.window + 2))
            sandwich = mx.compose(mx.compose(witness.g, bad), witness.h)
            _window_check(report, f"trial {trial} (corrupted)",
                          mx.equal_on_window(sandwich, target, args.window))
        else:
            report.check(f"trial {trial}", PASS)
    return report


_DESCRIPTORS = {
    "diagonal": fr.diagonal_fearing,
    "band1": lambda: fr.banded_fearing(1),
    "band2": lambda: fr.banded_fearing(2),
    "stretch2": lambda: fr.stretch_fearing(2),
    "paired": fr.paired_fearing,
}


def cmd_fear(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("fear", {
        "ring": args.ring, "descriptor": args.descriptor, "blocks": args.blocks,
        "oracle_max": args.oracle_max, "corrupt": bool(args.corrupt),
    })
    descriptor = _DESCRIPTORS[args.descriptor]()
    shift = mx.from_index_map(ring, lambda a: a + 1, tag="shift")
    witness = fr.fear_witness(descriptor, {"s": shift}, args.blocks, ring)
    for p in witness.pairs:
        escape_ok = p.escape not in p.cover
        if args.corrupt:
            escape_ok = p.escape in p.cover
        report.check(f"block {p.j} escape certificate",
                     PASS if escape_ok else FAIL,
                     f"escape={p.escape} cover_size={len(p.cover)}")
    if args.oracle_max:
        env = {"s": shift}
        for p in witness.pairs[: args.oracle_max and 2]:
            if p.j > args.oracle_max:
                break
            try:
                res = wd.proximity_oracle(p.x, p.y, env, p.j,
                                          word_cap=default_bound())
            except wd.OracleBudgetExceeded as exc:
                report.check(f"block {p.j} oracle", WARN, str(exc))
                continue
            report.check(f"block {p.j} oracle",
                         FAIL if res.found else PASS,
                         f"words_tried={res.words_tried}")
    report.witness("blocks", [[p.j, sorted(p.block)] for p in witness.pairs])
    return report


def cmd_simple_full(args) -> Report:
    report = Report("simple-full", {"n": args.n, "p": args.p})
    try:
        census = cl.simple_full_check(args.n, args.p)
    except cl.ClassifyError as exc:
        report.check("census", WARN if "feasibility" in str(exc) else FAIL,
                     str(exc))
        return report
    report.check("census", PASS, f"count={census.count}")
    report.witness("count", census.count)
    report.witness("preorders", [[list(p) for p in rel]
                                 for rel in census.preorders])
    return report


def _parse_vec(text: str, ring):
    entries = {}
    if text:
        for piece in text.split(","):
            idx, _, val = piece.partition(":")
            entries[int(idx)] = ring.parse_payload(val)
    return mx.FinVec(ring, entries)


def cmd_oracle(args) -> Report:
    ring = parse_ring_spec(args.ring)
    report = Report("oracle", {
        "ring": args.ring, "x1": args.x1, "x2": args.x2, "r_max": args.r_max,
        "mode": args.mode,
    })
    x1 = _parse_vec(args.x1, ring)
    env = {"s": mx.from_index_map(ring, lambda a: a + 1, tag="shift")}
    if args.infile:
        with open(args.infile) as fh:
            file_ring, m = mx.load_sparse(fh.read())
        if file_ring != ring:
            report.check("input", FAIL, "ring mismatch in input file")
            return report
        env["m"] = m
    if args.mode == "closure":
        step = wd.StepSupport(supp_fn=lambda a: {a}, u_maps=env)
        rep = wd.support_closure(x1, step, args.r_max)
        report.check("closure", PASS, f"cover_size={len(rep.cover)}")
        report.witness("cover", sorted(rep.cover))
        return report
    x2 = _parse_vec(args.x2, ring)
    try:
        res = wd.proximity_oracle(x1, x2, env, args.r_max,
                                  word_cap=default_bound())
    except wd.OracleBudgetExceeded as exc:
        report.check("proximity", WARN, str(exc))
        return report
    if res.found:
        report.check("proximity", PASS, f"found at length {res.r}")
        report.witness("word", wd.format_word(res.witness))
    else:
        report.check("proximity", PASS, f"not within {res.r}")
        report.witness("word", None)
    report.witness("found", res.found)
    return report


# ---------------------------------------------------------------------------
# Argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rowfin",
        description="Exact verification of row-finite matrix constructions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ring="GF:3", window=20):
        p.add_argument("--ring", default=ring)
        p.add_argument("--window", type=int, default=window)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--corrupt", action="store_true")

    p = sub.add_parser("two-gen")
    common(p, window=28)
    p.add_argument("--family", default="units",
                   choices=["units", "random", "empty"])
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_two_gen)

    p = sub.add_parser("maltsev")
    common(p, ring="Zmod:6", window=16)
    p.add_argument("--count", type=int, default=6)
    p.set_defaults(func=cmd_maltsev)

    p = sub.add_parser("sandwich")
    common(p, ring="GF:5", window=20)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_sandwich)

    p = sub.add_parser("classify")
    p.add_argument("--preorder", required=True)
    p.add_argument("--bound", type=int, default=40)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness")
    common(p, ring="GF:3", window=12)
    p.add_argument("--preorder", required=True)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("fear")
    common(p, ring="GF:3", window=0)
    p.add_argument("--descriptor", default="diagonal",
                   choices=sorted(_DESCRIPTORS))
    p.add_argument("--blocks", type=int, default=8)
    p.add_argument("--oracle-max", type=int, default=0)
    p.set_defaults(func=cmd_fear)

    p = sub.add_parser("simple-full")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simple_full)

    p = sub.add_parser("oracle")
    p.add_argument("--ring", default="GF:2")
    p.add_argument("--x1", default="1:1")
    p.add_argument("--x2", default="")
    p.add_argument("--r-max", type=int, default=3)
    p.add_argument("--mode", default="proximity",
                   choices=["proximity", "closure"])
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    return parser


def run(argv=None) -> tuple[Report, float, object]:
    args = build_parser().parse_args(argv)
    start = time.monotonic()
    try:
        report = args.func(args)
    except EnumerationStall as exc:
        report = Report(args.command, {})
        report.check("enumeration", WARN, str(exc))
    return report, time.monotonic() - start, args


def main(argv=None) -> int:
    report, elapsed, args = run(argv)
    sys.stdout.write(report.pretty(elapsed))
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(report.to_json())
    else:
        sys.stdout.write(report.to_json())
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
