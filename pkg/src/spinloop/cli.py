"""Command-line front end: ``spinloop <command> [options]``.

Data goes to stdout (or ``--out``); progress and timings go to stderr.
Exit status: 0 success, 1 failed check or internal contract violation,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import ContractError

COMMANDS = ("series", "invariants", "steenrod", "loop", "gysin", "verify")
DEFAULT_MAX_DEGREE = 24
MAX_DEGREE_LIMIT = 64
ENV_MAX_DEGREE = "SPINLOOP_MAX_DEGREE"
SPIN_COMMANDS = ("gysin",)


@dataclass(frozen=True)
class RunConfig:
    command: str
    ns: tuple
    max_degree: int
    format: str = "text"
    output_path: Optional[str] = None
    seed: int = 0
    jobs: int = 1
    basis_degree: Optional[int] = None
    generators: Optional[tuple] = None
    presentation: Optional[str] = None
    method: str = "symmetric"

    @property
    def n(self) -> int:
        return self.ns[0]


def _default_degree() -> int:
    raw = os.environ.get(ENV_MAX_DEGREE)
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        return int(raw)
    except ValueError:
        return -1  # rejected by validation below


def _parse_range(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("expected A..B")
    a, b = int(lo), int(hi)
    if a > b:
        raise argparse.ArgumentTypeError("empty range")
    return tuple(range(a, b + 1))


def _parse_generators(text: str) -> tuple:
    try:
        degs = tuple(int(x) for x in text.split(":") if x)
    except ValueError:
        raise argparse.ArgumentTypeError("expected degrees like 2:3:4") from None
    if any(d < 1 for d in degs):
        raise argparse.ArgumentTypeError("generator degrees must be >= 1")
    return degs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinloop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--n", type=int)
        group.add_argument("--n-range", type=_parse_range)
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        if name == "loop":
            p.add_argument("--generators", type=_parse_generators)
            p.add_argument("--basis", type=int, dest="basis_degree")
        if name == "series":
            p.add_argument("--generators", type=_parse_generators)
        if name == "gysin":
            p.add_argument("--presentation")
        if name == "invariants":
            p.add_argument("--method", choices=("symmetric", "dense"), default="symmetric")
    return parser


def make_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    D = args.max_degree if args.max_degree is not None else _default_degree()
    if not 0 <= D <= MAX_DEGREE_LIMIT:
        parser.error(f"max degree must be in 0..{MAX_DEGREE_LIMIT}")
    generators = getattr(args, "generators", None)
    if args.n is not None:
        ns = (args.n,)
    elif args.n_range is not None:
        ns = args.n_range
    elif generators is not None:
        ns = ()
    else:
        ns = (3,)
    low = 3 if args.command in SPIN_COMMANDS else 2
    for n in ns:
        if not low <= n <= (9 if args.command in SPIN_COMMANDS else 64):
            parser.error(f"n = {n} is outside the supported range for {args.command}")
    if args.command == "verify" and any(n > 9 for n in ns):
        parser.error("verify supports n <= 9")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    basis_degree = getattr(args, "basis_degree", None)
    if basis_degree is not None and not 0 <= basis_degree <= D:
        parser.error("--basis degree must be within the degree bound")
    return RunConfig(
        command=args.command,
        ns=tuple(ns),
        max_degree=D,
        format=args.format,
        output_path=args.out,
        seed=args.seed,
        jobs=args.jobs,
        basis_degree=basis_degree,
        generators=generators,
        presentation=getattr(args, "presentation", None),
        method=getattr(args, "method", "symmetric"),
    )


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# report builders: each returns (json-able document, csv rows, text lines, ok)


def _series(cfg: RunConfig):
    from .polyalg import closed_form_series

    groups = [("custom", cfg.generators)] if cfg.generators else [(n, tuple(range(2, n + 1))) for n in cfg.ns]
    docs, rows, lines = [], [], []
    for label, degs in groups:
        s = closed_form_series(degs, (), cfg.max_degree).to_list()
        docs.append({"n": label, "degrees": list(degs), "series": s})
        rows += [{"n": label, "degree": d, "dim": c} for d, c in enumerate(s)]
        lines.append(f"n={label} degrees={list(degs)}: {' '.join(map(str, s))}")
    return docs, rows, lines, True


def _invariants(cfg: RunConfig):
    from .invariants import invariant_report

    docs, rows, lines = [], [], []
    for n in cfg.ns:
        _progress(f"invariants n={n}")
        rep = invariant_report(n, cfg.max_degree, cfg.method)
        doc = rep.to_dict()
        docs.append(doc)
        for d in range(cfg.max_degree + 1):
            rows.append({
                "n": n, "degree": d,
                "invariant": rep.invariant_dims[d],
                "subalgebra": rep.subalgebra_dims[d],
                "expected": rep.expected[d],
            })
        lines.append(f"n={n} {doc['status']} faithful={rep.faithful} image_order={rep.image_order}")
        lines.append(f"  invariant:  {' '.join(map(str, doc['invariant_dims']))}")
        lines.append(f"  subalgebra: {' '.join(map(str, doc['subalgebra_dims']))}")
        lines.append(f"  expected:   {' '.join(map(str, doc['expected']))}")
    return docs, rows, lines, True


def _steenrod(cfg: RunConfig):
    from .steenrod import steenrod_rows, wu_formula

    docs, rows, lines = [], [], []
    ok = True
    for n in cfg.ns:
        _progress(f"steenrod n={n}")
        table = steenrod_rows(n)
        for r in table:
            r["wu_agrees"] = r["value"] == str(wu_formula(r["i"], r["j"], n))
            ok &= r["wu_agrees"]
        docs.append({"n": n, "squares": table})
        rows += [{"n": n, **r} for r in table]
        lines += [f"n={n} Sq^{r['i']} w{r['j']} = {r['value']}" for r in table]
    return docs, rows, lines, ok


def _loop(cfg: RunConfig):
    from .loopalg import bso_loop_model, degree_model, loop_basis, loop_series

    if cfg.generators:
        degs = cfg.generators
        names = [f"w{d}" for d in degs] if len(set(degs)) == len(degs) else None
        models = [("custom", degree_model(degs, names))]
    else:
        models = [(n, bso_loop_model(n)) for n in cfg.ns]
    docs, rows, lines = [], [], []
    for label, m in models:
        s = loop_series(m, cfg.max_degree).to_list()
        doc = {"n": label, "degrees": list(m.base.degrees), "series": s}
        lines.append(f"n={label} degrees={list(m.base.degrees)}: {' '.join(map(str, s))}")
        if cfg.basis_degree is not None:
            basis = loop_basis(m, cfg.basis_degree).text()
            doc["basis"] = {"degree": cfg.basis_degree, "elements": basis}
            lines += [f"  {t}" for t in basis]
        docs.append(doc)
        rows += [{"n": label, "degree": d, "dim": c} for d, c in enumerate(s)]
    return docs, rows, lines, True


def _gysin(cfg: RunConfig):
    from .fibersq import Presentation, gysin_assemble

    presentation = None
    if cfg.presentation:
        with open(cfg.presentation, encoding="utf-8") as fh:
            presentation = Presentation.from_json(fh.read())
    docs, rows, lines = [], [], []
    ok = True
    for n in cfg.ns:
        _progress(f"gysin n={n}")
        table = gysin_assemble(n, cfg.max_degree, presentation, progress=lambda d: _progress(f"  degree {d}"))
        ok &= table.agrees
        docs.append(table.to_dict())
        rows += [{"n": n, **r} for r in table.rows()]
        lines.append(f"n={n} degrees={list(table.effective_degrees)} agrees={table.agrees}")
        lines.append(f"  assembled: {' '.join(map(str, table.assembled_dims))}")
        lines.append(f"  direct:    {' '.join(map(str, table.direct_dims))}")
    return docs, rows, lines, ok


def _verify_one(args):
    from .verify import run_checks

    n, D, seed = args
    return run_checks(n, D, seed, progress=_progress)


def _verify(cfg: RunConfig):
    jobs = [(n, cfg.max_degree, cfg.seed) for n in cfg.ns]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    checks = [c for group in results for c in group]
    for c in checks:
        _progress(f"{c.name} n={c.n}: {c.seconds:.3f}s")
    docs = [c.to_dict() for c in checks]
    rows = docs
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name} n={c.n}: {c.detail}" for c in checks]
    ok = all(c.passed for c in checks)
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return docs, rows, lines, ok


HANDLERS = {
    "series": _series,
    "invariants": _invariants,
    "steenrod": _steenrod,
    "loop": _loop,
    "gysin": _gysin,
    "verify": _verify,
}


def render(cfg: RunConfig, docs: list, rows: List[dict], lines: List[str]) -> str:
    if cfg.format == "json":
        doc = {"command": cfg.command, "max_degree": cfg.max_degree, "results": docs}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        header = list(rows[0]) if rows else ["n", "degree"]
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> int:
    try:
        docs, rows, lines, ok = HANDLERS[cfg.command](cfg)
    except ContractError as exc:
        print(f"spinloop: error: {exc}", file=sys.stderr)
        return 1
    text = render(cfg, docs, rows, lines)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(make_config(args, parser))


if __name__ == "__main__":
    sys.exit(main())
