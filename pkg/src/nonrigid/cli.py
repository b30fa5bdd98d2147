"""Command line: ``nonrigid analyze|verify|catalog``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .catalog import CATALOG
from .parser import ParseError
from .pipeline import (
    STRATEGIES,
    Options,
    SpecError,
    DerivationSpec,
    report_to_dict,
    report_to_text,
    run_pipeline,
    verify_report,
)


def _analyze_one(path: str, options: Options, fmt: str) -> tuple[int, str]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        report = run_pipeline(DerivationSpec.from_dict(doc), options)
    except (OSError, json.JSONDecodeError, ParseError, SpecError, TypeError) as exc:
        return 1, f"error: {path}: {exc}\n"
    if fmt == "json":
        return report.exit_code, json.dumps(report_to_dict(report), indent=2) + "\n"
    return report.exit_code, report_to_text(report)


def cmd_analyze(args: argparse.Namespace) -> int:
    options = Options(args.max_iter, args.samples, args.seed, args.strategy)
    target = Path(args.spec)
    if not target.is_dir():
        code, out = _analyze_one(str(target), options, args.format)
        (sys.stdout if code != 1 else sys.stderr).write(out)
        return code

    paths = sorted(str(p) for p in target.glob("*.json"))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_analyze_one, paths, [options] * len(paths), [args.format] * len(paths)))
    else:
        results = [_analyze_one(p, options, args.format) for p in paths]
    for path, (code, out) in zip(paths, results):
        if args.format == "json":
            sys.stdout.write(out if code != 1 else json.dumps({"error": out.strip()}) + "\n")
        else:
            sys.stdout.write(f"== {path}\n{out}")
    return max((code for code, _ in results), default=0)


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
        checks = verify_report(doc)
    except (OSError, json.JSONDecodeError, ParseError, SpecError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    failed = 0
    for name, ok in checks:
        if not ok:
            failed += 1
        if args.verbose or not ok:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.name:
        if args.name not in CATALOG:
            print(f"error: unknown catalog entry {args.name!r}", file=sys.stderr)
            return 1
        print(json.dumps(CATALOG[args.name], indent=2))
        return 0
    if args.write:
        out = Path(args.write)
        out.mkdir(parents=True, exist_ok=True)
        for name, spec in CATALOG.items():
            (out / f"{name}.json").write_text(json.dumps(spec, indent=2) + "\n", encoding="utf-8")
        return 0
    for name, spec in CATALOG.items():
        images = "; ".join(f"D({x}) = {f}" for x, f in spec["images"].items())
        print(f"{name}: {images}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonrigid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a derivation and certify non-rigidity of its kernel")
    p.add_argument("spec", help="spec JSON file, or a directory of them")
    p.add_argument("--max-iter", type=int, default=64)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for a directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="re-check every equality in a JSON report")
    p.add_argument("report")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list built-in example derivations")
    p.add_argument("name", nargs="?")
    p.add_argument("--write", metavar="DIR", help="write every entry as a spec file")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_iter", 1) < 1 or getattr(args, "samples", 0) < 0:
        parser.error("--max-iter must be >= 1 and --samples >= 0")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
