"""Command line driver: load corpora, evaluate functors and dimensions, run checks.

Exit status is 0 on success, 1 when a check or computation fails and 2 for
input errors.
"""
import json
import logging
import sys
from argparse import ArgumentParser, ArgumentTypeError, Namespace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import ValidationError

from gorhom import __version__
from gorhom.algebras import LEFT, RIGHT, FinModule
from gorhom.api import DegreeError, GorhomError, InputError
from gorhom.corpus import Corpus, load_corpus, load_file
from gorhom.functors import (
    BTOR,
    EXT,
    GF_RELATIVE,
    GP_RELATIVE,
    STOR,
    TATE,
    TOR,
    FunctorRequest,
    HomologyFunctors,
    oriented,
)
from gorhom.gdims import GFD, GPD, dimension, theorem_b_bound
from gorhom.resolutions import FLAT, PROJECTIVE
from gorhom.tensor import tensor_homology
from gorhom.workflows.suite import SuiteSettings, run_suite, select_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

FUNCTOR_COMMANDS = {
    "tor": TOR,
    "tate": TATE,
    "btor": BTOR,
    "stor": STOR,
    "gptor": GP_RELATIVE,
    "gftor": GF_RELATIVE,
    "ext": EXT,
}
MODULE_DEGREES = (TOR, GP_RELATIVE, GF_RELATIVE, EXT)


def degree_range(text: str) -> Tuple[int, int]:
    """``a..b`` or a single degree."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ArgumentTypeError(f"expected a..b or an integer, got {text!r}") from None
    if lo > hi:
        raise ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="gorhom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gorhom {__version__}")
    parser.add_argument("-c", "--config", type=Path, help="YAML settings file")
    parser.add_argument("--corpus", type=Path, action="append", default=[], help="extra corpus file (repeatable)")
    parser.add_argument("--log-level", help="override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="validate corpus files and list their contents")
    p.add_argument("files", type=Path, nargs="+")
    p.add_argument("--json", type=Path, help="write the summary here")

    p = sub.add_parser("resolve", help="build a resolution of a module or complex")
    p.add_argument("object")
    p.add_argument("--kind", choices=["projective", "complete", "flat", "proper"], default="complete")
    p.add_argument("--length", type=int, default=4, help="length of a projective resolution")
    p.add_argument("--json", type=Path, help="write the full resolution here")

    p = sub.add_parser("tensor", help="homology of the tensor product of two complexes")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--range", type=degree_range)
    p.add_argument("--json", type=Path)

    for command, functor in FUNCTOR_COMMANDS.items():
        p = sub.add_parser(command, help=f"evaluate {functor}")
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--range", type=degree_range)
        p.add_argument("--json", type=Path)

    p = sub.add_parser("gdim", help="Gorenstein flat or projective dimension")
    p.add_argument("object")
    p.add_argument("--flavor", choices=[GFD, GPD], default=GFD)
    p.add_argument("--bound", action="store_true", help="also report the componentwise bound")
    p.add_argument("--json", type=Path)

    p = sub.add_parser("check", help="run verification checks")
    p.add_argument("selection", nargs="?", default="all", help="theorem tag, check id or 'all'")
    p.add_argument("--range", type=degree_range, help="override the probe range of every check")
    p.add_argument("--json", type=Path, help="write the suite report here")
    return parser


def _settings(args: Namespace) -> SuiteSettings:
    cfg = SuiteSettings.from_yaml(args.config) if args.config else SuiteSettings()
    update: Dict[str, Any] = {"corpus_files": [*cfg.corpus_files, *args.corpus]}
    if args.log_level:
        update["log_level"] = args.log_level
    return cfg.copy(update=update)


def _write_json(path: Optional[Path], data: Any) -> None:
    if path is None:
        return
    with open(path, mode="w", encoding="utf-8") as fp:
        json.dump(data, fp, indent=2)
        fp.write("\n")


def _corpus(cfg: SuiteSettings) -> Corpus:
    return load_corpus(cfg.corpus_files)


def cmd_load(cfg: SuiteSettings, args: Namespace) -> int:
    corpus = _corpus(cfg)
    before = corpus.summary()
    files: Dict[str, Dict[str, int]] = {}
    for path in args.files:
        load_file(path, corpus)
        after = corpus.summary()
        files[str(path)] = {k: after[k] - before[k] for k in after}
        before = after
        print(f"{path}: " + ", ".join(f"{v} {k}" for k, v in files[str(path)].items()))
    _write_json(args.json, {"files": files, "total": corpus.summary()})
    return EXIT_OK


def cmd_resolve(cfg: SuiteSettings, args: Namespace, functors: HomologyFunctors, corpus: Corpus) -> int:
    X = corpus.argument(args.object)
    if args.kind in ("projective", "proper"):
        if not isinstance(X, FinModule):
            raise InputError("<arguments>", f"{args.kind} resolutions take a module, {args.object!r} is a complex")
        if args.kind == "projective":
            P = functors.resolution(X, args.length)
            ranks = [P.complex.dim(n) for n in range(P.complex.lo, P.complex.hi + 1)]
            print(f"{P.kind} resolution, period {P.period}, dimensions {ranks}")
            _write_json(args.json, {"kind": P.kind, "period": P.period, "complex": P.complex.to_json()})
        else:
            G = functors.proper_resolution(X)
            print(f"proper Gorenstein projective resolution ({G.method}), length {G.complex.hi}")
            _write_json(args.json, {"method": G.method, "complex": G.complex.to_json()})
        return EXIT_OK
    res = functors.complete_resolution(X, FLAT if args.kind == "flat" else PROJECTIVE)
    print(f"complete {res.flavor} resolution ({res.method}), g = {res.g}, {res.acyclicity.method}")
    _write_json(args.json, res.to_json())
    return EXIT_OK


def _print_values(label: str, values: Dict[int, Any], path: Optional[Path], extra: Dict[str, Any]) -> None:
    for i, group in values.items():
        print(f"{label}_{i} = {group}")
    _write_json(path, {**extra, "values": {str(i): g.to_json() for i, g in values.items()}})


def cmd_tensor(cfg: SuiteSettings, args: Namespace, functors: HomologyFunctors, corpus: Corpus) -> int:
    M, N = oriented(corpus.argument(args.left), RIGHT), oriented(corpus.argument(args.right), LEFT)
    lo, hi = args.range or cfg.probe_range
    values = tensor_homology(M, N, range(lo, hi + 1))
    _print_values("H", values, args.json, {"left": args.left, "right": args.right})
    return EXIT_OK


def cmd_functor(cfg: SuiteSettings, args: Namespace, functors: HomologyFunctors, corpus: Corpus) -> int:
    functor = FUNCTOR_COMMANDS[args.command]
    left, right = corpus.argument(args.left), corpus.argument(args.right)
    if args.range:
        lo, hi = args.range
    else:
        lo, hi = cfg.probe_range
        if functor in MODULE_DEGREES and isinstance(left, FinModule):
            lo = max(lo, 0)
    request = FunctorRequest(functor, left, right, tuple(range(lo, hi + 1)))
    values = functors.evaluate(request)
    _print_values(args.command, values, args.json, {"functor": functor, "left": args.left, "right": args.right})
    return EXIT_OK


def cmd_gdim(cfg: SuiteSettings, args: Namespace, functors: HomologyFunctors, corpus: Corpus) -> int:
    X = corpus.argument(args.object)
    if args.bound:
        report = theorem_b_bound(X, functors, args.flavor)
        for row in report.table:
            print(f"  degree {row.degree}: {args.flavor} = {row.dimension} ({row.method})")
        print(report.describe())
        _write_json(args.json, json.loads(report.json()))
        return EXIT_OK if report.holds else EXIT_FAILURE
    value = dimension(X, functors, args.flavor)
    print(f"{value.describe()} ({value.method})")
    _write_json(args.json, json.loads(value.json()))
    return EXIT_OK


def cmd_check(cfg: SuiteSettings, args: Namespace) -> int:
    _corpus(cfg)
    inputs = select_checks(args.selection)
    if args.range:
        inputs = [c.copy(update={"probe_range": args.range}) for c in inputs]
    check_settings = cfg.check_settings()
    if cfg.save_reports:
        cfg.dump_yaml(cfg.ensure_run_dir() / "params.yaml")
    suite = run_suite(inputs, check_settings, cfg.parsl_config(), cfg.done_callbacks())
    print(suite.table())
    if args.json:
        suite.dump_json(args.json)
    return EXIT_OK if suite.passed else EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _settings(args)
    except (ValidationError, OSError) as exc:
        print(f"error: invalid settings: {exc}", file=sys.stderr)
        return EXIT_INPUT
    cfg.configure_logging()
    try:
        if args.command == "load":
            return cmd_load(cfg, args)
        if args.command == "check":
            return cmd_check(cfg, args)
        corpus = _corpus(cfg)
        functors = HomologyFunctors.from_settings(cfg, corpus.resolutions.values())
        handler = {
            "resolve": cmd_resolve,
            "tensor": cmd_tensor,
            "gdim": cmd_gdim,
        }.get(args.command, cmd_functor)
        return handler(cfg, args, functors, corpus)
    except (InputError, DegreeError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GorhomError as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
