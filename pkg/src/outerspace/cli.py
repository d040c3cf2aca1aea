"""Command-line entry point.

Exit status: 0 when every check passed, 1 for usage or input errors, 2 when
an experiment or assertion failed.  ``OUTERSPACE_OUT_DIR`` relocates
relative ``--out`` paths.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .automorphisms import Automorphism, AutomorphismError, orbit_ball, whitehead_generators
from .candidates import RigidityViolation, candidates_csv, distortion, theorem_c_witness
from .currents import iterate_iwip
from .experiments import (
    ExperimentConfig,
    f2_commutator_demo,
    s0_probe,
    tao_primitive_scan,
)
from .graphs import GraphError, load_graph, translation_length, validate
from .words import WordError, format_word, parse_word, word_key

OUT_DIR_ENV = "OUTERSPACE_OUT_DIR"

USAGE_ERROR = 1
FAILURE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--seed", type=int, default=d(7))
    parser.add_argument("--rank", type=int, default=d(2))
    parser.add_argument("--depth", type=int, default=d(3))
    parser.add_argument("--max-length", type=int, default=d(8))
    parser.add_argument("--out", default=d(None))
    parser.add_argument("--format", choices=("csv", "json"), default=d("json"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="outerspace", description="Exact computations in Culler-Vogtmann outer space.")
    _global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check a graph file")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("length", parents=[common], help="translation length of a word")
    p.add_argument("--graph", required=True)
    p.add_argument("--word", required=True)

    p = sub.add_parser("distortion", parents=[common], help="extremal Lipschitz distortion")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)

    p = sub.add_parser("candidates", parents=[common], help="list almost simple curves")
    p.add_argument("--graph", required=True)
    p.add_argument("--graph2")

    p = sub.add_parser("rigidity-check", parents=[common], help="candidate witness for two graphs")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)

    p = sub.add_parser("orbit", parents=[common], help="orbit ball of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--automorphism", action="append", help="generator images, e.g. 'ab a'; repeatable")

    p = sub.add_parser("iwip-iterate", parents=[common], help="iterate an automorphism on a counting current")
    p.add_argument("--automorphism", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("tao-demo", parents=[common], help="primitive lengths on the boundary family")

    p = sub.add_parser("f2-demo", parents=[common], help="commutator orbit on two rank-2 roses")

    p = sub.add_parser("s0-probe", parents=[common], help="sample pairs against the five-element set")
    p.add_argument("--trials", type=int, default=200)
    return parser


def _emit(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
        return
    path = Path(args.out)
    override = os.environ.get(OUT_DIR_ENV)
    if override and not path.is_absolute():
        path = Path(override) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _report_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _graph(path: str):
    try:
        return load_graph(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from exc


def _checked_graph(path: str):
    g = _graph(path)
    diags = validate(g)
    if diags:
        raise UsageError(f"invalid graph {path}: " + "; ".join(diags))
    return g


def run(args) -> int:
    cmd = args.command
    if cmd == "validate":
        diags = validate(_graph(args.graph))
        if args.format == "csv":
            _emit(args, _report_csv([{"diagnostic": d} for d in diags]) if diags else "")
        else:
            _emit(args, _dump({"ok": not diags, "diagnostics": diags}))
        return 0 if not diags else FAILURE

    if cmd == "length":
        g = _checked_graph(args.graph)
        _emit(args, f"{translation_length(g, parse_word(args.word))}\n")
        return 0

    if cmd == "distortion":
        d = distortion(_checked_graph(args.graph1), _checked_graph(args.graph2))
        _emit(args, f"{d}\n")
        return 0

    if cmd == "candidates":
        T = _checked_graph(args.graph)
        T2 = _checked_graph(args.graph2) if args.graph2 else None
        _emit(args, candidates_csv(T, T2))
        return 0

    if cmd == "rigidity-check":
        T, T2 = _checked_graph(args.graph1), _checked_graph(args.graph2)
        try:
            w = theorem_c_witness(T, T2)
        except RigidityViolation as exc:
            _emit(args, _dump({"verdict": "violation", "detail": str(exc)}))
            return FAILURE
        if w is None:
            _emit(args, _dump({"verdict": "equal"}))
        else:
            _emit(args, _dump({
                "verdict": "witness",
                "kind": w.kind,
                "word": format_word(w.word),
                "length_in_T": str(w.length_in_T),
                "length_in_Tprime": str(translation_length(T2, w.word)),
            }))
        return 0

    if cmd == "orbit":
        g = parse_word(args.word)
        if args.automorphism:
            gens = [Automorphism.parse(a) for a in args.automorphism]
        else:
            gens = list(whitehead_generators(args.rank))
        ball = sorted(orbit_ball(gens, g, args.radius), key=lambda w: (len(w), word_key(w)))
        words = [format_word(w) for w in ball]
        if args.format == "csv":
            _emit(args, _report_csv([{"class": w} for w in words]))
        else:
            _emit(args, _dump({"word": args.word, "radius": args.radius, "classes": words}))
        return 0

    if cmd == "iwip-iterate":
        phi = Automorphism.parse(args.automorphism)
        rep = iterate_iwip(phi, parse_word(args.word), args.steps, args.depth, tolerance=args.tolerance)
        if args.format == "csv":
            _emit(args, rep.coords[-1].to_csv())
        else:
            _emit(args, rep.to_json())
        return 0

    if cmd == "tao-demo":
        rep = tao_primitive_scan(args.max_length)
        _emit(args, _dump(rep.to_dict()))
        return 0 if rep.ok else FAILURE

    if cmd == "f2-demo":
        rep = f2_commutator_demo()
        _emit(args, _dump(rep.to_dict()))
        return 0 if rep.ok else FAILURE

    if cmd == "s0-probe":
        config = ExperimentConfig(seed=args.seed, rank=args.rank, trial_count=args.trials)
        rep = s0_probe(config)
        _emit(args, _dump(rep.to_dict()))
        return 0 if rep.ok else FAILURE

    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (UsageError, WordError, AutomorphismError, GraphError, ValueError) as exc:
        print(f"outerspace: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
