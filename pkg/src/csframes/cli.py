"""Command-line front end.

Exit codes:

    0  success (frame / similar / file written)
    1  input error: unreadable or malformed file, bad arguments
    2  not a frame
    3  frames are not right-similar
    4  shape or compatibility mismatch between inputs
    5  numerical failure (non-invertible or non-positive operator, failed self-check)
    6  any other library error
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algebra import AlgebraSpec, Tolerance, block_ranks
from .composition import compose, generate_example_frame
from .equivalence import detect_right_similarity
from .errors import (
    CSFramesError,
    DimensionMismatch,
    IncompatibleRanges,
    NotAFrame,
    NotInvertible,
    NotPositive,
    NotSimilar,
    RangeMismatch,
    SpecMismatch,
    VerificationError,
)
from .fileformat import FileFormatError, FrameFile, canonical_json, dumps, encode_operator, load
from .frames import (
    OperatorFrame,
    VectorFrame,
    analyze,
    is_nondegenerate,
    is_parseval,
    normalize_vector_frame,
    parseval_normalize,
    vector_to_operator_frame,
)
from .hilbert_module import ModuleVector

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_A_FRAME = 2
EXIT_NOT_SIMILAR = 3
EXIT_SHAPE = 4
EXIT_NUMERIC = 5
EXIT_OTHER = 6

TOL_ENV = "CSFRAMES_TOL"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's own exit code 2 would collide with "not a frame"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _rounded(x: float) -> float:
    return float(_fmt(x))


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _tolerance(args) -> Tolerance:
    if args.tol is not None:
        rel = args.tol
    else:
        raw = os.environ.get(TOL_ENV)
        try:
            rel = 1e-9 if raw is None else float(raw)
        except ValueError:
            raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not rel >= 0:
        raise UsageError("tolerance must be nonnegative")
    return Tolerance(rel=rel)


def _as_operator_frame(frame) -> OperatorFrame:
    """Vector frames are analyzed through ``A_j = theta_{e_1, xi_j}``."""
    if isinstance(frame, VectorFrame):
        eta = ModuleVector.basis(frame.spec, frame.rank, 0)
        return vector_to_operator_frame(frame, eta)
    return frame


def _load(path):
    ff = load(path)
    return ff, ff.to_frame()


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands ------------------------------------------------------------------


def cmd_analyze(args) -> int:
    tol = _tolerance(args)
    ff, frame = _load(args.path)
    op = _as_operator_frame(frame)
    header = {
        "kind": ff.kind,
        "blocks": list(ff.algebra),
        "rank": ff.ambient_rank,
        "count": len(ff.elements),
    }
    try:
        an = analyze(op, tol)
    except NotAFrame as exc:
        report = {"verdict": "NOT_A_FRAME", **header, "smallest_eigenvalue": _rounded(exc.smallest_eigenvalue)}
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            print(f"NOT_A_FRAME kind={ff.kind} blocks={header['blocks']} rank={ff.ambient_rank} "
                  f"count={header['count']}")
            print(f"smallest_eigenvalue={_fmt(exc.smallest_eigenvalue)}")
        return EXIT_NOT_A_FRAME
    report = {
        "verdict": "FRAME",
        **header,
        "a": _rounded(an.lower_bound),
        "b": _rounded(an.upper_bound),
        "tight": an.is_tight(tol),
        "parseval": is_parseval(op, tol),
        "nondegenerate": is_nondegenerate(op, tol),
        "frame_projection_ranks": list(block_ranks(an.projection, tol)),
    }
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"FRAME kind={ff.kind} blocks={header['blocks']} rank={ff.ambient_rank} count={header['count']}")
        print(f"a={_fmt(an.lower_bound)} b={_fmt(an.upper_bound)} tight={_bool(report['tight'])} "
              f"parseval={_bool(report['parseval'])}")
        print(f"nondegenerate={_bool(report['nondegenerate'])} "
              f"frame_projection_ranks={report['frame_projection_ranks']}")
    return EXIT_OK


def cmd_similar(args) -> int:
    tol = _tolerance(args)
    _, fa = _load(args.path_a)
    _, fb = _load(args.path_b)
    try:
        w = detect_right_similarity(_as_operator_frame(fa), _as_operator_frame(fb), tol)
    except NotSimilar as exc:
        if args.json:
            print(json.dumps({"verdict": "NOT_SIMILAR", "projection_gap": exc.projection_gap}, sort_keys=True))
        else:
            print(f"NOT_SIMILAR projection_gap={_fmt(exc.projection_gap)}")
        return EXIT_NOT_SIMILAR
    witness = encode_operator(w.operator)
    if args.json:
        print(json.dumps({"verdict": "SIMILAR", "kind": w.kind, "residual": w.residual,
                          "projection_gap": w.projection_gap, "witness": witness}, sort_keys=True))
    else:
        print(f"SIMILAR kind={w.kind} residual={_fmt(w.residual)} projection_gap={_fmt(w.projection_gap)}")
        print("T=" + canonical_json(witness), end="")
    return EXIT_OK


def cmd_parseval(args) -> int:
    tol = _tolerance(args)
    ff, frame = _load(args.path)
    if isinstance(frame, VectorFrame):
        out = normalize_vector_frame(frame, tol)
    else:
        out = parseval_normalize(frame, tol)
    meta = dict(ff.metadata, operation="parseval")
    _emit(dumps(FrameFile.from_frame(out, meta)), args.out)
    return EXIT_OK


def cmd_compose(args) -> int:
    tol = _tolerance(args)
    ff_b, fb = _load(args.path_b)
    ff_a, fa = _load(args.path_a)
    c = compose(_as_operator_frame(fb), _as_operator_frame(fa), tol)
    meta = {"operation": "compose", "outer": ff_b.metadata, "inner": ff_a.metadata}
    _emit(dumps(FrameFile.from_frame(c.frame, meta)), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    tol = _tolerance(args)
    try:
        blocks = tuple(int(b) for b in args.blocks.split(","))
        spec = AlgebraSpec(blocks)
    except ValueError as exc:
        raise UsageError(f"bad --blocks {args.blocks!r}: {exc}") from None
    if args.rank < 1 or args.count < 1:
        raise UsageError("--rank and --count must be positive")
    frame = generate_example_frame(spec, args.rank, args.count, seed=args.seed,
                                   isometry=args.isometry, tol=tol)
    meta = {"generator": "example", "seed": args.seed, "isometry": bool(args.isometry)}
    _emit(dumps(FrameFile.from_frame(frame, meta)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csframes", description="Operator-valued frames on Hilbert C*-modules.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tol_arg(p):
        p.add_argument("--tol", type=float, default=None,
                       help=f"relative tolerance (default ${TOL_ENV} or 1e-9)")

    p = sub.add_parser("analyze", help="frame bounds, Parseval/tight verdicts, frame projection ranks")
    p.add_argument("path")
    tol_arg(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("similar", help="decide right similarity of two frames")
    p.add_argument("path_a")
    p.add_argument("path_b")
    tol_arg(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("parseval", help="write the Parseval normalization of a frame")
    p.add_argument("path")
    p.add_argument("--out")
    tol_arg(p)
    p.set_defaults(func=cmd_parseval)

    p = sub.add_parser("compose", help="write the composition B A (outer frame first)")
    p.add_argument("path_b")
    p.add_argument("path_a")
    p.add_argument("--out")
    tol_arg(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("generate", help="write a random frame A_j = L_j^* T")
    p.add_argument("--blocks", required=True, help="comma-separated block sizes, e.g. 2,3")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--isometry", action="store_true", help="orthonormalize T (Parseval output)")
    p.add_argument("--out")
    tol_arg(p)
    p.set_defaults(func=cmd_generate)
    return parser


def _error(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileFormatError, UsageError) as exc:
        return _error(EXIT_INPUT, str(exc))
    except OSError as exc:
        return _error(EXIT_INPUT, f"{exc.strerror or exc}: {exc.filename}")
    except NotAFrame as exc:
        return _error(EXIT_NOT_A_FRAME, str(exc))
    except (SpecMismatch, DimensionMismatch, IncompatibleRanges, RangeMismatch) as exc:
        return _error(EXIT_SHAPE, str(exc))
    except (NotInvertible, NotPositive, VerificationError) as exc:
        return _error(EXIT_NUMERIC, str(exc))
    except CSFramesError as exc:
        return _error(EXIT_OTHER, str(exc))


if __name__ == "__main__":
    sys.exit(main())
