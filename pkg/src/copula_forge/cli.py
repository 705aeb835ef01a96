"""``copula-forge`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
Errors are reported on stderr as a single JSON object.
"""

from __future__ import annotations

import argparse
import io as _io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import analytic as an
from .core import DiscreteCopula, check_k, check_point
from .errors import CapacityError, CopulaForgeError, DomainError
from .extension import surface_lattice
from .io import (
    copula_from_csv,
    copula_from_json,
    copula_to_csv,
    copula_to_json,
    dumps,
    law_to_csv,
    law_to_json,
    pairs_to_csv,
    pairs_to_json,
)
from .oracle import default_threads
from .rational import format_float, format_rational, parse_rational
from .rng import SeededRng
from .sampling import (
    MAX_Y_GRID_K,
    sample_pairs,
    sample_X,
    sample_Y_grid,
    sample_Y_point_values,
)
from .verify import SUITES, all_passed, run_suite, summarize

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _unit(x: Fraction, name: str) -> Fraction:
    if not 0 <= x <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {format_rational(x)}")
    return x


# commands


def cmd_pmf(args) -> int:
    k = check_k(args.k)
    if args.hat:
        if args.u is None or args.v is None:
            raise UsageError("pmf --hat needs --u and --v")
        law = an.pmf_Xhat(k, _unit(args.u, "u"), _unit(args.v, "v"))
    else:
        if args.point is None:
            raise UsageError("pmf needs --point I J (or --hat --u U --v V)")
        law = an.pmf_X(k, tuple(args.point))
    text = law_to_csv(law) if args.format == "csv" else dumps(law_to_json(law))
    _emit(text, args.out)
    return EXIT_OK


def _grid_text(c: DiscreteCopula, fmt: str) -> str:
    return copula_to_csv(c) if fmt == "csv" else dumps(copula_to_json(c))


def _load_grid(path: str) -> DiscreteCopula:
    text = Path(path).read_text()
    if text.lstrip().startswith("#"):
        return copula_from_csv(text)
    return copula_from_json(text)


def _sample_grids(args, draw) -> int:
    rng = SeededRng(args.seed)
    grids = [draw(rng, args.k) for _ in range(args.samples)]
    ext = args.format
    if args.out is None:
        if ext == "csv":
            _emit("".join(_grid_text(g, "csv") for g in grids), None)
        else:
            _emit(dumps([copula_to_json(g) for g in grids]), None)
        return EXIT_OK
    folder = Path(args.out)
    folder.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(args.samples - 1)))
    for n, g in enumerate(grids):
        (folder / f"{args.what}_{n:0{width}d}.{ext}").write_text(_grid_text(g, ext))
    return EXIT_OK


def _sample_y_point(args) -> int:
    point = check_point(args.k, *args.point)
    values = sample_Y_point_values(SeededRng(args.seed), args.k, point, args.samples)
    if args.format == "csv":
        text = "value\n" + "".join(format_float(x) + "\n" for x in values)
    else:
        text = dumps({"k": args.k, "point": list(point), "values": [float(x) for x in values]})
    _emit(text, args.out)
    return EXIT_OK


def _pairs_source(args, rng: SeededRng) -> DiscreteCopula:
    if args.grid is not None:
        return _load_grid(args.grid)
    if args.source == "y":
        return sample_Y_grid(rng.split(1), args.k)
    return sample_X(rng.split(1), args.k)


def cmd_sample(args) -> int:
    k = check_k(args.k)
    if args.what == "x":
        return _sample_grids(args, sample_X)
    if args.what == "y":
        if args.point is not None:
            return _sample_y_point(args)
        if k > MAX_Y_GRID_K:
            raise CapacityError(
                f"full-grid y sampling supports k <= {MAX_Y_GRID_K}; use --point I J for k={k}"
            )
        return _sample_grids(args, sample_Y_grid)
    rng = SeededRng(args.seed)
    c = _pairs_source(args, rng)
    pairs = sample_pairs(rng.split(2), c, args.samples)
    text = pairs_to_csv(pairs) if args.format == "csv" else dumps(pairs_to_json(pairs))
    _emit(text, args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    k = check_k(args.k)
    u, v = _unit(args.u, "u"), _unit(args.v, "v")
    if args.hat:
        mean = an.mean_Yhat(k, u, v) if args.y else an.mean_Xhat(k, u, v)
        var = an.var_Yhat(k, u, v) if args.y else an.var_Xhat(k, u, v)
    else:
        mean = an.mean_Y(k, u, v) if args.y else an.mean_X(k, u, v)
        var = an.var_Y(k, u, v) if args.y else an.var_X(k, u, v)
    field = ("Y" if args.y else "X") + ("hat" if args.hat else "")
    record = {
        "field": field,
        "k": k,
        "u": format_rational(u),
        "v": format_rational(v),
        "mean": format_rational(mean),
        "variance": format_rational(var),
        "mean_float": float(mean),
        "variance_float": float(var),
    }
    if args.format == "csv":
        keys = list(record)
        text = ",".join(keys) + "\n" + ",".join(str(record[x]) for x in keys) + "\n"
    else:
        text = dumps(record)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    threads = args.threads if args.threads is not None else default_threads()
    records = run_suite(
        args.k, args.suite, seed=args.seed, samples=args.samples, force=args.force, threads=threads
    )
    passed = all_passed(records)
    report = {
        "k": args.k,
        "suite": args.suite,
        "seed": args.seed,
        "samples": args.samples if args.suite == "mc" else None,
        "passed": passed,
        "summary": summarize(records),
        "records": records,
    }
    _emit(dumps(report), args.out)
    if not passed:
        sys.stderr.write(json.dumps({"error": "VerificationFailed", "message": report["summary"]}) + "\n")
    return EXIT_OK if passed else EXIT_FAILED


def cmd_heatmap(args) -> int:
    k = check_k(args.k)
    if args.grid < 2:
        raise DomainError("--grid must be >= 2")
    rng = SeededRng(args.seed)
    c = sample_Y_grid(rng, k) if args.y else sample_X(rng, k)
    u, v, value = surface_lattice(c, args.grid)
    var = an.variance_surface(k, args.grid, y=args.y).ravel()
    buf = _io.StringIO()
    buf.write("u,v,value,variance\n")
    for row in zip(u, v, value, var):
        buf.write(",".join(format_float(x) for x in row) + "\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="copula-forge", description="Random discrete copulas on equidistant meshes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--k", type=int, required=True, help="mesh size (k >= 2)")
        sp.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("pmf", help="exact law of X_k at a mesh point or of its extension")
    common(sp)
    sp.add_argument("--point", type=int, nargs=2, metavar=("I", "J"))
    sp.add_argument("--hat", action="store_true", help="checkerboard extension at (u, v)")
    sp.add_argument("--u", type=_rational)
    sp.add_argument("--v", type=_rational)
    sp.set_defaults(func=cmd_pmf)

    sp = sub.add_parser("sample", help="draw grids, point values or data pairs")
    sp.add_argument("what", choices=("x", "y", "pairs"))
    common(sp)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--samples", type=_positive, default=1)
    sp.add_argument("--point", type=int, nargs=2, metavar=("I", "J"), help="y only: sample one mesh point")
    sp.add_argument("--source", choices=("x", "y"), default="x", help="pairs: which random copula to draw from")
    sp.add_argument("--grid", help="pairs: read the copula from a grid file instead")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("moments", help="analytic mean and variance")
    common(sp)
    sp.add_argument("--u", type=_rational, required=True)
    sp.add_argument("--v", type=_rational, required=True)
    sp.add_argument("--hat", action="store_true")
    sp.add_argument("--y", action="store_true")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("verify", help="compare closed forms against the oracles")
    common(sp, fmt=False)
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--samples", type=_positive, default=1_000_000)
    sp.add_argument("--force", action="store_true", help="allow k=9 enumeration")
    sp.add_argument("--threads", type=_positive)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("heatmap", help="lattice of a realized surface plus the variance surface")
    common(sp, fmt=False)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--grid", type=int, default=101, help="lattice size n")
    sp.add_argument("--y", action="store_true", help="use a Y_k realization")
    sp.set_defaults(func=cmd_heatmap)
    return p


def _fail(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("UsageError", str(exc))
    except (CopulaForgeError, ValueError, OSError) as exc:
        return _fail(type(exc).__name__, str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
