"""Command-line frontend: ingestion -> computation -> CSV/SVG artifacts.

Exit codes: 0 success, 2 usage/config/parse errors, 3 resource guard.
All outputs are deterministic for identical flags and input files.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .errors import DtmfiltError, SizeGuardError
from .filtration import build_weighted_rips, write_complex
from .metrics import THEOREMS, certify
from .numerics import INF
from .persistence import load_diagram_csv, reduce, write_diagram_csv
from .pointcloud import DiscreteMeasure, delay_embedding, hausdorff, load_points, save_points, synth
from .dtm import dtm_values
from .metrics import bottleneck as bottleneck_distance
from .metrics import wasserstein2
from .render import write_diagram_svg


def _parse_m(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        value = float(Fraction(int(num), int(den)))
    else:
        value = float(text)
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError(f"m must lie in (0, 1), got {text!r}")
    return value


def _parse_p(text: str) -> float:
    if text.strip().lower() == "inf":
        return INF
    value = float(text)
    if value < 1.0:
        raise argparse.ArgumentTypeError(f"p must be >= 1 or 'inf', got {text!r}")
    return value


def _parse_dims(text: str):
    try:
        dims = tuple(sorted(set(int(tok) for tok in text.split(","))))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}")
    if not dims or dims[0] < 0:
        raise argparse.ArgumentTypeError("dims must be nonnegative")
    return dims


def _load_measure(path, weighted: bool) -> DiscreteMeasure:
    loaded = load_points(path, weighted=weighted)
    if isinstance(loaded, DiscreteMeasure):
        return loaded
    return DiscreteMeasure.uniform(loaded)


def _write_values(path, values) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in values:
            fh.write(format(v, ".17g") + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmfilt",
        description="Distance-to-measure weighted filtrations, persistence "
        "diagrams, and stability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dtm = sub.add_parser("dtm", help="evaluate the distance to measure")
    p_dtm.add_argument("--input", required=True)
    p_dtm.add_argument("--weighted", action="store_true", help="last input column is a mass")
    p_dtm.add_argument("--m", required=True, type=_parse_m)
    p_dtm.add_argument("--queries", help="query points CSV (defaults to the input points)")
    p_dtm.add_argument("--output", required=True)

    p_pipe = sub.add_parser("pipeline", help="DTM filtration -> persistence diagram")
    p_pipe.add_argument("--input", required=True)
    p_pipe.add_argument("--weighted", action="store_true")
    p_pipe.add_argument("--m", required=True, type=_parse_m)
    p_pipe.add_argument("--p", default="1", type=_parse_p)
    p_pipe.add_argument("--max-dim", default=1, type=int)
    p_pipe.add_argument("--t-max", default=None, type=float)
    p_pipe.add_argument("--diagram-out", required=True)
    p_pipe.add_argument("--complex-out", default=None)

    p_stab = sub.add_parser("stability", help="stability-bound certification")
    p_stab.add_argument("--theorem", required=True, choices=THEOREMS)
    p_stab.add_argument("--x", required=True, help="X cloud (T4.6/T4.13) or mu measure (P4.4/P4.8-bound)")
    p_stab.add_argument("--gamma", help="subset cloud Gamma")
    p_stab.add_argument("--omega", help="subset cloud Omega (defaults to Gamma)")
    p_stab.add_argument("--y", help="Y cloud (T4.6/T4.13 three-set, P4.4 nu, P4.8-bound cloud)")
    p_stab.add_argument("--weighted-x", action="store_true")
    p_stab.add_argument("--weighted-y", action="store_true")
    p_stab.add_argument("--m", required=True, type=_parse_m)
    p_stab.add_argument("--p", default="1", type=_parse_p)
    p_stab.add_argument("--dims", default="0", type=_parse_dims)
    p_stab.add_argument("--max-dim", default=None, type=int)
    p_stab.add_argument("--t-max", default=None, type=float)
    p_stab.add_argument("--report-out", required=True)

    p_render = sub.add_parser("render", help="diagram CSV -> SVG scatter")
    p_render.add_argument("--diagram", required=True)
    p_render.add_argument("--output", required=True)

    p_bn = sub.add_parser("bottleneck", help="bottleneck distance between diagram CSVs")
    p_bn.add_argument("--a", required=True)
    p_bn.add_argument("--b", required=True)
    p_bn.add_argument("--dim", required=True, type=int)

    p_w2 = sub.add_parser("w2", help="quadratic Wasserstein distance between measures")
    p_w2.add_argument("--a", required=True)
    p_w2.add_argument("--b", required=True)
    p_w2.add_argument("--weighted-a", action="store_true")
    p_w2.add_argument("--weighted-b", action="store_true")

    p_h = sub.add_parser("hausdorff", help="Hausdorff distance between point clouds")
    p_h.add_argument("--a", required=True)
    p_h.add_argument("--b", required=True)

    p_embed = sub.add_parser("embed", help="delay-embed a scalar series (one sample per line)")
    p_embed.add_argument("--input", required=True)
    p_embed.add_argument("--dim", required=True, type=int)
    p_embed.add_argument("--stride", default=1, type=int)
    p_embed.add_argument("--output", required=True)

    p_synth = sub.add_parser("synth", help="seeded synthetic point clouds")
    p_synth.add_argument("--kind", required=True, choices=["circle", "square", "circle-with-outliers"])
    p_synth.add_argument("--n", required=True, type=int)
    p_synth.add_argument("--outliers", default=0, type=int)
    p_synth.add_argument("--seed", default=0, type=int)
    p_synth.add_argument("--output", required=True)
    return parser


def _run(args) -> int:
    if args.command == "dtm":
        mu = _load_measure(args.input, args.weighted)
        queries = load_points(args.queries).points if args.queries else mu.support.points
        _write_values(args.output, dtm_values(mu, queries, args.m))
        return 0

    if args.command == "pipeline":
        mu = _load_measure(args.input, args.weighted)
        weights = dtm_values(mu, mu.support.points, args.m)
        K = build_weighted_rips(mu.support, weights, args.p, max_dim=max(args.max_dim, 1), t_max=args.t_max)
        if args.complex_out:
            write_complex(args.complex_out, K)
        dims = tuple(range(max(args.max_dim, 1)))
        write_diagram_csv(args.diagram_out, reduce(K, homology_dims=dims))
        return 0

    if args.command == "stability":
        kwargs = dict(m=args.m, p=args.p, dims=args.dims, t_max=args.t_max)
        kwargs["max_dim"] = args.max_dim if args.max_dim is not None else max(args.dims) + 1
        if args.theorem in ("T4.6", "T4.13"):
            if args.gamma is None:
                raise DtmfiltError("--gamma is required for this theorem")
            kwargs.update(
                x=load_points(args.x),
                gamma=load_points(args.gamma),
                omega=load_points(args.omega) if args.omega else None,
                y=load_points(args.y) if args.y else None,
            )
        elif args.theorem == "P4.4":
            if args.y is None:
                raise DtmfiltError("P4.4 needs --x and --y measures")
            kwargs.update(
                mu=_load_measure(args.x, args.weighted_x),
                nu=_load_measure(args.y, args.weighted_y),
            )
        else:  # P4.8-bound
            if args.y is None:
                raise DtmfiltError("P4.8-bound needs --x (measure) and --y (cloud)")
            kwargs.update(mu=_load_measure(args.x, args.weighted_x), y=None, x=load_points(args.y))
        report = certify(args.theorem, **kwargs)
        with open(args.report_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json() + "\n")
        return 0

    if args.command == "render":
        write_diagram_svg(args.output, load_diagram_csv(args.diagram))
        return 0

    if args.command == "bottleneck":
        value = bottleneck_distance(load_diagram_csv(args.a), load_diagram_csv(args.b), args.dim)
        print("inf" if math.isinf(value) else format(value, ".17g"))
        return 0

    if args.command == "w2":
        value = wasserstein2(
            _load_measure(args.a, args.weighted_a), _load_measure(args.b, args.weighted_b)
        )
        print(format(value, ".17g"))
        return 0

    if args.command == "hausdorff":
        print(format(hausdorff(load_points(args.a), load_points(args.b)), ".17g"))
        return 0

    if args.command == "embed":
        with open(args.input, "r", encoding="utf-8") as fh:
            samples = [float(line) for line in fh if line.strip()]
        save_points(args.output, delay_embedding(samples, args.dim, args.stride))
        return 0

    if args.command == "synth":
        save_points(args.output, synth(args.kind, args.n, args.outliers, args.seed))
        return 0

    raise DtmfiltError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DtmfiltError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
