"""The ``distembed`` command line interface.

Scalars go to stdout with 15 significant digits; experiments write a CSV
(plus a PNG figure unless ``--no-figure``) and print a JSON verdict.

Exit codes: 0 success / experiment pass, 1 experiment fail,
2 usage or schema violation, 3 numerical / computation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .embedding import distance, embed_eval, norm
from .errors import DistembedError, SchemaError
from .experiments import EXPERIMENTS, run_experiment
from .schemas import kernel_from_json, loads, measure_from_json

__all__ = ["main", "build_parser"]


def _read_spec(value: str, what: str):
    text = value
    if not value.lstrip().startswith("{"):
        try:
            with open(value, "r") as handle:
                text = handle.read()
        except OSError as exc:
            raise SchemaError(f"{what}: cannot read file {value!r} ({exc})") from exc
    return loads(text, what)


def _fmt_scalar(value) -> str:
    if isinstance(value, complex):
        return f"{value.real:.15g} {value.imag:.15g}"
    return f"{float(value):.15g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distembed",
        description="Embed atomic generalized measures into RKHSs and run the bundled experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kernel_measure(p, measures=1):
        p.add_argument("--kernel", required=True, help="kernel spec: inline JSON or a file path")
        p.add_argument(
            "--measure",
            action="append",
            required=True,
            help="measure spec: inline JSON or a file path"
            + (" (repeat for the second measure)" if measures == 2 else ""),
        )

    p_norm = sub.add_parser("norm", help="RKHS norm of an embedded measure")
    add_kernel_measure(p_norm)

    p_dist = sub.add_parser("distance", help="embedding distance between two measures")
    add_kernel_measure(p_dist, measures=2)

    p_eval = sub.add_parser("embed-eval", help="evaluate the embedded function at a point")
    add_kernel_measure(p_eval)
    p_eval.add_argument("--point", required=True, help="evaluation point: JSON number or array")

    p_exp = sub.add_parser("experiment", help="run a bundled experiment")
    p_exp.add_argument("name", choices=sorted(EXPERIMENTS))
    p_exp.add_argument("--out", required=True, help="CSV output path")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--tol", type=float, default=None, help="override the pass tolerance")
    p_exp.add_argument("--no-figure", action="store_true", help="skip the PNG next to the CSV")
    p_exp.add_argument("--n-max", type=int, default=None, help="nonmetrization / narrow-metrization range")
    p_exp.add_argument("--sigma", type=float, default=None, help="Gaussian width where applicable")
    p_exp.add_argument("--period", type=float, default=None, help="periodic-null cell length")
    p_exp.add_argument("--nodes", type=int, default=None, help="periodic-null / sinc-null node count")
    p_exp.add_argument("--truncation", type=float, default=None, help="sinc-null domain half-length")
    p_exp.add_argument("--modulation", type=float, default=None, help="sinc-null carrier frequency")
    p_exp.add_argument("--configs", type=int, default=None, help="brownian-cpd probe count")
    p_exp.add_argument("--samples", type=int, default=None, help="gram-vs-spectral samples per kernel")
    return parser


_EXPERIMENT_FLAGS = {
    "nonmetrization": ("n_max", "sigma"),
    "narrow-metrization": ("n_max", "sigma"),
    "periodic-null": ("period", "nodes"),
    "sinc-null": ("truncation", "nodes", "modulation"),
    "brownian-cpd": ("configs",),
    "gram-vs-spectral": ("samples",),
}


def _run_scalar(args) -> int:
    measures = [measure_from_json(_read_spec(m, "measure")) for m in args.measure]
    dim = measures[0].dimension
    kernel = kernel_from_json(_read_spec(args.kernel, "kernel"), dim)
    if args.command == "norm":
        if len(measures) != 1:
            raise SchemaError("norm takes exactly one --measure")
        print(_fmt_scalar(norm(kernel, measures[0])))
    elif args.command == "distance":
        if len(measures) != 2:
            raise SchemaError("distance takes exactly two --measure arguments")
        print(_fmt_scalar(distance(kernel, measures[0], measures[1])))
    else:  # embed-eval
        if len(measures) != 1:
            raise SchemaError("embed-eval takes exactly one --measure")
        point = loads(args.point, "point")
        if isinstance(point, (int, float)):
            point = [float(point)]
        if not (isinstance(point, list) and len(point) == dim):
            raise SchemaError(f"point: expected {dim} coordinates")
        print(_fmt_scalar(embed_eval(kernel, measures[0], point)))
    return 0


def _run_experiment(args) -> int:
    kwargs = {"seed": args.seed, "tol": args.tol}
    for flag in _EXPERIMENT_FLAGS[args.name]:
        value = getattr(args, flag)
        if value is not None:
            kwargs[flag] = value
    report = run_experiment(args.name, **kwargs)
    report.to_csv(args.out)
    figure_path = None
    if not args.no_figure:
        from .figures import render_report

        figure_path = os.path.splitext(args.out)[0] + ".png"
        render_report(report, figure_path)
    verdict = report.verdict_json()
    verdict["csv"] = args.out
    verdict["figure"] = figure_path
    print(json.dumps(verdict, sort_keys=True))
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "experiment":
            return _run_experiment(args)
        return _run_scalar(args)
    except SchemaError as exc:
        print(f"distembed: schema error: {exc}", file=sys.stderr)
        return 2
    except DistembedError as exc:
        print(f"distembed: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
