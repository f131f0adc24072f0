"""Command-line interface.

Exit codes: 0 success, 2 bad input (arguments, data file, config),
3 the model violates its assumptions.
"""

import argparse
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
import hashlib
import json
import math
from pathlib import Path
import sys

from . import __version__
from .concentration import aggregate
from .estimator import confidence
from .exceptions import AssumptionViolation, MetrociError
from .experiment import ExperimentConfig, exact_coverage, monte_carlo, records_to_csv
from .model import ParameterInterval, validate_assumptions
from .ramsey import PUBLISHED_PHI, VARIANTS, ramsey_model

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MODEL = 3


class InputError(Exception):
    """Malformed user input (exit code 2)."""


@dataclass
class RunManifest:
    command: str
    config: dict
    tool_version: str = __version__
    master_seed: object = None
    started: str = ""
    finished: str = ""
    outputs: dict = field(default_factory=dict)


def _now():
    return datetime.now(timezone.utc).isoformat()


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_outcomes(path):
    """Parse a data file: one decimal outcome per line, ``#`` comments and blank lines skipped."""
    values = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read data file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            v = float(s)
        except ValueError:
            raise InputError(f"{path}:{lineno}: cannot parse {s!r} as a number") from None
        if not math.isfinite(v):
            raise InputError(f"{path}:{lineno}: outcome {s!r} is not finite")
        values.append(v)
    return values


def _model_from_args(args, strict=True):
    interval = ParameterInterval(args.phi_min, args.phi_max)
    return ramsey_model(args.model, args.atoms, interval, args.phi0, strict=strict)


def _model_spec(args):
    return {"model": args.model, "atoms": args.atoms, "phi0": args.phi0,
            "phi_min": args.phi_min, "phi_max": args.phi_max}


def cmd_estimate(args, manifest):
    model = _model_from_args(args)
    x = read_outcomes(args.data)
    agg = aggregate(x, model.outcomes.a, model.outcomes.b)
    res = confidence(model, agg, args.epsilon)
    out = res.to_dict()
    out["interval"] = [res.interval_lo, res.interval_hi]
    out["model"] = _model_spec(args)
    manifest.config = {"data": str(args.data), "epsilon": args.epsilon, **_model_spec(args)}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_simulate(args, manifest):
    try:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    if args.seed is not None:
        data["master_seed"] = args.seed
    try:
        config = ExperimentConfig.from_dict(data)
    except TypeError as exc:
        raise InputError(f"invalid config: {exc}") from exc
    manifest.config = config.to_dict()
    manifest.master_seed = config.master_seed
    records = monte_carlo(config, threads=args.threads)
    out = Path(args.out)
    out.write_text(records_to_csv(records), encoding="utf-8", newline="")
    manifest.outputs[str(out)] = _sha256(out)
    if args.manifest is None:
        args.manifest = str(out) + ".manifest.json"
    print(f"wrote {len(records)} rows to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_coverage(args, manifest):
    model = _model_from_args(args)
    p = exact_coverage(model, args.phi, args.n, args.epsilon)
    manifest.config = {"phi": args.phi, "n": args.n, "epsilon": args.epsilon, **_model_spec(args)}
    print(format(p, ".17g"))
    return EXIT_OK


def cmd_validate(args, manifest):
    model = _model_from_args(args, strict=False)
    report = validate_assumptions(model, args.grid)
    manifest.config = {"grid": args.grid, **_model_spec(args)}
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.passed else EXIT_MODEL


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=_u64, default=default,
                        help="master seed, overrides the config value")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1,
                        help="worker processes for simulations (0 = one per CPU)")
    parser.add_argument("--manifest", default=default,
                        help="write a JSON run manifest to this path")


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return v


def _model_flags(parser):
    parser.add_argument("--model", required=True, choices=VARIANTS)
    parser.add_argument("--atoms", type=int, default=1, help="number of atoms N")
    parser.add_argument("--phi0", type=float, default=None,
                        help="reference phase (default: the published choice for the variant)")
    parser.add_argument("--phi-min", type=float, default=0.0)
    parser.add_argument("--phi-max", type=float, default=math.pi / 400)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="metroci", description="Least-squares phase estimation with exact confidence radii.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common], help="estimate phi and delta from a data file")
    p.add_argument("--data", required=True, help="one outcome per line")
    p.add_argument("--epsilon", type=float, default=0.1)
    _model_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo sweep to CSV")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("coverage", parents=[common], help="exact coverage probability by enumeration")
    p.add_argument("--phi", type=float, default=PUBLISHED_PHI, help="true phase")
    p.add_argument("--n", type=int, required=True, help="number of trials")
    p.add_argument("--epsilon", type=float, default=0.1)
    _model_flags(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("validate", parents=[common], help="check model assumptions on a grid")
    p.add_argument("--grid", type=int, default=10_000, help="grid points over the interval")
    _model_flags(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    manifest = RunManifest(command=args.command, config={}, master_seed=args.seed, started=_now())
    try:
        code = args.func(args, manifest)
    except (InputError, AssumptionViolation, MetrociError) as exc:
        print(f"metroci {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_MODEL if isinstance(exc, AssumptionViolation) else EXIT_INPUT
    if args.manifest:
        manifest.finished = _now()
        Path(args.manifest).write_text(json.dumps(asdict(manifest), indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
