"""Cost model and the command-line surface.

Subcommands: ``matrix``, ``exact``, ``quantile``, ``plan`` (alias
``bound``), ``expect``, ``simulate``, ``cost``.  Every subcommand accepts
``--format json|csv`` and ``--n``, writes exactly one document to stdout,
and reserves stderr for diagnostics.  Exit codes: 0 success, 2 usage
error, 1 computation error.

JSON documents carry a stable top-level layout::

    {"query": ..., "inputs": ..., "results": ..., "meta": {"version", "seed"}}

with floats pre-rounded to 12 significant digits so that parsing and
re-serializing a document reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .album_model import AlbumSpec, build_transition_matrix
from .errors import CostOverflowError, CouponLabError, InvalidStateError
from .exact_engine import (
    completion_law,
    completion_quantile,
    exact_tail,
    expected_completion,
    expected_draws_for_next,
)
from .monte_carlo import SimulationConfig, run_simulation
from .tail_bounds import BoundQuery, tail_bound

SEED_ENV_VAR = "COUPON_LAB_SEED"
DEFAULT_SEED = 0

_INT64_MAX = 2**63 - 1
_SIGNIFICANT_DIGITS = 12
_CONFIG_KEYS = ("n", "price_cents", "seed")


@dataclass(frozen=True)
class CostReport:
    """Exact integer-cent cost of a purchase count, with localized rendering."""

    stickers: int
    unit_price_cents: int
    total_cents: int
    formatted: str


def format_brl(cents: int) -> str:
    """Render integer cents as reais: period thousands, comma decimals."""
    reais, cc = divmod(cents, 100)
    return "R$ {},{:02d}".format(f"{reais:,}".replace(",", "."), cc)


def cost_of(stickers: int, spec: AlbumSpec) -> CostReport:
    """Cost of buying ``stickers`` stickers at the album's unit price.

    Pure integer arithmetic; totals beyond 64-bit cents raise rather
    than wrap.
    """
    if stickers < 0:
        raise InvalidStateError(f"sticker count must be non-negative, got {stickers}")
    total = stickers * spec.price_cents
    if total > _INT64_MAX:
        raise CostOverflowError(
            f"total of {total} cents exceeds the 64-bit range"
        )
    return CostReport(
        stickers=stickers,
        unit_price_cents=spec.price_cents,
        total_cents=total,
        formatted=format_brl(total),
    )


# ---------------------------------------------------------------------------
# Serialization


def _round_float(x: float):
    if math.isnan(x):
        return None
    if math.isinf(x):
        return None
    return float(f"{x:.{_SIGNIFICANT_DIGITS}g}")


def _canonical(obj):
    if isinstance(obj, dict):
        return {key: _canonical(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [_canonical(value) for value in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round_float(float(obj))
    return obj


def render_json(payload: dict) -> str:
    """Serialize a payload with stable key order and canonical floats."""
    return json.dumps(_canonical(payload), indent=2)


def render_csv(rows: Sequence[Sequence]) -> str:
    """Serialize rows (first row is the header) with 12-significant-digit floats."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow(
            [
                f"{value:.{_SIGNIFICANT_DIGITS}g}"
                if isinstance(value, (float, np.floating))
                else value
                for value in row
            ]
        )
    return buffer.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# Argument parsing


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative integer, got {text!r}")
    return value


def _seed_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"must fit in an unsigned 64-bit integer, got {text!r}")
    return value


def _open_probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be strictly between 0 and 1, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupon-lab",
        description=(
            "How many stickers must a collector buy to fill an n-sticker album, "
            "and what does it cost? Exact chain arithmetic, tail bounds, and "
            "seeded simulation."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive_int, help="album size (distinct stickers)")
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    common.add_argument(
        "--config", type=Path, help="key=value file presetting n, price_cents, seed"
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", parents=[common], help="emit the transition matrix as sparse triplets")

    p = sub.add_parser("exact", parents=[common], help="pmf/cdf of the completion draw count")
    p.add_argument("--t-max", type=_positive_int, required=True, help="truncation horizon")

    p = sub.add_parser("quantile", parents=[common], help="smallest t with P(complete by t) >= target")
    p.add_argument("--target", type=_open_probability, required=True)

    p = sub.add_parser(
        "plan",
        parents=[common],
        aliases=["bound"],
        help="threshold purchase count with failure bound and cost",
    )
    p.add_argument("--price-cents", type=_nonnegative_int, help="unit sticker price in cents")
    p.add_argument("--confidence", type=_open_probability, help="target completion probability")
    p.add_argument("--c", type=_positive_float, help="explicit slack parameter (overrides --confidence)")

    p = sub.add_parser("expect", parents=[common], help="expected draws and cost for the next sticker(s)")
    p.add_argument("--missing", type=_positive_int, help="stickers still missing (omit for the whole album)")
    p.add_argument("--price-cents", type=_nonnegative_int, help="unit sticker price in cents")

    p = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo completion samples")
    p.add_argument("--trials", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed_int, help="64-bit seed (default: config, then $COUPON_LAB_SEED, then 0)")
    p.add_argument("--t-cap", type=_positive_int, help="per-trial draw cap (runaway guard)")
    p.add_argument("--workers", type=_positive_int, default=1, help="concurrent workers (results identical)")

    p = sub.add_parser("cost", parents=[common], help="exact cost of a purchase count")
    p.add_argument("--stickers", type=_nonnegative_int, required=True)
    p.add_argument("--price-cents", type=_nonnegative_int, help="unit sticker price in cents")

    return parser


def _load_config_file(parser: argparse.ArgumentParser, path: Path) -> dict:
    if not path.is_file():
        parser.error(f"config file not found: {path}")
    values: dict[str, int] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep:
            parser.error(f"{path}:{lineno}: expected key=value, got {line!r}")
        if key not in _CONFIG_KEYS:
            parser.error(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = int(value)
        except ValueError:
            parser.error(f"{path}:{lineno}: {key} must be an integer, got {value!r}")
    return values


def _resolve(parser, args, config, attr, key, required_for=None):
    value = getattr(args, attr, None)
    if value is None:
        value = config.get(key)
    if value is None and required_for is not None:
        parser.error(f"{required_for} requires --{attr.replace('_', '-')} (flag or config file)")
    return value


def _resolve_seed(parser, args, config) -> int:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = config.get("seed")
    if seed is None:
        raw = os.environ.get(SEED_ENV_VAR)
        if raw is not None:
            try:
                seed = _seed_int(raw)
            except (ValueError, argparse.ArgumentTypeError):
                parser.error(f"environment variable {SEED_ENV_VAR}: invalid seed {raw!r}")
    if seed is None:
        seed = DEFAULT_SEED
    if not 0 <= seed < 2**64:
        parser.error(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return seed


# ---------------------------------------------------------------------------
# Subcommand handlers; each returns (payload, csv_rows, seed_for_meta)


def _handle_matrix(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="matrix")
    matrix = build_transition_matrix(AlbumSpec(n=n))
    row_idx, col_idx = np.nonzero(matrix.entries)
    triplets = [
        [int(r), int(c), float(matrix.entries[r, c])]
        for r, c in zip(row_idx, col_idx)
    ]
    payload = {
        "query": "matrix",
        "inputs": {"n": n},
        "results": {"n": n, "entries": triplets},
    }
    rows = [["row", "col", "value"]] + triplets
    return payload, rows, None


def _handle_exact(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="exact")
    law = completion_law(AlbumSpec(n=n), args.t_max)
    payload = {
        "query": "exact",
        "inputs": {"n": n, "t_max": args.t_max},
        "results": {
            "pmf": law.pmf,
            "cdf": law.cdf,
            "tail_mass": law.tail_mass,
        },
    }
    rows = [["t", "pmf", "cdf"]]
    rows += [[t, float(law.pmf[t]), float(law.cdf[t])] for t in range(args.t_max + 1)]
    return payload, rows, None


def _handle_quantile(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="quantile")
    spec = AlbumSpec(n=n)
    draws = completion_quantile(spec, args.target)
    completion_probability = 1.0 - exact_tail(spec, draws)
    payload = {
        "query": "quantile",
        "inputs": {"n": n, "target": args.target},
        "results": {"draws": draws, "completion_probability": completion_probability},
    }
    rows = [
        ["n", "target", "draws", "completion_probability"],
        [n, args.target, draws, completion_probability],
    ]
    return payload, rows, None


def _handle_plan(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="plan")
    price = _resolve(parser, args, config, "price_cents", "price_cents", required_for="plan")
    if args.c is None and args.confidence is None:
        parser.error("plan requires --confidence or --c")
    c = args.c if args.c is not None else -math.log(1.0 - args.confidence)
    result = tail_bound(BoundQuery(n=n, c=c))
    report = cost_of(result.threshold_t, AlbumSpec(n=n, price_cents=price))
    payload = {
        "query": "plan",
        "inputs": {
            "n": n,
            "price_cents": price,
            "confidence": args.confidence,
            "c": args.c,
        },
        "results": {
            "c": c,
            "threshold": result.threshold_t,
            "bound": result.bound,
            "union_bound": result.union_bound,
            "cost": {
                "stickers": report.stickers,
                "unit_price_cents": report.unit_price_cents,
                "total_cents": report.total_cents,
                "formatted": report.formatted,
            },
        },
    }
    rows = [
        ["n", "price_cents", "c", "threshold", "bound", "union_bound", "total_cents", "cost"],
        [n, price, c, result.threshold_t, result.bound, result.union_bound,
         report.total_cents, report.formatted],
    ]
    return payload, rows, None


def _handle_expect(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="expect")
    price = _resolve(parser, args, config, "price_cents", "price_cents", required_for="expect")
    spec = AlbumSpec(n=n, price_cents=price)
    if args.missing is None:
        expected_draws = expected_completion(spec)
    else:
        expected_draws = expected_draws_for_next(spec, args.missing)
    expected_cents = expected_draws * price
    payload = {
        "query": "expect",
        "inputs": {"n": n, "price_cents": price, "missing": args.missing},
        "results": {
            "expected_draws": expected_draws,
            "expected_cost_cents": expected_cents,
            "formatted": format_brl(int(expected_cents + 0.5)),
        },
    }
    rows = [
        ["n", "price_cents", "missing", "expected_draws", "expected_cost_cents", "cost"],
        [n, price, args.missing if args.missing is not None else "",
         expected_draws, expected_cents, format_brl(int(expected_cents + 0.5))],
    ]
    return payload, rows, None


def _handle_simulate(parser, args, config):
    n = _resolve(parser, args, config, "n", "n", required_for="simulate")
    seed = _resolve_seed(parser, args, config)
    sim_config = SimulationConfig(
        spec=AlbumSpec(n=n), trials=args.trials, seed=seed, t_cap=args.t_cap
    )
    report = run_simulation(sim_config, workers=args.workers)
    payload = {
        "query": "simulate",
        "inputs": {"n": n, "trials": args.trials, "seed": seed, "t_cap": report.t_cap},
        "results": {
            "samples": report.samples,
            "censored_trials": report.censored_trials,
            "mean": report.mean,
            "std": report.std,
            "min": report.min,
            "max": report.max,
        },
    }
    censored = set(report.censored_trials.tolist())
    rows = [["trial", "draws"]]
    sample_iter = iter(report.samples.tolist())
    for trial in range(args.trials):
        rows.append([trial, -1 if trial in censored else next(sample_iter)])
    return payload, rows, seed


def _handle_cost(parser, args, config):
    n = _resolve(parser, args, config, "n", "n")
    price = _resolve(parser, args, config, "price_cents", "price_cents", required_for="cost")
    report = cost_of(args.stickers, AlbumSpec(n=n if n is not None else 1, price_cents=price))
    payload = {
        "query": "cost",
        "inputs": {"n": n, "price_cents": price, "stickers": args.stickers},
        "results": {
            "stickers": report.stickers,
            "unit_price_cents": report.unit_price_cents,
            "total_cents": report.total_cents,
            "formatted": report.formatted,
        },
    }
    rows = [
        ["stickers", "unit_price_cents", "total_cents", "cost"],
        [report.stickers, report.unit_price_cents, report.total_cents, report.formatted],
    ]
    return payload, rows, None


_HANDLERS = {
    "matrix": _handle_matrix,
    "exact": _handle_exact,
    "quantile": _handle_quantile,
    "plan": _handle_plan,
    "bound": _handle_plan,
    "expect": _handle_expect,
    "simulate": _handle_simulate,
    "cost": _handle_cost,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one subcommand, and write its report to stdout.

    Returns the process exit code instead of raising ``SystemExit`` so
    the CLI can be driven in-process.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config_file(parser, args.config) if args.config else {}
        payload, rows, seed = _HANDLERS[args.command](parser, args, config)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code) if exc.code else 0
    except CouponLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    from coupon_lab import __version__

    payload["meta"] = {"version": __version__, "seed": seed}
    if args.format == "csv":
        print(render_csv(rows))
    else:
        print(render_json(payload))
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
