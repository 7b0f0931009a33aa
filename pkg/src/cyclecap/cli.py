"""Command-line front end: ``cyclecap <command> --n N --alpha A [options]``.

Every command writes one JSON document (or CSV with a header row) to
stdout or ``--out``. Domain and regime errors exit with status 2 and a
one-line JSON error on stderr; resource-cap errors exit with status 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import asym, exact, saddle, sample, stats
from .errors import CycleCapError, DomainError, ResourceLimitError
from .exact import Constraint

COMMANDS = (
    "count",
    "dist",
    "saddle",
    "moments",
    "expand",
    "sample",
    "verify-clt",
    "check-growth",
    "check-approx",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    alpha: int
    alpha_spec: str
    w: float = 1.0
    replicates: int = 1000
    seed: int = 0
    max_order: int | None = None
    exact: bool = False
    output_path: str | None = None
    format: str = "json"


def parse_alpha(spec: str, n: int) -> int:
    """An integer, or ``n^a`` with 0 < a < 1 evaluated as ceil(n^a)."""
    spec = spec.strip()
    if spec.startswith("n^"):
        try:
            a = float(spec[2:])
        except ValueError:
            raise DomainError(f"cannot parse alpha expression {spec!r}") from None
        if not 0 < a < 1:
            raise DomainError(f"alpha exponent must lie in (0, 1), got {a}")
        r = n**a
        # n^a that is an integer up to rounding noise must not be bumped up
        nearest = round(r)
        if abs(r - nearest) <= 1e-9 * max(r, 1.0):
            return int(nearest)
        return math.ceil(r)
    try:
        value = int(spec)
    except ValueError:
        raise DomainError(f"alpha must be an integer or 'n^a', got {spec!r}") from None
    return value


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _flat_csv(record: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(record))
    w.writerow([repr(v) if isinstance(v, float) else v for v in record.values()])
    return buf.getvalue()


def _rows_csv(header: list, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _render(cfg: RunConfig, record: dict, rows: tuple | None = None) -> str:
    if cfg.format == "json":
        return _dumps(record) + "\n"
    if rows is not None:
        return _rows_csv(*rows)
    return _flat_csv(record)


def _cmd_count(cfg: RunConfig, c: Constraint) -> str:
    count = exact.exact_count(c)
    return _render(cfg, {"n": c.n, "alpha": c.alpha, "count": exact._int_to_str(count)})


def _cmd_dist(cfg: RunConfig, c: Constraint) -> str:
    d = exact.exact_cycle_count_distribution(c)
    mean, var = exact.distribution_moments(d)
    record = {**d.to_dict(), "mean": mean, "variance": var}
    rows = (["k", "probability"], sorted(d.probs.items()))
    return _render(cfg, record, rows)


def _cmd_saddle(cfg: RunConfig, c: Constraint) -> str:
    sol = saddle.solve_saddle(c, cfg.w)
    record = {"n": c.n, "alpha": c.alpha, **{k: v for k, v in sol.to_dict().items() if k != "constraint"}}
    return _render(cfg, record)


def _cmd_moments(cfg: RunConfig, c: Constraint) -> str:
    return _render(cfg, saddle.moments(c).to_dict())


def _cmd_expand(cfg: RunConfig, c: Constraint) -> str:
    em = asym.expand_m(c, cfg.max_order)
    ev = asym.expand_v(c, cfg.max_order)
    mp = saddle.moments(c)
    log_a = math.log(c.alpha)
    record = {
        "n": c.n,
        "alpha": c.alpha,
        "u": em.u,
        "xi": em.xi,
        "m_saddle": mp.m,
        "v_saddle": mp.v,
        "m_expansion": em.to_dict(),
        "v_expansion": ev.to_dict(),
        "m_expansion_plus_log_alpha": em.value + log_a,
        "v_expansion_plus_log_alpha": ev.value + log_a,
    }
    rows = (
        ["series", "k", "term"],
        [("m", em.first_index + i, t) for i, t in enumerate(em.terms)]
        + [("v", ev.first_index + i, t) for i, t in enumerate(ev.terms)],
    )
    return _render(cfg, record, rows)


def _cmd_sample(cfg: RunConfig, c: Constraint) -> str:
    table = exact.count_constrained(c)
    perms = [
        sample.sample_permutation(table, sample.substream(cfg.seed, r)).tolist()
        for r in range(cfg.replicates)
    ]
    cycles = [len(exact.cycle_lengths(p)) for p in perms]
    record = {
        "n": c.n,
        "alpha": c.alpha,
        "seed": cfg.seed,
        "replicates": cfg.replicates,
        "permutations": perms,
        "cycles": cycles,
    }
    rows = (
        ["replicate", "cycles", "permutation"],
        [(r, k, " ".join(map(str, p))) for r, (k, p) in enumerate(zip(cycles, perms))],
    )
    return _render(cfg, record, rows)


def _cmd_verify_clt(cfg: RunConfig, c: Constraint) -> str:
    mp = saddle.moments(c)
    if cfg.exact:
        d = exact.exact_cycle_count_distribution(c)
        mean, var = exact.distribution_moments(d)
        ks = stats.ks_exact_vs_normal(d, mp.m, mp.v)
        record = {
            "n": c.n,
            "alpha": c.alpha,
            "mode": "exact",
            "m": mp.m,
            "v": mp.v,
            "exact_mean": mean,
            "exact_variance": var,
            "ks_distance": ks.distance,
            "ks_location_of_max": ks.location_of_max,
        }
        return _render(cfg, record)
    run = sample.run_clt_experiment(c, cfg.replicates, cfg.seed)
    if cfg.format == "csv":
        return run.to_csv()
    return _dumps({**run.summary(), "mode": "sample"}) + "\n"


def _cmd_check_growth(cfg: RunConfig, c: Constraint) -> str:
    return _render(cfg, saddle.regime_check(c).to_dict())


def _cmd_check_approx(cfg: RunConfig, c: Constraint) -> str:
    log_exact = exact.log_exact_count(c)
    log_approx = saddle.saddle_point_count_approx(c)
    record = {
        "n": c.n,
        "alpha": c.alpha,
        "log_exact": log_exact,
        "log_approx": log_approx,
        "abs_error": abs(log_approx - log_exact),
        "relative_error": abs(log_approx - log_exact) / abs(log_exact) if log_exact else None,
    }
    return _render(cfg, record)


_HANDLERS = {
    "count": _cmd_count,
    "dist": _cmd_dist,
    "saddle": _cmd_saddle,
    "moments": _cmd_moments,
    "expand": _cmd_expand,
    "sample": _cmd_sample,
    "verify-clt": _cmd_verify_clt,
    "check-growth": _cmd_check_growth,
    "check-approx": _cmd_check_approx,
}


def dispatch(cfg: RunConfig) -> tuple[int, str, str]:
    """Run one command; returns (exit status, stdout text, stderr text)."""
    try:
        c = Constraint(cfg.n, cfg.alpha)
        return 0, _HANDLERS[cfg.command](cfg, c), ""
    except (DomainError, OverflowError) as exc:
        return 2, "", _dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    except ResourceLimitError as exc:
        return 1, "", _dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    except CycleCapError as exc:
        return 1, "", _dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="number of elements")
    common.add_argument("--alpha", required=True, help="max cycle length: integer or 'n^a'")
    common.add_argument("--w", type=float, default=1.0, help="generating-function argument")
    common.add_argument("--replicates", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-order", type=int, default=None)
    common.add_argument("--exact", action="store_true", help="verify-clt: use the exact law of C")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="cyclecap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=args.n,
        alpha=parse_alpha(args.alpha, args.n),
        alpha_spec=args.alpha,
        w=args.w,
        replicates=args.replicates,
        seed=args.seed,
        max_order=args.max_order,
        exact=args.exact,
        output_path=args.out,
        format=args.format,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except DomainError as exc:
        sys.stderr.write(_dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    status, out, err = dispatch(cfg)
    if err:
        sys.stderr.write(err)
    if out:
        if cfg.output_path:
            Path(cfg.output_path).write_text(out)
        else:
            sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
