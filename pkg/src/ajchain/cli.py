"""Command-line entry point: ``ajchain <command> [options]``.

Results go to stdout as JSON (or CSV where noted). Exit status is 0 on
success, 1 for parameter-domain errors and 2 for numerical failures; in the
error cases a JSON object ``{"error": ..., "detail": ...}`` is printed.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from typing import Any, List, Optional, Sequence, TextIO

import numpy as np

from . import __version__
from .chain import (
    NO_ADMISSIBLE_T,
    ChainParams,
    Region,
    admissible_t_intervals,
    classify_region,
    coeff_ab,
    coeff_pqr,
    potential,
    region_conditions,
)
from .errors import NumericalError, ParameterError, PoleError
from .simulate import UrnModel, empirical_transition, transition_row, truncated_power

NODES_ENV = "AJCHAIN_NODES"
FALLBACK_NODES = 200


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _default_nodes() -> int:
    raw = os.environ.get(NODES_ENV, "")
    if not raw:
        return FALLBACK_NODES
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"{NODES_ENV}={raw!r} is not an integer")
    if value < 1:
        raise ParameterError(f"{NODES_ENV} must be positive")
    return value


# -- output ------------------------------------------------------------------
def _clean(obj: Any) -> Any:
    """Convert numpy scalars, drop non-finite floats to ``None``."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _emit_json(obj: Any, out: TextIO) -> None:
    # float repr is the shortest string that round-trips exactly
    out.write(json.dumps(_clean(obj), ensure_ascii=False, allow_nan=False, indent=2))
    out.write("\n")


def _fmt(v) -> str:
    v = float(v)
    return "%.17g" % v if math.isfinite(v) else ""


def _emit_csv(header: Sequence[str], rows, out: TextIO) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(str(c) if isinstance(c, (int, np.integer)) else _fmt(c) for c in row) + "\n")


# -- parameters ----------------------------------------------------------------
def _as_integer(value: float, name: str) -> int:
    k = round(value)
    if abs(value - k) > 1e-9 * max(1.0, abs(value)):
        raise ParameterError(f"{name} = {value!r} must be an integer for the urn shorthand")
    return int(k)


def _params(ns) -> ChainParams:
    if ns.t is not None and (ns.T is not None or ns.K is not None):
        raise ParameterError("give either --t or --T/--K, not both")
    if ns.t is not None:
        return ChainParams.admissible(ns.alpha, ns.beta, ns.t)
    if ns.T is None or ns.K is None:
        raise ParameterError("t is required: give --t or both --T and --K")
    if ns.alpha == 0.0 or ns.beta == 0.0:
        raise ParameterError("urn shorthand needs nonzero alpha and beta")
    A = _as_integer(1.0 / ns.alpha, "1/alpha")
    B = _as_integer(-1.0 / ns.beta, "-1/beta")
    return UrnModel(A, B, ns.T, ns.K).params


def _params_dict(p: ChainParams) -> dict:
    return {"alpha": p.alpha, "beta": p.beta, "t": p.t, "region": p.region.value}


def _add_chain_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--T", type=int, default=None, help="urn shorthand: t = 1/T + K")
    sp.add_argument("--K", type=int, default=None)


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# -- commands ------------------------------------------------------------------
def _cmd_regions(ns, out):
    region = classify_region(ns.alpha, ns.beta)
    if region is Region.NONE:
        if ns.beta >= 0:
            raise ParameterError(NO_ADMISSIBLE_T)
        raise ParameterError("(alpha, beta) lies on a region boundary: no admissible t")
    intervals = admissible_t_intervals(region, ns.alpha, ns.beta, ns.n_lo, ns.n_hi)
    _emit_json(
        {
            "region": region.value,
            "conditions": region_conditions(region),
            "t_intervals": [list(iv) for iv in intervals],
        },
        out,
    )


def _maybe(fn):
    try:
        return fn()
    except PoleError:
        return float("nan")


def _cmd_coeffs(ns, out):
    p = _params(ns)
    if ns.n_max < ns.n_min:
        raise ParameterError("--n-max must be at least --n-min")
    rows = []
    for n in range(ns.n_min, ns.n_max + 1):
        pn, rn, qn = coeff_pqr(n, p)
        an = _maybe(lambda: coeff_ab(n, p)[0])
        bn = _maybe(lambda: coeff_ab(n, p)[1])
        rows.append((n, pn, rn, qn, an, bn, _maybe(lambda: potential(n, p))))
    header = ("n", "p", "r", "q", "a", "b", "pi")
    if ns.format == "csv":
        _emit_csv(header, rows, out)
    else:
        _emit_json({"params": _params_dict(p), "rows": [dict(zip(header, r)) for r in rows]}, out)


def _cmd_factorize(ns, out):
    from .factorization import lu_factorize, ul_factorize

    p = _params(ns)
    fp = ul_factorize(p) if ns.kind == "UL" else lu_factorize(p)
    entries = []
    for n in range(ns.n_min, ns.n_max + 1):
        x, y, s, t = fp.entries(n)
        entries.append({"n": n, "x": x, "y": y, "s": s, "t": t})
    _emit_json({"kind": fp.kind, "H": fp.H, "H_prime": fp.H_prime, "entries": entries}, out)


def _density(kind: str, p: ChainParams):
    from .spectral import spectral_W, spectral_geronimus, spectral_psi

    if kind == "W":
        return spectral_W(p)
    if kind == "psi":
        return spectral_psi(p)
    return spectral_geronimus(p, "UL" if kind == "tilde" else "LU")


def _cmd_density(ns, out):
    p = _params(ns)
    if ns.x:
        xs = np.array(ns.x, dtype=float)
    else:
        xs = (np.arange(ns.points) + 0.5) / ns.points
    if np.any((xs <= 0.0) | (xs >= 1.0)):
        raise ParameterError("density points must lie in the open interval (0, 1)")
    vals = _density(ns.kind, p)(xs)
    rows = [(x, v[0, 0], v[0, 1], v[1, 1]) for x, v in zip(xs, vals)]
    header = ("x", "w11", "w12", "w22")
    if ns.format == "json":
        _emit_json({"kind": ns.kind, "params": _params_dict(p), "rows": [dict(zip(header, r)) for r in rows]}, out)
    else:
        _emit_csv(header, rows, out)


def _cmd_transition(ns, out):
    from .quadrature import km_transition

    p = _params(ns)
    if ns.n < 0:
        raise ParameterError("--n must be nonnegative")
    nodes = ns.nodes if ns.nodes is not None else _default_nodes()
    value = km_transition(ns.i, ns.j, ns.n, p, nodes)
    oracle = truncated_power(ns.i, ns.j, ns.n, p)
    _emit_json({"value": value, "oracle": oracle, "abs_diff": abs(value - oracle)}, out)


def _cmd_urn(ns, out):
    if ns.steps < 0:
        raise ParameterError("--steps must be nonnegative")
    urn = UrnModel(ns.A, ns.B, ns.T, ns.K)
    p = urn.params
    emp = empirical_transition(ns.start, ns.steps, ns.replicas, urn, ns.seed)
    exact = transition_row(ns.start, ns.steps, p)
    keys = sorted(set(emp) | set(exact))
    gap = max(abs(emp.get(k, 0.0) - exact.get(k, 0.0)) for k in keys)
    _emit_json(
        {
            "params": {"A": urn.A, "B": urn.B, "T": urn.T, "K": urn.K, **_params_dict(p)},
            "start": ns.start,
            "steps": ns.steps,
            "replicas": ns.replicas,
            "seed": ns.seed,
            "empirical": {str(k): emp[k] for k in sorted(emp)},
            "exact": {str(k): exact[k] for k in sorted(exact)},
            "max_abs_gap": gap,
        },
        out,
    )


def _cmd_verify(ns, out) -> int:
    from .checks import run_invariant_suite

    p = _params(ns)
    nodes = ns.nodes if ns.nodes is not None else _default_nodes()
    results = run_invariant_suite(p, nodes)
    ok = all(r.passed for r in results)
    _emit_json({"params": _params_dict(p), "passed": ok, "checks": [r.as_dict() for r in results]}, out)
    return 0 if ok else 2


def _seed(value: str) -> int:
    v = int(value)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ajchain", description="Bilateral birth-death chain toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("regions", help="region of (alpha, beta) and admissible t intervals")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--n-lo", type=int, default=-2)
    sp.add_argument("--n-hi", type=int, default=2)

    sp = sub.add_parser("coeffs", help="chain, Jacobi and potential coefficients")
    _add_chain_args(sp)
    sp.add_argument("--n-min", type=int, default=-5)
    sp.add_argument("--n-max", type=int, default=5)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("factorize", help="stochastic UL or LU factors")
    _add_chain_args(sp)
    sp.add_argument("--kind", choices=("UL", "LU"), default="UL")
    sp.add_argument("--n-min", type=int, default=-5)
    sp.add_argument("--n-max", type=int, default=5)

    sp = sub.add_parser("density", help="spectral matrix density as CSV")
    _add_chain_args(sp)
    sp.add_argument("--kind", choices=("W", "psi", "tilde", "hat"), default="psi")
    sp.add_argument("--x", type=float, action="append", help="evaluation point (repeatable)")
    sp.add_argument("--points", type=_positive, default=9, help="midpoint grid size when --x is absent")
    sp.add_argument("--format", choices=("json", "csv"), default="csv")

    sp = sub.add_parser("transition", help="n-step transition probability by quadrature")
    _add_chain_args(sp)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--nodes", type=_positive, default=None)

    sp = sub.add_parser("urn", help="Monte Carlo of the two-experiment urn")
    sp.add_argument("--A", type=int, required=True)
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--start", type=int, default=0)
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--replicas", type=_positive, default=100_000)
    sp.add_argument("--seed", type=_seed, default=0)

    sp = sub.add_parser("verify", help="run the invariant suite")
    _add_chain_args(sp)
    sp.add_argument("--nodes", type=_positive, default=None)
    return parser


_COMMANDS = {
    "regions": _cmd_regions,
    "coeffs": _cmd_coeffs,
    "factorize": _cmd_factorize,
    "density": _cmd_density,
    "transition": _cmd_transition,
    "urn": _cmd_urn,
    "verify": _cmd_verify,
}


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Execute one command and return its exit status."""
    out = sys.stdout if out is None else out
    buf = io.StringIO()
    try:
        ns = build_parser().parse_args(argv)
        status = _COMMANDS[ns.command](ns, buf) or 0
    except _UsageError as exc:
        _emit_json({"error": "usage", "detail": str(exc)}, out)
        return 1
    except ParameterError as exc:
        _emit_json({"error": "parameter", "detail": str(exc)}, out)
        return 1
    except (NumericalError, FloatingPointError, OverflowError) as exc:
        _emit_json({"error": "numerical", "detail": str(exc)}, out)
        return 2
    out.write(buf.getvalue())
    return status


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
