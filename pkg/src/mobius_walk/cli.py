"""
Command-line front end.

    mobius-walk evolve   --nodes 24 --alpha 1 --steps 400 --out evolve.csv
    mobius-walk limdist  --nodes 24 --alpha 2 --method closed --out ld.csv
    mobius-walk spectrum --nodes 24 --alpha 1 --out spectrum.csv
    mobius-walk mixing   --nodes 5 --epsilon 0.05 --steps 10000 --out mix.csv
    mobius-walk verify   --out report.json

CSV artifacts get a JSON sidecar next to them (``foo.csv`` -> ``foo.json``).
Exit codes: 0 success (including "mixing not reached"), 1 invalid input,
2 numerical failure or a failed verification check.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import BadInitialState, NumericalFailure, ValidationError
from .limiting import (
    degeneracy_report,
    empirical_average_distribution,
    extremum_pattern,
    limiting_distribution_closed_form,
    limiting_distribution_general,
    predicted_pattern,
)
from .mixing import decay_slope, empirical_mixing_time
from .spectral import eigensystem
from .verify import report_dict, run_suite
from .walk import HADAMARD, Localized, evolve_distributions, initial_state, make_params

DEFAULTS = {
    "nodes": 24,
    "alpha": 0.0,
    "init": "0,0,0",
    "epsilon": 0.05,
    "method": "general",
    "format": "csv",
    "threads": 1,
    "seed": 0,
    "out": None,
}
STEP_DEFAULTS = {"evolve": 100, "limdist": 10_000, "spectrum": 0, "mixing": 10_000, "verify": 10_000}
METHODS = ("empirical", "general", "closed")


def fmt(x) -> str:
    return format(float(x), ".17g")


# -- configuration -----------------------------------------------------------


def _parse_init(text) -> Localized:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    try:
        s, r, j = (int(p) for p in parts)
    except (TypeError, ValueError):
        raise BadInitialState(f"expected 's,r,j' integers, got {text!r}", field="init") from None
    return Localized(s, r, j)


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags, then validate."""
    cfg = dict(DEFAULTS, steps=STEP_DEFAULTS[args.command])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config file: {exc}", field="config") from exc
        unknown = set(loaded) - set(cfg) - {"corrupt_coin"}
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}", field="config")
        cfg.update(loaded)
    for key in list(cfg) + ["corrupt_coin"]:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["command"] = args.command

    for key, kind in (("steps", int), ("threads", int), ("seed", int), ("nodes", int)):
        try:
            cfg[key] = kind(cfg[key])
        except (TypeError, ValueError):
            raise ValidationError(f"must be an integer, got {cfg[key]!r}", field=key) from None
    for key in ("alpha", "epsilon"):
        try:
            cfg[key] = float(cfg[key])
        except (TypeError, ValueError):
            raise ValidationError(f"must be a number, got {cfg[key]!r}", field=key) from None
    if not np.isfinite(cfg["alpha"]):
        raise ValidationError("must be finite", field="alpha")
    min_steps = 1 if args.command in ("limdist", "mixing", "verify") else 0
    if cfg["steps"] < min_steps:
        raise ValidationError(f"must be >= {min_steps}, got {cfg['steps']}", field="steps")
    if cfg["epsilon"] <= 0:
        raise ValidationError(f"must be > 0, got {cfg['epsilon']}", field="epsilon")
    if cfg["threads"] < 1:
        raise ValidationError(f"must be >= 1, got {cfg['threads']}", field="threads")
    if cfg["method"] not in METHODS:
        raise ValidationError(f"must be one of {METHODS}, got {cfg['method']!r}", field="method")
    if cfg["format"] not in ("csv", "json"):
        raise ValidationError(f"must be csv or json, got {cfg['format']!r}", field="format")
    cfg["init"] = ",".join(str(x) for x in _astuple(_parse_init(cfg["init"])))
    return cfg


def _astuple(loc: Localized):
    return (loc.s, loc.r, loc.j)


def params_from(cfg: dict):
    return make_params(cfg["nodes"], cfg["alpha"], HADAMARD, _parse_init(cfg["init"]))


def _params_meta(params) -> dict:
    init = params.initial
    return {
        "nodes": params.n_nodes,
        "alpha": params.alpha,
        "theta": params.theta,
        "init": [init.s, init.r, init.j],
        "coin": "hadamard",
    }


# -- output ------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) if isinstance(x, float) else str(x) for x in row) + "\n")
    return buf.getvalue()


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _sidecar_path(out: Path) -> Path:
    side = out.with_suffix(".json")
    return side if side != out else out.with_name(out.name + ".meta.json")


def emit(cfg: dict, header, rows, meta: dict, stdout) -> None:
    """Write the main artifact (CSV or JSON) and, for CSV, the JSON sidecar."""
    out = Path(cfg["out"]) if cfg["out"] else None
    if cfg["format"] == "json":
        doc = dict(meta, columns=list(header), rows=[list(r) for r in rows])
        text = _dumps(doc)
        if out:
            out.write_text(text)
        else:
            stdout.write(text)
        return
    text = _csv(header, rows)
    if out:
        out.write_text(text)
        _sidecar_path(out).write_text(_dumps(meta))
    else:
        stdout.write(text)


# -- commands ----------------------------------------------------------------


def cmd_evolve(cfg, stdout):
    params = params_from(cfg)
    dists = evolve_distributions(initial_state(params), params, cfg["steps"])
    rows = [(t, v, float(dists[t, v])) for t in range(len(dists)) for v in range(params.n_nodes)]
    meta = {"command": "evolve", "params": _params_meta(params), "steps": cfg["steps"],
            "max_sum_error": float(np.abs(dists.sum(axis=1) - 1).max())}
    emit(cfg, ("t", "v", "p"), rows, meta, stdout)
    return 0


def cmd_limdist(cfg, stdout):
    params = params_from(cfg)
    eig = eigensystem(params)
    report = degeneracy_report(params, eigsys=eig)
    general = limiting_distribution_general(params, report, eig)
    method = cfg["method"]
    if method == "closed":
        dist = limiting_distribution_closed_form(params)
    elif method == "empirical":
        dist = empirical_average_distribution(params, cfg["steps"], eigsys=eig)
    else:
        dist = general
    meta = {
        "command": "limdist",
        "method": method,
        "params": _params_meta(params),
        "regime": report.summary(),
        "pattern": extremum_pattern(dist, params.initial.j),
        "predicted_pattern": predicted_pattern(params.n_nodes, params.alpha),
        "max_abs_diff_vs_general": float(np.abs(dist.values - general.values).max()),
        "sum": float(dist.values.sum()),
    }
    if method == "empirical":
        meta["T"] = cfg["steps"]
    rows = [(v, float(p)) for v, p in enumerate(dist.values)]
    emit(cfg, ("v", "pi"), rows, meta, stdout)
    return 0


def cmd_spectrum(cfg, stdout):
    params = params_from(cfg)
    eig = eigensystem(params)
    numeric = eigensystem(params, method="numeric")
    report = degeneracy_report(params, eigsys=eig)
    phases = eig.phases
    diff = np.abs(np.angle(np.exp(1j * (phases - numeric.phases)))).max()
    lam = eig.values.reshape(-1)
    gaps = np.abs(lam[:, None] - lam[None, :])
    distinct = gaps[gaps > 1e-9]
    meta = {
        "command": "spectrum",
        "params": _params_meta(params),
        "min_gap": float(distinct.min()) if distinct.size else None,
        "min_phase_gap": float(np.diff(np.sort(np.unique(np.round(phases.ravel(), 12)))).min(initial=np.inf)),
        "coincidences": [[list(a), list(b)] for a, b in report.pairs],
        "regime": report.summary(),
        "max_phase_diff_vs_numeric": float(diff),
        "fallback_k": eig.fallback_k,
    }
    rows = [(k, *(float(p) for p in phases[k])) for k in range(params.n_nodes)]
    emit(cfg, ("k", "phi_00", "phi_01", "phi_10", "phi_11"), rows, meta, stdout)
    return 0


def cmd_mixing(cfg, stdout):
    params = params_from(cfg)
    rep = empirical_mixing_time(params, cfg["epsilon"], cfg["steps"])
    fit = rep.times >= 100
    meta = {
        "command": "mixing",
        "params": _params_meta(params),
        "epsilon": rep.epsilon,
        "t_max": rep.t_max,
        "reached": rep.reached,
        "m_epsilon": rep.m_epsilon,
        "min_gap": rep.min_gap,
        "norm": rep.norm_kind,
        "bound_holds": bool(np.all(rep.distances <= rep.bounds + 1e-9)),
        "decay_slope": decay_slope(rep.times[fit], rep.distances[fit]) if fit.sum() >= 2 else None,
    }
    rows = [(int(t), float(d), float(b)) for t, d, b in zip(rep.times, rep.distances, rep.bounds)]
    emit(cfg, ("t", "distance", "bound"), rows, meta, stdout)
    return 0


def cmd_verify(cfg, stdout, stderr):
    coin = HADAMARD
    if cfg.get("corrupt_coin"):
        coin = np.array([[1.0, 1.0], [1.0, 1.0]]) / np.sqrt(2.0)
    start = time.perf_counter()
    results = run_suite(T=cfg["steps"], seed=cfg["seed"], threads=cfg["threads"], coin=coin)
    for r in results:
        stderr.write(f"{'PASS' if r.passed else 'FAIL'} {r.name} error={r.error:.3g} "
                     f"tol={r.tolerance:.3g} ({r.seconds:.2f}s)\n")
        r.seconds = 0.0
    stderr.write(f"total {time.perf_counter() - start:.1f}s\n")
    config = {k: cfg[k] for k in ("steps", "seed")}
    report = report_dict(results, config)
    for check in report["checks"]:
        check.pop("seconds")
    text = _dumps(report)
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        stdout.write(text)
    return 0 if report["passed"] else 2


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", type=int, help="number of cycle nodes N (>= 2)")
    common.add_argument("--alpha", type=float, help="Möbius factor (rotations per cycle)")
    common.add_argument("--init", help="initial basis ket as s,r,j (default 0,0,0)")
    common.add_argument("--steps", "-T", type=int, dest="steps",
                        help="steps (evolve), averaging horizon T (limdist empirical), t_max (mixing)")
    common.add_argument("--epsilon", type=float, help="mixing threshold")
    common.add_argument("--method", help="limdist method: empirical, general or closed")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--format", help="csv (default) or json")
    common.add_argument("--threads", type=int, help="worker threads (verify)")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--config", help="JSON file with any of the flags above")

    parser = argparse.ArgumentParser(prog="mobius-walk", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="per-step position distributions")
    sub.add_parser("limdist", parents=[common], help="limiting distribution")
    sub.add_parser("spectrum", parents=[common], help="eigenphases of every k-block")
    sub.add_parser("mixing", parents=[common], help="distance to the limit and its bound")
    verify = sub.add_parser("verify", parents=[common], help="run the cross-oracle suite")
    verify.add_argument("--corrupt-coin", action="store_true", default=None,
                        help="use a non-unitary coin to exercise the validation path")
    return parser


COMMANDS = {"evolve": cmd_evolve, "limdist": cmd_limdist, "spectrum": cmd_spectrum, "mixing": cmd_mixing}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(cfg, stdout, stderr)
        return COMMANDS[args.command](cfg, stdout)
    except ValidationError as exc:
        field = f"{exc.field}: " if exc.field else ""
        stderr.write(f"error: {field}{exc}\n")
        return 1
    except (NumericalFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"I/O failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
