"""Command line front end: compute | verify | reinhardt | scan | selftest.

Every JSON report is wrapped in an envelope carrying the schema tag, the
package version, the seed and a hash of the canonical configuration.  The
timestamp is the only field that changes between identical runs.

Exit codes: 0 ok, 1 bad input or range, 2 internal inconsistency,
3 conjecture counterexample recorded.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .amplitude import (
    RangeError,
    char_poly_from_roots,
    check_range,
    cophase_roots,
    crude_bound,
    fourier_bound,
    hook_functional,
    optimal_initialization,
    peak_amplitude,
    refined_bound,
    simulate,
    write_trajectory_csv,
)
from .conjectures import (
    EXCEEDANCE_TOL,
    REGIONS,
    kallioniemi_estimate,
    sample_self_conjugate,
    scan_pointwise,
    scan_special_case_np1,
    scan_uniform,
)
from .oracle import OracleCapError, OracleConfig, cross_check_interp, verify_cophase
from .reinhardt import load_problem, vertex_method
from .symfunc import ConsistencyError

SCHEMA = "hookamp/1"
EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3
CONJECTURES = ("pointwise-z1", "pointwise-z0", "t-equals-n", "special-np1", "kallioniemi", "uniform")


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _reals(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _complexes(text: str) -> list[complex]:
    return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def config_hash(config: dict) -> str:
    canon = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def envelope(command: str, config: dict, result) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "seed": config.get("seed"),
        "config": _jsonable(config),
        "config_hash": config_hash(config),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "result": _jsonable(result),
    }


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, output: str | None):
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", output)


def _resolve_seed(args) -> int:
    env = os.environ.get("HOOKAMP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"HOOKAMP_SEED must be an integer, got {env!r}")
    return args.seed


def _radii_weights(args) -> tuple[np.ndarray, np.ndarray, int]:
    if args.radii is None:
        if args.n is None:
            raise InputError("give --radii or --n")
        radii = [1.0] * args.n
    else:
        radii = _reals(args.radii)
    n = args.n if args.n is not None else len(radii)
    if len(radii) != n:
        raise InputError(f"--n {n} does not match {len(radii)} radii")
    weights = [1.0] * n if args.weights is None else _reals(args.weights)
    if len(weights) != n:
        raise InputError(f"--n {n} does not match {len(weights)} weights")
    r, w = np.array(radii), np.array(weights)
    if (r < 0).any() or (w < 0).any():
        raise InputError("radii and weights must be nonnegative")
    return r, w, n


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    r, w, n = _radii_weights(args)
    if args.t is None:
        raise InputError("--t is required")
    t = args.t
    if t < n:
        raise InputError(f"t = {t} must be at least n = {n}")
    check_range(n, t, args.unsafe_range)
    value = hook_functional(r, w, t)
    roots = cophase_roots(r)
    init = optimal_initialization(n, w)
    horizon = max(t, args.t_max or t)
    check_range(n, horizon, args.unsafe_range)
    traj = simulate(char_poly_from_roots(roots), init, horizon)
    simulated = abs(traj[t])
    if abs(simulated - value) > args.tolerance * max(1.0, value):
        raise ConsistencyError(f"simulated |x_t| = {simulated!r} differs from M_t = {value!r}")
    if args.format == "csv":
        buf = io.StringIO()
        write_trajectory_csv(traj, buf)
        _emit(buf.getvalue(), args.output)
        return EXIT_OK
    rmax = float(r.max())
    result = {
        "value": value,
        "simulated": simulated,
        "roots": roots,
        "initialization": init,
        "bounds": {
            "radius": rmax,
            "refined": refined_bound(n, rmax, t),
            "crude": crude_bound(n, rmax, t),
            "fourier_l1": fourier_bound(n, t) if rmax <= 1 else None,
        },
    }
    if args.t_max is not None:
        peak = peak_amplitude(r, w, args.t_max)
        result["peak"] = {
            "value": peak.value, "argmax_t": peak.argmax_t,
            "unbounded": peak.unbounded, "growth_detected": peak.growth_detected,
        }
    config = {"n": n, "t": t, "t_max": args.t_max, "radii": r, "weights": w, "seed": args.seed}
    _emit_json(envelope("compute", config, result), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    r, w, n = _radii_weights(args)
    if args.t is None:
        raise InputError("--t is required")
    cfg = OracleConfig(
        phase_grid=args.phase_grid, radial_grid=args.radial_grid,
        random_trials=args.trials, seed=args.seed, tolerance=args.tolerance,
    )
    ok, res = verify_cophase(args.t, r, w, cfg)
    route = cross_check_interp(np.array(res.argmax_roots), args.t)
    result = dict(res.to_json(), route_deviation=route)
    config = {"n": n, "t": args.t, "radii": r, "weights": w, **cfg.__dict__}
    _emit_json(envelope("verify", config, result), args.output)
    return EXIT_OK if ok and route <= 1e-7 else EXIT_CONSISTENCY


def cmd_reinhardt(args) -> int:
    if not args.domain:
        raise InputError("--domain FILE is required")
    domain, oracle, t = load_problem(args.domain)
    if args.t is not None:
        t = args.t
    check_range(domain.n, t, args.unsafe_range)
    sol = vertex_method(domain, oracle, t)
    config = {
        "domain": domain.vertices, "label": domain.label, "init_oracle": oracle.to_json(),
        "t": t, "seed": args.seed,
    }
    _emit_json(envelope("reinhardt", config, sol.to_json()), args.output)
    return EXIT_OK


def _t_range(args, n: int) -> list[int]:
    if args.t is not None:
        return [args.t]
    return list(range(n, (args.t_max if args.t_max is not None else n + 6) + 1))


def cmd_scan(args) -> int:
    kind = args.conjecture
    seed = args.seed
    n = args.n
    status = EXIT_OK
    config = {"conjecture": kind, "seed": seed}

    if kind in ("pointwise-z1", "pointwise-z0", "t-equals-n"):
        if n is None:
            raise InputError("--n is required")
        ts = [n] if kind == "t-equals-n" else _t_range(args, n)
        for t in ts:
            check_range(n, t, args.unsafe_range)
        ks = None if args.k is None else [args.k]
        branch = "z0" if kind == "pointwise-z0" else "z1"
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = scan_pointwise(
                ts, n, ks, region=args.region, trials=args.trials, seed=seed,
                branch=branch, p_real=args.p_real, log_path=args.log, mapper=pool.map,
            )
        result = {
            "reports": [rep.to_json() for rep in reports.values()],
            "max_abs_q": max(rep.max_abs_q for rep in reports.values()),
            "counterexamples": sum(len(rep.counterexamples) for rep in reports.values()),
        }
        if result["counterexamples"]:
            status = EXIT_COUNTEREXAMPLE
        config.update(n=n, t=ts, k=args.k, region=args.region, trials=args.trials, p_real=args.p_real)

    elif kind == "special-np1":
        if n is None:
            raise InputError("--n is required")
        ks = [args.k] if args.k is not None else [k for k in range(n) if (n - k) % 2 == 0]
        reps = [scan_special_case_np1(n, k, args.trials, seed, args.region) for k in ks]
        result = {"reports": [rep.to_json() for rep in reps], "all_ok": all(rep.all_ok for rep in reps)}
        # this case is proved, so a failure means a bug
        if not result["all_ok"]:
            status = EXIT_CONSISTENCY
        config.update(n=n, k=ks, trials=args.trials, region=args.region)

    elif kind in ("kallioniemi", "uniform"):
        if args.nodes:
            nodes = np.array(_complexes(args.nodes))
        else:
            if n is None:
                raise InputError("give --nodes or --n")
            nodes = sample_self_conjugate(n, args.region, np.random.default_rng(seed), args.p_real).array()
        n = nodes.size
        k = 0 if args.k is None else args.k
        if kind == "kallioniemi":
            est = kallioniemi_estimate(nodes, k, resolution=args.resolution, m_max=args.t_max)
            if args.format == "csv":
                buf = io.StringIO()
                est.write_csv(buf)
                _emit(buf.getvalue(), args.output)
                return status
            result = est.to_json()
        else:
            t_max = 40 if args.t_max is None else args.t_max
            check_range(n, t_max, args.unsafe_range)
            res = scan_uniform(nodes, k, t_max, resolution=args.resolution)
            result = dict(res.to_json(), exceeded=bool(res.sup_over_t > res.rhs * (1 + EXCEEDANCE_TOL)))
            if result["exceeded"]:
                status = EXIT_COUNTEREXAMPLE
                if args.log:
                    record = {"kind": "uniform", "n": n, "k": k, "t_max": t_max, "seed": seed,
                              "nodes": _jsonable(nodes), "sup_over_t": res.sup_over_t, "rhs": res.rhs}
                    with open(args.log, "a") as fh:
                        fh.write(json.dumps(record, sort_keys=True) + "\n")
        config.update(nodes=nodes, k=k, t_max=args.t_max, resolution=args.resolution)
    else:  # argparse restricts the choices
        raise InputError(f"unknown conjecture {kind!r}")

    if args.format == "csv":
        raise InputError("csv output is only available for trajectories and kallioniemi tables")
    _emit_json(envelope("scan", config, result), args.output)
    return status


def _selftest_checks() -> list[tuple[str, bool]]:
    from .amplitude import interp_coeffs
    from .conjectures import q_eval
    from .symfunc import Hook, Partition, schur_hook_ones, schur_via_kostka

    checks = [
        ("M_3 at r=w=(1,1) is 5", abs(hook_functional([1, 1], [1, 1], 3) - 5) < 1e-12),
        ("M_2 at r=w=(1,1) is 3", abs(hook_functional([1, 1], [1, 1], 2) - 3) < 1e-12),
        ("M_5 at r=0.5, n=1 is 1/32", abs(hook_functional([0.5], [1], 5) - 0.03125) < 1e-15),
    ]
    roots = np.array([0.3, -0.5j, 0.2 + 0.6j])
    psis = [interp_coeffs(roots, 9, m).psi for m in ("vandermonde", "recurrence", "schur")]
    dev = max(np.abs(a - b).max() for a in psis for b in psis) / np.abs(psis[0]).max()
    checks.append(("psi routes agree", dev < 1e-10))
    hc = all(
        schur_hook_ones(h, 4) == round(schur_via_kostka(Partition(h.partition), np.ones(4)).real)
        for h in (Hook(2, 1), Hook(0, 3), Hook(3, 0), Hook(1, 2))
    )
    checks.append(("hook-content matches tableau count", hc))
    checks.append(("Q = 1 at t = n", abs(q_eval(4, 4, 1, [1.5, 1.5, 1 + 0.5j, 1 - 0.5j]) - 1) < 1e-12))
    checks.append(("Q(3,2,0 | 1,1) = 1/3", abs(q_eval(3, 2, 0, [1, 1]) - 1 / 3) < 1e-14))
    return checks


def cmd_selftest(args) -> int:
    checks = _selftest_checks()
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_CONSISTENCY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--t-max", type=int)
    common.add_argument("--radii", help="comma separated, e.g. 1,0.5")
    common.add_argument("--weights", help="comma separated initial-value bounds")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--output", "-o")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--unsafe-range", action="store_true", help="allow n > 16 or t > 64")

    parser = argparse.ArgumentParser(prog="hookamp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hookamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("compute", parents=[common], help="worst-case amplitude and extremal data")

    p = sub.add_parser("verify", parents=[common], help="brute-force check of the closed form")
    p.add_argument("--phase-grid", type=int, default=64)
    p.add_argument("--radial-grid", type=int, default=2)

    p = sub.add_parser("reinhardt", parents=[common], help="vertex method on a domain file")
    p.add_argument("--domain", help="JSON with n, t, vertices, init_oracle")

    p = sub.add_parser("scan", parents=[common], help="conjecture falsification scans")
    p.add_argument("--conjecture", choices=CONJECTURES, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--nodes", help="comma separated complex nodes, e.g. 0.5j,-0.5j")
    p.add_argument("--region", choices=REGIONS, default="unit_disc")
    p.add_argument("--p-real", type=float, default=0.2)
    p.add_argument("--resolution", type=int, default=2001)
    p.add_argument("--log", help="append counterexample records (NDJSON) here")

    sub.add_parser("selftest", parents=[common], help="quick internal consistency checks")
    return parser


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "reinhardt": cmd_reinhardt,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.seed = _resolve_seed(args)
        if args.threads is not None and args.threads < 1:
            raise InputError("--threads must be at least 1")
        return COMMANDS[args.command](args)
    except ConsistencyError as exc:
        print(f"hookamp: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (InputError, RangeError, OracleCapError, ValueError, OSError, KeyError) as exc:
        print(f"hookamp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
