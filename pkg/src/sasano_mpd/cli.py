"""Command-line entry point: ``sasano-mpd {check-poisson, roundtrip, laplace-chain}``.

Reports are JSON with sorted keys; trajectories are CSV with 17 significant
digits. Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage.
"""
import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from .matkit.field import to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("check-poisson", "roundtrip", "laplace-chain")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 2
    seed: int = 0
    t_start: float = 0.30
    t_end: float = 0.40
    samples: int = 11
    mode: str = "rational"
    trials: int = 50
    points: int = 20
    tolerance: float = 1e-6
    bracket_tolerance: float = 1e-9
    point: list = None
    output: str = None
    report: str = None
    jobs: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if self.mode not in ("float", "rational"):
            raise UsageError("mode must be 'float' or 'rational'")
        if self.trials < 1 or self.points < 1 or self.samples < 1 or self.jobs < 1:
            raise UsageError("trials, points, samples and jobs must be positive")
        if self.command == "laplace-chain" and self.n != 2:
            raise UsageError("the Laplace chain is defined for n = 2 only")
        if self.command == "roundtrip":
            if self.t_end < self.t_start:
                raise UsageError("t_end must not be smaller than t_start")
            for c in (0.0, 1.0):
                if self.t_start - 0.05 < c < self.t_end + 0.05:
                    raise UsageError(f"interval [{self.t_start}, {self.t_end}] must stay 0.05 away "
                                     f"from {c:g}")
        if self.point is not None and len(self.point) != 5:
            raise UsageError("--point takes q1,q2,p1,p2,s")
        return self


def trial_rng(seed, index):
    """Independent PCG64 stream per trial, so results do not depend on scheduling."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def jsonify(obj):
    """Recursively convert report values; Fractions become 'p/q' strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonify(v) for v in obj]
    return to_jsonable(obj)


def _dumps(obj):
    return json.dumps(jsonify(obj), sort_keys=True, indent=2) + "\n"


def _emit_summary(cfg, summary):
    text = _dumps(summary)
    if cfg.report:
        _write(cfg.report, text)
    else:
        sys.stderr.write(text)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _map(fn, items, jobs):
    if jobs == 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# -- check-poisson ----------------------------------------------------------

def _poisson_trial(args):
    from .canonical import random_bc, verify_canonical_brackets

    n, seed, idx, mode, tol = args
    bc, t = random_bc(n, trial_rng(seed, idx))
    if mode == "float":
        res = verify_canonical_brackets(bc.to_float(), float(t), tol)
    else:
        res = verify_canonical_brackets(bc, t)
    return {
        "trial": idx,
        "t": t if mode == "rational" else float(t),
        "brackets": res["count"],
        "max_deviation": res["max_deviation"],
        "violations": [name for name, _ in res["violations"]],
    }


def cmd_check_poisson(cfg):
    rows = _map(_poisson_trial,
                [(cfg.n, cfg.seed, i, cfg.mode, cfg.bracket_tolerance) for i in range(cfg.trials)],
                cfg.jobs)
    rows.sort(key=lambda r: r["trial"])
    failed = [r["trial"] for r in rows if r["violations"]]
    report = {
        "command": "check-poisson",
        "n": cfg.n,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "trials": rows,
        "max_deviation": max(r["max_deviation"] for r in rows),
        "failed_trials": failed,
        "passed": not failed,
    }
    if cfg.mode == "float":
        report["tolerance"] = cfg.bracket_tolerance
    _write(cfg.output, _dumps(report))
    return EXIT_OK if not failed else EXIT_FAIL


# -- roundtrip --------------------------------------------------------------

def _complex_cols(prefix, n):
    return [f"{prefix}_{i}_{part}" for i in range(1, n + 1) for part in ("re", "im")]


def cmd_roundtrip(cfg):
    from .canonical import flow_equivalence, regular_flow_instance
    from .ode import IntegrationError
    from .sasano import T_CHART, PhasePoint, block_slots, hamiltonian_t, pvi_hamiltonian

    times = np.linspace(cfg.t_start, cfg.t_end, cfg.samples if cfg.t_end > cfg.t_start else 1)
    summary = {"command": "roundtrip", "n": cfg.n, "seed": cfg.seed,
               "t_start": cfg.t_start, "t_end": cfg.t_end, "tolerance": cfg.tolerance}
    try:
        F = regular_flow_instance(cfg.n, cfg.seed, cfg.t_start, cfg.t_end)
        res = flow_equivalence(F, times)
    except IntegrationError as err:
        summary.update(passed=False, error=str(err), last_good_t=err.t_last)
        _emit_summary(cfg, summary)
        return EXIT_FAIL
    n = cfg.n
    header = (["t"] + _complex_cols("lambda", n) + _complex_cols("mu", n)
              + _complex_cols("lambda_direct", n) + _complex_cols("mu_direct", n))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for t, img, direct in res["rows"]:
        vals = [t]
        for block in (img[:n], img[n:], direct[:n], direct[n:]):
            for v in block:
                vals += [v.real, v.imag]
        w.writerow(["%.17g" % (float(v) + 0.0) for v in vals])
    _write(cfg.output, buf.getvalue())
    dev = res["max_deviation"]
    summary.update(max_deviation=dev, passed=dev <= cfg.tolerance,
                   alpha=[complex(a) for a in res["alpha"].alpha])
    if n == 1:
        _, a, _ = res["rows"][0]
        y = PhasePoint(T_CHART, [a[0]], [a[1]], res["rows"][0][0])
        H = hamiltonian_t(y, res["alpha"])
        H1 = pvi_hamiltonian(a[0], a[1], block_slots(res["alpha"], 1, T_CHART),
                             res["alpha"].alpha[2], y.time)
        summary["pvi_reduction_gap"] = abs(H - H1)
    _emit_summary(cfg, summary)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


# -- laplace-chain ----------------------------------------------------------

def _rational(rng, span=9, den=7, avoid=()):
    while True:
        v = Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))
        if v not in avoid:
            return v


def _chain_point(args):
    from .laplace import ChainError
    from .laplace.sl4 import residue_eigen_report, run_chain
    from .sasano import AlphaParams, PhasePoint, S_CHART

    seed, idx, alpha, fixed = args
    rng = trial_rng(seed, idx + 1)
    if fixed is None:
        q1 = _rational(rng)
        q2 = _rational(rng, avoid=(0, 1))
        p1, p2 = _rational(rng), _rational(rng)
        s = _rational(rng, avoid=(0, 1))
    else:
        q1, q2, p1, p2, s = fixed
    row = {"point": idx, "q": [q1, q2], "p": [p1, p2], "s": s}
    try:
        out = run_chain(PhasePoint(S_CHART, [q1, q2], [p1, p2], s), AlphaParams(2, alpha))
    except ChainError as err:
        row.update(passed=False, error=str(err), failed_stage=getattr(err, "stage", None))
        return row
    except ValueError as err:
        row.update(passed=False, error=str(err), failed_stage="input")
        return row
    rep = residue_eigen_report(out)
    literal = out["checks"].pop("det(I7 + z M7_1) = (z-s)(z-s+1)")
    row.update(
        passed=True,
        checkpoints=out["stage_checks"],
        det=out["det"].coeff_list(),
        literal_det_identity=literal,
        spectral_types={k: "".join(map(str, v)) for k, v in out["spectral_types"].items()},
        charpolys={k: p.coeff_list() for k, p in rep.charpolys.items()},
        exponents={k: [[v, m] for v, m in (e or [])] for k, e in rep.exponents.items()},
        fuchs_sum=rep.fuchs_sum,
    )
    return row


def cmd_laplace_chain(cfg):
    from .sasano import random_alpha

    alpha = random_alpha(2, trial_rng(cfg.seed, 0), exact=True).alpha
    fixed = None
    if cfg.point is not None:
        fixed = [Fraction(str(v)) for v in cfg.point]
    count = 1 if fixed is not None else cfg.points
    rows = _map(_chain_point, [(cfg.seed, i, alpha, fixed) for i in range(count)], cfg.jobs)
    rows.sort(key=lambda r: r["point"])
    ok = [r for r in rows if r["passed"]]
    alpha_only = len({json.dumps(jsonify(r["charpolys"]), sort_keys=True) for r in ok}) <= 1
    report = {
        "command": "laplace-chain",
        "seed": cfg.seed,
        "alpha": list(alpha),
        "points": rows,
        "exponents_depend_only_on_alpha": alpha_only,
        "spectral_type": ok[0]["spectral_types"] if ok else None,
        "passed": len(ok) == len(rows) and alpha_only,
    }
    _write(cfg.output, _dumps(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


HANDLERS = {"check-poisson": cmd_check_poisson, "roundtrip": cmd_roundtrip,
            "laplace-chain": cmd_laplace_chain}


# -- parsing ----------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="sasano-mpd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, help="worker processes for independent trials")

    cp = sub.add_parser("check-poisson", parents=[common], help="canonical bracket suite")
    cp.add_argument("--mode", choices=("float", "rational"))
    cp.add_argument("--trials", type=int)
    cp.add_argument("--tol", dest="bracket_tolerance", type=float)

    rt = sub.add_parser("roundtrip", parents=[common], help="Schlesinger image vs direct flow")
    rt.add_argument("--t-start", type=float)
    rt.add_argument("--t-end", type=float)
    rt.add_argument("--samples", type=int)
    rt.add_argument("--tol", dest="tolerance", type=float)
    rt.add_argument("--report", help="summary JSON file (default: stderr)")

    lc = sub.add_parser("laplace-chain", parents=[common], help="so12 to sl4 reduction chain")
    lc.add_argument("--points", type=int)
    lc.add_argument("--point", type=lambda s: s.split(","), help="q1,q2,p1,p2,s (rationals)")
    return p


def build_config(argv):
    args = _parser().parse_args(argv)
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except (OSError, ValueError) as err:
            raise UsageError(f"cannot read config: {err}")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(values) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for k, v in vars(args).items():
        if k != "config" and v is not None:
            values[k] = v
    values["command"] = args.command
    try:
        cfg = RunConfig(**values)
    except TypeError as err:
        raise UsageError(str(err))
    return cfg.validate()


def main(argv=None):
    try:
        cfg = build_config(argv)
    except UsageError as err:
        sys.stderr.write(f"sasano-mpd: usage error: {err}\n")
        return EXIT_USAGE
    except SystemExit as exc:       # argparse already printed its message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return HANDLERS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
