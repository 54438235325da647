"""Command-line entry point: ``nomaq <subcommand> [flags]``.

Exit codes: 0 success, 2 invalid parameters or input, 1 internal error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import nonmarkov as nm
from .channel import ChannelParams, apply_channel, survival_p_tau
from .coherence import coherence, trace_coherence
from .optics import BenchConfig, measure_tomography, run_bench, theta_from_p
from .qubit import PLUS, BlochVector, from_bloch
from .tomography import parse_records, reconstruct


class UsageError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return "" if x is None else str(x)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _params(args) -> ChannelParams:
    return ChannelParams(args.alpha, args.gamma_rate)


def default_revivals(alpha: float) -> int:
    """Revivals in the default window: 3 in the strong regime, else 5."""
    return 3 if alpha >= 100 else 5


def resolve_window(args, params: ChannelParams) -> float:
    """tau_max from --tau-max, --gamma-t-max or the regime default."""
    if args.tau_max is not None:
        if not args.tau_max > 0:
            raise UsageError("--tau-max must be positive")
        return args.tau_max
    if getattr(args, "gamma_t_max", None) is not None:
        if not args.gamma_t_max > 0:
            raise UsageError("--gamma-t-max must be positive")
        return params.tau_from_gamma_t(args.gamma_t_max)
    if params.alpha > 1:
        k = args.revivals if args.revivals is not None else default_revivals(params.alpha)
        return nm.complete_window(params, k)
    return nm.MARKOV_WINDOW_TAU


def parse_state(text: str) -> BlochVector:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--state expects x,y,z, got {text!r}") from None
    if len(parts) != 3:
        raise UsageError(f"--state expects three components, got {text!r}")
    return BlochVector(*parts)


def parse_mode(text: str, revivals: int | None) -> tuple[str, int | None]:
    mode, _, k = text.partition(":")
    if mode not in ("analytic", "partial", "numeric"):
        raise UsageError(f"unknown mode {text!r}")
    if k:
        try:
            revivals = int(k)
        except ValueError:
            raise UsageError(f"bad revival count in {text!r}") from None
    return mode, revivals


def _check_steps(steps: int) -> None:
    if steps < 2:
        raise UsageError(f"--steps must be >= 2, got {steps}")


def cmd_pt(args) -> str:
    params = _params(args)
    tau_max = resolve_window(args, params)
    _check_steps(args.steps)
    tau = np.linspace(0.0, tau_max, args.steps + 1)
    p = survival_p_tau(params.alpha, tau)
    gt = params.gamma_t(tau)
    if args.format == "json":
        return json.dumps({"gamma_t": gt.tolist(), "Gamma_t": tau.tolist(), "p": p.tolist()}) + "\n"
    return _csv(("gamma_t", "Gamma_t", "p"), zip(gt.tolist(), tau.tolist(), p.tolist()))


def cmd_coherence(args) -> str:
    params = _params(args)
    rho0 = from_bloch(parse_state(args.state))
    tau_max = resolve_window(args, params)
    _check_steps(args.steps)
    tr = trace_coherence(params, rho0, tau_max, args.steps)
    if args.format == "json":
        return json.dumps({"gamma_t": tr.gamma_t.tolist(), "Gamma_t": tr.tau.tolist(),
                           "coherence": tr.c.tolist(), "initial_state": rho0.to_dict()}) + "\n"
    return tr.to_csv()


def cmd_nc(args) -> str:
    mode, k = parse_mode(args.mode, args.revivals)
    params = _params(args)
    if mode == "analytic":
        res = nm.nc_analytic(args.alpha)
    elif params.alpha <= 1:
        raise nm.MarkovianRegimeError(params.alpha)
    elif mode == "partial":
        res = nm.nc_partial(args.alpha, k if k is not None else default_revivals(args.alpha))
    else:
        if args.revivals is None and k is not None:
            args.revivals = k
        tau_max = resolve_window(args, params)
        steps = args.steps if args.steps is not None else nm.default_steps(params, tau_max)
        if args.maximize:
            res = nm.nc_maximize(params, tau_max, steps, args.bloch_grid)
        else:
            rho0 = from_bloch(parse_state(args.state))
            res = nm.nc_numeric(params, rho0, tau_max, steps)
    d = res.to_dict()
    if args.format == "csv":
        return _csv(tuple(d), [tuple(d.values())])
    return json.dumps(d) + "\n"


def sweep_alphas(lo: float, hi: float, points: int, scale: str) -> np.ndarray:
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0:
        raise UsageError("--alpha-min must be >= 0")
    if hi < lo:
        raise UsageError("--alpha-max must be >= --alpha-min")
    if points < 1:
        raise UsageError("--points must be >= 1")
    if points == 1:
        return np.array([lo])
    if scale == "log":
        if lo <= 0:
            raise UsageError("log scale needs --alpha-min > 0")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def cmd_sweep(args) -> str:
    if args.alpha is not None:
        alphas = np.array([args.alpha])
    else:
        alphas = sweep_alphas(args.alpha_min, args.alpha_max, args.points, args.scale)
    if args.revivals is not None and args.revivals < 1:
        raise UsageError("--revivals must be >= 1")
    rows = nm.sweep(alphas.tolist(), args.revivals or 5)
    if args.format == "json":
        return json.dumps([r.__dict__ for r in rows]) + "\n"
    return nm.SWEEP_HEADER + "\n" + "".join(r.csv() + "\n" for r in rows)


def _row_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def run_experiment(params: ChannelParams, tau_max: float, n_times: int, visibility: float,
                   sigma: float, seed: int):
    """Virtual experiment over ``n_times`` uniform samples of tau in [0, tau_max]."""
    if n_times < 2:
        raise UsageError("--n-times must be >= 2")
    tau = np.linspace(0.0, tau_max, n_times)
    p = survival_p_tau(params.alpha, tau)
    rows = []
    for i, (t, pk) in enumerate(zip(tau, p)):
        cfg = BenchConfig(theta_from_p(pk), 0.0, visibility, sigma, _row_seed(seed, i))
        rec = measure_tomography(run_bench(cfg), cfg)
        c_rec = reconstruct(rec).coherence
        c_exact = coherence(apply_channel(PLUS, pk))
        rows.append((float(params.gamma_t(t)), float(t), cfg.theta_deg, c_rec, c_exact))
    c_rec = [r[3] for r in rows]
    c_ex = [r[4] for r in rows]
    report = {
        "alpha": params.alpha,
        "n_times": n_times,
        "tau_max": tau_max,
        "gamma_t_max": float(params.gamma_t(tau_max)),
        "visibility": visibility,
        "sigma": sigma,
        "seed": seed,
        "revivals_detected": nm.count_revivals(c_rec),
        "revivals_exact": nm.count_revivals(c_ex),
        "nc_numeric": nm.positive_increments(c_rec),
        "nc_exact_trace": nm.positive_increments(c_ex),
    }
    return rows, report


EXPERIMENT_HEADER = ("gamma_t", "Gamma_t", "theta_deg", "C_reconstructed", "C_exact")


def cmd_experiment(args) -> str:
    params = _params(args)
    tau_max = resolve_window(args, params)
    if not (0 <= args.visibility <= 1):
        raise UsageError("--visibility must lie in [0, 1]")
    if not (math.isfinite(args.sigma) and args.sigma >= 0):
        raise UsageError("--sigma must be >= 0")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    rows, report = run_experiment(params, tau_max, args.n_times, args.visibility,
                                  args.sigma, args.seed)
    if args.format == "json":
        return json.dumps({"rows": [dict(zip(EXPERIMENT_HEADER, r)) for r in rows],
                           "report": report}) + "\n"
    text = json.dumps(report)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stderr.write(text + "\n")
    return _csv(EXPERIMENT_HEADER, rows)


def cmd_tomo(args) -> str:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
    results = [reconstruct(r).to_dict() for r in parse_records(text)]
    return json.dumps(results[0] if len(results) == 1 else results) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default json for nc, csv otherwise)")

    channel = argparse.ArgumentParser(add_help=False)
    channel.add_argument("--alpha", type=float, required=True, help="alpha = 2 gamma / Gamma")
    channel.add_argument("--gamma-rate", type=float, default=1.0, help="Gamma (time scale)")

    window = argparse.ArgumentParser(add_help=False)
    window.add_argument("--tau-max", type=float, default=None, help="window end in Gamma*t")
    window.add_argument("--gamma-t-max", type=float, default=None, help="window end in gamma*t")
    window.add_argument("--revivals", type=int, default=None,
                        help="window closing after this many revivals (alpha > 1)")

    p = argparse.ArgumentParser(prog="nomaq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pt", parents=[common, channel, window], help="survival probability curve")
    s.add_argument("--steps", type=int, default=2000)
    s.set_defaults(func=cmd_pt)

    s = sub.add_parser("coherence", parents=[common, channel, window], help="coherence trace")
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--state", default="1,0,0", help="initial Bloch vector x,y,z")
    s.set_defaults(func=cmd_coherence)

    s = sub.add_parser("nc", parents=[common, channel, window], help="non-Markovianity N_C")
    s.add_argument("--mode", default="analytic", help="analytic | partial[:k] | numeric")
    s.add_argument("--steps", type=int, default=None)
    s.add_argument("--state", default="1,0,0")
    s.add_argument("--maximize", action="store_true", help="maximize over initial states")
    s.add_argument("--bloch-grid", type=int, default=8)
    s.set_defaults(func=cmd_nc)

    s = sub.add_parser("sweep", parents=[common], help="N_C over a range of alpha")
    s.add_argument("--alpha", type=float, default=None, help="single alpha instead of a range")
    s.add_argument("--alpha-min", type=float, default=0.0)
    s.add_argument("--alpha-max", type=float, default=2.0)
    s.add_argument("--points", type=int, default=41)
    s.add_argument("--scale", choices=("linear", "log"), default="linear")
    s.add_argument("--revivals", type=int, default=None,
                   help="revivals in the numeric window (default 5)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("experiment", parents=[common, channel, window],
                       help="virtual all-optical experiment")
    s.add_argument("--n-times", type=int, default=121)
    s.add_argument("--visibility", type=float, default=0.98)
    s.add_argument("--sigma", type=float, default=0.015)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report", default=None, help="report JSON path (default stderr)")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("tomo", parents=[common], help="reconstruct a tomography record")
    s.add_argument("input", help="record file (JSON or CSV), '-' for stdin")
    s.set_defaults(func=cmd_tomo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command in ("nc", "tomo") else "csv"
    try:
        text = args.func(args)
        _emit(text, args.out)
    except ValueError as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        sys.stderr.write(f"nomaq {args.command}: error: {msg}\n")
        return 2
    except Exception as e:  # noqa: BLE001
        sys.stderr.write(f"nomaq {args.command}: internal error: {type(e).__name__}: {e}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
