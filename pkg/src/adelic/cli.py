"""Command-line interface: exact arithmetic queries, kernel evaluation,
path simulation, solvers, and verification suites.

Conventions
-----------
* Exact rational results (phi, ppow, norm, volume, ft) print as exact
  fractions / JSON with error bound 0.
* Float results print as `value bound` where bound is the achieved error
  bound of the value.
* A JSON metadata sidecar (resolved config, seed, error bounds, wall time)
  is written next to --output as <output>.meta.json, or to --meta. Wall
  time lives only in the sidecar so primary outputs stay byte-stable.
* A JSON config file (--config) supplies defaults; explicit flags win.
* Exit codes: 0 ok, 2 usage error, 3 tolerance failure, 4 indeterminate
  cancellation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .adele import distance, haar_volume, norm, parse_point
from .adele import ball as ball_region
from .adele import sphere as sphere_region
from .cauchy import (
    EvaluableRadial,
    ForcingGrid,
    RealGridFunction,
    SymbolSpec,
    solve_adelic,
    solve_homogeneous,
    solve_nonhomogeneous,
)
from .errors import IndeterminateCancellation, ToleranceError
from .heatkernel import (
    KernelParams,
    normalization,
    tail_mass_bound,
    upper_tail_mass,
    z_adelic,
    z_finite,
)
from .markov import Truncation, sample_path, transition_prob_ball
from .primepow import next_pp, phi, pp_range, prev_pp
from .radial import RadialStep


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved parameters of one CLI run; echoed into the sidecar."""

    command: str
    params: dict = field(default_factory=dict)
    output: Optional[str] = None
    meta: Optional[str] = None
    seed: Optional[int] = None
    threads: int = 1

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "output": self.output,
            "seed": self.seed,
            "threads": self.threads,
        }


@dataclass
class RunResult:
    stdout: str = ""
    files: dict = field(default_factory=dict)  # path -> text
    error_bounds: dict = field(default_factory=dict)
    extra_meta: dict = field(default_factory=dict)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


# --------------------------------------------------------------------------
# parameter resolution


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r} ({exc})")


def _resolve(args, spec) -> dict:
    """Merge flag values over config-file values over defaults.

    spec: list of (name, converter, default); default None means required.
    """
    config = _load_config(getattr(args, "config", None))
    out = {}
    for name, conv, default in spec:
        flag = getattr(args, name.replace("-", "_"), None)
        if flag is not None:
            raw = flag
        elif name in config:
            raw = config[name]
        else:
            raw = default
        if raw is None:
            raise UsageError(f"missing required parameter --{name}")
        if raw is not _UNSET:
            out[name] = conv(raw) if conv else raw
        else:
            out[name] = None
    return out


_UNSET = object()  # optional parameter with no default value


def _float(x) -> float:
    try:
        return float(x)
    except (TypeError, ValueError):
        raise UsageError(f"not a number: {x!r}")


def _int(x) -> int:
    try:
        return int(x)
    except (TypeError, ValueError):
        raise UsageError(f"not an integer: {x!r}")


def _opt(conv):
    def inner(x):
        return None if x is None else conv(x)
    return inner


def _kernel_params(p) -> KernelParams:
    return KernelParams(t=p["t"], alpha=p["alpha"], beta=p.get("beta"))


def _read_step(path: Optional[str], inline: Optional[str]) -> RadialStep:
    if inline is not None:
        text = inline
    elif path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}")
    else:
        text = sys.stdin.read()
    try:
        return RadialStep.from_json(text)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad radial step JSON: {exc}")


def _read_forcing(path: str) -> ForcingGrid:
    try:
        with open(path) as fh:
            data = json.load(fh)
        times = tuple(float(t) for t in data["times"])
        steps = tuple(RadialStep.from_dict(d) for d in data["steps"])
        interp = data.get("interpolation", "linear")
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad forcing grid {path}: {exc}")
    return ForcingGrid(times=times, steps=steps, interpolation=interp)


def _read_real_grid(path: str) -> RealGridFunction:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    if not lines or lines[0].split(",")[:2] != ["x", "value"]:
        raise UsageError(f"{path} must start with an 'x,value' header")
    xs, vals = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise UsageError(f"bad grid row {ln!r}")
        xs.append(float(parts[0]))
        vals.append(float(parts[1]))
    if len(xs) < 2:
        raise UsageError("real grid needs at least two samples")
    dx = (xs[-1] - xs[0]) / (len(xs) - 1)
    if dx <= 0:
        raise UsageError("grid x column must increase")
    for i, x in enumerate(xs):
        if abs(x - (xs[0] + i * dx)) > 1e-9 * max(1.0, abs(x)):
            raise UsageError("grid spacing is not uniform")
    return RealGridFunction(x0=xs[0], dx=dx, values=tuple(vals))


def _result_json(result) -> tuple[str, float]:
    """Serialize a solver result; returns (json text, error bound)."""
    if isinstance(result, RadialStep):
        payload = {"exact": True, "error_bound": 0.0}
        payload.update(result.to_dict())
        return json.dumps(payload, sort_keys=True), 0.0
    assert isinstance(result, EvaluableRadial)
    payload = {
        "exact": False,
        "error_bound": result.error_bound,
        "tol": result.tol,
        "pieces": [
            {
                "scale": p.scale,
                "ball_radius": str(p.rho),
                "kind": p.kind,
                "exponent": p.exponent,
                "time": p.time,
            }
            for p in result.pieces
        ],
    }
    payload.update(result.step.to_dict())
    return json.dumps(payload, sort_keys=True), result.error_bound


# --------------------------------------------------------------------------
# handlers: each returns (RunConfig, RunResult)


def _cmd_phi(args):
    value = phi(_fraction(args.x))
    cfg = RunConfig("phi", {"x": _fraction(args.x)}, args.output, args.meta)
    return cfg, RunResult(stdout=f"{value}\n", error_bounds={"value": 0.0})


def _cmd_ppow(args):
    cfg = RunConfig(f"ppow {args.action}", {}, args.output, args.meta)
    if args.action == "range":
        lo, hi = _fraction(args.x), _fraction(args.y)
        cfg.params = {"lo": lo, "hi": hi}
        lines = [str(q.value) for q in pp_range(lo, hi)]
        return cfg, RunResult(
            stdout="".join(f"{ln}\n" for ln in lines),
            error_bounds={"values": 0.0},
        )
    x = _fraction(args.x)
    cfg.params = {"x": x}
    fn = next_pp if args.action == "next" else prev_pp
    return cfg, RunResult(
        stdout=f"{fn(x).value}\n", error_bounds={"value": 0.0}
    )


def _cmd_norm(args):
    x = parse_point(args.point)
    if args.point2 is not None:
        value = distance(x, parse_point(args.point2))
        cfg = RunConfig(
            "norm", {"point": args.point, "point2": args.point2},
            args.output, args.meta,
        )
    else:
        value = norm(x)
        cfg = RunConfig("norm", {"point": args.point}, args.output, args.meta)
    return cfg, RunResult(stdout=f"{value}\n", error_bounds={"value": 0.0})


def _cmd_volume(args):
    radius = _fraction(args.radius)
    region = (
        ball_region(radius) if args.kind == "ball" else sphere_region(radius)
    )
    value = haar_volume(region)
    cfg = RunConfig(
        "volume", {"kind": args.kind, "radius": radius},
        args.output, args.meta,
    )
    return cfg, RunResult(stdout=f"{value}\n", error_bounds={"value": 0.0})


def _cmd_ft(args):
    step = _read_step(args.input, args.json_text)
    out = step.ft().to_json()
    cfg = RunConfig("ft", {"input": args.input}, args.output, args.meta)
    return cfg, RunResult(stdout=out + "\n", error_bounds={"coeffs": 0.0})


def _cmd_kernel(args):
    spec = [
        ("t", _float, None),
        ("alpha", _float, None),
        ("beta", _opt(_float), _UNSET),
        ("tol", _float, 1e-6 if args.action == "normalize" else 1e-10),
    ]
    if args.action == "eval":
        spec += [("radius", _fraction, None), ("x", _opt(_float), _UNSET)]
    if args.action == "tail":
        spec += [("epsilon", _fraction, None)]
    p = _resolve(args, spec)
    params = _kernel_params(p)
    cfg = RunConfig(f"kernel {args.action}", p, args.output, args.meta)
    if args.action == "eval":
        if p["x"] is not None:
            value = z_adelic(p["x"], p["radius"], params, tol=p["tol"])
        else:
            value = z_finite(p["radius"], params, tol=p["tol"])
        bound = abs(value) * p["tol"]
        return cfg, RunResult(
            stdout=f"{value:.17g} {bound:.3e}\n",
            error_bounds={"value": bound},
        )
    if args.action == "normalize":
        value = normalization(params, tol=p["tol"])
        achieved = abs(value - 1.0)
        if achieved > p["tol"]:
            raise ToleranceError(
                f"normalization defect {achieved:.2e} exceeds tol {p['tol']:.2e}"
            )
        return cfg, RunResult(
            stdout=f"{value:.17g} {achieved:.3e}\n",
            error_bounds={"value": achieved},
        )
    mass = upper_tail_mass(p["epsilon"], params)
    bound = tail_mass_bound(p["epsilon"], params)
    return cfg, RunResult(
        stdout=f"{mass:.17g} {bound:.17g}\n",
        error_bounds={"mass": mass * 1e-12, "a_priori_bound": 0.0},
    )


def _cmd_simulate(args):
    spec = [
        ("t-step", _float, None),
        ("steps", _int, None),
        ("alpha", _float, None),
        ("beta", _opt(_float), _UNSET),
        ("seed", _int, 0),
        ("path-index", _int, 0),
        ("r-min", _fraction, Truncation().r_min),
        ("r-max", _fraction, Truncation().r_max),
        ("prime-cutoff", _int, Truncation().prime_cutoff),
        ("depth", _int, Truncation().depth),
    ]
    p = _resolve(args, spec)
    params = KernelParams(t=p["t-step"], alpha=p["alpha"], beta=p["beta"])
    trunc = Truncation(
        r_min=p["r-min"], r_max=p["r-max"],
        prime_cutoff=p["prime-cutoff"], depth=p["depth"],
    )
    path = sample_path(
        params, p["steps"], p["t-step"], trunc=trunc,
        seed=p["seed"], path_index=p["path-index"],
    )
    cfg = RunConfig("simulate", p, args.output, args.meta, seed=p["seed"])
    csv_text = path.to_csv()
    result = RunResult(
        error_bounds={"radii": 0.0},
        extra_meta={
            "tail_resamples": path.tail_resamples,
            "cancel_resamples": path.cancel_resamples,
        },
    )
    if args.output:
        result.files[args.output] = csv_text
    else:
        result.stdout = csv_text
    return cfg, result


def _cmd_transition(args):
    spec = [
        ("t", _float, None),
        ("alpha", _float, None),
        ("beta", _opt(_float), _UNSET),
        ("eps", _fraction, None),
        ("x", str, "0"),
        ("center", str, "0"),
    ]
    p = _resolve(args, spec)
    params = _kernel_params(p)
    value = transition_prob_ball(
        params, parse_point(p["x"]), parse_point(p["center"]), p["eps"]
    )
    bound = abs(value) * 1e-11 + 1e-15  # certified series truncation scale
    cfg = RunConfig("transition", p, args.output, args.meta)
    return cfg, RunResult(
        stdout=f"{value:.17g} {bound:.3e}\n", error_bounds={"value": bound}
    )


def _cmd_solve(args):
    spec = [
        ("t", _float, None),
        ("alpha", _float, None),
        ("beta", _opt(_float), _UNSET),
        ("tol", _float, 1e-8 if args.action == "adelic" else 1e-10),
    ]
    if args.action == "duhamel":
        spec += [("quadrature", str, "Simpson"), ("steps", _int, 64)]
    p = _resolve(args, spec)
    symbol = SymbolSpec(alpha=p["alpha"], beta=p["beta"])
    cfg = RunConfig(f"solve {args.action}", p, args.output, args.meta)

    if args.action == "homogeneous":
        u0 = _read_step(args.input, None)
        result = solve_homogeneous(u0, p["t"], symbol, tol=p["tol"])
        text, bound = _result_json(result)
        out = RunResult(error_bounds={"solution": bound})
    elif args.action == "duhamel":
        u0 = _read_step(args.u0, None)
        forcing = _read_forcing(args.forcing)
        result = solve_nonhomogeneous(
            u0, forcing, p["t"], symbol,
            quadrature=p["quadrature"], tol=p["tol"], steps=p["steps"],
        )
        text, bound = _result_json(result)
        out = RunResult(error_bounds={"solution": bound})
    else:
        if symbol.beta is None:
            raise UsageError("solve adelic requires --beta")
        if not args.output:
            raise UsageError("solve adelic requires --output for the grid")
        grid = _read_real_grid(args.real)
        fin = _read_step(args.fin, None)
        real_out, fin_out = solve_adelic(grid, fin, p["t"], symbol, tol=p["tol"])
        fin_text, fin_bound = _result_json(fin_out)
        out = RunResult(
            error_bounds={"real_grid": p["tol"], "finite": fin_bound}
        )
        out.files[args.output] = real_out.to_csv()
        fin_path = args.finite_output or args.output + ".finite.json"
        out.files[fin_path] = fin_text + "\n"
        return cfg, out

    if args.output:
        out.files[args.output] = text + "\n"
    else:
        out.stdout = text + "\n"
    return cfg, out


def _cmd_verify(args):
    from .checks import run_suite

    results = run_suite(args.suite)
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(
        f"{sum(r.passed for r in results)}/{len(results)} checks passed"
    )
    cfg = RunConfig("verify", {"suite": args.suite}, args.output, args.meta)
    result = RunResult(
        stdout="".join(f"{ln}\n" for ln in lines),
        extra_meta={
            "elapsed": {r.name: round(r.elapsed, 3) for r in results}
        },
    )
    return cfg, result, (0 if ok else 1)


# --------------------------------------------------------------------------
# parser


def _add_common(sp):
    sp.add_argument("--config", help="JSON file with default parameters")
    sp.add_argument("--output", help="write primary output to this file")
    sp.add_argument("--meta", help="write the JSON metadata sidecar here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adelic",
        description="analysis on the adeles: exact arithmetic, kernels, "
        "simulation, solvers",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("phi", help="exact ball volume function")
    sp.add_argument("x")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_phi)

    sp = sub.add_parser("ppow", help="prime-power order queries")
    sp.add_argument("action", choices=["next", "prev", "range"])
    sp.add_argument("x")
    sp.add_argument("y", nargs="?")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_ppow)

    sp = sub.add_parser("norm", help="adelic norm (or distance of two points)")
    sp.add_argument("point")
    sp.add_argument("point2", nargs="?")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_norm)

    sp = sub.add_parser("volume", help="exact Haar volume of a ball or sphere")
    sp.add_argument("kind", choices=["ball", "sphere"])
    sp.add_argument("radius")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_volume)

    sp = sub.add_parser("ft", help="exact radial Fourier transform")
    sp.add_argument("--input", help="radial step JSON file (default stdin)")
    sp.add_argument("--json", dest="json_text", help="inline step JSON")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_ft)

    sp = sub.add_parser("kernel", help="heat kernel evaluation and tails")
    sp.add_argument("action", choices=["eval", "normalize", "tail"])
    sp.add_argument("--radius", help="finite norm to evaluate at")
    sp.add_argument("--x", help="real coordinate (eval on the full adeles)")
    sp.add_argument("--epsilon", help="ball radius for the tail")
    sp.add_argument("--t", help="time")
    sp.add_argument("--alpha", help="finite symbol exponent")
    sp.add_argument("--beta", help="real symbol exponent")
    sp.add_argument("--tol", help="tolerance")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_kernel)

    sp = sub.add_parser("simulate", help="sample one jump-process path, CSV")
    sp.add_argument("--t-step", help="time step of each increment")
    sp.add_argument("--steps", help="number of increments")
    sp.add_argument("--alpha", help="finite symbol exponent")
    sp.add_argument("--beta", help="real symbol exponent (adds a column)")
    sp.add_argument("--seed", help="master seed (default 0)")
    sp.add_argument("--path-index", help="path stream index (default 0)")
    sp.add_argument("--r-min", help="truncation window lower radius")
    sp.add_argument("--r-max", help="truncation window upper radius")
    sp.add_argument("--prime-cutoff", help="stored-prime cutoff")
    sp.add_argument("--depth", help="digits per stored component")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_simulate)

    sp = sub.add_parser("transition", help="P(t, x, ball of radius eps)")
    sp.add_argument("--t", help="time")
    sp.add_argument("--alpha", help="finite symbol exponent")
    sp.add_argument("--beta", help="unused on the finite factor")
    sp.add_argument("--eps", help="ball radius")
    sp.add_argument("--x", help="start point (default 0)")
    sp.add_argument("--center", help="ball center (default 0)")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_transition)

    sp = sub.add_parser("solve", help="parabolic solvers")
    sp.add_argument("action", choices=["homogeneous", "duhamel", "adelic"])
    sp.add_argument("--t", help="evolution time")
    sp.add_argument("--alpha", help="finite symbol exponent")
    sp.add_argument("--beta", help="real symbol exponent")
    sp.add_argument("--tol", help="tolerance")
    sp.add_argument("--input", help="initial step JSON (homogeneous)")
    sp.add_argument("--u0", help="initial step JSON (duhamel)")
    sp.add_argument("--forcing", help="forcing grid JSON (duhamel)")
    sp.add_argument("--quadrature", help="Trapezoid or Simpson")
    sp.add_argument("--steps", help="quadrature step count")
    sp.add_argument("--real", help="real grid CSV (adelic)")
    sp.add_argument("--fin", help="finite factor step JSON (adelic)")
    sp.add_argument("--finite-output", help="finite factor output path")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_solve)

    sp = sub.add_parser("verify", help="run an acceptance/invariant suite")
    sp.add_argument("suite")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_verify)

    return parser


# --------------------------------------------------------------------------
# driver


def _write_sidecar(cfg: RunConfig, result: RunResult, wall: float):
    path = cfg.meta
    if path is None and cfg.output:
        path = cfg.output + ".meta.json"
    if path is None:
        return
    meta = {
        "config": cfg.as_dict(),
        "error_bounds": result.error_bounds,
        "wall_time_s": wall,
        "version": __version__,
    }
    meta.update(result.extra_meta)
    with open(path, "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    begin = time.perf_counter()
    code = 0
    try:
        outcome = args.handler(args)
        if len(outcome) == 3:
            cfg, result, code = outcome
        else:
            cfg, result = outcome
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except ToleranceError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 3
    except OverflowError as exc:
        print(f"tolerance failure (overflow): {exc}", file=sys.stderr)
        return 3
    except IndeterminateCancellation as exc:
        print(f"indeterminate cancellation: {exc}", file=sys.stderr)
        return 4
    cfg.threads = _default_threads()
    for path, text in result.files.items():
        with open(path, "w") as fh:
            fh.write(text)
    if result.stdout:
        sys.stdout.write(result.stdout)
    _write_sidecar(cfg, result, time.perf_counter() - begin)
    return code


def _default_threads() -> int:
    raw = os.environ.get("ADELIC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
