"""Command-line surface.

Subcommands map one-to-one onto the module API:

    energies   closed-form and quadrature kinetic energies, side by side
    scaling    N-sweeps of energies/slopes/fermion ladder with fitted exponent
    propagate  Crank-Nicolson free expansion, CSV time series + JSON sidecar
    verify     oracle-equivalence suite (normalization, energies, eigenstate, bessel)
    recipe     named preset runs reproducing the headline results

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numerical
failure.  All floating-point output uses 12 significant digits and fixed
quadrature node order, so identical configurations produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import (
    DomainError,
    HyperDimension,
    NumericalError,
    PhysicalParams,
    PreconditionError,
)
from .dynamics import RadialGrid, default_time_step, fit_window, propagate_free
from .energy import CLOSED_FORM, QUADRATURE, energy_report
from .scaling import (
    energy_scaling_table,
    fermion_scaling_table,
    slope_scaling_table,
)
from .specialfn import bessel_k, bessel_k_integral
from .states import RadialState, StateFamily, make_state, u2_eigenstate_residual

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _parse_n_range(text: str) -> list[int]:
    """Parse 'start:stop[:step]' (inclusive stop) or a single integer."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            start, stop = int(parts[0]), int(parts[1])
            return list(range(start, stop + 1))
        if len(parts) == 3:
            start, stop, step = int(parts[0]), int(parts[1]), int(parts[2])
            return list(range(start, stop + 1, step))
    except ValueError:
        pass
    raise DomainError(f"cannot parse N range {text!r}; expected start:stop[:step]")


def _resolve_dimension(args: argparse.Namespace) -> HyperDimension:
    given_d = getattr(args, "D", None)
    given_n = getattr(args, "N", None)
    if (given_d is None) == (given_n is None):
        raise DomainError("exactly one of --D or --N must be given")
    if given_n is not None:
        return HyperDimension(3 * int(given_n))
    return HyperDimension(int(given_d))


def _params_from(args: argparse.Namespace) -> PhysicalParams:
    kappa = float(getattr(args, "kappa", 1.0) or 1.0)
    beta_kappa = float(getattr(args, "beta_kappa", 1.0) or 1.0)
    if kappa <= 0 or beta_kappa <= 0:
        raise DomainError("kappa and beta-kappa must be positive")
    return PhysicalParams(kappa=kappa, beta=beta_kappa / kappa)


def _state_from(args: argparse.Namespace) -> RadialState:
    if not getattr(args, "family", None):
        raise DomainError("--family is required (directly or via --config)")
    family = StateFamily(args.family)
    return RadialState(family=family, dim=_resolve_dimension(args), params=_params_from(args))


def _open_output(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _apply_config(args: argparse.Namespace, parser_actions: Sequence[argparse.Action], argv: Sequence[str]) -> None:
    """Overlay values from --config for flags not given explicitly."""
    if not getattr(args, "config", None):
        return
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {args.config!r}: {exc}") from exc
    if not isinstance(config, dict):
        raise DomainError("config file must hold a JSON object")
    explicit: set[str] = set()
    by_option = {opt: action.dest for action in parser_actions for opt in action.option_strings}
    for token in argv:
        flag = token.split("=", 1)[0]
        if flag in by_option:
            explicit.add(by_option[flag])
    known = {action.dest for action in parser_actions}
    for key, value in config.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise DomainError(f"unknown config key {key!r}")
        if dest not in explicit:
            setattr(args, dest, value)


# ---------------------------------------------------------------- energies


def _cmd_energies(args: argparse.Namespace) -> int:
    state = _state_from(args)
    closed = energy_report(state, CLOSED_FORM)
    quad = energy_report(state, QUADRATURE)

    def rel_dev(a: float, b: float) -> float:
        scale = max(abs(a), abs(b), 1e-300)
        return abs(a - b) / scale

    rows = [
        ("t_r", closed.t_r, quad.t_r),
        ("t_v", closed.t_v, quad.t_v),
        ("total", closed.total, quad.total),
    ]
    stream, should_close = _open_output(args.output)
    try:
        if args.format == "json":
            payload = {
                "config": state.to_config(),
                "epsilon": closed.epsilon,
                "units": "epsilon",
                "energies": {
                    name: {"closed_form": c, "quadrature": q, "rel_deviation": rel_dev(c, q)}
                    for name, c, q in rows
                },
            }
            json.dump(payload, stream, indent=2, sort_keys=True)
            stream.write("\n")
        else:
            stream.write("quantity,closed_form,quadrature,rel_deviation,units\n")
            for name, c, q in rows:
                stream.write(f"{name},{_fmt(c)},{_fmt(q)},{_fmt(rel_dev(c, q))},epsilon\n")
    finally:
        if should_close:
            stream.close()
    print(
        f"family={state.family.value} D={state.dim.d} total={_fmt(closed.total)} epsilon "
        f"(epsilon={_fmt(closed.epsilon)}, closed vs quadrature max rel dev "
        f"{_fmt(max(rel_dev(c, q) for _, c, q in rows))})",
        file=sys.stderr,
    )
    return EXIT_OK


# ----------------------------------------------------------------- scaling


def _run_jobs(fn: Callable, items: Iterable, jobs: int) -> list:
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _cmd_scaling(args: argparse.Namespace) -> int:
    n_values = _parse_n_range(args.N)
    params = _params_from(args)
    jobs = int(args.jobs)
    if args.quantity == "fermion":
        table = fermion_scaling_table(n_values, params, jobs=jobs)
    else:
        if not args.family:
            raise DomainError("--family is required for energy/slope scaling")
        family = StateFamily(args.family)
        if args.quantity == "energy":
            table = energy_scaling_table(family, n_values, params,
                                         component=args.component, jobs=jobs)
        else:
            table = slope_scaling_table(family, n_values, params, jobs=jobs)
    stream, should_close = _open_output(args.output)
    try:
        if args.format == "json":
            table.to_json(stream)
        else:
            table.to_csv(stream)
    finally:
        if should_close:
            stream.close()
    print(
        f"quantity={table.quantity} family={table.family.value if table.family else '-'} "
        f"fit_exponent={_fmt(table.fit_exponent)} fit_error={_fmt(table.fit_error)}",
        file=sys.stderr,
    )
    return EXIT_OK


# --------------------------------------------------------------- propagate


def _cmd_propagate(args: argparse.Namespace) -> int:
    state = _state_from(args)
    if args.r_max is not None:
        grid = RadialGrid.uniform(float(args.r_max), int(args.n_points))
    else:
        grid = RadialGrid.for_state(state, int(args.n_points))
    dt = float(args.dt) if args.dt is not None else default_time_step(state, grid)
    n_steps = int(args.n_steps) if args.n_steps is not None else None
    result = propagate_free(state, grid, dt, n_steps, record_every=int(args.record_every))

    sidecar = {
        "state": state.to_config(),
        "grid": {
            "r_min": result.grid.r_min,
            "r_max": result.grid.r_max,
            "n_points": result.grid.n_points,
            "spacing": result.grid.spacing,
        },
        "dt": result.dt,
        "n_steps": len(result.times) - 1,
        "record_every": int(args.record_every),
    }
    stream, should_close = _open_output(args.output)
    try:
        if args.format == "json":
            payload = dict(sidecar)
            payload["series"] = {
                "t": list(result.times),
                "p_r_mean": list(result.p_r_mean),
                "norm": list(result.norm),
                "units": {"t": "natural", "p_r_mean": "hbar*kappa", "norm": "dimensionless"},
            }
            json.dump(payload, stream, indent=2, sort_keys=True)
            stream.write("\n")
        else:
            result.to_csv(stream)
    finally:
        if should_close:
            stream.close()
    if args.output and args.output != "-":
        Path(args.output).with_suffix(".config.json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    try:
        measured = result.measured_slope(fit_window(state))
    except PreconditionError:
        measured = result.measured_slope()  # short custom run: fit everything recorded
    analytic = result.analytic_slope
    line = f"measured_slope={_fmt(measured)} analytic_slope={_fmt(analytic)}"
    if analytic and math.isfinite(analytic):
        line += f" ratio={_fmt(measured / analytic)}"
    print(line, file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------ verify


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_normalization(perturb: float) -> CheckResult:
    worst = 0.0
    cases: list[tuple[StateFamily, int, float]] = []
    for d in (4, 6, 9, 30, 60):
        cases.append((StateFamily.U0, d, 1.0))
        cases.append((StateFamily.U1, d, 1.0))
    for bk in (0.25, 1.0, 4.0):
        cases.append((StateFamily.U2, 6, bk))
    for family, d, bk in cases:
        state = RadialState(
            family=family, dim=HyperDimension(d), params=PhysicalParams(beta=bk)
        )
        value = state.normalization_integral().value * (1.0 + perturb) ** 2
        worst = max(worst, abs(value - 1.0))
    return CheckResult("normalization", worst <= 1e-9, f"max |norm - 1| = {worst:.3e}")


def _check_energies() -> CheckResult:
    worst = 0.0
    dims = (4, 5, 6, 9, 12, 30, 60, 150)
    for family in (StateFamily.U0, StateFamily.U1):
        for d in dims:
            state = make_state(family, d)
            closed = energy_report(state, CLOSED_FORM)
            quad = energy_report(state, QUADRATURE)
            for c, q in ((closed.t_r, quad.t_r), (closed.t_v, quad.t_v)):
                worst = max(worst, abs(c - q) / max(abs(c), 1e-300))
    for bk in (0.25, 1.0, 4.0):
        params = PhysicalParams(beta=bk)
        for d in dims:
            state = RadialState(StateFamily.U2, HyperDimension(d), params)
            closed = energy_report(state, CLOSED_FORM)
            quad = energy_report(state, QUADRATURE)
            for c, q in ((closed.t_r, quad.t_r), (closed.t_v, quad.t_v)):
                worst = max(worst, abs(c - q) / max(abs(c), 1e-300))
    return CheckResult("energies", worst <= 1e-8, f"max closed-vs-quadrature rel dev = {worst:.3e}")


def _check_eigenstate() -> CheckResult:
    radii = np.geomspace(0.1, 10.0, 400)
    residual = u2_eigenstate_residual(PhysicalParams(), radii)
    return CheckResult("eigenstate", residual <= 1e-8, f"max relative residual = {residual:.3e}")


def _check_bessel() -> CheckResult:
    worst_rec = 0.0
    for zeta in (0.5, 1.0, 2.0, 5.0, 10.0):
        k0, k1, k2 = (bessel_k(n, zeta) for n in (0, 1, 2))
        worst_rec = max(worst_rec, abs(k2 - k0 - 2.0 / zeta * k1) / k2)
    worst_int = 0.0
    for n in (0, 1, 2):
        for zeta in (0.1, 2.0, 30.0):
            worst_int = max(
                worst_int, abs(bessel_k(n, zeta) / bessel_k_integral(n, zeta) - 1.0)
            )
    worst = max(worst_rec, worst_int)
    return CheckResult(
        "bessel",
        worst_rec <= 1e-9 and worst_int <= 1e-9,
        f"recurrence dev = {worst_rec:.3e}, integral-oracle dev = {worst_int:.3e}",
    )


_VERIFY_CHECKS = ("normalization", "energies", "eigenstate", "bessel")


def _run_check(task: tuple[str, float]) -> CheckResult:
    name, perturb = task
    if name == "normalization":
        return _check_normalization(perturb)
    if name == "energies":
        return _check_energies()
    if name == "eigenstate":
        return _check_eigenstate()
    return _check_bessel()


def _cmd_verify(args: argparse.Namespace) -> int:
    names = _VERIFY_CHECKS if args.only is None else (args.only,)
    perturb = float(args.perturb_norm or 0.0)
    results = _run_jobs(_run_check, [(name, perturb) for name in names], int(args.jobs))
    all_passed = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        all_passed &= result.passed
        print(f"{status} {result.name}: {result.detail}")
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


# ------------------------------------------------------------------ recipe


RECIPES: dict[str, tuple[str, list[str]]] = {
    "tv-quadratic": (
        "quadratic growth of the centrifugal energy of u2 (exponent ~ 2)",
        ["scaling", "--quantity", "energy", "--family", "u2", "--component", "t_v", "--N", "10:100"],
    ),
    "sqrt-slope": (
        "square-root growth of the u0 momentum slope (exponent ~ 0.5)",
        ["scaling", "--quantity", "slope", "--family", "u0", "--N", "20:200"],
    ),
    "n2-slope": (
        "quadratic growth of the u2 momentum slope (exponent ~ 2)",
        ["scaling", "--quantity", "slope", "--family", "u2", "--N", "20:200"],
    ),
    "fermion-ladder": (
        "N^2 reference energy of N trapped fermions",
        ["scaling", "--quantity", "fermion", "--N", "1:100"],
    ),
    "thermodynamic": (
        "total kinetic energy of u0 at N=10 (equals 3N/2 in units of epsilon)",
        ["energies", "--family", "u0", "--N", "10"],
    ),
    "ehrenfest-u0": (
        "free expansion of u0 at D=6; measured vs analytic initial slope",
        ["propagate", "--family", "u0", "--D", "6"],
    ),
}


def _cmd_recipe(args: argparse.Namespace) -> int:
    if args.list or args.name is None:
        for name, (description, argv) in sorted(RECIPES.items()):
            print(f"{name}: {description}")
            print(f"    hyperradial {' '.join(argv)}")
        return EXIT_OK
    if args.name not in RECIPES:
        raise DomainError(f"unknown recipe {args.name!r}; run `hyperradial recipe --list`")
    _, argv = RECIPES[args.name]
    argv = list(argv)
    if args.output is not None:
        argv += ["--output", args.output]
    return main(argv)


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperradial",
        description="Hyperspherical s-state energies, scaling laws and free-expansion dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        # presence is validated after the --config overlay, not by argparse
        p.add_argument("--family", choices=[f.value for f in StateFamily],
                       default=None, help="radial wave-function family")
        p.add_argument("--D", type=int, default=None, help="configuration-space dimension")
        p.add_argument("--N", type=int, default=None, help="particle number (implies D = 3N)")
        p.add_argument("--kappa", type=float, default=1.0, help="inverse length scale (default 1)")
        p.add_argument("--beta-kappa", dest="beta_kappa", type=float, default=1.0,
                       help="dimensionless u2 shape parameter (default 1)")
        p.add_argument("--output", default=None, help="output file ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", default=None, help="JSON file mirroring the flags")

    p_en = sub.add_parser("energies", help="closed-form and quadrature kinetic energies")
    add_common(p_en)
    p_en.set_defaults(func=_cmd_energies, _parser=p_en)

    p_sc = sub.add_parser("scaling", help="N-sweeps with fitted power-law exponent")
    p_sc.add_argument("--quantity", choices=("energy", "slope", "fermion"), required=True)
    p_sc.add_argument("--family", choices=[f.value for f in StateFamily], default=None)
    p_sc.add_argument("--component", choices=("total", "t_r", "t_v"), default="total",
                      help="energy component for --quantity energy")
    p_sc.add_argument("--N", required=True, help="range start:stop[:step], inclusive")
    p_sc.add_argument("--kappa", type=float, default=1.0)
    p_sc.add_argument("--beta-kappa", dest="beta_kappa", type=float, default=1.0)
    p_sc.add_argument("--jobs", type=int, default=1, help="worker processes for the sweep")
    p_sc.add_argument("--output", default=None)
    p_sc.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sc.add_argument("--config", default=None)
    p_sc.set_defaults(func=_cmd_scaling, _parser=p_sc)

    p_pr = sub.add_parser("propagate", help="Crank-Nicolson free expansion")
    add_common(p_pr)
    p_pr.add_argument("--n-points", dest="n_points", type=int, default=4096)
    p_pr.add_argument("--r-max", dest="r_max", type=float, default=None,
                      help="outer wall radius (default: state-dependent)")
    p_pr.add_argument("--dt", type=float, default=None, help="time step (default: accuracy policy)")
    p_pr.add_argument("--n-steps", dest="n_steps", type=int, default=None)
    p_pr.add_argument("--record-every", dest="record_every", type=int, default=1)
    p_pr.set_defaults(func=_cmd_propagate, _parser=p_pr)

    p_ve = sub.add_parser("verify", help="oracle-equivalence suite")
    p_ve.add_argument("--only", choices=_VERIFY_CHECKS, default=None)
    p_ve.add_argument("--perturb-norm", dest="perturb_norm", type=float, default=0.0,
                      help="test-only fault injection into the normalization check")
    p_ve.add_argument("--jobs", type=int, default=1)
    p_ve.add_argument("--config", default=None)
    p_ve.set_defaults(func=_cmd_verify, _parser=p_ve)

    p_re = sub.add_parser("recipe", help="run a named preset")
    p_re.add_argument("name", nargs="?", default=None)
    p_re.add_argument("--list", action="store_true", help="list available recipes")
    p_re.add_argument("--output", default=None)
    p_re.set_defaults(func=_cmd_recipe, _parser=p_re)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            _apply_config(args, args._parser._actions, argv)
        return args.func(args)
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
