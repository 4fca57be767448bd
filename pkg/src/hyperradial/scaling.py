"""Scaling-law analyses: how energies and momentum slopes grow with N.

Each table sweeps the particle number N (always with D = 3N, both columns
carried to rule out the 3x bookkeeping slip), evaluates a closed-form
quantity per row and fits an exponent by ordinary least squares on
(log N, log value).  Headline behaviors: total kinetic energy is linear
in N for the trap states but quadratic for the dimension-free profile;
the momentum slope grows as sqrt(N) for the trap states and as N^2 for
the dimension-free profile.  The filled-trap fermion ladder provides the
classic N^2 reference point.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, TextIO

import numpy as np

from .core import DomainError, HyperDimension, PhysicalParams
from .dynamics import raman_nath_slope_closed
from .energy import t_r_closed, t_v_closed
from .states import RadialState, StateFamily

MIN_FIT_ROWS = 10


def _map_rows(fn: Callable, items: Sequence, jobs: int) -> list:
    """Row computations are independent; farm them out when jobs > 1."""
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def fit_power_law(n_values: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """OLS exponent and its standard error from a log-log fit (no weighting)."""
    x = np.log(np.asarray(n_values, dtype=float))
    y = np.asarray(values, dtype=float)
    if np.any(y <= 0):
        raise DomainError("power-law fit requires strictly positive values")
    y = np.log(y)
    if x.size < 3:
        raise DomainError("power-law fit needs at least 3 rows")
    dx = x - x.mean()
    sxx = float(np.sum(dx * dx))
    slope = float(np.sum(dx * (y - y.mean())) / sxx)
    resid = y - y.mean() - slope * dx
    stderr = math.sqrt(float(np.sum(resid**2)) / (x.size - 2) / sxx)
    return slope, stderr


@dataclass(frozen=True)
class ScalingRow:
    n: int
    d: int
    value: float
    units: str


@dataclass(frozen=True)
class ScalingTable:
    """Rows of (N, D, value) plus the fitted power-law exponent."""

    rows: tuple[ScalingRow, ...]
    fit_exponent: float
    fit_error: float
    quantity: str
    family: Optional[StateFamily] = None

    def __post_init__(self) -> None:
        for row in self.rows:
            if row.d != 3 * row.n:
                raise DomainError(f"row N={row.n} carries D={row.d}, expected D=3N")

    @property
    def n_values(self) -> np.ndarray:
        return np.array([row.n for row in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([row.value for row in self.rows])

    def to_csv(self, stream: TextIO) -> None:
        stream.write("N,D,value,units\n")
        for row in self.rows:
            stream.write(f"{row.n},{row.d},{row.value:.12g},{row.units}\n")

    def to_json(self, stream: TextIO) -> None:
        payload = {
            "quantity": self.quantity,
            "family": self.family.value if self.family else None,
            "fit_exponent": self.fit_exponent,
            "fit_error": self.fit_error,
            "rows": [
                {"N": row.n, "D": row.d, "value": row.value, "units": row.units}
                for row in self.rows
            ],
        }
        json.dump(payload, stream, indent=2, sort_keys=True)
        stream.write("\n")


def _build_table(
    n_values: Iterable[int],
    values: Sequence[float],
    units: str,
    quantity: str,
    family: Optional[StateFamily],
) -> ScalingTable:
    ns = list(n_values)
    if len(ns) < MIN_FIT_ROWS:
        raise DomainError(f"scaling fits need at least {MIN_FIT_ROWS} rows, got {len(ns)}")
    exponent, err = fit_power_law(ns, values)
    rows = tuple(ScalingRow(n=n, d=3 * n, value=v, units=units) for n, v in zip(ns, values))
    return ScalingTable(rows=rows, fit_exponent=exponent, fit_error=err,
                        quantity=quantity, family=family)


@dataclass(frozen=True)
class FermionTrapEnergy:
    """Ground-ladder energy of N trapped fermions, summed and in closed form."""

    summed: float
    closed: float

    @property
    def value(self) -> float:
        return self.closed


def fermion_trap_energy(n: int, params: PhysicalParams) -> FermionTrapEnergy:
    """Total energy of N fermions filling the first N oscillator levels.

    sum_{j=0}^{N-1} (j + 1/2) hbar Omega = N^2 hbar Omega / 2; both forms
    are returned and are identical (the partial sums are exact in binary
    floating point for any practical N).
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"particle count must be an integer >= 1, got {n!r}")
    quantum = params.hbar * params.omega
    ladder = math.fsum(j + 0.5 for j in range(n))
    return FermionTrapEnergy(summed=ladder * quantum, closed=(0.5 * n * n) * quantum)


def _check_n_values(n_values: Iterable[int], minimum: int) -> list[int]:
    ns = list(n_values)
    for n in ns:
        if not isinstance(n, (int, np.integer)) or n < minimum:
            raise DomainError(f"N values must be integers >= {minimum}, got {n!r}")
    return [int(n) for n in ns]


def _energy_row(task: tuple[str, int, PhysicalParams, str]) -> float:
    family, n, params, component = task
    dim = HyperDimension(3 * n)
    t_r = t_r_closed(StateFamily(family), dim, params)
    t_v = t_v_closed(StateFamily(family), dim, params)
    return {"total": t_r + t_v, "t_r": t_r, "t_v": t_v}[component]


def _slope_row(task: tuple[str, int, PhysicalParams]) -> float:
    family, n, params = task
    state = RadialState(family=StateFamily(family), dim=HyperDimension(3 * n), params=params)
    return raman_nath_slope_closed(state)


def _fermion_row(task: tuple[int, PhysicalParams]) -> float:
    n, params = task
    return fermion_trap_energy(n, params).closed


def energy_scaling_table(
    family: StateFamily,
    n_values: Iterable[int],
    params: PhysicalParams,
    component: str = "total",
    jobs: int = 1,
) -> ScalingTable:
    """Kinetic energy (in units of epsilon) per particle number, with exponent.

    `component` selects "total", "t_r" or "t_v".  Expect an exponent of
    ~1 for u0/u1 and ~2 for u2.
    """
    if component not in ("total", "t_r", "t_v"):
        raise DomainError(f"unknown energy component {component!r}")
    ns = _check_n_values(n_values, minimum=2)
    values = _map_rows(_energy_row, [(family.value, n, params, component) for n in ns], jobs)
    quantity = "energy" if component == "total" else component
    return _build_table(ns, values, units="epsilon", quantity=quantity, family=family)


def slope_scaling_table(
    family: StateFamily,
    n_values: Iterable[int],
    params: PhysicalParams,
    jobs: int = 1,
) -> ScalingTable:
    """Analytic Raman-Nath slope per particle number, with fitted exponent.

    Expect ~0.5 for u0/u1 at large N and ~2 for u2.
    """
    ns = _check_n_values(n_values, minimum=2)
    values = _map_rows(_slope_row, [(family.value, n, params) for n in ns], jobs)
    return _build_table(ns, values, units="hbar*kappa/time", quantity="slope", family=family)


def fermion_scaling_table(
    n_values: Iterable[int], params: PhysicalParams, jobs: int = 1
) -> ScalingTable:
    """Exact N^2 hbar Omega / 2 reference column (fit exponent is exactly 2)."""
    ns = _check_n_values(n_values, minimum=1)
    values = _map_rows(_fermion_row, [(n, params) for n in ns], jobs)
    return _build_table(ns, values, units="hbar*omega", quantity="fermion", family=None)
