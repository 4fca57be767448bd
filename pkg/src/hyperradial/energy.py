"""Kinetic-energy functionals of the radial states.

The kinetic energy of an s-state splits as T = T_r + T_V:

    T_r = int u* (-hbar^2/2M) u'' dr          (para-radial part, <p_r^2>/2M)
    T_V = int V_Q(r) |u(r)|^2 dr              (centrifugal part)

with the quantum centrifugal potential

    V_Q(r) = (hbar^2 / 2M) (D-1)(D-3) / (4 r^2),

repulsive for D >= 4, zero at D in {1, 3} and attractive at D = 2.  Each
energy is available both in closed form and by adaptive quadrature with
the analytic second derivative of the profile; the two routes are kept
independent so that one can certify the other.  All energies are returned
in units of epsilon = (hbar kappa)^2 / 2M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOLERANCE,
    DivergentIntegralError,
    DomainError,
    HyperDimension,
    PhysicalParams,
    Tolerance,
)
from .quadrature import integrate_radial
from .specialfn import bessel_k_ratio
from .states import ArrayLike, RadialState, StateFamily, _as_positive_radius, _scalar_like

CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"


def v_q(dim: HyperDimension, params: PhysicalParams, r: ArrayLike) -> ArrayLike:
    """Quantum centrifugal potential V_Q(r) in absolute energy units."""
    arr = _as_positive_radius(r)
    prefactor = params.hbar**2 / (2.0 * params.mass)
    out = prefactor * dim.strength() / (4.0 * arr**2)
    return _scalar_like(r, out)


def _reject_u0_closed_form(family: StateFamily, dim: HyperDimension) -> None:
    if family is StateFamily.U0 and dim.d <= 2:
        raise DomainError(
            f"u0 closed forms contain a 1/(D-2) singularity; D={dim.d} is rejected "
            "(the D=2 integrals diverge, <r^-2> does not exist)"
        )


def t_r_closed(family: StateFamily, dim: HyperDimension, params: PhysicalParams) -> float:
    """Closed-form para-radial energy T_r in units of epsilon."""
    _reject_u0_closed_form(family, dim)
    d = dim.d
    if family is StateFamily.U0:
        return 1.0 + 0.5 / (d - 2.0)
    if family is StateFamily.U1:
        return 1.0 + 0.5 / (d + 2.0)
    bk = params.beta_kappa
    zeta = 2.0 * math.sqrt(bk)
    return bessel_k_ratio(zeta) / (2.0 * math.sqrt(bk))


def t_v_closed(family: StateFamily, dim: HyperDimension, params: PhysicalParams) -> float:
    """Closed-form centrifugal energy T_V in units of epsilon."""
    _reject_u0_closed_form(family, dim)
    d = dim.d
    if family is StateFamily.U0:
        return 0.5 * d - 1.0 - 0.5 / (d - 2.0)
    if family is StateFamily.U1:
        return 0.5 * d - 3.0 + 7.5 / (d + 2.0)
    return dim.strength() / (4.0 * params.beta_kappa)


def _check_inverse_square_moment(state: RadialState) -> None:
    # u0 ~ r^((D-1)/2) near the origin, so <r^-2> exists only for D > 2;
    # u1 and u2 vanish fast enough for every D
    if state.family is StateFamily.U0 and state.dim.d == 2:
        raise DivergentIntegralError(
            "<r^-2> does not exist for u0 at D=2 (|u|^2/r^2 ~ 1/r near the origin); "
            "the energy integrals diverge rather than evaluate"
        )


def t_r_quadrature(state: RadialState, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """T_r by adaptive quadrature of -u u'' (analytic u''), in units of epsilon."""
    _check_inverse_square_moment(state)
    prefactor = state.params.hbar**2 / (2.0 * state.params.mass)
    r_lo, r_hi = state.support()

    def integrand(r: np.ndarray) -> np.ndarray:
        usq = np.exp(2.0 * np.asarray(state.log_u(r)))
        return -prefactor * usq * np.asarray(state.u_second_over_u(r))

    return integrate_radial(integrand, r_lo, r_hi, tol).value / state.params.epsilon()


def t_v_quadrature(state: RadialState, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """T_V by adaptive quadrature of V_Q |u|^2, in units of epsilon.

    Exactly zero (no quadrature) when the strength (D-1)(D-3) vanishes.
    """
    if state.dim.strength() == 0:
        return 0.0
    _check_inverse_square_moment(state)
    r_lo, r_hi = state.support()

    def integrand(r: np.ndarray) -> np.ndarray:
        usq = np.exp(2.0 * np.asarray(state.log_u(r)))
        return np.asarray(v_q(state.dim, state.params, r)) * usq

    return integrate_radial(integrand, r_lo, r_hi, tol).value / state.params.epsilon()


@dataclass(frozen=True)
class EnergyReport:
    """T_r, T_V and their sum for one state, in units of epsilon.

    `total` is constructed as t_r + t_v, never computed separately, so the
    decomposition identity holds exactly by construction.
    """

    t_r: float
    t_v: float
    method: str
    family: StateFamily
    dim: HyperDimension
    epsilon: float
    total: float = field(init=False)

    def __post_init__(self) -> None:
        if self.method not in (CLOSED_FORM, QUADRATURE):
            raise DomainError(f"unknown energy method {self.method!r}")
        object.__setattr__(self, "total", self.t_r + self.t_v)


def energy_report(
    state: RadialState,
    method: str = CLOSED_FORM,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> EnergyReport:
    """Assemble the kinetic-energy report for a state with the chosen method."""
    if method == CLOSED_FORM:
        t_r = t_r_closed(state.family, state.dim, state.params)
        t_v = t_v_closed(state.family, state.dim, state.params)
    elif method == QUADRATURE:
        t_r = t_r_quadrature(state, tol)
        t_v = t_v_quadrature(state, tol)
    else:
        raise DomainError(f"unknown energy method {method!r}")
    return EnergyReport(
        t_r=t_r,
        t_v=t_v,
        method=method,
        family=state.family,
        dim=state.dim,
        epsilon=state.params.epsilon(),
    )
