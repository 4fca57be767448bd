"""Free expansion after trap switch-off.

Once the confining potential is removed at t = 0 the radial profile obeys

    i hbar du/dt = [ -(hbar^2/2M) d^2/dr^2 + V_Q(r) ] u(r, t),

so the only force left is the quantum centrifugal force
F_Q(r) = -dV_Q/dr = (hbar^2/2M)(D-1)(D-3)/(2 r^3).  For a real initial
profile the average radial momentum grows linearly at short times with
slope integral F_Q |u|^2 dr (the Raman-Nath regime); this module provides
that slope by quadrature, its Gamma/Bessel closed forms, the sqrt(2D)
large-D law, a short-time phase-evolution approximation, and a full
Crank-Nicolson propagator as the independent numerical check.

Propagator notes
----------------
The Cayley form (1 + i dt H / 2 hbar) u_new = (1 - i dt H / 2 hbar) u with
a 3-point Laplacian is unconditionally stable and exactly unitary in the
discrete l2 norm, so norm drift measures only solver round-off.  Dirichlet
walls sit one grid spacing below r_min (i.e. at r = 0) and one above
r_max.  Accuracy, not stability, sets the time step: dt is capped by the
kinetic phase per step across one cell and by the centrifugal phase per
step at the inner edge of the state's support (at the literal r_min the
potential is enormous but the wave function is void there, and a cap at
r_min would make large-D runs intractable for no gain in accuracy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np
from scipy.linalg import get_lapack_funcs

from .core import (
    DEFAULT_TOLERANCE,
    DivergentIntegralError,
    DomainError,
    HyperDimension,
    PhysicalParams,
    PreconditionError,
    PropagationAborted,
    PropagationError,
    Tolerance,
)
from .energy import t_r_closed, t_v_closed, v_q
from .quadrature import integrate_radial
from .specialfn import bessel_k_ratio, gamma_ratio
from .states import ArrayLike, RadialState, StateFamily, _as_positive_radius, _scalar_like

DEFAULT_N_POINTS = 4096
REFLECTION_LIMIT = 1e-8
NORM_DRIFT_LIMIT = 1e-4


def centrifugal_force(dim: HyperDimension, params: PhysicalParams, r: ArrayLike) -> ArrayLike:
    """Quantum centrifugal force F_Q(r) = -dV_Q/dr, in absolute units."""
    arr = _as_positive_radius(r)
    prefactor = params.hbar**2 / (2.0 * params.mass)
    out = prefactor * dim.strength() / (2.0 * arr**3)
    return _scalar_like(r, out)


def _check_inverse_cube_moment(state: RadialState) -> None:
    # u0 has |u|^2/r^3 ~ r^(D-4) near the origin: integrable only for D > 3
    # (at D in {1,3} the strength vanishes and the integrand is identically 0)
    if state.family is StateFamily.U0 and state.dim.d == 2:
        raise DivergentIntegralError(
            "<r^-3> does not exist for u0 at D=2; the centrifugal-force average diverges"
        )


def raman_nath_slope(state: RadialState, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Initial momentum growth rate d<p_r>/dt at t=0, in units of hbar*kappa per time.

    Computed as the quadrature of F_Q |u|^2 over the state's support; by
    Ehrenfest's theorem this equals the initial slope of <p_r>(t) whenever
    the profile vanishes fast enough at the origin (all families at D >= 4).
    """
    if state.dim.strength() == 0:
        return 0.0
    _check_inverse_cube_moment(state)
    r_lo, r_hi = state.support()

    def integrand(r: np.ndarray) -> np.ndarray:
        usq = np.exp(2.0 * np.asarray(state.log_u(r)))
        return np.asarray(centrifugal_force(state.dim, state.params, r)) * usq

    raw = integrate_radial(integrand, r_lo, r_hi, tol).value
    return raw / (state.params.hbar * state.params.kappa)


def raman_nath_slope_closed(state: RadialState) -> float:
    """Closed-form Raman-Nath slope, same units as :func:`raman_nath_slope`.

    u0: (D-1) Gamma((D-1)/2)/Gamma(D/2) * eps/hbar
    u1: (D-1)(D-3)/2 * Gamma((D+1)/2)/Gamma((D+4)/2) * eps/hbar
    u2: (D-1)(D-3) / (2 (beta kappa)^(3/2)) * K2/K1(2 sqrt(beta kappa)) * eps/hbar
    """
    d = state.dim.d
    strength = state.dim.strength()
    if strength == 0:
        return 0.0
    _check_inverse_cube_moment(state)
    eps_over_hbar = state.params.epsilon() / state.params.hbar
    if state.family is StateFamily.U0:
        factor = (d - 1.0) * gamma_ratio(0.5 * (d - 1), 0.5 * d)
    elif state.family is StateFamily.U1:
        factor = 0.5 * strength * gamma_ratio(0.5 * (d + 1), 0.5 * (d + 4))
    else:
        bk = state.params.beta_kappa
        factor = strength / (2.0 * bk**1.5) * bessel_k_ratio(2.0 * math.sqrt(bk))
    return factor * eps_over_hbar


def asymptotic_slope_u0u1(dim: HyperDimension, params: PhysicalParams) -> float:
    """Large-D slope law sqrt(2D) * eps/hbar shared by u0 and u1 (units hbar*kappa/time)."""
    if dim.d < 30:
        raise PreconditionError(f"sqrt(2D) slope law needs D >= 30, got D={dim.d}")
    return math.sqrt(2.0 * dim.d) * params.epsilon() / params.hbar


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid r_j = r_min + j*spacing with Dirichlet walls.

    The walls sit one spacing outside both ends, i.e. at r = 0 and at
    r_max + spacing; r_min is one spacing above the origin as required by
    the singular centrifugal potential.
    """

    r_min: float
    r_max: float
    n_points: int
    spacing: float

    def __post_init__(self) -> None:
        if self.n_points < 512:
            raise DomainError(f"n_points must be >= 512, got {self.n_points}")
        if not (0 < self.r_min < self.r_max):
            raise DomainError("need 0 < r_min < r_max")
        expected = self.r_min + (self.n_points - 1) * self.spacing
        if not math.isclose(expected, self.r_max, rel_tol=1e-9):
            raise DomainError("spacing inconsistent with (r_min, r_max, n_points)")

    @classmethod
    def uniform(cls, r_outer: float, n_points: int = DEFAULT_N_POINTS) -> "RadialGrid":
        """Interior nodes of [0, r_outer] with walls at 0 and r_outer."""
        h = r_outer / (n_points + 1)
        return cls(r_min=h, r_max=n_points * h, n_points=n_points, spacing=h)

    @classmethod
    def for_state(cls, state: RadialState, n_points: int = DEFAULT_N_POINTS) -> "RadialGrid":
        """Default production grid for a state.

        Trap states get peak + 12/kappa (the peak radius itself grows as
        sqrt(D)/kappa); the exponential-tailed u2 gets the radius at which
        its amplitude has dropped 13 decades below peak.
        """
        kappa = state.params.kappa
        if state.family is StateFamily.U2:
            r_outer = state.peak_radius() + 2.0 * 13.0 * math.log(10.0) / kappa
        else:
            r_outer = state.peak_radius() + 12.0 / kappa
        return cls.uniform(r_outer, n_points)

    def points(self) -> np.ndarray:
        return self.r_min + self.spacing * np.arange(self.n_points)


def default_time_step(state: RadialState, grid: RadialGrid) -> float:
    """Accuracy-driven time step for the Crank-Nicolson propagator.

    Caps the kinetic phase per step across one grid cell at 0.1 and the
    centrifugal phase per step at 0.1 evaluated at the inner edge of the
    state's support (where the amplitude is 1e-12 of peak).
    """
    params = state.params
    dt_kinetic = 0.1 * 2.0 * params.mass * grid.spacing**2 / params.hbar
    if state.dim.strength() == 0:
        return dt_kinetic
    r_edge = max(grid.r_min, state.support(drop_decades=12.0)[0])
    dt_potential = 0.1 * params.hbar / abs(float(v_q(state.dim, params, r_edge)))
    return min(dt_kinetic, dt_potential)


def linearity_window(state: RadialState) -> float:
    """Time span over which <p_r>(t) stays within ~5% of slope * t.

    min(0.05 hbar/eps, 0.15 hbar/T): the first bound covers the trap
    states, whose curvature time is hbar/eps; the energy-scaled bound
    takes over for u2, whose stored energy T ~ D^2 eps makes the bend
    correspondingly earlier.
    """
    params = state.params
    t_eps = 0.05 * params.hbar / params.epsilon()
    try:
        total_eps = t_r_closed(state.family, state.dim, params) + t_v_closed(
            state.family, state.dim, params
        )
    except DomainError:
        return t_eps
    total_abs = abs(total_eps) * params.epsilon()
    if total_abs == 0.0:
        return t_eps
    return min(t_eps, 0.15 * params.hbar / total_abs)


def fit_window(state: RadialState) -> float:
    """Window for the initial-slope fit: the first 5% of the linearity window."""
    return 0.05 * linearity_window(state)


@dataclass
class PropagationResult:
    """Time series of one free-expansion run.

    p_r_mean is in units of hbar*kappa; times are in natural units
    (hbar = M = kappa = 1 by default).  analytic_slope is the closed-form
    Raman-Nath slope when one exists, NaN otherwise.
    """

    times: np.ndarray
    p_r_mean: np.ndarray
    norm: np.ndarray
    analytic_slope: float
    grid: RadialGrid
    dt: float

    def measured_slope(self, window: Optional[float] = None) -> float:
        """Initial slope from a least-squares fit of p(t) = s t + c t^3.

        The cubic term absorbs the leading curvature of the exact signal
        (odd in t for a real initial state), which a straight-line fit
        would alias into the slope.
        """
        t, p = self.times, self.p_r_mean
        if window is not None:
            keep = t <= window
            t, p = t[keep], p[keep]
        if np.count_nonzero(t > 0) < 4:
            raise PreconditionError("need at least 4 non-zero-time samples to fit a slope")
        scale = t[-1]
        basis = np.column_stack([t / scale, (t / scale) ** 3])
        coeffs, *_ = np.linalg.lstsq(basis, p, rcond=None)
        return float(coeffs[0] / scale)

    def to_csv(self, stream: TextIO) -> None:
        """Write `t,p_r_mean,norm` rows with a units header row."""
        stream.write("t,p_r_mean,norm\n")
        stream.write("natural,hbar*kappa,dimensionless\n")
        for t, p, n in zip(self.times, self.p_r_mean, self.norm):
            stream.write(f"{t:.12g},{p:.12g},{n:.12g}\n")


def _sampled_profile(state: RadialState, grid: RadialGrid) -> np.ndarray:
    r = grid.points()
    u = np.asarray(state.u(r), dtype=np.complex128)
    norm = math.sqrt(float(np.sum(np.abs(u) ** 2)) * grid.spacing)
    return u / norm


def _validate_run(state: RadialState, grid: RadialGrid, u: np.ndarray) -> None:
    density = np.abs(u) ** 2
    peak = float(density.max())
    if density[-1] > 1e-24 * peak:  # amplitude 1e-12 of peak
        raise PreconditionError(
            "grid does not contain the state: |u| at r_max exceeds 1e-12 of peak; "
            "increase r_max"
        )
    if int(np.count_nonzero(density >= 0.5 * peak)) < 20:
        raise PreconditionError(
            "grid under-resolves the state: fewer than 20 points across the "
            "|u|^2 peak at half maximum"
        )


def propagate_free(
    state: RadialState,
    grid: Optional[RadialGrid] = None,
    dt: Optional[float] = None,
    n_steps: Optional[int] = None,
    *,
    record_every: int = 1,
    norm_drift_limit: float = NORM_DRIFT_LIMIT,
    reflection_limit: float = REFLECTION_LIMIT,
    progress: Optional[Callable[[int, int], bool]] = None,
    progress_every: int = 256,
) -> PropagationResult:
    """Propagate a state through trap switch-off and record <p_r>(t).

    Parameters
    ----------
    state : RadialState
        Real, normalized initial profile.
    grid : RadialGrid, optional
        Defaults to ``RadialGrid.for_state(state)``.
    dt : float, optional
        Defaults to :func:`default_time_step`; the scheme is stable for
        any dt, the caps are purely about accuracy.
    n_steps : int, optional
        Defaults to enough steps to cover :func:`fit_window`.
    record_every : int
        Sampling stride for the returned time series.
    progress : callable, optional
        Polled every ``progress_every`` steps with (step, n_steps); return
        False to abort the run (raises PropagationAborted).  The hook is
        invoked from the propagation task only, so it is safe to poll
        shared state from another thread.

    Raises
    ------
    PropagationError
        On norm drift beyond ``norm_drift_limit`` or when probability
        reaches the outer wall (reflection would corrupt the signal).
    """
    if grid is None:
        grid = RadialGrid.for_state(state)
    if dt is None:
        dt = default_time_step(state, grid)
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if n_steps is None:
        n_steps = max(int(math.ceil(fit_window(state) / dt)), 16)
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    if record_every < 1:
        raise DomainError(f"record_every must be >= 1, got {record_every}")

    params = state.params
    hbar, mass, kappa = params.hbar, params.mass, params.kappa
    r = grid.points()
    h = grid.spacing
    n = grid.n_points

    u = _sampled_profile(state, grid)
    _validate_run(state, grid, u)

    kinetic = hbar**2 / (2.0 * mass * h**2)
    potential = np.asarray(v_q(state.dim, params, r), dtype=float)
    h_diag = 2.0 * kinetic + potential
    h_off = -kinetic

    alpha = 1j * dt / (2.0 * hbar)
    # LU-factor the constant left-hand tridiagonal once (LAPACK gttrf/gttrs)
    dl = np.full(n - 1, alpha * h_off, dtype=np.complex128)
    dd = 1.0 + alpha * h_diag.astype(np.complex128)
    du = dl.copy()
    gttrf, gttrs = get_lapack_funcs(("gttrf", "gttrs"), (dd,))
    dl_f, d_f, du_f, du2_f, ipiv, info = gttrf(dl, dd, du)
    if info != 0:
        raise PropagationError(f"tridiagonal factorization failed (LAPACK info={info})")

    b_diag = 1.0 - alpha * h_diag
    b_off = -alpha * h_off

    def p_r_mean(vec: np.ndarray) -> float:
        # central-difference d/dr with the imaginary part taken explicitly,
        # so a real profile gives exactly zero
        acc = np.sum(np.conj(vec[1:-1]) * (vec[2:] - vec[:-2]))
        acc += np.conj(vec[0]) * vec[1] - np.conj(vec[-1]) * vec[-2]  # walls are zero
        return hbar * float(acc.imag) * 0.5 / (hbar * kappa)

    def norm_of(vec: np.ndarray) -> float:
        return float(np.sum(np.abs(vec) ** 2)) * h

    times = [0.0]
    momenta = [p_r_mean(u)]
    norms = [norm_of(u)]
    peak_density = float(np.abs(u).max()) ** 2

    for step in range(1, n_steps + 1):
        rhs = b_diag * u
        rhs[:-1] += b_off * u[1:]
        rhs[1:] += b_off * u[:-1]
        u, info = gttrs(dl_f, d_f, du_f, du2_f, ipiv, rhs)
        if info != 0:
            raise PropagationError(f"tridiagonal solve failed at step {step} (info={info})")
        if progress is not None and step % progress_every == 0:
            if progress(step, n_steps) is False:
                raise PropagationAborted(f"aborted by progress hook at step {step}/{n_steps}")
        if step % record_every == 0 or step == n_steps:
            t = step * dt
            current_norm = norm_of(u)
            times.append(t)
            momenta.append(p_r_mean(u))
            norms.append(current_norm)
            if abs(current_norm - norms[0]) > norm_drift_limit:
                raise PropagationError(
                    f"norm drifted to {current_norm:.12f} at t={t:.6g} "
                    f"(limit {norm_drift_limit:g}); the run is untrustworthy"
                )
            if abs(u[-1]) ** 2 > reflection_limit * peak_density:
                raise PropagationError(
                    f"boundary reflection detected at t={t:.6g}: |u|^2 at r_max is "
                    f"{abs(u[-1])**2 / peak_density:.3e} of peak (limit {reflection_limit:g}); "
                    "enlarge r_max"
                )

    try:
        analytic = raman_nath_slope_closed(state)
    except (DomainError, DivergentIntegralError):
        analytic = math.nan

    return PropagationResult(
        times=np.asarray(times),
        p_r_mean=np.asarray(momenta),
        norm=np.asarray(norms),
        analytic_slope=analytic,
        grid=grid,
        dt=dt,
    )


def bohm_quantum_potential(state: RadialState, r: ArrayLike) -> ArrayLike:
    """State-dependent potential W(r) = -(hbar^2/2M) u''(r)/u(r).

    Enters the short-time phase but drops out of <p_r> for real initial
    profiles that vanish at the origin.
    """
    arr = _as_positive_radius(r)
    prefactor = state.params.hbar**2 / (2.0 * state.params.mass)
    out = -prefactor * np.asarray(state.u_second_over_u(arr))
    return _scalar_like(r, out)


def short_time_phase_state(state: RadialState, t: float, r: ArrayLike) -> np.ndarray:
    """Raman-Nath-regime amplitude u(r, t) ~ exp(-i [W(r) + V_Q(r)] t / hbar) u(r, 0).

    A pure phase: |u(r, t)| = |u(r, 0)| exactly.  Points where the initial
    amplitude is below 1e-12 of peak are returned as zero (W is undefined
    where u vanishes).  Requires |[W + V_Q] t / hbar| <= 0.5 at the peak.
    """
    arr = _as_positive_radius(r)
    params = state.params
    r_peak = state.peak_radius()
    if r_peak == 0.0:
        r_peak = float(state.support()[0])
    phase_scale = abs(
        float(bohm_quantum_potential(state, r_peak))
        + float(v_q(state.dim, params, r_peak))
    ) * abs(t) / params.hbar
    if phase_scale > 0.5:
        raise PreconditionError(
            f"short-time approximation invalid: |[W+V_Q] t/hbar| = {phase_scale:.3g} > 0.5 at the peak"
        )
    log_u = np.asarray(state.log_u(arr))
    log_peak = float(state.log_u(r_peak))
    mask = log_u > log_peak + math.log(1e-12)
    amplitude = np.where(mask, np.exp(log_u), 0.0)
    w = np.asarray(bohm_quantum_potential(state, arr))
    vq = np.asarray(v_q(state.dim, params, arr))
    phase = np.where(mask, -(w + vq) * t / params.hbar, 0.0)
    return amplitude * np.exp(1j * phase)
