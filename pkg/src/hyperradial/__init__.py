"""Hyperspherical s-state toolkit.

Radial wave functions in D-dimensional configuration space, the quantum
centrifugal potential and its kinetic-energy split, scaling laws in the
particle number, and free-expansion momentum dynamics with a
Crank-Nicolson cross-check.
"""

from .core import (
    DEFAULT_TOLERANCE,
    DivergentIntegralError,
    DomainError,
    HyperDimension,
    HyperradialError,
    NumericalError,
    PhysicalParams,
    PreconditionError,
    PropagationAborted,
    PropagationError,
    QuadratureError,
    Tolerance,
    epsilon,
    strength,
)
from .dynamics import (
    PropagationResult,
    RadialGrid,
    asymptotic_slope_u0u1,
    bohm_quantum_potential,
    centrifugal_force,
    default_time_step,
    fit_window,
    linearity_window,
    propagate_free,
    raman_nath_slope,
    raman_nath_slope_closed,
    short_time_phase_state,
)
from .energy import (
    CLOSED_FORM,
    QUADRATURE,
    EnergyReport,
    energy_report,
    t_r_closed,
    t_r_quadrature,
    t_v_closed,
    t_v_quadrature,
    v_q,
)
from .quadrature import QuadResult, integrate, integrate_radial
from .scaling import (
    FermionTrapEnergy,
    ScalingRow,
    ScalingTable,
    energy_scaling_table,
    fermion_scaling_table,
    fermion_trap_energy,
    fit_power_law,
    slope_scaling_table,
)
from .specialfn import (
    bessel_k,
    bessel_k_integral,
    bessel_k_ratio,
    gamma,
    gamma_ratio,
    gamma_ratio_asymptotic,
    log_gamma,
)
from .states import (
    RadialState,
    StateFamily,
    eigen_potential_v2,
    log_norm_constant,
    log_solid_angle,
    make_state,
    norm_constant,
    solid_angle,
    u2_eigenstate_residual,
    unit_sphere_volume,
)

__version__ = "0.1.0"
