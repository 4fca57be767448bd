"""Shared parameter types, unit conventions and the numerical tolerance policy.

Natural units hbar = M = kappa = 1 are the defaults throughout.  Energies
are reported in units of the kinetic scale epsilon = (hbar*kappa)^2/(2M)
and momenta in units of hbar*kappa.  The length beta enters every formula
only through the dimensionless product beta*kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class HyperradialError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HyperradialError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(HyperradialError, ValueError):
    """A documented precondition of an operation is not met."""


class NumericalError(HyperradialError, RuntimeError):
    """A numerical procedure failed to produce a trustworthy result."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge to the requested tolerance."""


class DivergentIntegralError(NumericalError):
    """The requested integral does not exist (e.g. <r^-2> for u0 at D=2)."""


class PropagationError(NumericalError):
    """Time propagation aborted on norm drift or boundary reflection."""


class PropagationAborted(HyperradialError):
    """Propagation stopped early by the caller's progress hook."""


def _require_positive(name: str, value) -> None:
    ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    if not ok or not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants of the problem, all strictly positive.

    omega is used only by the trapped-fermion comparison.
    """

    hbar: float = 1.0
    mass: float = 1.0
    kappa: float = 1.0
    beta: float = 1.0
    omega: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "kappa", "beta", "omega"):
            _require_positive(name, getattr(self, name))

    def epsilon(self) -> float:
        """Kinetic energy scale (hbar*kappa)^2 / (2M)."""
        return (self.hbar * self.kappa) ** 2 / (2.0 * self.mass)

    @property
    def beta_kappa(self) -> float:
        """Dimensionless shape parameter of the u2 family."""
        return self.beta * self.kappa


@dataclass(frozen=True)
class HyperDimension:
    """Integer dimension D >= 1 of configuration space; D = 3N for N particles."""

    d: int

    def __post_init__(self) -> None:
        d = self.d
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {d!r}")
        object.__setattr__(self, "d", int(d))

    def strength(self) -> int:
        """Strength (D-1)(D-3) of the quantum centrifugal potential.

        Zero at D in {1, 3}, -1 at D = 2, positive for D >= 4.
        """
        return (self.d - 1) * (self.d - 3)

    def particles(self) -> int:
        """Particle count N = D/3; defined only when D is a multiple of 3."""
        if self.d % 3 != 0:
            raise DomainError(f"D={self.d} is not a multiple of 3; particle count undefined")
        return self.d // 3


@dataclass(frozen=True)
class Tolerance:
    """Tolerance policy shared by the quadrature-backed operations."""

    rel: float = 1e-10
    abs: float = 1e-12
    max_subdivisions: int = 12

    def __post_init__(self) -> None:
        if not (self.rel > 0 and self.abs > 0):
            raise DomainError("tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_TOLERANCE = Tolerance()


def epsilon(params: PhysicalParams) -> float:
    """Kinetic energy scale (hbar*kappa)^2/(2M) of the given parameters."""
    return params.epsilon()


def strength(dim: HyperDimension) -> int:
    """Centrifugal strength (D-1)(D-3) of the given dimension."""
    return dim.strength()
