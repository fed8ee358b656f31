"""Product-space geometry of rotational surfaces in S^2 x R and H^2 x R.

A profile ``(phi(s), t(s))`` is revolved around the vertical axis; ``phi`` is
the distance to the axis in the base surface and ``t`` the height.  With the
arc-length parameter and the orientation

    N = (t' C(phi) cos th, t' C(phi) sin th, -t' S(phi), -phi')

the principal curvatures are ``k1 = -phi''/t'`` and ``k2 = t' eta(phi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .elliptic import EllipticFunction, GLimits, compute_limits, g_bar, invert_g_bar

__all__ = [
    "Ambient",
    "S2",
    "H2",
    "PoleError",
    "ProfileState",
    "CurvatureSample",
    "s_eps",
    "c_eps",
    "eta_eps",
    "curvatures",
    "normal_vector",
    "weingarten_residual",
    "solve_phi_pp",
]

# distance to the ends of the open phi-interval treated as touching the axis
POLE_MARGIN = 1e-9


class PoleError(ArithmeticError):
    """``phi`` at (or within ``POLE_MARGIN`` of) an end of the profile domain."""


@dataclass(frozen=True)
class Ambient:
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")

    @property
    def phi_domain(self) -> tuple[float, float]:
        return (0.0, math.pi) if self.epsilon == 1 else (0.0, math.inf)

    @property
    def name(self) -> str:
        return "S2xR" if self.epsilon == 1 else "H2xR"

    def contains(self, phi: float) -> bool:
        lo, hi = self.phi_domain
        return lo + POLE_MARGIN < phi < hi - POLE_MARGIN

    def check(self, phi: float) -> None:
        if not self.contains(phi):
            raise PoleError(f"phi={phi!r} is not inside {self.name} profile domain {self.phi_domain}")


S2 = Ambient(1)
H2 = Ambient(-1)


@dataclass(frozen=True)
class ProfileState:
    s: float
    phi: float
    phi_p: float
    t: float
    t_p: float


@dataclass(frozen=True)
class CurvatureSample:
    k1: float
    k2: float
    H: float
    Ke: float


def s_eps(A: Ambient, x):
    return np.sin(x) if A.epsilon == 1 else np.sinh(x)


def c_eps(A: Ambient, x):
    if A.epsilon == 1:
        # exact zero on the equator, as for eta
        return np.where(np.asarray(x) == math.pi / 2, 0.0, np.cos(x))
    return np.cosh(x)


def _eta(eps: int, x: float) -> float:
    if eps == 1:
        # cot(pi/2) in floating point is ~6e-17; the equator is exactly zero
        if x == math.pi / 2:
            return 0.0
        return math.cos(x) / math.sin(x)
    return 1.0 / math.tanh(x)


def eta_eps(A: Ambient, x: float) -> float:
    """cot (S^2) or coth (H^2); raises :class:`PoleError` near the axis."""
    A.check(x)
    return _eta(A.epsilon, x)


def curvatures(F: EllipticFunction, A: Ambient, st: ProfileState, phi_pp: float) -> CurvatureSample:
    if st.t_p == 0:
        raise ZeroDivisionError("k1 = -phi''/t' is undefined where t' = 0 (horizontal slice)")
    k1 = -phi_pp / st.t_p
    k2 = st.t_p * eta_eps(A, st.phi)
    return CurvatureSample(k1, k2, 0.5 * (k1 + k2), k1 * k2)


def normal_vector(A: Ambient, st: ProfileState, theta: float) -> np.ndarray:
    c = float(c_eps(A, st.phi))
    s = float(s_eps(A, st.phi))
    return np.array([
        st.t_p * c * math.cos(theta),
        st.t_p * c * math.sin(theta),
        -st.t_p * s,
        -st.phi_p,
    ])


def weingarten_residual(F: EllipticFunction, A: Ambient, phi: float, t_p: float, phi_pp: float) -> float:
    """Value of ``G(phi, t', phi'')``, zero exactly on solutions.

    Evaluated as ``y eta - g_bar(u)`` with ``u = (y^2 eta + z) / (2 y)``,
    which equals the defining expression ``(y^2 eta - z)/(2y) - f(u^2)``.
    """
    if t_p == 0:
        raise ZeroDivisionError("G is undefined for t' = 0")
    eta = eta_eps(A, phi)
    u = (t_p * t_p * eta + phi_pp) / (2.0 * t_p)
    return t_p * eta - g_bar(F, u)


def solve_phi_pp(F: EllipticFunction, A: Ambient, phi: float, t_p: float,
                 limits: Optional[GLimits] = None) -> Optional[float]:
    """Unique ``phi''`` with ``G(phi, t', phi'') = 0``, or ``None``.

    ``None`` means ``t' eta(phi)`` lies outside the range of ``g_bar``: the
    Weingarten relation admits no profile through this state.
    """
    if t_p == 0:
        raise ZeroDivisionError("phi'' is not determined by G where t' = 0")
    k2 = t_p * eta_eps(A, phi)
    u = invert_g_bar(F, k2, limits if limits is not None else compute_limits(F))
    if u is None:
        return None
    return 2.0 * t_p * u - t_p * k2
