"""Surface type and geometric descriptors of an integrated profile.

Every complete profile is a horizontal slice, the vertical cylinder
``phi = pi/2`` (S^2 only), a catenoidal surface (H^2) or an unduloidal
surface (S^2).  A profile that fits none of these is reported as an
integration fault via :class:`InconsistentProfileError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ambient import _eta
from .elliptic import compute_limits
from .integrator import COMPLETED, EQUATOR_CROSSING, PHI_CRITICAL, Profile, existence_gate

__all__ = [
    "SLICE",
    "CYLINDER",
    "CATENOIDAL",
    "UNDULOIDAL",
    "ClassificationReport",
    "TailEstimate",
    "InconsistentProfileError",
    "InsufficientEventsError",
    "classify",
    "estimate_period",
    "estimate_t_infinity",
    "check_symmetry",
]

SLICE = "Slice"
CYLINDER = "Cylinder"
CATENOIDAL = "Catenoidal"
UNDULOIDAL = "Unduloidal"

TOL_CYLINDER = 1e-8
TOL_SYMMETRY = 1e-7
TOL_INFLECTION = 1e-7
TOL_PERIOD = 1e-7
TOL_UNIT_SPEED = 1e-9
# rms misfit of log|t'| against a line; for f != 0 the decay rate drifts by O(t') along the tail
TAIL_FIT_MAX_RESIDUAL = 1e-3
TAIL_FRACTION = 0.25
# the fitted exponential must decay by at least this many e-folds over the tail window
TAIL_MIN_EFOLDS = 2.0
# |phi - pi/2| below this leaves the sign of phi'' undecided
_EQUATOR_BAND = 1e-9


class InconsistentProfileError(RuntimeError):
    """The profile matches no surface type; the integration is at fault."""


class InsufficientEventsError(ValueError):
    """Too few critical points of ``phi`` in the window to measure a period."""


@dataclass
class ClassificationReport:
    kind: str
    phi_min: Optional[float] = None
    phi_max: Optional[float] = None
    period_T: Optional[float] = None
    vertical_period: Optional[float] = None
    t_infinity: Optional[float] = None
    s1: Optional[float] = None
    s2: Optional[float] = None
    s3: Optional[float] = None
    decay_rate_b: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(d["passed"] for d in self.diagnostics.values())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "phi_min": self.phi_min,
            "phi_max": self.phi_max,
            "period_T": self.period_T,
            "vertical_period": self.vertical_period,
            "t_infinity": self.t_infinity,
            "s1": self.s1,
            "s2": self.s2,
            "s3": self.s3,
            "decay_rate_b": self.decay_rate_b,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class TailEstimate:
    t_inf: float
    decay_rate_b: float
    residual: float
    converged: bool

    def __iter__(self):
        return iter((self.t_inf, self.decay_rate_b))


def _diag(value, threshold, passed=None):
    value = float(value)
    if passed is None:
        passed = value <= threshold
    return {"passed": bool(passed), "value": value, "threshold": float(threshold)}


def check_symmetry(P: Profile, s0: float) -> float:
    """Largest mismatch of the profile and its mirror image about ``s = s0``.

    Sums ``|phi(s) - phi(2 s0 - s)|`` and ``|t(s) + t(2 s0 - s) - 2 t(s0)|``
    over samples whose mirror point lies inside the window.
    """
    lo, hi = P.s[0], P.s[-1]
    mask = (2 * s0 - P.s >= lo) & (2 * s0 - P.s <= hi)
    if not mask.any():
        return 0.0
    partner = P.dense(2 * s0 - P.s[mask])
    t0 = P.dense(s0)[0, 2]
    d = np.abs(P.phi[mask] - partner[:, 0]) + np.abs(P.t[mask] + partner[:, 2] - 2 * t0)
    return float(d.max())


def _critical_points(P: Profile):
    crit = np.array(P.events_of(PHI_CRITICAL))
    if crit.size == 0:
        return crit, crit
    phis = P.dense(crit)[:, 0]
    return crit, phis


def _neck(P: Profile) -> float:
    """The minimum of ``phi`` nearest to ``s = 0``."""
    crit, phis = _critical_points(P)
    if P.epsilon == 1:
        crit = crit[phis < math.pi / 2]
    if crit.size == 0:
        raise InconsistentProfileError("no local minimum of phi inside the integration window")
    return float(crit[np.argmin(np.abs(crit))])


def _period_details(P: Profile):
    crit, phis = _critical_points(P)
    if crit.size < 3:
        raise InsufficientEventsError(
            f"{crit.size} critical points of phi in the window; need 3 (about 1.5 periods)")
    s1 = _neck(P)
    later = crit[crit > s1]
    earlier = crit[crit < s1]
    if later.size == 0:
        raise InsufficientEventsError("no maximum of phi after the chosen minimum")
    s2 = float(later[0])
    T = 2.0 * (s2 - s1)
    ts = P.dense([s1, s2])[:, 2]
    T_tilde = 2.0 * (ts[1] - ts[0])
    if later.size >= 2:
        deviation = abs(float(later[1]) - s1 - T)
    elif earlier.size >= 2:
        deviation = abs(s1 - float(earlier[-2]) - T)
    else:
        raise InsufficientEventsError("cannot cross-check the period with a second minimum")
    return s1, s2, T, float(T_tilde), deviation


def estimate_period(P: Profile) -> tuple[float, float]:
    """``(T, T_tilde)`` from the arc-length gap between a minimum and the next maximum.

    The result is cross-checked against the spacing of consecutive minima.
    """
    s1, s2, T, T_tilde, deviation = _period_details(P)
    if deviation > TOL_PERIOD * T:
        raise InconsistentProfileError(
            f"minima spacing disagrees with 2(s2 - s1) by {deviation:g}")
    return T, T_tilde


def estimate_t_infinity(P: Profile, s_center: Optional[float] = None) -> TailEstimate:
    """Asymptotic half-height of a catenoidal profile.

    Fits ``log|t'(s)| = log c - b s`` over the last quarter of the forward
    half by least squares and closes the tail integral analytically:
    ``t_inf = |t(s_end) - t(s_center)| + |t'(s_end)| / b``.  When the fit is
    poor or the window spans fewer than ``TAIL_MIN_EFOLDS`` decay lengths
    (not yet in the exponential regime) ``converged`` is False and
    ``t_inf`` is the lower bound ``|t(s_end) - t(s_center)|``.
    """
    if P.epsilon != -1:
        raise ValueError("t_infinity is defined for catenoidal profiles in H^2 x R")
    if s_center is None:
        s_center = _neck(P)
    fwd = P.s >= s_center
    s, t, tp = P.s[fwd], P.t[fwd], P.t_p[fwd]
    t_c = float(P.dense(s_center)[0, 2])
    start = s_center + (1.0 - TAIL_FRACTION) * (s[-1] - s_center)
    tail = s >= start
    reach = abs(float(t[-1]) - t_c)
    if tail.sum() < 3 or np.any(tp[tail] == 0):
        return TailEstimate(reach, math.nan, math.inf, False)
    slope, icpt = np.polyfit(s[tail], np.log(np.abs(tp[tail])), 1)
    resid = np.log(np.abs(tp[tail])) - (slope * s[tail] + icpt)
    rms = float(np.sqrt(np.mean(resid**2)))
    b = -float(slope)
    efolds = b * float(s[-1] - start)
    if not b > 0 or rms > TAIL_FIT_MAX_RESIDUAL or efolds < TAIL_MIN_EFOLDS:
        return TailEstimate(reach, b, rms, False)
    return TailEstimate(reach + abs(float(tp[-1])) / b, b, rms, True)


def _common_diagnostics(P: Profile) -> dict:
    diags = {}
    drift = float(np.max(np.abs(P.phi_p**2 + P.t_p**2 - 1.0)))
    diags["unit_speed"] = _diag(max(drift, P.max_unit_drift), TOL_UNIT_SPEED)
    # k1 k2 = (phi''/t') (t' eta) = phi'' eta up to the sign of t'^2
    eta = np.array([_eta(P.epsilon, x) for x in P.phi])
    ke = -P.phi_pp * eta
    diags["extrinsic_curvature_sign"] = _diag(max(0.0, float(ke.max())), 0.0)
    sigma = P.sigma
    dt = np.diff(P.t) * sigma
    diags["t_monotone"] = _diag(-float(dt.min()), 0.0,
                                passed=bool(dt.min() >= 0 and (P.t[-1] - P.t[0]) * sigma > 0))
    return diags


def _gate_diagnostic(P: Profile, phi_min: float) -> dict:
    gate = existence_gate(P.spec.F, P.spec.A, phi_min, P.sigma, compute_limits(P.spec.F))
    return _diag(gate.lhs - gate.rhs, 0.0, passed=gate.holds)


def classify(P: Profile) -> ClassificationReport:
    if P.termination.kind != COMPLETED:
        raise ValueError(f"cannot classify a profile that terminated with {P.termination.kind}")
    t0 = float(P.dense(0.0)[0, 2])
    if float(np.max(np.abs(P.t - t0))) <= 1e-10 * (1.0 + abs(t0)):
        return ClassificationReport(SLICE, diagnostics={
            "height_spread": _diag(np.max(np.abs(P.t - t0)), 1e-10 * (1.0 + abs(t0)))})

    if P.epsilon == 1:
        dev = float(np.max(np.abs(P.phi - math.pi / 2)))
        if dev <= TOL_CYLINDER:
            diags = {"equator_deviation": _diag(dev, TOL_CYLINDER)}
            diags.update(_common_diagnostics(P))
            rep = ClassificationReport(CYLINDER, phi_min=float(P.phi.min()),
                                       phi_max=float(P.phi.max()), diagnostics=diags)
        else:
            rep = _classify_unduloid(P)
    else:
        rep = _classify_catenoid(P)

    if not rep.passed:
        failed = [k for k, d in rep.diagnostics.items() if not d["passed"]]
        raise InconsistentProfileError(f"{rep.kind} diagnostics failed: {', '.join(failed)}")
    return rep


def _classify_catenoid(P: Profile) -> ClassificationReport:
    sc = _neck(P)
    phi_min = float(P.dense(sc)[0, 0])
    tail = estimate_t_infinity(P, sc)
    t_c = float(P.dense(sc)[0, 2])
    diags = _common_diagnostics(P)
    diags["convexity"] = _diag(-float(P.phi_pp.min()), 0.0, passed=bool(P.phi_pp.min() > 0))
    dp = np.diff(P.phi_p)
    # phi' saturates at +-1 in the tails, where projection rounding wobbles it by an ulp
    diags["phi_p_increasing"] = _diag(-float(dp.min()), 4 * np.finfo(float).eps)
    diags["symmetry"] = _diag(check_symmetry(P, sc), TOL_SYMMETRY)
    diags["tail_fit"] = _diag(tail.residual, TAIL_FIT_MAX_RESIDUAL, passed=tail.converged)
    spread = float(np.max(np.abs(P.t - t_c)))
    diags["height_bound"] = _diag(spread - tail.t_inf, 0.0)
    diags["existence_gate"] = _gate_diagnostic(P, phi_min)
    return ClassificationReport(
        CATENOIDAL, phi_min=phi_min, t_infinity=tail.t_inf, s1=sc,
        decay_rate_b=tail.decay_rate_b, diagnostics=diags)


def _classify_unduloid(P: Profile) -> ClassificationReport:
    s1, s2, T, T_tilde, deviation = _period_details(P)
    y = P.dense([s1, s2])
    phi_min, phi_max = float(y[0, 0]), float(y[1, 0])
    crossings = [s for s in P.events_of(EQUATOR_CROSSING) if s1 < s < s2]
    if not crossings:
        raise InconsistentProfileError("no equator crossing between a minimum and the next maximum")
    s3 = float(crossings[0])

    diags = _common_diagnostics(P)
    diags["hemispheres"] = _diag(0.0, 0.0, passed=phi_min < math.pi / 2 < phi_max)
    diags["symmetry_min"] = _diag(check_symmetry(P, s1), TOL_SYMMETRY)
    diags["symmetry_max"] = _diag(check_symmetry(P, s2), TOL_SYMMETRY)
    diags["period_consistency"] = _diag(deviation, TOL_PERIOD * T)
    pp = P.phi_pp_at([s3, 2 * s1 - s3])
    diags["inflection"] = _diag(np.max(np.abs(pp)), TOL_INFLECTION)
    off = np.abs(P.phi - math.pi / 2) > _EQUATOR_BAND
    wrong = (P.phi_pp * (math.pi / 2 - P.phi) <= 0) & off
    diags["curvature_sign"] = _diag(int(wrong.sum()), 0)
    diags["existence_gate"] = _gate_diagnostic(P, phi_min)
    return ClassificationReport(
        UNDULOIDAL, phi_min=phi_min, phi_max=phi_max, period_T=T, vertical_period=T_tilde,
        s1=s1, s2=s2, s3=s3, diagnostics=diags)
