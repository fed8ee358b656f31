"""Shooting the profile curve from a symmetry point.

The state is ``y = (phi, phi', t, t')``.  Writing ``phi'' = -k1 t'`` and
``t'' = k1 phi'`` (the second identity follows from unit speed) turns the
profile equation into a rotation of the unit tangent ``(phi', t')`` with
angular speed ``k1``, where

    k2 = t' eta(phi),   u = g_bar^{-1}(k2),   k1 = k2 - 2 u.

No division by ``t'`` occurs, so the catenoidal ends (``t' -> 0``) are
integrated with full relative precision in ``t'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import _rk
from .ambient import Ambient, PoleError, _eta, solve_phi_pp, weingarten_residual
from .elliptic import EllipticFunction, GLimits, compute_limits, invert_g_bar

__all__ = [
    "ShootingSpec",
    "Event",
    "Termination",
    "Profile",
    "GateFailure",
    "ExistenceGate",
    "existence_gate",
    "solve_initial_phi_pp",
    "integrate_profile",
    "reflect_profile",
    "max_residual",
]

PHI_CRITICAL = "PhiCritical"
EQUATOR_CROSSING = "EquatorCrossing"

COMPLETED = "Completed"
GATE_FAILURE = "GateFailure"
STEP_LIMIT = "StepLimit"

DEFAULT_S_MAX_H2 = 20.0
# the S^2 window is [-4T, 4T] (eight periods) after a pilot run finds T
S2_HALF_PERIODS = 4
_PILOT_S_MAX = 200.0
_FALLBACK_S_MAX = 20.0

EVENT_TOL = 1e-10
_H_MAX = 0.1
_H_MIN = 1e-14
# t' gets a vanishing absolute tolerance: it is controlled relative to itself
_TP_ATOL = 1e-290


class GateFailure(Exception):
    """No profile through the requested state.

    ``inequality`` names the violated condition, ``lhs`` and ``rhs`` are its
    two sides (the condition reads ``lhs < rhs``), ``s`` the arc-length
    parameter where it failed.
    """

    def __init__(self, inequality: str, lhs: float, rhs: float, s: float = 0.0):
        self.inequality = inequality
        self.lhs = lhs
        self.rhs = rhs
        self.s = s
        super().__init__(f"existence gate failed at s={s:g}: {inequality} "
                         f"(lhs={lhs!r}, rhs={rhs!r})")


@dataclass(frozen=True)
class ShootingSpec:
    """Initial data and controls for one integration.

    ``s_max=None`` selects the default window: 20 in H^2, four periods on
    each side of the seed in S^2.  ``phi_p0`` is an expert option: a
    non-zero value seeds away from a symmetry point, in which case both
    halves are integrated and no existence gate applies.
    """

    F: EllipticFunction
    A: Ambient
    phi0: float
    sigma: int = 1
    s_max: Optional[float] = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    phi_p0: float = 0.0

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma!r}")
        if not self.A.contains(self.phi0):
            raise ValueError(f"phi0={self.phi0!r} outside {self.A.name} domain")
        if self.A.epsilon == 1 and self.phi_p0 == 0.0 and self.phi0 > math.pi / 2:
            raise ValueError("minima in S^2 lie in (0, pi/2]; reflect the profile for the other hemisphere")
        if not -1.0 <= self.phi_p0 <= 1.0:
            raise ValueError("phi_p0 must lie in [-1, 1]")
        if self.s_max is not None and not self.s_max > 0:
            raise ValueError("s_max must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")

    @property
    def t_p0(self) -> float:
        return self.sigma * math.sqrt(1.0 - self.phi_p0 * self.phi_p0)

    @property
    def symmetric_seed(self) -> bool:
        return self.phi_p0 == 0.0

    def to_dict(self) -> dict:
        return {
            "family": self.F.to_spec(),
            "epsilon": self.A.epsilon,
            "phi0": self.phi0,
            "sigma": self.sigma,
            "s_max": self.s_max,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_steps": self.max_steps,
            "phi_p0": self.phi_p0,
        }


@dataclass(frozen=True)
class Event:
    s: float
    kind: str


@dataclass(frozen=True)
class Termination:
    kind: str
    s: Optional[float] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "s": self.s}


@dataclass(frozen=True)
class ExistenceGate:
    sigma: int
    lhs: float
    rhs: float
    inequality: str

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def to_dict(self) -> dict:
        return {"inequality": self.inequality, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def existence_gate(F: EllipticFunction, A: Ambient, phi0: float, sigma: int,
                   limits: Optional[GLimits] = None) -> ExistenceGate:
    """Condition for a profile with minimum ``phi0`` and ``sign(t') = sigma``.

    ``eta(phi0) < -ell_minus`` for ``sigma=+1`` and ``eta(phi0) < ell_plus``
    for ``sigma=-1``.
    """
    lim = limits or compute_limits(F)
    eta0 = _eta(A.epsilon, phi0)
    if sigma == 1:
        return ExistenceGate(1, eta0, -lim.ell_minus, "eta(phi0) < -lim_{r->-inf}(r - f(r^2))")
    return ExistenceGate(-1, eta0, lim.ell_plus, "eta(phi0) < lim_{r->+inf}(r - f(r^2))")


def solve_initial_phi_pp(spec: ShootingSpec) -> float:
    """``phi''(0)`` for the seed of ``spec``; raises :class:`GateFailure`."""
    A = spec.A
    A.check(spec.phi0)
    lim = compute_limits(spec.F)
    if spec.symmetric_seed:
        gate = existence_gate(spec.F, A, spec.phi0, spec.sigma, lim)
        if not gate.holds:
            raise GateFailure(gate.inequality, gate.lhs, gate.rhs, 0.0)
    if spec.t_p0 == 0.0:
        return 0.0
    z = solve_phi_pp(spec.F, A, spec.phi0, spec.t_p0, lim)
    if z is None:
        k2 = spec.t_p0 * _eta(A.epsilon, spec.phi0)
        lo, hi = lim.g_bar_range
        raise GateFailure("t' eta(phi) inside range of g_bar", k2, hi if k2 > 0 else -lo, 0.0)
    return z


class _NoSolution(Exception):
    pass


def _make_rhs(F: EllipticFunction, A: Ambient, lim: GLimits):
    eps = A.epsilon
    lo, hi = A.phi_domain
    lo += 1e-9
    hi -= 1e-9
    zero = F.family == "zero"

    def rhs(y):
        phi, p, _, q = y
        if not lo < phi < hi:
            raise PoleError(f"phi={phi!r} reached the axis")
        if q == 0.0:
            # horizontal slice: both principal curvatures vanish
            return np.array([p, 0.0, 0.0, 0.0])
        k2 = q * _eta(eps, phi)
        if zero:
            u = k2
        else:
            u = invert_g_bar(F, k2, lim)
            if u is None:
                raise _NoSolution(k2)
        k1 = k2 - 2.0 * u
        return np.array([p, -k1 * q, q, k1 * p])

    return rhs


class _Dense:
    """Piecewise continuous extension over accepted steps."""

    def __init__(self, s_a, h, y_a, K):
        s_a = np.asarray(s_a, dtype=float)
        h = np.asarray(h, dtype=float)
        lo = np.minimum(s_a, s_a + h)
        order = np.argsort(lo, kind="stable")
        self.lo = lo[order]
        self.hi = np.maximum(s_a, s_a + h)[order]
        self.s_a = s_a[order]
        self.h = h[order]
        self.y_a = np.asarray(y_a)[order]
        self.K = np.asarray(K)[order]

    @property
    def span(self):
        return float(self.lo[0]), float(self.hi[-1])

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        idx = np.clip(np.searchsorted(self.lo, s, side="right") - 1, 0, len(self.lo) - 1)
        h = self.h[idx]
        th = (s - self.s_a[idx]) / h
        powers = np.stack([th, th**2, th**3, th**4], axis=-1)  # (n, 4)
        # (n, 7, dim) x (7, 4) -> (n, dim, 4)
        Q = np.einsum("nkd,kj->ndj", self.K[idx], _rk.P)
        return self.y_a[idx] + h[:, None] * np.einsum("ndj,nj->nd", Q, powers)


class _Mirrored:
    """Dense output on ``[-s_max, s_max]`` from the forward half by symmetry."""

    def __init__(self, forward: _Dense, t0: float):
        self.forward = forward
        self.t0 = t0

    @property
    def span(self):
        a, b = self.forward.span
        return -b, b

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        y = self.forward(np.abs(s))
        neg = s < 0
        y[neg, 1] = -y[neg, 1]
        y[neg, 2] = 2.0 * self.t0 - y[neg, 2]
        return y


class _Reflected:
    def __init__(self, base, s0: float):
        self.base = base
        self.s0 = s0

    @property
    def span(self):
        a, b = self.base.span
        return 2 * self.s0 - b, 2 * self.s0 - a

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        y = self.base(2.0 * self.s0 - s)
        y[:, 0] = math.pi - y[:, 0]
        y[:, 3] = -y[:, 3]
        return y


@dataclass(frozen=True, eq=False)
class Profile:
    """An integrated profile with dense output.

    Sample arrays are sorted by ``s``.  ``dense(s)`` returns the interpolated
    states ``(phi, phi', t, t')`` as an ``(n, 4)`` array.
    """

    spec: ShootingSpec
    s: np.ndarray
    phi: np.ndarray
    phi_p: np.ndarray
    t: np.ndarray
    t_p: np.ndarray
    phi_pp: np.ndarray
    events: tuple
    termination: Termination
    dense: Callable = field(repr=False)
    max_unit_drift: float = 0.0
    mirrored: bool = True
    reflected_about: Optional[float] = None

    @property
    def epsilon(self) -> int:
        return self.spec.A.epsilon

    @property
    def sigma(self) -> int:
        nz = self.t_p[self.t_p != 0]
        return int(np.sign(nz[0])) if nz.size else 0

    @property
    def completed(self) -> bool:
        return self.termination.kind == COMPLETED

    def __len__(self):
        return self.s.size

    def state_at(self, s):
        return self.dense(s)

    def phi_pp_at(self, s):
        """``phi''`` re-solved from the interpolated state."""
        y = self.dense(s)
        rhs = _make_rhs(self.spec.F, self.spec.A, compute_limits(self.spec.F))
        return np.array([rhs(row)[1] for row in y])

    def events_of(self, kind: str) -> list:
        return [e.s for e in self.events if e.kind == kind]

    def states(self):
        from .ambient import ProfileState
        for row in zip(self.s, self.phi, self.phi_p, self.t, self.t_p):
            yield ProfileState(*map(float, row))

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "events": [{"s": e.s, "kind": e.kind} for e in self.events],
            "termination": self.termination.to_dict(),
            "n_samples": int(self.s.size),
            "max_unit_drift": self.max_unit_drift,
            "mirrored": self.mirrored,
            "reflected_about": self.reflected_about,
        }


def _locate(dense_step, fn, tol_s, h):
    """Bisect ``fn(dense_step(theta))`` on ``[0, 1]`` to ``tol_s`` in ``s``."""
    a, b = 0.0, 1.0
    fa = fn(dense_step(a))
    while abs(h) * (b - a) > tol_s:
        m = 0.5 * (a + b)
        fm = fn(dense_step(m))
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _march(spec: ShootingSpec, rhs, y0, s_end: float, stop_at_critical: bool = False):
    """Adaptive integration from ``s=0`` to ``s_end`` (either sign)."""
    direction = 1.0 if s_end > 0 else -1.0
    atol = np.array([spec.abs_tol, spec.abs_tol, spec.abs_tol, _TP_ATOL])
    rtol = spec.rel_tol
    eps = spec.A.epsilon
    half_pi = math.pi / 2

    s = 0.0
    y = np.array(y0, dtype=float)
    f = rhs(y)
    h = direction * min(_H_MAX, 1e-3, abs(s_end))

    samples_s = [0.0]
    samples_y = [y.copy()]
    samples_pp = [f[1]]
    seg_s, seg_h, seg_y, seg_K = [], [], [], []
    events = []
    max_drift = 0.0
    termination = Termination(COMPLETED)
    n_steps = 0

    while direction * (s_end - s) > 0:
        if n_steps >= spec.max_steps:
            termination = Termination(STEP_LIMIT, s)
            break
        if direction * (s + h - s_end) > 0:
            h = s_end - s
        try:
            y_new, _, err, K = _rk.step(rhs, y, f, h)
        except (PoleError, _NoSolution) as exc:
            if abs(h) > _H_MIN:
                h *= 0.25
                continue
            if isinstance(exc, _NoSolution):
                termination = Termination(GATE_FAILURE, s)
                break
            raise
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = math.sqrt(float(np.mean((err / scale) ** 2)))
        if err_norm > 1.0 or not math.isfinite(err_norm):
            fac = 0.2 if not math.isfinite(err_norm) else max(0.2, 0.9 * err_norm ** (-1 / _rk.ORDER))
            h *= fac
            if abs(h) < _H_MIN:
                raise FloatingPointError(f"step size underflow at s={s!r}")
            continue
        n_steps += 1

        # project (phi', t') back onto the unit circle
        p, q = y_new[1], y_new[3]
        max_drift = max(max_drift, abs(p * p + q * q - 1.0))
        n = math.hypot(p, q)
        y_proj = y_new.copy()
        y_proj[1] = p / n
        y_proj[3] = q / n
        try:
            f_new = rhs(y_proj)
        except _NoSolution:
            termination = Termination(GATE_FAILURE, s + h)
            break

        seg_s.append(s)
        seg_h.append(h)
        seg_y.append(y.copy())
        seg_K.append(K)

        def at(theta, y=y, h=h, K=K):
            return _rk.dense(y, h, K, theta)

        hit_critical = None
        if y[1] * y_new[1] < 0 or (y_new[1] == 0.0 and y[1] != 0.0):
            th = _locate(at, lambda v: v[1], EVENT_TOL, h)
            events.append(Event(s + th * h, PHI_CRITICAL))
            hit_critical = s + th * h
        if eps == 1:
            da, db = y[0] - half_pi, y_new[0] - half_pi
            if da * db < 0 or (db == 0.0 and da != 0.0):
                th = _locate(at, lambda v: v[0] - half_pi, EVENT_TOL, h)
                events.append(Event(s + th * h, EQUATOR_CROSSING))

        s = s + h
        y = y_proj
        f = f_new
        samples_s.append(s)
        samples_y.append(y.copy())
        samples_pp.append(f[1])

        if stop_at_critical and hit_critical is not None:
            break

        fac = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * err_norm ** (-1 / _rk.ORDER)))
        h = direction * min(_H_MAX, abs(h) * fac)

    events.sort(key=lambda e: direction * e.s)
    return dict(
        s=np.array(samples_s), y=np.array(samples_y), phi_pp=np.array(samples_pp),
        seg=(seg_s, seg_h, seg_y, seg_K), events=events, termination=termination,
        max_drift=max_drift,
    )


def _default_s_max(spec: ShootingSpec, rhs, y0) -> float:
    if spec.A.epsilon == -1:
        return DEFAULT_S_MAX_H2
    if not spec.symmetric_seed or spec.phi0 == math.pi / 2:
        return _FALLBACK_S_MAX
    pilot = _march(replace(spec, rel_tol=max(spec.rel_tol, 1e-8)), rhs, y0, _PILOT_S_MAX,
                   stop_at_critical=True)
    crit = [e.s for e in pilot["events"] if e.kind == PHI_CRITICAL and e.s > 0]
    if not crit:
        return _FALLBACK_S_MAX
    period = 2.0 * crit[0]
    return S2_HALF_PERIODS * period


def integrate_profile(spec: ShootingSpec, reintegrate_backward: bool = False) -> Profile:
    """Integrate the profile through the seed of ``spec``.

    From a symmetry seed only the forward half ``[0, s_max]`` is integrated;
    the backward half follows from ``phi(-s) = phi(s)``, ``t(-s) = -t(s)``.
    ``reintegrate_backward=True`` integrates ``[-s_max, 0]`` independently
    instead (a diagnostic for the symmetry).  Raises :class:`GateFailure`
    when no profile leaves the seed.
    """
    z0 = solve_initial_phi_pp(spec)
    lim = compute_limits(spec.F)
    rhs = _make_rhs(spec.F, spec.A, lim)
    y0 = np.array([spec.phi0, spec.phi_p0, 0.0, spec.t_p0])
    if spec.s_max is None:
        spec = replace(spec, s_max=_default_s_max(spec, rhs, y0))
    s_max = spec.s_max

    fwd = _march(spec, rhs, y0, s_max)
    # the seed is an isolated critical point unless phi is constant (cylinder)
    seed_events = [Event(0.0, PHI_CRITICAL)] if spec.symmetric_seed and z0 != 0.0 else []

    if spec.symmetric_seed and not reintegrate_backward:
        s_f, y_f, pp_f = fwd["s"], fwd["y"], fwd["phi_pp"]
        s_b = -s_f[:0:-1]
        y_b = y_f[:0:-1].copy()
        y_b[:, 1] = -y_b[:, 1]
        y_b[:, 2] = -y_b[:, 2]
        pp_b = pp_f[:0:-1]
        back_events = [Event(-e.s, e.kind) for e in reversed(fwd["events"])]
        dense = _Mirrored(_Dense(*fwd["seg"]), 0.0)
        termination = fwd["termination"]
        drift = fwd["max_drift"]
        mirrored = True
    else:
        bwd = _march(spec, rhs, y0, -s_max)
        s_b, y_b, pp_b = bwd["s"][:0:-1], bwd["y"][:0:-1], bwd["phi_pp"][:0:-1]
        back_events = list(reversed(bwd["events"]))
        segs = [a + b for a, b in zip(bwd["seg"], fwd["seg"])]
        dense = _Dense(*segs)
        termination = fwd["termination"]
        if bwd["termination"].kind != COMPLETED and termination.kind == COMPLETED:
            termination = bwd["termination"]
        drift = max(fwd["max_drift"], bwd["max_drift"])
        mirrored = False

    s_all = np.concatenate([s_b, fwd["s"]])
    y_all = np.concatenate([y_b, fwd["y"]])
    pp_all = np.concatenate([pp_b, fwd["phi_pp"]])
    events = tuple(back_events + seed_events + fwd["events"])
    arrays = [s_all, y_all[:, 0], y_all[:, 1], y_all[:, 2], y_all[:, 3], pp_all]
    for a in arrays:
        a.setflags(write=False)
    return Profile(spec, *arrays, events=events, termination=termination, dense=dense,
                   max_unit_drift=drift, mirrored=mirrored)


def max_residual(P: Profile) -> float:
    """Largest ``|G(phi, t', phi'')|`` over the samples with ``t' != 0``."""
    F, A = P.spec.F, P.spec.A
    worst = 0.0
    for phi, q, z in zip(P.phi, P.t_p, P.phi_pp):
        if q != 0.0:
            worst = max(worst, abs(weingarten_residual(F, A, float(phi), float(q), float(z))))
    return worst


def reflect_profile(P: Profile, s0: float = 0.0) -> Profile:
    """The profile ``phi -> pi - phi(2 s0 - s)``, ``t -> t(2 s0 - s)`` (S^2 only).

    The result solves the same Weingarten relation with the opposite sign of
    ``t'``; this is checked on every sample.
    """
    if P.epsilon != 1:
        raise ValueError("reflection through the equator exists only in S^2 x R")
    s_new = (2.0 * s0 - P.s)[::-1]
    arrays = [
        s_new,
        (math.pi - P.phi)[::-1],
        P.phi_p[::-1].copy(),
        P.t[::-1].copy(),
        (-P.t_p)[::-1],
        (-P.phi_pp)[::-1],
    ]
    for a in arrays:
        a.setflags(write=False)
    events = tuple(Event(2.0 * s0 - e.s, e.kind) for e in reversed(P.events))
    R = Profile(P.spec, *arrays, events=events, termination=P.termination,
                dense=_Reflected(P.dense, s0), max_unit_drift=P.max_unit_drift,
                mirrored=P.mirrored, reflected_about=s0)
    res = max_residual(R)
    if res > 1e-8:
        raise ArithmeticError(f"reflected profile violates the Weingarten relation (|G|={res:g})")
    return R
