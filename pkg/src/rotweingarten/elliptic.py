"""Admissible Weingarten relations ``H = f(H^2 - K_e)`` of minimal type.

Three closed-form families are supported::

    zero              f(x) = 0
    rational:c=<c>    f(x) = c x / (1 + x)
    sqrtshift:a=<a>   f(x) = a (1 - sqrt(1 + x))

All of them satisfy ``f(0) = 0``.  Ellipticity (``4 x f'(x)^2 < 1``) depends
on the parameter and is decided by :func:`check_ellipticity`.
"""
from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

__all__ = [
    "EllipticFunction",
    "EllipticityReport",
    "GLimits",
    "DomainError",
    "parse_family",
    "eval_f",
    "eval_f_prime",
    "check_ellipticity",
    "g",
    "g_bar",
    "compute_limits",
    "invert_g_bar",
]

FAMILIES = ("zero", "rational", "sqrtshift")

DEFAULT_X_MAX = 1e6
DEFAULT_GRID_SIZE = 4096

_MAX_DOUBLINGS = 200
_LIMIT_CUTOFF = 1e12


class DomainError(ValueError):
    """Argument outside the domain of ``f`` (negative ``x``)."""


@dataclass(frozen=True)
class EllipticFunction:
    """One member of a built-in family.

    ``param`` is ``c`` for ``rational`` and ``a`` for ``sqrtshift``; it is
    ignored (and normalised to 0) for ``zero``.
    """

    family: str = "zero"
    param: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "zero":
            object.__setattr__(self, "param", 0.0)
        else:
            p = float(self.param)
            if not math.isfinite(p):
                raise ValueError(f"non-finite parameter {self.param!r}")
            object.__setattr__(self, "param", p)

    @classmethod
    def zero(cls) -> "EllipticFunction":
        return cls("zero", 0.0)

    @classmethod
    def rational(cls, c: float) -> "EllipticFunction":
        return cls("rational", c)

    @classmethod
    def sqrtshift(cls, a: float) -> "EllipticFunction":
        return cls("sqrtshift", a)

    def to_spec(self) -> str:
        if self.family == "zero":
            return "zero"
        key = "c" if self.family == "rational" else "a"
        return f"{self.family}:{key}={self.param!r}"

    def __str__(self):
        return self.to_spec()


_SPEC_RE = re.compile(r"^(?P<fam>[a-z]+)(?::(?P<key>[a-z]+)=(?P<val>.*))?$")


def parse_family(text: str) -> EllipticFunction:
    """Parse ``zero``, ``rational:c=<float>`` or ``sqrtshift:a=<float>``.

    Raises ``ValueError`` naming the offending token.
    """
    text = text.strip()
    m = _SPEC_RE.match(text)
    if m is None:
        raise ValueError(f"malformed family spec {text!r}")
    fam, key, val = m.group("fam"), m.group("key"), m.group("val")
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {fam!r}")
    if fam == "zero":
        if key is not None:
            raise ValueError(f"family 'zero' takes no parameter, got {key!r}")
        return EllipticFunction.zero()
    expected = "c" if fam == "rational" else "a"
    if key is None:
        raise ValueError(f"family {fam!r} requires parameter {expected!r}")
    if key != expected:
        raise ValueError(f"unexpected parameter {key!r} for family {fam!r}")
    try:
        value = float(val)
    except ValueError:
        raise ValueError(f"bad value {val!r} for parameter {key!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"bad value {val!r} for parameter {key!r}")
    return EllipticFunction(fam, value)


def _f(F: EllipticFunction, x: float) -> float:
    if F.family == "zero":
        return 0.0
    if F.family == "rational":
        return F.param * x / (1.0 + x)
    # a (1 - sqrt(1+x)) written without cancellation for small x
    return -F.param * x / (1.0 + math.sqrt(1.0 + x))


def _f_prime(F: EllipticFunction, x: float) -> float:
    if F.family == "zero":
        return 0.0
    if F.family == "rational":
        return F.param / (1.0 + x) ** 2
    return -F.param / (2.0 * math.sqrt(1.0 + x))


def eval_f(F: EllipticFunction, x: float) -> float:
    if x < 0:
        raise DomainError(f"f is defined on [0, inf), got x={x!r}")
    return _f(F, x)


def eval_f_prime(F: EllipticFunction, x: float) -> float:
    if x < 0:
        raise DomainError(f"f' is defined on [0, inf), got x={x!r}")
    return _f_prime(F, x)


@dataclass(frozen=True)
class EllipticityReport:
    admissible: bool
    sup_value: float
    witness_x: float
    grid_size: int
    analytic_bound: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _analytic_sup(F: EllipticFunction):
    """Closed-form ``sup 4 x f'(x)^2`` as ``(bound, argmax, attained)``."""
    if F.family == "zero":
        return 0.0, 0.0, True
    if F.family == "rational":
        # 4x/(1+x)^4 peaks at x = 1/3 with value 27/64
        return F.param**2 * 27.0 / 64.0, 1.0 / 3.0, True
    # a^2 x/(1+x) increases to a^2 without reaching it
    return F.param**2, math.inf, F.param == 0.0


def check_ellipticity(F: EllipticFunction, x_max: float = DEFAULT_X_MAX,
                      grid_size: int = DEFAULT_GRID_SIZE) -> EllipticityReport:
    """Decide whether ``4 x f'(x)^2 < 1`` on ``[0, inf)``.

    The closed-form supremum of each family decides admissibility; a
    log-spaced scan of ``[0, x_max]`` provides ``sup_value`` and the
    witness location as a cross-check.  A supremum equal to 1 that is
    never attained (``sqrtshift`` with ``|a| = 1``) still counts as
    admissible because the inequality holds pointwise.
    """
    if not x_max > 0:
        raise ValueError("x_max must be positive")
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    xs = np.concatenate(([0.0], np.logspace(-12, math.log10(x_max), grid_size - 1)))
    vals = np.array([4.0 * x * _f_prime(F, x) ** 2 for x in xs])
    i = int(np.argmax(vals))
    grid_sup, grid_x = float(vals[i]), float(xs[i])

    bound, argmax, attained = _analytic_sup(F)
    admissible = bound < 1.0 or (bound == 1.0 and not attained)
    if not admissible:
        # witness: the first grid point violating the inequality, if any
        bad = np.nonzero(vals >= 1.0)[0]
        witness = float(xs[bad[0]]) if bad.size else (argmax if math.isfinite(argmax) else grid_x)
        return EllipticityReport(False, max(bound, grid_sup), witness, grid_size, bound)
    if attained and math.isfinite(argmax):
        return EllipticityReport(True, bound, argmax, grid_size, bound)
    return EllipticityReport(True, grid_sup, grid_x, grid_size, bound)


def g(F: EllipticFunction, x: float) -> float:
    """``x - f(x^2)``."""
    if F.family == "sqrtshift":
        return -g_bar(F, -x)
    return x - _f(F, x * x)


def g_bar(F: EllipticFunction, x: float) -> float:
    """``x + f(x^2)``."""
    if F.family == "sqrtshift" and abs(x) > 1.0:
        # x + a - a sqrt(1+x^2) regrouped so that large |x| keeps full precision
        a = F.param
        root = math.sqrt(1.0 + x * x)
        if x > 0:
            return (1.0 - a) * x + a - a / (x + root)
        return (1.0 + a) * x + a - a / (root - x)
    return x + _f(F, x * x)


def _g_bar_prime(F: EllipticFunction, x: float) -> float:
    return 1.0 + 2.0 * x * _f_prime(F, x * x)


@dataclass(frozen=True)
class GLimits:
    """Limits of ``r - f(r^2)`` as ``r -> -inf`` and ``r -> +inf``."""

    ell_minus: float
    ell_plus: float

    @property
    def g_bar_range(self) -> tuple[float, float]:
        # g_bar(u) = -g(-u)
        return -self.ell_plus, -self.ell_minus


def _numeric_limit(F: EllipticFunction, sign: int, kmax: int = 200) -> float:
    prev = None
    for k in range(kmax):
        val = g(F, sign * 2.0**k)
        if abs(val) > _LIMIT_CUTOFF:
            return sign * math.inf
        if prev is not None and abs(val - prev) <= 1e-14 * max(1.0, abs(val)):
            return val
        prev = val
    return prev


def compute_limits(F: EllipticFunction) -> GLimits:
    if F.family in ("zero", "rational"):
        return GLimits(-math.inf, math.inf)
    if F.family == "sqrtshift":
        a = F.param
        # r - a + a sqrt(1+r^2) ~ (1 -+ a)|r| at -+inf; the linear term dies at a = +-1
        ell_minus = -a if a == 1.0 else (-math.inf if a < 1.0 else math.nan)
        ell_plus = -a if a == -1.0 else (math.inf if a > -1.0 else math.nan)
        if math.isnan(ell_minus) or math.isnan(ell_plus):
            raise ValueError(f"{F} is not elliptic; limits undefined")
        return GLimits(ell_minus, ell_plus)
    return GLimits(_numeric_limit(F, -1), _numeric_limit(F, +1))


def invert_g_bar(F: EllipticFunction, w: float, limits: Optional[GLimits] = None) -> Optional[float]:
    """Solve ``g_bar(u) = w``; ``None`` when ``w`` is outside the range.

    The range of ``g_bar`` is the open interval ``(-ell_plus, -ell_minus)``.
    A bracket is grown by doubling from ``u = w`` and the root is refined by
    Newton steps that fall back to bisection whenever they leave the bracket.
    """
    if w == 0.0:
        return 0.0
    if F.family == "zero":
        return w
    lim = limits if limits is not None else compute_limits(F)
    lo_w, hi_w = lim.g_bar_range
    if not (lo_w < w < hi_w):
        return None

    def resid(u):
        return g_bar(F, u) - w

    # g_bar(u) - u = f(u^2) keeps sign(u) = sign(w) at the root
    u = w
    r = resid(u)
    if r == 0.0:
        return u
    if (r > 0) == (w > 0):
        a, b = 0.0, u
    else:
        a = b = u
        for _ in range(_MAX_DOUBLINGS):
            b = 2.0 * a
            rb = resid(b)
            if rb == 0.0:
                return b
            if (rb > 0) == (w > 0):
                break
            a = b
        else:
            return None
    lo, hi = min(a, b), max(a, b)
    rlo = resid(lo)
    x = u if lo < u < hi else 0.5 * (lo + hi)
    for _ in range(200):
        r = resid(x)
        if r == 0.0:
            return x
        if (r < 0) == (rlo < 0):
            lo, rlo = x, r
        else:
            hi = x
        d = _g_bar_prime(F, x)
        xn = x - r / d if d > 0 else math.nan
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        done = abs(xn - x) <= 1e-15 * abs(x) or hi - lo <= 1e-15 * abs(x)
        x = xn
        if done:
            break
    return x
