"""Text emitters: profile CSV, JSON documents and Wavefront OBJ meshes.

Floats in CSV and OBJ are written with 17 significant digits so that every
double round-trips; JSON uses Python's shortest round-trip ``repr``.  The
output is a pure function of its inputs, so identical runs are byte-equal.
"""
from __future__ import annotations

import io
import json
import math

import numpy as np

from .ambient import c_eps, s_eps
from .integrator import Profile

__all__ = [
    "fmt",
    "profile_csv",
    "profile_json",
    "to_json",
    "mesh_obj",
    "PROFILE_CSV_HEADER",
    "SWEEP_CSV_HEADER",
]

PROFILE_CSV_HEADER = "s,phi,phi_p,t,t_p,k1,k2,H,Ke"
SWEEP_CSV_HEADER = "phi0,kind,T,T_tilde,t_infinity,decay_rate_b,gate_lhs,gate_rhs"


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no literal for these
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _curvature_columns(P: Profile):
    eps = P.epsilon
    eta = np.cos(P.phi) / np.sin(P.phi) if eps == 1 else 1.0 / np.tanh(P.phi)
    if eps == 1:
        eta = np.where(P.phi == math.pi / 2, 0.0, eta)
    k2 = P.t_p * eta
    with np.errstate(divide="ignore", invalid="ignore"):
        k1 = np.where(P.t_p != 0, -P.phi_pp / np.where(P.t_p != 0, P.t_p, 1.0), 0.0)
    return k1, k2, 0.5 * (k1 + k2), k1 * k2


def profile_csv(P: Profile) -> str:
    """One row per sample with curvatures recomputed from the state.

    Slice samples (``t' = 0``) have all curvatures equal to zero.
    """
    k1, k2, H, Ke = _curvature_columns(P)
    out = io.StringIO()
    out.write(PROFILE_CSV_HEADER + "\n")
    cols = (P.s, P.phi, P.phi_p, P.t, P.t_p, k1, k2, H, Ke)
    for row in zip(*cols):
        out.write(",".join(fmt(v) for v in row) + "\n")
    return out.getvalue()


def profile_json(P: Profile) -> str:
    return to_json(P.to_dict())


def _projected(P: Profile):
    """Stereographic (S^2) or Poincare-disk (H^2) radius and its normal data."""
    c = c_eps(P.spec.A, P.phi)
    rho = s_eps(P.spec.A, P.phi) / (1.0 + c)
    # d rho / d phi = 1 / (1 + C(phi)) in both models
    rho_p = P.phi_p / (1.0 + c)
    return rho, rho_p


def mesh_obj(P: Profile, segments: int = 32, poincare: bool = False) -> str:
    """Surface of revolution as a triangulated Wavefront OBJ.

    Vertices are ``F(s_i, theta_j)`` for every profile sample ``s_i`` and
    ``segments`` equally spaced angles; vertex ``(i, j)`` has 1-based index
    ``i * segments + j + 1``.  By default the ambient chart is written
    verbatim: ``v x1 x2 x3 t`` (S^2 in R^3 or the hyperboloid model of
    H^2, then height), with 4-component normals.  With ``poincare=True``
    the base is projected by ``(x1, x2) / (1 + x3)`` and a plain 3-d mesh
    ``v X Y t`` with Euclidean unit normals is written instead.
    """
    if segments < 8:
        raise ValueError("need at least 8 angular segments")
    A = P.spec.A
    theta = 2.0 * math.pi * np.arange(segments) / segments
    ct, st = np.cos(theta), np.sin(theta)
    S = s_eps(A, P.phi)
    C = c_eps(A, P.phi)
    n = P.s.size

    out = io.StringIO()
    model = "S2 x R (unit sphere in R^3)" if A.epsilon == 1 else "H2 x R (hyperboloid model x1^2+x2^2-x3^2=-1)"
    out.write("# rotational Weingarten surface\n")
    out.write(f"# family {P.spec.F.to_spec()} epsilon {A.epsilon} phi0 {fmt(P.spec.phi0)} sigma {P.spec.sigma}\n")
    out.write(f"# samples {n} segments {segments}\n")
    if poincare:
        proj = "stereographic plane" if A.epsilon == 1 else "Poincare disk"
        out.write(f"# model: {model}, base projected to the {proj} by (x1, x2)/(1 + x3)\n")
        out.write("# vertex columns: X Y t\n")
        rho, rho_p = _projected(P)
        for i in range(n):
            for j in range(segments):
                out.write(f"v {fmt(rho[i] * ct[j])} {fmt(rho[i] * st[j])} {fmt(P.t[i])}\n")
        for i in range(n):
            nh, nz = P.t_p[i], -rho_p[i]
            norm = math.hypot(nh, nz)
            nh, nz = nh / norm, nz / norm
            for j in range(segments):
                out.write(f"vn {fmt(nh * ct[j])} {fmt(nh * st[j])} {fmt(nz)}\n")
    else:
        out.write(f"# model: {model}\n")
        out.write("# vertex columns: x1 x2 x3 t (the 4th column is the height, not a weight)\n")
        for i in range(n):
            for j in range(segments):
                out.write(f"v {fmt(S[i] * ct[j])} {fmt(S[i] * st[j])} {fmt(C[i])} {fmt(P.t[i])}\n")
        for i in range(n):
            a = P.t_p[i] * C[i]
            for j in range(segments):
                out.write(f"vn {fmt(a * ct[j])} {fmt(a * st[j])} {fmt(-P.t_p[i] * S[i])} {fmt(-P.phi_p[i])}\n")

    for i in range(n - 1):
        for j in range(segments):
            jn = (j + 1) % segments
            a = i * segments + j + 1
            b = (i + 1) * segments + j + 1
            c = (i + 1) * segments + jn + 1
            d = i * segments + jn + 1
            out.write(f"f {a}//{a} {b}//{b} {c}//{c}\n")
            out.write(f"f {a}//{a} {c}//{c} {d}//{d}\n")
    return out.getvalue()
