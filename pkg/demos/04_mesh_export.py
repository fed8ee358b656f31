"""Walkthrough: writing profiles and meshes to disk.

Files go to the directory given on the command line (default
./demo_output).  Both OBJ variants are written for a catenoid: the
hyperboloid coordinates (x1, x2, x3, t) and the Poincare disk projection.
"""
import sys
from pathlib import Path

from rotweingarten import (H2, S2, EllipticFunction, ShootingSpec, integrate_profile, mesh_obj,
                           profile_csv, profile_json)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(parents=True, exist_ok=True)

cat = integrate_profile(ShootingSpec(EllipticFunction.rational(1.2), H2, 0.7, s_max=6.0))
(out / "catenoid.csv").write_text(profile_csv(cat))
(out / "catenoid.json").write_text(profile_json(cat))
(out / "catenoid_hyperboloid.obj").write_text(mesh_obj(cat, 48))
(out / "catenoid_poincare.obj").write_text(mesh_obj(cat, 48, poincare=True))

und = integrate_profile(ShootingSpec(EllipticFunction.sqrtshift(1.0), S2, 0.9))
(out / "unduloid.obj").write_text(mesh_obj(und, 32))

for p in sorted(out.iterdir()):
    text = p.read_text()
    nv = sum(1 for ln in text.splitlines() if ln.startswith("v "))
    extra = f", {nv} vertices" if p.suffix == ".obj" else ""
    print(f"{p}: {len(text)} bytes{extra}")

# the same mesh is available from the command line:
#   rotweingarten mesh --family sqrtshift:a=1 --epsilon 1 --phi0 0.9 --output-dir out
