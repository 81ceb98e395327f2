"""Certify a ball on its boundary, then find equilibria inside it.

If <X(x), x> > 0 at every point of a sphere, the field has a zero inside
the ball, and by the radial equality the same boundary data certifies
the conservative part too, so both admit equilibria in the same ball.
The certificate here is sampled (evidence, not proof); the solver is a
damped Newton multistart that returns a concrete witness.

For a coercive field X and any constant vector b, the shifted fields
X + b and grad H + b also have equilibria: some sphere eventually
dominates b, and the script searches powers of two for the first radius
that certifies with a safety margin.

Run:  python3 demos/locate_equilibria.py
"""

import numpy as np

from presnov import (
    ShiftedField,
    boundary_certificate,
    catalog_field,
    find_equilibrium,
    find_equilibrium_conservative,
    perturbed_existence,
)

field = ShiftedField(catalog_field("identity", 2).field, [3.0, -4.0])
print(f"field: {field.label}")
print("\nboundary certificates (min of <X(x), x> over sampled sphere points):")
for radius in (4.0, 6.0):
    cert = boundary_certificate(field, radius, check_conservative=False)
    status = "PASS" if cert.passed else "FAIL"
    print(f"  r = {radius}: min radial value {cert.min_radial:+.4f}  -> {status}")
print("  (exact minimum is r^2 - 5r: negative at r=4, positive at r=6)")

result = find_equilibrium(field, 6.0)
print(f"\nequilibrium of X inside the certified ball of radius 6:")
print(f"  x* = {result.point}, residual {result.residual:.2e}, "
      f"{result.iterations} Newton iteration(s)")

conservative = find_equilibrium_conservative(field, 6.0)
print(f"equilibrium of grad H in the same ball (same certificate):")
print(f"  x* = {conservative.point}, residual {conservative.residual:.2e}, "
      f"local-minimizer check: {conservative.minimizer_check}")

print("\nperturbation workflow: cubic field |x|^2 x in R^3, shifted by b = (0, 0, -8)")
outcome = perturbed_existence(catalog_field("cubic_radial", 3).field, [0.0, 0.0, -8.0])
print(f"  probe verdict for the unperturbed field: {outcome.probe.verdict}")
print(f"  first certified radius: rho = {outcome.rho} "
      f"(margin {outcome.certificate.margin:.1f})")
print(f"  equilibrium of X + b:      {np.round(outcome.field_result.point, 10)}")
print(f"  equilibrium of grad H + b: {np.round(outcome.conservative_result.point, 10)}")
print("  hand value: |x|^2 x = (0,0,8) on the x3-axis gives t^3 = 8, x* = (0,0,2)")
