"""Generating functions and hypothesis verifiers.

Phases here have the special form phi(x, y, theta) = S(x, theta) - y.theta.
The generating function S must couple x and theta nondegenerately (the mixed
Hessian has |det| >= delta0 > 0) and have bounded higher derivatives.  The
verifiers sample growing boxes and report either certified constants or a
concrete witness point for a failure.
"""
from fiolab.phases import (GeneratingFunction, quadratic_generating,
                           special_phase, verify_G2, verify_G3, verify_H2,
                           verify_H3, verify_separation)

# -- passing cases ----------------------------------------------------------
for expr in ("x*theta", "x*theta + theta**2/2"):
    S = GeneratingFunction.from_expr(expr, 1)
    g2, g3 = verify_G2(S), verify_G3(S)
    print(f"S = {expr}: coupling delta0 = {g2.constants['delta0']:.3f}, "
          f"derivative bounds pass = {g3.passed}")
    phi = special_phase(S)
    h2, h3 = verify_H2(phi), verify_H3(phi)
    print(f"  induced phase: H-bounds pass = {h2.passed}, "
          f"K1 = {h3.constants['K1']:.3f}, K2 = {h3.constants['K2']:.3f}")

# separation |S(x,theta) - S(x',theta) - y.(theta - theta')| ~ C|x - x'||th - th'|
S = GeneratingFunction.from_expr("x*theta", 1)
sep = verify_separation(S, [(0.0, 1.0, 0.5), (2.0, -1.0, 3.0)])
print(f"separation constant C = {sep.constants['C']:.3f}")

# a 2-dimensional quadratic example
n2 = quadratic_generating({((1, 0), (1, 0)): 1.0, ((1, 0), (0, 1)): 1.0,
                           ((0, 1), (0, 1)): 1.0}, 2)
print(f"n = 2 quadratic: coupling pass = {verify_G2(n2).passed}, "
      f"bounds pass = {verify_G3(n2).passed}")

# -- designed failures ------------------------------------------------------
flat = quadratic_generating({((2,), (0,)): 1.0, ((0,), (2,)): 1.0}, 1)
rep = verify_G2(flat)
print(f"x^2 + theta^2 (no coupling): pass = {rep.passed}, "
      f"witness {rep.witness}")

expo = verify_G3(GeneratingFunction.from_expr("exp(x)*theta", 1))
print(f"e^x theta (unbounded derivatives): pass = {expo.passed}, "
      f"witness {expo.witness}")

# no x-coupling at all: the phase-level equivalence ratio decays with radius
loose = special_phase(GeneratingFunction.from_expr("theta**2/2", 1))
rep = verify_H3(loose, radii=(4.0, 8.0, 16.0, 32.0, 64.0))
print(f"theta^2/2 phase equivalence: pass = {rep.passed}, K1 per radius = "
      f"{['%.3f' % v for v in rep.per_radius['K1']]}")
