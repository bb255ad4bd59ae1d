"""L2 boundedness and compactness diagnostics.

Bounded amplitudes give bounded operators: the norm of a pure Fourier
multiplier equals sup|a|, and a seminorm of the FF* symbol certifies an
upper bound for the norm.  Amplitudes that decay at infinity give compact
operators: the singular values fall below any threshold, stably under
refinement, while a nondecaying amplitude shows a plateau of singular
values near the norm that *grows* with resolution.
"""
import sympy as sp

from fiolab.grids import GridSpec
from fiolab.operators import Route, discretize_fio, operator_norm
from fiolab.pdo import compactness_probe, cv_bound_check, cv_seminorm
from fiolab.phases import GeneratingFunction
from fiolab.symbols import SymbolField

S = GeneratingFunction.from_expr("x*theta", 1)
grid = GridSpec(1, 8.0, 256, dft_aligned=True)

# -- boundedness ------------------------------------------------------------
F = discretize_fio(S, "exp(-theta**2)", grid, grid, grid.dual(),
                   Route.KERNEL)
print(f"multiplier norm: {operator_norm(F):.9f} (sup|a| = 1)")

x, xi = sp.symbols("x xi", real=True)
sigma = SymbolField.from_expr(sp.exp(-2 * xi ** 2), (x, xi))
rep = cv_bound_check(F, cv_seminorm(sigma, 3, GridSpec(2, 6.0, 200)))
print(f"seminorm bound: norm {rep.norm:.6f} <= {rep.bound:.6f} "
      f"(ratio {rep.ratio:.4f}, passed = {rep.passed})")

# -- compactness ------------------------------------------------------------
def probe(amp, radius, coarse, route):
    gc = GridSpec(1, radius, coarse, dft_aligned=True)
    gf = GridSpec(1, radius, 2 * coarse, dft_aligned=True)
    return compactness_probe(
        discretize_fio(S, amp, gc, gc, gc.dual(), route),
        discretize_fio(S, amp, gf, gf, gf.dual(), route),
        tail_index=int(0.78 * coarse))


rep = probe("1/lam", 4.0, 512, Route.KERNEL)
print(f"\na = 1/lambda: {rep.verdict}")
print(f"  singular-value tail {rep.tail_coarse:.2e} -> {rep.tail_fine:.2e} "
      f"under doubling (small and stable)")

rep = probe("1", 8.0, 256, Route.SPECTRAL)
print(f"a = 1: {rep.verdict}")
print(f"  plateau of singular values >= 0.5 max: {rep.plateau_coarse} -> "
      f"{rep.plateau_fine} (grows with resolution)")
