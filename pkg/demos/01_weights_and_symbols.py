"""Tempered weights and symbol classes.

A weight m is *tempered* when m(v) <= C0 * m(w) * (1 + |v - w|)^l for all
pairs (v, w); symbols are smooth functions whose derivatives are controlled
by a weight times inverse powers of lambda(v) = (1 + |v|^2)^(1/2).  This
script certifies the model weights numerically, then measures symbol
seminorms on refinable grids.
"""
import numpy as np
import sympy as sp

from fiolab.grids import GridSpec
from fiolab.symbols import SymbolField, derivative_symbol, seminorm_estimate
from fiolab.weights import (LambdaConvention, lambda_weight, parse_weight,
                            verify_tempered, weight_product)

# -- temperedness -----------------------------------------------------------
ax = np.linspace(-10, 10, 41)
xx, yy = np.meshgrid(ax, ax, indexing="ij")
pairs = np.stack([xx.ravel(), yy.ravel()], axis=-1)

w = lambda_weight(1.0, 1, LambdaConvention.ONE_PLUS_NORM)
rep = verify_tempered(w, pairs, l_candidate=1.0)
print(f"lambda^1 tempered: {rep.passed}, C0 estimate {rep.C0_estimate:.6f}")

bad = parse_weight("expr:exp(v1)", 1)
rep = verify_tempered(bad, np.stack([np.arange(0.0, 40.0), np.zeros(40)],
                                    axis=-1), l_candidate=3.0)
print(f"exp(v) tempered: {rep.passed}, witness pair {rep.witness}")

prod = weight_product(lambda_weight(1.0, 1), lambda_weight(2.0, 1))
print(f"lambda * lambda^2 has exponent l = {prod.l}")

# -- symbol seminorms -------------------------------------------------------
x = sp.Symbol("x", real=True)
a = SymbolField.from_expr("exp(-x**2)", (x,))
for points in (101, 401, 1601):
    c = seminorm_estimate(a, (1,), GridSpec(1, 4.0, points))
    print(f"|d/dx e^(-x^2)| sup on {points:5d} points: {c:.6f} "
          f"(exact sqrt(2/e) = {np.sqrt(2 / np.e):.6f})")

# a symbol of weight lambda^2 loses one power per derivative
lam2 = SymbolField.from_expr(1 + x ** 2, (x,),
                             weight=lambda_weight(2.0, 1), rho=1.0)
d = derivative_symbol(lam2, (1,))
c = seminorm_estimate(d, (0,), GridSpec(1, 64.0, 4097))
print(f"derivative of a lambda^2 symbol, measured in lambda^1: {c:.4f}")
