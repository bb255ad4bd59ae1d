"""Phase functions and their hypothesis verifiers.

Generic phases phi(x, y, theta) are checked against growth/equivalence
hypotheses; the special phase phi = S(x, theta) - y.theta is built from a
generating function S with a uniformly nondegenerate mixed Hessian.

All verifiers are sampling checks: they return estimated constants on tensor
grids [-R, R]^d for several R (growth failures are asymptotic, so a single
box cannot expose them), never proofs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from .expressions import (coord_symbols, diff_multi, evaluate, lambdified,
                          multi_indices, parse_scalar_expr)
from .grids import tensor_grid
from .weights import bracket

DEFAULT_RADII = (4.0, 8.0, 16.0)
DEFAULT_CAP = 1e6
DEFAULT_FLOOR = 1e-8
#: ratio between successive-R constants above which we call the growth
#: unbounded (a bounded constant approaches its sup, ratio -> 1)
GROWTH_TOL = 3.0
#: ratio below which a lower constant (K1, delta0) is called decaying
DECAY_TOL = 0.6
DEFAULT_EPS0 = 0.01


@dataclass
class HypothesisReport:
    """Estimated constants for one hypothesis, with a worst-case witness."""

    name: str
    constants: dict
    passed: bool
    witness: Optional[tuple] = None
    per_radius: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "constants": {str(k): v for k, v in self.constants.items()},
            "pass": self.passed,
            "witness": list(self.witness) if self.witness else None,
            "per_radius": {str(k): v for k, v in self.per_radius.items()},
        }
        return json.dumps(payload, sort_keys=True)


@dataclass
class GeneratingFunction:
    """S(x, theta) with exact first/second derivatives.

    `coeffs`, when present, is the quadratic coefficient table
    {(alpha, beta): C} with |alpha| + |beta| = 2.
    """

    n: int
    expr: sp.Expr
    xvars: Tuple[sp.Symbol, ...]
    tvars: Tuple[sp.Symbol, ...]
    coeffs: Optional[dict] = None

    @property
    def variables(self):
        return self.xvars + self.tvars

    def __call__(self, points) -> np.ndarray:
        return evaluate(self.expr, self.variables, points).real

    def grad_x(self, points) -> np.ndarray:
        cols = [evaluate(sp.diff(self.expr, v), self.variables, points)
                for v in self.xvars]
        return np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)

    def grad_theta(self, points) -> np.ndarray:
        cols = [evaluate(sp.diff(self.expr, v), self.variables, points)
                for v in self.tvars]
        return np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)

    def mixed_hess(self, points) -> np.ndarray:
        """d2S/dx_i dtheta_j as an (..., n, n) array."""
        points = np.asarray(points, dtype=float)
        rows = []
        for xi in self.xvars:
            row = [evaluate(sp.diff(self.expr, xi, tj), self.variables, points)
                   for tj in self.tvars]
            rows.append(np.stack([np.asarray(c, dtype=float) for c in row],
                                 axis=-1))
        return np.stack(rows, axis=-2)

    @classmethod
    def from_expr(cls, expr, n: int):
        xvars = coord_symbols("x", n)
        tvars = coord_symbols("theta", n)
        if isinstance(expr, str):
            aliases = {}
            if n == 1:
                aliases = {"x": xvars[0], "theta": tvars[0]}
            expr = parse_scalar_expr(expr, xvars + tvars, aliases=aliases)
        return cls(n=n, expr=sp.sympify(expr), xvars=xvars, tvars=tvars)


@dataclass
class PhaseField:
    """phi(x, y, theta) with exact gradient and Hessian access."""

    n: int
    N: int
    expr: sp.Expr
    xvars: Tuple[sp.Symbol, ...]
    yvars: Tuple[sp.Symbol, ...]
    tvars: Tuple[sp.Symbol, ...]

    @property
    def variables(self):
        return self.xvars + self.yvars + self.tvars

    def __call__(self, points) -> np.ndarray:
        return evaluate(self.expr, self.variables, points).real

    def _grad(self, block, points) -> np.ndarray:
        cols = [evaluate(sp.diff(self.expr, v), self.variables, points)
                for v in block]
        return np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)

    def grad_x(self, points):
        return self._grad(self.xvars, points)

    def grad_y(self, points):
        return self._grad(self.yvars, points)

    def grad_theta(self, points):
        return self._grad(self.tvars, points)

    def derivative(self, alpha, points) -> np.ndarray:
        """d^alpha phi, alpha over the (x, y, theta) coordinates jointly."""
        d = diff_multi(self.expr, self.variables, alpha)
        return evaluate(d, self.variables, points)


def special_phase(S: GeneratingFunction) -> PhaseField:
    """phi(x, y, theta) = S(x, theta) - <y, theta>."""
    yvars = coord_symbols("y", S.n)
    expr = S.expr - sum(y * t for y, t in zip(yvars, S.tvars))
    return PhaseField(n=S.n, N=S.n, expr=expr,
                      xvars=S.xvars, yvars=yvars, tvars=S.tvars)


def quadratic_generating(coeffs: dict, n: int) -> GeneratingFunction:
    """S = sum C_{alpha,beta} x^alpha theta^beta over |alpha|+|beta| = 2.

    `coeffs` maps (alpha, beta) multi-index pairs (tuples of length n) to
    real constants.
    """
    xvars = coord_symbols("x", n)
    tvars = coord_symbols("theta", n)
    expr = sp.Integer(0)
    table = {}
    for (alpha, beta), c in coeffs.items():
        alpha = tuple(int(k) for k in alpha)
        beta = tuple(int(k) for k in beta)
        if sum(alpha) + sum(beta) != 2:
            raise ValueError(f"({alpha}, {beta}) is not quadratic")
        term = sp.Float(c)
        for v, k in zip(xvars, alpha):
            term *= v ** k
        for v, k in zip(tvars, beta):
            term *= v ** k
        expr += term
        table[(alpha, beta)] = float(c)
    return GeneratingFunction(n=n, expr=expr, xvars=xvars, tvars=tvars,
                              coeffs=table)


def _grids(dim: int, radii, points_per_axis: int):
    # Closed boxes sampled with an axis containing 0 and +-r: ratios that
    # degenerate along a coordinate axis (e.g. at large x with y = theta = 0)
    # must be seen exactly, not at a grid offset that scales with r.
    for r in radii:
        axis = np.linspace(-r, r, points_per_axis)
        mesh = np.meshgrid(*([axis] * dim), indexing="ij")
        yield r, np.stack([m.ravel() for m in mesh], axis=-1)


def _default_ppa(dim: int) -> int:
    return {1: 33, 2: 17, 3: 13}.get(dim, 7)


def verify_H2(phi: PhaseField, radii=DEFAULT_RADII, max_order: int = 3,
              points_per_axis: Optional[int] = None,
              cap: float = DEFAULT_CAP,
              growth_tol: float = GROWTH_TOL) -> HypothesisReport:
    """Estimate C_{a,b,g} = sup |d phi| / lambda^(2 - order) per multi-index.

    Fails when a constant exceeds `cap` or keeps growing between the two
    largest radii (asymptotically unbounded ratio).
    """
    dim = phi.n + phi.n + phi.N
    ppa = points_per_axis or _default_ppa(dim)
    constants, per_radius = {}, {}
    passed, witness = True, None
    for alpha in multi_indices(dim, max_order):
        order = sum(alpha)
        d = diff_multi(phi.expr, phi.variables, alpha)
        seq = []
        worst_pt, worst = None, 0.0
        for r, pts in _grids(dim, radii, ppa):
            vals = np.abs(evaluate(d, phi.variables, pts))
            ratio = vals / bracket(pts) ** (2 - order)
            i = int(np.argmax(ratio))
            seq.append(float(ratio[i]))
            if ratio[i] >= worst:
                worst, worst_pt = float(ratio[i]), tuple(pts[i])
        constants[alpha] = seq[-1]
        per_radius[alpha] = seq
        grows = (len(seq) >= 2 and seq[-2] > 1e-9
                 and seq[-1] > growth_tol * seq[-2])
        if seq[-1] > cap or grows:
            witness = worst_pt
            passed = False
    return HypothesisReport(name="H2", constants=constants, passed=passed,
                            witness=witness, per_radius=per_radius)


def _verify_equivalence(phi: PhaseField, name: str, image_fn,
                        radii, points_per_axis, floor, decay_tol):
    dim = phi.n + phi.n + phi.N
    ppa = points_per_axis or _default_ppa(dim)
    k1s, k2s = [], []
    worst_pt = None
    for r, pts in _grids(dim, radii, ppa):
        ratio = bracket(image_fn(pts)) / bracket(pts)
        i = int(np.argmin(ratio))
        k1s.append(float(ratio[i]))
        k2s.append(float(np.max(ratio)))
        worst_pt = tuple(pts[i])
    k1, k2 = k1s[-1], max(k2s)
    decays = len(k1s) >= 2 and k1s[-2] > 0 and k1 < decay_tol * k1s[-2]
    passed = bool(k1 > floor and not decays)
    return HypothesisReport(
        name=name, constants={"K1": k1, "K2": k2}, passed=passed,
        witness=None if passed else worst_pt,
        per_radius={"K1": k1s, "K2": k2s})


def verify_H3(phi: PhaseField, radii=DEFAULT_RADII,
              points_per_axis: Optional[int] = None,
              floor: float = DEFAULT_FLOOR,
              decay_tol: float = DECAY_TOL) -> HypothesisReport:
    """K1 <= lambda(grad_y phi, grad_theta phi, y)/lambda(x, y, theta) <= K2."""
    def image(pts):
        y = pts[:, phi.n:2 * phi.n]
        return np.concatenate(
            [phi.grad_y(pts), phi.grad_theta(pts), y], axis=-1)
    return _verify_equivalence(phi, "H3", image, radii, points_per_axis,
                               floor, decay_tol)


def verify_H3star(phi: PhaseField, radii=DEFAULT_RADII,
                  points_per_axis: Optional[int] = None,
                  floor: float = DEFAULT_FLOOR,
                  decay_tol: float = DECAY_TOL) -> HypothesisReport:
    """Same equivalence with the field (x, grad_theta phi, grad_x phi)."""
    def image(pts):
        x = pts[:, :phi.n]
        return np.concatenate(
            [x, phi.grad_theta(pts), phi.grad_x(pts)], axis=-1)
    return _verify_equivalence(phi, "H3*", image, radii, points_per_axis,
                               floor, decay_tol)


def verify_G2(S: GeneratingFunction, radii=DEFAULT_RADII,
              points_per_axis: Optional[int] = None,
              floor: float = DEFAULT_FLOOR,
              decay_tol: float = DECAY_TOL) -> HypothesisReport:
    """delta0 = inf |det d2S/dx dtheta| over the sampled boxes."""
    dim = 2 * S.n
    ppa = points_per_axis or _default_ppa(dim)
    mins = []
    worst_pt = None
    for r, pts in _grids(dim, radii, ppa):
        dets = np.abs(np.linalg.det(S.mixed_hess(pts)))
        i = int(np.argmin(dets))
        mins.append(float(dets[i]))
        worst_pt = tuple(pts[i])
    delta0 = min(mins)
    decays = len(mins) >= 2 and mins[-2] > 0 and mins[-1] < decay_tol * mins[-2]
    passed = bool(delta0 >= floor and not decays)
    return HypothesisReport(name="G2", constants={"delta0": delta0},
                            passed=passed,
                            witness=None if passed else worst_pt,
                            per_radius={"delta0": mins})


def verify_G3(S: GeneratingFunction, radii=DEFAULT_RADII, max_order: int = 3,
              points_per_axis: Optional[int] = None,
              cap: float = DEFAULT_CAP,
              growth_tol: float = GROWTH_TOL) -> HypothesisReport:
    """As verify_H2, restricted to (x, theta) and lambda(x, theta)."""
    dim = 2 * S.n
    ppa = points_per_axis or _default_ppa(dim)
    constants, per_radius = {}, {}
    passed, witness = True, None
    for alpha in multi_indices(dim, max_order):
        order = sum(alpha)
        d = diff_multi(S.expr, S.variables, alpha)
        seq = []
        worst_pt = None
        for r, pts in _grids(dim, radii, ppa):
            vals = np.abs(evaluate(d, S.variables, pts))
            ratio = vals / bracket(pts) ** (2 - order)
            i = int(np.argmax(ratio))
            seq.append(float(ratio[i]))
            worst_pt = tuple(pts[i])
        constants[alpha] = seq[-1]
        per_radius[alpha] = seq
        grows = (len(seq) >= 2 and seq[-2] > 1e-9
                 and seq[-1] > growth_tol * seq[-2])
        if seq[-1] > cap or grows:
            witness = worst_pt
            passed = False
    return HypothesisReport(name="G3", constants=constants, passed=passed,
                            witness=witness, per_radius=per_radius)


def verify_separation(S: GeneratingFunction, triples,
                      cap: float = DEFAULT_CAP) -> HypothesisReport:
    """C = max |x - x'| / |grad_theta S(x,.) - grad_theta S(x',.)| over triples.

    `triples` is an iterable of (x, x', theta); degenerate pairs x = x' are
    skipped.
    """
    triples = np.asarray(triples, dtype=float)
    if triples.ndim == 2 and S.n == 1:
        triples = triples[:, :, None]
    x, xp, th = triples[:, 0], triples[:, 1], triples[:, 2]
    keep = np.linalg.norm(x - xp, axis=-1) > 0
    if not np.any(keep):
        raise ValueError("all pairs degenerate (x = x')")
    x, xp, th = x[keep], xp[keep], th[keep]
    g = S.grad_theta(np.concatenate([x, th], axis=-1))
    gp = S.grad_theta(np.concatenate([xp, th], axis=-1))
    num = np.linalg.norm(x - xp, axis=-1)
    den = np.linalg.norm(g - gp, axis=-1)
    with np.errstate(divide="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
    i = int(np.argmax(ratio))
    c = float(ratio[i])
    passed = bool(np.isfinite(c) and c <= cap)
    witness = None if passed else (tuple(x[i]), tuple(xp[i]), tuple(th[i]))
    return HypothesisReport(name="separation", constants={"C": c},
                            passed=passed, witness=witness)


def omega_domain_membership(S: GeneratingFunction, eps0: float,
                            point) -> bool:
    """Is (x, y, theta) in the region |grad_theta S - y|^2 < eps0*|(x,y,theta)|^2?"""
    if eps0 <= 0:
        raise ValueError("eps0 must be positive")
    point = np.atleast_1d(np.asarray(point, dtype=float))
    n = S.n
    x, y, th = point[:n], point[n:2 * n], point[2 * n:]
    g = S.grad_theta(np.concatenate([x, th])[None, :])[0]
    lhs = float(np.sum((g - y) ** 2))
    rhs = eps0 * float(np.sum(point * point))
    return lhs < rhs


def lambda_equivalence(S: GeneratingFunction, eps0: float = DEFAULT_EPS0,
                       radius: float = 8.0,
                       points_per_axis: Optional[int] = None) -> dict:
    """Sample the domain above and report how lambda(x,y,theta)/lambda(x,theta)
    and |y|/lambda(x,theta) behave on its members."""
    n = S.n
    dim = 3 * n
    ppa = points_per_axis or _default_ppa(dim)
    pts = tensor_grid(dim, radius, ppa)
    x, y, th = pts[:, :n], pts[:, n:2 * n], pts[:, 2 * n:]
    g = S.grad_theta(np.concatenate([x, th], axis=-1))
    inside = np.sum((g - y) ** 2, axis=-1) < eps0 * np.sum(pts * pts, axis=-1)
    if not np.any(inside):
        return {"members": 0}
    sel = pts[inside]
    xt = np.concatenate([sel[:, :n], sel[:, 2 * n:]], axis=-1)
    ratio = bracket(sel) / bracket(xt)
    ybound = np.linalg.norm(sel[:, n:2 * n], axis=-1) / bracket(xt)
    return {
        "members": int(np.sum(inside)),
        "ratio_min": float(np.min(ratio)),
        "ratio_max": float(np.max(ratio)),
        "y_over_lambda_max": float(np.max(ybound)),
    }
