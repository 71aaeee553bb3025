"""Grids, split representations, and discrete Riemann-Liouville operators.

A function with a p-integrable left-sided fractional derivative of order
``alpha`` decomposes as

    q(t) = c / (Gamma(alpha) (t-a)^(1-alpha)) + (I^alpha phi)(t),

with ``c`` the value of I^(1-alpha) q at ``a`` and ``phi`` the fractional
derivative.  :class:`SplitFunction` stores exactly this pair, confining all
endpoint singularities to the analytic first term; grid data that is
singular at an endpoint is rejected rather than approximated.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .special import PowerTerm, Side, frac_integral_terms, gamma, terms_eval

__all__ = [
    "RegimeError",
    "FracParams",
    "Grid",
    "GridFunction",
    "WeightOperator",
    "SplitFunction",
    "RightSplitFunction",
    "RlDerivative",
    "build_weight_operator",
    "left_integral",
    "right_integral",
    "left_derivative_grid",
    "right_derivative_grid",
    "eval_split",
    "eval_right_split",
    "left_derivative_split",
    "left_subdiffusion_boundary_value",
    "rl_derivative_of_ac",
    "admissible_r_range",
]


class RegimeError(ValueError):
    """Raised when an operation's integrability/continuity hypotheses fail."""


@dataclass(frozen=True)
class FracParams:
    """Order alpha in (0,1), integrability exponent p in [1, inf], interval [a, b]."""

    alpha: float
    p: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.p >= 1.0:
            raise ValueError(f"p must lie in [1, inf], got {self.p}")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    def is_continuity_regime(self) -> bool:
        """True when 1/p < alpha, so I^alpha maps L^p into continuous functions."""
        return (0.0 if math.isinf(self.p) else 1.0 / self.p) < self.alpha

    def require_continuity_regime(self) -> None:
        if not self.is_continuity_regime():
            raise RegimeError(
                f"requires 1/p < alpha; got p={self.p}, alpha={self.alpha}"
            )


@dataclass(frozen=True)
class Grid:
    """Uniform grid of n subintervals on [a, b]."""

    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one subinterval, got n={self.n}")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        t = np.linspace(self.a, self.b, self.n + 1)
        t.setflags(write=False)
        return t


def _as_values(values, n_nodes: int) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if v.ndim != 2 or v.shape[0] != n_nodes:
        raise ValueError(f"values must have shape ({n_nodes}, m), got {v.shape}")
    return v


@dataclass(frozen=True)
class GridFunction:
    """Samples of an R^m-valued function at the grid nodes.

    When ``left_endpoint_finite`` is False the sample at t = a is a
    placeholder that every consumer must ignore.
    """

    grid: Grid
    values: np.ndarray
    left_endpoint_finite: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_values(self.values, self.grid.n + 1))

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def reflected(self) -> "GridFunction":
        """Samples of t -> f(a + b - t); node i maps to node n - i."""
        return GridFunction(self.grid, self.values[::-1].copy(), True)


@dataclass(frozen=True)
class WeightOperator:
    """Lower-triangular weights w with (I^alpha f)(t_i) ~= sum_j w[i, j] f(t_j).

    Product-trapezoidal: the kernel (t_i - tau)^(alpha-1)/Gamma(alpha) is
    integrated exactly against the piecewise-linear interpolant of f, so
    rows applied to constants reproduce (t_i - a)^alpha / Gamma(alpha+1)
    and linear data is integrated exactly.
    """

    alpha: float
    grid: Grid
    weights: np.ndarray

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.weights @ values


def _second_difference(alpha: float, k: np.ndarray) -> np.ndarray:
    # (k-1)^(a+1) - 2 k^(a+1) + (k+1)^(a+1), evaluated as
    # k^(a+1) * (expm1((a+1) log1p(1/k)) + expm1((a+1) log1p(-1/k)))
    # to avoid the catastrophic cancellation of the direct form.
    # k = 1 passes through log1p(-1) = -inf, expm1(-inf) = -1 exactly.
    e = alpha + 1.0
    with np.errstate(divide="ignore"):
        up = e * np.log1p(1.0 / k)
        um = e * np.log1p(-1.0 / k)
    return k**e * (np.expm1(up) + np.expm1(um))


def _first_column(alpha: float, i: np.ndarray) -> np.ndarray:
    # (alpha+1) i^alpha - i^(alpha+1) + (i-1)^(alpha+1), same rewrite.
    e = alpha + 1.0
    with np.errstate(divide="ignore"):
        u = e * np.log1p(-1.0 / i)
    return i**e * (e / i + np.expm1(u))


@functools.lru_cache(maxsize=32)
def _weight_matrix(alpha: float, a: float, b: float, n: int) -> np.ndarray:
    h = (b - a) / n
    pref = h**alpha / gamma(alpha + 2.0)
    w = np.zeros((n + 1, n + 1))
    if n >= 1:
        i = np.arange(1, n + 1, dtype=float)
        w[1:, 0] = pref * _first_column(alpha, i)
        w[np.arange(1, n + 1), np.arange(1, n + 1)] = pref
    if n >= 2:
        k = np.arange(1, n, dtype=float)
        interior = pref * _second_difference(alpha, k)
        for i in range(2, n + 1):
            w[i, 1:i] = interior[i - 2 :: -1]
    # Scheme sanity: for this kernel every product-trapezoidal weight is >= 0.
    assert np.all(w >= 0.0)
    w.setflags(write=False)
    return w


def build_weight_operator(alpha: float, grid: Grid) -> WeightOperator:
    """Discrete left-sided fractional integral of order alpha in (0, 1].

    Weight matrices are cached per (alpha, interval, n); the cached array is
    read-only, so shared use across threads is safe.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    w = _weight_matrix(float(alpha), grid.a, grid.b, grid.n)
    return WeightOperator(alpha, grid, w)


def _weight_row(alpha: float, grid: Grid, t: float) -> np.ndarray:
    """Product-trapezoidal row for an off-grid target point t in (a, b]."""
    a, h, n = grid.a, grid.h, grid.n
    row = np.zeros(n + 1)
    if t <= a:
        return row
    n_full = min(int(np.floor((t - a) / h * (1.0 + 1e-14))), n)
    ga = gamma(alpha)
    nodes = grid.nodes
    for j in range(n_full):
        u0, u1 = t - nodes[j], t - nodes[j + 1]
        m0 = (u0**alpha - u1**alpha) / alpha
        m1 = u0 * m0 - (u0 ** (alpha + 1.0) - u1 ** (alpha + 1.0)) / (alpha + 1.0)
        row[j] += (m0 - m1 / h) / ga
        row[j + 1] += m1 / (h * ga)
    if n_full < n:
        delta = t - nodes[n_full]
        if delta > 0.0:
            m0 = delta**alpha / alpha
            m1 = delta ** (alpha + 1.0) / (alpha * (alpha + 1.0))
            row[n_full] += (m0 - m1 / h) / ga
            row[n_full + 1] += m1 / (h * ga)
    return row


def left_integral(alpha: float, f: GridFunction) -> GridFunction:
    """I^alpha from the left endpoint; the output vanishes at t = a.

    Rejects inputs flagged singular at a: samples of a blowing-up function
    carry no usable information for quadrature, use the split form instead.
    """
    if not f.left_endpoint_finite:
        raise RegimeError("left_integral requires data finite at t = a")
    op = build_weight_operator(alpha, f.grid)
    return GridFunction(f.grid, op.apply(f.values), True)


def right_integral(alpha: float, f: GridFunction) -> GridFunction:
    """I^alpha from the right endpoint, by reflection of :func:`left_integral`."""
    if not f.left_endpoint_finite:
        raise RegimeError("right_integral requires data finite at t = a")
    g = left_integral(alpha, f.reflected())
    return GridFunction(f.grid, g.values[::-1].copy(), True)


def _differentiate(grid: Grid, g: np.ndarray) -> np.ndarray:
    # Second-order finite differences: central interior, one-sided at the ends.
    h = grid.h
    d = np.empty_like(g)
    d[1:-1] = (g[2:] - g[:-2]) / (2.0 * h)
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h)
    d[-1] = (3.0 * g[-1] - 4.0 * g[-2] + g[-3]) / (2.0 * h)
    return d


def left_derivative_grid(alpha: float, f: GridFunction) -> GridFunction:
    """D^alpha = d/dt I^(1-alpha) on grid samples.

    The result is flagged possibly-singular at t = a; accuracy degrades to
    O(h^(2-alpha)) approaching the left endpoint.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not f.left_endpoint_finite:
        raise RegimeError("left_derivative_grid requires data finite at t = a")
    if f.grid.n < 2:
        raise ValueError("need at least 2 subintervals to differentiate")
    g = left_integral(1.0 - alpha, f)
    return GridFunction(f.grid, _differentiate(f.grid, g.values), False)


def right_derivative_grid(alpha: float, f: GridFunction) -> GridFunction:
    """D^alpha from the right endpoint, by reflection; possibly singular at t = b."""
    if not f.left_endpoint_finite:
        raise RegimeError("right_derivative_grid requires data finite at t = a")
    d = left_derivative_grid(alpha, f.reflected())
    return GridFunction(f.grid, d.values[::-1].copy(), True)


TermList = list[PowerTerm]
Density = Union[TermList, GridFunction]


def _as_vector(x) -> np.ndarray:
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"expected scalar or (m,) vector, got shape {v.shape}")
    return v


def _check_terms(terms: Sequence[PowerTerm], side: Side) -> TermList:
    terms = list(terms)
    for t in terms:
        if t.side is not side:
            raise ValueError(f"density terms must be {side.value}-sided")
    return terms


@dataclass(frozen=True)
class SplitFunction:
    """Canonical element q = c (t-a)^(alpha-1) / Gamma(alpha) + I^alpha phi.

    ``c`` equals (I^(1-alpha) q)(a) and ``phi`` equals D^alpha q; the pair
    is the exact coordinate system, never recovered numerically.
    """

    params: FracParams
    c: np.ndarray
    phi: Density = field(default_factory=list)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _as_vector(self.c))
        if isinstance(self.phi, GridFunction):
            g = self.phi.grid
            if (g.a, g.b) != (self.params.a, self.params.b):
                raise ValueError("phi grid must cover [a, b]")
        else:
            object.__setattr__(self, "phi", _check_terms(self.phi, Side.LEFT))

    @property
    def m(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class RightSplitFunction:
    """Mirror element q = d (b-t)^(alpha-1) / Gamma(alpha) + I^alpha_(b-) psi."""

    params: FracParams
    d: np.ndarray
    psi: Density = field(default_factory=list)

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", _as_vector(self.d))
        if isinstance(self.psi, GridFunction):
            g = self.psi.grid
            if (g.a, g.b) != (self.params.a, self.params.b):
                raise ValueError("psi grid must cover [a, b]")
        else:
            object.__setattr__(self, "psi", _check_terms(self.psi, Side.RIGHT))

    @property
    def m(self) -> int:
        return self.d.shape[0]


def _regular_part(alpha: float, density: Density, t: float, params: FracParams):
    if isinstance(density, GridFunction):
        params.require_continuity_regime()
        row = _weight_row(alpha, density.grid, t)
        return row @ density.values
    return terms_eval(frac_integral_terms(alpha, density), t, params.a, params.b)


def eval_split(q: SplitFunction, t: float) -> np.ndarray:
    """Pointwise value of a left split function on (a, b], including t = b.

    The regular part is exact for power-term densities and a single
    product-trapezoidal row for grid densities.
    """
    p = q.params
    if t < p.a or t > p.b:
        raise ValueError(f"t={t} outside [{p.a}, {p.b}]")
    if t == p.a:
        if np.any(q.c != 0.0):
            raise ValueError("split function is singular at t = a (c != 0)")
        return np.zeros(q.m)
    singular = q.c * (t - p.a) ** (p.alpha - 1.0) / gamma(p.alpha)
    return singular + _regular_part(p.alpha, q.phi, t, p)


def eval_right_split(q: RightSplitFunction, t: float) -> np.ndarray:
    """Pointwise value of a right split function on [a, b)."""
    p = q.params
    if t < p.a or t > p.b:
        raise ValueError(f"t={t} outside [{p.a}, {p.b}]")
    if t == p.b:
        if np.any(q.d != 0.0):
            raise ValueError("split function is singular at t = b (d != 0)")
        return np.zeros(q.m)
    singular = q.d * (p.b - t) ** (p.alpha - 1.0) / gamma(p.alpha)
    if isinstance(q.psi, GridFunction):
        p.require_continuity_regime()
        grid = q.psi.grid
        row = _weight_row(p.alpha, grid, p.a + p.b - t)
        return singular + row @ q.psi.values[::-1]
    return singular + terms_eval(frac_integral_terms(p.alpha, q.psi), t, p.a, p.b)


def sample_split(q: SplitFunction, grid: Grid) -> GridFunction:
    """Evaluate a split function at the grid nodes.

    The node at t = a is 0 when c = 0 (the regular part vanishes there) and
    a ignored placeholder otherwise.
    """
    singular_at_a = bool(np.any(q.c != 0.0))
    values = np.zeros((grid.n + 1, q.m))
    for i, t in enumerate(grid.nodes):
        if i == 0 and singular_at_a:
            continue
        values[i] = eval_split(q, float(t))
    return GridFunction(grid, values, left_endpoint_finite=not singular_at_a)


def left_derivative_split(q: SplitFunction) -> Density:
    """D^alpha q read off the split form: the stored density phi.

    The singular basis term contributes nothing; no numerics involved.
    """
    return q.phi


def left_subdiffusion_boundary_value(q: SplitFunction) -> np.ndarray:
    """(I^(1-alpha) q)(a), read exactly from the split form as c."""
    return q.c


@dataclass(frozen=True)
class RlDerivative:
    """D^alpha of an absolutely continuous q, as singular + regular parts.

    D^alpha q = q(a) (t-a)^(-alpha) / Gamma(1-alpha) + I^(1-alpha) q'.
    """

    alpha: float
    singular_coeff: np.ndarray  # q(a) / Gamma(1-alpha)
    regular: Density
    a: float
    b: float

    def eval(self, t: float) -> np.ndarray:
        if not self.a < t <= self.b:
            raise ValueError(f"t={t} outside ({self.a}, {self.b}]")
        s = self.singular_coeff * (t - self.a) ** (-self.alpha)
        if isinstance(self.regular, GridFunction):
            # regular already holds I^(1-alpha) q' at the nodes
            g = self.regular
            vals = np.array(
                [np.interp(t, g.grid.nodes, g.values[:, k]) for k in range(g.m)]
            )
            return s + vals
        return s + terms_eval(self.regular, t, self.a, self.b)

    def sample(self, grid: Grid) -> GridFunction:
        values = np.zeros((grid.n + 1, self.singular_coeff.shape[0]))
        for i in range(1, grid.n + 1):
            values[i] = self.eval(float(grid.nodes[i]))
        return GridFunction(grid, values, left_endpoint_finite=False)


def rl_derivative_of_ac(alpha: float, q_a, qprime: Density, a: float, b: float) -> RlDerivative:
    """Fractional derivative of q(t) = q_a + int_a^t q', without differencing.

    ``qprime`` is either grid samples or left-sided power terms; the regular
    part is I^(1-alpha) q', computed by weights or in closed form.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    q_a = _as_vector(q_a)
    coeff = q_a / gamma(1.0 - alpha)
    if isinstance(qprime, GridFunction):
        regular: Density = left_integral(1.0 - alpha, qprime)
    else:
        regular = frac_integral_terms(1.0 - alpha, _check_terms(qprime, Side.LEFT))
    return RlDerivative(alpha, coeff, regular, a, b)


def admissible_r_range(alpha: float, p: float) -> tuple[float, bool]:
    """Largest exponent range [1, r_max) or [1, r_max] with I^alpha(L^p) in L^r.

    Returns (r_max, inclusive).  r_max = inf with inclusive=True means the
    image is essentially bounded (the continuity regime 1/p < alpha).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not p >= 1.0:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    if p == 1.0:
        return 1.0 / (1.0 - alpha), False
    if alpha < inv_p:
        return p / (1.0 - alpha * p), True
    if alpha == inv_p:
        return math.inf, False
    return math.inf, True
