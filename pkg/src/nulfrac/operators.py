"""Backward (nabla) fractional calculus on a non-uniform lattice.

All operators act on :class:`~nulfrac.grid.GridFunction` values and return
new ones whose ``base`` records the exact domain on which the result is
defined.  The fractional sum of order ``alpha`` with lattice shift ``gamma``
is

    S(z) = 1/[Gamma(alpha)]_q * sum_{t=a+1}^{z}
           [x_{gamma+alpha-1}(z) - x_{gamma+alpha-1}(t-1)]^(alpha-1) f(t) nabla x_gamma(t)

with ``S(a) = 0``.  The anchor ``a`` defaults to the base of the input, so
``f(a)`` itself never enters the sum.  Sums are zero at every grid point at
or left of ``a``; results therefore carry ``anchor=a``, and later
differences extend them by zeros.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlignmentError,
    ConfigError,
    FamilyError,
    IntegerOrderError,
    SizeError,
)
from .grid import GRID_TOL, GridFunction
from .lattice import (
    Family,
    FracOrder,
    LatticeSpec,
    as_integer,
    bracket,
    bracket_factorial,
    gen_power,
    gen_power_normalized,
    inv_modified_gamma,
    modified_gamma_ratio,
    real_power,
    step_x,
    x_shifted,
)
from .mutation import kernel_exponent


@dataclass(frozen=True)
class OperatorConfig:
    """Lattice, subscript shift ``gamma`` of ``nabla_gamma`` and the order."""

    lattice: LatticeSpec
    gamma: float = 0.0
    order: FracOrder = FracOrder(1.0)

    def __post_init__(self) -> None:
        if not isinstance(self.order, FracOrder):
            object.__setattr__(self, "order", FracOrder(float(self.order)))
        if not math.isfinite(float(self.gamma)):
            raise ConfigError("gamma must be finite")
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def m(self) -> int:
        return self.order.m

    def replace(self, *, gamma: float | None = None, alpha: float | None = None) -> "OperatorConfig":
        return OperatorConfig(
            self.lattice,
            self.gamma if gamma is None else gamma,
            self.order if alpha is None else FracOrder(alpha),
        )


class TaylorKind(enum.Enum):
    RL = "rl"
    CAPUTO = "caputo"


class AbelVariant(enum.Enum):
    COMPOSE = "compose"
    INITIAL_DATA = "initial_data"


def _nabla_x(lat: LatticeSpec, gamma: float, t: float) -> float:
    return step_x(lat, gamma, t, "backward")


# ---------------------------------------------------------------------------
# integer differences
# ---------------------------------------------------------------------------
def nabla_diff(lat: LatticeSpec, gamma: float, k: int, f: GridFunction) -> GridFunction:
    """Nested difference ``nabla_gamma(nabla_{gamma+1}(... nabla_{gamma+k-1} f))``.

    A plain function loses ``k`` points on the left.  An anchored function is
    extended by zeros instead and keeps its grid and anchor.
    """
    if k < 0:
        raise ConfigError("difference depth must be non-negative")
    if k == 0:
        return f
    if f.anchored:
        start = f.base
        vals = f.extended(start - k)
        first = start - k
    else:
        if f.count <= k:
            raise SizeError(f"{k} differences need more than {k} samples, got {f.count}")
        vals = f.values.copy()
        first = f.base
    for depth in range(k):
        g = gamma + k - 1 - depth
        pts = first + depth + 1 + np.arange(vals.size - 1, dtype=float)
        vals = np.diff(vals) / _nabla_x(lat, g, pts)
    if f.anchored:
        return GridFunction(f.base, vals, f.anchor)
    return GridFunction(f.base + k, vals)


def nabla_diff_k(cfg: OperatorConfig, k: int, f: GridFunction) -> GridFunction:
    """``k``-fold nested difference with outermost shift ``cfg.gamma``."""
    return nabla_diff(cfg.lattice, cfg.gamma, int(k), f)


# ---------------------------------------------------------------------------
# fractional sums
# ---------------------------------------------------------------------------
def _default_anchor(f: GridFunction) -> float:
    return f.anchor if f.anchored else f.base


def sum_weights(lat: LatticeSpec, gamma: float, alpha: float, a: float, n: int) -> np.ndarray:
    """Lower-triangular weights ``W[i, j]`` of the order-``alpha`` sum.

    Row ``i`` is the output point ``z = a + i`` and column ``j`` the summation
    point ``t = a + j``; column 0 is zero (``t = a`` never contributes).
    """
    nu = gamma + alpha - 1.0
    expo = kernel_exponent("frac_sum", alpha - 1.0)
    norm = inv_modified_gamma(lat, alpha)
    w = np.zeros((n, n))
    for j in range(1, n):
        t = a + j
        dx = _nabla_x(lat, gamma, t)
        for i in range(j, n):
            z = a + i
            w[i, j] = gen_power(lat, nu, z, t - 1.0, expo) * norm * dx
    return w


def frac_sum_at(lat: LatticeSpec, gamma: float, alpha: float, f: GridFunction, anchor: float | None = None) -> GridFunction:
    """Fractional sum of order ``alpha > 0`` with shift ``gamma``.

    The result lives on ``anchor, ..., f.last`` with value ``0`` at the anchor.
    ``anchor`` defaults to ``f.anchor`` for anchored input, else ``f.base``;
    an explicit anchor may lie at most one step left of ``f.base``.
    """
    if not alpha > 0.0:
        raise ConfigError("summation order must be positive")
    a = _default_anchor(f) if anchor is None else float(anchor)
    if f.index_of(a) < -1 and not f.anchored:
        raise SizeError("anchor lies too far left of the data")
    n = int(round(f.last - a)) + 1
    if n < 1:
        raise SizeError("anchor lies beyond the data")
    vals = f.extended(a + 1.0) if n > 1 else np.zeros(0)
    fv = np.concatenate([[0.0], vals])
    w = sum_weights(lat, gamma, alpha, a, n)
    out = w @ fv
    out[0] = 0.0
    return GridFunction(a, out, a)


def frac_sum(cfg: OperatorConfig, f: GridFunction, anchor: float | None = None) -> GridFunction:
    """``nabla_gamma^{-alpha} f`` on the grid of ``f`` (zero at the anchor)."""
    return frac_sum_at(cfg.lattice, cfg.gamma, cfg.alpha, f, anchor)


def _sum_or_identity(lat: LatticeSpec, gamma: float, order: float, f: GridFunction, a: float) -> GridFunction:
    """Order-``order`` sum anchored at ``a``; order 0 is the zero-extended restriction."""
    if as_integer(order) == 0:
        vals = np.concatenate([[0.0], f.extended(a + 1.0)])
        return GridFunction(a, vals, a)
    return frac_sum_at(lat, gamma, order, f, a)


# ---------------------------------------------------------------------------
# Riemann--Liouville differences
# ---------------------------------------------------------------------------
def _rl_compose(lat: LatticeSpec, gamma: float, alpha: float, f: GridFunction, a: float | None = None) -> GridFunction:
    order = FracOrder(alpha)
    m = order.m
    a = _default_anchor(f) if a is None else a
    inner = _sum_or_identity(lat, gamma + alpha, m - order.alpha, f, a)
    out = nabla_diff(lat, gamma, m, inner)
    if out.count < 2:
        raise SizeError("RL difference needs at least two samples")
    return out.restrict(a + 1.0)


def rl_diff_compose(cfg: OperatorConfig, f: GridFunction) -> GridFunction:
    """``nabla_gamma^m (nabla_{gamma+alpha}^{alpha-m} f)`` on ``a+1, ...``.

    The inner sum is anchored at ``a`` (so ``f(a)`` is ignored) and is zero at
    and left of ``a``.  For integer ``alpha`` the inner operator is the
    identity on the same zero-extended data, so the result coincides with the
    nested difference of ``f`` from ``a + alpha + 1`` on (everywhere when
    ``f(a) = 0``).
    """
    if not cfg.alpha > 0.0:
        raise ConfigError("difference order must be positive")
    if f.count < 2:
        raise SizeError("RL difference needs at least two samples")
    return _rl_compose(cfg.lattice, cfg.gamma, cfg.alpha, f)


def rl_diff_direct(cfg: OperatorConfig, f: GridFunction) -> GridFunction:
    """Direct negative-order kernel sum (non-integer ``alpha`` only)."""
    lat, gamma, alpha = cfg.lattice, cfg.gamma, cfg.alpha
    if not alpha > 0.0:
        raise ConfigError("difference order must be positive")
    if cfg.order.is_integer:
        raise IntegerOrderError("direct RL kernel is undefined for integer order; use the compose form")
    if f.count < 2:
        raise SizeError("RL difference needs at least two samples")
    a = _default_anchor(f)
    fv = f.extended(a + 1.0)
    n = fv.size
    expo = kernel_exponent("rl_direct", -alpha - 1.0)
    norm = inv_modified_gamma(lat, -alpha)
    out = np.zeros(n)
    for i in range(n):
        z = a + 1 + i
        acc = 0.0
        for j in range(i + 1):
            t = a + 1 + j
            acc += gen_power(lat, gamma - 1.0, z, t - 1.0, expo) * fv[j] * _nabla_x(lat, gamma + alpha, t)
        out[i] = acc * norm
    return GridFunction(a + 1.0, out, a)


def residue_weights(lat: LatticeSpec, gamma: float, alpha: float, z: float, kmax: int) -> np.ndarray:
    """Coefficients ``c_k`` with ``RL(z) = sum_k c_k f(z-k) nabla x_{gamma+alpha}(z-k)``.

    ``c_k = ([-alpha]_q)_k/[k]_q! * P_k`` where ``P_k`` is a ratio of modified
    Gamma functions of ``2z - k`` scaled by the lattice prefactor.
    """
    fam = lat.family
    if fam not in (Family.QUADRATIC, Family.Q_QUADRATIC):
        raise FamilyError("residue form is available for the quadratic and q-quadratic lattices")
    nu = gamma - 1.0
    expo = kernel_exponent("rl_residue", alpha + 1.0)
    if fam is Family.QUADRATIC:
        shift = lat.c
        scale = real_power(1.0 / lat.c1, expo)
    else:
        shift = -lat.c
        scale = real_power(lat.q ** (1.0 + 0.5 * lat.c) / (lat.c2 * (1.0 - lat.q) ** 2), expo)
    out = np.zeros(kmax + 1)
    w = 1.0
    for k in range(kmax + 1):
        if k > 0:
            w *= bracket(lat, k - 1 - alpha) / bracket(lat, k)
        if w == 0.0:
            break
        A = 2.0 * z - k + nu + shift
        out[k] = w * scale * modified_gamma_ratio(lat, A, A + alpha + 1.0)
    return out


def rl_diff_residue(cfg: OperatorConfig, f: GridFunction) -> GridFunction:
    """Residue-sum form of the RL difference (quadratic / q-quadratic lattices).

    Unlike the direct form it is also defined for integer ``alpha``; the
    weights then vanish beyond ``k = alpha`` and reproduce the nested
    difference once ``z - a > alpha``.
    """
    lat, gamma, alpha = cfg.lattice, cfg.gamma, cfg.alpha
    if not alpha > 0.0:
        raise ConfigError("difference order must be positive")
    if f.count < 2:
        raise SizeError("RL difference needs at least two samples")
    a = _default_anchor(f)
    fv = f.extended(a + 1.0)
    n = fv.size
    out = np.zeros(n)
    for i in range(n):
        z = a + 1 + i
        c = residue_weights(lat, gamma, alpha, z, i)
        ks = np.arange(i + 1)
        dx = _nabla_x(lat, gamma + alpha, z - ks)
        out[i] = float(np.sum(c * fv[i - ks] * dx))
    return GridFunction(a + 1.0, out, a)


def nikiforov_diff(lat: LatticeSpec, n: int, f: GridFunction, gamma: float = 1.0) -> GridFunction:
    """Closed-form ``n``-th difference ``nabla_gamma^n f`` as an alternating weighted sum.

    With ``y(s) = x_{gamma-1}(s)`` the weight of ``f(s-n+k)`` is
    ``(-1)^(n-k) [n]!/([k]![n-k]!) * nabla y(s+k-(n-1)/2) / prod_{l=0}^{n} nabla y(s+(k-l+1)/2)``.
    """
    if n < 0:
        raise ConfigError("order must be non-negative")
    if f.count <= n:
        raise SizeError(f"order {n} needs more than {n} samples")
    g = gamma - 1.0
    fact = bracket_factorial(lat, n)
    out = np.zeros(f.count - n)
    for i in range(out.size):
        s = f.base + n + i
        acc = 0.0
        for k in range(n + 1):
            coef = (-1) ** (n - k) * fact / (bracket_factorial(lat, k) * bracket_factorial(lat, n - k))
            num = _nabla_x(lat, g, s + k - 0.5 * (n - 1))
            den = 1.0
            for l in range(n + 1):
                den *= _nabla_x(lat, g, s + 0.5 * (k - l + 1))
            acc += coef * num / den * f.values[i + k]
        out[i] = acc
    return GridFunction(f.base + n, out)


# ---------------------------------------------------------------------------
# Caputo differences, Abel equations, Taylor formulas
# ---------------------------------------------------------------------------
def caputo_anchor(f: GridFunction, m: int) -> float:
    """Anchor used by Caputo-type operators: the last point whose data seeds ``m`` differences."""
    return f.anchor if f.anchored else f.base + m - 1


def _caputo(lat: LatticeSpec, gamma: float, alpha: float, f: GridFunction) -> GridFunction:
    order = FracOrder(alpha)
    m = order.m
    a = caputo_anchor(f, m)
    g = gamma + order.alpha - m
    h = nabla_diff(lat, g, m, f)
    if order.is_integer:
        return h.restrict(a + 1.0)
    return frac_sum_at(lat, g, m - order.alpha, h, a)


def caputo_diff(cfg: OperatorConfig, f: GridFunction) -> GridFunction:
    """``nabla_{g}^{alpha-m} nabla_{g}^m f`` with ``g = gamma + alpha - m``.

    The sum is anchored at ``a = base + m - 1`` (the first point where all
    ``m`` differences exist, minus one); the result is zero there.  For an
    anchored input the input's anchor is used and the data are zero-extended.
    """
    if not cfg.alpha > 0.0:
        raise ConfigError("difference order must be positive")
    if not f.anchored and f.count <= cfg.m:
        raise SizeError(f"Caputo difference of order {cfg.alpha} needs more than {cfg.m} samples")
    return _caputo(cfg.lattice, cfg.gamma, cfg.alpha, f)


def taylor_coefficients(lat: LatticeSpec, gamma: float, k: int, f: GridFunction, a: float) -> list[float]:
    """``nabla^j_{gamma+k-j} f(a)`` for ``j = 0..k-1``."""
    out = []
    for j in range(k):
        out.append(nabla_diff(lat, gamma + k - j, j, f).value_at(a))
    return out


def taylor_polynomial(lat: LatticeSpec, nu: float, coeffs, a: float, points) -> np.ndarray:
    """``sum_j coeffs[j] [x_nu(z) - x_nu(a)]^(j) / [j]_q!`` at every ``z`` in ``points``."""
    pts = np.asarray(points, dtype=float)
    out = np.zeros(pts.size)
    for j, cj in enumerate(coeffs):
        if cj == 0.0:
            continue
        fact = bracket_factorial(lat, j)
        out += cj / fact * np.array([gen_power(lat, nu, z, a, j) for z in pts])
    return out


def taylor_expand_integer(cfg: OperatorConfig, k: int, f: GridFunction) -> tuple[GridFunction, GridFunction]:
    """Split ``f`` into its ``k``-term Taylor polynomial and the remainder.

    Returns ``(poly, rem)`` on ``a, a+1, ...`` with ``a = base + k - 1`` (or the
    anchor of an anchored input); ``rem = nabla_gamma^{-k} nabla_gamma^k f`` and
    ``poly + rem = f``.
    """
    lat, gamma = cfg.lattice, cfg.gamma
    k = int(k)
    if k < 1:
        raise ConfigError("Taylor depth must be positive")
    if not f.anchored and f.count <= k:
        raise SizeError(f"Taylor expansion of depth {k} needs more than {k} samples")
    a = caputo_anchor(f, k)
    rem = frac_sum_at(lat, gamma, float(k), nabla_diff(lat, gamma, k, f), a)
    coeffs = taylor_coefficients(lat, gamma, k, f, a)
    poly = taylor_polynomial(lat, gamma + k - 1.0, coeffs, a, rem.points)
    return GridFunction(rem.base, poly), rem


def power_sum(lat: LatticeSpec, nu: float, a: float, expo: float, points) -> np.ndarray:
    """``[x_nu(z) - x_nu(a)]^(expo) / [Gamma(expo+1)]_q`` at the given points.

    This is the order-``expo`` sum of the constant 1 anchored at ``a``; it is
    0 at ``z = a`` unless ``expo`` is a non-positive integer.
    """
    out = np.zeros(len(points))
    for i, z in enumerate(points):
        if z - a < 0.5 and as_integer(expo) is None:
            continue
        if z - a < 0.5:
            out[i] = 1.0 if as_integer(expo) == 0 else 0.0
            continue
        out[i] = gen_power_normalized(lat, nu, z, a, expo)
    return out


def _rl_value_at(lat: LatticeSpec, gamma: float, order: float, f: GridFunction, a: float) -> float:
    """Value at ``a`` of the order-``order`` operator (sum if negative) anchored at ``a``."""
    if as_integer(order) == 0:
        return f.value_at(a)
    if order < 0:
        return frac_sum_at(lat, gamma, -order, f, a).value_at(a)
    return _rl_compose(lat, gamma, order, f, a).value_at(a)


def frac_taylor_defect(cfg: OperatorConfig, f: GridFunction, kind: TaylorKind | str) -> GridFunction:
    """Pointwise LHS - RHS of the RL or Caputo fractional Taylor formula.

    RL: ``nabla^{-alpha} nabla^alpha f`` against ``f`` minus the terms
    ``nabla^{j-k+alpha}_{gamma+k-j} f(a) [x_{gamma+alpha-1}(z)-x_{gamma+alpha-1}(a)]^(alpha-k+j)/[Gamma(alpha-k+j+1)]``.

    Caputo: ``nabla^{-alpha} [C-nabla^alpha] f`` against ``f`` minus the terms
    ``nabla^j_{gamma+alpha-j} f(a) [x_{gamma+alpha-1}(z)-x_{gamma+alpha-1}(a)]^(j)/[j]!``.
    For integer ``alpha`` both reduce to the integer Taylor formula.
    """
    kind = TaylorKind(kind) if not isinstance(kind, TaylorKind) else kind
    lat, gamma, alpha, k = cfg.lattice, cfg.gamma, cfg.alpha, cfg.m
    if cfg.order.is_integer:
        poly, rem = taylor_expand_integer(cfg.replace(alpha=alpha), k, f)
        fa = f.extended(rem.base)
        return GridFunction(rem.base, rem.values + poly.values - fa)
    if kind is TaylorKind.RL:
        a = _default_anchor(f)
        lhs = frac_sum_at(lat, gamma, alpha, _rl_compose(lat, gamma, alpha, f, a), a)
        corr = np.zeros(lhs.count)
        for j in range(k):
            order = j - k + alpha
            coef = _rl_value_at(lat, gamma + k - j, order, f, a)
            if coef != 0.0:
                corr += coef * power_sum(lat, gamma + alpha - 1.0, a, order, lhs.points)
        rhs = f.extended(a) - corr
        return GridFunction(a + 1.0, (lhs.values - rhs)[1:])
    a = caputo_anchor(f, k)
    lhs = frac_sum_at(lat, gamma, alpha, _caputo(lat, gamma, alpha, f), a)
    coeffs = [nabla_diff(lat, gamma + alpha - j, j, f).value_at(a) for j in range(k)]
    corr = taylor_polynomial(lat, gamma + alpha - 1.0, coeffs, a, lhs.points)
    return GridFunction(a, lhs.values - (f.extended(a)[: lhs.count] - corr))


def abel_solve(cfg: OperatorConfig, f: GridFunction, variant: AbelVariant | str = AbelVariant.COMPOSE) -> GridFunction:
    """Solve ``nabla_gamma^{-alpha} g = f`` on ``a+1, ...``.

    The anchor is ``a = base + m - 1`` so that both variants see the same
    data: ``COMPOSE`` evaluates ``nabla_gamma^m nabla_{gamma+alpha}^{alpha-m} f``
    and ``INITIAL_DATA`` the Caputo difference plus the correction terms built
    from ``nabla^k_{gamma+alpha-k} f(a)``.  The returned ``g`` is anchored at
    ``a``.
    """
    variant = AbelVariant(variant) if not isinstance(variant, AbelVariant) else variant
    lat, gamma, alpha, m = cfg.lattice, cfg.gamma, cfg.alpha, cfg.m
    if not alpha > 0.0:
        raise ConfigError("order must be positive")
    if not f.anchored and f.count < m + 1:
        raise SizeError(f"Abel solve of order {alpha} needs at least {m + 1} samples")
    a = caputo_anchor(f, m)
    if variant is AbelVariant.COMPOSE:
        return _rl_compose(lat, gamma, alpha, f, a)
    cap = _caputo(lat, gamma, alpha, f)
    g = cap.extended(a + 1.0)
    pts = a + 1.0 + np.arange(g.size, dtype=float)
    for k in range(m):
        coef = nabla_diff(lat, gamma + alpha - k, k, f).value_at(a)
        if coef != 0.0:
            g = g + coef * power_sum(lat, gamma - 1.0, a, k - alpha, pts)
    return GridFunction(a + 1.0, g, a)


# ---------------------------------------------------------------------------
# uniform-lattice oracle
# ---------------------------------------------------------------------------
def binomial_weights(alpha: float, n: int) -> np.ndarray:
    """``[alpha; j] = alpha (alpha+1) ... (alpha+j-1) / j!`` for ``j = 0..n-1``."""
    w = np.empty(n)
    acc = 1.0
    for j in range(n):
        w[j] = acc
        acc *= (alpha + j) / (j + 1)
    return w


def uniform_binomial_sum(alpha: float, f: GridFunction) -> GridFunction:
    """``sum_{k=a}^{x} [alpha; x-k] f(k)`` on the unit lattice ``x(s) = s``.

    Note the sum starts at the base point itself, whereas :func:`frac_sum`
    starts one step right of its anchor; the two agree when the latter is
    anchored at ``base - 1``.
    """
    if not alpha > 0.0:
        raise ConfigError("order must be positive")
    n = f.count
    w = binomial_weights(alpha, n)
    out = np.array([np.dot(w[: i + 1][::-1], f.values[: i + 1]) for i in range(n)])
    return GridFunction(f.base, out)


def check_alignment(f: GridFunction, g: GridFunction) -> None:
    if not f.same_class(g):
        raise AlignmentError(f"grids based at {f.base} and {g.base} do not align")


__all__ = [
    "OperatorConfig",
    "TaylorKind",
    "AbelVariant",
    "nabla_diff",
    "nabla_diff_k",
    "sum_weights",
    "frac_sum",
    "frac_sum_at",
    "rl_diff_compose",
    "rl_diff_direct",
    "rl_diff_residue",
    "residue_weights",
    "nikiforov_diff",
    "caputo_anchor",
    "caputo_diff",
    "taylor_coefficients",
    "taylor_polynomial",
    "taylor_expand_integer",
    "power_sum",
    "frac_taylor_defect",
    "abel_solve",
    "binomial_weights",
    "uniform_binomial_sum",
]
