"""Central (delta) fractional calculus, fractional exponentials and series FDE solutions.

The central difference is ``delta f(z) = (f(z+1/2) - f(z-1/2)) / (x(z+1/2) - x(z-1/2))``;
every application moves the grid by half a step.  The central sum of order
``alpha`` of ``f`` given on ``b, b+1, ...`` is

    delta^{-alpha} f(z) = sum_{t=b}^{z-alpha/2} [x(z) - x_{alpha-2}(t)]^(alpha-1)/[Gamma(alpha)]_q f(t) delta x(t)

and lives on ``b + alpha/2, b + alpha/2 + 1, ...``.  As in :mod:`nulfrac.operators`,
sums are zero left of their first term and carry that information as an
anchor, which later differences use to extend them by zeros.
"""

from __future__ import annotations

import cmath
import enum
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    ConfigError,
    DegenerateError,
    DivergenceError,
    IntegerOrderError,
    OrderError,
    RepeatedRootWarning,
    SizeError,
)
from .grid import GRID_TOL, GridFunction
from .lattice import (
    FracOrder,
    LatticeSpec,
    as_integer,
    gen_power,
    gen_power_normalized,
    inv_modified_gamma,
)
from .mutation import kernel_exponent

#: Absolute floor used by the relative tail criterion of series.
SERIES_FLOOR = 1e-300
#: Environment variable overriding the default series tail tolerance.
TAIL_TOL_ENV = "NULFRAC_TAIL_TOL"


def default_tail_tol() -> float:
    raw = os.environ.get(TAIL_TOL_ENV)
    if raw is None or raw.strip() == "":
        return 1e-14
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"{TAIL_TOL_ENV} must be a positive number, got {raw!r}") from None
    if not (val > 0.0 and math.isfinite(val)):
        raise ConfigError(f"{TAIL_TOL_ENV} must be a positive number, got {raw!r}")
    return val


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of the fractional exponential / trigonometric series.

    ``lam`` is the eigenvalue as a ``(re, im)`` pair (a bare real is accepted).
    ``tail_tol=None`` means "use the environment default".
    """

    lam: tuple[float, float] = (0.0, 0.0)
    omega: float = 0.0
    max_terms: int = 400
    tail_tol: float | None = None

    def __post_init__(self) -> None:
        lam = self.lam
        if isinstance(lam, complex):
            lam = (lam.real, lam.imag)
        elif isinstance(lam, (int, float)):
            lam = (float(lam), 0.0)
        lam = (float(lam[0]), float(lam[1]))
        object.__setattr__(self, "lam", lam)
        if int(self.max_terms) < 1:
            raise ConfigError("max_terms must be at least 1")
        object.__setattr__(self, "max_terms", int(self.max_terms))
        if self.omega < 0 or not math.isfinite(self.omega):
            raise ConfigError("omega must be a non-negative real")
        tol = default_tail_tol() if self.tail_tol is None else float(self.tail_tol)
        if not tol > 0.0:
            raise ConfigError("tail_tol must be positive")
        object.__setattr__(self, "tail_tol", tol)

    @property
    def lam_complex(self) -> complex:
        return complex(self.lam[0], self.lam[1])


@dataclass(frozen=True)
class CentralConfig:
    """Lattice, order, anchor ``a`` and series parameters of the central calculus."""

    lattice: LatticeSpec
    order: FracOrder = FracOrder(1.0)
    a: float = 0.0
    series: SeriesSpec = field(default_factory=SeriesSpec)

    def __post_init__(self) -> None:
        if not isinstance(self.order, FracOrder):
            object.__setattr__(self, "order", FracOrder(float(self.order)))
        object.__setattr__(self, "a", float(self.a))

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def m(self) -> int:
        return self.order.m

    def replace(self, **changes) -> "CentralConfig":
        vals = dict(lattice=self.lattice, order=self.order, a=self.a, series=self.series)
        if "alpha" in changes:
            changes["order"] = FracOrder(changes.pop("alpha"))
        vals.update(changes)
        return CentralConfig(**vals)


class CentralTaylorKind(enum.Enum):
    INTEGER = "integer"
    RL = "rl"
    CAPUTO = "caputo"
    SEQUENTIAL = "sequential"
    MIXED_SUM = "p5"
    MIXED_DIFF = "p6"


def _delta_x(lat: LatticeSpec, t):
    return lat.x(t + 0.5) - lat.x(t - 0.5)


# ---------------------------------------------------------------------------
# integer central differences and central sums
# ---------------------------------------------------------------------------
def central_diff(lat: LatticeSpec, k: int, f: GridFunction) -> GridFunction:
    """``k``-fold central difference.

    Plain input: the grid moves right by ``k/2`` and loses ``k`` points.
    Anchored input: zero extension; the grid moves left by ``k/2`` and keeps
    its length.
    """
    if k < 0:
        raise ConfigError("difference depth must be non-negative")
    if k == 0:
        return f
    if f.anchored:
        vals = f.extended(f.base - k)
        first = f.base - k
    else:
        if f.count <= k:
            raise SizeError(f"{k} central differences need more than {k} samples")
        vals = f.values.copy()
        first = f.base
    for _ in range(k):
        pts = first + 0.5 + np.arange(vals.size - 1, dtype=float)
        vals = np.diff(vals) / _delta_x(lat, pts)
        first += 0.5
    if f.anchored:
        return GridFunction(f.base - 0.5 * k, vals, f.anchor - 0.5 * k)
    return GridFunction(first, vals)


def central_diff_k(cfg: CentralConfig, k: int, f: GridFunction) -> GridFunction:
    return central_diff(cfg.lattice, int(k), f)


def central_sum(lat: LatticeSpec, alpha: float, f: GridFunction, *, site: str = "central_sum") -> GridFunction:
    """Central sum of order ``alpha > 0``; output grid starts at ``f.base + alpha/2``."""
    if not alpha > 0.0:
        raise ConfigError("summation order must be positive")
    n = f.count
    b = f.base
    expo = kernel_exponent(site, alpha - 1.0)
    norm = inv_modified_gamma(lat, alpha)
    ts = b + np.arange(n, dtype=float)
    fw = f.values * _delta_x(lat, ts)
    out = np.zeros(n)
    for i in range(n):
        z = b + 0.5 * alpha + i
        s = z - 0.5 * alpha + 1.0
        acc = 0.0
        for j in range(i + 1):
            if fw[j] != 0.0:
                acc += gen_power(lat, alpha - 2.0, s, ts[j], expo) * fw[j]
        out[i] = acc * norm
    anchor = (f.anchor if f.anchored else b - 1.0) + 0.5 * alpha
    if anchor >= b + 0.5 * alpha - GRID_TOL:
        out[0] = 0.0
    return GridFunction(b + 0.5 * alpha, out, anchor)


def central_frac_sum(cfg: CentralConfig, f: GridFunction) -> GridFunction:
    """``delta^{-alpha} f`` (order from ``cfg``)."""
    return central_sum(cfg.lattice, cfg.alpha, f)


def _as_anchored(f: GridFunction) -> GridFunction:
    """Treat a plain function as zero left of its base."""
    if f.anchored:
        return f
    return GridFunction(f.base, f.values, f.base - 1.0)


def central_rl(lat: LatticeSpec, alpha: float, f: GridFunction) -> GridFunction:
    """Compose form ``delta^m delta^{alpha-m}``; output starts at ``f.base - alpha/2``."""
    order = FracOrder(alpha)
    m = order.m
    if order.is_integer:
        inner = _as_anchored(f)
    else:
        inner = central_sum(lat, m - order.alpha, f)
    return central_diff(lat, m, inner)


def central_rl_direct(lat: LatticeSpec, alpha: float, f: GridFunction) -> GridFunction:
    """Direct negative-order kernel sum up to ``t = z + alpha/2`` (non-integer ``alpha``)."""
    order = FracOrder(alpha)
    if order.is_integer:
        raise IntegerOrderError("direct central kernel is undefined for integer order")
    alpha = order.alpha
    b = f.base
    n = f.count
    expo = kernel_exponent("central_direct", -alpha - 1.0)
    norm = inv_modified_gamma(lat, -alpha)
    ts = b + np.arange(n, dtype=float)
    fw = f.values * _delta_x(lat, ts)
    out = np.zeros(n)
    for i in range(n):
        z = b - 0.5 * alpha + i
        s = z + 0.5 * alpha + 1.0
        acc = 0.0
        for j in range(i + 1):
            if fw[j] != 0.0:
                acc += gen_power(lat, -alpha - 2.0, s, ts[j], expo) * fw[j]
        out[i] = acc * norm
    anchor = (f.anchor if f.anchored else b - 1.0) - 0.5 * alpha
    if anchor >= b - 0.5 * alpha - GRID_TOL:
        out[0] = 0.0
    return GridFunction(b - 0.5 * alpha, out, anchor)


def central_rl_diff(cfg: CentralConfig, f: GridFunction, mode: str = "compose") -> GridFunction:
    """Riemann--Liouville central difference, ``mode`` in ``{"compose", "direct"}``."""
    mode = mode.lower()
    if not cfg.alpha > 0.0:
        raise ConfigError("difference order must be positive")
    if mode == "compose":
        return central_rl(cfg.lattice, cfg.alpha, f)
    if mode == "direct":
        return central_rl_direct(cfg.lattice, cfg.alpha, f)
    raise ConfigError(f"mode must be 'compose' or 'direct', not {mode!r}")


def central_caputo_op(lat: LatticeSpec, alpha: float, f: GridFunction) -> GridFunction:
    """``delta^{alpha-m} delta^m f``.

    Plain input: the ``m`` differences use the data as given (the first
    samples act as initial values); anchored input is zero-extended.
    """
    order = FracOrder(alpha)
    m = order.m
    if not f.anchored and f.count <= m:
        raise SizeError(f"Caputo central difference of order {alpha} needs more than {m} samples")
    h = central_diff(lat, m, f)
    if order.is_integer:
        return h
    return central_sum(lat, m - order.alpha, h)


def central_caputo(cfg: CentralConfig, f: GridFunction) -> GridFunction:
    if not cfg.alpha > 0.0:
        raise ConfigError("difference order must be positive")
    return central_caputo_op(cfg.lattice, cfg.alpha, f)


def _plain(f: GridFunction) -> GridFunction:
    return f if not f.anchored else GridFunction(f.base, f.values)


def sequential_stages(lat: LatticeSpec, alpha: float, k: int, f: GridFunction) -> list[GridFunction]:
    """``[f, C f, C C f, ...]`` (``k+1`` entries) with ``C`` the order-``alpha`` Caputo difference.

    Each stage is fed to the next as plain data, so its first sample serves
    as the initial value of the following step.
    """
    if not 0.0 < alpha <= 1.0:
        raise OrderError("sequential differences need 0 < alpha <= 1")
    if k < 0:
        raise ConfigError("k must be non-negative")
    stages = [_plain(f)]
    for _ in range(k):
        prev = stages[-1]
        if prev.count < 2:
            raise SizeError(f"grid too short for {k} sequential differences")
        stages.append(_plain(central_caputo_op(lat, alpha, prev)))
    return stages


def sequential_diff(cfg: CentralConfig, k: int, f: GridFunction) -> GridFunction:
    """``k``-fold composition of the order-``alpha`` Caputo central difference (0 < alpha <= 1)."""
    k = int(k)
    if k < 1:
        raise ConfigError("k must be positive")
    return sequential_stages(cfg.lattice, cfg.alpha, k, f)[-1]


# ---------------------------------------------------------------------------
# Taylor-type identities
# ---------------------------------------------------------------------------
def central_power_normalized(lat: LatticeSpec, beta: float, z: float, p: float) -> float:
    """``[x(z) - x_{beta-1}(p)]^(beta) / [Gamma(beta+1)]_q`` (the order-``beta`` central sum of 1)."""
    s = z - 0.5 * (beta - 1.0)
    k = as_integer(beta)
    if k is not None and k >= 0:
        return gen_power_normalized(lat, beta - 1.0, s, p, k)
    d = s - p
    di = as_integer(d)
    if di is not None and di < 1:
        return 0.0
    return gen_power_normalized(lat, beta - 1.0, s, p, beta)


def central_taylor_polynomial(lat: LatticeSpec, k: int, f: GridFunction, points) -> np.ndarray:
    """Correction terms of ``delta^{-k} delta^k f`` for plain ``f`` based at ``b``.

    With ``c = b + k - 1`` they read
    ``sum_j delta^j f(c - j/2)/[j]! * prod_{i<j} (x(z) - x(c - i))``.
    """
    c = f.base + k - 1
    out = np.zeros(len(points))
    for j in range(k):
        coef = central_diff(lat, j, f).value_at(c - 0.5 * j)
        if coef == 0.0:
            continue
        p = c - 0.5 * (j - 1)
        out += coef * np.array([central_power_normalized(lat, j, z, p) for z in points])
    return out


def _defect(lhs: GridFunction, rhs_vals_at, start: float | None = None) -> GridFunction:
    start = lhs.base if start is None else start
    vals = lhs.extended(start)
    pts = start + np.arange(vals.size, dtype=float)
    return GridFunction(start, vals - rhs_vals_at(pts))


def _values_on(f: GridFunction, pts) -> np.ndarray:
    return np.array([f.value_at(z) for z in pts])


def central_taylor_defect(
    cfg: CentralConfig,
    f: GridFunction,
    kind: CentralTaylorKind | str,
    *,
    k: int | None = None,
    p: float | None = None,
    q: float | None = None,
) -> GridFunction:
    """Pointwise LHS - RHS of a central Taylor-type identity.

    * ``INTEGER`` (depth ``k``): ``delta^{-k} delta^k f = f - central_taylor_polynomial``.
    * ``RL``: ``delta^{-alpha} delta^alpha f = f`` (the correction terms are
      values of sums/RL differences at their own anchor and vanish).
    * ``CAPUTO``: ``delta^{-alpha} [C-delta^alpha] f = delta^{-m} delta^m f``,
      i.e. ``f`` minus the depth-``m`` polynomial.
    * ``SEQUENTIAL`` (depth ``k``): ``delta^{-k alpha} [S-delta^{k alpha}] f =
      f - sum_j g_j(b_j) [x(z) - x_{j alpha-1}(b_j - 1/2)]^(j alpha)/[Gamma(j alpha+1)]``
      where ``g_j`` is the ``j``-th stage starting at ``b_j``.
    * ``MIXED_SUM`` (orders ``p, q``): ``delta^{-p} delta^q f = delta^{q-p} f``.
    * ``MIXED_DIFF`` (orders ``p, q``): ``delta^p delta^q f = delta^{p+q} f``.
    """
    kind = CentralTaylorKind(kind) if not isinstance(kind, CentralTaylorKind) else kind
    lat, alpha = cfg.lattice, cfg.alpha
    f = _plain(f)
    if kind is CentralTaylorKind.INTEGER:
        k = cfg.m if k is None else int(k)
        if k < 1:
            raise ConfigError("depth must be positive")
        if f.count <= k:
            raise SizeError(f"depth {k} needs more than {k} samples")
        lhs = central_sum(lat, float(k), central_diff(lat, k, f))
        return _defect(lhs, lambda pts: _values_on(f, pts) - central_taylor_polynomial(lat, k, f, pts))
    if kind is CentralTaylorKind.RL:
        lhs = central_sum(lat, alpha, central_rl(lat, alpha, f))
        return _defect(lhs, lambda pts: _values_on(f, pts))
    if kind is CentralTaylorKind.CAPUTO:
        m = cfg.m
        if f.count <= m:
            raise SizeError(f"order {alpha} needs more than {m} samples")
        lhs = central_sum(lat, alpha, central_caputo_op(lat, alpha, f))
        return _defect(lhs, lambda pts: _values_on(f, pts) - central_taylor_polynomial(lat, m, f, pts))
    if kind is CentralTaylorKind.SEQUENTIAL:
        k = 1 if k is None else int(k)
        stages = sequential_stages(lat, alpha, k, f)
        lhs = central_sum(lat, k * alpha, stages[-1])

        def rhs(pts):
            out = _values_on(f, pts)
            for j in range(k):
                g = stages[j]
                coef = g.values[0]
                if coef == 0.0:
                    continue
                anchor = g.base - 0.5
                out = out - coef * np.array([central_power_normalized(lat, j * alpha, z, anchor) for z in pts])
            return out

        return _defect(lhs, rhs)
    if p is None or q is None:
        raise ConfigError("mixed compositions need both p and q")
    if kind is CentralTaylorKind.MIXED_SUM:
        lhs = central_sum(lat, p, central_rl(lat, q, f))
        if abs(q - p) <= GRID_TOL:
            rhs_f = _as_anchored(f)
        elif q < p:
            rhs_f = central_sum(lat, p - q, f)
        else:
            rhs_f = central_rl(lat, q - p, f)
        return _defect(lhs, lambda pts: _values_on(rhs_f, pts), start=max(lhs.base, rhs_f.base))
    lhs = central_rl(lat, p, central_rl(lat, q, f))
    rhs_f = central_rl(lat, p + q, f)
    return _defect(lhs, lambda pts: _values_on(rhs_f, pts), start=max(lhs.base, rhs_f.base))


# ---------------------------------------------------------------------------
# fractional exponential and trigonometric functions
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value with its truncation diagnostics."""

    value: complex
    err_estimate: float
    terms: int


def exp_term(lat: LatticeSpec, alpha: float, a: float, k: int, z: float) -> float:
    """``[x(z) - x_{k alpha-1}(a)]^(k alpha)/[Gamma(k alpha+1)]_q`` or ``0``.

    The term is the order-``k alpha`` central sum of 1 started at ``a + 1/2``;
    it lives on the grid ``a + (k alpha + 1)/2 + Z`` and vanishes at and left
    of ``a + (k alpha - 1)/2``.  Off that grid the term is not defined and
    contributes ``0``.
    """
    beta = k * alpha
    d = z - a - 0.5 * (beta - 1.0)
    di = as_integer(d)
    if di is None or di < 1:
        return 0.0 if k > 0 else (1.0 if di is not None else 0.0)
    if k == 0:
        return 1.0
    return central_power_normalized(lat, beta, z, a)


def exp_series(
    lat: LatticeSpec,
    alpha: float,
    a: float,
    coeff: Callable[[int], complex],
    z: float,
    series: SeriesSpec,
) -> SeriesValue:
    """``sum_k coeff(k) * exp_term(k)`` with the relative-tail truncation rule.

    Only finitely many terms are non-zero at any ``z``; the sum stops early
    once a non-zero term is below ``tail_tol`` times the partial sum, and
    raises :class:`DivergenceError` if ``max_terms`` is exhausted first.
    """
    total = 0j
    last = 0.0
    kmax = int(math.floor((2.0 * (z - a) + 1.0) / alpha + GRID_TOL)) if z > a - 0.5 else 0
    used = 0
    for k in range(series.max_terms):
        if k > kmax:
            return SeriesValue(total, 0.0, used)
        t = exp_term(lat, alpha, a, k, z)
        if t == 0.0:
            continue
        c = coeff(k)
        if c == 0:
            continue
        term = c * t
        total += term
        used = k + 1
        last = abs(term)
        if k > 0 and last <= series.tail_tol * max(abs(total), SERIES_FLOOR):
            return SeriesValue(total, last, used)
    if kmax < series.max_terms:
        return SeriesValue(total, 0.0, used)
    raise DivergenceError(f"series at z={z} did not settle within {series.max_terms} terms (last term {last:.3g})")


def frac_exp_value(cfg: CentralConfig, z: float, lam: complex | None = None) -> SeriesValue:
    """``e(alpha, lam, z) = sum_k lam^k [x(z) - x_{k alpha-1}(a)]^(k alpha)/[Gamma(k alpha+1)]_q``."""
    lam = cfg.series.lam_complex if lam is None else complex(lam)
    return exp_series(cfg.lattice, cfg.alpha, cfg.a, lambda k: lam ** k, float(z), cfg.series)


def frac_exp(cfg: CentralConfig, z):
    """Fractional exponential at ``z`` (scalar or array).

    Returns ``(value, err_estimate)``; ``value`` is real when ``lam`` is real.
    """
    real = cfg.series.lam[1] == 0.0
    if np.ndim(z) == 0:
        r = frac_exp_value(cfg, float(z))
        return (r.value.real if real else r.value), r.err_estimate
    res = [frac_exp_value(cfg, float(p)) for p in np.asarray(z, dtype=float)]
    vals = np.array([r.value for r in res])
    errs = np.array([r.err_estimate for r in res])
    return (vals.real if real else vals), errs


def frac_trig(cfg: CentralConfig, z: float) -> tuple[float, float]:
    """``(cos(alpha, omega, z), sin(alpha, omega, z))`` from the series with ``lam = +-i omega``.

    ``cos = sum_n (-1)^n omega^(2n) T_{2n}`` and ``sin = sum_n (-1)^n omega^(2n+1) T_{2n+1}``
    with ``T_k`` the exponential's terms; equivalently ``(e(i w) +- e(-i w))/(2, 2i)``.
    """
    w = cfg.series.omega
    lat, alpha, a = cfg.lattice, cfg.alpha, cfg.a

    def cos_c(k):
        return 0.0 if k % 2 else (-1.0) ** (k // 2) * w ** k

    def sin_c(k):
        return 0.0 if k % 2 == 0 else (-1.0) ** (k // 2) * w ** k

    c = exp_series(lat, alpha, a, cos_c, float(z), cfg.series)
    s = exp_series(lat, alpha, a, sin_c, float(z), cfg.series)
    return c.value.real, s.value.real


def exp_grid(cfg: CentralConfig, base: float, count: int, lam: complex | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points, values and error estimates of ``e(alpha, lam, .)`` on a unit grid."""
    pts = base + np.arange(count, dtype=float)
    res = [frac_exp_value(cfg, p, lam) for p in pts]
    return pts, np.array([r.value for r in res]), np.array([r.err_estimate for r in res])


def eigen_input_base(cfg: CentralConfig) -> float:
    """Start of the sample grid on which the Caputo difference of ``e`` is exact.

    Sampling ``e`` from ``a + (alpha-1)/2`` (the last zero of its first
    non-constant term) makes the Caputo difference land on ``a + 1/2, a + 3/2, ...``.
    """
    return cfg.a + 0.5 * (cfg.alpha - 1.0)


def eigen_residual(cfg: CentralConfig, npoints: int = 8, lam: complex | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Residual ``C-delta^alpha e - lam * e`` on ``a + 1/2, ..., a + npoints - 1/2``.

    Returns ``(points, residual)``; real and imaginary parts are processed
    separately so the real-valued operators can be reused for complex ``lam``.
    """
    lam = cfg.series.lam_complex if lam is None else complex(lam)
    if not 0.0 < cfg.alpha <= 1.0:
        raise OrderError("the eigen-relation is checked for 0 < alpha <= 1")
    b = eigen_input_base(cfg)
    _, vals, _ = exp_grid(cfg, b, npoints + 1, lam)
    re = central_caputo_op(cfg.lattice, cfg.alpha, GridFunction(b, vals.real))
    im = central_caputo_op(cfg.lattice, cfg.alpha, GridFunction(b, vals.imag))
    pts = re.points
    _, target, _ = exp_grid(cfg, re.base, re.count, lam)
    res = re.values + 1j * im.values - lam * target
    return pts, res


# ---------------------------------------------------------------------------
# sequential fractional difference equations
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FdeSolution:
    """One characteristic root and the corresponding fractional exponential."""

    root: complex
    evaluate: Callable[[float], complex]


def characteristic_roots(coeffs) -> np.ndarray:
    """Roots of ``a_n lam^n + ... + a_1 lam + a_0`` given ``coeffs = [a_0, ..., a_n]``.

    Linear and quadratic polynomials are solved in closed form so that, e.g.,
    ``lam^2 + w^2`` yields exactly ``+-i w``; higher degrees use the
    companion-matrix eigenvalues (:func:`numpy.roots`).
    """
    c = [float(v) for v in coeffs]
    if len(c) < 2:
        raise DegenerateError("need at least a_0 and a_1")
    if c[-1] == 0.0:
        raise DegenerateError("leading coefficient a_n must be non-zero")
    n = len(c) - 1
    if n == 1:
        return np.array([complex(-c[0] / c[1])])
    if n == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        if a1 == 0.0:
            r = cmath.sqrt(complex(-a0 / a2))
            return np.array([r, -r])
        disc = cmath.sqrt(complex(a1 * a1 - 4.0 * a2 * a0))
        # numerically stable pair
        sgn = 1.0 if a1 >= 0 else -1.0
        qv = -0.5 * (a1 + sgn * disc)
        r1 = qv / a2
        r2 = a0 / qv if qv != 0 else -r1
        return np.array([r1, r2])
    return np.roots(c[::-1]).astype(complex)


def _distinct(roots: np.ndarray, tol: float = 1e-8) -> tuple[list[complex], bool]:
    out: list[complex] = []
    repeated = False
    for r in roots:
        if any(abs(r - o) <= tol * max(1.0, abs(o)) for o in out):
            repeated = True
            continue
        out.append(complex(r))
    return out, repeated


def solve_seq_fde(cfg: CentralConfig, coeffs) -> list[FdeSolution]:
    """Distinct-root solutions of ``sum_j a_j S-delta^{j alpha} f = 0``.

    Each root ``lam`` of the characteristic polynomial gives the solution
    ``e(alpha, lam, .)``.  Repeated roots raise a :class:`RepeatedRootWarning`
    and only the distinct roots are returned.

    On sampled data the sequential stages of ``e`` are exact up to order two
    (any order when ``alpha = 1``); from the third stage on a fractional
    order drops series terms that started left of the stage grid, which
    :func:`fde_residual` reports.
    """
    roots = characteristic_roots(coeffs)
    distinct, repeated = _distinct(roots)
    if repeated:
        warnings.warn("characteristic polynomial has repeated roots; returning the distinct-root basis", RepeatedRootWarning, stacklevel=2)

    def make(lam: complex) -> Callable[[float], complex]:
        def evaluate(z: float) -> complex:
            return frac_exp_value(cfg, z, lam).value

        return evaluate

    return [FdeSolution(r, make(r)) for r in distinct]


def fde_residual(cfg: CentralConfig, coeffs, lam: complex, npoints: int = 8, *, relative: bool = False) -> float:
    """``max |sum_j a_j S-delta^{j alpha} e(alpha, lam, .)|`` on a test grid.

    With ``relative=True`` the residual is divided by
    ``sum_j |a_j| |lam|^j max|e|``, the size of the terms that cancel; on
    quadratic lattices ``e`` grows very fast, so the absolute value alone says
    little.

    ``e`` is sampled from ``a + (alpha-1)/2 - (n-1)`` so that every stage of the
    ``n``-fold sequential difference is defined on at least ``npoints`` points;
    the stages are aligned on their common grid.
    """
    c = [float(v) for v in coeffs]
    n = len(c) - 1
    lat, alpha = cfg.lattice, cfg.alpha
    b = eigen_input_base(cfg)
    count = npoints + n
    _, vals, _ = exp_grid(cfg, b, count, lam)
    stages_re = sequential_stages(lat, alpha, n, GridFunction(b, vals.real))
    stages_im = sequential_stages(lat, alpha, n, GridFunction(b, vals.imag))
    # stage j lives on a different half-grid when alpha < 1; only alpha = 1
    # puts all even stages on one grid, so compare stage by stage against
    # lam^j e on that stage's own grid and sum the mismatches.
    total = 0.0
    scale = 0.0
    for j in range(n + 1):
        g = stages_re[j]
        gi = stages_im[j]
        _, ev, _ = exp_grid(cfg, g.base, g.count, lam)
        mism = np.max(np.abs(g.values + 1j * gi.values - lam ** j * ev)) if g.count else 0.0
        total += abs(c[j]) * mism
        if g.count:
            scale += abs(c[j]) * abs(lam) ** j * float(np.max(np.abs(ev)))
    if relative:
        return float(total / scale) if scale > 0.0 else float(total)
    return float(total)


__all__ = [
    "SeriesSpec",
    "CentralConfig",
    "CentralTaylorKind",
    "SeriesValue",
    "FdeSolution",
    "default_tail_tol",
    "central_diff",
    "central_diff_k",
    "central_sum",
    "central_frac_sum",
    "central_rl",
    "central_rl_direct",
    "central_rl_diff",
    "central_caputo_op",
    "central_caputo",
    "sequential_stages",
    "sequential_diff",
    "central_power_normalized",
    "central_taylor_polynomial",
    "central_taylor_defect",
    "exp_term",
    "exp_series",
    "frac_exp_value",
    "frac_exp",
    "frac_trig",
    "exp_grid",
    "eigen_input_base",
    "eigen_residual",
    "characteristic_roots",
    "solve_seq_fde",
    "fde_residual",
]
