"""Executable identity catalog.

Every entry of :data:`CATALOG` evaluates both sides of one identity of the
calculus with the library's own operators, on randomly drawn lattices, orders
and bounded random grid functions, and reports the largest relative defect.
:func:`run_suite` runs the whole catalog deterministically for a seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .central import (
    CentralConfig,
    SeriesSpec,
    central_caputo_op,
    central_diff,
    central_power_normalized,
    central_rl,
    central_rl_direct,
    central_sum,
    central_taylor_defect,
    eigen_residual,
    frac_exp_value,
    frac_trig,
)
from .errors import ConfigError, IoError, NulfracError
from .grid import GridFunction, overlap
from .lattice import (
    FracOrder,
    LatticeSpec,
    bracket,
    gen_power,
    gen_power_normalized,
    modified_gamma,
    x_shifted,
)
from .mutation import KernelMutation, mutated_kernel
from .operators import (
    OperatorConfig,
    _rl_compose,
    caputo_diff,
    frac_sum_at,
    frac_taylor_defect,
    nabla_diff,
    nabla_diff_k,
    nikiforov_diff,
    rl_diff_compose,
    rl_diff_direct,
    rl_diff_residue,
    taylor_expand_integer,
    uniform_binomial_sum,
)

#: Sampling ranges of the randomized suite.
ALPHA_RANGE = (0.2, 2.5)
Q_RANGE = (0.3, 0.9)
N_RANGE = (8, 40)
#: Largest accepted ratio of lattice step sizes over the sampled window; the
#: kernels involve products of two such ratios, keeping their range <= 1e12.
MAX_STEP_RATIO = 1e6
MAX_DRAWS = 200
DEFAULT_TOL = 1e-8
TINY = 1e-300
#: Ratio of intermediate to data magnitude above which a report carries a warning.
AMPLIFICATION_WARN = 1e6


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    statement: str
    tolerance: float = DEFAULT_TOL


@dataclass(frozen=True)
class IdentityCheck:
    """One catalog id plus the seed material for its random configuration."""

    id: str
    seed: int = 0
    trial: int = 0
    params: dict | None = None


@dataclass
class CheckReport:
    id: str
    params: dict
    max_rel_defect: float
    tolerance: float
    passed: bool
    conditioning_warnings: list = field(default_factory=list)
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "id": self.id,
            "params": self.params,
            "max_rel_defect": self.max_rel_defect,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "conditioning_warnings": list(self.conditioning_warnings),
        }
        if include_timing:
            d["elapsed"] = self.elapsed
        return d


# ---------------------------------------------------------------------------
# defect bookkeeping
# ---------------------------------------------------------------------------
class _Defect:
    """Accumulates ``max |lhs - rhs| / scale`` over several comparisons."""

    def __init__(self) -> None:
        self.value = 0.0
        self.warnings: list[str] = []

    def amplification(self, label: str, scale: float, ref: float) -> None:
        """Record when intermediate magnitudes dwarf the data (a conditioning hint)."""
        if ref > 0 and scale / ref > AMPLIFICATION_WARN:
            self.warnings.append(f"{label}: intermediate scale {scale:.3g} vs data {ref:.3g}")

    def add(self, lhs, rhs, *extra_scales) -> None:
        lhs = np.atleast_1d(np.asarray(lhs, dtype=complex))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=complex))
        scale = max([float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs)))] + [float(s) for s in extra_scales] + [TINY])
        d = float(np.max(np.abs(lhs - rhs))) / scale
        if not math.isfinite(d):
            d = math.inf
        self.value = max(self.value, d)

    def grids(self, f: GridFunction, g: GridFunction, *extra_scales) -> None:
        _, a, b = overlap(f, g)
        self.add(a, b, *extra_scales)

    def field(self, defect: GridFunction, *scales) -> None:
        """A defect field judged against the magnitude of the quantities it compares."""
        self.add(defect.values, np.zeros(defect.count), *scales)


# ---------------------------------------------------------------------------
# random configurations
# ---------------------------------------------------------------------------
def _step_ratio(lat: LatticeSpec, lo: float, hi: float) -> float:
    s = np.arange(lo, hi + 0.25, 0.5)
    steps = lat.x(s + 0.25) - lat.x(s - 0.25)
    if np.any(steps == 0.0) or not (np.all(steps > 0) or np.all(steps < 0)):
        return math.inf
    a = np.abs(steps)
    return float(np.max(a) / np.min(a))


def _draw_lattice(rng: np.random.Generator, family: str) -> LatticeSpec:
    if family == "quadratic":
        c1 = rng.uniform(0.5, 2.0)
        return LatticeSpec.quadratic(c1=c1, c2=c1 * rng.uniform(0.0, 1.5), c3=rng.uniform(-1.0, 1.0))
    if family == "q_quadratic":
        q = rng.uniform(*Q_RANGE)
        c1 = rng.uniform(0.2, 1.0)
        return LatticeSpec.q_quadratic(q, c1=c1, c2=c1 * rng.uniform(1.0, 3.0), c3=rng.uniform(-1.0, 1.0))
    if family == "linear":
        return LatticeSpec.linear(1.0, rng.uniform(-1.0, 1.0))
    raise ConfigError(f"unknown family {family!r}")


@dataclass
class Sample:
    """A drawn configuration: lattice, orders, shift, grid and random data."""

    lat: LatticeSpec
    alpha: float
    beta: float
    gamma: float
    n: int
    base: float
    rng: np.random.Generator
    warnings: list

    def data(self, n: int | None = None, base: float | None = None) -> GridFunction:
        n = self.n if n is None else n
        return GridFunction(self.base if base is None else base, self.rng.uniform(-1.0, 1.0, n))

    def echo(self) -> dict:
        return {
            "lattice": self.lat.to_dict(),
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "n": self.n,
            "base": self.base,
        }


def _sample(rng: np.random.Generator, family: str, n_range=N_RANGE, alpha_range=ALPHA_RANGE) -> Sample:
    warns: list = []
    for _ in range(MAX_DRAWS):
        lat = _draw_lattice(rng, family)
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        base = float(np.round(rng.uniform(3.0, 5.0) * 4.0) / 4.0)
        if _step_ratio(lat, base - 5.0, base + n + 2.0) <= MAX_STEP_RATIO:
            break
    else:
        warns.append(f"{family}: no draw within step ratio {MAX_STEP_RATIO:g}")
    return Sample(
        lat=lat,
        alpha=float(rng.uniform(*alpha_range)),
        beta=float(rng.uniform(*alpha_range)),
        gamma=float(rng.uniform(0.0, 1.0)),
        n=n,
        base=base,
        rng=rng,
        warnings=warns,
    )


# ---------------------------------------------------------------------------
# individual checks; each gets one Sample and a _Defect
# ---------------------------------------------------------------------------
def _chk_product(s: Sample, d: _Defect) -> None:
    f, g = s.data(), s.data()
    nu = s.gamma
    fg = GridFunction(f.base, f.values * g.values)
    lhs = nabla_diff(s.lat, nu, 1, fg).values
    df, dg = nabla_diff(s.lat, nu, 1, f).values, nabla_diff(s.lat, nu, 1, g).values
    d.add(lhs, f.values[:-1] * dg + g.values[1:] * df)
    d.add(lhs, g.values[:-1] * df + f.values[1:] * dg)


def _chk_quotient(s: Sample, d: _Defect) -> None:
    f = s.data()
    g = GridFunction(f.base, 1.5 + 0.5 * s.rng.uniform(-1.0, 1.0, s.n))
    nu = s.gamma
    lhs = nabla_diff(s.lat, nu, 1, GridFunction(f.base, f.values / g.values)).values
    df, dg = nabla_diff(s.lat, nu, 1, f).values, nabla_diff(s.lat, nu, 1, g).values
    den = g.values[1:] * g.values[:-1]
    d.add(lhs, (g.values[:-1] * df - f.values[:-1] * dg) / den)
    d.add(lhs, (g.values[1:] * df - f.values[1:] * dg) / den)


def _chk_fundamental(s: Sample, d: _Defect) -> None:
    f = s.data()
    S = frac_sum_at(s.lat, s.gamma, 1.0, f)
    d.grids(nabla_diff(s.lat, s.gamma, 1, S).restrict(f.base + 1.0), f)
    F = s.data()
    T = frac_sum_at(s.lat, s.gamma, 1.0, nabla_diff(s.lat, s.gamma, 1, F), F.base)
    d.grids(T, GridFunction(F.base, F.values - F.values[0]))


def _chk_powers(s: Sample, d: _Defect) -> None:
    lat, rng, X, P = s.lat, s.rng, x_shifted, gen_power
    for _ in range(40):
        nu = rng.uniform(-2.0, 2.0)
        z = rng.uniform(-1.0, 3.0) + s.base - 3.0
        k = int(rng.integers(2, 9))
        sp = z + k
        mu = rng.uniform(-0.9, 3.0)
        ref = P(lat, nu, sp, z, mu + 1)
        d.add((X(lat, nu, sp) - X(lat, nu, z)) * P(lat, nu, sp, z - 1, mu), ref)
        d.add(P(lat, nu - 1, sp + 1, z, mu) * (X(lat, nu - mu, sp) - X(lat, nu - mu, z)), ref)
        d.add((X(lat, nu - mu, sp + mu) - X(lat, nu - mu, z)) * P(lat, nu - 1, sp, z, mu), ref)
        lhs = -(P(lat, nu + 1, sp, z, mu) - P(lat, nu + 1, sp - 1, z, mu)) / (X(lat, nu + 1, sp) - X(lat, nu + 1, sp - 1))
        d.add(lhs, -bracket(lat, mu) * P(lat, nu, sp, z, mu - 1))
        lhs = (1 / P(lat, nu, sp, z, mu) - 1 / P(lat, nu, sp, z - 1, mu)) / (X(lat, nu - mu + 1, z) - X(lat, nu - mu + 1, z - 1))
        d.add(lhs, bracket(lat, mu) / ref)
        lhs = -(1 / P(lat, nu - 1, sp + 1, z, mu) - 1 / P(lat, nu - 1, sp, z, mu)) / (X(lat, nu - 1, sp + 1) - X(lat, nu - 1, sp))
        d.add(lhs, bracket(lat, mu) / ref)
        x = rng.uniform(0.1, 5.0)
        d.add(modified_gamma(lat, x + 1.0), bracket(lat, x) * modified_gamma(lat, x))


def _chk_lattice_const(s: Sample, d: _Defect) -> None:
    lat = s.lat
    al, be = s.alpha, s.beta

    def g(t):
        terms = (bracket(lat, al + be) * lat.x(t), bracket(lat, al) * x_shifted(lat, -be, t), bracket(lat, be) * x_shifted(lat, al, t))
        return terms[0] - terms[1] - terms[2], max(abs(v) for v in terms)

    ts = s.base + np.arange(s.n, dtype=float)
    vals = [g(t) for t in ts]
    scale = max(v[1] for v in vals)
    d.add([v[0] for v in vals[1:]], [vals[0][0]] * (len(vals) - 1), scale)


def _chk_euler_beta(s: Sample, d: _Defect) -> None:
    lat, a = s.lat, s.base
    al, be = s.alpha, s.beta
    pts = a + np.arange(s.n, dtype=float)
    P = GridFunction(a, [0.0] + [gen_power_normalized(lat, 0.0, t, a, al) for t in pts[1:]], a)
    lhs = frac_sum_at(lat, 1.0, be, P)
    rhs = [gen_power_normalized(lat, be, z, a, al + be) for z in lhs.points[1:]]
    d.add(lhs.values[1:], rhs)


def _chk_central_euler_beta(s: Sample, d: _Defect) -> None:
    lat, a = s.lat, s.base
    al, be = s.alpha, s.beta
    b = a + 0.5 * (al + 1.0)
    P = GridFunction(b, [central_power_normalized(lat, al, z, a) for z in b + np.arange(s.n)], b - 1.0)
    S = central_sum(lat, be, P)
    if abs(S.base - P.base - 0.5 * be) > 1e-12:
        raise AssertionError("central sum moved the grid by the wrong amount")
    d.add(S.values, [central_power_normalized(lat, al + be, z, a) for z in S.points])


def _chk_sum_by_parts(s: Sample, d: _Defect) -> None:
    lat, gam = s.lat, s.gamma
    f, g = s.data(), s.data()
    a = f.base
    df, dg = nabla_diff(lat, gam, 1, f), nabla_diff(lat, gam, 1, g)
    lhs = frac_sum_at(lat, gam, 1.0, GridFunction(df.base, g.values[1:] * df.values), a)
    inner = frac_sum_at(lat, gam, 1.0, GridFunction(dg.base, f.values[:-1] * dg.values), a)
    rhs = f.values * g.values - f.values[0] * g.values[0] - inner.values
    d.add(lhs.values, rhs, float(np.max(np.abs(inner.values))))


def _chk_semigroup(s: Sample, d: _Defect) -> None:
    f = s.data()
    lat, gam, al, be = s.lat, s.gamma, s.alpha, s.beta
    A = frac_sum_at(lat, gam, al, f)
    d.grids(frac_sum_at(lat, gam + al, be, A), frac_sum_at(lat, gam, al + be, f))


def _chk_left_inverse(s: Sample, d: _Defect) -> None:
    f = s.data()
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(s.alpha))
    d.grids(rl_diff_compose(cfg, frac_sum_at(s.lat, s.gamma, s.alpha, f)), f.restrict(f.base + 1.0))


def _chk_mixed(s: Sample, d: _Defect) -> None:
    f = s.data()
    lat, gam = s.lat, s.gamma
    for al, be in ((s.alpha, s.beta), (s.beta, s.alpha)):
        if abs(al - be) < 1e-3:
            be = al + 0.5
        inner = frac_sum_at(lat, gam + be - al, al, f)
        lhs = _rl_compose(lat, gam, be, inner)
        if be < al:
            rhs = frac_sum_at(lat, gam + be - al, al - be, f)
        else:
            rhs = _rl_compose(lat, gam, be - al, f)
        d.grids(lhs, rhs)


def _non_integer(x: float) -> float:
    return x if abs(x - round(x)) > 1e-3 else x + 0.1


def _chk_rl_forms(s: Sample, d: _Defect) -> None:
    f = s.data(n=min(s.n, 24))
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(_non_integer(s.alpha)))
    c = rl_diff_compose(cfg, f)
    d.grids(c, rl_diff_direct(cfg, f))
    d.grids(c, rl_diff_residue(cfg, f))


def _chk_nikiforov(s: Sample, d: _Defect) -> None:
    f = s.data(n=min(s.n, 20))
    k = int(s.rng.integers(1, 4))
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(float(k)))
    nd = nabla_diff_k(cfg, k, f)
    d.grids(nd, nikiforov_diff(s.lat, k, f, s.gamma))
    r = rl_diff_residue(cfg, f)
    d.grids(nd, r.restrict(f.base + k + 1.0))


def _chk_uniform(s: Sample, d: _Defect) -> None:
    f = s.data()
    ref = uniform_binomial_sum(s.alpha, f)
    got = frac_sum_at(s.lat, s.gamma, s.alpha, f, f.base - 1.0)
    d.grids(got, ref)


def _chk_taylor_integer(s: Sample, d: _Defect) -> None:
    f = s.data()
    k = int(s.rng.integers(1, 5))
    poly, rem = taylor_expand_integer(OperatorConfig(s.lat, s.gamma, FracOrder(float(k))), k, f)
    d.grids(GridFunction(rem.base, poly.values + rem.values), f, float(np.max(np.abs(poly.values))))


def _taylor_scale(f: GridFunction) -> float:
    return float(np.max(np.abs(f.values)))


def _abs_sum_scale(lat: LatticeSpec, gamma: float, alpha: float, g: GridFunction, a: float) -> float:
    """``max_z sum_t |kernel(z, t) g(t) nabla x(t)|``: the magnitude a sum of ``g`` cancels from."""
    absg = GridFunction(g.base, np.abs(g.values), g.anchor)
    return float(np.max(np.abs(frac_sum_at(lat, gamma, alpha, absg, a).values)))


def _chk_taylor_rl(s: Sample, d: _Defect) -> None:
    f = s.data()
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(s.alpha))
    scale = _taylor_scale(f)
    if not cfg.order.is_integer:
        rl = _rl_compose(s.lat, s.gamma, s.alpha, f, f.base)
        scale = max(scale, _abs_sum_scale(s.lat, s.gamma, s.alpha, rl, f.base))
    d.amplification("TaylorRL", scale, _taylor_scale(f))
    d.field(frac_taylor_defect(cfg, f, "rl"), scale)


def _chk_taylor_caputo(s: Sample, d: _Defect) -> None:
    f = s.data()
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(s.alpha))
    m = cfg.m
    poly, _ = taylor_expand_integer(cfg.replace(gamma=s.gamma + s.alpha - m), m, f)
    scale = max(_taylor_scale(f), float(np.max(np.abs(poly.values))))
    if not cfg.order.is_integer:
        cap = caputo_diff(cfg, f)
        scale = max(scale, _abs_sum_scale(s.lat, s.gamma, s.alpha, cap, cap.anchor))
    d.amplification("TaylorCaputo", scale, _taylor_scale(f))
    d.field(frac_taylor_defect(cfg, f, "caputo"), scale)


def _chk_caputo_rl(s: Sample, d: _Defect) -> None:
    f = s.data()
    lat, gam, al = s.lat, s.gamma, _non_integer(s.alpha)
    cfg = OperatorConfig(lat, gam, FracOrder(al))
    m = cfg.m
    _, rem = taylor_expand_integer(cfg.replace(gamma=gam + al - m), m, f)
    d.grids(caputo_diff(cfg, f), rl_diff_compose(cfg, rem))
    c = central_caputo_op(lat, al, f)
    R = central_sum(lat, float(m), central_diff(lat, m, f))
    d.grids(c, central_rl(lat, al, R))


def _chk_caputo_inverse(s: Sample, d: _Defect) -> None:
    f = s.data()
    cfg = OperatorConfig(s.lat, s.gamma, FracOrder(s.alpha))
    d.grids(caputo_diff(cfg, frac_sum_at(s.lat, s.gamma, s.alpha, f)), f.restrict(f.base + 1.0))


def _chk_central_semigroup(s: Sample, d: _Defect) -> None:
    f = s.data()
    d.grids(central_sum(s.lat, s.beta, central_sum(s.lat, s.alpha, f)), central_sum(s.lat, s.alpha + s.beta, f))


def _chk_central_inverse(s: Sample, d: _Defect) -> None:
    f = s.data()
    lat, al = s.lat, s.alpha
    g = central_sum(lat, al, f)
    d.grids(central_rl(lat, al, g), f)
    d.grids(central_caputo_op(lat, al, g), f)
    an = _non_integer(al)
    d.grids(central_rl_direct(lat, an, central_sum(lat, an, f)), f)


def _central_cfg(s: Sample, alpha: float | None = None) -> CentralConfig:
    return CentralConfig(s.lat, FracOrder(s.alpha if alpha is None else alpha), a=s.base - 0.5)


def _central_taylor_scale(s: Sample, f: GridFunction, k: int) -> float:
    scale = _taylor_scale(f)
    for j in range(k):
        g = central_diff(s.lat, j, f)
        scale = max(scale, float(np.max(np.abs(g.values))) * float(np.max(np.abs(s.lat.x(f.points) - s.lat.x(f.base)))) ** j)
    return scale


def _chk_ctaylor_integer(s: Sample, d: _Defect) -> None:
    f = s.data()
    k = int(s.rng.integers(1, 5))
    d.field(central_taylor_defect(_central_cfg(s), f, "integer", k=k), _central_taylor_scale(s, f, k))


def _central_abs_sum_scale(lat: LatticeSpec, alpha: float, g: GridFunction) -> float:
    absg = GridFunction(g.base, np.abs(g.values), g.anchor)
    return float(np.max(np.abs(central_sum(lat, alpha, absg).values)))


def _chk_ctaylor_rl(s: Sample, d: _Defect) -> None:
    f = s.data()
    scale = max(_taylor_scale(f), _central_abs_sum_scale(s.lat, s.alpha, central_rl(s.lat, s.alpha, f)))
    d.amplification("CentralTaylorRL", scale, _taylor_scale(f))
    d.field(central_taylor_defect(_central_cfg(s), f, "rl"), scale)


def _chk_ctaylor_caputo(s: Sample, d: _Defect) -> None:
    f = s.data()
    m = FracOrder(s.alpha).m
    d.field(central_taylor_defect(_central_cfg(s), f, "caputo"), _central_taylor_scale(s, f, m))


def _central_order(lat: LatticeSpec, order: float, f: GridFunction) -> GridFunction:
    """``delta^order f`` for either sign of ``order`` (identity with zero extension at 0)."""
    if abs(order) < 1e-12:
        return GridFunction(f.base, f.values, f.base - 1.0)
    return central_sum(lat, -order, f) if order < 0 else central_rl(lat, order, f)


def _chk_p5(s: Sample, d: _Defect) -> None:
    f = s.data()
    p, q = s.alpha, s.beta
    rhs = _central_order(s.lat, q - p, f)
    d.field(central_taylor_defect(_central_cfg(s), f, "p5", p=p, q=q), _taylor_scale(rhs))


def _chk_p6(s: Sample, d: _Defect) -> None:
    f = s.data()
    p, q = s.alpha, s.beta
    rhs = _central_order(s.lat, p + q, f)
    d.field(central_taylor_defect(_central_cfg(s), f, "p6", p=p, q=q), _taylor_scale(rhs))


def _seq_alpha(s: Sample) -> float:
    return min(1.0, 0.2 + (s.alpha - ALPHA_RANGE[0]) * 0.8 / (ALPHA_RANGE[1] - ALPHA_RANGE[0]))


def _chk_sequential(s: Sample, d: _Defect) -> None:
    f = s.data()
    k = int(s.rng.integers(1, 4))
    al = _seq_alpha(s)
    d.field(central_taylor_defect(_central_cfg(s, al), f, "sequential", k=k), _central_taylor_scale(s, f, k))


def _chk_exp_eigen(s: Sample, d: _Defect) -> None:
    lam = float(s.rng.uniform(-1.0, 1.0))
    cfg = CentralConfig(s.lat, FracOrder(_seq_alpha(s)), a=s.base - 0.5, series=SeriesSpec(lam=lam, tail_tol=1e-16))
    pts, res = eigen_residual(cfg, npoints=8)
    evals = np.array([frac_exp_value(cfg, z).value for z in pts])
    d.add(res, np.zeros_like(res), abs(lam) * float(np.max(np.abs(evals))))


def _chk_trig(s: Sample, d: _Defect) -> None:
    w = float(s.rng.uniform(0.1, 1.5))
    cfg = CentralConfig(s.lat, FracOrder(_seq_alpha(s)), a=s.base - 0.5, series=SeriesSpec(omega=w, tail_tol=1e-16))
    alpha = cfg.alpha
    for j in range(8):
        z = cfg.a + 0.5 + 0.5 * alpha * (j % 3) + j
        c, sn = frac_trig(cfg, z)
        ep = frac_exp_value(cfg, z, 1j * w).value
        em = frac_exp_value(cfg, z, -1j * w).value
        d.add(c * c + sn * sn, (ep * em).real, c * c, sn * sn, abs(ep) ** 2)
        d.add(c, ((ep + em) / 2).real, abs(ep))
        d.add(sn, ((ep - em) / 2j).real, abs(ep))


_Check = Callable[[Sample, _Defect], None]

CATALOG: dict[str, tuple[CatalogEntry, _Check, tuple[str, ...]]] = {}


def _register(id: str, statement: str, fn: _Check, families=("quadratic", "q_quadratic"), tol: float = DEFAULT_TOL) -> None:
    CATALOG[id] = (CatalogEntry(id, statement, tol), fn, tuple(families))


_register("ProductRule", "nabla_nu(fg) = f(s-1) nabla_nu g + g nabla_nu f (both orderings)", _chk_product)
_register("QuotientRule", "nabla_nu(f/g) = (g(s-1) nabla f - f(s-1) nabla g)/(g g(s-1)) (both forms)", _chk_quotient)
_register("FundamentalTheorem", "nabla_gamma of the running sum is f; running sum of nabla_gamma F is F(z)-F(a)", _chk_fundamental)
_register("PowerIdentities", "difference, shift and reciprocal rules of [x_nu(s)-x_nu(z)]^(mu); [Gamma(x+1)] = [x][Gamma(x)]", _chk_powers, tol=1e-9)
_register("LatticeConstLemma", "[a+b] x(t) - [a] x_{-b}(t) - [b] x_a(t) is independent of t", _chk_lattice_const, tol=1e-9)
_register("EulerBeta", "order-beta sum of [x(t)-x(a)]^(alpha)/[Gamma(alpha+1)] is [x_beta(z)-x_beta(a)]^(alpha+beta)/[Gamma(alpha+beta+1)]", _chk_euler_beta)
_register("CentralEulerBeta", "central order-beta sum of the central power of order alpha is the power of order alpha+beta", _chk_central_euler_beta)
_register("SumByParts", "sum g nabla f dx = fg|_a^z - sum f(s-1) nabla g dx", _chk_sum_by_parts)
_register("Semigroup", "nabla_{gamma+alpha}^{-beta} nabla_gamma^{-alpha} = nabla_gamma^{-(alpha+beta)}", _chk_semigroup)
_register("LeftInverse", "nabla_gamma^alpha nabla_gamma^{-alpha} f = f", _chk_left_inverse)
_register("MixedComposition", "nabla_gamma^beta nabla_{gamma+beta-alpha}^{-alpha} is a sum (beta<alpha) or an RL difference (beta>alpha)", _chk_mixed)
_register("RLFormsAgree", "compose, direct-kernel and residue forms of the RL difference coincide", _chk_rl_forms)
_register("NikiforovInteger", "integer order: nested differences = closed alternating formula = residue form", _chk_nikiforov)
_register("UniformBinomial", "on x(s)=s + c the sum equals the binomial-weight sum", _chk_uniform, families=("linear",))
_register("TaylorInteger", "f = integer Taylor polynomial + nabla^{-k} nabla^k f", _chk_taylor_integer)
_register("TaylorRL", "nabla^{-alpha} nabla^alpha f = f - RL correction terms", _chk_taylor_rl)
_register("TaylorCaputo", "nabla^{-alpha} C-nabla^alpha f = f - Caputo correction terms", _chk_taylor_caputo)
_register("CaputoRLRelation", "Caputo difference = RL difference of the integer Taylor remainder (backward and central)", _chk_caputo_rl)
_register("CaputoInverse", "C-nabla^alpha nabla^{-alpha} f = f", _chk_caputo_inverse)
_register("CentralSemigroup", "delta^{-beta} delta^{-alpha} = delta^{-(alpha+beta)}", _chk_central_semigroup)
_register("CentralInverse", "delta^alpha delta^{-alpha} f = C-delta^alpha delta^{-alpha} f = f (compose and direct)", _chk_central_inverse)
_register("CentralTaylorInteger", "delta^{-k} delta^k f = f - central Taylor polynomial", _chk_ctaylor_integer)
_register("CentralTaylorRL", "delta^{-alpha} delta^alpha f = f", _chk_ctaylor_rl)
_register("CentralTaylorCaputo", "delta^{-alpha} C-delta^alpha f = delta^{-m} delta^m f", _chk_ctaylor_caputo)
_register("MixedP5", "delta^{-p} delta^q f = delta^{q-p} f", _chk_p5)
_register("MixedP6", "delta^p delta^q f = delta^{p+q} f", _chk_p6)
_register("SequentialTaylor", "delta^{-k alpha} S-delta^{k alpha} f = f - sequential Taylor terms", _chk_sequential)
_register("ExpEigen", "C-delta^alpha e(alpha, lam, .) = lam e(alpha, lam, .)", _chk_exp_eigen)
_register("TrigPythagoras", "cos^2 + sin^2 = e(i w) e(-i w), with the Euler relations", _chk_trig)

CHECK_IDS: tuple[str, ...] = tuple(CATALOG)


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------
def _rng_for(check: IdentityCheck) -> np.random.Generator:
    idx = CHECK_IDS.index(check.id)
    return np.random.default_rng([int(check.seed), idx, int(check.trial)])


def run_check(check: IdentityCheck) -> CheckReport:
    """Evaluate one catalog identity on every family it applies to."""
    if check.id not in CATALOG:
        raise ConfigError(f"unknown identity id {check.id!r}")
    entry, fn, families = CATALOG[check.id]
    rng = _rng_for(check)
    t0 = time.perf_counter()
    defect = _Defect()
    warns: list = []
    params: dict = {"seed": int(check.seed), "trial": int(check.trial)}
    for fam in families:
        sample = _sample(rng, fam)
        if check.params:
            for key, val in check.params.items():
                if key == "lattice":
                    val = val if isinstance(val, LatticeSpec) else LatticeSpec.from_dict(val)
                    sample.lat = val
                elif hasattr(sample, key):
                    setattr(sample, key, val)
                else:
                    raise ConfigError(f"unknown parameter {key!r} for {check.id}")
        warns.extend(sample.warnings)
        params[fam] = sample.echo()
        defect.warnings = []
        try:
            fn(sample, defect)
            warns.extend(f"{fam}: {w}" for w in defect.warnings)
        except (NulfracError, ArithmeticError, ValueError) as exc:
            warns.append(f"{fam}: {type(exc).__name__}: {exc}")
            defect.value = math.inf
    elapsed = time.perf_counter() - t0
    val = defect.value
    return CheckReport(
        id=check.id,
        params=params,
        max_rel_defect=val,
        tolerance=entry.tolerance,
        passed=bool(val <= entry.tolerance),
        conditioning_warnings=warns,
        elapsed=elapsed,
    )


def run_suite(seed: int = 0, trials_per_id: int = 1, *, mutation: KernelMutation | None = None, ids: Iterable[str] | None = None) -> list[CheckReport]:
    """Run the catalog ``trials_per_id`` times; reports are ordered by id, then trial."""
    if int(trials_per_id) < 1:
        raise ConfigError("trials_per_id must be at least 1")
    selected = CHECK_IDS if ids is None else tuple(ids)
    reports = []
    with mutated_kernel(mutation):
        for cid in selected:
            for t in range(int(trials_per_id)):
                reports.append(run_check(IdentityCheck(cid, seed, t)))
    return reports


# ---------------------------------------------------------------------------
# JSON output with round-trip exact floats
# ---------------------------------------------------------------------------
def _fmt(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if all(ch not in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_fmt(str(k), indent, level + 1)}: {_fmt(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _fmt(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    """JSON text with floats printed to 17 significant digits."""
    return _fmt(obj, indent, 0) + "\n"


def reports_to_json(reports: list[CheckReport], include_timing: bool = False) -> str:
    if not reports:
        raise IoError("refusing to write an empty report list")
    return dumps_json([r.to_dict(include_timing) for r in reports])


def write_report_json(reports: list[CheckReport], path, include_timing: bool = False) -> None:
    text = reports_to_json(reports, include_timing)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


__all__ = [
    "CATALOG",
    "CHECK_IDS",
    "CatalogEntry",
    "IdentityCheck",
    "CheckReport",
    "run_check",
    "run_suite",
    "dumps_json",
    "reports_to_json",
    "write_report_json",
]
