import numpy as np
import pytest

import oracles
from nulfrac import (
    AbelVariant,
    FamilyError,
    FracOrder,
    GridFunction,
    IntegerOrderError,
    LatticeSpec,
    OperatorConfig,
    SizeError,
    abel_solve,
    caputo_diff,
    frac_sum,
    frac_taylor_defect,
    nabla_diff_k,
    nikiforov_diff,
    rl_diff_compose,
    rl_diff_direct,
    rl_diff_residue,
    taylor_expand_integer,
    uniform_binomial_sum,
)
from nulfrac.lattice import gen_power, gen_power_normalized, inv_modified_gamma, step_x
from nulfrac.operators import binomial_weights, frac_sum_at
from support import LIN, QQUAD, QUAD, grid_defect, rel_defect


def cfg(lat, alpha, gamma=0.3):
    return OperatorConfig(lat, gamma, FracOrder(alpha))


def random_grid(rng, n=12, base=3.0):
    return GridFunction(base, rng.uniform(-1.0, 1.0, n))


# -- integer differences ------------------------------------------------------
def test_nabla_diff_k_examples():
    unit = LatticeSpec.quadratic(1.0, 0.0, 0.0)
    f = GridFunction(0.0, [0.0, 1.0, 4.0, 9.0])
    c = OperatorConfig(unit, 0.0, FracOrder(1.0))
    assert nabla_diff_k(c, 0, f) is f
    d = nabla_diff_k(c, 1, f)
    assert d.base == 1.0
    np.testing.assert_allclose(d.values, [1.0, 1.0, 1.0])


def test_nabla_diff_k_grid_bookkeeping(lattice, rng):
    f = random_grid(rng)
    d = nabla_diff_k(cfg(lattice, 1.0), 3, f)
    assert d.base == f.base + 3 and d.count == f.count - 3


# -- fractional sum ---------------------------------------------------------
def test_frac_sum_alpha_one_is_running_sum(lattice, rng):
    f = random_grid(rng)
    got = frac_sum(cfg(lattice, 1.0), f)
    dx = np.array([step_x(lattice, 0.3, t) for t in f.points])
    ref = np.concatenate([[0.0], np.cumsum(f.values[1:] * dx[1:])])
    np.testing.assert_allclose(got.values, ref, rtol=1e-13, atol=1e-13)
    assert got.values[0] == 0.0 and got.anchor == f.base


@pytest.mark.parametrize("alpha", [0.4, 1.3, 2.5])
def test_frac_sum_of_one(lattice, alpha):
    f = GridFunction(2.0, np.ones(10))
    got = frac_sum(cfg(lattice, alpha), f)
    ref = [gen_power_normalized(lattice, 0.3 + alpha - 1.0, z, 2.0, alpha) for z in got.points[1:]]
    assert rel_defect(got.values[1:], ref) < 1e-12


@pytest.mark.parametrize("alpha", [0.35, 1.0, 1.8, 2.6])
def test_frac_sum_against_brute_force_oracle(lattice, alpha, rng):
    f = random_grid(rng, n=10)
    got = frac_sum(cfg(lattice, alpha), f)
    ref = [oracles.frac_sum(lattice, 0.3, alpha, f.base, f.values[1:], z) for z in got.points]
    assert oracles.rel_err(got.values, ref) < 1e-11


def test_frac_sum_anchor_one_left_of_base(rng):
    f = random_grid(rng)
    got = frac_sum_at(QUAD, 0.3, 0.5, f, f.base - 1.0)
    assert got.base == f.base - 1.0 and got.count == f.count + 1
    with pytest.raises(SizeError):
        frac_sum_at(QUAD, 0.3, 0.5, f, f.base - 3.0)


# -- Riemann-Liouville differences -------------------------------------------
@pytest.mark.parametrize("n", [1, 2, 3])
def test_rl_compose_integer_matches_nested(lattice, n, rng):
    """Integer order is the nested difference of the zero-extended data.

    The data value at the anchor is never used (the inner sum is zero there),
    so the two agree from ``a + n + 1`` on, and everywhere once ``f(a) = 0``.
    """
    f = random_grid(rng)
    c = cfg(lattice, float(n))
    got = rl_diff_compose(c, f)
    ref = nabla_diff_k(c, n, f)
    assert grid_defect(got.restrict(f.base + n + 1), ref) < 1e-12
    f0 = GridFunction(f.base, np.concatenate([[0.0], f.values[1:]]))
    assert grid_defect(rl_diff_compose(c, f0), nabla_diff_k(c, n, f0)) < 1e-12


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.7, 2.2])
def test_rl_left_inverse(lattice, alpha, rng):
    f = random_grid(rng)
    c = cfg(lattice, alpha)
    back = rl_diff_compose(c, frac_sum(c, f))
    assert grid_defect(back, f.restrict(f.base + 1)) < 1e-9


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.5, 2.4])
def test_three_forms_agree(lattice, alpha, rng):
    f = random_grid(rng, n=15)
    c = cfg(lattice, alpha)
    comp = rl_diff_compose(c, f)
    assert grid_defect(comp, rl_diff_direct(c, f)) < 1e-9
    assert grid_defect(comp, rl_diff_residue(c, f)) < 1e-9


def test_rl_direct_single_point(lattice, rng):
    f = random_grid(rng, n=2)
    alpha, gam = 0.6, 0.3
    got = rl_diff_direct(cfg(lattice, alpha, gam), f)
    a = f.base
    ref = (
        f.values[1]
        * step_x(lattice, gam + alpha, a + 1)
        * gen_power(lattice, gam - 1, a + 1, a, -alpha - 1)
        * inv_modified_gamma(lattice, -alpha)
    )
    assert got.values[0] == pytest.approx(ref, rel=1e-13)


def test_rl_direct_rejects_integer_order():
    with pytest.raises(IntegerOrderError):
        rl_diff_direct(cfg(QUAD, 2.0), GridFunction(0.0, np.ones(4)))


def test_residue_needs_nonuniform_family():
    with pytest.raises(FamilyError):
        rl_diff_residue(cfg(LIN, 0.5), GridFunction(0.0, np.ones(4)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_integer_residue_and_nikiforov(lattice, n, rng):
    f = random_grid(rng)
    c = cfg(lattice, float(n))
    nested = nabla_diff_k(c, n, f)
    assert grid_defect(nested, nikiforov_diff(lattice, n, f, 0.3)) < 1e-10
    assert grid_defect(nested, rl_diff_residue(c, f).restrict(f.base + n + 1)) < 1e-10


# -- Caputo, Taylor, Abel -------------------------------------------------------
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.3])
def test_caputo_kills_constants(lattice, alpha):
    out = caputo_diff(cfg(lattice, alpha), GridFunction(1.0, np.full(10, 3.7)))
    assert np.max(np.abs(out.values)) < 1e-12


@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.3])
def test_caputo_left_inverse(lattice, alpha, rng):
    f = random_grid(rng)
    c = cfg(lattice, alpha)
    assert grid_defect(caputo_diff(c, frac_sum(c, f)), f.restrict(f.base + 1)) < 1e-9


@pytest.mark.parametrize("alpha", [0.4, 1.6])
def test_caputo_equals_rl_of_taylor_remainder(lattice, alpha, rng):
    f = random_grid(rng)
    c = cfg(lattice, alpha)
    m = c.m
    _, rem = taylor_expand_integer(c.replace(gamma=c.gamma + alpha - m), m, f)
    assert grid_defect(caputo_diff(c, f), rl_diff_compose(c, rem)) < 1e-9


def test_taylor_depth_one_remainder(lattice, rng):
    f = random_grid(rng)
    poly, rem = taylor_expand_integer(cfg(lattice, 1.0), 1, f)
    np.testing.assert_allclose(rem.values, f.values - f.values[0], atol=1e-13)
    np.testing.assert_allclose(poly.values, f.values[0])


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_taylor_poly_plus_remainder(lattice, k, rng):
    f = random_grid(rng)
    poly, rem = taylor_expand_integer(cfg(lattice, float(k)), k, f)
    assert rel_defect(poly.values + rem.values, f.extended(rem.base)) < 1e-10


@pytest.mark.parametrize("k,j", [(3, 0), (3, 1), (3, 2), (4, 3)])
def test_taylor_reproduces_low_powers(lattice, k, j):
    """A generalized power of degree j < k is its own Taylor polynomial."""
    gam = 0.3
    base = 2.0
    a = base + k - 1
    nu = gam + k - 1
    pts = base + np.arange(10, dtype=float)
    f = GridFunction(base, [gen_power(lattice, nu, s, a, j) for s in pts])
    _, rem = taylor_expand_integer(cfg(lattice, float(k), gam), k, f)
    assert np.max(np.abs(rem.values)) < 1e-9 * np.max(np.abs(f.values))


@pytest.mark.parametrize("kind", ["rl", "caputo"])
@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0, 2.3])
def test_frac_taylor_defect_small(kind, alpha, rng):
    f = random_grid(rng)
    d = frac_taylor_defect(cfg(QUAD, alpha), f, kind)
    assert np.max(np.abs(d.values)) <= 1e-8 * np.max(np.abs(f.values))


def test_abel_alpha_one_is_difference(lattice, rng):
    f = random_grid(rng)
    c = cfg(lattice, 1.0)
    g = abel_solve(c, f)
    assert g.anchor == f.base
    assert grid_defect(g.restrict(f.base + 2), nabla_diff_k(c, 1, f)) < 1e-13


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_abel_round_trip_and_variants(lattice, alpha, rng):
    f = random_grid(rng, n=15)
    c = cfg(lattice, alpha)
    g1 = abel_solve(c, f, AbelVariant.COMPOSE)
    g2 = abel_solve(c, f, "initial_data")
    assert grid_defect(g1, g2) < 1e-9
    back = frac_sum(c, g1)
    assert grid_defect(back, f.restrict(g1.anchor + 1)) < 1e-9


# -- uniform lattice -----------------------------------------------------------
def test_binomial_weights():
    np.testing.assert_allclose(binomial_weights(1.0, 5), np.ones(5))
    w = binomial_weights(0.5, 4)
    np.testing.assert_allclose(w, [1.0, 0.5, 0.375, 0.3125])


def test_uniform_alpha_one_is_cumsum(rng):
    f = random_grid(rng)
    np.testing.assert_allclose(uniform_binomial_sum(1.0, f).values, np.cumsum(f.values), rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_uniform_oracle_matches_frac_sum(alpha, rng):
    f = random_grid(rng, n=20)
    ref = uniform_binomial_sum(alpha, f)
    for gam in (0.0, 0.7):
        got = frac_sum_at(LatticeSpec.linear(1.0, 0.3), gam, alpha, f, f.base - 1.0)
        assert grid_defect(got, ref) < 1e-12
