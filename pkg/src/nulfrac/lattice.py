"""Lattices, q-brackets, (q-)Gamma functions and generalized powers.

This is the scalar layer that every operator in the package is built on.

Four lattice families are supported:

* ``QUADRATIC``   -- ``x(s) = c1 s**2 + c2 s + c3`` (``c1 != 0``),
* ``Q_QUADRATIC`` -- ``x(s) = c1 q**s + c2 q**(-s) + c3`` (``c2/c1 > 0``),
* ``LINEAR``      -- ``x(s) = c2 s + c3`` (``c1 == 0``),
* ``Q_LINEAR``    -- ``x(s) = c1 q**s + c3`` (``c2 == 0``).

The shifted lattice is ``x_gamma(s) = x(s + gamma/2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DivergenceError, DomainError, PoleError

#: Relative size of the last factor kept in a truncated infinite product.
PRODUCT_TOL = 1e-17
#: Hard cap on the number of factors of a truncated infinite product.
MAX_PRODUCT_TERMS = 2_000_000
#: Distance below which a real number is treated as an integer.
INT_TOL = 1e-9


class Family(enum.Enum):
    LINEAR = "linear"
    Q_LINEAR = "q_linear"
    QUADRATIC = "quadratic"
    Q_QUADRATIC = "q_quadratic"

    @property
    def is_q(self) -> bool:
        return self in (Family.Q_LINEAR, Family.Q_QUADRATIC)


@dataclass(frozen=True)
class LatticeSpec:
    """A lattice family together with its coefficients.

    ``c`` is derived: ``c2/c1`` for the quadratic family, ``log(c2/c1)/log q``
    for the q-quadratic family and ``0`` otherwise.  ``q`` is ignored (and
    stored as ``None``) for the non-q families.
    """

    family: Family
    c1: float = 1.0
    c2: float = 0.0
    c3: float = 0.0
    q: float | None = None
    c: float = field(init=False)

    def __post_init__(self) -> None:
        fam = self.family
        if isinstance(fam, str):
            try:
                fam = Family(fam)
            except ValueError:
                raise ConfigError(f"unknown lattice family {fam!r}") from None
            object.__setattr__(self, "family", fam)
        for name in ("c1", "c2", "c3"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ConfigError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if fam.is_q:
            if self.q is None:
                raise ConfigError("q-families need a q parameter")
            q = float(self.q)
            if not (math.isfinite(q) and q > 0.0) or q == 1.0:
                raise ConfigError(f"q must be positive and different from 1, got {q}")
            object.__setattr__(self, "q", q)
        else:
            object.__setattr__(self, "q", None)

        if fam is Family.QUADRATIC:
            if self.c1 == 0.0:
                raise ConfigError("quadratic lattice needs c1 != 0")
            c = self.c2 / self.c1
        elif fam is Family.Q_QUADRATIC:
            if self.c1 == 0.0 or self.c2 == 0.0:
                raise ConfigError("q-quadratic lattice needs c1*c2 != 0")
            if self.c2 / self.c1 <= 0.0:
                raise ConfigError("q-quadratic lattice needs c2/c1 > 0 (real c)")
            c = math.log(self.c2 / self.c1) / math.log(self.q)
        elif fam is Family.LINEAR:
            if self.c1 != 0.0:
                raise ConfigError("linear lattice is x(s) = c2*s + c3; c1 must be 0")
            if self.c2 == 0.0:
                raise ConfigError("linear lattice needs c2 != 0")
            c = 0.0
        else:
            if self.c2 != 0.0:
                raise ConfigError("q-linear lattice is x(s) = c1*q**s + c3; c2 must be 0")
            if self.c1 == 0.0:
                raise ConfigError("q-linear lattice needs c1 != 0")
            c = 0.0
        object.__setattr__(self, "c", c)

    # -- convenience constructors -------------------------------------------
    @classmethod
    def quadratic(cls, c1: float = 1.0, c2: float = 0.0, c3: float = 0.0) -> "LatticeSpec":
        return cls(Family.QUADRATIC, c1, c2, c3)

    @classmethod
    def q_quadratic(cls, q: float, c1: float = 0.5, c2: float = 0.5, c3: float = 0.0) -> "LatticeSpec":
        return cls(Family.Q_QUADRATIC, c1, c2, c3, q)

    @classmethod
    def linear(cls, slope: float = 1.0, offset: float = 0.0) -> "LatticeSpec":
        return cls(Family.LINEAR, 0.0, slope, offset)

    @classmethod
    def q_linear(cls, q: float, c1: float = 1.0, c3: float = 0.0) -> "LatticeSpec":
        return cls(Family.Q_LINEAR, c1, 0.0, c3, q)

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        out = {"family": self.family.value}
        if self.family.is_q:
            out["q"] = self.q
        out.update(c1=self.c1, c2=self.c2, c3=self.c3)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeSpec":
        if not isinstance(data, dict) or "family" not in data:
            raise ConfigError("lattice must be an object with a 'family' key")
        unknown = set(data) - {"family", "q", "c1", "c2", "c3"}
        if unknown:
            raise ConfigError(f"unknown lattice keys: {sorted(unknown)}")
        fam = data["family"]
        defaults = {
            "quadratic": (1.0, 0.0, 0.0),
            "q_quadratic": (0.5, 0.5, 0.0),
            "linear": (0.0, 1.0, 0.0),
            "q_linear": (1.0, 0.0, 0.0),
        }
        if fam not in defaults:
            raise ConfigError(f"unknown lattice family {fam!r}")
        d1, d2, d3 = defaults[fam]
        try:
            return cls(
                Family(fam),
                float(data.get("c1", d1)),
                float(data.get("c2", d2)),
                float(data.get("c3", d3)),
                None if data.get("q") is None else float(data["q"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad lattice parameter: {exc}") from None

    # -- evaluation ---------------------------------------------------------
    def x(self, s):
        """Evaluate ``x(s)`` (scalar or array)."""
        fam = self.family
        if fam is Family.QUADRATIC:
            return (self.c1 * s + self.c2) * s + self.c3
        if fam is Family.LINEAR:
            return self.c2 * s + self.c3
        qs = np.power(self.q, s) if isinstance(s, np.ndarray) else self.q ** s
        if fam is Family.Q_QUADRATIC:
            return self.c1 * qs + self.c2 / qs + self.c3
        return self.c1 * qs + self.c3


@dataclass(frozen=True)
class FracOrder:
    """A fractional order ``alpha`` with ``m - 1 < alpha <= m``."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not math.isfinite(a):
            raise ConfigError("order must be finite")
        k = as_integer(a)
        object.__setattr__(self, "alpha", float(k) if k is not None else a)

    @property
    def m(self) -> int:
        k = as_integer(self.alpha)
        return k if k is not None else math.ceil(self.alpha)

    @property
    def is_integer(self) -> bool:
        return as_integer(self.alpha) is not None


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------
def as_integer(x: float, tol: float = INT_TOL) -> int | None:
    """Return ``round(x)`` if ``x`` is within ``tol`` of an integer, else ``None``."""
    r = round(x)
    return int(r) if abs(x - r) <= tol else None


def x_shifted(lat: LatticeSpec, gamma: float, s):
    """``x_gamma(s) = x(s + gamma/2)``."""
    return lat.x(s + 0.5 * gamma)


def step_x(lat: LatticeSpec, gamma: float, s, direction: str = "backward"):
    """Backward ``x_g(s) - x_g(s-1)`` or forward ``x_g(s+1) - x_g(s)`` step."""
    d = direction.lower()
    if d == "backward":
        return x_shifted(lat, gamma, s) - x_shifted(lat, gamma, s - 1)
    if d == "forward":
        return x_shifted(lat, gamma, s + 1) - x_shifted(lat, gamma, s)
    raise ValueError(f"direction must be 'backward' or 'forward', not {direction!r}")


def bracket(lat: LatticeSpec, mu: float) -> float:
    """Symmetric bracket ``[mu]_q``; plain ``mu`` on the non-q families."""
    if not lat.family.is_q:
        return float(mu)
    q = lat.q
    return (q ** (0.5 * mu) - q ** (-0.5 * mu)) / (q ** 0.5 - q ** -0.5)


def bracket_factorial(lat: LatticeSpec, n: int) -> float:
    """``[n]_q! = [1]_q [2]_q ... [n]_q``."""
    out = 1.0
    for j in range(1, n + 1):
        out *= bracket(lat, j)
    return out


# ---------------------------------------------------------------------------
# Gamma functions in (sign, log|value|) form
# ---------------------------------------------------------------------------
def _is_pole(x: float) -> bool:
    k = as_integer(x)
    return k is not None and k <= 0


def _log_gamma(x: float) -> tuple[float, float]:
    """Sign and log-modulus of Euler's Gamma at a non-pole ``x``."""
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return 1.0, math.lgamma(x)
    # For -n-1 < x < -n, sign(Gamma(x)) = (-1)**(n+1).
    sign = -1.0 if math.floor(x) % 2 else 1.0
    return sign, math.lgamma(x)


@lru_cache(maxsize=8)
def _log_q_poch_inf(q: float) -> float:
    """``log (q; q)_inf`` for ``0 < q < 1``."""
    n = _n_terms(q, 1.0)
    k = np.arange(n, dtype=float)
    return float(np.sum(np.log1p(-(q ** (k + 1.0)))))


def _n_terms(q: float, x: float) -> int:
    """Number of factors ``k = 0..n-1`` needed for ``q**(x+k)`` to drop below tolerance."""
    lead = max(x, 0.0)
    n = int(math.ceil(math.log(PRODUCT_TOL) / math.log(q) - lead)) + 2
    n = max(n, 2)
    if n > MAX_PRODUCT_TERMS:
        raise DivergenceError(f"q-product with q={q} needs {n} factors")
    return n


@lru_cache(maxsize=65536)
def _log_q_gamma_small(q: float, x: float) -> tuple[float, float]:
    """Sign and log-modulus of ``Gamma_q(x)`` for ``0 < q < 1``."""
    n = _n_terms(q, x)
    y = x + np.arange(n, dtype=float)
    logq = math.log(q)
    neg = y < 0
    # log|1 - q**y| computed stably on both sides of y = 0.
    terms = np.empty(n)
    terms[~neg] = np.log1p(-np.exp(y[~neg] * logq))
    yn = y[neg]
    terms[neg] = yn * logq + np.log1p(-np.exp(-yn * logq))
    sign = -1.0 if int(np.count_nonzero(neg)) % 2 else 1.0
    log_abs = (1.0 - x) * math.log1p(-q) + _log_q_poch_inf(q) - float(np.sum(terms))
    return sign, log_abs


def _log_q_gamma(q: float, x: float) -> tuple[float, float]:
    if _is_pole(x):
        raise PoleError(f"q-Gamma has a pole at {x}")
    if q < 1.0:
        return _log_q_gamma_small(q, x)
    sign, log_abs = _log_q_gamma_small(1.0 / q, x)
    return sign, log_abs + 0.5 * (x - 1.0) * (x - 2.0) * math.log(q)


def q_gamma(q: float, x: float) -> float:
    """The q-Gamma function ``Gamma_q(x)``.

    For ``0 < q < 1`` this is ``(1-q)**(1-x) * prod_k (1-q**(k+1)) / (1-q**(x+k))``;
    for ``q > 1`` it is ``q**((x-1)(x-2)/2) * Gamma_{1/q}(x)``.  Both satisfy
    ``Gamma_q(x+1) = (1-q**x)/(1-q) * Gamma_q(x)``.
    """
    q = float(q)
    if not q > 0.0 or q == 1.0:
        raise DomainError(f"q must be positive and != 1, got {q}")
    sign, log_abs = _log_q_gamma(q, float(x))
    return sign * math.exp(log_abs)


def _log_modified_gamma(lat: LatticeSpec, x: float) -> tuple[float, float]:
    if lat.family.is_q:
        sign, log_abs = _log_q_gamma(lat.q, x)
        return sign, log_abs - 0.25 * (x - 1.0) * (x - 2.0) * math.log(lat.q)
    return _log_gamma(x)


def modified_gamma(lat: LatticeSpec, x: float) -> float:
    """``[Gamma(x)]_q = q**(-(x-1)(x-2)/4) Gamma_q(x)``; Euler Gamma off the q-families.

    It satisfies ``[Gamma(x+1)]_q = [x]_q [Gamma(x)]_q`` with the symmetric bracket.
    """
    sign, log_abs = _log_modified_gamma(lat, float(x))
    return sign * math.exp(log_abs)


def inv_modified_gamma(lat: LatticeSpec, x: float) -> float:
    """``1/[Gamma(x)]_q``, equal to ``0`` at the poles."""
    if _is_pole(x):
        return 0.0
    sign, log_abs = _log_modified_gamma(lat, float(x))
    return sign * math.exp(-log_abs)


def _gamma_ratio(num: float, den: float, q: float | None) -> float:
    """``Gamma(num)/Gamma(den)`` (``Gamma_q`` when ``q`` is given), as a limit.

    When ``num - den`` is an integer the ratio is a finite product, which also
    resolves the case where both arguments sit on poles.  Otherwise a pole in
    the denominator gives ``0`` and a pole in the numerator is an error.
    """
    diff = as_integer(num - den)
    if diff is not None:
        if diff >= 0:
            factors = [den + j for j in range(diff)]
            out = 1.0
            for u in factors:
                out *= _rising_factor(u, q)
            return out
        out = 1.0
        for j in range(-diff):
            f = _rising_factor(num + j, q)
            if f == 0.0:
                raise PoleError(f"Gamma ratio {num}/{den} is infinite")
            out *= f
        return 1.0 / out
    if _is_pole(num):
        raise PoleError(f"Gamma ratio with numerator pole at {num}")
    if _is_pole(den):
        return 0.0
    if q is None:
        sn, ln = _log_gamma(num)
        sd, ld = _log_gamma(den)
    else:
        sn, ln = _log_q_gamma(q, num)
        sd, ld = _log_q_gamma(q, den)
    return sn * sd * math.exp(ln - ld)


def _rising_factor(u: float, q: float | None) -> float:
    """``Gamma(u+1)/Gamma(u)``: ``u`` or ``(1-q**u)/(1-q)``; exact zero at ``u = 0``."""
    k = as_integer(u)
    if k == 0:
        return 0.0
    if q is None:
        return u
    return (1.0 - q ** u) / (1.0 - q)


def gamma_ratio(lat: LatticeSpec, num: float, den: float) -> float:
    """``Gamma(num)/Gamma(den)`` using ``Gamma_q`` on q-families."""
    return _gamma_ratio(float(num), float(den), lat.q if lat.family.is_q else None)


def modified_gamma_ratio(lat: LatticeSpec, num: float, den: float) -> float:
    """``[Gamma(num)]_q / [Gamma(den)]_q`` with the same pole handling as :func:`gamma_ratio`."""
    r = gamma_ratio(lat, num, den)
    if lat.family.is_q and r != 0.0:
        e = -0.25 * ((num - 1.0) * (num - 2.0) - (den - 1.0) * (den - 2.0))
        r *= lat.q ** e
    return r


# ---------------------------------------------------------------------------
# generalized powers
# ---------------------------------------------------------------------------
def real_power(base: float, alpha: float) -> float:
    if base > 0.0:
        return base ** alpha
    k = as_integer(alpha)
    if k is not None:
        return base ** k
    raise DomainError(f"negative base {base} with non-integer exponent {alpha}")


def gen_power(
    lat: LatticeSpec,
    nu: float,
    s: float,
    z: float,
    alpha: float,
    *,
    continuation: bool = False,
) -> float:
    """Generalized power ``[x_nu(s) - x_nu(z)]^(alpha)``.

    For a non-negative integer ``alpha`` this is the product
    ``prod_{k=0}^{alpha-1} (x_nu(s) - x_nu(z-k))`` for arbitrary real ``s, z``.
    For any other real ``alpha`` the (q-)Gamma-ratio form is used, which
    requires ``s - z`` to be a positive integer unless ``continuation`` is
    set, in which case any ``s - z`` avoiding numerator poles is accepted.
    """
    alpha = float(alpha)
    k = as_integer(alpha)
    if k is not None and k >= 0:
        out = 1.0
        xs = x_shifted(lat, nu, s)
        for j in range(k):
            out *= xs - x_shifted(lat, nu, z - j)
        return out

    u = s - z
    ui = as_integer(u)
    if not continuation and (ui is None or ui < 1):
        raise DomainError(
            f"generalized power with non-integer exponent {alpha} needs s-z a positive integer, got {u}"
        )
    if ui is not None:
        u = float(ui)
    fam = lat.family
    if fam is Family.QUADRATIC:
        w = s + z + nu + lat.c + 1.0
        r = _gamma_ratio(u + alpha, u, None)
        if r != 0.0:
            r *= _gamma_ratio(w, w - alpha, None)
        return real_power(lat.c1, alpha) * r
    if fam is Family.LINEAR:
        return real_power(lat.c2, alpha) * _gamma_ratio(u + alpha, u, None)
    q = lat.q
    if fam is Family.Q_QUADRATIC:
        w = s + z + nu - lat.c + 1.0
        r = _gamma_ratio(u + alpha, u, q)
        if r != 0.0:
            r *= _gamma_ratio(w, w - alpha, q)
        base = lat.c2 * (1.0 - q) ** 2
        return real_power(base, alpha) * q ** (-alpha * (s + 0.5 * nu)) * r
    # q-linear: x_nu(s) - x_nu(z-j) = c1 q^{s+nu/2} (1 - p^{u+j}),  p = 1/q
    p = 1.0 / q
    r = _gamma_ratio(u + alpha, u, p)
    base = lat.c1 * (1.0 - p)
    return real_power(base, alpha) * q ** (alpha * (s + 0.5 * nu)) * r


def gen_power_normalized(lat: LatticeSpec, nu: float, s: float, z: float, beta: float) -> float:
    """``[x_nu(s) - x_nu(z)]^(beta) / [Gamma(beta+1)]_q``.

    Evaluated with ``Gamma(u+beta)/Gamma(beta+1)`` (``u = s - z``) merged into a
    finite product, so the value stays finite -- and correct as a limit --
    when ``beta`` is a negative integer.  Requires ``s - z`` to be a positive
    integer unless ``beta`` is a non-negative integer.
    """
    beta = float(beta)
    k = as_integer(beta)
    if k is not None and k >= 0:
        return gen_power(lat, nu, s, z, k) / bracket_factorial(lat, k)
    ui = as_integer(s - z)
    if ui is None or ui < 1:
        raise DomainError(f"normalized power needs s-z a positive integer, got {s - z}")
    fam = lat.family
    q = lat.q if fam.is_q else None
    # Gamma(u+beta)/(Gamma(beta+1) Gamma(u)) as a product of u-1 factors over (u-1)!
    r = 1.0
    for j in range(ui - 1):
        r *= _rising_factor(beta + 1.0 + j, q) / _rising_factor(1.0 + j, q)
    if r == 0.0:
        return 0.0
    if fam is Family.QUADRATIC:
        w = s + z + nu + lat.c + 1.0
        return real_power(lat.c1, beta) * r * _gamma_ratio(w, w - beta, None)
    if fam is Family.LINEAR:
        return real_power(lat.c2, beta) * r
    qmod = q ** (0.25 * beta * (beta - 1.0))
    if fam is Family.Q_QUADRATIC:
        w = s + z + nu - lat.c + 1.0
        base = lat.c2 * (1.0 - q) ** 2
        return real_power(base, beta) * q ** (-beta * (s + 0.5 * nu)) * r * _gamma_ratio(w, w - beta, q) * qmod
    p = 1.0 / q
    # q-linear: Gamma_p ratios; convert the modified-Gamma normalisation from q to p
    rp = 1.0
    for j in range(ui - 1):
        rp *= _rising_factor(beta + 1.0 + j, p) / _rising_factor(1.0 + j, p)
    # 1/[Gamma(beta+1)]_q = q^{beta(beta-1)/4} / Gamma_q(beta+1),
    # Gamma_q(beta+1) = q^{beta(beta-1)/2} Gamma_p(beta+1)
    base = lat.c1 * (1.0 - p)
    return real_power(base, beta) * q ** (beta * (s + 0.5 * nu)) * rp * q ** (-0.25 * beta * (beta - 1.0))


__all__ = [
    "Family",
    "LatticeSpec",
    "FracOrder",
    "as_integer",
    "x_shifted",
    "step_x",
    "bracket",
    "bracket_factorial",
    "q_gamma",
    "modified_gamma",
    "inv_modified_gamma",
    "gamma_ratio",
    "modified_gamma_ratio",
    "gen_power",
    "gen_power_normalized",
    "real_power",
]
