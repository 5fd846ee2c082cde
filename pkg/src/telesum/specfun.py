r"""Special functions used by the telegraph formulas.

Modified Bessel functions :math:`I_0, I_1` (plain and exponentially scaled),
Pochhammer symbols, double factorials and the *terminating* hypergeometric
sums

.. math::
    F(-k, b; c; z) = \sum_{s=0}^{k} \frac{(-k)_s (b)_s}{(c)_s} \frac{z^s}{s!}

and the matching :math:`{}_3F_2`.  Only the terminating case is supported.
The two Gauss patterns and the one :math:`{}_3F_2` pattern that appear in
the distribution functions are evaluated from exact polynomial integrals,
which avoids the cancellation of their alternating coefficients.

All functions accept scalars or numpy arrays and return the same shape
(a Python float for scalar input).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, TruncationError

__all__ = [
    "poly_moments",
    "SeriesControl",
    "bessel_i0",
    "bessel_i1",
    "bessel_i0_scaled",
    "bessel_i1_scaled",
    "bessel_i1_ratio_scaled",
    "pochhammer",
    "double_factorial",
    "hyp2f1_term",
    "hyp2f1_term_direct",
    "hyp3f2_terminating",
    "hyp3f2_term",
    "hyp3f2_term_direct",
    "hyp2f1_at_one",
    "hyp3f2_at_one",
    "hyperbolic_pair",
]

# Power series below, asymptotic expansion above.
BESSEL_CROSSOVER = 30.0


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite series and quadratures.

    A series stops once the newest term is below ``rel_tol`` times the
    partial sum.  Hitting ``max_terms`` first raises :class:`TruncationError`.
    """

    rel_tol: float = 1e-14
    max_terms: int = 500

    def __post_init__(self):
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")

    @classmethod
    def default(cls) -> "SeriesControl":
        """Default policy; ``TELEGRAPH_MAX_TERMS`` overrides ``max_terms``."""
        env = os.environ.get("TELEGRAPH_MAX_TERMS")
        if env is None or env.strip() == "":
            return cls()
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"TELEGRAPH_MAX_TERMS must be an integer, got {env!r}") from None
        return cls(max_terms=n)


def _control(control):
    return SeriesControl.default() if control is None else control


def _wrap(out, scalar):
    return float(out) if scalar else out


def _nonneg_input(z, name="z"):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be non-negative")
    return arr, arr.ndim == 0


class _Neumaier:
    """Compensated running sum over numpy arrays."""

    def __init__(self, shape):
        self.s = np.zeros(shape)
        self.c = np.zeros(shape)

    def add(self, x):
        t = self.s + x
        big = np.abs(self.s) >= np.abs(x)
        self.c += np.where(big, (self.s - t) + x, (x - t) + self.s)
        self.s = t

    @property
    def value(self):
        return self.s + self.c


def _bessel_series(nu, z, control):
    # sum_k (z/2)^(2k+nu) / (k! (k+nu)!)
    half = 0.5 * z
    q = half * half
    term = np.ones_like(z) if nu == 0 else half.copy()
    acc = _Neumaier(z.shape)
    acc.add(term)
    for k in range(1, control.max_terms + 1):
        term = term * q / (k * (k + nu))
        acc.add(term)
        if np.all(term <= control.rel_tol * np.abs(acc.value)):
            return acc.value
    raise TruncationError(
        f"I_{nu} power series did not converge in {control.max_terms} terms",
        terms=control.max_terms,
    )


def _bessel_asymptotic_scaled(nu, z):
    # e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k, z large.
    mu = 4.0 * nu * nu
    term = np.ones_like(z)
    acc = _Neumaier(z.shape)
    acc.add(term)
    prev = np.abs(term)
    for k in range(1, 60):
        nxt = term * ((2 * k - 1) ** 2 - mu) / (8.0 * k * z)
        # stop at the smallest term of the divergent tail
        if np.all(np.abs(nxt) >= prev) and k > 1:
            break
        term = nxt
        acc.add(term)
        prev = np.abs(term)
        if np.all(prev <= 1e-17 * np.abs(acc.value)):
            break
    return acc.value / np.sqrt(2.0 * np.pi * z)


def _bessel_scaled(nu, z, control):
    out = np.empty_like(z)
    small = z <= BESSEL_CROSSOVER
    if np.any(small):
        zs = z[small]
        out[small] = np.exp(-zs) * _bessel_series(nu, zs, control)
    if np.any(~small):
        out[~small] = _bessel_asymptotic_scaled(nu, z[~small])
    return out


def _bessel(nu, z, control):
    out = np.empty_like(z)
    small = z <= BESSEL_CROSSOVER
    if np.any(small):
        out[small] = _bessel_series(nu, z[small], control)
    if np.any(~small):
        zb = z[~small]
        with np.errstate(over="ignore"):
            out[~small] = np.exp(zb) * _bessel_asymptotic_scaled(nu, zb)
    return out


def bessel_i0(z, control=None):
    """Modified Bessel function of the first kind of order zero, ``z >= 0``."""
    arr, scalar = _nonneg_input(z)
    return _wrap(_bessel(0, np.atleast_1d(arr), _control(control)).reshape(arr.shape), scalar)


def bessel_i1(z, control=None):
    """Modified Bessel function of the first kind of order one, ``z >= 0``."""
    arr, scalar = _nonneg_input(z)
    return _wrap(_bessel(1, np.atleast_1d(arr), _control(control)).reshape(arr.shape), scalar)


def bessel_i0_scaled(z, control=None):
    """``exp(-z) * I0(z)``; finite for arbitrarily large ``z``."""
    arr, scalar = _nonneg_input(z)
    return _wrap(_bessel_scaled(0, np.atleast_1d(arr), _control(control)).reshape(arr.shape), scalar)


def bessel_i1_scaled(z, control=None):
    """``exp(-z) * I1(z)``; finite for arbitrarily large ``z``."""
    arr, scalar = _nonneg_input(z)
    return _wrap(_bessel_scaled(1, np.atleast_1d(arr), _control(control)).reshape(arr.shape), scalar)


def bessel_i1_ratio_scaled(z, control=None):
    """``exp(-z) * 2 I1(z) / z``, with the removable point ``z = 0`` giving 1.

    Near zero the ratio is summed directly as ``sum (z/2)^(2k) / (k!(k+1)!)``
    so there is no 0/0.
    """
    arr, scalar = _nonneg_input(z)
    ctl = _control(control)
    zz = np.atleast_1d(arr)
    out = np.empty_like(zz)
    small = zz <= 1.0
    if np.any(small):
        zs = zz[small]
        half = 0.5 * zs
        q = half * half
        term = np.ones_like(zs)
        acc = _Neumaier(zs.shape)
        acc.add(term)
        for k in range(1, ctl.max_terms + 1):
            term = term * q / (k * (k + 1))
            acc.add(term)
            if np.all(term <= ctl.rel_tol * acc.value):
                break
        out[small] = np.exp(-zs) * acc.value
    if np.any(~small):
        zb = zz[~small]
        out[~small] = 2.0 * _bessel_scaled(1, zb, ctl) / zb
    return _wrap(out.reshape(arr.shape), scalar)


def pochhammer(a, s):
    """Rising factorial ``(a)_s = a (a+1) ... (a+s-1)``; ``(a)_0 = 1``."""
    if int(s) != s or s < 0:
        raise DomainError(f"s must be a non-negative integer, got {s!r}")
    out = 1.0
    for j in range(int(s)):
        out *= a + j
    return out


def double_factorial(n):
    """``n!!`` as an exact integer, with ``0!! = (-1)!! = 1``."""
    if int(n) != n or n < -1:
        raise DomainError(f"double factorial needs an integer >= -1, got {n!r}")
    out = 1
    for j in range(int(n), 0, -2):
        out *= j
    return out


def _terminating_sum(k, numer, denom, z):
    """sum_{s=0}^{k} (-k)_s prod(numer)_s / prod(denom)_s z^s / s!."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    k = int(k)
    zarr = np.asarray(z, dtype=float)
    scalar = zarr.ndim == 0
    zz = np.atleast_1d(zarr)
    term = np.ones_like(zz)
    acc = _Neumaier(zz.shape)
    acc.add(term)
    for s in range(k):
        den = 1.0
        for d in denom:
            den *= d + s
        if den == 0.0:
            raise DomainError(f"pole in denominator Pochhammer symbol at s={s + 1}")
        num = float(s - k)
        for a in numer:
            num *= a + s
        term = term * (num / (den * (s + 1))) * zz
        acc.add(term)
    return _wrap(acc.value.reshape(zarr.shape), scalar)


_MOMENT_CHUNK = 1 << 20


@lru_cache(maxsize=64)
def _gauss_unit(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _poly_moment(k, z, flip):
    """``int_0^1 (1 - z v^2)^k dv``, or ``int_0^1 (v^2 - z)^k dv`` when ``flip``.

    Degree ``2k`` in ``v``, so ``k+1`` Gauss-Legendre nodes are exact.  The
    integrand never exceeds ``max(1, |z|)^k`` in size, so unlike the
    alternating coefficient sum there is no ``binom(k, k/2)`` growth.
    """
    v, w = _gauss_unit(k + 1)
    v2 = v * v
    zarr = np.asarray(z, dtype=float)
    flat = np.atleast_1d(zarr).ravel()
    out = np.empty(flat.shape)
    step = max(1, _MOMENT_CHUNK // (k + 1))
    for i in range(0, flat.size, step):
        zz = flat[i:i + step, None]
        base = v2 - zz if flip else 1.0 - zz * v2
        out[i:i + step] = _int_power(base, k) @ w
    return _wrap(out.reshape(zarr.shape), zarr.ndim == 0)


def _int_power(a, k):
    # squaring: a handful of multiplies instead of a generic pow per entry
    result = np.ones_like(a)
    while k:
        if k & 1:
            result *= a
        k >>= 1
        if k:
            a = a * a
    return result


def poly_moments(z):
    """Yield ``(P_k, Q_k)`` for ``k = 0, 1, ...`` at the points ``z`` in ``[0, 1]``.

    ``P_k = int_0^1 (1 - z v^2)^k dv`` and ``Q_k = int_0^1 (v^2 - z)^k dv``.
    Integrating by parts gives ``(2k+1) P_k = (1-z)^k + 2k P_{k-1}`` and
    ``(2k+1) Q_k = (1-z)^k - 2k z Q_{k-1}``.  The first adds positive terms
    and the second multiplies by at most 1 in size, so rounding errors grow
    at most linearly in ``k``.
    """
    zz = np.asarray(z, dtype=float)
    one = 1.0 - zz
    power = np.ones_like(zz)
    p = np.ones_like(zz)
    q = np.ones_like(zz)
    k = 0
    yield p, q
    while True:
        k += 1
        power = power * one
        p = (power + 2 * k * p) / (2 * k + 1)
        q = (power - 2 * k * zz * q) / (2 * k + 1)
        yield p, q


def _check_k(k):
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    return int(k)


def hyp2f1_term(k, b, c, z):
    """Terminating Gauss function ``F(-k, b; c; z)`` as an exact finite sum.

    Two parameter patterns have alternating coefficients of size up to
    ``binom(k, k/2)`` that cancel to an O(1) result; they are evaluated from
    exact polynomial integrals instead:

    * ``F(-k, 1/2; 3/2; z) = int_0^1 (1 - z v^2)^k dv``
    * ``F(-k, -k-1/2; -k+1/2; z) = (2k+1) int_0^1 (v^2 - z)^k dv``
    """
    k = _check_k(k)
    if b == 0.5 and c == 1.5:
        return _poly_moment(k, z, flip=False)
    if k > 0 and b == -k - 0.5 and c == -k + 0.5:
        return (2 * k + 1) * _poly_moment(k, z, flip=True)
    return _terminating_sum(k, (b,), (c,), z)


def hyp2f1_term_direct(k, b, c, z):
    """``F(-k, b; c; z)`` always by the term-ratio sum (reference path)."""
    return _terminating_sum(k, (b,), (c,), z)


def hyp3f2_terminating(k, a2, a3, b1, b2, z):
    """Terminating ``3F2(-k, a2, a3; b1, b2; z)`` by the term-ratio sum."""
    return _terminating_sum(k, (a2, a3), (b1, b2), z)


def hyp3f2_term(k, z):
    """``3F2(-k, -k-1/2, 1/2; -k+1/2, 3/2; z)``, the pattern in the sum CDF.

    Partial fractions in the summation index give
    ``(k+1/2)/(k+1) * [int_0^1 (1 - z v^2)^k dv + int_0^1 (v^2 - z)^k dv]``,
    which is how it is evaluated.  At ``z = 1`` and odd ``k`` the two
    integrals cancel exactly.
    """
    k = _check_k(k)
    p = np.asarray(_poly_moment(k, z, flip=False))
    q = np.asarray(_poly_moment(k, z, flip=True))
    out = (k + 0.5) / (k + 1) * (p + q)
    return float(out) if out.ndim == 0 else out


def hyp3f2_term_direct(k, z):
    """``hyp3f2_term`` by the term-ratio sum (reference path)."""
    return _terminating_sum(k, (-k - 0.5, 0.5), (-k + 0.5, 1.5), z)


def hyp2f1_at_one(k):
    """``F(-k, 1/2; 3/2; 1) = (2k)!! / (2k+1)!!``."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    out = 1.0
    for j in range(1, int(k) + 1):
        out *= 2.0 * j / (2.0 * j + 1.0)
    return out


def hyp3f2_at_one(k):
    """Closed form of ``hyp3f2_term(k, 1)``.

    Equals ``2^k k! / ((k+1) (2k-1)!!)`` for even ``k`` and zero for odd ``k``.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    k = int(k)
    if k % 2:
        return 0.0
    out = 1.0
    for j in range(1, k + 1):
        out *= 2.0 * j / (2.0 * j - 1.0)
    return out / (k + 1)


def hyperbolic_pair(u):
    r"""Return ``(cosh(sqrt(u)), sinh(sqrt(u))/sqrt(u))`` for real ``u``.

    For ``u < 0`` these continue analytically to ``cos(sqrt(-u))`` and
    ``sin(sqrt(-u))/sqrt(-u)``.  Both are entire in ``u``, so around ``u = 0``
    they are summed from their Taylor series and the branch point is
    removable.
    """
    uarr = np.asarray(u, dtype=float)
    scalar = uarr.ndim == 0
    uu = np.atleast_1d(uarr)
    ch = np.empty_like(uu)
    sh = np.empty_like(uu)

    near = np.abs(uu) <= 1.0
    if np.any(near):
        v = uu[near]
        # C = sum u^k/(2k)!, S = sum u^k/(2k+1)!
        tc = np.ones_like(v)
        ts = np.ones_like(v)
        c_acc = tc.copy()
        s_acc = ts.copy()
        for k in range(1, 14):
            tc = tc * v / ((2 * k - 1) * (2 * k))
            ts = ts * v / ((2 * k) * (2 * k + 1))
            c_acc += tc
            s_acc += ts
        ch[near] = c_acc
        sh[near] = s_acc

    pos = uu > 1.0
    if np.any(pos):
        r = np.sqrt(uu[pos])
        with np.errstate(over="ignore"):
            ch[pos] = np.cosh(r)
            sh[pos] = np.sinh(r) / r

    neg = uu < -1.0
    if np.any(neg):
        r = np.sqrt(-uu[neg])
        ch[neg] = np.cos(r)
        sh[neg] = np.sin(r) / r

    if scalar:
        return float(ch[0]), float(sh[0])
    return ch.reshape(uarr.shape), sh.reshape(uarr.shape)
