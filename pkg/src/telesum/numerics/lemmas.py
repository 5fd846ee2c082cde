"""Closed forms of four auxiliary integrals and their quadrature counterparts.

``A1``  ``int_{-a}^{a} I0(b sqrt(a^2 - x^2)) dx = (2/b) sinh(ab)``.

``A2``  the Fourier transform of ``I0(b sqrt(a^2 - x^2))`` on ``[-a, a]`` is
``2 sinh(a sqrt(b^2 - xi^2)) / sqrt(b^2 - xi^2)`` (``sin`` past ``|xi| = b``).

``A3``  the transform of ``(1/4) int_{|x|}^{2q} I0(p sqrt(tau^2 - x^2)) dtau``
on ``[-2q, 2q]`` is ``sinh^2(q sqrt(p^2 - xi^2)) / (p^2 - xi^2)``.

``A4``  ``z^{n+1}/(n+1) 3F2(-k, -n/2-1/2, 1/2; -n/2+1/2, 3/2; x^2/z^2)`` is
an antiderivative in ``z`` of ``z^n F(-k, 1/2; 3/2; x^2/z^2)`` for ``n >= 2k``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..specfun import bessel_i0, hyp3f2_terminating, hyperbolic_pair
from .quadrature import arc_integral, integrate

__all__ = [
    "lemma_a1",
    "lemma_a1_quadrature",
    "lemma_a2_transform",
    "lemma_a2_quadrature",
    "lemma_a3_check",
    "lemma_a4_antiderivative",
]


def _positive(**kw):
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")


def _kernel(a, b):
    return lambda x: bessel_i0(b * np.sqrt(np.maximum((a - x) * (a + x), 0.0)))


def lemma_a1(a, b):
    _positive(a=a, b=b)
    return 2.0 * math.sinh(a * b) / b


def lemma_a1_quadrature(a, b, abs_tol=1e-12):
    _positive(a=a, b=b)
    return integrate(_kernel(a, b), -a, a, abs_tol=abs_tol).value


def lemma_a2_transform(a, b, xi):
    """``2 a S(a^2 (b^2 - xi^2))`` with ``S(u) = sinh(sqrt u)/sqrt u``; 2a at ``|xi| = b``."""
    _positive(a=a, b=b)
    xa = np.asarray(xi, dtype=float)
    _, s = hyperbolic_pair(a * a * (b * b - xa * xa))
    out = 2.0 * a * np.asarray(s)
    return float(out) if out.ndim == 0 else out


def lemma_a2_quadrature(a, b, xi, abs_tol=1e-12):
    """Real part of ``int_{-a}^{a} e^{i xi x} I0(b sqrt(a^2-x^2)) dx``; the kernel is even."""
    _positive(a=a, b=b)
    k = _kernel(a, b)
    return integrate(lambda x: np.cos(xi * x) * k(x), -a, a, abs_tol=abs_tol).value


def lemma_a3_check(p, q, xi, abs_tol=1e-10, rel_tol=1e-13):
    """``(lhs, rhs)``: the closed form and the quadrature of the arc kernel's transform.

    The quadrature stops at ``max(abs_tol, rel_tol * |lhs|)``, since ``lhs``
    grows like ``sinh(pq)^2``.
    """
    from ..telegraph import TelegraphParams

    _positive(p=p, q=q)
    _, s = hyperbolic_pair(q * q * (p * p - xi * xi))
    lhs = float(q * q * s * s)
    # c = 1, lam = p, t = q puts the arc integral on [|x|, 2q]
    par = TelegraphParams(1.0, p)
    kern = lambda x: 0.25 * np.cos(xi * x) * arc_integral(par, x, q)
    tol = max(abs_tol, rel_tol * abs(lhs))
    rhs = integrate(kern, -2 * q, 2 * q, abs_tol=tol, points=(0.0,)).value
    return lhs, rhs


def lemma_a4_antiderivative(n, k, x, z):
    """``z^{n+1}/(n+1) * 3F2(-k, -n/2-1/2, 1/2; -n/2+1/2, 3/2; x^2/z^2)``."""
    if int(n) != n or int(k) != k or k < 0 or n < 2 * k:
        raise DomainError(f"need integers n >= 2k >= 0, got n={n!r}, k={k!r}")
    za = np.asarray(z, dtype=float)
    if np.any(za == 0):
        raise DomainError("z must be nonzero")
    arg = (np.asarray(x, dtype=float) / za) ** 2
    f = hyp3f2_terminating(int(k), -n / 2 - 0.5, 0.5, -n / 2 + 0.5, 1.5, arg)
    out = za ** (n + 1) / (n + 1) * np.asarray(f)
    return float(out) if out.ndim == 0 else out
