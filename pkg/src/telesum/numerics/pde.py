r"""Fourier-side residuals of the evolution equations satisfied by the sum law.

``Psi(xi, t)`` solves the third-order equation

.. math::
    \Psi''' + 6\lambda\Psi'' + (4c^2\xi^2 + 8\lambda^2)\Psi' + 8\lambda c^2\xi^2\Psi = 0,

i.e. ``(D + 2 lam)(D^2 + 4 lam D + 4 c^2 xi^2) Psi = 0`` with ``D = d/dt``,
and ``w_hat = d/dt[e^{2 lam t} Psi]`` solves ``w'' = 4(lam^2 - c^2 xi^2) w``.
Derivatives are taken by finite differences, so a residual near zero checks
the closed forms against the equations independently of how they were
derived.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .differences import central_derivative, default_step

__all__ = ["pde_residual_order3", "theorem2_residual"]


def _closed_params(params):
    from ..sumdist import _closed

    return _closed(params)


def _check(t, h):
    if not h > 0:
        raise DomainError("step h must be positive")
    if not t > 2 * h:
        raise DomainError(f"need t > 2h, got t={t!r}, h={h!r}")


def pde_residual_order3(params, xi, t, h=None):
    """Normalised residual of the third-order equation at ``(xi, t)``.

    Divided by ``max(1, |Psi| lam^3)``.  Psi is analytic in ``t`` so the
    stencil may reach below ``t = 0``.
    """
    from ..telegraph import _charfn_values

    p = _closed_params(params)
    h = default_step(t, p.lam) if h is None else float(h)
    _check(t, h)
    xi_arr = np.array([float(xi)])

    def psi(s):
        return float(_charfn_values(p, xi_arr, s)[0] ** 2)

    d1 = central_derivative(psi, t, h, 1)
    d2 = central_derivative(psi, t, h, 2)
    d3 = central_derivative(psi, t, h, 3)
    cx2 = (p.c * xi) ** 2
    val = psi(t)
    res = d3 + 6 * p.lam * d2 + (4 * cx2 + 8 * p.lam ** 2) * d1 + 8 * p.lam * cx2 * val
    return abs(res) / max(1.0, abs(val) * p.lam ** 3)


def theorem2_residual(params, xi, t, h=None):
    """Normalised residual of ``w'' - 4(lam^2 - c^2 xi^2) w`` for the closed-form ``w_hat``.

    Divided by ``max(1, 4 |w| (lam^2 + c^2 xi^2))``, the size of either side.
    """
    from ..sumdist import _w_hat_values

    p = _closed_params(params)
    h = default_step(t, p.lam) if h is None else float(h)
    _check(t, h)
    xi_arr = np.array([float(xi)])

    def w(s):
        return float(_w_hat_values(p, xi_arr, s)[0])

    d = p.lam ** 2 - (p.c * xi) ** 2
    val = w(t)
    res = central_derivative(w, t, h, 2) - 4 * d * val
    return abs(res) / max(1.0, 4 * abs(val) * (p.lam ** 2 + (p.c * xi) ** 2))
