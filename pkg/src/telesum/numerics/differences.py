"""Seven-point finite-difference stencils."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError

__all__ = ["central_derivative", "forward_second_derivative", "default_step"]

_OFFSETS = np.arange(-3, 4, dtype=float)
# centred, truncation error O(h^6) for orders 1-2 and O(h^4) for order 3;
# integer weights so a constant gives exactly zero
_STENCILS = {
    1: (np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]), 60.0),
    2: (np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]), 180.0),
    3: (np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]), 8.0),
}


def default_step(t, lam):
    return 1e-3 * min(t, 1.0 / lam)


def central_derivative(f, x, h, order=1):
    """``order``-th derivative of scalar ``f`` at ``x`` (order 1, 2 or 3)."""
    if order not in _STENCILS:
        raise DomainError(f"order must be 1, 2 or 3, got {order!r}")
    if not h > 0:
        raise DomainError("step must be positive")
    vals = np.array([f(x + k * h) for k in _OFFSETS], dtype=float)
    weights, denom = _STENCILS[order]
    return float(np.dot(weights, vals)) / (denom * h ** order)


def forward_second_derivative(f, x, h):
    """One-sided ``f''(x)`` from ``f(x), ..., f(x+3h)``; error O(h^2)."""
    if not h > 0:
        raise DomainError("step must be positive")
    f0, f1, f2, f3 = (f(x + k * h) for k in range(4))
    return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h)
