"""Law of a single Goldstein-Kac telegraph process.

A particle starts at ``x0``, picks a direction with probability 1/2 each,
moves at speed ``c`` and reverses at the events of a Poisson process of rate
``lam``.  At time ``t`` the law of its position is a mixture of two atoms at
``x0 +/- c t`` (no reversal yet) and a Bessel-type density on the open
interval between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DomainError, TruncationError
from .specfun import (
    SeriesControl,
    bessel_i0_scaled,
    bessel_i1_ratio_scaled,
    hyp2f1_term,
    hyperbolic_pair,
)

__all__ = [
    "TelegraphParams",
    "Atom",
    "MixedDistribution",
    "tele_atoms",
    "tele_pdf_ac",
    "tele_cdf",
    "tele_charfn",
    "tele_charfn_shifted",
    "telegraph_law",
]


def _positive(value, name):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _check_time(t, allow_zero=False):
    t = float(t)
    if not math.isfinite(t) or t < 0 or (t == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise DomainError(f"t must be finite and {bound}, got {t!r}")
    return t


@dataclass(frozen=True)
class TelegraphParams:
    """Speed ``c`` and switching rate ``lam`` of one telegraph process."""

    c: float
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "c", _positive(self.c, "c"))
        object.__setattr__(self, "lam", _positive(self.lam, "lam"))


class Atom(NamedTuple):
    location: float
    mass: float


@dataclass(frozen=True)
class MixedDistribution:
    """Finitely many atoms plus an absolutely continuous density.

    ``ac_cdf(x)``, when supplied, is the absolutely continuous mass below
    ``x``.  Without it the CDF falls back to quadrature of ``ac_density``.
    Instances are immutable and safe to share between threads.
    """

    atoms: tuple
    ac_density: Callable
    support: tuple
    ac_cdf: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        atoms = tuple(Atom(float(a), float(m)) for a, m in self.atoms)
        for a in atoms:
            if not (0 < a.mass <= 1):
                raise DomainError(f"atom mass must lie in (0, 1], got {a.mass!r}")
        if sum(a.mass for a in atoms) > 1 + 1e-12:
            raise DomainError("atom masses sum to more than 1")
        lo, hi = (float(v) for v in self.support)
        if not lo <= hi:
            raise DomainError("support must satisfy lo <= hi")
        object.__setattr__(self, "atoms", tuple(sorted(atoms)))
        object.__setattr__(self, "support", (lo, hi))

    @property
    def atom_mass(self):
        return math.fsum(a.mass for a in self.atoms)

    def pdf_ac(self, x):
        return self.ac_density(x)

    def mass_at(self, x):
        """Total atom mass located exactly at ``x`` (elementwise)."""
        xa = np.asarray(x, dtype=float)
        out = np.zeros_like(xa)
        for a in self.atoms:
            out = out + np.where(xa == a.location, a.mass, 0.0)
        return float(out) if out.ndim == 0 else out

    def _atoms_below(self, xa, inclusive):
        out = np.zeros_like(xa)
        for a in self.atoms:
            hit = xa >= a.location if inclusive else xa > a.location
            out = out + np.where(hit, a.mass, 0.0)
        return out

    def _ac_cdf(self, xa):
        if self.ac_cdf is not None:
            return np.asarray(self.ac_cdf(xa), dtype=float)
        from .numerics.quadrature import integrate

        lo, hi = self.support
        out = np.empty_like(xa)
        for i, x in np.ndenumerate(xa):
            if x <= lo:
                out[i] = 0.0
            else:
                out[i] = integrate(self.ac_density, lo, min(x, hi), abs_tol=1e-12).value
        return out

    def cdf(self, x):
        """Left-continuous distribution function ``Pr{X < x}``."""
        xa = np.asarray(x, dtype=float)
        out = self._atoms_below(xa, inclusive=False) + self._ac_cdf(xa)
        return float(out) if out.ndim == 0 else out

    def cdf_right(self, x):
        """Right-continuous version ``Pr{X <= x}``."""
        xa = np.asarray(x, dtype=float)
        out = self._atoms_below(xa, inclusive=True) + self._ac_cdf(xa)
        return float(out) if out.ndim == 0 else out

    def total_mass(self, abs_tol=1e-12):
        """Atom mass plus the integral of the density over the support."""
        from .numerics.quadrature import integrate

        lo, hi = self.support
        cuts = sorted({lo, hi, *(a.location for a in self.atoms if lo < a.location < hi)})
        ac = math.fsum(
            integrate(self.ac_density, a, b, abs_tol=abs_tol).value for a, b in zip(cuts, cuts[1:])
        )
        return self.atom_mass + ac


def tele_atoms(p: TelegraphParams, t, x0=0.0):
    """Atoms at ``x0 +/- c t``, each of mass ``exp(-lam t)/2``."""
    t = _check_time(t)
    mass = 0.5 * math.exp(-p.lam * t)
    ct = p.c * t
    return [Atom(x0 + (-ct), mass), Atom(x0 + ct, mass)]


def tele_pdf_ac(p: TelegraphParams, x, t, x0=0.0):
    """Absolutely continuous part of the density of ``X(t)``.

    Zero for ``|x - x0| >= c t``.  Inside, ``ct I1(z)/sqrt(c^2t^2-y^2)`` is
    evaluated as ``(lam t / 2) * 2 I1(z)/z`` which stays finite at the edge.
    """
    t = _check_time(t)
    xa = np.asarray(x, dtype=float)
    y = np.abs(np.atleast_1d(xa) - x0)
    ct = p.c * t
    out = np.zeros_like(y)
    inside = y < ct
    if np.any(inside):
        yi = y[inside]
        z = p.lam / p.c * np.sqrt((ct - yi) * (ct + yi))
        # exp(-lam t) I_nu(z) = scaled(z) exp(z - lam t), z <= lam t
        damp = np.exp(z - p.lam * t)
        i0 = bessel_i0_scaled(z) * damp
        i1_term = 0.5 * p.lam * t * bessel_i1_ratio_scaled(z) * damp
        out[inside] = p.lam / (2.0 * p.c) * (i0 + i1_term)
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def tele_cdf(p: TelegraphParams, x, t, x0=0.0, control: SeriesControl | None = None):
    """``Pr{X(t) < x}`` from the hypergeometric series representation.

    0 for ``x <= x0 - ct``, 1 for ``x > x0 + ct``.
    """
    t = _check_time(t)
    ctl = SeriesControl.default() if control is None else control
    xa = np.asarray(x, dtype=float)
    y = np.atleast_1d(xa) - x0
    ct = p.c * t
    out = np.where(y > ct, 1.0, 0.0)
    mid = (y > -ct) & (y <= ct)
    if np.any(mid):
        ym = y[mid]
        z = (ym / ct) ** 2
        lt = p.lam * t
        q = (0.5 * lt) ** 2
        weight = 1.0
        total = np.zeros_like(ym)
        for k in range(ctl.max_terms):
            if k:
                weight *= q / (k * k)
            term = weight * (1.0 + lt / (2 * k + 2)) * hyp2f1_term(k, 0.5, 1.5, z)
            total = total + term
            if k > lt and np.all(np.abs(term) <= ctl.rel_tol * np.abs(total)):
                break
        else:
            raise TruncationError(
                f"telegraph CDF series did not converge in {ctl.max_terms} terms",
                terms=ctl.max_terms,
            )
        out[mid] = 0.5 + p.lam * ym * math.exp(-lt) / (2.0 * p.c) * total
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def _charfn_values(p: TelegraphParams, xx, t):
    # no check on t: the expression is analytic in t, which lets finite
    # differences straddle t = 0
    d = p.lam ** 2 - (p.c * xx) ** 2
    u = t * t * d
    lt = p.lam * t
    out = np.empty_like(xx)

    mid = np.abs(u) <= 1.0
    if np.any(mid):
        ch, sh = hyperbolic_pair(u[mid])
        out[mid] = math.exp(-lt) * (ch + lt * sh)

    hyp = u > 1.0
    if np.any(hyp):
        # e^{-lam t}[cosh(tw) + lam sinh(tw)/w] without overflow, w <= lam
        w = np.sqrt(d[hyp])
        r = p.lam / w
        out[hyp] = 0.5 * ((1.0 + r) * np.exp(t * (w - p.lam)) + (1.0 - r) * np.exp(-t * (w + p.lam)))

    trig = u < -1.0
    if np.any(trig):
        w = np.sqrt(-d[trig])
        out[trig] = math.exp(-lt) * (np.cos(t * w) + p.lam * np.sin(t * w) / w)

    # total mass, exactly
    out[xx == 0] = 1.0
    return out


def tele_charfn(p: TelegraphParams, xi, t):
    """Characteristic function ``H(xi, t) = E exp(i xi X(t))`` for ``x0 = 0``.

    Real and even in ``xi``.  Hyperbolic branch for ``|xi| <= lam/c``,
    trigonometric branch beyond; both are one entire function of
    ``lam^2 - c^2 xi^2`` and the branch point is handled by its Taylor series.
    """
    t = _check_time(t, allow_zero=True)
    xa = np.asarray(xi, dtype=float)
    out = _charfn_values(p, np.atleast_1d(xa), t).reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def tele_charfn_shifted(p: TelegraphParams, x0, xi, t):
    """Characteristic function of the process started at ``x0``."""
    h = tele_charfn(p, xi, t)
    out = np.exp(1j * np.asarray(xi, dtype=float) * x0) * h
    return complex(out) if np.ndim(out) == 0 else out


def telegraph_law(p: TelegraphParams, t, x0=0.0, control=None):
    """Law of ``X(t)`` packaged as a :class:`MixedDistribution`."""
    t = _check_time(t)
    atoms = tuple(tele_atoms(p, t, x0))
    edge = atoms[0].location
    low_mass = atoms[0].mass

    def ac_cdf(x):
        xa = np.asarray(x, dtype=float)
        # tele_cdf counts the lower atom for every x above it
        full = np.asarray(tele_cdf(p, xa, t, x0, control))
        top = xa > atoms[1].location
        val = full - np.where(xa > edge, low_mass, 0.0) - np.where(top, atoms[1].mass, 0.0)
        return np.where(xa > edge, val, 0.0)

    return MixedDistribution(
        atoms=atoms,
        ac_density=lambda x: tele_pdf_ac(p, x, t, x0),
        support=(atoms[0].location, atoms[1].location),
        ac_cdf=ac_cdf,
    )
