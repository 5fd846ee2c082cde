"""Law of ``S(t) = X1(t) + X2(t)`` for two independent telegraph processes.

With equal parameters and both processes started at the origin the law is
known in closed form: three atoms at ``0`` and ``+/-2ct`` and a Bessel-type
density on ``(-2ct, 0) U (0, 2ct)``.  For unequal parameters or shifted
starts only the atoms and the characteristic function are explicit; the
density is recovered by numeric Fourier inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError
from .numerics.fourier import InversionConfig, cutoff_for_distance, invert_charfn, invert_charfn_cdf
from .numerics.quadrature import arc_integral
from .specfun import (
    SeriesControl,
    bessel_i0_scaled,
    bessel_i1_ratio_scaled,
    bessel_i1_scaled,
    hyp2f1_term,
    hyp2f1_term_direct,
    hyp3f2_term,
    hyperbolic_pair,
    poly_moments,
)
from .telegraph import (
    Atom,
    MixedDistribution,
    TelegraphParams,
    _charfn_values,
    _check_time,
    tele_charfn,
)

__all__ = [
    "SumParams",
    "sum_atoms",
    "sum_pdf_ac",
    "sum_pdf_ac_alt",
    "sum_cdf",
    "sum_cdf_alt",
    "sum_charfn",
    "w_hat",
    "sum_law",
    "general_charfn",
    "general_atoms",
    "general_singular_points",
    "general_pdf_ac",
    "general_law",
]


@dataclass(frozen=True)
class SumParams:
    """Parameters of the two summands and their start points."""

    p1: TelegraphParams
    p2: TelegraphParams
    x01: float = 0.0
    x02: float = 0.0

    def __post_init__(self):
        for name in ("x01", "x02"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def equal(cls, c, lam):
        p = TelegraphParams(c, lam)
        return cls(p, p)

    @property
    def closed_form(self):
        """True for equal parameters and both starts at the origin."""
        return self.p1 == self.p2 and self.x01 == 0.0 and self.x02 == 0.0

    @property
    def start(self):
        return self.x01 + self.x02


def _closed(params) -> TelegraphParams:
    if isinstance(params, TelegraphParams):
        return params
    if not params.closed_form:
        raise DomainError(
            "closed-form sum law needs equal parameters and starts at the origin; "
            "use the general_* functions"
        )
    return params.p1


# ---------------------------------------------------------------------------
# equal parameters, origin start


def sum_atoms(params, t):
    """Atoms at ``-2ct, 0, 2ct`` with masses ``e^{-2 lam t}`` times 1/4, 1/2, 1/4."""
    p = _closed(params)
    t = _check_time(t)
    e = math.exp(-2.0 * p.lam * t)
    top = 2.0 * p.c * t
    return [Atom(-top, e / 4.0), Atom(0.0, e / 2.0), Atom(top, e / 4.0)]


def _inside(p, x, t):
    xa = np.asarray(x, dtype=float)
    y = np.abs(np.atleast_1d(xa)).astype(float)
    top = 2.0 * p.c * t
    return xa, y, y < top, top


def sum_pdf_ac(params, x, t):
    """Density of the absolutely continuous part of ``S(t)``.

    Evaluated as ``(e^{-2 lam t}/2c)[lam I0(z) + (1/4) dI0(z)/dt
    + (lam^2/2c) A(x)]`` with ``z = (lam/c) sqrt(4c^2t^2 - x^2)`` and ``A``
    the arc integral.  The time derivative uses
    ``dI0(z)/dt = 2 lam^2 t * 2 I1(z)/z``.  Zero for ``|x| >= 2ct``; only
    ``|x|`` enters so the result is exactly even.
    """
    p = _closed(params)
    t = _check_time(t)
    xa, y, live, top = _inside(p, x, t)
    out = np.zeros_like(y)
    if np.any(live):
        yl = y[live]
        lt2 = 2.0 * p.lam * t
        z = p.lam / p.c * np.sqrt((top - yl) * (top + yl))
        damp = np.exp(z - lt2)
        i0 = bessel_i0_scaled(z) * damp
        dt_i0 = 2.0 * p.lam ** 2 * t * bessel_i1_ratio_scaled(z) * damp
        arc = arc_integral(p, yl, t, log_scale=lt2)
        out[live] = (p.lam * i0 + 0.25 * dt_i0 + p.lam ** 2 / (2.0 * p.c) * arc) / (2.0 * p.c)
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def sum_pdf_ac_alt(params, x, t):
    """Same density written as
    ``(lam e^{-2 lam t}/2c)[I0(z) + ct I1(z)/r + (lam/2c) A(x)]``
    with ``r = sqrt(4c^2t^2 - x^2)``.

    For ``z > 1`` the middle term is formed directly; closer to the support
    ends it becomes ``(lam t/2) * I1(z)/(z/2)`` whose series has no 0/0.
    """
    p = _closed(params)
    t = _check_time(t)
    xa, y, live, top = _inside(p, x, t)
    out = np.zeros_like(y)
    if np.any(live):
        yl = y[live]
        ct = p.c * t
        lt2 = 2.0 * p.lam * t
        r = np.sqrt((top - yl) * (top + yl))
        z = p.lam / p.c * r
        damp = np.exp(z - lt2)
        mid = np.empty_like(z)
        near = z <= 1.0
        mid[near] = 0.5 * p.lam * t * bessel_i1_ratio_scaled(z[near]) * damp[near]
        far = ~near
        mid[far] = ct * bessel_i1_scaled(z[far]) * damp[far] / r[far]
        arc = arc_integral(p, yl, t, log_scale=lt2)
        bracket = bessel_i0_scaled(z) * damp + mid + p.lam / (2.0 * p.c) * arc
        out[live] = p.lam / (2.0 * p.c) * bracket
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def _outer_series(p, z, t, ctl, first_weight, second_term, hyp):
    """Shared driver for the two CDF representations.

    ``hyp`` yields, for ``k = 0, 1, ...``, the pair ``F(-k, 1/2; 3/2; z)``
    and the function entering the second sum.  ``first_weight(k)``
    multiplies the former; ``second_term(k, w, f)`` returns the second-sum
    contribution and a bound on its size.  ``|F(-k, 1/2; 3/2; z)| <= 1`` on
    ``[0, 1]``, so the stop test uses the bare first weight plus that bound.
    """
    lt = p.lam * t
    q = lt * lt
    w = 1.0  # (lam t)^{2k} / (k!)^2
    total = np.zeros_like(z)
    for k, (f, g) in zip(range(ctl.max_terms), hyp):
        if k:
            w *= q / (k * k)
        a = first_weight(k, w)
        b, bound = second_term(k, w, g)
        total = total + a * f + b
        scale = np.min(np.abs(total)) if total.size else 1.0
        if k > lt and (abs(a) + bound) <= ctl.rel_tol * max(scale, 1e-300):
            return total
    raise TruncationError(f"sum CDF series did not converge in {ctl.max_terms} terms", terms=ctl.max_terms)


def _moment_pairs(z):
    # F(-k,1/2;3/2;z) = P_k and 3F2(...) = (k+1/2)/(k+1) (P_k + Q_k)
    for k, (pk, qk) in enumerate(poly_moments(z)):
        yield pk, (k + 0.5) / (k + 1) * (pk + qk)


def _alt_pairs(z):
    k = 0
    while True:
        yield _alt_gauss(k, z)
        k += 1


def _g_pm(p, x, t, control, alt):
    ctl = SeriesControl.default() if control is None else control
    t = _check_time(t)
    xa = np.asarray(x, dtype=float)
    xx = np.atleast_1d(xa).astype(float)
    top = 2.0 * p.c * t
    out = np.where(xx > top, 1.0, 0.0)
    mid = (xx > -top) & (xx <= top)
    if np.any(mid):
        xm = xx[mid]
        z = (xm / top) ** 2
        lt = p.lam * t
        e = math.exp(-2.0 * lt)

        if alt:
            def first(k, w):
                return w * (1.0 + lt / (k + 1))

            def second(k, w, f):
                coef = w * lt / ((2 * k + 1) * (2 * k + 2))
                return coef * f, abs(coef) * max(1.0, float(np.max(np.abs(f))))

            pairs = _alt_pairs(z)
        else:
            def first(k, w):
                return w * (1.0 + lt / (2 * k + 2))

            def second(k, w, f):
                coef = w * lt / (2 * k + 1)
                return coef * f, abs(coef) * max(1.0, float(np.max(np.abs(f))))

            pairs = _moment_pairs(z)

        series = _outer_series(p, z, t, ctl, first, second, pairs)
        sign = np.where(xm > 0, 1.0, -1.0)
        out[mid] = (
            0.5
            + sign * 0.25 * e * np.cos(p.lam * xm / p.c)
            + p.lam * xm * e / (2.0 * p.c) * series
        )
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def _alt_gauss(k, z):
    """``F(-k, 1/2; 3/2; z)`` and ``F(-k, -k-1/2; -k+1/2; z)`` by direct term sums.

    Deliberately not the integral path used by ``sum_cdf``, so the two CDF
    forms share no hypergeometric code.  The alternating sums lose about
    ``binom(k, k/2) * eps``, which the outer weights suppress for moderate
    ``lam t``.
    """
    return hyp2f1_term_direct(k, 0.5, 1.5, z), hyp2f1_term_direct(k, -k - 0.5, -k + 0.5, z)


def sum_cdf(params, x, t, control: SeriesControl | None = None):
    """Left-continuous ``Pr{S(t) < x}`` from the Bessel-hypergeometric series.

    0 for ``x <= -2ct`` and 1 for ``x > 2ct``.  In between the ``G-`` branch
    applies on ``(-2ct, 0]`` and ``G+`` on ``(0, 2ct]``; both differ by the
    ``cos(lam x/c)`` term, whose jump at 0 is the central atom.
    """
    return _g_pm(_closed(params), x, t, control, alt=False)


def sum_cdf_alt(params, x, t, control: SeriesControl | None = None):
    """``sum_cdf`` rewritten with Gauss functions only (3F2 split into two 2F1)."""
    return _g_pm(_closed(params), x, t, control, alt=True)


def sum_charfn(params, xi, t):
    """``Psi(xi, t) = H(xi, t)^2``."""
    p = _closed(params)
    h = np.asarray(tele_charfn(p, xi, t))
    out = h * h
    return float(out) if out.ndim == 0 else out


def _w_hat_values(p, xx, t):
    d = p.lam ** 2 - (p.c * xx) ** 2
    ch, sh = hyperbolic_pair(4.0 * t * t * d)
    return 2.0 * t * d * sh + 2.0 * p.lam * ch + 2.0 * t * p.lam ** 2 * sh


def w_hat(params, xi, t):
    """``d/dt [e^{2 lam t} Psi(xi, t)]`` in closed form.

    ``w sinh(2tw) + 2 lam cosh(2tw) + lam^2 sinh(2tw)/w`` with
    ``w = sqrt(lam^2 - c^2 xi^2)``; past ``|xi| = lam/c`` the hyperbolic
    functions turn trigonometric.  Evaluated through the entire functions of
    ``4t^2(lam^2 - c^2 xi^2)`` so both branches and the branch point share
    one code path.
    """
    p = _closed(params)
    t = _check_time(t, allow_zero=True)
    xa = np.asarray(xi, dtype=float)
    out = _w_hat_values(p, np.atleast_1d(xa), t).reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def sum_law(params, t, control=None):
    """Closed-form law of ``S(t)`` as a :class:`MixedDistribution`."""
    p = _closed(params)
    t = _check_time(t)
    atoms = tuple(sum_atoms(p, t))

    def ac_cdf(x):
        xa = np.asarray(x, dtype=float)
        full = np.asarray(sum_cdf(p, xa, t, control))
        below = np.zeros_like(xa)
        for a in atoms:
            below = below + np.where(xa > a.location, a.mass, 0.0)
        return np.where(xa > atoms[0].location, full - below, 0.0)

    return MixedDistribution(
        atoms=atoms,
        ac_density=lambda x: sum_pdf_ac(p, x, t),
        support=(atoms[0].location, atoms[-1].location),
        ac_cdf=ac_cdf,
    )


# ---------------------------------------------------------------------------
# general parameters and start points


def _as_sum_params(params):
    if isinstance(params, TelegraphParams):
        return SumParams(params, params)
    return params


def general_charfn(params, xi, t):
    """``exp(i xi (x01 + x02)) H1(xi, t) H2(xi, t)``."""
    sp = _as_sum_params(params)
    t = _check_time(t, allow_zero=True)
    xa = np.asarray(xi, dtype=float)
    xx = np.atleast_1d(xa)
    h = _charfn_values(sp.p1, xx, t) * _charfn_values(sp.p2, xx, t)
    if sp.start == 0.0:
        out = h.astype(complex)
    else:
        out = np.exp(1j * xx * sp.start) * h
    out = out.reshape(xa.shape)
    return complex(out) if out.ndim == 0 else out


def general_atoms(params, t):
    """Atoms of ``S(t)``: both processes switch no direction before ``t``.

    Each of the four direction pairs has probability
    ``e^{-(lam1+lam2)t}/4`` and lands at ``x0 +/- c1 t +/- c2 t``.  With
    ``c1 == c2`` the two mixed pairs coincide at ``x0``, giving three atoms;
    with ``c1 != c2`` there are four distinct atoms.
    """
    sp = _as_sum_params(params)
    t = _check_time(t)
    m = 0.25 * math.exp(-(sp.p1.lam + sp.p2.lam) * t)
    c1t = sp.p1.c * t
    c2t = sp.p2.c * t
    x0 = sp.start
    masses = {}
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            # same float expression as the simulator, so atoms match exactly
            loc = x0 + (s1 * c1t + s2 * c2t)
            masses[loc] = masses.get(loc, 0.0) + m
    return [Atom(loc, mass) for loc, mass in sorted(masses.items())]


def general_singular_points(params, t):
    """Atom locations and support ends; the density may jump or kink there."""
    return tuple(a.location for a in general_atoms(params, t))


def _general_config(sp, t, tol, xi_cutoff=None):
    atoms = general_atoms(sp, t)
    lo, hi = atoms[0].location, atoms[-1].location
    return InversionConfig(
        xi_cutoff=xi_cutoff,
        atoms=tuple((a.location, a.mass) for a in atoms),
        support=(lo, hi),
        singular_points=tuple(a.location for a in atoms),
        tol=tol,
    )


def general_pdf_ac(params, x, t, delta=None, tol=1e-5):
    """Absolutely continuous density of ``S(t)`` by numeric Fourier inversion.

    ``x`` must lie inside the support and farther than ``delta`` (default
    ``1e-3 (c1+c2) t``) from every atom location, where the density may
    jump.  The advertised accuracy is ``tol`` in absolute terms.
    """
    sp = _as_sum_params(params)
    t = _check_time(t)
    if delta is None:
        delta = 1e-3 * (sp.p1.c + sp.p2.c) * t
    cfg = _general_config(sp, t, tol)
    xa = np.asarray(x, dtype=float)
    xs = np.atleast_1d(xa)
    lo, hi = cfg.support
    if np.any(xs <= lo + delta) or np.any(xs >= hi - delta):
        raise DomainError(f"x must lie inside ({lo + delta!r}, {hi - delta!r})")
    sing = np.array(cfg.singular_points)
    if np.any(np.min(np.abs(xs[:, None] - sing[None, :]), axis=1) <= delta):
        raise DomainError(f"x lies within delta={delta:.3g} of an atom location")
    phi = lambda xi: general_charfn(sp, xi, t)
    vals = np.empty_like(xs)
    for i, xv in enumerate(xs):
        vals[i] = invert_charfn(phi, cfg, xv)
    vals = vals.reshape(xa.shape)
    return float(vals) if vals.ndim == 0 else vals


def general_law(params, t, tol=1e-5):
    """Law of ``S(t)`` with the density and CDF obtained by inversion.

    Both processes and their starts may differ.  The absolutely continuous
    CDF comes from inverting ``(phi - atoms)/(i xi)`` directly, which is
    continuous in ``x`` and so needs no exclusion radius.
    """
    sp = _as_sum_params(params)
    t = _check_time(t)
    cfg = _general_config(sp, t, tol)
    atoms = tuple(general_atoms(sp, t))
    lo, hi = cfg.support
    phi = lambda xi: general_charfn(sp, xi, t)
    ac_total = 1.0 - math.fsum(a.mass for a in atoms)

    # one fixed cutoff: accurate beyond delta from the singular points and a
    # smooth, correctly normalised function everywhere, so it can be integrated
    delta = 1e-3 * (sp.p1.c + sp.p2.c) * t
    fixed = InversionConfig(
        xi_cutoff=cutoff_for_distance(delta),
        atoms=cfg.atoms,
        support=cfg.support,
        singular_points=cfg.singular_points,
        check=False,
    )

    def density(x):
        xa = np.asarray(x, dtype=float)
        xs = np.atleast_1d(xa)
        out = np.zeros_like(xs)
        inside = (xs > lo) & (xs < hi)
        if np.any(inside):
            out[inside] = invert_charfn(phi, fixed, xs[inside])
        out = out.reshape(xa.shape)
        return float(out) if out.ndim == 0 else out

    def ac_cdf(x):
        xa = np.asarray(x, dtype=float)
        xs = np.atleast_1d(xa)
        out = np.where(xs >= hi, ac_total, 0.0)
        inside = (xs > lo) & (xs < hi)
        if np.any(inside):
            vals = invert_charfn_cdf(phi, cfg, xs[inside])
            out[inside] = np.clip(vals, 0.0, ac_total)
        return out.reshape(xa.shape)

    return MixedDistribution(atoms=atoms, ac_density=density, support=(lo, hi), ac_cdf=ac_cdf)
