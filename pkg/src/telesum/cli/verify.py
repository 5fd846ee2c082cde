"""Self-check suite run by ``telesum verify``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..numerics.fourier import InversionConfig, forward_transform, invert_charfn
from ..numerics.lemmas import (
    lemma_a1,
    lemma_a1_quadrature,
    lemma_a2_quadrature,
    lemma_a2_transform,
    lemma_a3_check,
    lemma_a4_antiderivative,
)
from ..numerics.pde import pde_residual_order3, theorem2_residual
from ..numerics.quadrature import integrate
from ..specfun import hyp2f1_term
from ..sumdist import (
    sum_atoms,
    sum_cdf,
    sum_cdf_alt,
    sum_charfn,
    sum_law,
    sum_pdf_ac,
    sum_pdf_ac_alt,
)
from ..telegraph import TelegraphParams

__all__ = ["Check", "VerifyReport", "run_checks"]


@dataclass(frozen=True)
class Check:
    passed: bool
    value: float
    tol: float


@dataclass
class VerifyReport:
    checks: dict = field(default_factory=dict)

    def add(self, name, value, tol):
        value = float(value)
        self.checks[name] = Check(bool(value <= tol), value, float(tol))

    @property
    def ok(self):
        return all(c.passed for c in self.checks.values())

    def to_text(self):
        width = max(len(n) for n in self.checks)
        lines = [
            f"{name:<{width}}  {'pass' if c.passed else 'FAIL'}  {c.value:.3e} <= {c.tol:.1e}"
            for name, c in self.checks.items()
        ]
        lines.append(f"{sum(c.passed for c in self.checks.values())}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"

    def to_json(self):
        doc = {
            name: {"status": "pass" if c.passed else "fail", "value": c.value, "tol": c.tol}
            for name, c in self.checks.items()
        }
        return json.dumps({"ok": self.ok, "checks": doc}, indent=1) + "\n"


def run_checks(p: TelegraphParams, t, inject_fault=False):
    """Run the identity and oracle checks at ``(c, lam, t)``.

    ``inject_fault`` evaluates the density with ``lam`` perturbed by 1% (the
    atoms keep the true value), which the normalisation check must catch.
    """
    rep = VerifyReport()
    top = 2 * p.c * t
    e = math.exp(-2 * p.lam * t)
    dens_p = TelegraphParams(p.c, p.lam * 1.01) if inject_fault else p

    ac = integrate(lambda x: sum_pdf_ac(dens_p, x, t), -top, top, abs_tol=1e-12, points=(0.0,)).value
    rep.add("normalization", abs(ac + math.fsum(a.mass for a in sum_atoms(p, t)) - 1), 1e-9)

    rep.add("cdf_upper_limit", abs(sum_cdf(p, top, t) - (1 - e / 4)), 1e-9)
    rep.add("cdf_lower_limit", abs(sum_cdf(p, -top * (1 - 1e-8), t) - e / 4), 1e-6)
    rep.add("cdf_jump_at_zero", abs(sum_cdf(p, 1e-300, t) - sum_cdf(p, 0.0, t) - e / 2), 1e-10)

    xs = np.linspace(-top, top, 27)[1:-1]
    xs = xs[np.abs(xs) > 0.01 * top]
    h = 1e-5 * top
    fd = (sum_cdf(p, xs + h, t) - sum_cdf(p, xs - h, t)) / (2 * h)
    rep.add("cdf_derivative", np.max(np.abs(fd / sum_pdf_ac(p, xs, t) - 1)), 1e-6)

    grid = np.linspace(-top, top, 201)[1:]
    rep.add("cdf_alt_form", np.max(np.abs(sum_cdf(p, grid, t) - sum_cdf_alt(p, grid, t))), 1e-10)
    inner = grid[:-1]
    rep.add("pdf_alt_form", np.max(np.abs(sum_pdf_ac(p, inner, t) / sum_pdf_ac_alt(p, inner, t) - 1)), 1e-12)

    law = sum_law(p, t)
    xis = np.array([0.1, 0.5, 0.9, 1.5, 3.0]) * p.lam / p.c
    rep.add("fourier_forward", np.max(np.abs(forward_transform(law, xis) - sum_charfn(p, xis, t))), 1e-7)

    cfg = InversionConfig(atoms=tuple((a.location, a.mass) for a in law.atoms), support=law.support)
    pts = np.array([-0.8, -0.45, -0.15, 0.25, 0.6, 0.85]) * top
    inv = invert_charfn(lambda xi: sum_charfn(p, xi, t), cfg, pts)
    rep.add("fourier_inversion", np.max(np.abs(inv - sum_pdf_ac(p, pts, t))), 1e-6)

    rep.add("lemma_a1", abs(lemma_a1(1.0, 1.0) - lemma_a1_quadrature(1.0, 1.0)), 1e-10)
    rep.add(
        "lemma_a2",
        max(abs(lemma_a2_transform(1.0, 1.0, xi) - lemma_a2_quadrature(1.0, 1.0, xi)) for xi in (0.3, 1.0, 2.0)),
        1e-8,
    )
    rep.add("lemma_a3", max(abs(np.subtract(*lemma_a3_check(1.0, 1.0, xi))) for xi in (0.5, 3.0)), 1e-7)
    x = 0.3
    a4 = lemma_a4_antiderivative(4, 2, x, 2.0) - lemma_a4_antiderivative(4, 2, x, 1.0)
    quad = integrate(lambda z: z ** 4 * hyp2f1_term(2, 0.5, 1.5, x * x / (z * z)), 1.0, 2.0).value
    rep.add("lemma_a4", abs(a4 / quad - 1), 1e-8)

    h = 1e-3 * min(t, 1 / p.lam)
    for tag, k in (("hyperbolic", 0.7), ("trigonometric", 3.0)):
        xi = k * p.lam / p.c
        rep.add(f"pde_order3_{tag}", pde_residual_order3(p, xi, t, h), 1e-5)
        rep.add(f"theorem2_{tag}", theorem2_residual(p, xi, t, h), 1e-5)
    return rep
