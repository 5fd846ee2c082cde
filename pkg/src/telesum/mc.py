"""Monte Carlo simulation of telegraph processes and their sums.

Paths are generated in fixed blocks of ``BLOCK`` paths.  Block ``b`` of
process ``j`` draws from ``Philox`` keyed by ``SeedSequence([seed, b, j])``,
so a path's draws depend only on the seed and its position, never on the
number of worker threads or their scheduling.

Stream contract, per block and process: first ``n`` uniforms choose the
initial directions (``u < 1/2`` means ``-1``), then waiting times are drawn
round by round for the paths still running, as ``-log1p(-u)/lam``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .telegraph import TelegraphParams

__all__ = [
    "BLOCK",
    "SimConfig",
    "PathSample",
    "PathSamples",
    "simulate_telegraph",
    "simulate_sum",
    "ks_distance",
    "atom_counts",
    "atom_z_scores",
]

BLOCK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    """Seed, number of paths, time horizon and worker count (``None`` = CPU count)."""

    seed: int
    n_paths: int
    t: float
    workers: int | None = None

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an integer in [0, 2^64)")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError("n_paths must be a positive integer")
        t = float(self.t)
        if not (t > 0 and math.isfinite(t)):
            raise DomainError("t must be positive and finite")
        object.__setattr__(self, "t", t)
        if self.workers is not None and self.workers < 1:
            raise DomainError("workers must be positive")


class PathSample(NamedTuple):
    position: float
    event_count: int


@dataclass(frozen=True)
class PathSamples:
    """Terminal positions and Poisson event counts, one row per path.

    ``events`` has one column per simulated process; a sum path sits on an
    atom exactly when all its counts are zero.
    """

    positions: np.ndarray
    events: np.ndarray

    def __len__(self):
        return self.positions.size

    def __iter__(self):
        totals = self.event_counts
        for x, k in zip(self.positions, totals):
            yield PathSample(float(x), int(k))

    def __getitem__(self, i):
        return PathSample(float(self.positions[i]), int(self.event_counts[i]))

    @property
    def event_counts(self):
        return self.events.sum(axis=1)

    @property
    def no_switch(self):
        return np.all(self.events == 0, axis=1)


def _rng(seed, block, stream):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block, stream])))


def _telegraph_block(p: TelegraphParams, t, rng, n):
    """Displacements from the start and event counts for ``n`` paths."""
    ct = p.c * t
    d0 = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    d = d0.copy()
    pos = np.zeros(n)
    elapsed = np.zeros(n)
    events = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    while idx.size:
        tau = -np.log1p(-rng.random(idx.size)) / p.lam
        nxt = elapsed[idx] + tau
        hit = nxt < t
        stop = idx[~hit]
        pos[stop] += p.c * d[stop] * (t - elapsed[stop])
        go = idx[hit]
        pos[go] += p.c * d[go] * tau[hit]
        elapsed[go] = nxt[hit]
        d[go] = -d[go]
        events[go] += 1
        idx = go
    none = events == 0
    # no switch: exactly +/- ct, not a sum of increments
    pos[none] = d0[none] * ct
    # at least one switch: strictly inside (-ct, ct)
    edge = ~none & (np.abs(pos) >= ct)
    pos[edge] = np.sign(pos[edge]) * np.nextafter(ct, 0.0)
    return pos, events


def _blocks(n_paths):
    starts = range(0, n_paths, BLOCK)
    return [(b, s, min(BLOCK, n_paths - s)) for b, s in enumerate(starts)]


def _run(cfg: SimConfig, work):
    blocks = _blocks(cfg.n_paths)
    workers = cfg.workers or min(len(blocks), os.cpu_count() or 1)
    if workers == 1 or len(blocks) == 1:
        return [work(*blk) for blk in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda blk: work(*blk), blocks))


def simulate_telegraph(p: TelegraphParams, cfg: SimConfig, x0=0.0):
    """Terminal positions of ``cfg.n_paths`` independent paths started at ``x0``."""

    def work(b, start, n):
        return _telegraph_block(p, cfg.t, _rng(cfg.seed, b, 0), n)

    parts = _run(cfg, work)
    disp = np.concatenate([q for q, _ in parts])
    events = np.concatenate([e for _, e in parts])[:, None]
    return PathSamples(x0 + disp, events)


def simulate_sum(params, cfg: SimConfig):
    """Terminal values of ``X1(t) + X2(t)`` from independent sub-streams.

    A path on which neither process switched lands exactly on the atom
    ``(x01 + x02) + (s1 c1 t + s2 c2 t)``, the same float expression used
    for the atom locations of the law.
    """
    from .sumdist import _as_sum_params

    sp = _as_sum_params(params)

    def work(b, start, n):
        d1, e1 = _telegraph_block(sp.p1, cfg.t, _rng(cfg.seed, b, 1), n)
        d2, e2 = _telegraph_block(sp.p2, cfg.t, _rng(cfg.seed, b, 2), n)
        return sp.start + (d1 + d2), np.stack([e1, e2], axis=1)

    parts = _run(cfg, work)
    return PathSamples(np.concatenate([q for q, _ in parts]), np.concatenate([e for _, e in parts]))


def _positions(samples):
    if isinstance(samples, PathSamples):
        return samples.positions
    arr = np.asarray([s.position if isinstance(s, PathSample) else s for s in samples], dtype=float)
    return arr


def ks_distance(samples, law, model_grid=None):
    """Sup distance between the empirical and model distribution functions.

    Both one-sided limits are compared at every distinct sample value and
    every atom location, which is where the supremum of two monotone
    right/left-continuous step-plus-continuous functions is attained.

    ``model_grid`` (an integer) evaluates the model's continuous part on
    that many support points and interpolates linearly; use it when the
    model CDF is expensive, e.g. obtained by numeric inversion.
    """
    s = np.sort(_positions(samples))
    n = s.size
    if n == 0:
        raise DomainError("need at least one sample")
    pts = np.union1d(s, [a.location for a in law.atoms])
    below = np.searchsorted(s, pts, side="left") / n
    upto = np.searchsorted(s, pts, side="right") / n

    if model_grid is None:
        left = np.asarray(law.cdf(pts), dtype=float)
    else:
        lo, hi = law.support
        grid = np.linspace(lo, hi, int(model_grid))
        ac = np.asarray(law._ac_cdf(grid), dtype=float)
        left = np.interp(pts, grid, ac) + law._atoms_below(pts, inclusive=False)
        left = np.where(pts > hi, 1.0, left)
    right = left + np.asarray(law.mass_at(pts), dtype=float)
    return float(max(np.max(np.abs(below - left)), np.max(np.abs(upto - right))))


def atom_counts(samples: PathSamples, atoms):
    """Number of samples exactly at each atom location."""
    pos = samples.positions
    return np.array([int(np.count_nonzero(pos == a.location)) for a in atoms])


def atom_z_scores(samples: PathSamples, atoms):
    """Binomial z-score ``(k/N - m) / sqrt(m (1-m) / N)`` for each atom."""
    n = len(samples)
    counts = atom_counts(samples, atoms)
    m = np.array([a.mass for a in atoms])
    return (counts / n - m) / np.sqrt(m * (1 - m) / n)
