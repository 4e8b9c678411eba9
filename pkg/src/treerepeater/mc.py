"""Brute-force Monte-Carlo estimates of tree loss tolerance.

Every photon of the tree is lost independently with probability ``mu``; the
decoding predicates are evaluated layer by layer on the sampled loss pattern.
This module shares no code with :mod:`treerepeater.tree` and serves as an
independent check of the closed-form recursion.

Random numbers come from numpy's PCG64 bit generator.  Samples are split into
fixed-size chunks; chunk ``i`` draws from the ``i``-th child of
``SeedSequence(seed)``, so a result depends only on ``(seed, samples)`` and
not on how many workers process the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .tree import TreeParams

CHUNK_SAMPLES = 8192


@dataclass(frozen=True)
class McConfig:
    samples: int = 100_000
    seed: int = 20240601
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ParameterError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    successes: int
    samples: int

    @property
    def estimate(self) -> float:
        return self.successes / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.samples)


class _Subtree:
    """Explicit layered layout of a (sub)tree rooted at one qubit.

    ``branching[j]`` is the number of children of each qubit ``j`` levels below
    the root.  Qubits of level ``j + 1`` are stored so that the children of
    level-``j`` qubit ``i`` occupy slots ``i*b .. i*b + b - 1``.
    """

    def __init__(self, branching: tuple[int, ...]):
        self.branching = branching
        self.level_sizes = []
        count = 1
        for b in branching:
            count *= b
            self.level_sizes.append(count)
        self.photons = sum(self.level_sizes)
        self.offsets = np.cumsum([0] + self.level_sizes)

    def split(self, lost: np.ndarray) -> list[np.ndarray]:
        """Cut a ``(samples, photons)`` loss matrix into per-level presence arrays."""
        present = ~lost
        return [present[:, self.offsets[j]:self.offsets[j + 1]] for j in range(len(self.level_sizes))]

    def z_recoverable(self, present: list[np.ndarray]) -> list[np.ndarray]:
        """Per level, whether each qubit's Z value is known (measured or inferred).

        A qubit's Z value is inferred iff some child is present and every child
        of that child has a recoverable Z value.
        """
        levels = len(present)
        zrec: list[np.ndarray | None] = [None] * levels
        for j in range(levels - 1, -1, -1):
            zrec[j] = present[j] | self._indirect(present, zrec, j)
        return zrec

    def _indirect(self, present, zrec, j) -> np.ndarray:
        # indirect Z on a level-j qubit uses its children at level j+1
        samples, count = present[j].shape
        if j + 1 >= len(present):
            return np.zeros((samples, count), dtype=bool)
        b = self.branching[j + 1]
        kids_present = present[j + 1].reshape(samples, count, b)
        if j + 2 < len(present):
            b2 = self.branching[j + 2]
            grandkids_ok = zrec[j + 2].reshape(samples, count, b, b2).all(axis=3)
        else:
            grandkids_ok = np.ones_like(kids_present)
        return (kids_present & grandkids_ok).any(axis=2)

    def root_indirect(self, present: list[np.ndarray], zrec: list[np.ndarray]) -> np.ndarray:
        samples = present[0].shape[0]
        if len(present) > 1:
            grandkids_ok = zrec[1].reshape(samples, self.branching[0], self.branching[1]).all(axis=2)
        else:
            grandkids_ok = np.ones_like(present[0])
        return (present[0] & grandkids_ok).any(axis=1)


def _run_chunks(count_fn, photons: int, mu: float, cfg: McConfig) -> McEstimate:
    n_chunks = -(-cfg.samples // CHUNK_SAMPLES)
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    sizes = [CHUNK_SAMPLES] * (n_chunks - 1) + [cfg.samples - CHUNK_SAMPLES * (n_chunks - 1)]

    def work(i):
        rng = np.random.Generator(np.random.PCG64(seeds[i]))
        lost = rng.random((sizes[i], photons)) < mu
        return int(np.count_nonzero(count_fn(lost)))

    if cfg.workers == 1:
        counts = [work(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            counts = list(pool.map(work, range(n_chunks)))
    return McEstimate(successes=sum(counts), samples=cfg.samples)


def _check(mu):
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"mu must lie in [0, 1], got {mu!r}")


def mc_indirect_z(tree: TreeParams, mu: float, layer: int, cfg: McConfig = McConfig()) -> McEstimate:
    """Sampled success frequency of an indirect Z measurement on a layer-``layer`` qubit."""
    _check(mu)
    d = tree.depth
    if not 1 <= layer <= d:
        raise ParameterError(f"layer must lie in [1, {d}], got {layer}")
    below = tree.branching[layer:]
    if not below:  # leaves have no children to measure
        return McEstimate(successes=0, samples=cfg.samples)
    sub = _Subtree(below)

    def success(lost):
        present = sub.split(lost)
        zrec = sub.z_recoverable(present)
        return sub.root_indirect(present, zrec)

    return _run_chunks(success, sub.photons, mu, cfg)


def mc_transmission(tree: TreeParams, mu: float, cfg: McConfig = McConfig()) -> McEstimate:
    """Sampled probability that the encoded root qubit survives one hop.

    Success predicate per sample: some layer-1 photon arrives; the first
    arriving layer-1 photon (lowest index) is the one measured in X and all of
    its children must have recoverable Z values; every layer-1 qubit must have
    a recoverable Z value.  Fixing the measured photon this way reproduces the
    product form of the analytic transmission probability; a decoder free to
    pick any arriving layer-1 photon would do slightly better.
    """
    _check(mu)
    sub = _Subtree(tree.branching)
    n0, n1 = tree.branching[0], tree.branching[1]

    def success(lost):
        present = sub.split(lost)
        zrec = sub.z_recoverable(present)
        samples = lost.shape[0]
        layer1_present = present[0]
        any_present = layer1_present.any(axis=1)
        chosen = np.argmax(layer1_present, axis=1)
        kids_ok = zrec[1].reshape(samples, n0, n1).all(axis=2)
        chosen_ok = kids_ok[np.arange(samples), chosen]
        return any_present & zrec[0].all(axis=1) & chosen_ok

    return _run_chunks(success, sub.photons, mu, cfg)
