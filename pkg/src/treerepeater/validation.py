"""Analytic-versus-Monte-Carlo comparison of the tree transmission probability."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ParameterError
from .mc import McConfig, mc_transmission
from .tree import TreeParams, transmission_probability

N_SIGMA = 4.0
DEFAULT_MUS = (0.05, 0.1, 0.3, 0.5)


def default_trees() -> list[TreeParams]:
    """Depth 2 and 3 trees with every branching entry in {2, 3, 4}."""
    out = []
    for d in (2, 3):
        out.extend(TreeParams(br) for br in itertools.product((2, 3, 4), repeat=d))
    return out


@dataclass(frozen=True)
class Cell:
    tree: TreeParams
    mu: float
    analytic: float
    estimate: float
    stderr: float       # from the sampled frequency
    null_stderr: float  # binomial error if the analytic value were exact

    @property
    def sigma(self) -> float:
        # the sampled error vanishes when every sample agrees, e.g. eta_t ~ 1 - 1e-5
        return max(self.stderr, self.null_stderr)

    @property
    def deviation(self) -> float:
        return abs(self.estimate - self.analytic)

    @property
    def passed(self) -> bool:
        return self.deviation <= N_SIGMA * self.sigma


def compare(trees, mus, cfg: McConfig, max_photons: int = 10_000, corrupt: float = 0.0) -> list[Cell]:
    """One cell per (tree, mu).  ``corrupt`` shifts the analytic value to exercise the failure path."""
    for tree in trees:
        if tree.photon_count > max_photons:
            raise ParameterError(
                f"tree {tree.label()} has {tree.photon_count} photons, above the limit of {max_photons}; "
                "use smaller branching or raise --max-photons")
    cells = []
    for tree in trees:
        for mu in mus:
            analytic = transmission_probability(tree, mu) + corrupt
            est = mc_transmission(tree, mu, cfg)
            p0 = min(max(analytic, 0.0), 1.0)
            null = (p0 * (1.0 - p0) / cfg.samples) ** 0.5
            cells.append(Cell(tree, mu, analytic, est.estimate, est.stderr, null))
    return cells
