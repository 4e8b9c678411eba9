"""Loss tolerance of photonic tree cluster states.

Layer 0 is the root (the encoded qubit); a qubit in layer ``k`` has
``branching[k]`` children in layer ``k + 1``, and the leaves sit in layer
``d = len(branching)``.  Leaves have no children, so indirect Z measurement
on a leaf always fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class TreeParams:
    branching: tuple[int, ...]

    def __post_init__(self):
        br = tuple(self.branching)
        if len(br) < 2:
            raise ParameterError(f"tree depth must be >= 2, got branching {br!r}")
        for n in br:
            if int(n) != n or n < 1:
                raise ParameterError(f"branching entries must be integers >= 1, got {br!r}")
        object.__setattr__(self, "branching", tuple(int(n) for n in br))

    @classmethod
    def parse(cls, text: str) -> "TreeParams":
        """Parse ``"4-4-4"`` (or ``"4,4,4"``)."""
        parts = text.replace(",", "-").split("-")
        try:
            return cls(tuple(int(p) for p in parts if p.strip()))
        except ValueError as exc:
            raise ParameterError(f"cannot parse branching {text!r}") from exc

    @property
    def depth(self) -> int:
        return len(self.branching)

    def layer_sizes(self) -> list[int]:
        """Qubit count in layers 1..d."""
        sizes, count = [], 1
        for n in self.branching:
            count *= n
            sizes.append(count)
        return sizes

    @property
    def photon_count(self) -> int:
        return sum(self.layer_sizes())

    def label(self) -> str:
        return "-".join(str(n) for n in self.branching)


def _check_mu(mu: float) -> None:
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"loss probability mu must lie in [0, 1], got {mu!r}")


def indirect_z_success(tree: TreeParams, mu: float) -> list[float]:
    """Indirect-Z success probabilities ``[R_1, ..., R_d]`` at loss ``mu``.

    Backward recursion with ``R_{d+1} = 0`` and ``n_d = n_{d+1} = 0``::

        R_k = 1 - [1 - (1 - mu) (1 - mu + mu R_{k+2})^{n_{k+1}}]^{n_k}
    """
    _check_mu(mu)
    d = tree.depth
    n = list(tree.branching) + [0, 0]  # n_d = n_{d+1} = 0
    R = [0.0] * (d + 3)  # R[d+1], R[d+2] stay 0
    for k in range(d, 0, -1):
        child_ok = (1.0 - mu) * (1.0 - mu + mu * R[k + 2]) ** n[k + 1]
        R[k] = 1.0 - (1.0 - child_ok) ** n[k]
        assert 0.0 <= R[k] <= 1.0, (k, R[k])
    return R[1:d + 1]


def transmission_probability(tree: TreeParams, mu: float) -> float:
    """Probability the tree-encoded qubit survives one hop with photon loss ``mu``."""
    R = indirect_z_success(tree, mu)
    n0, n1 = tree.branching[0], tree.branching[1]
    r1, r2 = R[0], R[1]
    recoverable = 1.0 - mu + mu * r1
    all_indirect = mu * r1
    assert recoverable >= all_indirect
    bracket = recoverable ** n0 - all_indirect ** n0
    assert bracket >= 0.0, bracket
    return bracket * (1.0 - mu + mu * r2) ** n1


def transmission_batch(branchings: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Array form of :func:`transmission_probability`.

    ``branchings`` is an integer array of shape ``(trees, d)`` (all trees share
    depth ``d``) and ``mu`` a 1-D array of loss probabilities; returns shape
    ``(trees, len(mu))``.
    """
    br = np.asarray(branchings, dtype=np.int64)
    if br.ndim != 2 or br.shape[1] < 2:
        raise ParameterError("branchings must have shape (trees, d) with d >= 2")
    mu = np.asarray(mu, dtype=float)[None, :]
    keep = 1.0 - mu
    d = br.shape[1]
    zeros = np.zeros((br.shape[0], mu.shape[1]))
    R = {d: zeros, d + 1: zeros, d + 2: zeros}

    def n(k):
        return br[:, k:k + 1] if k < d else 0

    for k in range(d - 1, 0, -1):
        child_ok = keep * np.power(keep + mu * R[k + 2], n(k + 1))
        R[k] = 1.0 - np.power(1.0 - child_ok, n(k))
    bracket = np.power(keep + mu * R[1], n(0)) - np.power(mu * R[1], n(0))
    return bracket * np.power(keep + mu * R[2], n(1))


def total_photons(branching: Sequence[int]) -> int:
    return sum(math.prod(branching[:l + 1]) for l in range(len(branching)))
