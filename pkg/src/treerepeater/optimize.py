"""Exhaustive search for the tree, node count and multiplexing that maximise the key rate.

The search space is every branching vector with ``2 <= d <= d_max`` and
``1 <= n_i <= n_max``, every node count whose spacing respects the minimum,
and the multiplexed scheme or any m-round variant with ``m | n_(d-2)``.
Nothing is sampled; two exact pruning rules keep it fast:

(a) a (tree, scheme) pair is dropped when its emitter count exceeds the budget;
(b) for each tree all admissible node counts are scored, but trees are visited
    in decreasing order of a certified upper bound on their best rate and the
    scan stops once the bound falls below the incumbent.

The bound for one tree covers a bin of consecutive node counts ``N_a..N_b``::

    max_bin(f) * eta_t(min_bin(mu)) ** (N_a + 1)

which is valid because the key fraction is bounded by its bin maximum,
``eta_t`` is non-increasing in the loss ``mu`` (both of its factors are
probabilities of events monotone in photon arrival), and ``eta_t <= 1``.

Vectorised scores only rank candidates.  Every configuration within a
relative ``1e-9`` of the best vectorised score is re-scored with
:func:`treerepeater.rate.evaluate` and the winner is chosen from those
results with the tie-break (higher rate, fewer emitters, fewer photons,
lexicographically smaller branching, multiplexed before rounds and smaller m,
fewer nodes).  The reported rate is therefore exactly what ``evaluate``
returns for the reported configuration.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import L_ATT_KM, ChannelParams, EfficiencyParams, single_photon_loss
from .errors import ParameterError
from .qkd import key_fraction, qber_from_error
from .rate import RateResult, RepeaterConfig, evaluate
from .timing import MULTIPLEXED, GateTimes, Scheme
from .tree import TreeParams, total_photons, transmission_batch

REL_TOL = 1e-9
N_BINS = 48
CHUNK_TREES = 512
WAVE_TREES = 2048


@dataclass(frozen=True)
class OptimizationProblem:
    total_distance_km: float
    emitter_budget: int
    eps_r: float = 1e-5
    min_spacing_km: float = 1.0
    d_max: int = 5
    n_max: int = 24
    n_node_max: int | None = None  # default: largest count with spacing >= min_spacing_km
    allow_rounds: bool = True
    gates: GateTimes = field(default_factory=GateTimes)
    efficiencies: EfficiencyParams = field(default_factory=EfficiencyParams)
    l_att_km: float = L_ATT_KM

    def __post_init__(self):
        if not self.total_distance_km > 0:
            raise ParameterError("total_distance_km must be positive")
        if not self.min_spacing_km > 0:
            raise ParameterError("min_spacing_km must be positive")
        if self.emitter_budget < 1:
            raise ParameterError("emitter_budget must be >= 1")
        if self.d_max < 2 or self.n_max < 1:
            raise ParameterError("search bounds are empty: need d_max >= 2 and n_max >= 1")
        if self.n_node_max is not None and self.n_node_max < 0:
            raise ParameterError("n_node_max must be >= 0")
        if not 0.0 <= self.eps_r <= 1.0:
            raise ParameterError("eps_r must lie in [0, 1]")

    def node_counts(self) -> list[int]:
        """Admissible node counts: spacing bound, explicit cap, and ``(N + 1) eps_r <= 1``."""
        top = int(self.total_distance_km // self.min_spacing_km) + 1
        if self.n_node_max is not None:
            top = min(top, self.n_node_max)
        out = []
        for n in range(top + 1):
            if self.total_distance_km / (n + 1) < self.min_spacing_km:
                continue
            if (n + 1) * self.eps_r > 1.0:
                break
            out.append(n)
        return out

    def resolved_n_node_max(self) -> int:
        counts = self.node_counts()
        return counts[-1] if counts else -1

    def config(self, tree: TreeParams, scheme: Scheme, n_node: int) -> RepeaterConfig:
        return RepeaterConfig(
            tree=tree,
            channel=ChannelParams(self.total_distance_km, n_node, self.l_att_km),
            efficiencies=self.efficiencies,
            gates=self.gates,
            scheme=scheme,
            eps_r=self.eps_r,
        )


@dataclass
class OptimizationOutcome:
    problem: OptimizationProblem
    best_config: RepeaterConfig | None
    best: RateResult | None
    explored: int  # exact (tree, node count) scores computed for this problem
    feasible_trees: int = 0
    pruned_trees: int = 0
    frontier: list[tuple[float, float]] | None = None

    @property
    def feasible(self) -> bool:
        return self.best is not None

    @property
    def rate_hz(self) -> float:
        return self.best.rate_hz if self.best is not None else 0.0


def config_key(config: RepeaterConfig, result: RateResult) -> tuple:
    """Total order used to pick the winner (smallest key wins)."""
    return (
        -result.rate_hz,
        result.emitters,
        config.tree.photon_count,
        config.tree.branching,
        config.scheme.sort_key,
        config.channel.n_node,
    )


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _trees_of_depth(d: int, n_max: int, prefix_limit: int) -> np.ndarray:
    """All depth-``d`` branchings whose leading ``d - 2`` entries multiply to <= prefix_limit."""
    prefixes = [p for p in itertools.product(range(1, n_max + 1), repeat=d - 2)
                if math.prod(p) <= prefix_limit]
    if not prefixes:
        return np.zeros((0, d), dtype=np.int64)
    tail = np.array(list(itertools.product(range(1, n_max + 1), repeat=2)), dtype=np.int64)
    pre = np.array(prefixes, dtype=np.int64).reshape(len(prefixes), d - 2)
    out = np.concatenate([np.repeat(pre, len(tail), axis=0), np.tile(tail, (len(pre), 1))], axis=1)
    return out


class _Landscape:
    """Budget- and gate-independent part of the search for one physical setting.

    Holds the admissible node counts with their loss and key fraction, the
    candidate trees, and lazily computed per-tree bounds and exact best scores
    ``g = max_N f_N * eta_t(mu_N) ** (N + 1)``.  Re-used across budgets and
    gate-time sets in sweeps.
    """

    def __init__(self, problem: OptimizationProblem, max_budget: int, workers: int = 1):
        self.problem = problem
        self.workers = workers
        self.n_all = problem.node_counts()
        mu, f = [], []
        for n in self.n_all:
            mu.append(single_photon_loss(problem.total_distance_km / (n + 1), problem.l_att_km,
                                         problem.efficiencies))
            f.append(key_fraction(qber_from_error((n + 1) * problem.eps_r)))
        pos = [i for i, x in enumerate(f) if x > 0.0]
        self.n_pos = np.array([self.n_all[i] for i in pos], dtype=np.int64)
        self.mu_pos = np.array([mu[i] for i in pos], dtype=float)
        self.f_pos = np.array([f[i] for i in pos], dtype=float)
        self.trees = {d: _trees_of_depth(d, problem.n_max, max_budget // 2)
                      for d in range(2, problem.d_max + 1)}
        self._bound: dict[int, np.ndarray] = {}
        self._g: dict[int, np.ndarray] = {}
        k = len(self.n_pos)
        if k:
            width = -(-k // N_BINS)
            starts = np.arange(0, k, width)
            self._bin_f = np.maximum.reduceat(self.f_pos, starts)
            self._bin_mu = np.minimum.reduceat(self.mu_pos, starts)
            self._bin_exp = self.n_pos[starts] + 1

    @property
    def has_positive(self) -> bool:
        return len(self.n_pos) > 0

    def _chunks(self, d, idx):
        return [(d, idx[s:s + CHUNK_TREES]) for s in range(0, len(idx), CHUNK_TREES)]

    def bound(self, d: int) -> np.ndarray:
        if d not in self._bound:
            br = self.trees[d]

            def work(job):
                _, idx = job
                eta = transmission_batch(br[idx], self._bin_mu)
                return (self._bin_f * np.power(eta, self._bin_exp)).max(axis=1)

            parts = _pmap(work, self._chunks(d, np.arange(len(br))), self.workers)
            self._bound[d] = np.concatenate(parts) if parts else np.zeros(0)
        return self._bound[d]

    def scores(self, br: np.ndarray) -> np.ndarray:
        """``f_N * eta_t ** (N + 1)`` for each tree row and positive-key node count."""
        eta = transmission_batch(br, self.mu_pos)
        return self.f_pos * np.power(eta, self.n_pos + 1)

    def exact(self, jobs: list[tuple[int, np.ndarray]]) -> None:
        """Fill the best-score cache for the listed (depth, tree indices)."""
        for d, _ in jobs:
            if d not in self._g:
                self._g[d] = np.full(len(self.trees[d]), np.nan)
        todo = []
        for d, idx in jobs:
            missing = idx[np.isnan(self._g[d][idx])]
            todo.extend(self._chunks(d, missing))

        def work(job):
            d, idx = job
            return self.scores(self.trees[d][idx]).max(axis=1)

        for (d, idx), g in zip(todo, _pmap(work, todo, self.workers)):
            self._g[d][idx] = g

    def g(self, d: int, idx: np.ndarray) -> np.ndarray:
        return self._g[d][idx]


@dataclass
class _SchemeTable:
    """Per-tree feasible schemes for one budget and gate set (vectorised over trees)."""

    t_min: np.ndarray
    feasible: np.ndarray
    options: list[tuple[int, np.ndarray, np.ndarray, np.ndarray]]  # (m, valid, emitters, t_ns); m=0 multiplexed


def _scheme_table(br: np.ndarray, budget: int, gates: GateTimes, allow_rounds: bool, n_max: int) -> _SchemeTable:
    count, d = br.shape
    prefix = np.prod(br[:, :d - 2], axis=1) if d > 2 else np.ones(count, dtype=np.int64)
    pen, last = br[:, d - 2], br[:, d - 1]
    upper = np.zeros(count)
    for i in range(d - 2):
        upper = upper + (br[:, i] * gates.t_cz + gates.t_e)
    options = []
    em = prefix * (pen + 1)
    t_mux = last * gates.t_p + (upper + (pen * gates.t_cz + gates.t_e))
    options.append((0, em <= budget, em, t_mux))
    if allow_rounds:
        for m in range(1, n_max + 1):
            valid = pen % m == 0
            per = pen // m
            em = prefix * (per + 1)
            t = m * (last * gates.t_p + per * gates.t_cz + gates.t_e) + upper
            options.append((m, valid & (em <= budget), em, t))
    t_min = np.full(count, np.inf)
    for _, ok, _, t in options:
        t_min = np.where(ok, np.minimum(t_min, t), t_min)
    return _SchemeTable(t_min=t_min, feasible=np.isfinite(t_min), options=options)


def _scheme(m: int) -> Scheme:
    return MULTIPLEXED if m == 0 else Scheme.rounds(m)


def _solve(land: _Landscape, budget: int, gates: GateTimes, allow_rounds: bool) -> OptimizationOutcome:
    problem = land.problem
    prob = replace(problem, emitter_budget=budget, gates=gates, allow_rounds=allow_rounds)
    tables = {d: _scheme_table(br, budget, gates, allow_rounds, problem.n_max) for d, br in land.trees.items()}
    feasible_trees = int(sum(t.feasible.sum() for t in tables.values()))
    if feasible_trees == 0 or not land.n_all:
        return OptimizationOutcome(prob, None, None, explored=0, feasible_trees=feasible_trees)

    if not land.has_positive:
        return _zero_rate_winner(land, prob, tables, feasible_trees)

    # rank every feasible tree by its certified rate bound
    depth_of, index_of, ub = [], [], []
    for d, table in tables.items():
        idx = np.flatnonzero(table.feasible)
        bound = land.bound(d)[idx] / table.t_min[idx]
        depth_of.append(np.full(len(idx), d))
        index_of.append(idx)
        ub.append(bound)
    depth_of = np.concatenate(depth_of)
    index_of = np.concatenate(index_of)
    ub = np.concatenate(ub)
    order = np.argsort(-ub, kind="stable")

    best = 0.0
    visited = 0
    explored = 0
    while visited < len(order):
        if ub[order[visited]] < best * (1.0 - REL_TOL) or ub[order[visited]] == 0.0:
            break
        wave = order[visited:visited + WAVE_TREES]
        visited += len(wave)
        jobs = []
        for d in np.unique(depth_of[wave]):
            sel = wave[depth_of[wave] == d]
            jobs.append((int(d), np.sort(index_of[sel])))
        land.exact(jobs)
        for d, idx in jobs:
            rates = land.g(d, idx) / tables[d].t_min[idx] * 1e9
            best = max(best, float(rates.max()))
            explored += len(idx) * len(land.n_pos)
    if best == 0.0:
        return _zero_rate_winner(land, prob, tables, feasible_trees, explored)

    # re-score every near-best (tree, scheme, node count) with the scalar path
    threshold = best * (1.0 - REL_TOL)
    winner = None
    evaluated = order[:visited]
    for d in np.unique(depth_of[evaluated]):
        d = int(d)
        idx = np.sort(index_of[evaluated[depth_of[evaluated] == d]])
        close = idx[land.g(d, idx) / tables[d].t_min[idx] * 1e9 >= threshold]
        for i in close:
            row = land.trees[d][i]
            scores = land.scores(row[None, :])[0]
            tree = TreeParams(tuple(int(x) for x in row))
            for m, ok, _, t in tables[d].options:
                if not ok[i]:
                    continue
                for j in np.flatnonzero(scores / t[i] * 1e9 >= threshold):
                    config = prob.config(tree, _scheme(m), int(land.n_pos[j]))
                    result = evaluate(config)
                    explored += 1
                    key = config_key(config, result)
                    if winner is None or key < winner[0]:
                        winner = (key, config, result)
    _, config, result = winner
    return OptimizationOutcome(prob, config, result, explored=explored, feasible_trees=feasible_trees,
                               pruned_trees=feasible_trees - visited)


def _zero_rate_winner(land, prob, tables, feasible_trees, explored=0) -> OptimizationOutcome:
    """Every configuration scores zero: pick by the tie-break alone."""
    winner = None
    for d, table in tables.items():
        br = land.trees[d]
        for m, ok, em, _ in table.options:
            idx = np.flatnonzero(ok)
            if not len(idx):
                continue
            # fewest emitters, then fewest photons, then lexicographic branching
            photons = np.zeros(len(idx), dtype=np.int64)
            acc = np.ones(len(idx), dtype=np.int64)
            for k in range(d):
                acc = acc * br[idx, k]
                photons = photons + acc
            cols = [br[idx, k] for k in range(d - 1, -1, -1)]
            first = idx[np.lexsort(cols + [photons, em[idx]])[0]]
            tree = TreeParams(tuple(int(x) for x in br[first]))
            scheme = _scheme(m)
            key = (int(em[first]), total_photons(tree.branching), tree.branching, scheme.sort_key)
            if winner is None or key < winner[0]:
                winner = (key, tree, scheme)
    _, tree, scheme = winner
    config = prob.config(tree, scheme, land.n_all[0])
    result = evaluate(config)
    return OptimizationOutcome(prob, config, result, explored=explored + 1, feasible_trees=feasible_trees,
                               pruned_trees=feasible_trees)


def optimize(problem: OptimizationProblem, workers: int = 1) -> OptimizationOutcome:
    """Best configuration for ``problem``; deterministic and independent of ``workers``."""
    land = _Landscape(problem, problem.emitter_budget, workers)
    return _solve(land, problem.emitter_budget, problem.gates, problem.allow_rounds)


def sweep_emitters(total_distance_km: float, budgets: list[int], eps_r: float = 1e-5,
                   workers: int = 1, **defaults) -> list[tuple[int, OptimizationOutcome]]:
    """Best rate per emitter budget at fixed distance (one shared landscape)."""
    if not budgets:
        raise ParameterError("budgets must be non-empty")
    problem = OptimizationProblem(total_distance_km, max(budgets), eps_r, **defaults)
    land = _Landscape(problem, max(budgets), workers)
    rows = []
    for budget in budgets:
        rows.append((budget, _solve(land, budget, problem.gates, problem.allow_rounds)))
    frontier = [(float(b), o.rate_hz) for b, o in rows]
    for _, outcome in rows:
        outcome.frontier = frontier
    return rows


@dataclass(frozen=True)
class DistanceRow:
    distance_km: float
    eps_r: float
    gates: GateTimes
    outcome: OptimizationOutcome


def sweep_distance(distances: list[float], budget: int, eps_r_list: list[float],
                   gate_sets: list[GateTimes] | None = None, workers: int = 1,
                   **defaults) -> list[DistanceRow]:
    """Cartesian sweep; rows ordered by gate set, then eps_r, then distance."""
    if not distances or not eps_r_list:
        raise ParameterError("distances and eps_r_list must be non-empty")
    gate_sets = gate_sets or [GateTimes()]
    defaults = {k: v for k, v in defaults.items() if k != "gates"}
    results: dict[tuple[int, int, int], OptimizationOutcome] = {}
    for ei, eps_r in enumerate(eps_r_list):
        for di, distance in enumerate(distances):
            problem = OptimizationProblem(distance, budget, eps_r, **defaults)
            land = _Landscape(problem, budget, workers)
            for gi, gates in enumerate(gate_sets):
                results[gi, ei, di] = _solve(land, budget, gates, problem.allow_rounds)
    rows = []
    for gi, gates in enumerate(gate_sets):
        for ei, eps_r in enumerate(eps_r_list):
            outcomes = [results[gi, ei, di] for di in range(len(distances))]
            frontier = [(float(d), o.rate_hz) for d, o in zip(distances, outcomes)]
            for distance, outcome in zip(distances, outcomes):
                outcome.frontier = frontier
                rows.append(DistanceRow(distance, eps_r, gates, outcome))
    return rows
