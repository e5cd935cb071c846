"""Ant colony optimization for picking RBF centers, plus a k-means baseline.

The candidate vertices are the data points themselves.  Each ant walks a
k-vertex path guided only by pheromone (no visibility heuristic): the
probability of stepping from vertex i to an unvisited j is the share of
row i's pheromone sitting on j.  A solution's cost is the clustering
quantization error, the summed distance of every data point to its nearest
chosen vertex.  Trails evaporate by (1 - rho) and each ant deposits
rho * Q / cost on the edges it walked, so cheap solutions gain influence.

Ants within one iteration draw from independent seeded streams, making runs
bit-reproducible and the construction loop safe to parallelize.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import rbfn


class NoAdmissibleVertex(RuntimeError):
    """Every vertex is forbidden for the requested step."""


class ZeroCostSolution(Exception):
    """A constructed solution already has zero quantization error.

    Raised by the pheromone update to refuse dividing by a zero cost; the
    search loop treats the offending solution as optimal and stops first.
    """

    def __init__(self, solution):
        super().__init__("solution has zero cost")
        self.solution = solution


@dataclass(frozen=True)
class AcoConfig:
    ant_count: int = 20
    evaporation: float = 0.9
    deposit: float = 100.0
    max_iterations: int = 100
    centers_to_pick: int = 5
    initial_pheromone: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.evaporation < 1.0:
            raise ValueError("evaporation must lie in (0, 1)")
        if self.ant_count < 1 or self.max_iterations < 1 or self.centers_to_pick < 1:
            raise ValueError("ant_count, max_iterations and centers_to_pick must be >= 1")
        if self.deposit <= 0.0 or self.initial_pheromone <= 0.0:
            raise ValueError("deposit and initial_pheromone must be positive")


@dataclass(frozen=True)
class PheromoneState:
    """trails[i, j]: pheromone on the ordered edge i -> j; all entries > 0."""

    trails: np.ndarray
    iteration: int = 0


@dataclass(frozen=True)
class AntSolution:
    chosen_vertices: tuple
    cost: float


@dataclass(frozen=True)
class AcoResult:
    centers: np.ndarray
    best_cost: float
    iterations_used: int
    best_cost_history: tuple
    best_indices: tuple


@dataclass(frozen=True)
class KmeansResult:
    centers: np.ndarray
    cost: float
    iterations: int
    wcss_history: tuple


def init_pheromone(n_vertices: int, initial: float = 1.0) -> PheromoneState:
    if n_vertices < 1 or initial <= 0.0:
        raise ValueError("need at least one vertex and positive initial pheromone")
    return PheromoneState(np.full((n_vertices, n_vertices), float(initial)), iteration=0)


def _ant_rng(seed: int, iteration: int, ant: int) -> np.random.Generator:
    # independent stream per (seed, iteration, ant); mask keeps entropy nonnegative
    return np.random.default_rng([seed % 2**32, iteration, ant])


def select_next(state: PheromoneState, current_vertex: int, forbidden, rng) -> int:
    """Draw the next vertex with probability proportional to row pheromone.

    Forbidden vertices get zero probability; the admissible probabilities
    normalize to one by construction.
    """
    weights = state.trails[current_vertex].copy()
    if forbidden:
        weights[list(forbidden)] = 0.0
    total = weights.sum()
    if total <= 0.0:
        raise NoAdmissibleVertex(f"no admissible vertex from {current_vertex}")
    cum = np.cumsum(weights)
    j = int(np.searchsorted(cum, rng.random() * total, side="right"))
    return min(j, weights.shape[0] - 1)


def solution_cost(chosen_centers: np.ndarray, dataset: np.ndarray) -> float:
    """Quantization error: summed distance of every point to its nearest center."""
    centers = np.atleast_2d(np.asarray(chosen_centers, dtype=float))
    data = np.atleast_2d(np.asarray(dataset, dtype=float))
    d2 = np.sum((data[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    return float(np.sqrt(d2.min(axis=1)).sum())


def construct_solution(state: PheromoneState, candidates: np.ndarray, k: int, rng) -> AntSolution:
    """One ant's walk: uniform start, then k-1 pheromone-guided steps, no repeats."""
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    n = candidates.shape[0]
    if k > n:
        raise ValueError(f"cannot pick {k} distinct vertices from {n}")
    start = int(rng.integers(n))
    chosen = [start]
    forbidden = {start}
    for _ in range(k - 1):
        j = select_next(state, chosen[-1], forbidden, rng)
        chosen.append(j)
        forbidden.add(j)
    cost = solution_cost(candidates[chosen], candidates)
    return AntSolution(tuple(chosen), cost)


def update_pheromone(
    state: PheromoneState, solutions, evaporation: float, deposit: float
) -> PheromoneState:
    """Evaporate every edge, then reinforce the edges the ants walked.

    tau' = (1 - rho) tau + rho * delta, where delta on an edge sums
    Q / cost over the ants whose walk traversed it.
    """
    for sol in solutions:
        if sol.cost == 0.0:
            raise ZeroCostSolution(sol)
    delta = np.zeros_like(state.trails)
    for sol in solutions:
        inc = deposit / sol.cost
        path = sol.chosen_vertices
        for a, b in zip(path[:-1], path[1:]):
            delta[a, b] += inc
    trails = (1.0 - evaporation) * state.trails + evaporation * delta
    # evaporation alone never reaches zero, but keep strict positivity explicit
    np.maximum(trails, np.finfo(float).tiny, out=trails)
    return PheromoneState(trails, iteration=state.iteration + 1)


def run_aco_centers(dataset: np.ndarray, cfg: AcoConfig) -> AcoResult:
    """Full search loop returning the best-so-far vertex subset as centers.

    Terminates on the iteration cap, on colony convergence (every ant
    proposing the same vertex set in one iteration), or immediately when a
    zero-cost solution appears (it is optimal).
    """
    dataset = np.atleast_2d(np.asarray(dataset, dtype=float))
    n = dataset.shape[0]
    if n == 0:
        raise ValueError("dataset must be non-empty")
    k = cfg.centers_to_pick
    if k > n:
        raise ValueError(f"centers_to_pick {k} exceeds dataset size {n}")

    state = init_pheromone(n, cfg.initial_pheromone)
    best: AntSolution | None = None
    history = []
    iterations = 0
    for it in range(cfg.max_iterations):
        solutions = [
            construct_solution(state, dataset, k, _ant_rng(cfg.rng_seed, it, a))
            for a in range(cfg.ant_count)
        ]
        iterations = it + 1
        for sol in solutions:
            if best is None or sol.cost < best.cost:
                best = sol
        history.append(best.cost)
        if best.cost == 0.0:
            break
        if len({frozenset(s.chosen_vertices) for s in solutions}) == 1:
            break
        state = update_pheromone(state, solutions, cfg.evaporation, cfg.deposit)
    return AcoResult(
        centers=dataset[list(best.chosen_vertices)].copy(),
        best_cost=best.cost,
        iterations_used=iterations,
        best_cost_history=tuple(history),
        best_indices=best.chosen_vertices,
    )


def kmeans_centers(dataset: np.ndarray, k: int, max_iters: int = 100, rng_seed: int = 0) -> KmeansResult:
    """Lloyd iteration from seeded-uniform distinct initial centers.

    An empty cluster is re-seeded at the point farthest from its assigned
    center.  Stops on an assignment fixpoint or the iteration cap.  The
    returned cost uses the same quantization metric as the ant search so
    the two methods are directly comparable; ``wcss_history`` records the
    within-cluster sum of squares after each iteration, which is the
    quantity Lloyd provably never increases.
    """
    data = np.atleast_2d(np.asarray(dataset, dtype=float))
    n = data.shape[0]
    if k > n:
        raise ValueError(f"k {k} exceeds dataset size {n}")
    rng = np.random.default_rng(rng_seed % 2**32)
    centers = data[rng.choice(n, size=k, replace=False)].copy()

    prev_assign = None
    wcss_history = []
    iterations = 0
    for _ in range(max_iters):
        d2 = np.sum((data[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        assign = d2.argmin(axis=1)
        for c in range(k):
            if not np.any(assign == c):
                farthest = int(np.argmax(d2[np.arange(n), assign]))
                centers[c] = data[farthest]
                d2 = np.sum((data[:, None, :] - centers[None, :, :]) ** 2, axis=2)
                assign = d2.argmin(axis=1)
        iterations += 1
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            wcss_history.append(float(d2[np.arange(n), assign].sum()))
            break
        prev_assign = assign
        for c in range(k):
            centers[c] = data[assign == c].mean(axis=0)
        d2_new = np.sum((data[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        wcss_history.append(float(d2_new[np.arange(n), assign].sum()))
    return KmeansResult(
        centers=centers,
        cost=solution_cost(centers, data),
        iterations=iterations,
        wcss_history=tuple(wcss_history),
    )


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    aco_cost: float
    kmeans_cost: float
    aco_final_e: float
    kmeans_final_e: float
    aco_iters: int
    kmeans_iters: int


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple
    mean_e_aco: float
    mean_e_kmeans: float
    aco_nonloss_rate: float


def _fit_error(centers: np.ndarray, inputs: np.ndarray, targets: np.ndarray, train_cfg) -> tuple[float, rbfn.RbfNetwork]:
    widths = rbfn.widths_from_spread(centers)
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    net = rbfn.zero_weight_net(centers, widths, targets.shape[1])
    net, report = rbfn.train_lms(net, inputs, targets, train_cfg)
    return report.final_error, net

def compare_clustering(
    dataset: np.ndarray,
    k: int,
    aco_cfg: AcoConfig,
    n_seeds: int,
    targets: np.ndarray,
    train_cfg: rbfn.TrainConfig,
) -> ComparisonReport:
    """Head-to-head center selection: ant search vs k-means, over n_seeds runs.

    For each seed both methods pick k centers from the same dataset, a
    network with those centers (growth disabled) is weight-trained on the
    supplied regression targets with the same seed, and the final batch
    errors are recorded.  Ties count as a non-loss for the ant search.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    rows = []
    for i in range(n_seeds):
        seed = aco_cfg.rng_seed + i
        aco_res = run_aco_centers(dataset, replace(aco_cfg, rng_seed=seed, centers_to_pick=k))
        km_res = kmeans_centers(dataset, k, rng_seed=seed)
        cfg_i = replace(train_cfg, rng_seed=seed, max_hidden=k)
        aco_e, _ = _fit_error(aco_res.centers, dataset, targets, cfg_i)
        km_e, _ = _fit_error(km_res.centers, dataset, targets, cfg_i)
        rows.append(
            ComparisonRow(
                seed=seed,
                aco_cost=aco_res.best_cost,
                kmeans_cost=km_res.cost,
                aco_final_e=aco_e,
                kmeans_final_e=km_e,
                aco_iters=aco_res.iterations_used,
                kmeans_iters=km_res.iterations,
            )
        )
    mean_aco = float(np.mean([r.aco_final_e for r in rows]))
    mean_km = float(np.mean([r.kmeans_final_e for r in rows]))
    nonloss = float(np.mean([1.0 if r.aco_final_e <= r.kmeans_final_e else 0.0 for r in rows]))
    return ComparisonReport(tuple(rows), mean_aco, mean_km, nonloss)


def comparison_csv(report: ComparisonReport) -> str:
    """CSV text for a comparison report; ties count as ACO non-loss."""
    lines = ["seed,aco_cost,kmeans_cost,aco_final_E,kmeans_final_E,aco_iters,kmeans_iters"]
    for r in report.rows:
        lines.append(
            f"{r.seed},{r.aco_cost:.17g},{r.kmeans_cost:.17g},"
            f"{r.aco_final_e:.17g},{r.kmeans_final_e:.17g},{r.aco_iters},{r.kmeans_iters}"
        )
    return "\n".join(lines) + "\n"


_BLOB_LAYOUT = np.array(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]]
)


def make_blob_benchmark(
    n_points: int = 300,
    n_blobs: int = 5,
    blob_sigma: float = 0.5,
    separation: float = 8.0,
    rng_seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Isotropic Gaussian blobs in 3-D with a smooth sum-of-sines target.

    Blob centers sit on a fixed unit layout scaled by ``separation`` (the
    minimum pairwise gap), so clusters are well separated relative to
    ``blob_sigma``.  Returns (points (n, 3), targets (n, 1)) with
    y = sin x1 + sin x2 + sin x3.
    """
    if n_blobs > _BLOB_LAYOUT.shape[0]:
        raise ValueError(f"at most {_BLOB_LAYOUT.shape[0]} blobs supported")
    rng = np.random.default_rng(rng_seed % 2**32)
    sizes = [n_points // n_blobs] * n_blobs
    for i in range(n_points % n_blobs):
        sizes[i] += 1
    points = []
    for b in range(n_blobs):
        mu = _BLOB_LAYOUT[b] * separation
        points.append(mu + blob_sigma * rng.standard_normal((sizes[b], 3)))
    pts = np.vstack(points)
    targets = np.sin(pts).sum(axis=1, keepdims=True)
    return pts, targets
