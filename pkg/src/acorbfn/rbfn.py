"""Gaussian radial basis function network with online weight training.

Hidden units respond to the distance between the input and their centers;
the output layer is linear in the unit activations.  Centers and widths are
set by an external clustering stage (see :mod:`acorbfn.aco`); only the
output weights are trained here, per sample, by least-mean-square descent.
When the batch error stays above target the hidden layer grows by one unit
placed at the worst-fit training sample.

Networks are immutable values: every training operation returns a new
network, which keeps batch evaluation trivially parallel and makes runs
reproducible by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatch(ValueError):
    """Input, center or target dimensions disagree with the network."""


class DegenerateCenters(ValueError):
    """All centers coincide, so no spread-based width can be derived."""


class CapReached(RuntimeError):
    """Hidden layer already at its configured maximum size."""


@dataclass(frozen=True)
class RbfNetwork:
    """centers: (hidden, in_dim); widths: (hidden,); weights: (out_dim, hidden)."""

    centers: np.ndarray
    widths: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        widths = np.asarray(self.widths, dtype=float).reshape(-1)
        weights = np.atleast_2d(np.asarray(self.weights, dtype=float))
        if not (centers.shape[0] == widths.shape[0] == weights.shape[1]):
            raise DimensionMismatch(
                f"hidden counts disagree: {centers.shape[0]} centers, "
                f"{widths.shape[0]} widths, {weights.shape[1]} weight columns"
            )
        if np.any(widths <= 0.0):
            raise DimensionMismatch("every width must be strictly positive")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "weights", weights)

    @property
    def input_dim(self) -> int:
        return self.centers.shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def hidden_count(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    error_target: float = 1e-4
    max_hidden: int = 40
    max_epochs: int = 50
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.learning_rate < 1.0:
            raise ValueError("learning_rate must lie in (0, 1)")
        if self.error_target <= 0.0:
            raise ValueError("error_target must be positive")
        if self.max_hidden < 1 or self.max_epochs < 0:
            raise ValueError("max_hidden must be >= 1 and max_epochs >= 0")


@dataclass(frozen=True)
class TrainReport:
    final_error: float
    epochs_used: int
    hidden_history: tuple
    converged: bool


def zero_weight_net(centers: np.ndarray, widths: np.ndarray, output_dim: int) -> RbfNetwork:
    """Network over the given hidden layer with all output weights at zero."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    return RbfNetwork(centers, widths, np.zeros((output_dim, centers.shape[0])))


def basis_eval(center: np.ndarray, width: float, x: np.ndarray) -> float:
    """Gaussian bell exp(-|x - center|^2 / (2 width^2)); 1 exactly at the center."""
    center = np.asarray(center, dtype=float)
    x = np.asarray(x, dtype=float)
    if center.shape != x.shape:
        raise DimensionMismatch(f"input shape {x.shape} != center shape {center.shape}")
    if width <= 0.0:
        raise ValueError("width must be strictly positive")
    d2 = float(np.sum((x - center) ** 2))
    return float(np.exp(-d2 / (2.0 * width * width)))


def activations(net: RbfNetwork, x: np.ndarray) -> np.ndarray:
    """Vector of hidden-unit responses for one input."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != net.input_dim:
        raise DimensionMismatch(f"input dim {x.shape[0]} != network input dim {net.input_dim}")
    d2 = np.sum((net.centers - x) ** 2, axis=1)
    return np.exp(-d2 / (2.0 * net.widths**2))


def forward(net: RbfNetwork, x: np.ndarray) -> np.ndarray:
    """Network output: weighted sum of the Gaussian activations."""
    return net.weights @ activations(net, x)


def widths_from_spread(centers: np.ndarray) -> np.ndarray:
    """One shared width d_max / sqrt(2 M) from the largest pairwise distance.

    Raises DegenerateCenters when all centers coincide (d_max = 0); a single
    center is degenerate by this rule because it has no pairs.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    m = centers.shape[0]
    d_max = 0.0
    for i in range(m - 1):
        d = np.sqrt(np.sum((centers[i + 1 :] - centers[i]) ** 2, axis=1))
        d_max = max(d_max, float(d.max()))
    if d_max == 0.0:
        raise DegenerateCenters("all centers coincide; widths undefined")
    return np.full(m, d_max / np.sqrt(2.0 * m))


def batch_error(net: RbfNetwork, inputs: np.ndarray, targets: np.ndarray) -> float:
    """Half the summed squared residual over all samples and output components."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if inputs.shape[0] != targets.shape[0]:
        raise DimensionMismatch("inputs and targets must pair up one to one")
    if targets.shape[1] != net.output_dim:
        raise DimensionMismatch(f"target dim {targets.shape[1]} != output dim {net.output_dim}")
    total = 0.0
    for x, d in zip(inputs, targets):
        r = forward(net, x) - d
        total += float(r @ r)
    return 0.5 * total


def per_sample_errors(net: RbfNetwork, inputs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Half squared residual per sample (summed over output components)."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    out = np.empty(inputs.shape[0])
    for k, (x, d) in enumerate(zip(inputs, targets)):
        r = forward(net, x) - d
        out[k] = 0.5 * float(r @ r)
    return out


def lms_step(net: RbfNetwork, x: np.ndarray, target: np.ndarray, learning_rate: float) -> RbfNetwork:
    """One stochastic descent step on the output weights for a single sample.

    w_ji <- w_ji - lr * (y_j - d_j) * phi_i(x).  Centers and widths are left
    untouched; the per-sample squared error cannot increase for a
    sufficiently small rate.
    """
    if not 0.0 < learning_rate < 1.0:
        raise ValueError("learning_rate must lie in (0, 1)")
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.shape[0] != net.output_dim:
        raise DimensionMismatch(f"target dim {target.shape[0]} != output dim {net.output_dim}")
    phi = activations(net, x)
    residual = net.weights @ phi - target
    new_weights = net.weights - learning_rate * np.outer(residual, phi)
    return RbfNetwork(net.centers, net.widths, new_weights)


def grow_hidden_node(
    net: RbfNetwork, inputs: np.ndarray, targets: np.ndarray, max_hidden: int | None = None
) -> RbfNetwork:
    """Add one hidden unit at the worst-fit training sample.

    The new center is the input with the largest per-sample error (ties go
    to the lowest index), its weight column starts at zero, and all widths
    are re-derived from the enlarged center set.  Samples that already sit
    exactly on an existing center are skipped: re-enrolling them adds no
    capacity and stacking identical units doubles the effective step size
    of the per-sample updates until they diverge.
    """
    if max_hidden is not None and net.hidden_count >= max_hidden:
        raise CapReached(f"hidden layer already at cap {max_hidden}")
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    errors = per_sample_errors(net, inputs, targets)
    worst = None
    for idx in np.argsort(-errors, kind="stable"):
        if not np.any(np.all(net.centers == inputs[idx], axis=1)):
            worst = int(idx)
            break
    if worst is None:
        raise CapReached("every training sample is already a center")
    centers = np.vstack([net.centers, inputs[worst]])
    widths = widths_from_spread(centers)
    weights = np.hstack([net.weights, np.zeros((net.output_dim, 1))])
    return RbfNetwork(centers, widths, weights)


def train_lms(
    net: RbfNetwork, inputs: np.ndarray, targets: np.ndarray, cfg: TrainConfig
) -> tuple[RbfNetwork, TrainReport]:
    """Epochs of per-sample descent with hidden-layer growth on stall.

    Samples are visited in one seeded shuffled order, fixed across epochs.
    After each epoch the batch error is checked against the target; while it
    stays above and the hidden layer is below ``max_hidden``, one unit is
    grown before the next epoch.  Stops on target reached or epoch cap.
    """
    if np.asarray(inputs).size == 0:
        raise ValueError("training set must be non-empty")
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    rng = np.random.default_rng(cfg.rng_seed)
    order = rng.permutation(inputs.shape[0])

    history = [(0, net.hidden_count)]
    error = batch_error(net, inputs, targets)
    epochs = 0
    while error > cfg.error_target and epochs < cfg.max_epochs:
        for k in order:
            net = lms_step(net, inputs[k], targets[k], cfg.learning_rate)
        epochs += 1
        error = batch_error(net, inputs, targets)
        if error > cfg.error_target and net.hidden_count < cfg.max_hidden and epochs < cfg.max_epochs:
            try:
                net = grow_hidden_node(net, inputs, targets, max_hidden=cfg.max_hidden)
            except CapReached:
                pass
            else:
                history.append((epochs, net.hidden_count))
    report = TrainReport(
        final_error=error,
        epochs_used=epochs,
        hidden_history=tuple(history),
        converged=error <= cfg.error_target,
    )
    return net, report


def to_text(net: RbfNetwork) -> str:
    """Flat text form: header line, then one line per hidden unit.

    Each unit line carries its center components, width and weight column,
    printed with 17 significant digits so the round trip is bit exact.
    """
    lines = [f"{net.input_dim} {net.output_dim} {net.hidden_count}"]
    for i in range(net.hidden_count):
        parts = [format(v, ".17g") for v in net.centers[i]]
        parts.append(format(net.widths[i], ".17g"))
        parts.extend(format(v, ".17g") for v in net.weights[:, i])
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> RbfNetwork:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    in_dim, out_dim, hidden = (int(v) for v in lines[0].split())
    if len(lines) - 1 != hidden:
        raise ValueError(f"expected {hidden} unit lines, found {len(lines) - 1}")
    centers = np.empty((hidden, in_dim))
    widths = np.empty(hidden)
    weights = np.empty((out_dim, hidden))
    for i, line in enumerate(lines[1:]):
        vals = [float(v) for v in line.split()]
        if len(vals) != in_dim + 1 + out_dim:
            raise ValueError(f"unit line {i} has {len(vals)} fields, expected {in_dim + 1 + out_dim}")
        centers[i] = vals[:in_dim]
        widths[i] = vals[in_dim]
        weights[:, i] = vals[in_dim + 1 :]
    return RbfNetwork(centers, widths, weights)


def save_network(net: RbfNetwork, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(net))


def load_network(path) -> RbfNetwork:
    with open(path) as fh:
        return from_text(fh.read())
