"""The hybrid driver: alternate phase and mixer evolution, optimize the
angles classically, sample, and report the most frequent bitstring.

Angle convention follows the cost/driver pairing used throughout this
package: layer l applies the diagonal phase with angle beta_l, then the
transverse mixer with angle gamma_l. The objective is evaluated
analytically from the statevector; sampling only decides the reported
bitstring.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import (
    DiagonalHamiltonian,
    eval_objective,
    mincut_hamiltonian,
    ncut_hamiltonian,
)
from .imagegraph import SegGraph
from .optimizers import AdamSettings, BayesSettings, adam_maximize, bayes_maximize
from .statevector import (
    NoiseConfig,
    StateVector,
    apply_pauli_noise,
    index_to_bitstring,
    plus_state_amplitudes,
)

DEFAULT_ITERS = {"adam": 100, "bayes": 60}


@dataclass(frozen=True)
class QaoaParams:
    """Angle vectors of a depth-p circuit."""

    gamma: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.gamma, dtype=np.float64))
        b = np.atleast_1d(np.asarray(self.beta, dtype=np.float64))
        if g.shape != b.shape or g.ndim != 1 or g.size < 1:
            raise ValueError("gamma and beta must be equal-length vectors")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "beta", b)

    @property
    def p(self) -> int:
        return self.gamma.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.gamma, self.beta])

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "QaoaParams":
        vec = np.asarray(vec, dtype=np.float64)
        p = vec.size // 2
        return cls(gamma=vec[:p], beta=vec[p:])


@dataclass
class QaoaProblem:
    """Cost diagonal plus the mixer support and terminal initialization."""

    cost: DiagonalHamiltonian
    active_qubits: tuple[int, ...]
    pinned: tuple[tuple[int, int], ...] = ()
    n_qubits: int = 0

    def __post_init__(self):
        if not self.n_qubits:
            self.n_qubits = self.cost.n_qubits
        if self.n_qubits != self.cost.n_qubits:
            raise ValueError("problem size does not match the cost Hamiltonian")
        self.active_qubits = tuple(sorted(self.active_qubits))
        self.pinned = tuple(self.pinned)
        pinned_qs = {q for q, _ in self.pinned}
        if pinned_qs & set(self.active_qubits):
            raise ValueError("pinned qubits cannot be in the mixer support")
        if pinned_qs | set(self.active_qubits) != set(range(self.n_qubits)):
            raise ValueError("active and pinned qubits must cover the register")
        self._init_amp = plus_state_amplitudes(self.n_qubits, self.pinned)

    def initial_state(self) -> StateVector:
        state = StateVector.__new__(StateVector)
        state.n_qubits = self.n_qubits
        state.amplitudes = self._init_amp.copy()
        return state


@dataclass(frozen=True)
class OptimizerConfig:
    """Budget and settings for the classical angle search.

    ``max_iters`` is the iteration count for adam and the total number of
    objective evaluations for bayes; ``None`` picks the per-kind default.
    ``selection`` chooses the reported bitstring: the most frequent sample
    (``sampled``) or the highest-probability basis state (``argmax``).
    """

    kind: str = "bayes"
    max_iters: int | None = None
    shots: int = 1024
    rng_seed: int = 0
    selection: str = "sampled"
    adam: AdamSettings = field(default_factory=AdamSettings)
    bayes: BayesSettings = field(default_factory=BayesSettings)

    def __post_init__(self):
        if self.kind not in ("bayes", "adam"):
            raise ValueError(f"unknown optimizer kind: {self.kind!r}")
        if self.selection not in ("sampled", "argmax"):
            raise ValueError(f"unknown selection rule: {self.selection!r}")
        if self.iters < 1 or self.shots < 1:
            raise ValueError("iteration and shot budgets must be >= 1")

    @property
    def iters(self) -> int:
        return self.max_iters if self.max_iters is not None else DEFAULT_ITERS[self.kind]


@dataclass(frozen=True)
class RunReport:
    """Outcome of one end-to-end run."""

    best_params: QaoaParams
    objective_trace: np.ndarray
    histogram: dict[str, int]
    winner: str
    wall_time: float


def mincut_problem(graph: SegGraph) -> QaoaProblem:
    """Terminal-constrained minimum-cut problem: sink pinned to 1, source
    to 0, mixer on the pixel qubits only.
    """
    if graph.terminals is None:
        raise ValueError("mincut problem needs terminal vertices")
    if graph.qubit_map is None:
        raise ValueError("assign qubits before building the problem")
    src, snk = graph.terminals
    q_src = int(graph.qubit_map[src])
    q_snk = int(graph.qubit_map[snk])
    active = tuple(q for q in range(graph.n_vertices) if q not in (q_src, q_snk))
    return QaoaProblem(
        cost=mincut_hamiltonian(graph),
        active_qubits=active,
        pinned=((q_src, 0), (q_snk, 1)),
    )


def ncut_problem(graph: SegGraph, mode: str = "exact") -> QaoaProblem:
    """Unconstrained normalized-cut problem: mixer on every qubit."""
    return QaoaProblem(
        cost=ncut_hamiltonian(graph, mode=mode),
        active_qubits=tuple(range(graph.n_vertices)),
    )


def prepare_state(
    problem: QaoaProblem,
    params: QaoaParams,
    noise: NoiseConfig | None = None,
    rng: np.random.Generator | None = None,
) -> StateVector:
    """Build the variational state: pinned uniform superposition, then per
    layer the diagonal phase (angle beta_l) followed by the mixer (angle
    gamma_l).

    With ``noise`` set, a Pauli error is drawn after every logical gate:
    per prep gate (Hadamard on each free qubit, bit-flip on each qubit
    pinned to 1), per qubit after each phase evolution, and per active
    qubit after each mixer.
    """
    state = problem.initial_state()
    noisy = noise is not None and noise.per_pauli_prob > 0.0
    if noisy and rng is None:
        rng = np.random.default_rng(noise.rng_seed)
    if noisy:
        prep_qubits = sorted(
            set(problem.active_qubits) | {q for q, bit in problem.pinned if bit == 1}
        )
        apply_pauli_noise(state, noise, prep_qubits, rng)
    all_qubits = range(problem.n_qubits)
    for layer in range(params.p):
        state.apply_phase(problem.cost.values, params.beta[layer])
        if noisy:
            apply_pauli_noise(state, noise, all_qubits, rng)
        state.apply_mixer(params.gamma[layer], problem.active_qubits)
        if noisy:
            apply_pauli_noise(state, noise, problem.active_qubits, rng)
    return state


def objective(
    problem: QaoaProblem,
    params: QaoaParams,
    noise: NoiseConfig | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Exact expectation of the cost diagonal in the variational state.

    Under noise each call evolves a fresh trajectory, so the value is
    stochastic; without noise it is deterministic.
    """
    return eval_objective(problem.cost, prepare_state(problem, params, noise, rng))


def optimize(
    problem: QaoaProblem,
    p: int,
    cfg: OptimizerConfig,
    noise: NoiseConfig | None = None,
    noise_rng: np.random.Generator | None = None,
    init_params: QaoaParams | None = None,
) -> tuple[QaoaParams, np.ndarray]:
    """Search the 2p angles for the best objective; returns the best-seen
    parameters and the evaluation trace.
    """
    if p < 1:
        raise ValueError("depth p must be >= 1")
    rng = np.random.default_rng(cfg.rng_seed)
    if noise is not None and noise_rng is None:
        noise_rng = np.random.default_rng(noise.rng_seed)

    def f(vec: np.ndarray) -> float:
        return objective(problem, QaoaParams.from_vector(vec), noise, noise_rng)

    init_vec = init_params.as_vector() if init_params is not None else None
    if cfg.kind == "adam":
        best_vec, trace = adam_maximize(
            f, 2 * p, cfg.iters, cfg.adam, rng, init=init_vec
        )
    else:
        best_vec, trace = bayes_maximize(
            f, 2 * p, cfg.iters, cfg.bayes, rng, init=init_vec
        )
    return QaoaParams.from_vector(best_vec), trace


def _winner(histogram: dict[str, int]) -> str:
    top = max(histogram.values())
    return min(bits for bits, count in histogram.items() if count == top)


def run(
    problem: QaoaProblem,
    p: int,
    cfg: OptimizerConfig,
    noise: NoiseConfig | None = None,
    init_params: QaoaParams | None = None,
) -> RunReport:
    """Optimize, rebuild the state at the best angles, sample ``shots``
    measurements (one fresh noise trajectory per shot when noisy) and pick
    the winning bitstring.
    """
    started = time.perf_counter()
    seq = np.random.SeedSequence(cfg.rng_seed)
    opt_seed, sample_seed, noise_seed = seq.generate_state(3)
    opt_cfg = _reseeded(cfg, int(opt_seed))
    sample_rng = np.random.default_rng(sample_seed)
    noise_rng = np.random.default_rng(noise_seed) if noise is not None else None

    best, trace = optimize(
        problem, p, opt_cfg, noise=noise, noise_rng=noise_rng, init_params=init_params
    )

    if noise is None:
        state = prepare_state(problem, best)
        histogram = state.sample(cfg.shots, sample_rng)
        probs = state.probabilities()
    else:
        histogram: dict[str, int] = {}
        probs = np.zeros(1 << problem.n_qubits)
        for _ in range(cfg.shots):
            state = prepare_state(problem, best, noise, noise_rng)
            for bits, count in state.sample(1, sample_rng).items():
                histogram[bits] = histogram.get(bits, 0) + count
            if cfg.selection == "argmax":
                probs += state.probabilities()

    if cfg.selection == "argmax":
        z = int(np.argmax(probs))
        winner = index_to_bitstring(z, problem.n_qubits)
    else:
        winner = _winner(histogram)
    return RunReport(
        best_params=best,
        objective_trace=trace,
        histogram=histogram,
        winner=winner,
        wall_time=time.perf_counter() - started,
    )


def _reseeded(cfg: OptimizerConfig, seed: int) -> OptimizerConfig:
    return OptimizerConfig(
        kind=cfg.kind,
        max_iters=cfg.max_iters,
        shots=cfg.shots,
        rng_seed=seed,
        selection=cfg.selection,
        adam=cfg.adam,
        bayes=cfg.bayes,
    )
