"""Diagonal cost Hamiltonians for graph-cut objectives.

Every Hamiltonian is materialized as a dense vector of 2**n objective
values, one per bitstring (qubit 0 = least significant bit). The driver
always maximizes the expectation, so minimization problems are encoded by
negating the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .imagegraph import SegGraph
from .statevector import MAX_QUBITS, StateVector

# Objective value assigned to degenerate partitions (one side empty) of the
# normalized-cut diagonal: minus the worst achievable N_cut of a valid
# partition, so degenerate bitstrings are never optimal.
DEGENERATE_NCUT_PENALTY = 2.0


@dataclass(frozen=True)
class DiagonalHamiltonian:
    """2**n_qubits real objective values, one per basis state."""

    n_qubits: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} values, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("diagonal values must be finite")
        object.__setattr__(self, "values", vals)


def _qubit_edges(graph: SegGraph) -> list[tuple[int, int, float]]:
    if graph.n_vertices > MAX_QUBITS:
        raise ValueError(
            f"graph has {graph.n_vertices} vertices, over the "
            f"{MAX_QUBITS}-qubit capacity"
        )
    qmap = graph.qubit_map
    if qmap is None:
        return list(graph.edges)
    return [(int(qmap[a]), int(qmap[b]), w) for a, b, w in graph.edges]


def _cut_vector(n_qubits: int, edges) -> np.ndarray:
    """Total cut weight per bitstring: sum of w over edges whose endpoint
    bits differ.
    """
    z = np.arange(1 << n_qubits, dtype=np.int64)
    cut = np.zeros(z.shape[0], dtype=np.float64)
    for a, b, w in edges:
        differ = ((z >> a) ^ (z >> b)) & 1
        cut += w * differ
    return cut


def maxcut_hamiltonian(graph: SegGraph) -> DiagonalHamiltonian:
    """Weighted max-cut diagonal: values[z] = cut weight of partition z."""
    n = graph.n_vertices
    return DiagonalHamiltonian(n, _cut_vector(n, _qubit_edges(graph)))


def mincut_hamiltonian(graph: SegGraph) -> DiagonalHamiltonian:
    """Max-cut on negated weights; maximizing then minimizes cut weight."""
    n = graph.n_vertices
    edges = [(a, b, -w) for a, b, w in _qubit_edges(graph)]
    return DiagonalHamiltonian(n, _cut_vector(n, edges))


def ncut_hamiltonian(graph: SegGraph, mode: str = "exact") -> DiagonalHamiltonian:
    """Normalized-cut diagonal over a terminal-free graph.

    ``exact`` (default): values[z] = -N_cut(A, B) with
    N_cut = cut * (1/deg(A) + 1/deg(B)), deg summing all incident edge
    weights of a side, so maximizing the expectation minimizes N_cut.

    ``eq6``: literal product form
    values[z] = (sum over edges of -w * s_a * s_b) * (1/deg(A) + 1/deg(B))
    with s = +-1 per bit, kept behind a flag for fidelity experiments.

    Degenerate bitstrings (either side empty) get the fixed value
    ``-DEGENERATE_NCUT_PENALTY`` in both modes.
    """
    if mode not in ("exact", "eq6"):
        raise ValueError(f"unknown normalized-cut mode: {mode!r}")
    if graph.terminals is not None:
        raise ValueError("normalized cuts expect a graph without terminals")
    edges = _qubit_edges(graph)
    if any(w < 0 for _, _, w in edges):
        raise ValueError("normalized cuts require nonnegative weights")

    n = graph.n_vertices
    dim = 1 << n
    z = np.arange(dim, dtype=np.int64)
    cut = _cut_vector(n, edges)

    deg_vertex = np.zeros(n, dtype=np.float64)
    for a, b, w in edges:
        deg_vertex[a] += w
        deg_vertex[b] += w
    deg_a = np.zeros(dim, dtype=np.float64)
    for q in range(n):
        deg_a += deg_vertex[q] * ((z >> q) & 1)
    deg_b = deg_vertex.sum() - deg_a

    # cut <= deg of either side, so deg == 0 forces cut == 0; treat the
    # 0/0 ratio of a disconnected side as 0.
    inv_a = np.divide(1.0, deg_a, out=np.zeros(dim), where=deg_a > 0)
    inv_b = np.divide(1.0, deg_b, out=np.zeros(dim), where=deg_b > 0)

    if mode == "exact":
        values = -(cut * inv_a + cut * inv_b)
    else:
        total_w = sum(w for _, _, w in edges)
        values = (2.0 * cut - total_w) * (inv_a + inv_b)

    values[0] = -DEGENERATE_NCUT_PENALTY
    values[dim - 1] = -DEGENERATE_NCUT_PENALTY
    return DiagonalHamiltonian(n, values)


def eval_objective(ham: DiagonalHamiltonian, state: StateVector) -> float:
    """Exact expectation sum_z |amp_z|^2 * values[z]."""
    if ham.n_qubits != state.n_qubits:
        raise ValueError(
            f"Hamiltonian on {ham.n_qubits} qubits does not match a "
            f"{state.n_qubits}-qubit state"
        )
    return kernels.expectation(state.amplitudes, ham.values)
