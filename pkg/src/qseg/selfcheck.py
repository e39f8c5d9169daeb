"""Cross-oracle and invariant checks behind the ``verify`` command.

Each check returns (name, passed, detail); the CLI prints one line per
check and exits nonzero if any fail. The whole default suite is sized to
finish within a few minutes on a laptop.
"""

from __future__ import annotations

import numpy as np

from . import hamiltonian as ham
from . import oracles
from .datasets import bas_pattern_count, generate_bas
from .imagegraph import Image, SegGraph, TerminalModel, build_grid_graph, graph_for_image
from .qaoa import QaoaParams, mincut_problem, prepare_state
from .statevector import HADAMARD, StateVector


def random_graph(
    rng: np.random.Generator, n_vertices: int, with_terminals: bool
) -> SegGraph:
    """Connected-ish random graph with uniform weights; t-links to both
    terminals on every pixel when requested.
    """
    n_pix = n_vertices - 2 if with_terminals else n_vertices
    edges = []
    for a in range(n_pix):
        for b in range(a + 1, n_pix):
            if rng.random() < 0.45:
                edges.append((a, b, float(rng.uniform(0.1, 2.0))))
    if with_terminals:
        src, snk = n_pix, n_pix + 1
        for a in range(n_pix):
            edges.append((a, src, float(rng.uniform(-2.0, 2.0))))
            edges.append((a, snk, float(rng.uniform(-2.0, 2.0))))
        return SegGraph(n_vertices=n_vertices, edges=edges, terminals=(src, snk))
    return SegGraph(n_vertices=n_vertices, edges=edges)


def check_statevector_invariants(seed: int = 0) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 8))
        state = StateVector.plus_state(n)
        diag = rng.normal(size=1 << n)
        for _ in range(10):
            op = rng.integers(0, 3)
            if op == 0:
                state.apply_gate(int(rng.integers(0, n)), HADAMARD)
            elif op == 1:
                before = np.abs(state.amplitudes.copy())
                state.apply_phase(diag, float(rng.uniform(0, 2 * np.pi)))
                if np.max(np.abs(np.abs(state.amplitudes) - before)) > 1e-12:
                    return "statevector-invariants", False, "phase moved probability"
            else:
                state.apply_mixer(float(rng.uniform(0, np.pi)), range(n))
        worst = max(worst, abs(state.norm_sq() - 1.0))
    ok = worst <= 1e-9
    return "statevector-invariants", ok, f"max norm drift {worst:.2e}"


def check_mixer_factorization(seed: int = 0) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(2, 7))
        theta = float(rng.uniform(0, 2 * np.pi))
        a = StateVector.plus_state(n)
        a.apply_phase(rng.normal(size=1 << n), 0.7)
        b = a.copy()
        a.apply_mixer(theta, range(n))
        rot = np.array(
            [
                [np.cos(theta), -1j * np.sin(theta)],
                [-1j * np.sin(theta), np.cos(theta)],
            ]
        )
        for q in range(n):
            b.apply_gate(q, rot)
        worst = max(worst, float(np.max(np.abs(a.amplitudes - b.amplitudes))))
    ok = worst <= 1e-10
    return "mixer-factorization", ok, f"max amplitude deviation {worst:.2e}"


def check_pinned_conservation(seed: int = 0) -> tuple[str, bool, str]:
    items = generate_bas(3, 3, noise_max=0.2, rng_seed=seed)
    model = TerminalModel(kind="binary_threshold")
    worst = 0.0
    rng = np.random.default_rng(seed)
    for item in items[:4]:
        g = graph_for_image(item.image, model)
        prob = mincut_problem(g)
        params = QaoaParams(gamma=rng.uniform(0, np.pi, 2), beta=rng.uniform(0, np.pi, 2))
        state = prepare_state(prob, params)
        p = state.probabilities()
        z = np.arange(p.size)
        bad = np.zeros(p.size, dtype=bool)
        for q, bit in prob.pinned:
            bad |= ((z >> q) & 1) != bit
        worst = max(worst, float(p[bad].sum()))
    ok = worst <= 1e-12
    return "pinned-conservation", ok, f"max stray probability {worst:.2e}"


def check_hamiltonian_bruteforce(seed: int = 0) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        g = random_graph(rng, n, with_terminals=False)
        values = ham.maxcut_hamiltonian(g).values
        for z in range(1 << n):
            bits = [(z >> q) & 1 for q in range(n)]
            expect = oracles.cut_weight(bits, g.edges)
            if abs(values[z] - expect) > 1e-9:
                return (
                    "hamiltonian-bruteforce",
                    False,
                    f"cut mismatch at z={z} on {n} vertices",
                )
    return "hamiltonian-bruteforce", True, "maxcut diagonal matches edge enumeration"


def check_cut_oracles(graphs=None, seed: int = 0) -> tuple[str, bool, str]:
    if graphs is None:
        rng = np.random.default_rng(seed)
        graphs = [random_graph(rng, int(rng.integers(4, 11)), True) for _ in range(12)]
        model = TerminalModel(kind="binary_threshold")
        for item in generate_bas(3, 3, noise_max=0.2, rng_seed=seed)[:4]:
            graphs.append(graph_for_image(item.image, model))
    worst = 0.0
    for g in graphs:
        exact = oracles.exhaustive_mincut(g)
        flow = oracles.maxflow_mincut(g)
        worst = max(worst, abs(exact.value - flow.value))
        if abs(exact.value - flow.value) > 1e-9 or exact.partition != flow.partition:
            return (
                "mincut-oracle-agreement",
                False,
                f"value gap {abs(exact.value - flow.value):.2e}, "
                f"partitions {exact.partition} vs {flow.partition}",
            )
    return "mincut-oracle-agreement", True, f"max value gap {worst:.2e}"


def check_ncut_properties(seed: int = 0) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(8):
        n = int(rng.integers(3, 9))
        g = random_graph(rng, n, with_terminals=False)
        values = ham.ncut_hamiltonian(g).values
        flipped = values[::-1]
        if np.max(np.abs(values - flipped)) > 0:
            return "ncut-properties", False, "bit-flip symmetry violated"
        interior = np.ones(values.size, dtype=bool)
        interior[[0, -1]] = False
        ncuts = -values[interior]
        if ncuts.size and (ncuts.min() < -1e-12 or ncuts.max() > 2.0 + 1e-12):
            return "ncut-properties", False, "normalized cut out of [0, 2]"
    return "ncut-properties", True, "symmetry and bounds hold"


def check_dataset_counts() -> tuple[str, bool, str]:
    for rows in range(2, 5):
        for cols in range(2, 5):
            items = generate_bas(rows, cols, noise_max=0.0, rng_seed=0)
            if len(items) != bas_pattern_count(rows, cols):
                return (
                    "dataset-counts",
                    False,
                    f"{rows}x{cols}: {len(items)} items",
                )
            if len({it.id for it in items}) != len(items):
                return "dataset-counts", False, f"{rows}x{cols}: duplicate patterns"
    return "dataset-counts", True, "bar/stripe counts match the closed form"


def check_grid_edges() -> tuple[str, bool, str]:
    for w in range(1, 9):
        for h in range(1, 9):
            g = build_grid_graph(Image(width=w, height=h, pixels=np.zeros(w * h)))
            expect = w * (h - 1) + h * (w - 1)
            if len(g.edges) != expect:
                return "grid-edges", False, f"{w}x{h}: {len(g.edges)} edges"
    return "grid-edges", True, "4-neighbour edge count formula holds"


def run_checks(seed: int = 0) -> list[tuple[str, bool, str]]:
    return [
        check_statevector_invariants(seed),
        check_mixer_factorization(seed),
        check_pinned_conservation(seed),
        check_hamiltonian_bruteforce(seed),
        check_cut_oracles(seed=seed),
        check_ncut_properties(seed),
        check_dataset_counts(),
        check_grid_edges(),
    ]
