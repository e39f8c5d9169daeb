"""Classical ground truth for the quantum segmentation pipeline.

Everything here is deliberately independent of the Hamiltonian
construction: cut weights are accumulated edge by edge per bitstring, and
the max-flow route (Edmonds-Karp) provides a second, algorithmically
unrelated answer for terminal graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .imagegraph import SegGraph

# Residual capacities below this are treated as saturated.
RESIDUAL_EPS = 1e-12

# Cut values within this of each other count as tied; ties resolve to the
# lexicographically smallest partition bitstring.
TIE_EPS = 1e-12


@dataclass(frozen=True)
class CutResult:
    partition: str
    value: float
    method: str


def cut_weight(bits, edges) -> float:
    """Total weight of edges whose endpoints get different labels.

    ``bits`` is indexable by vertex ("0"/"1" characters or 0/1 ints).
    """
    total = 0.0
    for a, b, w in edges:
        if bits[a] != bits[b]:
            total += w
    return total


def _admissible_bitstrings(g: SegGraph):
    """Yield candidate partitions in lexicographic bitstring order; with
    terminals present only source=0, sink=1 assignments are admissible.
    """
    if g.terminals is None:
        free = list(range(g.n_vertices))
        fixed = {}
    else:
        src, snk = g.terminals
        free = [v for v in range(g.n_vertices) if v not in (src, snk)]
        fixed = {src: "0", snk: "1"}
    chars = [""] * g.n_vertices
    for v, c in fixed.items():
        chars[v] = c
    # Lexicographic order over the rendered string: vertex 0 varies slowest.
    for combo in range(1 << len(free)):
        for i, v in enumerate(free):
            chars[v] = "1" if (combo >> (len(free) - 1 - i)) & 1 else "0"
        yield "".join(chars)


def exhaustive_mincut(g: SegGraph) -> CutResult:
    """Exact minimum cut by full enumeration; deterministic lexicographic
    tie-break.
    """
    if g.n_vertices > 22:
        raise ValueError(f"{g.n_vertices} vertices exceed enumeration capacity")
    best_bits = None
    best_value = np.inf
    for bits in _admissible_bitstrings(g):
        value = cut_weight(bits, g.edges)
        if value < best_value - TIE_EPS:
            best_value, best_bits = value, bits
        elif value <= best_value + TIE_EPS and bits < best_bits:
            best_bits = bits
    return CutResult(partition=best_bits, value=best_value, method="exhaustive")


def maxflow_mincut(g: SegGraph) -> CutResult:
    """Minimum s-t cut via Edmonds-Karp max-flow.

    n-links must be nonnegative. t-links may be negative (log-probability
    scores are): exactly one of a pixel's two t-links is cut in any
    admissible partition, so subtracting the pair minimum from both leaves
    the argmin unchanged and makes capacities nonnegative; the subtracted
    total is added back to the reported value.
    """
    if g.terminals is None:
        raise ValueError("maxflow_mincut needs terminal vertices")
    src, snk = g.terminals
    tlink = g.tlink_weights()

    n = g.n_vertices
    cap = np.zeros((n, n), dtype=np.float64)
    for a, b, w in g.edges:
        if a in (src, snk) or b in (src, snk):
            continue
        if w < 0:
            raise ValueError(f"negative n-link weight on edge ({a},{b})")
        cap[a, b] += w
        cap[b, a] += w
    offset = 0.0
    for v, (w_src, w_snk) in tlink.items():
        shift = min(w_src, w_snk)
        offset += shift
        cap[src, v] += w_src - shift
        cap[v, src] += w_src - shift
        cap[snk, v] += w_snk - shift
        cap[v, snk] += w_snk - shift

    flow = 0.0
    while True:
        # BFS for the shortest augmenting path.
        parent = np.full(n, -1, dtype=np.int64)
        parent[src] = src
        queue = deque([src])
        while queue and parent[snk] == -1:
            u = queue.popleft()
            for v in range(n):
                if parent[v] == -1 and cap[u, v] > RESIDUAL_EPS:
                    parent[v] = u
                    queue.append(v)
        if parent[snk] == -1:
            break
        bottleneck = np.inf
        v = snk
        while v != src:
            u = int(parent[v])
            bottleneck = min(bottleneck, cap[u, v])
            v = u
        v = snk
        while v != src:
            u = int(parent[v])
            cap[u, v] -= bottleneck
            cap[v, u] += bottleneck
            v = u
        flow += bottleneck

    # Source side of the residual graph.
    reachable = np.zeros(n, dtype=bool)
    reachable[src] = True
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in range(n):
            if not reachable[v] and cap[u, v] > RESIDUAL_EPS:
                reachable[v] = True
                queue.append(v)
    bits = "".join("0" if reachable[v] else "1" for v in range(n))
    return CutResult(partition=bits, value=flow + offset, method="maxflow")


def ncut_value(bits, g: SegGraph) -> float:
    """N_cut of the partition: cut * (1/deg(A) + 1/deg(B)), with the 0/0
    ratio of a fully disconnected side taken as 0.
    """
    cut = cut_weight(bits, g.edges)
    deg_a = deg_b = 0.0
    for a, b, w in g.edges:
        for v in (a, b):
            if bits[v] == "1":
                deg_a += w
            else:
                deg_b += w
    total = 0.0
    if deg_a > 0:
        total += cut / deg_a
    if deg_b > 0:
        total += cut / deg_b
    return total


def exhaustive_ncut(g: SegGraph) -> CutResult:
    """Exact normalized-cut minimizer over nondegenerate bipartitions;
    returns the lexicographically smaller of the two complementary labels.
    """
    if g.terminals is not None:
        raise ValueError("normalized cuts expect a graph without terminals")
    if g.n_vertices > 22:
        raise ValueError(f"{g.n_vertices} vertices exceed enumeration capacity")
    if any(w < 0 for _, _, w in g.edges):
        raise ValueError("normalized cuts require nonnegative weights")
    best_bits = None
    best_value = np.inf
    for bits in _admissible_bitstrings(g):
        if "0" not in bits or "1" not in bits:
            continue
        value = ncut_value(bits, g)
        if value < best_value - TIE_EPS:
            best_value, best_bits = value, bits
        elif value <= best_value + TIE_EPS and bits < best_bits:
            best_bits = bits
    flipped = flip_bits(best_bits)
    return CutResult(
        partition=min(best_bits, flipped), value=best_value, method="exhaustive"
    )


def flip_bits(bits: str) -> str:
    return "".join("0" if c == "1" else "1" for c in bits)


def dice(a: str, b: str) -> float:
    """Dice overlap 2|A&B| / (|A|+|B|) between two equal-length masks.

    Both masks empty counts as perfect agreement (1.0); exactly one empty
    counts as total disagreement (0.0).
    """
    if len(a) != len(b):
        raise ValueError(f"mask lengths differ: {len(a)} vs {len(b)}")
    n_a = a.count("1")
    n_b = b.count("1")
    if n_a == 0 and n_b == 0:
        return 1.0
    overlap = sum(1 for x, y in zip(a, b) if x == "1" and y == "1")
    return 2.0 * overlap / (n_a + n_b)


def dice_ambiguous(a: str, b: str) -> float:
    """Label-agnostic Dice for partitions without terminal anchoring:
    the better of the two labelings of ``a``.
    """
    return max(dice(a, b), dice(flip_bits(a), b))
