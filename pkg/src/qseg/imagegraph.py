"""Grayscale images and their segmentation graphs.

Pixels become vertices in row-major order; 4-neighbour edges (n-links)
carry a Gaussian intensity-similarity weight, and optional source/sink
terminals attach to every pixel through class-score t-links. The source
terminal stands for the background, the sink for the object.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

OBJECT = "object"
BACKGROUND = "background"

# Probability floor substituted before taking logarithms of hard 0/1
# class probabilities in binary-threshold scoring.
PROB_FLOOR = 1e-6

HISTOGRAM_BINS = 10


@dataclass(frozen=True)
class Image:
    """Grayscale raster with row-major intensities in [0, 1]."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"empty image: {self.width}x{self.height}")
        px = np.ascontiguousarray(self.pixels, dtype=np.float64)
        if px.shape != (self.width * self.height,):
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {px.shape}"
            )
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("pixel intensities must lie in [0, 1]")
        object.__setattr__(self, "pixels", px)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height


@dataclass
class SegGraph:
    """Weighted undirected graph over pixel vertices plus optional
    source/sink terminals.

    Edges are unordered pairs (a, b, w) with a != b and at most one edge
    per pair. ``qubit_map[v]`` is the qubit index of vertex v once
    :func:`assign_qubits` has run.
    """

    n_vertices: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)
    terminals: tuple[int, int] | None = None
    qubit_map: np.ndarray | None = None

    def validate(self) -> "SegGraph":
        seen = set()
        for a, b, w in self.edges:
            if a == b:
                raise ValueError(f"self-loop on vertex {a}")
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise ValueError(f"edge ({a},{b}) out of range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight on edge {key}")
        if self.terminals is not None:
            src, snk = self.terminals
            if src == snk:
                raise ValueError("source and sink must be distinct")
        return self

    @property
    def n_pixels(self) -> int:
        return self.n_vertices - 2 if self.terminals is not None else self.n_vertices

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), np.zeros(0, dtype=np.float64)
        a, b, w = zip(*self.edges)
        return (
            np.asarray(a, dtype=np.int64),
            np.asarray(b, dtype=np.int64),
            np.asarray(w, dtype=np.float64),
        )

    def degrees(self) -> np.ndarray:
        """Sum of incident edge weights per vertex."""
        deg = np.zeros(self.n_vertices, dtype=np.float64)
        for a, b, w in self.edges:
            deg[a] += w
            deg[b] += w
        return deg

    def tlink_weights(self) -> dict[int, tuple[float, float]]:
        """Per-pixel (source-link, sink-link) weights; terminals required."""
        if self.terminals is None:
            raise ValueError("graph has no terminals")
        src, snk = self.terminals
        pairs: dict[int, list[float]] = {v: [0.0, 0.0] for v in range(self.n_pixels)}
        for a, b, w in self.edges:
            if b in (src, snk):
                a, b = b, a
            if a == src and b < self.n_pixels:
                pairs[b][0] = w
            elif a == snk and b < self.n_pixels:
                pairs[b][1] = w
        return {v: (w_src, w_snk) for v, (w_src, w_snk) in pairs.items()}


def nlink_weight(ia: float, ib: float, sigma: float) -> float:
    """Gaussian similarity exp(-(ia-ib)^2 / (2 sigma^2)); 1.0 at equality."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d = ia - ib
    return math.exp(-(d * d) / (2.0 * sigma * sigma))


def build_grid_graph(img: Image, sigma: float = 0.1) -> SegGraph:
    """4-neighbourhood n-link graph: one vertex per pixel, edges between
    horizontally and vertically adjacent pixels.
    """
    w, h, px = img.width, img.height, img.pixels
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c
            if c + 1 < w:
                edges.append((v, v + 1, nlink_weight(px[v], px[v + 1], sigma)))
            if r + 1 < h:
                edges.append((v, v + w, nlink_weight(px[v], px[v + w], sigma)))
    return SegGraph(n_vertices=w * h, edges=edges).validate()


@dataclass(frozen=True)
class TerminalModel:
    """Scoring model for t-link weights.

    ``binary_threshold`` scores with the log of hard 0/1 class
    probabilities split at intensity 0.5 (object = dark), floored at
    :data:`PROB_FLOOR` before the log. ``histogram_posterior`` scores with
    per-bin class posteriors over ten intensity bins of width 0.1, used
    directly (no log). Bins with no recorded mass fall back to 0.5/0.5.
    """

    kind: str = "binary_threshold"
    p_obj: np.ndarray | None = None
    p_bkg: np.ndarray | None = None
    lam: float = 1.0
    seed_weight: float | None = None
    sigma: float = 0.1

    def __post_init__(self):
        if self.kind not in ("binary_threshold", "histogram_posterior"):
            raise ValueError(f"unknown terminal model kind: {self.kind!r}")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.kind == "histogram_posterior":
            if self.p_obj is None or self.p_bkg is None:
                raise ValueError("histogram_posterior needs p_obj and p_bkg")
            po = np.asarray(self.p_obj, dtype=np.float64)
            pb = np.asarray(self.p_bkg, dtype=np.float64)
            if po.shape != (HISTOGRAM_BINS,) or pb.shape != (HISTOGRAM_BINS,):
                raise ValueError(f"posteriors must have {HISTOGRAM_BINS} bins")
            if po.min() < 0 or pb.min() < 0 or po.max() > 1 or pb.max() > 1:
                raise ValueError("posteriors must lie in [0, 1]")
            total = po + pb
            with_data = total > 0
            if np.any(np.abs(total[with_data] - 1.0) > 1e-9):
                raise ValueError("posteriors of bins with data must sum to 1")
            object.__setattr__(self, "p_obj", po)
            object.__setattr__(self, "p_bkg", pb)

    def scores(self, intensity: float) -> tuple[float, float]:
        """Return (object score, background score) for one intensity."""
        if self.kind == "binary_threshold":
            # Intensity exactly 0.5 is assigned to the background branch.
            if intensity >= 0.5:
                pr_obj, pr_bkg = 0.0, 1.0
            else:
                pr_obj, pr_bkg = 1.0, 0.0
            return (
                math.log(max(pr_obj, PROB_FLOOR)),
                math.log(max(pr_bkg, PROB_FLOOR)),
            )
        b = min(int(intensity * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)
        if self.p_obj[b] + self.p_bkg[b] == 0.0:
            return 0.5, 0.5
        return float(self.p_obj[b]), float(self.p_bkg[b])

    @classmethod
    def from_json(cls, path) -> "TerminalModel":
        doc = json.loads(Path(path).read_text())
        if doc.get("bins", HISTOGRAM_BINS) != HISTOGRAM_BINS:
            raise ValueError(f"expected {HISTOGRAM_BINS} histogram bins")
        return cls(
            kind="histogram_posterior",
            p_obj=np.asarray(doc["p_obj"], dtype=np.float64),
            p_bkg=np.asarray(doc["p_bkg"], dtype=np.float64),
            lam=float(doc.get("lambda", 1.0)),
            seed_weight=doc.get("seed_weight"),
            sigma=float(doc.get("sigma", 0.1)),
        )

    def to_json(self, path) -> None:
        doc = {
            "bins": HISTOGRAM_BINS,
            "p_obj": list(map(float, self.p_obj)),
            "p_bkg": list(map(float, self.p_bkg)),
            "lambda": self.lam,
            "sigma": self.sigma,
        }
        if self.seed_weight is not None:
            doc["seed_weight"] = self.seed_weight
        Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def default_seed_weight(g: SegGraph) -> float:
    """Large enough that a seeded t-link is never the cheapest cut: one
    plus the largest incident n-link weight sum over pixels.
    """
    deg = g.degrees()[: g.n_pixels] if g.terminals else g.degrees()
    return 1.0 + float(deg.max(initial=0.0))


def attach_terminals(
    g: SegGraph,
    img: Image,
    model: TerminalModel,
    seeds: list[tuple[int, str]] | tuple = (),
) -> SegGraph:
    """Add source and sink vertices with a t-link to every pixel.

    Non-seed pixels get w(a, source) = lambda * object score and
    w(a, sink) = lambda * background score. Seeded pixels get
    ``seed_weight`` to their labeled terminal and 0 to the other.
    """
    if g.terminals is not None:
        raise ValueError("graph already has terminals")
    if g.n_vertices != img.n_pixels:
        raise ValueError("graph does not match image")
    seed_label = {}
    for pix, label in seeds:
        if not 0 <= pix < img.n_pixels:
            raise ValueError(f"seed pixel {pix} out of range")
        if label not in (OBJECT, BACKGROUND):
            raise ValueError(f"seed label must be {OBJECT!r} or {BACKGROUND!r}")
        seed_label[pix] = label

    source = img.n_pixels
    sink = img.n_pixels + 1
    heavy = model.seed_weight
    if heavy is None and seed_label:
        heavy = default_seed_weight(g)

    edges = list(g.edges)
    for a in range(img.n_pixels):
        if a in seed_label:
            if seed_label[a] == OBJECT:
                w_src, w_snk = 0.0, heavy
            else:
                w_src, w_snk = heavy, 0.0
        else:
            score_obj, score_bkg = model.scores(float(img.pixels[a]))
            w_src = model.lam * score_obj
            w_snk = model.lam * score_bkg
        edges.append((a, source, w_src))
        edges.append((a, sink, w_snk))
    return SegGraph(
        n_vertices=img.n_pixels + 2, edges=edges, terminals=(source, sink)
    ).validate()


def assign_qubits(g: SegGraph) -> SegGraph:
    """Map vertices to qubits: pixels in row-major order, then source,
    then sink. The map is bijective and, with this construction, the
    identity permutation.
    """
    order = list(range(g.n_pixels))
    if g.terminals is not None:
        order.extend(g.terminals)
    qubit_map = np.empty(g.n_vertices, dtype=np.int64)
    for qubit, vertex in enumerate(order):
        qubit_map[vertex] = qubit
    g.qubit_map = qubit_map
    return g


def graph_for_image(
    img: Image,
    model: TerminalModel,
    seeds: list[tuple[int, str]] | tuple = (),
    with_terminals: bool = True,
) -> SegGraph:
    """Grid graph for the image, with terminals attached unless disabled,
    and qubits assigned.
    """
    g = build_grid_graph(img, sigma=model.sigma)
    if with_terminals:
        g = attach_terminals(g, img, model, seeds)
    return assign_qubits(g)


def write_dot(g: SegGraph, path) -> None:
    """Dump the graph in DOT format for inspection."""
    lines = ["graph seg {"]
    if g.terminals is not None:
        src, snk = g.terminals
        lines.append(f'  {src} [label="source" shape=box];')
        lines.append(f'  {snk} [label="sink" shape=box];')
    for a, b, w in g.edges:
        lines.append(f'  {a} -- {b} [label="{w:.6g}"];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_pgm(path) -> Image:
    """Read a plain (P2) or binary (P5) PGM file as a normalized image."""
    raw = Path(path).read_bytes()
    magic = raw[:2]
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not a PGM file (magic {magic!r})")

    # Header tokens may be interleaved with '#' comments.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    width, height, maxval = (int(t) for t in tokens)
    if maxval <= 0 or maxval > 65535:
        raise ValueError(f"bad PGM maxval {maxval}")

    if magic == b"P2":
        data = np.array(raw[pos:].split(), dtype=np.float64)
    else:
        pos += 1  # single whitespace after maxval
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        data = np.frombuffer(raw[pos:], dtype=dtype, count=width * height).astype(
            np.float64
        )
    if data.size != width * height:
        raise ValueError("PGM pixel count does not match header")
    return Image(width=width, height=height, pixels=data / maxval)


def write_pgm(img: Image, path) -> None:
    """Write a plain P2 PGM with 8-bit quantization."""
    values = np.rint(img.pixels * 255).astype(int)
    rows = [
        " ".join(str(v) for v in values[r * img.width : (r + 1) * img.width])
        for r in range(img.height)
    ]
    Path(path).write_text(
        "P2\n" + f"{img.width} {img.height}\n255\n" + "\n".join(rows) + "\n"
    )


def read_csv_image(path) -> Image:
    """Read a single-channel CSV of reals (one row per image row)."""
    rows = [
        [float(tok) for tok in line.split(",")]
        for line in Path(path).read_text().strip().splitlines()
        if line.strip()
    ]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("CSV rows are empty or ragged")
    return Image(
        width=len(rows[0]),
        height=len(rows),
        pixels=np.asarray(rows, dtype=np.float64).ravel(),
    )


def load_image(path) -> Image:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_csv_image(path)
    return read_pgm(path)
