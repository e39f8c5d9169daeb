"""Bars-and-Stripes corpora and pre-cropped medical-style inputs.

A Bars-and-Stripes item is a binary pattern constant along rows (bar) or
columns (stripe), excluding the all-black and all-white images, with
uniform noise pushed toward the opposite intensity bound so pixels stay in
[0, 1] and threshold back to the clean pattern at 0.5.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .imagegraph import Image, TerminalModel, load_image, write_pgm

MAX_CROP_PIXELS = 20  # two terminal qubits on top keep us inside the register cap


@dataclass(frozen=True)
class LabeledImage:
    """Image plus ground-truth object mask ('1' = object), row-major."""

    image: Image
    mask: str | None
    id: str

    def __post_init__(self):
        if self.mask is not None and len(self.mask) != self.image.n_pixels:
            raise ValueError(
                f"mask length {len(self.mask)} does not match "
                f"{self.image.n_pixels} pixels"
            )


def bas_pattern_count(rows: int, cols: int) -> int:
    """Distinct bar/stripe patterns excluding all-black and all-white."""
    return (1 << rows) + (1 << cols) - 4


def _bas_masks(rows: int, cols: int):
    """Yield (id, mask bit array) for every pattern, bars first."""
    for combo in range(1, (1 << rows) - 1):
        bits = [(combo >> (rows - 1 - r)) & 1 for r in range(rows)]
        mask = np.repeat(bits, cols)
        yield "bar-" + "".join(map(str, bits)), mask
    for combo in range(1, (1 << cols) - 1):
        bits = [(combo >> (cols - 1 - c)) & 1 for c in range(cols)]
        mask = np.tile(bits, rows)
        yield "stripe-" + "".join(map(str, bits)), mask


def generate_bas(
    rows: int, cols: int, noise_max: float = 0.2, rng_seed: int = 0
) -> list[LabeledImage]:
    """All bar and stripe patterns of the given shape with per-pixel
    uniform noise in [0, noise_max] applied toward the opposite bound.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"need at least 2x2 patterns, got {rows}x{cols}")
    if not 0.0 <= noise_max < 0.5:
        raise ValueError(f"noise_max must lie in [0, 0.5), got {noise_max}")
    rng = np.random.default_rng(rng_seed)
    items = []
    for item_id, mask in _bas_masks(rows, cols):
        noise = rng.uniform(0.0, noise_max, size=mask.size) if noise_max else 0.0
        pixels = np.where(mask == 1, 1.0 - noise, 0.0 + noise)
        items.append(
            LabeledImage(
                image=Image(width=cols, height=rows, pixels=pixels),
                mask="".join(map(str, mask)),
                id=item_id,
            )
        )
    return items


def write_corpus(items: list[LabeledImage], outdir, noise_max: float, seed: int):
    """Write each item as <id>.pgm plus a JSON sidecar."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for item in items:
        pgm = outdir / f"{item.id}.pgm"
        write_pgm(item.image, pgm)
        sidecar = {
            "id": item.id,
            "mask": item.mask,
            "noise_max": noise_max,
            "seed": seed,
        }
        (outdir / f"{item.id}.json").write_text(json.dumps(sidecar, indent=1) + "\n")
        paths.append(pgm)
    return paths


def read_corpus(indir) -> list[LabeledImage]:
    """Read a corpus directory written by :func:`write_corpus`; items come
    back sorted by id.
    """
    indir = Path(indir)
    items = []
    for pgm in sorted(indir.glob("*.pgm")):
        sidecar = pgm.with_suffix(".json")
        mask = None
        item_id = pgm.stem
        if sidecar.exists():
            doc = json.loads(sidecar.read_text())
            mask = doc.get("mask")
            item_id = doc.get("id", item_id)
        items.append(LabeledImage(image=load_image(pgm), mask=mask, id=item_id))
    return sorted(items, key=lambda it: it.id)


def anchor_pixels(image: Image, side: str) -> tuple[int, ...]:
    """Pixels known to belong to the object: the column facing the vessel
    center line, i.e. the right-most column of a left-side crop and the
    left-most column of a right-side crop.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    col = image.width - 1 if side == "left" else 0
    return tuple(r * image.width + col for r in range(image.height))


def load_cropped_medical(
    image_file, histogram_file, side: str
) -> tuple[LabeledImage, TerminalModel, tuple[int, ...]]:
    """Load a pre-cropped grayscale strip plus its posterior-histogram
    terminal model.

    ``side`` states which side of the vessel center line the crop came
    from; the anchor pixels it implies are returned for resolving label
    flips.
    """
    image = load_image(image_file)
    if image.n_pixels > MAX_CROP_PIXELS:
        raise ValueError(
            f"crop has {image.n_pixels} pixels, over the {MAX_CROP_PIXELS} cap"
        )
    model = TerminalModel.from_json(histogram_file)

    mask = None
    item_id = Path(image_file).stem
    sidecar = Path(image_file).with_suffix(".json")
    if sidecar.exists():
        doc = json.loads(sidecar.read_text())
        mask = doc.get("mask")
        item_id = doc.get("id", item_id)

    labeled = LabeledImage(image=image, mask=mask, id=item_id)
    return labeled, model, anchor_pixels(image, side)
