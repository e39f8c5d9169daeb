"""Command-line entry point.

Subcommands:
  generate  write a Bars-and-Stripes corpus (PGM + JSON sidecars)
  segment   run graph-cut segmentation (quantum-simulated or oracle-only)
            over a corpus and emit per-run reports plus a summary table
  verify    run the cross-oracle and invariant suites

All randomness flows from the single --seed; identical invocations give
identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import oracles
from .datasets import LabeledImage, anchor_pixels, generate_bas, read_corpus, write_corpus
from .imagegraph import TerminalModel, graph_for_image
from .qaoa import OptimizerConfig, mincut_problem, ncut_problem, run
from .selfcheck import run_checks
from .statevector import NoiseConfig


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qseg",
        description="Graph-cut image segmentation on a simulated quantum register",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a Bars-and-Stripes corpus")
    gen.add_argument("--bas", type=_parse_dims, required=True, metavar="WxH")
    gen.add_argument("--noise", type=float, default=0.2, help="image noise bound")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True)

    seg = sub.add_parser("segment", help="segment a corpus and report Dice stats")
    src = seg.add_mutually_exclusive_group(required=True)
    src.add_argument("--bas", type=_parse_dims, metavar="WxH")
    src.add_argument("--input", type=Path, help="corpus directory")
    seg.add_argument("--method", choices=["maxflow", "ncut"], default="maxflow")
    seg.add_argument("--p", type=int, default=1, help="circuit depth")
    seg.add_argument("--opt", choices=["bayes", "adam"], default="bayes")
    seg.add_argument("--noise", type=float, default=0.0, help="per-Pauli gate error")
    seg.add_argument("--runs", type=int, default=1)
    seg.add_argument("--shots", type=int, default=1024)
    seg.add_argument("--iters", type=int, default=None, help="optimizer budget")
    seg.add_argument("--seed", type=int, default=0)
    seg.add_argument("--sigma", type=float, default=None, help="n-link scale")
    seg.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="t-link weight scale")
    seg.add_argument("--image-noise", type=float, default=0.2,
                     help="image noise bound when generating with --bas")
    seg.add_argument("--histogram", type=Path, default=None,
                     help="posterior-histogram terminal model (JSON)")
    seg.add_argument("--eq6", action="store_true",
                     help="use the literal product-form normalized-cut objective")
    seg.add_argument("--oracle-only", action="store_true",
                     help="classical oracle instead of the quantum driver")
    seg.add_argument("--select", choices=["sampled", "argmax"], default="sampled",
                     help="winner rule: most frequent sample or top basis state")
    seg.add_argument("--out", type=Path, required=True)

    ver = sub.add_parser("verify", help="run cross-oracle and invariant checks")
    ver.add_argument("--seed", type=int, default=0)
    return parser


def cmd_generate(args) -> int:
    cols, rows = args.bas
    items = generate_bas(rows, cols, noise_max=args.noise, rng_seed=args.seed)
    paths = write_corpus(items, args.out, noise_max=args.noise, seed=args.seed)
    print(f"wrote {len(paths)} images to {args.out}")
    return 0


def _load_items(args) -> list[tuple[LabeledImage, tuple[int, ...] | None]]:
    """Corpus items plus optional object-anchor pixels from sidecar
    'side' entries.
    """
    if args.bas is not None:
        cols, rows = args.bas
        items = generate_bas(rows, cols, noise_max=args.image_noise, rng_seed=args.seed)
        return [(item, None) for item in items]
    out = []
    for item in read_corpus(args.input):
        side = None
        sidecar = Path(args.input) / f"{item.id}.json"
        if sidecar.exists():
            side = json.loads(sidecar.read_text()).get("side")
        anchors = anchor_pixels(item.image, side) if side else None
        out.append((item, anchors))
    if not out:
        raise SystemExit(f"no images found in {args.input}")
    return out


def _terminal_model(args) -> TerminalModel:
    if args.histogram is not None:
        model = TerminalModel.from_json(args.histogram)
        sigma = args.sigma if args.sigma is not None else model.sigma
        lam = args.lam if args.lam is not None else model.lam
        return TerminalModel(
            kind=model.kind, p_obj=model.p_obj, p_bkg=model.p_bkg,
            lam=lam, seed_weight=model.seed_weight, sigma=sigma,
        )
    return TerminalModel(
        kind="binary_threshold",
        lam=args.lam if args.lam is not None else 1.0,
        sigma=args.sigma if args.sigma is not None else 0.1,
    )


def _oriented_dice(
    pixel_bits: str, mask: str, method: str, anchors
) -> tuple[float, str]:
    """Dice after resolving the label ambiguity.

    Anchored images flip the labels when most anchor pixels read
    background; without anchors, normalized cuts score label-free and
    max-flow scores as-is (the terminals fix the orientation).
    """
    if anchors:
        votes = sum(1 for a in anchors if pixel_bits[a] == "1")
        if votes * 2 < len(anchors):
            pixel_bits = oracles.flip_bits(pixel_bits)
        return oracles.dice(pixel_bits, mask), pixel_bits
    if method == "ncut":
        return oracles.dice_ambiguous(pixel_bits, mask), pixel_bits
    return oracles.dice(pixel_bits, mask), pixel_bits


def _classical_partition(graph, method: str) -> str:
    if method == "maxflow":
        return oracles.maxflow_mincut(graph).partition
    return oracles.exhaustive_ncut(graph).partition


def cmd_segment(args) -> int:
    if args.p < 1 or args.runs < 1:
        raise SystemExit("--p and --runs must be >= 1")
    items = _load_items(args)
    model = _terminal_model(args)
    with_terminals = args.method == "maxflow"
    ncut_mode = "eq6" if args.eq6 else "exact"

    out = Path(args.out)
    runs_dir = out / "runs"
    hist_dir = out / "histograms"
    runs_dir.mkdir(parents=True, exist_ok=True)
    hist_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    run_records: list[dict] = []
    for img_idx, (item, anchors) in enumerate(items):
        if item.mask is None:
            raise SystemExit(f"image {item.id} has no ground-truth mask")
        graph = graph_for_image(item.image, model, with_terminals=with_terminals)
        n_pix = item.image.n_pixels
        if args.oracle_only:
            partition = _classical_partition(graph, args.method)
            pixel_bits = partition[:n_pix]
            dice, oriented = _oriented_dice(pixel_bits, item.mask, args.method, anchors)
            for run_idx in range(args.runs):
                run_records.append({
                    "image_id": item.id, "run": run_idx, "winner": pixel_bits,
                    "oriented": oriented, "dice": dice, "objective_best": None,
                    "wall_time": 0.0,
                })
            continue

        if with_terminals:
            problem = mincut_problem(graph)
        else:
            problem = ncut_problem(graph, mode=ncut_mode)
        for run_idx in range(args.runs):
            seeds = np.random.SeedSequence(
                args.seed, spawn_key=(img_idx, run_idx)
            ).generate_state(2)
            cfg = OptimizerConfig(
                kind=args.opt, max_iters=args.iters, shots=args.shots,
                rng_seed=int(seeds[0]), selection=args.select,
            )
            noise = (
                NoiseConfig(per_pauli_prob=args.noise, rng_seed=int(seeds[1]))
                if args.noise > 0 else None
            )
            report = run(problem, args.p, cfg, noise=noise)
            pixel_bits = report.winner[:n_pix]
            dice, oriented = _oriented_dice(pixel_bits, item.mask, args.method, anchors)
            record = {
                "image_id": item.id,
                "run": run_idx,
                "winner": report.winner,
                "oriented": oriented,
                "dice": dice,
                "objective_best": float(np.max(report.objective_trace)),
                "objective_trace": [float(v) for v in report.objective_trace],
                "best_gamma": [float(v) for v in report.best_params.gamma],
                "best_beta": [float(v) for v in report.best_params.beta],
                "wall_time": report.wall_time,
            }
            run_records.append(record)
            (runs_dir / f"{item.id}__run{run_idx}.json").write_text(
                json.dumps(record, indent=1) + "\n"
            )
            if run_idx == 0:
                total = sum(report.histogram.values())
                lines = ["bitstring,count,probability"]
                for bits in sorted(report.histogram):
                    count = report.histogram[bits]
                    lines.append(f"{bits},{count},{count / total:.8f}")
                (hist_dir / f"{item.id}.csv").write_text("\n".join(lines) + "\n")

    summary = summarize(run_records)
    dims = f"{items[0][0].image.width}x{items[0][0].image.height}"
    algorithm = args.method if args.method == "maxflow" else "norm cut"
    if args.noise > 0:
        algorithm += " noisy"
    algorithm += " classical" if args.oracle_only else f" QAOA_{args.p}"
    optimizer = "None" if args.oracle_only else args.opt.capitalize()
    summary.update({
        "dims": dims,
        "algorithm": algorithm,
        "optimizer": optimizer,
        "images": len(items),
        "runs": args.runs,
        "wall_time": time.perf_counter() - started,
        "config": {
            "method": args.method, "p": args.p, "opt": args.opt,
            "noise": args.noise, "shots": args.shots, "iters": args.iters,
            "seed": args.seed, "sigma": model.sigma, "lambda": model.lam,
            "eq6": args.eq6, "oracle_only": args.oracle_only,
            "select": args.select,
        },
    })
    (out / "summary.json").write_text(json.dumps(summary, indent=1) + "\n")

    table = format_table([summary])
    (out / "table.txt").write_text(table + "\n")
    print(table)
    return 0


def summarize(run_records: list[dict]) -> dict:
    """Dice statistics: average over images within each run, then mean and
    (population) standard deviation across runs.
    """
    by_run: dict[int, list[float]] = {}
    for rec in run_records:
        by_run.setdefault(rec["run"], []).append(rec["dice"])
    per_run = [float(np.mean(by_run[k])) for k in sorted(by_run)]
    return {
        "dice_mean": float(np.mean(per_run)),
        "dice_std": float(np.std(per_run)),
        "per_run_means": per_run,
    }


def format_table(rows: list[dict]) -> str:
    header = ("Dims", "Algorithm", "Dice mean", "Dice std", "Opt")
    cells = [header] + [
        (
            r["dims"], r["algorithm"],
            f"{r['dice_mean']:.3f}", f"{r['dice_std']:.3f}", r["optimizer"],
        )
        for r in rows
    ]
    widths = [max(len(row[c]) for row in cells) for c in range(len(header))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in cells
    )


def cmd_verify(args) -> int:
    failures = 0
    for name, ok, detail in run_checks(seed=args.seed):
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    return 1 if failures else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "generate":
        return cmd_generate(args)
    if args.command == "segment":
        return cmd_segment(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
