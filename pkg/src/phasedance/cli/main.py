"""Command-line entry points.

Subcommands: synth | train | generate | evaluate | bench-scale.
Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
Every command writes its resolved config into --out, so a run is fully
reproducible from that file plus the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ..errors import CheckpointError, ConfigError, PhasedanceError, TrainingDiverged
from ..metrics import (
    GaussianFit,
    frechet_distance,
    gen_div,
    gmc,
    group_features,
    kinetic_features,
    mmc,
    pfc,
    tif,
)
from ..motion import export_motion, skeleton_by_name, synth_conditioning, synth_group_dataset
from ..networks import PhaseDanceModel, generate_group
from ..training import fit, load_checkpoint, save_checkpoint
from .bench import bench_scale, linear_fit_r_squared
from .config import RunConfig, load_run_config, write_resolved_config
from .datafiles import load_dataset, save_dataset


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="phasedance",
                     description="Group-dance synthesis from a phase manifold")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="run config JSON (defaults apply when omitted)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", type=Path, required=True, help="output directory")

    p_synth = sub.add_parser("synth", help="write a synthetic dataset")
    common(p_synth)

    p_train = sub.add_parser("train", help="train a model on a dataset")
    common(p_train)
    p_train.add_argument("--data", type=Path, required=True,
                         help="dataset.npz from the synth command")
    p_train.add_argument("--ablate", choices=("no-consistency", "no-phase"),
                         default=None)
    p_train.add_argument("--resume", type=Path, default=None,
                         help="checkpoint to continue from")

    p_gen = sub.add_parser("generate", help="sample a group from a checkpoint")
    common(p_gen)
    p_gen.add_argument("--checkpoint", type=Path, required=True)
    p_gen.add_argument("--dancers", type=int, required=True)
    p_gen.add_argument("--format", choices=("frame-dump", "bvh"),
                       default="frame-dump")
    p_gen.add_argument("--ablate", choices=("no-phase",), default=None)
    p_gen.add_argument("--data", type=Path, default=None,
                       help="take conditioning from this dataset instead of "
                            "synthesizing a track")
    p_gen.add_argument("--group", type=int, default=0,
                       help="group index within --data")

    p_eval = sub.add_parser("evaluate", help="score generated vs held-out data")
    common(p_eval)
    p_eval.add_argument("--checkpoint", type=Path, required=True)
    p_eval.add_argument("--data", type=Path, required=True,
                        help="held-out dataset.npz")

    p_bench = sub.add_parser("bench-scale", help="memory/time vs dancer count")
    common(p_bench)
    p_bench.add_argument("--checkpoint", type=Path, required=True)
    p_bench.add_argument("--dancers", type=str, default="2,5,10,50,100",
                         help="comma-separated dancer counts")

    return parser


def _load_config(args):
    config = load_run_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        config.seed = args.seed
    return config


def _prepare_out(args, config):
    args.out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(config, args.out)


def _default_conditioning(config):
    """Synthesized track: mid-range tempo, style 0."""
    ds = config.dataset
    bpm = 0.5 * (ds.tempo_range[0] + ds.tempo_range[1])
    period = max(4, int(round(ds.fps * 60.0 / bpm)))
    return synth_conditioning(config.model.window, period, 0, ds.styles)


def cmd_synth(args):
    config = _load_config(args)
    _prepare_out(args, config)
    groups = synth_group_dataset(config.dataset, config.seed)
    manifest = save_dataset(groups, args.out / "dataset.npz", seed=config.seed)
    with open(args.out / "dataset_manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    total = sum(entry["dancers"] for entry in manifest["groups"])
    print(f"synth: wrote {len(groups)} groups / {total} sequences "
          f"to {args.out / 'dataset.npz'}")
    return 0


def cmd_train(args):
    config = _load_config(args)
    if args.ablate == "no-consistency":
        config.train.disable_consistency = True
    elif args.ablate == "no-phase":
        config.train.disable_phase_manifold = True
    config.train.seed = config.seed
    _prepare_out(args, config)

    dataset, meta = load_dataset(args.data)
    cond_dim = dataset[0].conditioning.dim
    if cond_dim != config.model.cond_dim:
        raise ConfigError(
            f"model cond_dim {config.model.cond_dim} does not match the "
            f"dataset conditioning dim {cond_dim}"
        )

    start_step = 0
    state = None
    if args.resume is not None:
        model, state, resumed = load_checkpoint(
            args.resume, expected_config=config.model
        )
        start_step = resumed or 0
    else:
        model = PhaseDanceModel(config.model, seed=config.seed)

    log_path = args.out / "train_log.jsonl"
    log_file = open(log_path, "a")

    def on_record(record):
        log_file.write(json.dumps({
            "step": record.step,
            "rec": record.reconstruction,
            "kl": record.kl,
            "csc": record.consistency,
            "total": record.total,
        }) + "\n")

    checkpoint_path = args.out / "checkpoint.npz"
    try:
        _, records, state = fit(dataset, model, config.train,
                                weights=config.loss_weights, state=state,
                                start_step=start_step, on_record=on_record)
    except TrainingDiverged as exc:
        # the failing step never reached the optimizer: params are last-good
        save_checkpoint(model, checkpoint_path, state=state,
                        step=exc.records[-1].step)
        log_file.close()
        print(f"train: diverged ({exc}); last-good checkpoint saved", file=sys.stderr)
        return 2
    finally:
        if not log_file.closed:
            log_file.close()
    save_checkpoint(model, checkpoint_path, state=state,
                    step=start_step + config.train.steps)
    final = records[-1].total if records else float("nan")
    print(f"train: {len(records)} steps, final total loss {final:.6f}, "
          f"checkpoint at {checkpoint_path}")
    return 0


def cmd_generate(args):
    config = _load_config(args)
    if args.dancers < 1:
        raise ConfigError("--dancers must be at least 1")
    _prepare_out(args, config)
    model, _, _ = load_checkpoint(args.checkpoint)
    config.model = model.config

    if args.data is not None:
        dataset, _ = load_dataset(args.data)
        if not 0 <= args.group < len(dataset):
            raise ConfigError(f"--group {args.group} out of range")
        cond = dataset[args.group].conditioning
    else:
        cond = _default_conditioning(config)

    mode = "ablate-no-phase" if args.ablate == "no-phase" else "pdvae"
    group = generate_group(model, cond, dancers=args.dancers,
                           seed=config.seed, mode=mode)
    skeleton = skeleton_by_name(config.dataset.skeleton)
    suffix = "bvh" if args.format == "bvh" else "framedump.txt"
    files = []
    for i, dancer in enumerate(group.dancers):
        payload = export_motion(dancer, args.format, skeleton)
        path = args.out / f"dancer_{i:03d}.{suffix}"
        path.write_bytes(payload)
        files.append(path.name)
    with open(args.out / "generate_manifest.json", "w") as fh:
        json.dump({"seed": config.seed, "dancers": args.dancers,
                   "format": args.format, "mode": mode, "files": files},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"generate: wrote {len(files)} dancers to {args.out}")
    return 0


def evaluate_groups(real_groups, generated_groups, metric_config):
    """All seven metrics; insufficient samples become per-metric errors."""
    report = {}

    def attempt(name, fn):
        try:
            report[name] = float(fn())
        except PhasedanceError as exc:
            report[name] = {"error": str(exc)}

    real_dancers = [d for g in real_groups for d in g.dancers]
    gen_dancers = [d for g in generated_groups for d in g.dancers]

    attempt("fid", lambda: frechet_distance(
        GaussianFit.from_features([kinetic_features(d) for d in gen_dancers]),
        GaussianFit.from_features([kinetic_features(d) for d in real_dancers]),
    ))
    attempt("mmc", lambda: np.mean([
        mmc(d, g.conditioning.beat_frames, sigma=metric_config.mmc_sigma)
        for g in generated_groups for d in g.dancers
    ]))
    attempt("gendiv", lambda: gen_div(gen_dancers))
    attempt("pfc", lambda: np.mean([
        pfc(d, metric_config.foot_joints) for d in gen_dancers
    ]))
    attempt("gmr", lambda: frechet_distance(
        GaussianFit.from_features([group_features(g) for g in generated_groups]),
        GaussianFit.from_features([group_features(g) for g in real_groups]),
    ))
    attempt("gmc", lambda: np.mean([
        gmc(g, lag_divisor=metric_config.gmc_lag_divisor)
        for g in generated_groups
    ]))
    attempt("tif", lambda: np.mean([
        tif(g, radius=metric_config.tif_radius) for g in generated_groups
    ]))
    return report


def cmd_evaluate(args):
    config = _load_config(args)
    _prepare_out(args, config)
    model, _, _ = load_checkpoint(args.checkpoint)
    real_groups, _ = load_dataset(args.data)
    generated = [
        generate_group(model, g.conditioning, dancers=g.dancer_count,
                       seed=config.seed + i)
        for i, g in enumerate(real_groups)
    ]
    metrics = evaluate_groups(real_groups, generated, config.metrics)
    report = {
        "metrics": metrics,
        "parameters": config.metrics.to_dict(),
        "counts": {
            "groups": len(real_groups),
            "generated_dancers": sum(g.dancer_count for g in generated),
        },
        "note": "feature extractors are in-package substitutes; absolute "
                "values are not comparable to published benchmark tables",
    }
    path = args.out / "metrics_report.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"evaluate: report at {path}")
    return 0


def cmd_bench_scale(args):
    config = _load_config(args)
    _prepare_out(args, config)
    try:
        counts = [int(tok) for tok in args.dancers.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --dancers list: {exc}") from exc
    if not counts or min(counts) < 1:
        raise ConfigError("--dancers needs positive counts")
    model, _, _ = load_checkpoint(args.checkpoint)
    config.model = model.config
    cond = _default_conditioning(config)
    reports = bench_scale(model, cond, counts, seed=config.seed)
    path = args.out / "bench_report.jsonl"
    with open(path, "w") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_dict()) + "\n")
        r2 = linear_fit_r_squared([r.dancers for r in reports],
                                  [r.wall_time_s for r in reports])
        peaks = [r.peak_working_elements for r in reports]
        summary = {
            "summary": True,
            "wall_time_r_squared": r2,
            "peak_ratio_max_over_min": max(peaks) / max(min(peaks), 1),
        }
        fh.write(json.dumps(summary) + "\n")
    print(f"{'N':>6} {'peak elems':>12} {'out elems':>12} "
          f"{'prior':>6} {'wall s':>10}")
    for r in reports:
        print(f"{r.dancers:>6} {r.peak_working_elements:>12} "
              f"{r.output_elements:>12} {r.prior_calls:>6} "
              f"{r.wall_time_s:>10.4f}")
    print(f"bench-scale: wall-time R^2 vs N = {r2:.4f}; report at {path}")
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "train": cmd_train,
    "generate": cmd_generate,
    "evaluate": cmd_evaluate,
    "bench-scale": cmd_bench_scale,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (CheckpointError, PhasedanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
