"""Run configuration: one strict JSON file covering every subsystem.

Unknown keys anywhere are errors. Model dims that depend on the dataset
(conditioning dim, pose dim, window) default from the dataset section
when omitted. Every command writes its resolved config next to its
outputs so runs are reproducible from the emitted file plus the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..metrics import MetricConfig
from ..motion import SynthConfig, skeleton_by_name
from ..networks import ModelConfig
from ..training import LossWeights, TrainConfig

_SECTIONS = ("seed", "dataset", "model", "train", "loss_weights", "metrics")


@dataclass
class RunConfig:
    seed: int = 0
    dataset: SynthConfig = field(default_factory=SynthConfig)
    model: ModelConfig = None
    train: TrainConfig = field(default_factory=TrainConfig)
    loss_weights: LossWeights = field(default_factory=LossWeights)
    metrics: MetricConfig = field(default_factory=MetricConfig)

    def __post_init__(self):
        if self.model is None:
            self.model = _default_model_for(self.dataset)

    def to_dict(self):
        return {
            "seed": self.seed,
            "dataset": _synth_to_dict(self.dataset),
            "model": self.model.to_dict(),
            "train": self.train.to_dict(),
            "loss_weights": self.loss_weights.to_dict(),
            "metrics": self.metrics.to_dict(),
        }


def _default_model_for(dataset):
    skeleton = skeleton_by_name(dataset.skeleton)
    return ModelConfig(
        cond_dim=dataset.conditioning_dim,
        pose_dim=skeleton.pose_dim,
        window=dataset.frames,
    )


def _synth_to_dict(cfg):
    return {
        "groups": cfg.groups,
        "dancers": cfg.dancers,
        "frames": cfg.frames,
        "tempo_range": list(cfg.tempo_range),
        "styles": cfg.styles,
        "skeleton": cfg.skeleton,
        "fps": cfg.fps,
        "spacing": cfg.spacing,
    }


def _build_section(cls, data, name, tuple_fields=()):
    if not isinstance(data, dict):
        raise ConfigError(f"config section '{name}' must be an object")
    fields = set(cls.__dataclass_fields__)
    unknown = set(data) - fields
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {sorted(unknown)}")
    kwargs = dict(data)
    for key in tuple_fields:
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    return cls(**kwargs)


def run_config_from_dict(data):
    if not isinstance(data, dict):
        raise ConfigError("run config must be a JSON object")
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown top-level config keys: {sorted(unknown)}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    dataset = _build_section(SynthConfig, data.get("dataset", {}), "dataset",
                             tuple_fields=("tempo_range",))
    model_section = dict(data.get("model", {}))
    defaults = _default_model_for(dataset)
    for key in ("cond_dim", "pose_dim", "window"):
        model_section.setdefault(key, getattr(defaults, key))
    model = _build_section(ModelConfig, model_section, "model")
    train = _build_section(TrainConfig, data.get("train", {}), "train")
    weights = _build_section(LossWeights, data.get("loss_weights", {}),
                             "loss_weights")
    metrics_section = dict(data.get("metrics", {}))
    metrics_section.setdefault(
        "foot_joints", skeleton_by_name(dataset.skeleton).foot_joints
    )
    metrics = _build_section(MetricConfig, metrics_section, "metrics",
                             tuple_fields=("foot_joints",))
    return RunConfig(seed=seed, dataset=dataset, model=model, train=train,
                     loss_weights=weights, metrics=metrics)


def load_run_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return run_config_from_dict(data)


def write_resolved_config(config, out_dir):
    path = out_dir / "resolved_config.json"
    with open(path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
