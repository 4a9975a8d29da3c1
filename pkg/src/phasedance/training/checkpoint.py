"""Checkpoint container: config echo + named float64 parameter tensors.

npz keeps float64 bits intact, so a save/load round trip reproduces
forward passes bit-exactly. Optimizer state and the step counter ride
along when training wants to resume.
"""

from __future__ import annotations

import io
import json
import zipfile

import numpy as np

from ..errors import CheckpointError
from ..diffmath import OptimizerState
from ..networks import ModelConfig, PhaseDanceModel

FORMAT_VERSION = 1


def save_checkpoint(model, path, state=None, step=None):
    payload = {
        "format_version": np.array([FORMAT_VERSION]),
        "config_json": np.array(json.dumps(model.config.to_dict())),
    }
    named = model.named_params()
    for name, tensor in named.items():
        payload[f"param:{name}"] = tensor.data
    if state is not None:
        payload["opt_step"] = np.array([state.step])
        for (name, _), m, v in zip(named.items(), state.m, state.v):
            payload[f"opt_m:{name}"] = m
            payload[f"opt_v:{name}"] = v
    if step is not None:
        payload["train_step"] = np.array([step])
    with open(path, "wb") as fh:
        np.savez(fh, **payload)


def load_checkpoint(path, expected_config=None, seed=0):
    """Rebuild (model, optimizer_state_or_None, step_or_None).

    When expected_config is given the model is built from it and every
    stored tensor is validated against that architecture, so a config
    mismatch surfaces as a shape error naming the offending tensor.
    """
    try:
        archive = np.load(path, allow_pickle=False)
    except (zipfile.BadZipFile, ValueError, OSError, io.UnsupportedOperation) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from exc
    with archive:
        keys = set(archive.files)
        if "format_version" not in keys or "config_json" not in keys:
            raise CheckpointError("checkpoint is missing its header entries")
        version = int(archive["format_version"][0])
        if version != FORMAT_VERSION:
            raise CheckpointError(
                f"checkpoint format version {version} != {FORMAT_VERSION}"
            )
        stored_config = ModelConfig.from_dict(json.loads(str(archive["config_json"])))
        config = stored_config if expected_config is None else expected_config
        if isinstance(config, dict):
            config = ModelConfig.from_dict(config)
        model = PhaseDanceModel(config, seed=seed)
        named = model.named_params()
        for name, tensor in named.items():
            key = f"param:{name}"
            if key not in keys:
                raise CheckpointError(f"checkpoint is missing tensor '{name}'")
            stored = archive[key]
            if stored.shape != tensor.data.shape:
                raise CheckpointError(
                    f"shape mismatch for tensor '{name}': checkpoint has "
                    f"{stored.shape}, config requires {tensor.data.shape}"
                )
            tensor.data[...] = stored
        state = None
        if "opt_step" in keys:
            state = OptimizerState(
                step=int(archive["opt_step"][0]),
                m=[np.array(archive[f"opt_m:{name}"]) for name in named],
                v=[np.array(archive[f"opt_v:{name}"]) for name in named],
            )
        step = int(archive["train_step"][0]) if "train_step" in keys else None
    return model, state, step
