"""Dataset serialization: npz arrays plus a checksummed manifest."""

from __future__ import annotations

import hashlib
import json

import numpy as np

from ..errors import CheckpointError
from ..motion import ConditioningFeatures, GroupSample, MotionSequence


def _group_checksum(group):
    digest = hashlib.sha256()
    digest.update(group.conditioning.features.tobytes())
    digest.update(np.asarray(group.conditioning.beat_frames).tobytes())
    for dancer in group.dancers:
        digest.update(dancer.poses.tobytes())
    return digest.hexdigest()


def save_dataset(groups, path, seed=None):
    """Write groups to an npz container; returns the manifest dict."""
    meta = {
        "seed": seed,
        "joint_count": groups[0].dancers[0].joint_count,
        "groups": [
            {
                "id": g.group_id,
                "dancers": g.dancer_count,
                "frames": g.frames,
                "checksum": _group_checksum(g),
            }
            for g in groups
        ],
    }
    payload = {"meta_json": np.array(json.dumps(meta))}
    for i, g in enumerate(groups):
        payload[f"g{i}:cond"] = g.conditioning.features
        payload[f"g{i}:beats"] = np.asarray(g.conditioning.beat_frames, dtype=np.int64)
        for j, dancer in enumerate(g.dancers):
            payload[f"g{i}:d{j}"] = dancer.poses
    with open(path, "wb") as fh:
        np.savez(fh, **payload)
    return meta


def load_dataset(path):
    try:
        archive = np.load(path, allow_pickle=False)
    except Exception as exc:
        raise CheckpointError(f"unreadable dataset {path}: {exc}") from exc
    with archive:
        meta = json.loads(str(archive["meta_json"]))
        joint_count = meta["joint_count"]
        groups = []
        for i, entry in enumerate(meta["groups"]):
            cond = ConditioningFeatures(
                features=archive[f"g{i}:cond"],
                beat_frames=tuple(int(b) for b in archive[f"g{i}:beats"]),
            )
            dancers = [
                MotionSequence(poses=archive[f"g{i}:d{j}"], joint_count=joint_count)
                for j in range(entry["dancers"])
            ]
            groups.append(GroupSample(group_id=entry["id"], dancers=dancers,
                                      conditioning=cond))
    return groups, meta
