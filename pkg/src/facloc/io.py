"""JSON instance files.

Layout: ``{"points": [[x, y], ...], "prediction": [x, y], "metadata": {...}}``.
One-dimensional instances keep ``y = 0`` and carry ``"dimension": "1"`` in
the metadata. Floats are written with ``repr`` precision so a read after a
write reproduces every double exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import FacilityError, Point
from .mechanisms import Instance


class InstanceFormatError(FacilityError):
    pass


@dataclass(frozen=True)
class InstanceFile:
    instance: Instance
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def is_1d(self) -> bool:
        return self.metadata.get("dimension") == "1"


def _pair(value, where: str) -> Point:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InstanceFormatError(f"{where}: expected an [x, y] pair, got {value!r}")
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InstanceFormatError(f"{where}: coordinates must be finite numbers, got {value!r}")
    return Point(float(value[0]), float(value[1]))


def instance_from_dict(doc) -> InstanceFile:
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level: expected a JSON object")
    if "points" not in doc:
        raise InstanceFormatError("points: missing field")
    if "prediction" not in doc:
        raise InstanceFormatError("prediction: missing field")
    raw = doc["points"]
    if not isinstance(raw, list) or not raw:
        raise InstanceFormatError("points: expected a nonempty list of [x, y] pairs")
    points = tuple(_pair(p, f"points[{i}]") for i, p in enumerate(raw))
    prediction = _pair(doc["prediction"], "prediction")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise InstanceFormatError("metadata: expected an object")
    return InstanceFile(Instance(points, prediction), {str(k): str(v) for k, v in meta.items()})


def instance_to_dict(inst: Instance, metadata: dict[str, str] | None = None) -> dict:
    return {
        "points": [[p.x, p.y] for p in inst.points],
        "prediction": [inst.prediction.x, inst.prediction.y],
        "metadata": dict(metadata or {}),
    }


def dumps(inst: Instance, metadata: dict[str, str] | None = None) -> str:
    return json.dumps(instance_to_dict(inst, metadata), indent=1, sort_keys=True) + "\n"


def loads(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from None
    return instance_from_dict(doc)


def read_instance(path: str | Path) -> InstanceFile:
    return loads(Path(path).read_text())


def write_instance(path: str | Path, inst: Instance, metadata: dict[str, str] | None = None) -> None:
    Path(path).write_text(dumps(inst, metadata))
