"""JSON state files and reports.

Complex numbers are ``[re, im]`` pairs, matrices are row-major lists of
rows, keys are sorted.  Floats use Python's shortest round-trip repr, so a
file read and written again is byte-identical.
"""
import dataclasses
import hashlib
import json
from enum import Enum
from pathlib import Path

import numpy as np

from ._validation import check_density_matrix, check_pure3
from .exceptions import ValidationError

KINDS = ("density2q", "pure3q", "filter_triple")
SHAPES = {"density2q": (4, 4), "pure3q": (8,)}


@dataclasses.dataclass(frozen=True)
class StateFile:
    kind: str
    payload: object
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown state kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "payload", _validate(self.kind, self.payload))
        object.__setattr__(self, "metadata", {str(k): str(v) for k, v in self.metadata.items()})

    def to_dict(self):
        payload = self.payload
        if self.kind == "filter_triple":
            payload = dict(zip("abc", payload))
        return {"kind": self.kind, "metadata": dict(self.metadata),
                "payload": to_jsonable(payload)}

    def dumps(self):
        return dumps(self.to_dict())

    def save(self, path):
        Path(path).write_text(self.dumps())

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d or "payload" not in d:
            raise ValidationError("state file needs 'kind' and 'payload' fields")
        kind = d["kind"]
        if kind == "filter_triple":
            p = d["payload"]
            if not isinstance(p, dict) or set(p) != {"a", "b", "c"}:
                raise ValidationError("filter_triple payload needs keys a, b, c")
            payload = tuple(decode_complex(p[k]) for k in "abc")
        else:
            payload = decode_complex(d["payload"])
        return cls(kind, payload, d.get("metadata", {}))

    @classmethod
    def loads(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path):
        return cls.loads(Path(path).read_text())


def _validate(kind, payload):
    if kind == "filter_triple":
        mats = tuple(np.asarray(m, dtype=complex) for m in payload)
        if len(mats) != 3 or any(m.shape != (2, 2) for m in mats):
            raise ValidationError("filter_triple payload is three 2x2 matrices")
        if any(abs(np.linalg.det(m)) < 1e-12 for m in mats):
            raise ValidationError("filters must be invertible")
        return mats
    arr = np.asarray(payload, dtype=complex)
    if arr.shape != SHAPES[kind]:
        raise ValidationError(f"{kind} payload has shape {arr.shape}, expected {SHAPES[kind]}")
    if kind == "density2q":
        return check_density_matrix(arr)
    return check_pure3(arr)


def decode_complex(obj):
    """Inverse of the ``[re, im]`` encoding for nested lists."""
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("payload must be nested lists of [re, im] pairs") from None
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValidationError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _clean(x):
    x = float(x)
    if not np.isfinite(x):
        raise ValidationError("non-finite number in output")
    return 0.0 if x == 0 else x


def to_jsonable(obj):
    """Convert results (arrays, dataclasses, enums, numpy scalars) to JSON types."""
    if isinstance(obj, Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        d = obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
        return to_jsonable(d)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            stacked = np.stack([obj.real, obj.imag], axis=-1)
            return to_jsonable(stacked.tolist())
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _clean(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def digest(*texts):
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode() if isinstance(t, str) else t)
    return h.hexdigest()


def make_report(command, results, inputs=(), seed=None, provenance=None):
    from . import __version__
    return {
        "command": command,
        "inputs_digest": digest(*inputs) if inputs else None,
        "results": to_jsonable(results),
        "provenance": dict(provenance or {}),
        "tool_version": __version__,
        "seed": seed,
    }
