"""Versioned binary model archive.

Layout (all integers little-endian)::

    offset  size  field
    0       8     magic  b"SEEDMDL\\x00"
    8       4     format_version (uint32)
    12      8     payload length N (uint64)
    20      N     payload: UTF-8 JSON document
    20+N    32    SHA-256 digest of the payload bytes

The JSON payload holds ``kind``, ``hyperparameters``, ``class_names``,
``feature_names``, ``standardizer`` (``null`` or ``{"mean", "std"}``) and
``parameters``. Every array is stored as ``{"dtype", "shape", "data"}``
where ``dtype`` is an explicit little-endian numpy code (``<f8``/``<i8``) and
``data`` is the base64 of the raw C-order bytes.
"""
from __future__ import annotations

import base64
import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import CorruptFile, DigestMismatch, FeatureSchemaMismatch, VersionUnsupported
from ..ml.dataset import Standardizer
from ..ml.model import KINDS, TrainedModel

MAGIC = b"SEEDMDL\x00"
FORMAT_VERSION = 1
SUPPORTED_VERSIONS = {1}
_HEADER = struct.Struct("<8sIQ")


@dataclass(frozen=True, eq=False)
class ModelArchive:
    format_version: int
    model: TrainedModel
    digest: str

    @property
    def kind(self):
        return self.model.kind

    @property
    def class_names(self):
        return self.model.class_names

    @property
    def feature_names(self):
        return self.model.feature_names

    def check_schema(self, feature_names) -> None:
        check_schema(self.model, feature_names)


def check_schema(model: TrainedModel, feature_names) -> None:
    names = tuple(feature_names)
    if names != model.feature_names:
        raise FeatureSchemaMismatch(
            f"model was trained on {len(model.feature_names)} features "
            f"({', '.join(model.feature_names[:3])}...), data has {len(names)}")


def _encode(arr) -> dict:
    a = np.asarray(arr)
    code = "<i8" if a.dtype.kind in "iub" else "<f8"
    a = np.ascontiguousarray(a.astype(code))
    return {"dtype": code, "shape": list(a.shape), "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _decode(doc) -> np.ndarray:
    if doc["dtype"] not in ("<i8", "<f8"):
        raise CorruptFile(f"unsupported array dtype {doc['dtype']!r}")
    raw = base64.b64decode(doc["data"])
    return np.frombuffer(raw, dtype=np.dtype(doc["dtype"])).reshape(doc["shape"]).astype(
        np.int64 if doc["dtype"] == "<i8" else np.float64)


def dumps_model(model: TrainedModel) -> bytes:
    doc = {
        "kind": model.kind,
        "hyperparameters": model.hyperparameters,
        "class_names": list(model.class_names),
        "feature_names": list(model.feature_names),
        "standardizer": None if model.standardizer is None else {
            "mean": _encode(model.standardizer.mean), "std": _encode(model.standardizer.std)},
        "parameters": {k: _encode(v) for k, v in sorted(model.parameters.items())},
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return (_HEADER.pack(MAGIC, FORMAT_VERSION, len(payload)) + payload
            + hashlib.sha256(payload).digest())


def loads_model(blob: bytes) -> ModelArchive:
    if len(blob) < _HEADER.size + 32:
        raise CorruptFile("model archive is truncated")
    magic, version, length = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptFile("not a seedscope model archive")
    if version not in SUPPORTED_VERSIONS:
        raise VersionUnsupported(f"archive format version {version} is not supported")
    end = _HEADER.size + length
    if len(blob) != end + 32:
        raise CorruptFile("model archive length does not match its header")
    payload, digest = blob[_HEADER.size:end], blob[end:]
    if hashlib.sha256(payload).digest() != digest:
        raise DigestMismatch("model archive digest does not match its payload")
    try:
        doc = json.loads(payload.decode("utf-8"))
        if doc["kind"] not in KINDS:
            raise CorruptFile(f"unknown model kind {doc['kind']!r}")
        std = doc["standardizer"]
        model = TrainedModel(
            kind=doc["kind"],
            class_names=tuple(doc["class_names"]),
            feature_names=tuple(doc["feature_names"]),
            hyperparameters=dict(doc["hyperparameters"]),
            standardizer=None if std is None else Standardizer(_decode(std["mean"]), _decode(std["std"])),
            parameters={k: _decode(v) for k, v in doc["parameters"].items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(f"malformed archive payload: {exc}") from exc
    return ModelArchive(version, model, digest.hex())


def save_model(model: TrainedModel, path) -> None:
    Path(path).write_bytes(dumps_model(model))


def load_model(path, feature_names=None) -> ModelArchive:
    archive = loads_model(Path(path).read_bytes())
    if feature_names is not None:
        archive.check_schema(feature_names)
    return archive
