"""
Network Manifests
=================

A network on disk is a JSON manifest plus one NPY file per weight matrix
and bias vector:

    {
      "name": "lenet-300-100",
      "created": "2026-01-01T00:00:00+00:00",
      "seed": 0,
      "layers": [
        {"weights": "layer0_W.npy", "bias": "layer0_b.npy", "activation": "relu"},
        ...
      ]
    }

Paths are relative to the manifest's directory. A pruned manifest keeps
the source's ``created`` value and adds ``pruned_from``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import DimensionMismatch, InvalidParameter, ManifestError
from ..pruning.network import LayerSpec, NetworkSpec
from ..utils import utc_now_iso, write_json
from .npy_format import read_array, write_array

logger = logging.getLogger(__name__)

REQUIRED_LAYER_KEYS: tuple[str, ...] = ("weights", "bias", "activation")


@dataclass
class NetworkManifest:
    name: str
    created: str
    seed: int
    layers: list[dict[str, str]] = field(default_factory=list)
    pruned_from: str | None = None

    def as_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "name": self.name,
            "created": self.created,
            "seed": self.seed,
            "layers": self.layers,
        }
        if self.pruned_from is not None:
            payload["pruned_from"] = self.pruned_from
        return payload


def load_manifest(path: str | Path) -> tuple[NetworkSpec, NetworkManifest]:
    """
    Read a manifest and every array it references.

    Raises:
        ManifestError: Unparseable JSON, missing keys or files, or layers
                       whose dimensions do not chain.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as exc:
        raise ManifestError(f"manifest not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from exc

    if not isinstance(doc, dict) or not isinstance(doc.get("layers"), list) or not doc["layers"]:
        raise ManifestError(f"{path}: manifest needs a nonempty 'layers' list")

    base = path.parent
    layers = []
    for k, entry in enumerate(doc["layers"]):
        missing = [key for key in REQUIRED_LAYER_KEYS if key not in entry]
        if missing:
            raise ManifestError(f"{path}: layer {k} is missing {missing}")
        files = {}
        for key in ("weights", "bias"):
            file_path = base / entry[key]
            if not file_path.exists():
                raise ManifestError(f"{path}: layer {k} {key} file not found: {file_path}")
            files[key] = read_array(file_path)
        try:
            layers.append(LayerSpec(files["weights"], files["bias"].reshape(-1), entry["activation"]))
        except (DimensionMismatch, InvalidParameter) as exc:
            raise ManifestError(f"{path}: layer {k}: {exc}") from exc

    try:
        net = NetworkSpec.of(layers)
    except DimensionMismatch as exc:
        raise ManifestError(f"{path}: {exc}") from exc

    manifest = NetworkManifest(
        name=str(doc.get("name", path.stem)),
        created=str(doc.get("created", "")),
        seed=int(doc.get("seed", 0)),
        layers=[{key: str(entry[key]) for key in REQUIRED_LAYER_KEYS} for entry in doc["layers"]],
        pruned_from=doc.get("pruned_from"),
    )
    logger.info("loaded %s: widths %s", path, net.widths)
    return net, manifest


def save_network(
    net: NetworkSpec,
    path: str | Path,
    name: str,
    seed: int = 0,
    created: str | None = None,
    pruned_from: str | None = None,
) -> NetworkManifest:
    """
    Write ``net`` as ``path`` (the manifest) plus ``<stem>_layer{k}_W.npy`` /
    ``<stem>_layer{k}_b.npy`` next to it.
    """
    path = Path(path)
    stem = path.stem
    entries = []
    for k, layer in enumerate(net.layers):
        weights = f"{stem}_layer{k}_W.npy"
        bias = f"{stem}_layer{k}_b.npy"
        write_array(path.parent / weights, layer.W)
        write_array(path.parent / bias, layer.b)
        entries.append({"weights": weights, "bias": bias, "activation": layer.activation})

    manifest = NetworkManifest(
        name=name,
        created=created if created is not None else utc_now_iso(),
        seed=seed,
        layers=entries,
        pruned_from=pruned_from,
    )
    write_json(path, manifest.as_dict())
    return manifest
