"""Model JSON round-tripping.

Complex scalars are stored as [re, im] pairs, matrices as nested lists of
those pairs, so files diff cleanly and parse everywhere.
"""

from __future__ import annotations

import json

import numpy as np

from .aaa import BarycentricModel
from .loewner import StateSpaceModel
from .vectorfit import PoleResidueModel


def _encode(arr: np.ndarray):
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 1:
        return [[z.real, z.imag] for z in arr]
    return [[[z.real, z.imag] for z in row] for row in arr]


def _decode(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def model_to_dict(model, meta: dict | None = None) -> dict:
    if isinstance(model, StateSpaceModel):
        doc = {
            "type": "state_space",
            "order": model.order,
            "E": _encode(model.E),
            "A": _encode(model.A),
            "B": _encode(model.B),
            "C": _encode(model.C),
        }
    elif isinstance(model, BarycentricModel):
        doc = {
            "type": "barycentric",
            "order": model.order,
            "support": _encode(model.support_points),
            "values": _encode(model.support_values),
            "weights": _encode(model.weights),
        }
    elif isinstance(model, PoleResidueModel):
        doc = {
            "type": "pole_residue",
            "order": model.order,
            "poles": _encode(model.poles),
            "residues": _encode(model.residues),
            "d": model.d,
            "h": model.h,
        }
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    if meta:
        doc["meta"] = meta
    return doc


def model_from_dict(doc: dict):
    kind = doc.get("type")
    if kind == "state_space":
        return StateSpaceModel(E=_decode(doc["E"]), A=_decode(doc["A"]), B=_decode(doc["B"]), C=_decode(doc["C"]))
    if kind == "barycentric":
        return BarycentricModel(
            support_points=_decode(doc["support"]),
            support_values=_decode(doc["values"]),
            weights=_decode(doc["weights"]),
        )
    if kind == "pole_residue":
        return PoleResidueModel(
            poles=_decode(doc["poles"]),
            residues=_decode(doc["residues"]),
            d=doc["d"],
            h=doc["h"],
        )
    raise ValueError(f"unknown model type {kind!r}")


def save_model(model, path, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model, meta), fh, indent=1)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
