"""Dimer JSON parsing, serialization, and the bundled example files."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .dimer import Arrow, Dimer, Face

BUNDLED = ("c3", "conifold", "spp")


class DimerFormatError(Exception):
    """Malformed dimer file; the message names the offending field."""


def _shift(value, where: str):
    if value is None:
        return None
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in value)
    ):
        raise DimerFormatError(f"{where}: shift must be a pair of integers, got {value!r}")
    return (value[0], value[1])


def dimer_from_dict(data: dict) -> Dimer:
    if not isinstance(data, dict):
        raise DimerFormatError("top level: expected an object")
    for key in ("name", "vertices", "arrows", "faces"):
        if key not in data:
            raise DimerFormatError(f"top level: missing field {key!r}")
    arrows = []
    for i, rec in enumerate(data["arrows"]):
        where = f"arrows[{i}]"
        if not isinstance(rec, dict):
            raise DimerFormatError(f"{where}: expected an object")
        for key in ("id", "tail", "head"):
            if key not in rec:
                raise DimerFormatError(f"{where}: missing field {key!r}")
        arrows.append(
            Arrow(rec["id"], rec["tail"], rec["head"], _shift(rec.get("shift"), where))
        )
    faces = []
    for i, rec in enumerate(data["faces"]):
        where = f"faces[{i}]"
        if not isinstance(rec, dict):
            raise DimerFormatError(f"{where}: expected an object")
        sign = rec.get("sign")
        if sign not in ("+", "-"):
            raise DimerFormatError(f"{where}.sign: expected '+' or '-', got {sign!r}")
        boundary = rec.get("boundary")
        if not isinstance(boundary, list) or not boundary:
            raise DimerFormatError(f"{where}.boundary: expected a nonempty list")
        faces.append(Face(+1 if sign == "+" else -1, tuple(boundary)))
    return Dimer(
        name=data["name"],
        vertices=tuple(data["vertices"]),
        arrows=tuple(arrows),
        faces=tuple(faces),
    )


def dimer_to_dict(d: Dimer) -> dict:
    return {
        "name": d.name,
        "vertices": list(d.vertices),
        "arrows": [
            {
                "id": a.id,
                "tail": a.tail,
                "head": a.head,
                "shift": list(a.shift) if a.shift is not None else None,
            }
            for a in d.arrows
        ],
        "faces": [
            {"sign": "+" if f.sign > 0 else "-", "boundary": list(f.boundary)}
            for f in d.faces
        ],
    }


def parse_dimer(path) -> Dimer:
    """Parse and validate a dimer file; invariant failures raise with witnesses."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DimerFormatError(f"{path}: invalid JSON: {exc}") from exc
    d = dimer_from_dict(data)
    report = d.validate()
    if not report.ok:
        raise DimerFormatError(
            f"{path}: invalid dimer: " + "; ".join(i.message for i in report.issues)
        )
    return d


def load_bundled(name: str) -> Dimer:
    if name not in BUNDLED:
        raise DimerFormatError(f"unknown bundled dimer {name!r}; have {BUNDLED}")
    text = resources.files("dimermirror.data").joinpath(f"{name}.json").read_text("utf-8")
    d = dimer_from_dict(json.loads(text))
    d.require_valid()
    return d
