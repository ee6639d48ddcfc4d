"""JSON quiver documents: parsing, canonical form and serialization.

A document has the top-level fields ``vertices``, ``arrows``, ``f``,
``weights``, ``parameters`` and ``field``.  Weights and parameters are given
per g-cycle and may name any arrow of the cycle; the canonical form keys them
by the cycle representative (smallest arrow id) and lists arrows, f-cycles and
cycle entries in lexicographic order.  ``bar`` and ``g`` are always derived.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .field import FieldSpec, InvalidScalar
from .presentation import WeightedPresentation, generic_parameters
from .quiver import (
    Arrow,
    InvalidWeights,
    MalformedQuiver,
    Quiver,
    TriangulationQuiver,
)

TOP_LEVEL_FIELDS = ("vertices", "arrows", "f", "weights", "parameters", "field")
REQUIRED_FIELDS = ("vertices", "arrows", "f")


@dataclass
class QuiverDocument:
    tq: TriangulationQuiver
    weights: dict[str, int]               # g-cycle representative -> m
    parameters: dict[str, Any] | None     # g-cycle representative -> c (field element)
    field: FieldSpec

    def presentation(self, seed: int = 0, overrides: Mapping[str, object] | None = None,
                     check: bool = True) -> WeightedPresentation:
        """Presentation with the document's parameters, drawing missing ones from ``seed``."""
        fixed = dict(self.parameters or {})
        for key, val in (overrides or {}).items():
            fixed[self.tq.g_cycles.representative(key)] = self.field(val)
        reps = [cyc[0] for cyc in self.tq.g_cycles.cycles]
        if all(rep in fixed for rep in reps):
            c = fixed
        else:
            c = generic_parameters(self.tq, self.weights, self.field, seed=seed, fixed=fixed)
        return WeightedPresentation(self.tq, self.weights, c, self.field, check=check)

    def to_dict(self) -> dict:
        q = self.tq.quiver
        out: dict[str, Any] = {
            "vertices": list(q.vertices),
            "arrows": [{"id": a, "source": q.source(a), "target": q.target(a)} for a in self.tq.arrows],
            "f": [list(c) for c in self.tq.f_cycles.cycles],
            "weights": [{"g_cycle_representative": r, "m": self.weights[r]} for r in sorted(self.weights)],
        }
        if self.parameters is not None:
            out["parameters"] = [{"g_cycle_representative": r, "c": self.field.to_json(self.parameters[r])}
                                 for r in sorted(self.parameters)]
        out["field"] = self.field.characteristic
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def __eq__(self, other):
        if not isinstance(other, QuiverDocument):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _expect(cond: bool, message: str, subject: str | None = None):
    if not cond:
        raise MalformedQuiver(message, subject)


def _per_cycle(tq: TriangulationQuiver, entries, key: str, what: str) -> dict[str, Any]:
    _expect(isinstance(entries, list), f"'{what}' must be a list")
    out: dict[str, Any] = {}
    for entry in entries:
        _expect(isinstance(entry, dict), f"each '{what}' entry must be an object")
        extra = sorted(set(entry) - {"g_cycle_representative", key})
        if extra:
            raise MalformedQuiver(f"unknown field {extra[0]!r} in '{what}' entry", extra[0])
        _expect("g_cycle_representative" in entry and key in entry,
                f"'{what}' entries need 'g_cycle_representative' and '{key}'")
        arrow = entry["g_cycle_representative"]
        _expect(isinstance(arrow, str), f"'{what}' representative must be a string")
        if arrow not in tq.f:
            raise InvalidWeights(f"{what} given for unknown arrow {arrow!r}", arrow)
        rep = tq.g_cycles.representative(arrow)
        if rep in out:
            raise InvalidWeights(f"{what} given twice for the g-cycle of {arrow!r}", arrow)
        out[rep] = entry[key]
    return out


def document_from_data(data: Mapping) -> QuiverDocument:
    _expect(isinstance(data, dict), "document must be a JSON object")
    unknown = [k for k in data if k not in TOP_LEVEL_FIELDS]
    if unknown:
        raise MalformedQuiver(f"unknown field {unknown[0]!r}", unknown[0])
    for k in REQUIRED_FIELDS:
        _expect(k in data, f"missing field {k!r}", k)

    vertices = data["vertices"]
    _expect(isinstance(vertices, list) and all(isinstance(v, str) for v in vertices),
            "'vertices' must be a list of strings")
    arrows = []
    _expect(isinstance(data["arrows"], list), "'arrows' must be a list")
    for entry in data["arrows"]:
        _expect(isinstance(entry, dict) and set(entry) == {"id", "source", "target"},
                "each arrow must be an object with exactly 'id', 'source', 'target'")
        _expect(all(isinstance(entry[k], str) for k in ("id", "source", "target")),
                "arrow fields must be strings")
        arrows.append(Arrow(entry["id"], entry["source"], entry["target"]))
    f = data["f"]
    _expect(isinstance(f, list) and all(isinstance(c, list) and all(isinstance(a, str) for a in c) for c in f),
            "'f' must be a list of cycles of arrow ids")

    tq = TriangulationQuiver(Quiver(tuple(vertices), tuple(arrows)), [tuple(c) for c in f])

    try:
        field = FieldSpec(data.get("field", 101))
    except ValueError as exc:
        raise MalformedQuiver(str(exc), "field") from None

    raw_m = _per_cycle(tq, data.get("weights", []), "m", "weights")
    weights = {}
    for cyc in tq.g_cycles.cycles:
        val = raw_m.get(cyc[0], 1)
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise InvalidWeights(f"weight of the g-cycle of {cyc[0]} must be a positive integer", cyc[0])
        weights[cyc[0]] = val

    parameters = None
    if "parameters" in data:
        parameters = {}
        for rep, val in _per_cycle(tq, data["parameters"], "c", "parameters").items():
            _expect(isinstance(val, (int, str)) and not isinstance(val, bool),
                    f"parameter of {rep} must be an integer or 'num/den'", rep)
            try:
                x = field(val)
            except (InvalidScalar, ZeroDivisionError):
                raise MalformedQuiver(f"cannot read parameter {val!r} of {rep}", rep) from None
            if x == 0:
                raise InvalidWeights(f"parameter of the g-cycle of {rep} must be nonzero", rep)
            parameters[rep] = x
    return QuiverDocument(tq, weights, parameters, field)


def parse_document(text: str) -> QuiverDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedQuiver(f"invalid JSON: {exc}") from None
    return document_from_data(data)


def parse_quiver(text: str) -> TriangulationQuiver:
    return parse_document(text).tq


def document_from_presentation(pres: WeightedPresentation, with_parameters: bool = True) -> QuiverDocument:
    return QuiverDocument(pres.tq, pres.cycle_weights(),
                          pres.cycle_parameters() if with_parameters else None, pres.field)
