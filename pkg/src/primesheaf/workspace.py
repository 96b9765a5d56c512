"""JSON workspace files: a base ring plus named modules, submodules and elements.

Shape::

    {"ring": {"kind": "integers"} | {"kind": "poly_mod_p", "p": 3},
     "modules":    {"M": {"generators": 2, "relations": [[2, 0], [0, 3]]}},
     "submodules": {"P": {"of": "M", "generators": [[1, 0]]}},
     "elements":   {"m": {"in": "M", "coords": [1, 1]}},
     "notes": "free text, ignored"}

Polynomial entries may be integers (constants), strings such as ``"x^2 + 1"``
or coefficient lists (lowest degree first).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DanglingReferenceError, RaggedMatrixError, WorkspaceError
from .fgmod import Element, FgModule, Submodule
from .ring_core import ZZ, poly_ring


@dataclass
class Workspace:
    ring: object
    modules: dict = field(default_factory=dict)
    submodules: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    notes: str = ""

    def module(self, name: str) -> FgModule:
        try:
            return self.modules[name]
        except KeyError:
            raise DanglingReferenceError(f"undefined module {name!r}") from None

    def submodule(self, name: str) -> Submodule:
        try:
            return self.submodules[name]
        except KeyError:
            raise DanglingReferenceError(f"undefined submodule {name!r}") from None

    def element(self, name: str) -> Element:
        try:
            return self.elements[name]
        except KeyError:
            raise DanglingReferenceError(f"undefined element {name!r}") from None


def _position(text: str, *needles: str):
    """Line/column of the first occurrence of the needles in sequence."""
    pos = 0
    for n in needles:
        i = text.find(n, pos)
        if i < 0:
            break
        pos = i
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _ring(spec, text):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise WorkspaceError("ring descriptor must be an object with a 'kind'", *_position(text, '"ring"'))
    kind = spec["kind"]
    if kind == "integers":
        return ZZ
    if kind == "poly_mod_p":
        p = spec.get("p")
        if not isinstance(p, int) or not ZZ.is_prime(p) or p < 2:
            raise WorkspaceError(f"poly_mod_p needs a prime 'p', got {p!r}", *_position(text, '"ring"', '"p"'))
        return poly_ring(p)
    raise WorkspaceError(f"unknown ring kind {kind!r}", *_position(text, '"ring"', '"kind"'))


def _entry(ring, x, text, *where):
    if isinstance(x, bool):
        raise WorkspaceError(f"bad ring element {x!r}", *_position(text, *where))
    if ring is ZZ and not isinstance(x, int):
        raise WorkspaceError(f"integer expected, got {x!r}", *_position(text, *where))
    try:
        return ring.parse(x)
    except (ValueError, TypeError) as exc:
        raise WorkspaceError(f"bad ring element {x!r}: {exc}", *_position(text, *where)) from None


def _rows(ring, rows, width, text, *where, label="row"):
    if not isinstance(rows, list):
        raise WorkspaceError(f"{label}s must be a list", *_position(text, *where))
    out = []
    for row in rows:
        if not isinstance(row, list):
            raise WorkspaceError(f"{label} must be a list", *_position(text, *where))
        if len(row) != width:
            raise RaggedMatrixError(f"{label} {row} has {len(row)} entries, expected {width}",
                                    *_position(text, *where))
        out.append([_entry(ring, x, text, *where) for x in row])
    return out


def parse_workspace(text: str) -> Workspace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise WorkspaceError("workspace must be a JSON object", 1, 1)
    unknown = set(data) - {"ring", "modules", "submodules", "elements", "notes"}
    if unknown:
        key = sorted(unknown)[0]
        raise WorkspaceError(f"unknown top-level key {key!r}", *_position(text, f'"{key}"'))
    ring = _ring(data.get("ring", {"kind": "integers"}), text)
    ws = Workspace(ring, notes=data.get("notes", ""))

    for name, spec in (data.get("modules") or {}).items():
        where = ('"modules"', f'"{name}"')
        if not isinstance(spec, dict):
            raise WorkspaceError(f"module {name!r} must be an object", *_position(text, *where))
        n = spec.get("generators")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise WorkspaceError(f"module {name!r} needs a nonnegative 'generators' count", *_position(text, *where))
        rels = _rows(ring, spec.get("relations", []), n, text, *where, '"relations"', label="relation row")
        ws.modules[name] = FgModule(ring, n, rels)

    for name, spec in (data.get("submodules") or {}).items():
        where = ('"submodules"', f'"{name}"')
        if not isinstance(spec, dict):
            raise WorkspaceError(f"submodule {name!r} must be an object", *_position(text, *where))
        of = spec.get("of")
        if of not in ws.modules:
            raise DanglingReferenceError(f"submodule {name!r} refers to undefined module {of!r}",
                                         *_position(text, *where, '"of"'))
        M = ws.modules[of]
        gens = _rows(ring, spec.get("generators", []), M.ngens, text, *where, label="generator")
        ws.submodules[name] = Submodule(M, gens)

    for name, spec in (data.get("elements") or {}).items():
        where = ('"elements"', f'"{name}"')
        if not isinstance(spec, dict):
            raise WorkspaceError(f"element {name!r} must be an object", *_position(text, *where))
        of = spec.get("in")
        if of not in ws.modules:
            raise DanglingReferenceError(f"element {name!r} refers to undefined module {of!r}",
                                         *_position(text, *where, '"in"'))
        M = ws.modules[of]
        (vec,) = _rows(ring, [spec.get("coords", [])], M.ngens, text, *where, label="coordinate vector")
        ws.elements[name] = M.element(vec)
    return ws
