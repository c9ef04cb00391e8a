"""The phm-v1 interchange format.

A JSON document: {"format": "phm-v1", "rows": M, "cols": N,
"representation": "butson" | "turns" | "cartesian", ...}.  Entries are
integer exponents (butson, with "butson_order"), exact [numerator,
denominator] turn pairs, or [re, im] floating pairs.  Serialization is
byte-deterministic (sorted keys, fixed separators) and the butson
representation round-trips bit for bit.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Optional

from .errors import MatrixFormatError
from .matrix import PHMatrix
from .phases import PhaseEntry

FORMAT_NAME = "phm-v1"
MODULUS_TOL = 1e-6


def to_document(h: PHMatrix, label: Optional[str] = None) -> dict:
    """Choose the tightest representation the entries allow."""
    doc = {"format": FORMAT_NAME, "rows": h.m, "cols": h.n}
    name = label if label is not None else h.label
    if name:
        doc["label"] = name
    grid = h.exact_turn_grid()
    if grid is not None:
        l = 1
        for row in grid:
            for t in row:
                l = l * t.denominator // math.gcd(l, t.denominator)
        doc["representation"] = "butson"
        doc["butson_order"] = l
        doc["entries"] = [[int(t * l) for t in row] for row in grid]
        return doc
    doc["representation"] = "cartesian"
    doc["entries"] = [[[z.real, z.imag] for z in row] for row in h.to_array()]
    return doc


def from_document(doc: dict) -> PHMatrix:
    if not isinstance(doc, dict):
        raise MatrixFormatError("document must be a JSON object")
    if doc.get("format") != FORMAT_NAME:
        raise MatrixFormatError(
            f"unsupported format {doc.get('format')!r}; expected {FORMAT_NAME!r}")
    try:
        m = int(doc["rows"])
        n = int(doc["cols"])
        rep = doc["representation"]
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"missing or malformed field: {exc}") from exc
    if m < 1 or n < 1:
        raise MatrixFormatError("rows and cols must be positive")
    if not isinstance(entries, list) or len(entries) != m \
            or any(not isinstance(r, list) or len(r) != n for r in entries):
        raise MatrixFormatError(f"entries must be a {m} x {n} array")

    rows = []
    if rep == "butson":
        l = doc.get("butson_order")
        if not isinstance(l, int) or l < 1:
            raise MatrixFormatError("butson representation needs a positive "
                                    "integer butson_order")
        for r in entries:
            row = []
            for e in r:
                if not isinstance(e, int):
                    raise MatrixFormatError(f"butson exponent {e!r} is not an integer")
                row.append(PhaseEntry.butson(e, l))
            rows.append(row)
    elif rep == "turns":
        for i, r in enumerate(entries):
            row = []
            for j, e in enumerate(r):
                if isinstance(e, list) and len(e) == 2 \
                        and all(isinstance(x, int) for x in e):
                    if e[1] <= 0:
                        raise MatrixFormatError(
                            f"turn denominator must be positive at ({i},{j})")
                    row.append(PhaseEntry.turns(Fraction(e[0], e[1])))
                elif isinstance(e, int) and not isinstance(e, bool):
                    row.append(PhaseEntry.turns(Fraction(e)))
                elif isinstance(e, float):
                    row.append(PhaseEntry.turns(e))
                else:
                    raise MatrixFormatError(
                        f"turn entry at ({i},{j}) must be [num, den] or a number")
            rows.append(row)
    elif rep == "cartesian":
        for i, r in enumerate(entries):
            row = []
            for j, e in enumerate(r):
                if not (isinstance(e, list) and len(e) == 2
                        and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                for x in e)):
                    raise MatrixFormatError(
                        f"cartesian entry at ({i},{j}) must be [re, im]")
                z = complex(float(e[0]), float(e[1]))
                if abs(abs(z) - 1.0) > MODULUS_TOL:
                    raise MatrixFormatError(
                        f"entry at ({i},{j}) has modulus {abs(z):.9f}, off the "
                        f"unit circle by more than {MODULUS_TOL}")
                row.append(PhaseEntry.cartesian(z, tol=2 * MODULUS_TOL))
            rows.append(row)
    else:
        raise MatrixFormatError(f"unknown representation {rep!r}")
    return PHMatrix(rows, label=doc.get("label"))


def dumps_phm(h: PHMatrix, label: Optional[str] = None) -> str:
    return json.dumps(to_document(h, label), sort_keys=True,
                      separators=(",", ":")) + "\n"


def loads_phm(text: str) -> PHMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"not valid JSON: {exc}") from exc
    return from_document(doc)


def save_phm(h: PHMatrix, path: str, label: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_phm(h, label))


def load_phm(path: str) -> PHMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_phm(fh.read())
