"""Operator document files: parsing, serialization, bundled examples.

A document is JSON with exact rational coefficient strings, keyed by z-power:

    {
      "schema": "pf-operator/1",
      "name": "...",
      "theta_coefficients": {"0": ["0","0","0","0","1"], "1": [...], ...},
      "expected_mum": ["0", "inf"],                    # optional
      "mirror_invariants": {"0": {"degree": 5, "c2_h": 50, "euler": -200}}
    }

``theta_coefficients[j]`` lists the coefficients of Theta^0..Theta^4 in the
z^j slice.  ``mirror_invariants`` is keyed by MUM location and optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .lmhs import MirrorInvariants
from .picard_fuchs import PFOperator


class DocumentError(ValueError):
    """Raised when an operator document cannot be parsed."""


@dataclass(frozen=True)
class OperatorDocument:
    name: str
    theta_coefficients: dict  # {int j: tuple of 5 Fractions}
    expected_mum: tuple = ()
    mirror_invariants: dict = field(default_factory=dict)  # {location str: MirrorInvariants}

    def operator(self) -> PFOperator:
        return PFOperator.from_z_graded(self.theta_coefficients)

    def to_json(self) -> str:
        payload = {
            "schema": "pf-operator/1",
            "name": self.name,
            "theta_coefficients": {
                str(j): [str(c) for c in row]
                for j, row in sorted(self.theta_coefficients.items())
            },
        }
        if self.expected_mum:
            payload["expected_mum"] = list(self.expected_mum)
        if self.mirror_invariants:
            payload["mirror_invariants"] = {
                loc: {"degree": mi.degree, "c2_h": mi.c2_h, "euler": mi.euler}
                for loc, mi in sorted(self.mirror_invariants.items())
            }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "OperatorDocument":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise DocumentError("document must be a JSON object")
        if payload.get("schema") != "pf-operator/1":
            raise DocumentError("unknown or missing schema (want pf-operator/1)")
        raw = payload.get("theta_coefficients")
        if not isinstance(raw, dict) or not raw:
            raise DocumentError("theta_coefficients must be a non-empty object")
        coeffs = {}
        for j, row in raw.items():
            try:
                jj = int(j)
            except ValueError as exc:
                raise DocumentError(f"bad z-power key {j!r}") from exc
            if not isinstance(row, list) or len(row) != 5:
                raise DocumentError(f"z^{j} entry must list five coefficients")
            try:
                coeffs[jj] = tuple(Fraction(str(c)) for c in row)
            except (ValueError, ZeroDivisionError) as exc:
                raise DocumentError(f"bad rational string in z^{j} entry: {exc}") from exc
        mi = {}
        for loc, entry in (payload.get("mirror_invariants") or {}).items():
            try:
                mi[str(loc)] = MirrorInvariants(
                    degree=int(entry["degree"]),
                    c2_h=int(entry["c2_h"]),
                    euler=int(entry["euler"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DocumentError(f"bad mirror invariants at {loc!r}: {exc}") from exc
        doc = OperatorDocument(
            name=str(payload.get("name", "unnamed")),
            theta_coefficients=coeffs,
            expected_mum=tuple(str(x) for x in payload.get("expected_mum", ())),
            mirror_invariants=mi,
        )
        try:
            doc.operator()
        except ValueError as exc:
            raise DocumentError(f"coefficients do not define a valid operator: {exc}") from exc
        return doc

    @staticmethod
    def load(path) -> "OperatorDocument":
        with open(path, "r", encoding="utf-8") as fh:
            return OperatorDocument.from_json(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def bundled_document(name: str) -> OperatorDocument:
    """Load a document shipped with the package (theta4, quintic, two-mum-selfdual)."""
    ref = resources.files("mumhodge").joinpath(f"data/{name}.json")
    return OperatorDocument.from_json(ref.read_text(encoding="utf-8"))


def bundled_names() -> list[str]:
    data_dir = resources.files("mumhodge").joinpath("data")
    return sorted(p.name[:-5] for p in data_dir.iterdir() if p.name.endswith(".json"))
