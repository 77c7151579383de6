"""Certificates and verdicts as JSON documents.

Integers travel as decimal strings so that arbitrarily large scalars
survive any JSON implementation unchanged; fractions as "p/q" strings;
supernatural numbers in their text form; sequences embedded as diagram
documents.  Encoding is deterministic: sorted keys, two-space indent,
trailing newline.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .equiv import (
    Cardinality,
    EquivalenceCertificate,
    Equivalent,
    Intertwining,
    NotEquivalent,
    Unknown,
)
from .fileformat import parse_diagram, serialize_diagram
from .intertwine import DiagonalMap, LadderRung, UnitChangeCertificate
from .supernat import SupernaturalNumber


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _need(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise ValueError(f"certificate document lacks {key!r}")
    return doc[key]


def _int(value, what: str) -> int:
    if not isinstance(value, str) or not value.lstrip("-").isdigit():
        raise ValueError(f"{what} must be a decimal string, got {value!r}")
    return int(value)


def _ints(values, what: str) -> tuple:
    if not isinstance(values, list):
        raise ValueError(f"{what} must be a list")
    return tuple(_int(v, what) for v in values)


def _supernatural(value, what: str):
    if value is None:
        return None
    try:
        return SupernaturalNumber.parse(value)
    except (ValueError, AttributeError) as e:
        raise ValueError(f"{what}: {e}") from e


def unit_change_to_doc(cert: UnitChangeCertificate) -> dict:
    return {
        "kind": "unit-change",
        "sequence": serialize_diagram(cert.seq),
        "alt_unit": [str(v) for v in cert.alt_unit],
        "strategy": cert.strategy,
        "rungs": [
            {
                "level": str(r.level),
                "direction": r.direction,
                "scalar": str(r.scalar),
                "diag": [str(v) for v in r.diag.entries],
            }
            for r in cert.rungs
        ],
        "partial_n": str(cert.partial_n),
        "partial_m": str(cert.partial_m),
        "exact_n": None if cert.exact_n is None else str(cert.exact_n),
        "exact_m": None if cert.exact_m is None else str(cert.exact_m),
    }


def unit_change_from_doc(doc: dict) -> UnitChangeCertificate:
    if _need(doc, "kind") != "unit-change":
        raise ValueError(f"not a unit-change document: kind {doc.get('kind')!r}")
    seq = parse_diagram(_need(doc, "sequence"))
    rungs = []
    for r in _need(doc, "rungs"):
        rungs.append(
            LadderRung(
                _int(_need(r, "level"), "rung level"),
                _need(r, "direction"),
                _int(_need(r, "scalar"), "rung scalar"),
                DiagonalMap(_ints(_need(r, "diag"), "diagonal entry")),
            )
        )
    return UnitChangeCertificate(
        seq,
        _ints(_need(doc, "alt_unit"), "unit entry"),
        _need(doc, "strategy"),
        tuple(rungs),
        _supernatural(_need(doc, "partial_n"), "partial_n"),
        _supernatural(_need(doc, "partial_m"), "partial_m"),
        _supernatural(doc.get("exact_n"), "exact_n"),
        _supernatural(doc.get("exact_m"), "exact_m"),
    )


def _cardinality_to_doc(card: Cardinality) -> dict:
    return {
        "kind": card.kind,
        "count": None if card.count is None else str(card.count),
    }


def _cardinality_from_doc(doc) -> Cardinality:
    kind = _need(doc, "kind")
    count = _need(doc, "count")
    return Cardinality(kind, None if count is None else _int(count, "count"))


def _coords_to_doc(f) -> list:
    # coordinates are 1-based on disk, like the diagram format
    return [str(v + 1) for v in f]


def _coords_from_doc(values, what: str) -> tuple:
    return tuple(v - 1 for v in _ints(values, what))


def verdict_to_doc(verdict, left=None, right=None) -> dict:
    """Encode an equivalence verdict; embeds both sequences so the
    document can be rechecked on its own.  For Equivalent the sequences
    come out of the certificate; otherwise pass them in."""
    if isinstance(verdict, Equivalent):
        cert = verdict.certificate
        tw = cert.intertwining
        return {
            "kind": "equivalence",
            "verdict": "equivalent",
            "left": serialize_diagram(cert.left),
            "right": serialize_diagram(cert.right),
            "left_diagonals": [[str(v) for v in d] for d in cert.left_diagonals],
            "right_diagonals": [[str(v) for v in d] for d in cert.right_diagonals],
            "left_cardinality": _cardinality_to_doc(cert.left_cardinality),
            "right_cardinality": _cardinality_to_doc(cert.right_cardinality),
            "intertwining": {
                "left_levels": [str(v) for v in tw.left_levels],
                "right_levels": [str(v) for v in tw.right_levels],
                "f_maps": [_coords_to_doc(f) for f in tw.f_maps],
                "g_maps": [_coords_to_doc(g) for g in tw.g_maps],
                "closure": tw.closure,
            },
        }
    if isinstance(verdict, NotEquivalent):
        if left is None or right is None:
            raise ValueError("a not-equivalent document needs both sequences")
        return {
            "kind": "equivalence",
            "verdict": "not-equivalent",
            "reason": verdict.reason,
            "left": serialize_diagram(left),
            "right": serialize_diagram(right),
            "left_cardinality": _cardinality_to_doc(verdict.left_cardinality),
            "right_cardinality": _cardinality_to_doc(verdict.right_cardinality),
        }
    if isinstance(verdict, Unknown):
        doc = {
            "kind": "equivalence",
            "verdict": "unknown",
            "depth": str(verdict.depth),
        }
        if left is not None and right is not None:
            doc["left"] = serialize_diagram(left)
            doc["right"] = serialize_diagram(right)
        return doc
    raise ValueError(f"not a verdict: {verdict!r}")


def equivalence_certificate_from_doc(doc: dict) -> EquivalenceCertificate:
    if _need(doc, "kind") != "equivalence" or _need(doc, "verdict") != "equivalent":
        raise ValueError("not an equivalent-verdict document")
    tw_doc = _need(doc, "intertwining")
    tw = Intertwining(
        _ints(_need(tw_doc, "left_levels"), "level"),
        _ints(_need(tw_doc, "right_levels"), "level"),
        tuple(_coords_from_doc(f, "f entry") for f in _need(tw_doc, "f_maps")),
        tuple(_coords_from_doc(g, "g entry") for g in _need(tw_doc, "g_maps")),
        _need(tw_doc, "closure"),
    )

    def diagonals(values):
        return tuple(tuple(Fraction(v) for v in d) for d in values)

    return EquivalenceCertificate(
        parse_diagram(_need(doc, "left")),
        parse_diagram(_need(doc, "right")),
        diagonals(_need(doc, "left_diagonals")),
        diagonals(_need(doc, "right_diagonals")),
        _cardinality_from_doc(_need(doc, "left_cardinality")),
        _cardinality_from_doc(_need(doc, "right_cardinality")),
        tw,
    )


def not_equivalent_from_doc(doc: dict):
    """Returns (NotEquivalent, left sequence, right sequence)."""
    if _need(doc, "kind") != "equivalence" or _need(doc, "verdict") != "not-equivalent":
        raise ValueError("not a not-equivalent-verdict document")
    verdict = NotEquivalent(
        _cardinality_from_doc(_need(doc, "left_cardinality")),
        _cardinality_from_doc(_need(doc, "right_cardinality")),
        _need(doc, "reason"),
    )
    return verdict, parse_diagram(_need(doc, "left")), parse_diagram(_need(doc, "right"))
