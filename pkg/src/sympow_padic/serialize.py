"""JSON encoding of scalars, elements and reports.

Big integers travel as decimal strings.  Every document carries
``schema_version``; loading refuses other versions.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .errors import SchemaError
from .iwasawa import UNKNOWN_TAIL, AlgebraConfig, Growth, IwasawaElement, Poly
from .padic import CyclotomicScalar, PadicScalar

SCHEMA_VERSION = 1
POLE_DIVISOR = "(g0-1)(g0-chi(g0))"


def scalar_to_json(x: PadicScalar) -> dict:
    return {"p": x.p, "val": x.val, "unit": str(x.unit), "prec": x.prec}


def scalar_from_json(d: dict) -> PadicScalar:
    return PadicScalar(int(d["p"]), int(d["val"]), int(d["unit"]), int(d["prec"]))


def cyclotomic_to_json(x: CyclotomicScalar) -> dict:
    return {"p": x.p, "level": x.level, "coeffs": [scalar_to_json(c) for c in x.coeffs]}


def cyclotomic_from_json(d: dict) -> CyclotomicScalar:
    return CyclotomicScalar(int(d["p"]), int(d["level"]), tuple(scalar_from_json(c) for c in d["coeffs"]))


def _num(x: float):
    return x if math.isfinite(x) else str(x)


def _unnum(x) -> float:
    return float(x)


def tail_to_json(t) -> dict:
    if isinstance(t, Poly):
        return {"kind": "poly", "degree": t.degree}
    return {"kind": "growth", "r": _num(t.r), "C": _num(t.C)}


def tail_from_json(d: dict):
    if d["kind"] == "poly":
        return Poly(int(d["degree"]))
    if d["kind"] == "growth":
        return Growth(_unnum(d["r"]), _unnum(d["C"]))
    raise SchemaError(f"unknown tail kind {d['kind']!r}")


def element_to_json(h: IwasawaElement) -> dict:
    cfg = h.config
    return {
        "schema_version": SCHEMA_VERSION,
        "p": cfg.p,
        "N": cfg.N,
        "M": cfg.M,
        "chi_gamma0": str(cfg.u),
        "branches": [
            {"a": a, "pole": bool(h.poles[a]), "coeffs": [scalar_to_json(c) for c in row]}
            for a, row in enumerate(h.branches)
        ],
        "pole_divisor": POLE_DIVISOR if h.has_pole else "none",
        "tail": tail_to_json(h.tail),
    }


def element_from_json(d: dict) -> IwasawaElement:
    _check_version(d)
    cfg = AlgebraConfig(int(d["p"]), int(d["N"]), int(d["M"]), int(d["chi_gamma0"]))
    rows = [None] * (cfg.p - 1)
    poles = [False] * (cfg.p - 1)
    for b in d["branches"]:
        rows[int(b["a"])] = tuple(scalar_from_json(c) for c in b["coeffs"])
        poles[int(b["a"])] = bool(b.get("pole", False))
    if d.get("pole_divisor", "none") not in ("none", POLE_DIVISOR):
        raise SchemaError(f"unknown pole divisor {d['pole_divisor']!r}")
    tail = tail_from_json(d["tail"]) if "tail" in d else UNKNOWN_TAIL
    return IwasawaElement(cfg, tuple(rows), tail, tuple(poles))


def _check_version(d: dict) -> None:
    v = d.get("schema_version")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"schema version {v!r} is not supported (want {SCHEMA_VERSION})")


def to_jsonable(obj):
    """Reports are nested dicts; this turns the exact values inside them into
    JSON-safe ones."""
    if isinstance(obj, PadicScalar):
        return scalar_to_json(obj)
    if isinstance(obj, CyclotomicScalar):
        return cyclotomic_to_json(obj)
    if isinstance(obj, IwasawaElement):
        return element_to_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2 ** 53 else str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return str(obj)


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, fixed separators."""
    doc = dict(doc)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def loads(text: str) -> dict:
    d = json.loads(text)
    _check_version(d)
    return d
