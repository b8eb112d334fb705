"""Canonical JSON documents for refutation certificates, and their re-validation.

Canonical form: keys sorted, no insignificant whitespace, every integer as a
decimal string, every rational as ``"p/q"`` in lowest terms. JSON number
literals are rejected on input, so nothing passes through floating point.
Validation recomputes each certificate from its raw parameters and compares
the result field by field; stored verdicts are never trusted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from .adfamily import BinarySeed, SeedError
from .fingen import RefutationError, generate_intervals, verify_counting_argument
from .locfin import BlockFamily, LocFinCertificate, LocFinError, TracedSubset, check_criterion_conditions

SCHEMA_VERSION = "1"
CASES = ("fingen", "locfin")
STATUSES = ("unvalidated", "valid", "invalid")

_NUMERIC = re.compile(r"-?\d+(/-?\d+)?")


class CertificateError(ValueError):
    pass


def canonical(obj: Any) -> Any:
    """Convert a payload to its canonical JSON-ready form."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, str):
        return obj
    if isinstance(obj, BinarySeed):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise CertificateError(f"cannot serialize {type(obj).__name__} value {obj!r}")


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _is_canonical_numeric(s: str) -> bool:
    try:
        v = Fraction(s)
    except (ValueError, ZeroDivisionError):
        return False
    return canonical(v) == s


def _check_numerics(obj: Any, path: str = "$") -> None:
    if isinstance(obj, bool) or obj is None:
        return
    if isinstance(obj, (int, float)):
        raise CertificateError(f"{path}: JSON number literal {obj!r}; numbers must be decimal strings")
    if isinstance(obj, str):
        if _NUMERIC.fullmatch(obj) and not _is_canonical_numeric(obj):
            raise CertificateError(f"{path}: non-canonical numeric string {obj!r}")
        return
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_numerics(v, f"{path}.{k}")
        return
    for i, v in enumerate(obj):
        _check_numerics(v, f"{path}[{i}]")


def to_int(s: Any, what: str = "value") -> int:
    if not isinstance(s, str) or not re.fullmatch(r"-?\d+", s):
        raise CertificateError(f"{what} must be an integer string, got {s!r}")
    return int(s)


@dataclass(frozen=True)
class CertificateDocument:
    case: str
    payload: dict  # canonical form
    status: str = "unvalidated"
    schema_version: str = SCHEMA_VERSION
    reasons: tuple = field(default=())

    def __post_init__(self):
        if self.case not in CASES:
            raise CertificateError(f"unknown certificate case {self.case!r}")
        if self.status not in STATUSES:
            raise CertificateError(f"unknown status {self.status!r}")

    @classmethod
    def from_payload(cls, payload: dict) -> "CertificateDocument":
        return cls(payload["case"], canonical(payload))

    def to_json(self) -> dict:
        return {"schema_version": self.schema_version, "case": self.case, "payload": self.payload,
                "status": self.status, "reasons": list(self.reasons)}


def serialize_certificate(doc: CertificateDocument) -> bytes:
    return (dumps(doc.to_json()) + "\n").encode("utf-8")


def parse_certificate(data: bytes | str) -> CertificateDocument:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise CertificateError("certificate must be a JSON object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise CertificateError(f"schema version {obj.get('schema_version')!r} is not {SCHEMA_VERSION!r}")
    missing = {"case", "payload", "status"} - set(obj)
    if missing:
        raise CertificateError(f"missing fields: {sorted(missing)}")
    _check_numerics(obj)
    if not isinstance(obj["payload"], dict) or obj["payload"].get("case") != obj["case"]:
        raise CertificateError("payload case does not match the document case")
    return CertificateDocument(obj["case"], obj["payload"], obj["status"], obj["schema_version"],
                               tuple(obj.get("reasons", ())))


# ---------------------------------------------------------------------------
# validation


def _seeds(payload: dict) -> tuple[BinarySeed, BinarySeed]:
    seeds = payload.get("seeds")
    if not isinstance(seeds, list) or len(seeds) != 2:
        raise CertificateError("payload needs two seeds")
    return BinarySeed.parse(seeds[0]), BinarySeed.parse(seeds[1])


def _recompute_fingen(p: dict) -> dict:
    W, W2 = _seeds(p)
    if p.get("default_subsets") is not True:
        raise CertificateError("only certificates for the full interval unions can be recomputed")
    r, t, m = to_int(p["r"], "r"), to_int(p["t"], "t"), to_int(p["m"], "m")
    s = to_int(p["inverse"]["m"], "inverse m") if "inverse" in p else None
    seq = generate_intervals(max(m, s or 0) + 2)
    cert = verify_counting_argument(None, None, r, t, m, seq, (W, W2))
    if s is not None:
        cert = replace(cert, inverse=verify_counting_argument(None, None, r, t, s, seq, (W2, W)))
    return cert.to_payload()


def _recompute_locfin(p: dict) -> dict:
    W, W2 = _seeds(p)
    t, s = to_int(p["t"], "t"), to_int(p["s"], "s")
    cmax = to_int(p["truncation"]["cantor_max"], "cantor_max")
    probes = [to_int(x, "probe") for x in p["probes"]]
    removed = p.get("removed", [[], []])
    subsets = []
    for seed, side in zip((W, W2), removed):
        elems = [frozenset(to_int(i, "coordinate") for i in g) for g in side]
        subsets.append(TracedSubset(BlockFamily(seed, cmax), elems))
    rep = check_criterion_conditions(W, W2, s, t, cmax, probes, subsets[0], subsets[1])
    return LocFinCertificate(rep).to_payload()


def _diff(a: Any, b: Any, path: str = "$") -> list[str]:
    if isinstance(a, dict) and isinstance(b, dict):
        out = []
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}.{k}: present on one side only")
            else:
                out.extend(_diff(a[k], b[k], f"{path}.{k}"))
        return out
    if isinstance(a, list) and isinstance(b, list) and len(a) == len(b):
        return [d for i, (x, y) in enumerate(zip(a, b)) for d in _diff(x, y, f"{path}[{i}]")]
    return [] if a == b else [f"{path}: stored {a!r}, recomputed {b!r}"]


def validate_certificate(doc: CertificateDocument) -> CertificateDocument:
    """Recompute the certificate from its parameters; status ``valid`` iff everything matches."""
    recompute = _recompute_fingen if doc.case == "fingen" else _recompute_locfin
    try:
        fresh = canonical(recompute(doc.payload))
    except (CertificateError, RefutationError, LocFinError, SeedError, KeyError, TypeError) as exc:
        return replace(doc, status="invalid", reasons=(f"recomputation failed: {exc}",))
    reasons = _diff(doc.payload, fresh)
    if not reasons and fresh.get("verdict") != "refuted":
        reasons = [f"recomputed verdict is {fresh.get('verdict')!r}"]
    return replace(doc, status="invalid" if reasons else "valid", reasons=tuple(reasons))
