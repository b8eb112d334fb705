"""Command-line front end.

Exit status: 0 when a command decides, refutes or validates; 2 when the
result is inconclusive (search cap exceeded, budget limit, a certificate that
cannot be completed); 1 on usage or input errors and invalid certificates.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .adfamily import BinarySeed, SeedError, branch_members, lcp_bound
from .ballean import BalleanError, IntegerLine
from .certificates import (CertificateDocument, CertificateError, dumps, parse_certificate, serialize_certificate,
                           validate_certificate)
from .classify import AbelianSpec, CyclicSumSpec, SpecError, decide_abelian_coarse_equiv, decide_locfin_asymorphic
from .fingen import CountingArgumentError, RefutationError, generate_intervals, refute_fingen_pair
from .locfin import LocFinError, refute_locfin_pair
from .oracle import SearchCapExceeded, minimize_modulus, search_bounded_bijection, search_cap
from .taxonomy import TaxonomyBudgetError, TaxonomyError, classify_subset_taxonomy, space_from_json, subset_from_json

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _seed(text: str) -> BinarySeed:
    try:
        return BinarySeed.parse(text)
    except SeedError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coarse-subsets", description="Coarse subsets of groups: families, refuters, classifiers.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--output", help="write the report to this file (atomically) instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate interval sequences and branch families")
    gsub = gen.add_subparsers(dest="what", required=True, parser_class=_Parser)
    g = gsub.add_parser("intervals")
    g.add_argument("--count", type=_positive, required=True)
    g = gsub.add_parser("adfamily")
    g.add_argument("--seeds", required=True, help="JSON file (or inline JSON) listing 'prefix:period' seeds")
    g.add_argument("--n-max", type=_positive, required=True)

    ref = sub.add_parser("refute", help="build a non-equivalence certificate for two seeds")
    rsub = ref.add_subparsers(dest="case", required=True, parser_class=_Parser)
    r = rsub.add_parser("fingen")
    r.add_argument("--seed-a", type=_seed, required=True)
    r.add_argument("--seed-b", type=_seed, required=True)
    r.add_argument("--r", type=_positive, default=1)
    r.add_argument("--t", type=_positive, default=1)
    r = rsub.add_parser("locfin")
    r.add_argument("--seed-a", type=_seed, required=True)
    r.add_argument("--seed-b", type=_seed, required=True)
    r.add_argument("--t", type=_positive, default=1)
    r.add_argument("--cantor-max", type=_nonneg)

    cl = sub.add_parser("classify", help="decide asymorphism / coarse equivalence of two groups")
    cl.add_argument("kind", choices=("locfin", "abelian"))
    cl.add_argument("--spec-a", required=True, help="group spec JSON file or inline JSON")
    cl.add_argument("--spec-b", required=True)

    tx = sub.add_parser("taxonomy", help="thick/thin/large/small report for a subset of a truncation")
    tx.add_argument("--space", required=True)
    tx.add_argument("--set", required=True, dest="subset")
    tx.add_argument("--budget", type=_nonneg, required=True)

    va = sub.add_parser("validate", help="recompute a certificate from its parameters")
    va.add_argument("--certificate", required=True)

    orc = sub.add_parser("oracle", help="exhaustive bounded-bijection search on a small instance")
    orc.add_argument("--instance", required=True)
    orc.add_argument("--cap", type=_positive)
    return p


# ---------------------------------------------------------------------------
# helpers


def _load_json(arg: str) -> Any:
    text = arg if arg.lstrip().startswith(("{", "[")) else None
    if text is None:
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {arg[:60]!r}: {exc}") from exc


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool):
        raise UsageError(f"{what} must be an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise UsageError(f"{what} must be an integer, got {x!r}")


def _line_from_json(obj: Any) -> IntegerLine:
    if not isinstance(obj, dict) or obj.get("kind", "line") != "line":
        raise UsageError("oracle spaces must be {'kind': 'line', 'points': [...]}")
    if "points" in obj:
        pts = [_int(x, "point") for x in obj["points"]]
    else:
        pts = range(_int(obj.get("lo", 0), "lo"), _int(obj["hi"], "hi") + 1)
    bound = obj.get("truncation_bound")
    return IntegerLine(pts, None if bound is None else _int(bound, "truncation_bound"))


def _bound_table(obj: Any) -> dict | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise UsageError("bounds must map radius to maximal image radius")
    return {_int(k, "radius"): _int(v, "bound") for k, v in obj.items()}


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _text(obj: Any, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        return [line for k in sorted(obj) for line in _text(obj[k], f"{prefix}{k}.")]
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        return [line for i, v in enumerate(obj) for line in _text(v, f"{prefix}{i}.")]
    return [f"{prefix[:-1]}: {json.dumps(obj, ensure_ascii=False)}"]


def _render(report: Any, fmt: str) -> str:
    if isinstance(report, CertificateDocument):
        if fmt == "json":
            return serialize_certificate(report).decode("utf-8")
        report = report.to_json()
    from .certificates import canonical

    report = canonical(report)
    if fmt == "json":
        return dumps(report) + "\n"
    return "\n".join(_text(report)) + "\n"


# ---------------------------------------------------------------------------
# commands


def _cmd_gen(args) -> tuple[int, Any]:
    if args.what == "intervals":
        return EXIT_OK, {"intervals": [list(iv) for iv in generate_intervals(args.count)]}
    raw = _load_json(args.seeds)
    items = raw.get("seeds") if isinstance(raw, dict) else raw
    if not isinstance(items, list) or not items:
        raise UsageError("seed file must be a nonempty list of seeds")
    seeds = [BinarySeed.parse(s) if isinstance(s, str) else BinarySeed.from_json(s) for s in items]
    if len(set(seeds)) != len(seeds):
        raise SeedError("seed list contains duplicates after normalization")
    members = {str(s): branch_members(s, args.n_max) for s in seeds}
    pairs = []
    for i, a in enumerate(seeds):
        for b in seeds[i + 1:]:
            common = sorted(set(members[str(a)]) & set(members[str(b)]))
            pairs.append({"seeds": [str(a), str(b)], "intersection": common, "lcp": lcp_bound(a, b)})
    return EXIT_OK, {"n_max": args.n_max, "members": members, "pairs": pairs}


def _cmd_refute(args) -> tuple[int, Any]:
    if args.case == "fingen":
        try:
            cert = refute_fingen_pair(args.seed_a, args.seed_b, args.r, args.t)
        except CountingArgumentError as exc:
            return EXIT_INCONCLUSIVE, {"case": "fingen", "verdict": "inconclusive", "reason": str(exc)}
        doc = CertificateDocument.from_payload(cert.to_payload())
        return (EXIT_OK if cert.valid else EXIT_INCONCLUSIVE), doc
    cert = refute_locfin_pair(args.seed_a, args.seed_b, args.t, args.cantor_max)
    doc = CertificateDocument.from_payload(cert.to_payload())
    return (EXIT_OK if cert.valid else EXIT_INCONCLUSIVE), doc


def _cmd_classify(args) -> tuple[int, Any]:
    a, b = _load_json(args.spec_a), _load_json(args.spec_b)
    if args.kind == "locfin":
        dec = decide_locfin_asymorphic(CyclicSumSpec.from_json(a), CyclicSumSpec.from_json(b))
    else:
        dec = decide_abelian_coarse_equiv(AbelianSpec.from_json(a), AbelianSpec.from_json(b))
    return EXIT_OK, {"kind": args.kind, **dec.to_json()}


def _cmd_taxonomy(args) -> tuple[int, Any]:
    space = space_from_json(_load_json(args.space))
    A = subset_from_json(_load_json(args.subset), space)
    try:
        rep = classify_subset_taxonomy(space, A, args.budget)
    except TaxonomyBudgetError as exc:
        return EXIT_INCONCLUSIVE, {"verdict": "inconclusive", "reason": str(exc)}
    return EXIT_OK, rep.to_json()


def _cmd_validate(args) -> tuple[int, Any]:
    try:
        data = Path(args.certificate).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.certificate}: {exc}") from exc
    doc = validate_certificate(parse_certificate(data))
    return (EXIT_OK if doc.status == "valid" else EXIT_ERROR), doc


def _cmd_oracle(args) -> tuple[int, Any]:
    inst = _load_json(args.instance)
    if not isinstance(inst, dict):
        raise UsageError("oracle instance must be a JSON object")
    X, A = _line_from_json(inst.get("source")), _line_from_json(inst.get("target"))
    cap = args.cap if args.cap is not None else search_cap()
    inverse = _bound_table(inst.get("inverse_bound"))
    try:
        if "minimize_at" in inst:
            res = minimize_modulus(X, A, _int(inst["minimize_at"], "minimize_at"), inverse, cap)
            return EXIT_OK, {
                "mode": "minimize", "alpha": res.alpha, "minimum": res.value,
                "refuted_below": list(res.refuted_below),
                "witness": sorted([x, y] for x, y in res.witness.items()), "nodes": res.nodes, "cap": cap,
            }
        res = search_bounded_bijection(X, A, _bound_table(inst.get("bound")), inverse, cap)
    except SearchCapExceeded as exc:
        return EXIT_INCONCLUSIVE, {"verdict": "inconclusive", "reason": str(exc), "cap": cap}
    return EXIT_OK, {
        "mode": "search", "status": res.status, "nodes": res.nodes, "cap": cap,
        "bijection": None if res.bijection is None else sorted([x, y] for x, y in res.bijection.items()),
    }


COMMANDS = {"gen": _cmd_gen, "refute": _cmd_refute, "classify": _cmd_classify, "taxonomy": _cmd_taxonomy,
            "validate": _cmd_validate, "oracle": _cmd_oracle}

INPUT_ERRORS = (UsageError, SeedError, SpecError, RefutationError, LocFinError, TaxonomyError, CertificateError,
                BalleanError, ValueError)


def run_command(argv: Sequence[str]) -> tuple[int, Any]:
    """Parse and run one command; returns ``(exit status, report)``."""
    args = build_parser().parse_args(list(argv))
    return COMMANDS[args.command](args)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        code, report = COMMANDS[args.command](args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _write(_render(report, args.format), args.output)
    return code
