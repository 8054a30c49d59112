"""Command-line front end.

Exit codes: 0 success, 1 domain error (bad input, unsupported case,
resource budget), 2 verification failure (an identity that should hold
did not).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__, affine, embed, heisenberg, suite, verlinde
from .rootsys import LieTypeError, build, load_cached

OUTPUT_SCHEMA = "levelone.cli/1"
CACHE_ENV = "LEVELONE_CACHE_DIR"


class VerificationFailure(Exception):
    """An identity checked by a command did not hold."""


DOMAIN_ERRORS = (
    LieTypeError,
    affine.AlcoveError,
    affine.CharacterBudgetExceeded,
    embed.EmbeddingError,
    heisenberg.HeisenbergError,
    IndexError,
    ValueError,
    OSError,
)
VERIFICATION_ERRORS = (VerificationFailure, embed.BranchingError, verlinde.VerlindeError)


# ---------------------------------------------------------------------------
# parsing helpers


def parse_levels(text: str) -> int | tuple[int, ...]:
    parts = [int(x) for x in text.split(",")]
    return parts[0] if len(parts) == 1 else tuple(parts)


def parse_weight(text: str, rank: int) -> tuple[int, ...]:
    """``0`` for the zero weight, ``w3`` for a fundamental weight, or comma-separated labels."""
    text = text.strip()
    if text == "0":
        return (0,) * rank
    if text.lower().startswith("w"):
        out = [0] * rank
        for piece in text.lower().split("+"):
            i = int(piece.strip().lstrip("w"))
            if not 1 <= i <= rank:
                raise ValueError(f"fundamental weight index {i} out of range 1..{rank}")
            out[i - 1] += 1
        return tuple(out)
    labels = tuple(int(x) for x in text.split(","))
    if len(labels) != rank:
        raise ValueError(f"expected {rank} labels, got {len(labels)}")
    return labels


def parse_labels(text: str | None, rank: int) -> tuple[tuple[int, ...], ...]:
    if not text:
        return ()
    return tuple(parse_weight(piece, rank) for piece in text.split(";"))


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        if obj == 0 or not math.isfinite(obj):
            return 0.0 if obj == 0 else str(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, complex):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    return obj


def emit(args, command: str, result: Any, table_lines: Sequence[str]) -> None:
    if args.output == "json":
        payload = {"schema": OUTPUT_SCHEMA, "version": __version__, "command": command, "result": _jsonable(result)}
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(table_lines) + "\n")


def _cache_dir(args) -> str | None:
    return args.cache_dir or os.environ.get(CACHE_ENV) or None


def _system(args, type_str: str):
    return load_cached(type_str, _cache_dir(args)) if _cache_dir(args) else build(type_str)


# ---------------------------------------------------------------------------
# commands


def cmd_anomaly(args) -> int:
    rs = _system(args, args.type)
    k = parse_levels(args.level)
    c = affine.conformal_anomaly(rs, k)
    rows = [(lw.weight, affine.trace_anomaly(rs, k, lw)) for lw in affine.alcove(rs, k)]
    result = {
        "system": str(rs.type),
        "level": list(affine.alcove(rs, k)[0].level),
        "conformal_anomaly": c,
        "trace_anomalies": [{"lambda": list(w), "delta": d} for w, d in rows],
    }
    lines = [f"{rs.type} level {args.level}: c = {c}"] + [f"  Delta{list(w)} = {d}" for w, d in rows]
    emit(args, "anomaly", result, lines)
    return 0


def cmd_branch(args) -> int:
    e = embed.resolve(args.embedding, args.embedding_file)
    lam = parse_weight(args.weight, e.ambient.rank)
    lw = affine.level_weight(e.ambient, lam, args.level)
    b = embed.branch_affine(e, lw, args.cutoff, args.budget)
    result = b.to_dict()
    result["index"] = list(e.index)
    lines = [f"B({list(lam)}) for {e} at level {args.level}, verified to grade {args.cutoff}:"]
    lines += [f"  mu={list(en.mu.weight)} shift={en.shift} mult={en.mult}" for en in b.entries]
    emit(args, "branch", result, lines)
    return 0


def cmd_verlinde(args) -> int:
    rs = _system(args, args.type)
    k = parse_levels(args.level)
    labels = parse_labels(args.labels, rs.rank)
    q = verlinde.FusionQuery(args.genus, labels)
    dim = verlinde.fusion_dim(rs, k, q, precision=args.precision, cache_dir=_cache_dir(args))
    result = {
        "system": str(rs.type),
        "level": list(affine.alcove(rs, k)[0].level),
        "genus": args.genus,
        "labels": [list(x) for x in labels],
        "dimension": dim,
    }
    emit(args, "verlinde", result, [f"{rs.type} level {args.level} genus {args.genus} labels {list(labels)}: {dim}"])
    return 0


def cmd_factorize(args) -> int:
    rs = _system(args, args.type)
    k = parse_levels(args.level)
    labels = parse_labels(args.labels, rs.rank)
    rep = verlinde.factorization_check(rs, k, args.genus, labels, strict=False, precision=args.precision)
    lines = [f"{rs.type} level {args.level} genus {args.genus}: lhs {rep.lhs} rhs {rep.rhs}"]
    lines += [f"  lambda={list(w)}: {d}" for w, d in rep.terms]
    emit(args, "factorize", rep.to_dict(), lines)
    if not rep.ok:
        raise VerificationFailure(f"factorization fails: {rep.lhs} != {rep.rhs}")
    return 0


def cmd_duality(args) -> int:
    rep = verlinde.strange_duality_dims(args.pair, args.genus, args.precision)
    line = f"{rep['pair'][0]} / {rep['pair'][1]} genus {args.genus}: {rep['dim_a']} vs {rep['dim_b']}"
    if "closed_form" in rep:
        line += f" (closed form {rep['closed_form']})"
    emit(args, "duality", rep, [line])
    if not rep["equal"] or rep.get("closed_form_ok") is False:
        raise VerificationFailure("strange duality dimensions disagree")
    return 0


def cmd_heisenberg(args) -> int:
    sc = heisenberg.load_scenario(args.scenario)
    if args.genus is not None:
        sc = dict(sc, genus=args.genus)
    rep = heisenberg.run_scenario(sc)
    lines = [
        f"{rep['name'] or args.scenario}: Z = {rep['Z']}, g = {rep['genus']}, |M(N)| = {rep['order_MN']}, "
        f"maximal isotropic = {rep['isotropic'] and rep['maximal']}, lifts = {rep.get('lift_count')}, "
        f"invariant dims = {rep.get('invariant_dims')}"
    ]
    emit(args, "heisenberg", rep, lines)
    if not rep["ok"]:
        raise VerificationFailure("scenario does not give a one-dimensional invariant line")
    return 0


def cmd_paper_suite(args) -> int:
    cfg = suite.SuiteConfig(
        cutoff=args.cutoff, embedding_file=args.embedding_file, budget=args.budget, precision=args.precision
    )
    results = []
    for entry in suite.select(args.only):
        res = suite.run_criterion(entry, cfg)
        results.append(res)
        if args.output == "table":
            print(res.line(), flush=True)
    if not results:
        raise ValueError(f"--only {args.only!r} matches no criterion")
    if args.output == "json":
        emit(args, "paper-suite", {"criteria": [r.to_dict() for r in results]}, [])
    return 0 if all(r.ok for r in results) else 2


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, cutoff_default: int = 3) -> None:
    p.add_argument("--cutoff", type=int, default=cutoff_default, help="character cutoff grade N")
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--precision", type=verlinde.Precision.parse, default=verlinde.Precision(),
                   help="'double' (default) or 'high:DIGITS' with DIGITS >= 15")
    p.add_argument("--cache-dir", default=None, help=f"cache directory (env {CACHE_ENV})")
    p.add_argument("--output", choices=("json", "table"), default="table")
    p.add_argument("--embedding-file", default=None, help="embedding JSON overriding the built-in tables")
    p.add_argument("--budget", type=int, default=affine.DEFAULT_CHARACTER_BUDGET,
                   help="character table budget (cells times roots)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levelone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"levelone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("anomaly", help="conformal and trace anomalies")
    p.add_argument("type")
    p.add_argument("level", help="level, or comma-separated levels per component")
    _common(p)
    p.set_defaults(func=cmd_anomaly)

    p = sub.add_parser("branch", help="branching set B(lambda) of a conformal embedding")
    p.add_argument("embedding", help="e.g. e8:D8, e8:A4+A4, e8:G2+F4")
    p.add_argument("weight", help="0, w7, or comma-separated Dynkin labels")
    p.add_argument("--level", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("verlinde", help="Verlinde dimension")
    p.add_argument("type")
    p.add_argument("level")
    p.add_argument("--labels", default=None, help="semicolon-separated weights, e.g. 'w1;w1'")
    _common(p)
    p.set_defaults(func=cmd_verlinde)

    p = sub.add_parser("factorize", help="check the factorization rule")
    p.add_argument("type")
    p.add_argument("level")
    p.add_argument("--labels", default=None)
    _common(p)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("duality", help="strange duality dimensions, e.g. G2:F4")
    p.add_argument("pair")
    _common(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("heisenberg", help="run a Heisenberg scenario file or shipped scenario")
    p.add_argument("scenario", help=f"path or one of {', '.join(heisenberg.shipped_scenarios())}")
    _common(p)
    p.set_defaults(func=cmd_heisenberg)

    p = sub.add_parser("paper-suite", help="run every acceptance check")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers or keys")
    _common(p)
    p.set_defaults(func=cmd_paper_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.genus is None and args.command in ("verlinde", "factorize", "duality"):
        args.genus = 1
    if args.cutoff < 0:
        parser.error("--cutoff must be non-negative")
    try:
        return args.func(args)
    except VERIFICATION_ERRORS as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
