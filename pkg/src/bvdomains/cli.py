"""Command-line front end.

Subcommands: matrix, transform, membership, dual, matclass, verify.  Sequence
and matrix specs are JSON; bare words are accepted as shorthand for the
parameterless kinds (e.g. ``--spec cesaro``, ``--spec "inverse_of(phi)"``).
All rationals are serialized as exact ``p/q`` strings and output is
byte-deterministic for identical invocations.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 mathematical error (singular matrix, invalid weights, unsupported class).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, builders, duals, matclass, spaces, verify
from .core import (
    InvalidWeightsError,
    Seq,
    SingularMatrixError,
    Triangle,
    invert,
    rat,
    truncate,
)
from .matclass import BandedMatrix, UnsupportedClassError, apply_general
from .spaces import SpaceId

MAX_TRUNCATION = 4096


class SpecError(ValueError):
    """A malformed sequence/matrix/domain spec (usage error, exit 2)."""


def _load_spec(text: str, what: str):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad {what} JSON at position {exc.pos}: {exc.msg}") from None
    return text  # shorthand word, resolved by the caller


# ---------------------------------------------------------------- sequences

_TAIL_KINDS = ("zero", "const", "harmonic", "power", "geometric", "unit")

_SEQ_SHORTHAND = {
    "e": {"prefix": [], "tail": {"kind": "const", "c": "1"}},
    "zero": {"prefix": [], "tail": {"kind": "zero"}},
    "harmonic": {"prefix": [], "tail": {"kind": "harmonic"}},
}


def parse_seq_spec(text: str):
    """Parse a SeqSpec into (Seq, resolved-spec dict)."""
    return _seq_from_obj(_load_spec(text, "sequence spec"))


def _seq_from_obj(raw):
    if isinstance(raw, str):
        if raw not in _SEQ_SHORTHAND:
            raise SpecError(f"unknown sequence shorthand {raw!r}")
        raw = _SEQ_SHORTHAND[raw]
    if not isinstance(raw, dict):
        raise SpecError("sequence spec must be an object or shorthand word")
    try:
        prefix = [rat(v) for v in raw.get("prefix", [])]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"bad rational in prefix: {exc}") from None
    tail = raw.get("tail", {"kind": "zero"})
    if isinstance(tail, str):
        tail = {"kind": tail}
    kind = tail.get("kind")
    if kind not in _TAIL_KINDS:
        raise SpecError(f"unknown tail kind {kind!r}; choose from {_TAIL_KINDS}")

    resolved = {"prefix": [str(v) for v in prefix], "tail": {"kind": kind}}
    support = None
    if kind == "zero":
        tail_fn = lambda k: Fraction(0)
        support = max(len(prefix) - 1, 0)
    elif kind == "const":
        c = rat(tail.get("c", "0"))
        resolved["tail"]["c"] = str(c)
        tail_fn = lambda k: c
    elif kind == "harmonic":
        tail_fn = lambda k: Fraction(1, k + 1)
    elif kind == "power":
        p = int(tail.get("p", 1))
        if p < 1:
            raise SpecError("power tail requires a positive integer p")
        resolved["tail"]["p"] = p
        tail_fn = lambda k: Fraction(1, (k + 1) ** p)
    elif kind == "geometric":
        r = rat(tail.get("r", "1/2"))
        resolved["tail"]["r"] = str(r)
        tail_fn = lambda k: r**k
    else:  # unit
        j = int(tail.get("j", 0))
        resolved["tail"]["j"] = j
        tail_fn = lambda k: Fraction(1) if k == j else Fraction(0)
        support = max(len(prefix) - 1, j)

    def eval_fn(k: int) -> Fraction:
        if k < len(prefix):
            return prefix[k]
        return tail_fn(k)

    return Seq(eval_fn, support_bound=support, label="spec"), resolved


# ----------------------------------------------------------------- matrices

_SIMPLE_MATRICES = {
    "delta": builders.delta,
    "sum": builders.sigma_sum,
    "cesaro": builders.cesaro,
    "cesaro_inv": builders.cesaro_inverse,
    "phi": builders.phi,
}


def parse_matrix_spec(text: str):
    """Parse a MatrixSpec into (Triangle-or-BandedMatrix, resolved dict)."""
    raw = _load_spec(text, "matrix spec")
    if isinstance(raw, str):
        word = raw
        if word.startswith("inverse_of(") and word.endswith(")"):
            raw = {"kind": "inverse_of", "of": {"kind": word[11:-1]}}
        else:
            raw = {"kind": word}
    return _build_matrix(raw)


def _build_matrix(raw):
    if not isinstance(raw, dict) or "kind" not in raw:
        raise SpecError("matrix spec must be an object with a 'kind' field")
    kind = raw["kind"]
    if kind in _SIMPLE_MATRICES:
        return _SIMPLE_MATRICES[kind](), {"kind": kind}
    if kind in ("weighted", "gamma"):
        u, u_spec = _seq_from_obj(raw.get("u", ""))
        v, v_spec = _seq_from_obj(raw.get("v", ""))
        pair = builders.WeightPair(u, v)
        build = builders.weighted_mean if kind == "weighted" else builders.gamma
        return build(pair), {"kind": kind, "u": u_spec, "v": v_spec}
    if kind in ("riesz", "sigma_riesz"):
        q, q_spec = _seq_from_obj(raw.get("q", ""))
        weights = builders.RieszWeights(q)
        build = builders.riesz if kind == "riesz" else builders.sigma_riesz
        return build(weights), {"kind": kind, "q": q_spec}
    if kind == "inverse_of":
        inner, inner_spec = _build_matrix(raw.get("of", {}))
        if not isinstance(inner, Triangle) or not inner.diag_nonzero:
            raise SpecError("inverse_of requires a triangle with nonzero diagonal")
        return invert(inner), {"kind": "inverse_of", "of": inner_spec}
    if kind == "compose":
        parts = [_build_matrix(p) for p in raw.get("of", [])]
        if len(parts) < 2 or not all(isinstance(m, Triangle) for m, _ in parts):
            raise SpecError("compose requires a list of at least two triangle specs")
        matrix = parts[0][0]
        from .core import compose as _compose

        for m, _ in parts[1:]:
            matrix = _compose(matrix, m)
        return matrix, {"kind": "compose", "of": [s for _, s in parts]}
    if kind == "banded":
        rows = raw.get("rows")
        if not isinstance(rows, list) or not rows:
            raise SpecError("banded spec requires a nonempty 'rows' list")
        try:
            matrix = BandedMatrix.from_rows(rows)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise SpecError(f"bad rational in banded rows: {exc}") from None
        resolved_rows = [[str(v) for v in (rat(x) for x in row)] for row in rows]
        return matrix, {"kind": "banded", "rows": resolved_rows}
    raise SpecError(f"unknown matrix kind {kind!r}")


# ------------------------------------------------------------------ domains


def parse_domain_spec(text: str):
    """Parse a domain spec ("C", or {"label":"G","u":..,"v":..}, or
    {"label":"R","q":..}) into (Domain, resolved dict)."""
    raw = _load_spec(text, "domain spec")
    if isinstance(raw, str):
        raw = {"label": raw}
    label = raw.get("label")
    if label == "C":
        return builders.cesaro_domain(), {"label": "C"}
    if label == "G":
        u, u_spec = _seq_from_obj(raw.get("u", ""))
        v, v_spec = _seq_from_obj(raw.get("v", ""))
        dom = builders.weighted_domain(builders.WeightPair(u, v))
        return dom, {"label": "G", "u": u_spec, "v": v_spec}
    if label == "R":
        q, q_spec = _seq_from_obj(raw.get("q", ""))
        dom = builders.riesz_domain(builders.RieszWeights(q))
        return dom, {"label": "R", "q": q_spec}
    raise SpecError(f"unknown domain label {label!r}; choose C, G, or R")


# ------------------------------------------------------------------- output


def _envelope(command: str, spec: dict, n: int, payload_key: str, payload) -> dict:
    return {
        "tool": "bvdomains",
        "version": __version__,
        "command": command,
        "spec": spec,
        "n": n,
        payload_key: payload,
    }


def _emit(args, text: str) -> None:
    data = text if text.endswith("\n") else text + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _emit_json(args, obj: dict) -> None:
    _emit(args, json.dumps(obj, indent=2, ensure_ascii=True))


def _check_depth(n: int) -> None:
    if not 1 <= n <= MAX_TRUNCATION:
        raise SpecError(f"--n must be in [1, {MAX_TRUNCATION}], got {n}")


# ----------------------------------------------------------------- commands


def cmd_matrix(args) -> int:
    _check_depth(args.n)
    matrix, resolved = parse_matrix_spec(args.spec)
    dense = truncate(matrix, args.n)
    if args.format == "csv":
        lines = [",".join(str(v) for v in row) for row in dense.values]
        _emit(args, "\n".join(lines))
    else:
        entries = [[str(v) for v in row] for row in dense.values]
        _emit_json(args, _envelope("matrix", resolved, args.n, "entries", entries))
    return 0


def cmd_transform(args) -> int:
    _check_depth(args.n)
    matrix, m_spec = parse_matrix_spec(args.matrix)
    x, x_spec = parse_seq_spec(args.x)
    coords = apply_general(matrix, x, args.n)
    if args.format == "csv":
        _emit(args, "\n".join(str(v) for v in coords))
    else:
        spec = {"matrix": m_spec, "x": x_spec}
        _emit_json(
            args,
            _envelope("transform", spec, args.n, "coordinates", [str(v) for v in coords]),
        )
    return 0


def _space(tag: str) -> SpaceId:
    try:
        return SpaceId(tag)
    except ValueError:
        raise SpecError(
            f"unknown space {tag!r}; choose from "
            + ", ".join(s.value for s in SpaceId)
        ) from None


def cmd_membership(args) -> int:
    x, x_spec = parse_seq_spec(args.x)
    space = _space(args.space)
    spec = {"x": x_spec, "space": space.value}
    try:
        if args.domain:
            matrix, m_spec = parse_matrix_spec(args.domain)
            if not isinstance(matrix, Triangle):
                raise SpecError("membership domain must be a triangle spec")
            spec["domain"] = m_spec
            report = spaces.domain_membership(x, matrix, space, args.n)
        else:
            report = spaces.membership(x, space, args.n)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    _emit_json(args, _envelope("membership", spec, args.n, "report", report.to_dict()))
    return 0


def cmd_dual(args) -> int:
    a, a_spec = parse_seq_spec(args.a)
    domain, d_spec = parse_domain_spec(args.domain)
    if args.kind not in duals.DUAL_KINDS:
        raise SpecError(f"--kind must be one of {duals.DUAL_KINDS}")
    try:
        report = duals.dual_test(domain, a, args.kind, args.n)
    except ValueError as exc:
        if isinstance(exc, InvalidWeightsError):
            raise
        raise SpecError(str(exc)) from None
    spec = {"a": a_spec, "domain": d_spec, "kind": args.kind}
    _emit_json(args, _envelope("dual", spec, args.n, "report", report.to_dict()))
    return 0


def cmd_matclass(args) -> int:
    matrix, m_spec = parse_matrix_spec(args.matrix)
    domain, d_spec = parse_domain_spec(args.domain)
    y = _space(args.y)
    spec = {
        "direction": args.direction,
        "matrix": m_spec,
        "domain": d_spec,
        "y": y.value,
    }
    try:
        if args.direction == "from_domain":
            if not isinstance(matrix, BandedMatrix):
                raise SpecError(
                    "from_domain requires a banded matrix spec (finite row supports)"
                )
            report = matclass.class_test_from_domain(matrix, domain, y, args.n)
        else:
            report = matclass.class_test_into_domain(matrix, domain, y, args.n)
    except UnsupportedClassError:
        raise
    except ValueError as exc:
        if isinstance(exc, (InvalidWeightsError, SpecError)):
            raise
        raise SpecError(str(exc)) from None
    _emit_json(args, _envelope("matclass", spec, args.n, "report", report.to_dict()))
    return 0


def cmd_verify(args) -> int:
    try:
        report = verify.run_suite(args.suite, args.n, args.seed)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    envelope = {
        "tool": "bvdomains",
        "version": __version__,
        "command": "verify",
        "policy": spaces.policy_dict(),
        "report": report,
    }
    _emit_json(args, envelope)
    return 0 if report["summary"]["failed"] == 0 else 1


# --------------------------------------------------------------- entrypoint


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvdomains",
        description="Exact-arithmetic toolkit for bounded-variation matrix domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--n", type=int, default=16, help="truncation depth")
        p.add_argument("--out", help="write output to FILE instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("matrix", help="materialize a matrix truncation")
    p.add_argument("--spec", required=True, help="matrix spec (JSON or shorthand)")
    common(p, fmt=True)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("transform", help="apply a matrix to a sequence")
    p.add_argument("--matrix", required=True, help="matrix spec")
    p.add_argument("--x", required=True, help="sequence spec")
    common(p, fmt=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("membership", help="space membership diagnostic")
    p.add_argument("--x", required=True, help="sequence spec")
    p.add_argument("--space", required=True, help="space tag (l1, linf, c, c0, cs, bs, bv, bv0)")
    p.add_argument("--domain", help="optional triangle spec; test Ax instead of x")
    common(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("dual", help="alpha/beta/gamma dual membership test")
    p.add_argument("--a", required=True, help="sequence spec")
    p.add_argument("--domain", required=True, help='domain spec: C, {"label":"G",...}, {"label":"R",...}')
    p.add_argument("--kind", required=True, choices=duals.DUAL_KINDS)
    common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("matclass", help="matrix-class characterization test")
    p.add_argument("--direction", required=True, choices=("from_domain", "into_domain"))
    p.add_argument("--matrix", required=True, help="matrix spec (banded for from_domain)")
    p.add_argument("--domain", required=True, help="domain spec")
    p.add_argument("--y", required=True, help="target/source space tag")
    common(p)
    p.set_defaults(func=cmd_matclass)

    p = sub.add_parser("verify", help="run a bundled verification suite")
    p.add_argument("--suite", default="all", choices=verify.SUITES)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized instances")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, InvalidWeightsError, UnsupportedClassError) as exc:
        print(f"mathematical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
