"""Command-line front end.

Exit codes: 0 when a verdict was computed (whatever it is), 2 for usage
errors, 3 for unreadable or invalid documents, 4 when an internal invariant
check fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .coloredfan import (
    ColoredFan, FanError, LunaEmbedding, is_complete, is_q_gorenstein, validate_fan, wp_tilde_embedding,
)
from .criteria import CriterionError, is_smooth_along, is_toric, run_corpus
from .documents import DocumentError, load_document, serialize_document, trace_document
from .gorensteinify import PipelineError, gorensteinify
from .skeleton import SkeletonError, wp_tilde_skeleton

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


class InputError(Exception):
    pass


class InvariantBreach(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load(path: str, kind: str | None = None):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        doc = load_document(p)
    except DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text ({exc})") from None
    if kind is not None and doc.kind != kind:
        raise InputError(f"{path}: expected a {kind} document, found {doc.kind}")
    return doc


def _resolve_orbit(F: ColoredFan, orbit: str) -> frozenset:
    if orbit == "open":
        return frozenset()
    if orbit == "closed":
        top = max(len(c) for c in F.cones)
        maximal = [c for c in F.cones if not any(c < d for d in F.cones)]
        if len(maximal) != 1:
            raise InputError("'closed' is ambiguous: the fan has several maximal cones")
        return maximal[0] if top else frozenset()
    labels = frozenset(l.strip() for l in orbit.split(",") if l.strip())
    if labels not in set(F.cones):
        raise InputError(f"orbit {orbit!r} is not a cone of the fan")
    return labels


def cmd_validate(args) -> int:
    doc = _load(args.doc)
    print(f"valid {doc.kind} document")
    if doc.kind == "embedding":
        E, F = doc.value
        print(f"rank {E.rank}; {len(F.cones)} cones; complete: {str(is_complete(E, F)).lower()}")
    return EXIT_OK


def cmd_wp(args) -> int:
    if args.skeleton:
        R = _load(args.skeleton, "skeleton").value
        print(wp_tilde_skeleton(R))
    else:
        E, F = _load(args.embedding, "embedding").value
        _require_luna(E)
        print(wp_tilde_embedding(E, F))
    return EXIT_OK


def _require_luna(E):
    if not isinstance(E, LunaEmbedding):
        raise InputError("this command needs root data, not bare colored data")


def cmd_smooth(args) -> int:
    E, F = _load(args.embedding, "embedding").value
    _require_luna(E)
    orbit = _resolve_orbit(F, args.orbit)
    try:
        verdict = is_smooth_along(E, F, orbit)
    except CriterionError as exc:
        raise InputError(str(exc)) from None
    print(verdict)
    print(f"divisors: {', '.join(sorted(verdict.divisors)) or '(none)'}")
    return EXIT_OK


def cmd_toric(args) -> int:
    E, F = _load(args.embedding, "embedding").value
    _require_luna(E)
    try:
        verdict = is_toric(E, F)
    except CriterionError as exc:
        raise InputError(str(exc)) from None
    print(verdict)
    return EXIT_OK


def cmd_gorensteinify(args) -> int:
    E, F = _load(args.embedding, "embedding").value
    _require_luna(E)
    try:
        trace = gorensteinify(E, F)
    except PipelineError as exc:
        raise InputError(str(exc)) from None
    wps = {str(w) for _, w in trace.wp}
    out = trace.output
    report = is_q_gorenstein(trace.lifted, out)
    if len(wps) != 1 or not is_complete(trace.lifted, out) or not report.ok or validate_fan(trace.lifted, out):
        raise InvariantBreach("pipeline output failed its checks")
    Path(args.out).write_text(serialize_document(trace_document(trace)), encoding="utf-8")
    for name, w in trace.wp:
        print(f"{name}: wp = {w}; {len(trace.stage(name).cones)} cones")
    print(f"augmented: {str(trace.augmented).lower()}")
    for cone, functional in report.certificates:
        print(f"certificate {sorted(cone)}: {[str(x) for x in functional]}")
    return EXIT_OK


def cmd_verify_mfs(args) -> int:
    d = Path(args.dir)
    if not d.is_dir():
        raise InputError(f"{args.dir}: no such directory")
    cases = []
    for p in sorted(d.glob("*.json")):
        try:
            doc = load_document(p)
            cases.append((p.name, doc.value if doc.kind == "mfs-case" else DocumentError("not an mfs-case")))
        except (DocumentError, UnicodeDecodeError) as exc:
            cases.append((p.name, exc))
    report = run_corpus(cases, max_rank=args.max_rank, jobs=args.jobs)
    for line in report.lines():
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ptilde", description="Exact checks for spherical skeletons and colored fans.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("validate", help="parse and validate a document")
    s.add_argument("doc")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("wp", help="compute wp of a skeleton or an embedding")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--skeleton")
    g.add_argument("--embedding")
    s.set_defaults(func=cmd_wp)
    s = sub.add_parser("smooth", help="smoothness along an orbit")
    s.add_argument("--embedding", required=True)
    s.add_argument("--orbit", required=True, help="comma-separated cone labels, 'open' or 'closed'")
    s.set_defaults(func=cmd_smooth)
    s = sub.add_parser("toric", help="toricness of a complete embedding")
    s.add_argument("--embedding", required=True)
    s.set_defaults(func=cmd_toric)
    s = sub.add_parser("gorensteinify", help="run the Q-Gorenstein completion pipeline")
    s.add_argument("--embedding", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gorensteinify)
    s = sub.add_parser("verify-mfs", help="check a directory of multiplicity-free cases")
    s.add_argument("--dir", required=True)
    s.add_argument("--max-rank", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify_mfs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantBreach, SkeletonError, FanError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
