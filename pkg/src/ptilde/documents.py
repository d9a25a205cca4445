"""JSON documents for skeletons, embeddings, multiplicity-free cases and
pipeline traces.

Rationals are written as strings ``"p/q"`` or ``"n"``; JSON integers are
accepted on input.  Parsing runs in three passes: JSON syntax (errors carry
line and column), structure against a JSON schema (errors carry the path),
then construction and semantic validation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from json.decoder import scanstring
from json.scanner import py_make_scanner
from typing import Any

import jsonschema

from .coloredfan import (
    ColoredData, ColoredFan, FanError, LunaEmbedding, make_fan, validate_embedding, validate_fan,
)
from .criteria import MfsCase
from .gorensteinify import PipelineTrace
from .rootsystems import RootSystem, RootSystemError, parse_root_system
from .skeleton import (
    Color, InvariantDivisor, NegativeInfinity, SphericalSkeleton, TypeAColor, Value,
    validate_skeleton,
)

__all__ = [
    "Document",
    "DocumentError",
    "SyntaxProblem",
    "SchemaProblem",
    "SemanticProblem",
    "parse_document",
    "load_document",
    "serialize_document",
    "skeleton_document",
    "embedding_document",
    "mfs_document",
    "trace_document",
    "parse_rational",
]

KINDS = ("skeleton", "embedding", "fan", "mfs-case", "trace")


class DocumentError(ValueError):
    pass


class SyntaxProblem(DocumentError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line, self.column = line, column


class SchemaProblem(DocumentError):
    def __init__(self, message: str, path: tuple):
        where = "/" + "/".join(str(p) for p in path)
        super().__init__(f"schema violation at {where}: {message}")
        self.path = path


class SemanticProblem(DocumentError):
    def __init__(self, violations: list):
        super().__init__("semantic violations:\n" + "\n".join(f"  {v}" for v in violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class Document:
    """``value`` is a SphericalSkeleton, an (embedding, fan) pair, an MfsCase
    or a PipelineTrace, according to ``kind``."""

    kind: str
    value: Any
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def embedding(self):
        return self.value[0]

    @property
    def fan(self) -> ColoredFan:
        return self.value[1]


# ------------------------------------------------------------ rationals

_RATIONAL = r"^-?[0-9]+(/[0-9]+)?$"
_RATIONAL_RE = re.compile(_RATIONAL)


class _Located(str):
    """A decoded JSON string remembering its offset in the source text."""

    pos: int = -1


def _scan_string(s, end, strict=True):
    value, new_end = scanstring(s, end, strict)
    out = _Located(value)
    out.pos = end - 1
    return out, new_end


class _Decoder(json.JSONDecoder):
    def __init__(self):
        super().__init__()
        self.parse_string = _scan_string
        self.scan_once = py_make_scanner(self)


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_rational(x, text: str = "") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DocumentError(f"not an exact rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str) or not _RATIONAL_RE.match(x):
        raise DocumentError(f"not a rational literal: {x!r}")
    num, _, den = x.partition("/")
    if den and int(den) == 0:
        pos = getattr(x, "pos", -1)
        if pos >= 0 and text:
            raise SyntaxProblem(f"zero denominator in {str(x)!r}", *_line_col(text, pos))
        raise DocumentError(f"zero denominator in {x!r}")
    return Fraction(int(num), int(den) if den else 1)


def _rat_str(q) -> str:
    return str(Fraction(q))


# ------------------------------------------------------------ schema

_RAT = {"anyOf": [{"type": "string", "pattern": _RATIONAL}, {"type": "integer"}]}
_VEC = {"type": "array", "items": _RAT}
_LABEL = {"type": "string", "minLength": 1}
_ROOT = {"anyOf": [
    {"type": "string"},
    {"type": "object", "required": ["labels", "cartan"], "additionalProperties": False,
     "properties": {"labels": {"type": "array", "items": _LABEL},
                    "cartan": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                    "torus": {"type": "array", "items": _LABEL}}},
]}
_COLOR_A = {"type": "object", "required": ["label", "moved_by", "rho"], "additionalProperties": False,
            "properties": {"label": _LABEL, "moved_by": {"type": "array", "items": _LABEL}, "rho": _VEC}}
_GAMMA = {"type": "object", "required": ["label", "rho"], "additionalProperties": False,
          "properties": {"label": _LABEL, "rho": _VEC}}
_COLOR = {"type": "object", "required": ["label", "type", "rho", "m"], "additionalProperties": False,
          "properties": {"label": _LABEL, "type": {"enum": ["a", "2a", "b"]},
                         "moved_by": {"type": "array", "items": _LABEL}, "rho": _VEC, "m": {"type": "integer"}}}
_FAN = {"type": "object", "required": ["rays", "cones"], "additionalProperties": False,
        "properties": {"rays": {"type": "object", "additionalProperties": _VEC},
                       "cones": {"type": "array", "items": {"type": "array", "items": _LABEL}}}}
_LUNA = {
    "root_system": _ROOT,
    "sp": {"type": "array", "items": _LABEL},
    "sigma": {"type": "array", "items": _VEC},
    "m_basis": {"type": "array", "items": _VEC},
    "colors_a": {"type": "array", "items": _COLOR_A},
}
_DATA = {"type": "object", "required": ["rank", "sigma", "colors"], "additionalProperties": False,
         "properties": {"rank": {"type": "integer", "minimum": 0},
                        "sigma": {"type": "array", "items": _VEC},
                        "colors": {"type": "array", "items": _COLOR}}}
_EMBEDDING_BODY = {
    "type": "object",
    "properties": dict(_LUNA, colored_data=_DATA, fan=_FAN, kind={"type": "string"}),
    "additionalProperties": False,
    "oneOf": [{"required": ["root_system", "sigma", "m_basis"]}, {"required": ["colored_data"]}],
}

SCHEMAS = {
    "skeleton": {
        "type": "object", "required": ["kind", "root_system", "sigma"], "additionalProperties": False,
        "properties": {"kind": {"const": "skeleton"}, "root_system": _ROOT,
                       "sp": {"type": "array", "items": _LABEL}, "sigma": {"type": "array", "items": _VEC},
                       "colors_a": {"type": "array", "items": _COLOR_A},
                       "gamma": {"type": "array", "items": _GAMMA}},
    },
    "embedding": dict(_EMBEDDING_BODY, required=["kind", "fan"]),
    "mfs-case": {
        "type": "object", "additionalProperties": False,
        "required": ["kind", "item", "root_system", "rplus_diff", "m", "lambda"],
        "properties": {"kind": {"const": "mfs-case"}, "item": {"type": "integer", "minimum": 1, "maximum": 42},
                       "name": {"type": "string"}, "provenance": {"type": "string"},
                       "params": {"type": "object", "additionalProperties": {"type": "integer"}},
                       "root_system": {"type": "string"}, "sp": {"type": "array", "items": _LABEL},
                       "rplus_diff": {"type": "integer"},
                       "m": {"type": "array", "items": {"type": "integer"}},
                       "lambda": {"type": "array", "items": _VEC},
                       "argmax": {"anyOf": [{"type": "null"}, _VEC]}},
    },
    "trace": {
        "type": "object", "additionalProperties": False,
        "required": ["kind", "input", "lifted", "augmented", "stages"],
        "properties": {
            "kind": {"const": "trace"},
            "input": dict(_EMBEDDING_BODY, required=["fan"]),
            "lifted": {"type": "object", "properties": _LUNA, "additionalProperties": False,
                       "required": ["root_system", "sigma", "m_basis"]},
            "augmented": {"type": "boolean"},
            "stages": {"type": "array", "items": {
                "type": "object", "required": ["name", "fan", "wp"], "additionalProperties": False,
                "properties": {"name": {"type": "string"}, "fan": _FAN, "wp": {"type": "string"}}}},
        },
    },
}
SCHEMAS["fan"] = SCHEMAS["embedding"]


# JSON Schema counts 1.0 as an integer; exact documents must not.
_STRICT = jsonschema.validators.extend(
    jsonschema.Draft202012Validator,
    type_checker=jsonschema.Draft202012Validator.TYPE_CHECKER.redefine(
        "integer", lambda _, x: isinstance(x, int) and not isinstance(x, bool)),
)


def _schema_check(tree, kind: str):
    validator = _STRICT(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(tree), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = errors[0]
        raise SchemaProblem(e.message, tuple(e.absolute_path))


# ------------------------------------------------------------ building


class _Builder:
    def __init__(self, text: str):
        self.text = text

    def q(self, x) -> Fraction:
        return parse_rational(x, self.text)

    def vec(self, xs) -> tuple:
        return tuple(self.q(x) for x in xs)

    def root(self, spec, path) -> RootSystem:
        if isinstance(spec, str):
            try:
                return parse_root_system(str(spec))
            except RootSystemError as exc:
                raise SchemaProblem(str(exc), path) from None
        labels = tuple(str(l) for l in spec["labels"])
        cartan = tuple(tuple(row) for row in spec["cartan"])
        if len(cartan) != len(labels) or any(len(r) != len(labels) for r in cartan):
            raise SchemaProblem("Cartan matrix does not match the labels", path + ("cartan",))
        return RootSystem(labels, cartan, tuple(str(t) for t in spec.get("torus", [])), ())

    def check_dims(self, vecs, dim, path):
        for i, v in enumerate(vecs):
            if len(v) != dim:
                raise SchemaProblem(f"expected {dim} entries, found {len(v)}", path + (i,))

    def check_labels(self, root: RootSystem, labels, path):
        for i, l in enumerate(labels):
            if l not in root.labels:
                raise SchemaProblem(f"unknown simple root {l!r}", path + (i,))

    def unique(self, labels, path):
        seen = set()
        for i, l in enumerate(labels):
            if l in seen:
                raise SchemaProblem(f"duplicate label {l!r}", path + (i,))
            seen.add(l)

    def skeleton(self, t, path=()) -> SphericalSkeleton:
        root = self.root(t["root_system"], path + ("root_system",))
        sigma = [self.vec(g) for g in t["sigma"]]
        self.check_dims(sigma, root.weight_dim, path + ("sigma",))
        sp = [str(l) for l in t.get("sp", [])]
        self.check_labels(root, sp, path + ("sp",))
        colors, gamma = [], []
        for i, c in enumerate(t.get("colors_a", [])):
            self.check_labels(root, c["moved_by"], path + ("colors_a", i, "moved_by"))
            rho = self.vec(c["rho"])
            self.check_dims([rho], len(sigma), path + ("colors_a", i, "rho"))
            colors.append(TypeAColor(str(c["label"]), frozenset(map(str, c["moved_by"])), rho))
        for i, g in enumerate(t.get("gamma", [])):
            rho = self.vec(g["rho"])
            self.check_dims([rho], len(sigma), path + ("gamma", i, "rho"))
            gamma.append(InvariantDivisor(str(g["label"]), rho))
        self.unique([c.label for c in colors] + [g.label for g in gamma], path + ("gamma",))
        return SphericalSkeleton(root, tuple(sigma), frozenset(sp), tuple(colors), tuple(gamma))

    def luna(self, t, path=()) -> LunaEmbedding:
        root = self.root(t["root_system"], path + ("root_system",))
        sigma = [self.vec(g) for g in t["sigma"]]
        basis = [self.vec(b) for b in t["m_basis"]]
        self.check_dims(sigma, root.weight_dim, path + ("sigma",))
        self.check_dims(basis, root.weight_dim, path + ("m_basis",))
        sp = [str(l) for l in t.get("sp", [])]
        self.check_labels(root, sp, path + ("sp",))
        colors = []
        for i, c in enumerate(t.get("colors_a", [])):
            self.check_labels(root, c["moved_by"], path + ("colors_a", i, "moved_by"))
            rho = self.vec(c["rho"])
            self.check_dims([rho], len(basis), path + ("colors_a", i, "rho"))
            colors.append(TypeAColor(str(c["label"]), frozenset(map(str, c["moved_by"])), rho))
        self.unique([c.label for c in colors], path + ("colors_a",))
        try:
            return LunaEmbedding(root, frozenset(sp), tuple(sigma), tuple(basis), tuple(colors))
        except FanError as exc:
            raise SchemaProblem(str(exc), path + ("m_basis",)) from None

    def colored_data(self, t, path) -> ColoredData:
        n = t["rank"]
        sigma = [self.vec(g) for g in t["sigma"]]
        self.check_dims(sigma, n, path + ("sigma",))
        colors = []
        for i, c in enumerate(t["colors"]):
            rho = self.vec(c["rho"])
            self.check_dims([rho], n, path + ("colors", i, "rho"))
            colors.append(Color(str(c["label"]), str(c["type"]), frozenset(map(str, c.get("moved_by", []))),
                                rho, int(c["m"])))
        self.unique([c.label for c in colors], path + ("colors",))
        return ColoredData(n, tuple(sigma), tuple(colors))

    def embedding_of(self, t, path=()):
        if "colored_data" in t:
            return self.colored_data(t["colored_data"], path + ("colored_data",))
        return self.luna(t, path)

    def fan(self, E, t, path) -> ColoredFan:
        rays = {}
        for l, v in t["rays"].items():
            rays[str(l)] = self.vec(v)
            self.check_dims([rays[str(l)]], E.rank, path + ("rays", l))
        for l in rays:
            if l in E.color_map:
                raise SchemaProblem(f"ray label {l!r} clashes with a color", path + ("rays", l))
        for i, cone in enumerate(t["cones"]):
            for j, l in enumerate(cone):
                if l not in rays and l not in E.color_map:
                    raise SchemaProblem(f"unknown ray or color label {str(l)!r}", path + ("cones", i, j))
        return make_fan(rays, [frozenset(map(str, c)) for c in t["cones"]])

    def mfs(self, t) -> MfsCase:
        params = tuple(sorted((str(k), int(v)) for k, v in t.get("params", {}).items()))
        lam = tuple(self.vec(v) for v in t["lambda"])
        m = tuple(int(x) for x in t["m"])
        self.check_dims(lam, len(m), ("lambda",))
        argmax = t.get("argmax")
        if argmax is not None:
            argmax = self.vec(argmax)
            if len(argmax) != len(lam):
                raise SchemaProblem("one coefficient per spherical root expected", ("argmax",))
        sp = t.get("sp")
        return MfsCase(int(t["item"]), params, str(t["root_system"]), int(t["rplus_diff"]), m, lam, argmax,
                       None if sp is None else tuple(map(str, sp)), str(t.get("name", "")))

    def trace(self, t) -> PipelineTrace:
        E = self.embedding_of(t["input"], ("input",))
        E2 = self.luna(t["lifted"], ("lifted",))
        stages, wps = [], []
        for i, s in enumerate(t["stages"]):
            target = E if i == 0 else E2
            stages.append((str(s["name"]), self.fan(target, s["fan"], ("stages", i, "fan"))))
            w = str(s["wp"])
            wps.append((str(s["name"]), NegativeInfinity() if w == "-infinity" else Value(self.q(s["wp"]))))
        return PipelineTrace(E, E2, bool(t["augmented"]), tuple(stages), tuple(wps))


def parse_document(text: str, validate: bool = True) -> Document:
    """Parse and check a document; raise a :class:`DocumentError` subclass."""
    try:
        tree = _Decoder().decode(text)
    except json.JSONDecodeError as exc:
        raise SyntaxProblem(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(tree, dict) or "kind" not in tree:
        raise SchemaProblem("a document is an object with a 'kind' field", ())
    kind = str(tree["kind"])
    if kind not in KINDS:
        raise SchemaProblem(f"unknown kind {kind!r}", ("kind",))
    _schema_check(tree, kind)
    b = _Builder(text)
    if kind == "skeleton":
        R = b.skeleton(tree)
        doc = Document(kind, R)
        violations = validate_skeleton(R) if validate else []
    elif kind in ("embedding", "fan"):
        E = b.embedding_of(tree)
        F = b.fan(E, tree["fan"], ("fan",))
        doc = Document("embedding", (E, F))
        violations = []
        if validate:
            if isinstance(E, LunaEmbedding):
                violations += validate_embedding(E)
            if not violations:
                violations += validate_fan(E, F)
    elif kind == "mfs-case":
        doc = Document(kind, b.mfs(tree), {"provenance": str(tree.get("provenance", ""))})
        violations = []
    else:
        doc = Document(kind, b.trace(tree))
        violations = []
    if violations:
        raise SemanticProblem(violations)
    return doc


def load_document(path, validate: bool = True) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), validate)


# ------------------------------------------------------------ writing


def _root_tree(root: RootSystem):
    if root.components:
        name = root.name()
        try:
            if parse_root_system(name) == root:
                return name
        except RootSystemError:
            pass
    out = {"labels": list(root.labels), "cartan": [list(r) for r in root.cartan]}
    if root.torus:
        out["torus"] = list(root.torus)
    return out


def _vec_tree(v) -> list:
    return [_rat_str(x) for x in v]


def _colors_a_tree(colors) -> list:
    return [{"label": c.label, "moved_by": sorted(c.moved_by), "rho": _vec_tree(c.rho)} for c in colors]


def _luna_tree(E: LunaEmbedding) -> dict:
    return {"root_system": _root_tree(E.root), "sp": sorted(E.sp), "sigma": [_vec_tree(g) for g in E.sigma],
            "m_basis": [_vec_tree(b) for b in E.m_basis], "colors_a": _colors_a_tree(E.colors_a)}


def _embedding_tree(E) -> dict:
    if isinstance(E, LunaEmbedding):
        return _luna_tree(E)
    colors = [{"label": c.label, "type": c.type, "moved_by": sorted(c.moved_by), "rho": _vec_tree(c.rho), "m": c.m}
              for c in E.colors]
    return {"colored_data": {"rank": E.rank, "sigma": [_vec_tree(g) for g in E.sigma_m], "colors": colors}}


def _fan_tree(F: ColoredFan) -> dict:
    return {"rays": {l: _vec_tree(v) for l, v in F.rays}, "cones": [sorted(c) for c in F.cones]}


def skeleton_document(R: SphericalSkeleton) -> dict:
    return {"kind": "skeleton", "root_system": _root_tree(R.root), "sp": sorted(R.sp),
            "sigma": [_vec_tree(g) for g in R.sigma], "colors_a": _colors_a_tree(R.colors_a),
            "gamma": [{"label": g.label, "rho": _vec_tree(g.rho)} for g in R.gamma]}


def embedding_document(E, F: ColoredFan) -> dict:
    return dict({"kind": "embedding"}, **_embedding_tree(E), fan=_fan_tree(F))


def mfs_document(c: MfsCase, provenance: str = "") -> dict:
    out = {"kind": "mfs-case", "item": c.item}
    if c.name:
        out["name"] = c.name
    if provenance:
        out["provenance"] = provenance
    out["params"] = dict(c.params)
    out["root_system"] = c.root_system
    if c.sp is not None:
        out["sp"] = list(c.sp)
    out.update(rplus_diff=c.rplus_diff, m=list(c.m), argmax=None if c.argmax is None else _vec_tree(c.argmax))
    out["lambda"] = [_vec_tree(v) for v in c.lambda_coords]
    return out


def trace_document(T: PipelineTrace) -> dict:
    stages = []
    for (name, fan), (_, wp) in zip(T.stages, T.wp):
        stages.append({"name": name, "fan": _fan_tree(fan), "wp": str(wp)})
    return {"kind": "trace", "input": dict(_embedding_tree(T.embedding), fan=_fan_tree(T.stages[0][1])),
            "lifted": _luna_tree(T.lifted), "augmented": T.augmented, "stages": stages}


def _tree_of(doc) -> dict:
    if isinstance(doc, dict):
        return doc
    v = doc.value
    if doc.kind == "skeleton":
        return skeleton_document(v)
    if doc.kind == "embedding":
        return embedding_document(*v)
    if doc.kind == "mfs-case":
        return mfs_document(v, doc.meta.get("provenance", ""))
    return trace_document(v)


def _format(x, indent: int) -> str:
    """JSON text with one line per list of scalars."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_format(v, indent + 2)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if all(not isinstance(y, (dict, list)) for y in x):
            return "[" + ", ".join(json.dumps(y, ensure_ascii=False) for y in x) + "]"
        return "[\n" + ",\n".join(inner + _format(y, indent + 2) for y in x) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False)


def serialize_document(doc) -> str:
    """Canonical text of a :class:`Document` or a document tree."""
    return _format(_tree_of(doc), 0) + "\n"
