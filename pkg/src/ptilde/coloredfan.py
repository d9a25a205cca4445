"""Luna data of a spherical homogeneous space and colored fans over it.

Weights are in the root-plus-torus coordinates of :mod:`ptilde.rootsystems`.
The lattice ``M`` is given by a basis of such weights; elements of ``N`` are
coordinate vectors dual to that basis.  A colored cone is stored as a set of
labels: names of invariant rays of the fan together with its colors.  The
cone is generated by the vectors of all its labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from .exactgeom import (
    Cone, Infeasible, LPValue, Polyhedron, Unbounded, double_description, dot, is_zero,
    maximize, primitive, rank, region_covered, scale, solve_linear, solve_lp_sup, vector,
)
from .rootsystems import RootSystem, kappa
from .skeleton import (
    Color, InvariantDivisor, NegativeInfinity, SphericalSkeleton, TypeAColor, Value,
    Violation, color_data, rplus_diff, sum_in_sigma, validate_skeleton,
)

__all__ = [
    "LunaEmbedding",
    "ColoredFan",
    "ColoredData",
    "FanError",
    "make_fan",
    "valuation_cone",
    "validate_embedding",
    "validate_fan",
    "is_genuine",
    "faces_of",
    "close_fan",
    "canonical",
    "cone_of",
    "delta_of",
    "GorensteinReport",
    "is_complete",
    "is_q_gorenstein",
    "wp_tilde_embedding",
    "skeleton_of_embedding",
    "colored_star_subdivision",
    "support_in_v_covered",
    "same_support_in_v",
    "orbit_divisor_set",
    "codirectional_classify",
    "NOT_CODIRECTIONAL",
    "TYPE_A_EQUAL",
    "TYPE_B_PROPORTIONAL",
]

NOT_CODIRECTIONAL = "NotCodirectional"
TYPE_A_EQUAL = "TypeA_Equal"
TYPE_B_PROPORTIONAL = "TypeB_Proportional"


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class LunaEmbedding:
    """Root data, spherical roots, a basis of ``M`` and the type-a colors.

    Type-a colors carry ``rho`` in ``N`` coordinates.  Colors of type 2a and
    b are derived from the coroots.
    """

    root: RootSystem
    sp: frozenset
    sigma: tuple
    m_basis: tuple
    colors_a: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sp", frozenset(self.sp))
        object.__setattr__(self, "sigma", tuple(vector(g) for g in self.sigma))
        object.__setattr__(self, "m_basis", tuple(vector(b) for b in self.m_basis))
        object.__setattr__(self, "colors_a", tuple(
            TypeAColor(c.label, frozenset(c.moved_by), vector(c.rho)) for c in self.colors_a))
        for b in self.m_basis:
            if len(b) != self.root.weight_dim:
                raise FanError("basis of M has wrong weight dimension")
        if rank(self.m_basis, self.root.weight_dim) != len(self.m_basis):
            raise FanError("basis of M is linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.m_basis)

    def to_m(self, chi: Sequence) -> tuple | None:
        """Coordinates of a weight in the basis of M, or None outside its span."""
        cols = [[b[i] for b in self.m_basis] for i in range(self.root.weight_dim)]
        return solve_linear(cols, vector(chi), self.rank)

    @cached_property
    def sigma_m(self) -> tuple:
        out = []
        for g in self.sigma:
            c = self.to_m(g)
            if c is None:
                raise FanError(f"spherical root {g} is not in the span of M")
            out.append(c)
        return tuple(out)

    @cached_property
    def colors(self) -> tuple[Color, ...]:
        return color_data(self.root, self.sp, self.sigma, self.colors_a, self.m_basis)

    @cached_property
    def color_map(self) -> dict:
        return {c.label: c for c in self.colors}

    @cached_property
    def kappa(self) -> tuple:
        return kappa(self.root, self.sp)


@dataclass(frozen=True)
class ColoredData:
    """Colors and spherical roots given directly in ``N`` and ``M`` coordinates.

    Useful for colored configurations that need not come from root data;
    it offers the part of the :class:`LunaEmbedding` interface used by fan
    operations.
    """

    rank: int
    sigma_m: tuple
    colors: tuple  # of Color

    def __post_init__(self):
        object.__setattr__(self, "sigma_m", tuple(vector(g) for g in self.sigma_m))
        object.__setattr__(self, "colors", tuple(
            Color(c.label, c.type, frozenset(c.moved_by), vector(c.rho), c.m) for c in self.colors))

    @cached_property
    def color_map(self) -> dict:
        return {c.label: c for c in self.colors}


@dataclass(frozen=True)
class ColoredFan:
    """Invariant rays by label and cones as label sets.

    ``abstract`` marks fans that may hold cones whose relative interior
    misses the valuation cone.
    """

    rays: tuple
    cones: tuple
    abstract: bool = False

    @cached_property
    def ray_map(self) -> dict:
        return dict(self.rays)

    def colors_of(self, cone: frozenset) -> frozenset:
        return frozenset(l for l in cone if l not in self.ray_map)

    def invariant_of(self, cone: frozenset) -> frozenset:
        return frozenset(l for l in cone if l in self.ray_map)

    @cached_property
    def used_rays(self) -> tuple:
        used = set().union(*self.cones) if self.cones else set()
        return tuple(l for l, _ in self.rays if l in used)


def _cone_key(c: frozenset):
    return (len(c), sorted(c))


def make_fan(rays: Iterable, cones: Iterable[Iterable[str]], abstract: bool = False) -> ColoredFan:
    rays = tuple(sorted(((l, vector(v)) for l, v in (rays.items() if isinstance(rays, Mapping) else rays)),
                        key=lambda p: p[0]))
    cs = sorted({frozenset(c) for c in cones}, key=_cone_key)
    return ColoredFan(rays, tuple(cs), abstract)


# ---------------------------------------------------------- geometry


def _vec(E: LunaEmbedding, F: ColoredFan, label: str) -> tuple:
    if label in F.ray_map:
        return F.ray_map[label]
    if label in E.color_map:
        return E.color_map[label].rho
    raise FanError(f"unknown label {label!r}")


def _m_of(E: LunaEmbedding, F: ColoredFan, label: str) -> int:
    if label in F.ray_map:
        return 1
    return E.color_map[label].m


def cone_of(E: LunaEmbedding, F: ColoredFan, labels: Iterable[str]) -> Cone:
    labels = sorted(labels)
    return Cone([_vec(E, F, l) for l in labels], dim=E.rank, labels=labels)


def valuation_cone(E: LunaEmbedding) -> Cone:
    """``{v : <v, gamma> <= 0 for gamma in Sigma}`` by generators."""
    n = E.rank
    lin, rays = double_description([scale(-1, g) for g in E.sigma_m], n)
    gens = list(rays) + list(lin) + [scale(-1, v) for v in lin]
    return Cone(gens, dim=n)


def _in_v(E: LunaEmbedding, v: Sequence) -> bool:
    return all(dot(v, g) <= 0 for g in E.sigma_m)


def _relint_meets_v(E: LunaEmbedding, vecs: Sequence[Sequence]) -> bool:
    """Whether some strictly positive combination of ``vecs`` lies in V."""
    return _relint_meets_v_cached(tuple(E.sigma_m), tuple(tuple(v) for v in vecs))


@lru_cache(maxsize=65536)
def _relint_meets_v_cached(sigma_m: tuple, vecs: tuple) -> bool:
    k = len(vecs)
    if k == 0:
        return True
    ineqs = []
    for j in range(k):
        ineqs.append((tuple(Fraction(int(i == j)) for i in range(k)), 1))
    for g in sigma_m:
        ineqs.append((tuple(-dot(v, g) for v in vecs), 0))
    return isinstance(maximize([0] * k, ineqs, dim=k), LPValue)


def is_genuine(E: LunaEmbedding, F: ColoredFan, cone: Iterable[str]) -> bool:
    return _relint_meets_v(E, [_vec(E, F, l) for l in sorted(cone)])


def canonical(E: LunaEmbedding, F: ColoredFan, cone: Iterable[str]) -> frozenset:
    """Drop invariant labels that do not span an extreme ray."""
    cone = frozenset(cone)
    inv = [l for l in cone if l in F.ray_map]
    if not inv:
        return cone
    C = cone_of(E, F, cone)
    rays = {tuple(r) for r in C.rays}
    keep = {l for l in inv if tuple(primitive(F.ray_map[l])) in rays}
    return frozenset(l for l in cone if l not in F.ray_map or l in keep)


def faces_of(E: LunaEmbedding, F: ColoredFan, cone: Iterable[str], genuine: bool = True) -> list[frozenset]:
    """Colored faces of a cone as label sets; abstract ones too unless ``genuine``."""
    cone = frozenset(cone)
    if not cone:
        return [cone]
    C = cone_of(E, F, cone)
    out = set()
    for face in C.face_label_sets():
        face = canonical(E, F, face)
        if not genuine or is_genuine(E, F, face):
            out.add(face)
    return sorted(out, key=_cone_key)


def close_fan(E: LunaEmbedding, F: ColoredFan, genuine: bool = True) -> ColoredFan:
    """Add faces and drop non-genuine cones (or keep them for abstract fans)."""
    cones = set()
    for c in F.cones:
        c = canonical(E, F, c)
        if genuine and not is_genuine(E, F, c):
            continue
        cones.update(faces_of(E, F, c, genuine))
    return make_fan(F.rays, cones, abstract=not genuine)


def _relints_meet_in_v(E: LunaEmbedding, a: Sequence, b: Sequence) -> bool:
    return _relints_meet_cached(tuple(E.sigma_m), E.rank, tuple(map(tuple, a)), tuple(map(tuple, b)))


@lru_cache(maxsize=65536)
def _relints_meet_cached(sigma_m: tuple, n: int, a: tuple, b: tuple) -> bool:
    ka, kb = len(a), len(b)
    k = ka + kb
    if k == 0:
        return True
    ineqs = [(tuple(Fraction(int(i == j)) for i in range(k)), 1) for j in range(k)]
    for g in sigma_m:
        ineqs.append((tuple(-dot(v, g) for v in a) + (Fraction(0),) * kb, 0))
    eqs = []
    for i in range(n):
        eqs.append((tuple(v[i] for v in a) + tuple(-v[i] for v in b), 0))
    return isinstance(maximize([0] * k, ineqs, eqs, dim=k), LPValue)


# ---------------------------------------------------------- validation


def validate_embedding(E: LunaEmbedding) -> list[Violation]:
    """Lattice conditions on ``M`` plus the skeleton axioms evaluated on ``M``."""
    out: list[Violation] = []
    root = E.root
    try:
        sig = E.sigma_m
    except FanError as exc:
        return [Violation("M", str(exc))]
    for i, c in enumerate(sig):
        if any(x.denominator != 1 for x in c):
            out.append(Violation("M", f"spherical root {i} is not in M", (i,)))
        elif tuple(primitive(c)) != tuple(c):
            out.append(Violation("M", f"spherical root {i} is not primitive in M", (i,)))
    for a in sorted(E.sp):
        if a not in root.labels:
            out.append(Violation("S", f"unknown root {a} in Sp", (a,)))
            continue
        for j, b in enumerate(E.m_basis):
            if root.pair(a, b) != 0:
                out.append(Violation("S", f"<{a}^vee, m_{j}> != 0", (a, j)))
    for c in E.colors_a:
        if len(c.rho) != E.rank:
            out.append(Violation("shape", f"{c.label}: rho has wrong length", (c.label,)))
        elif any(x.denominator != 1 for x in c.rho):
            out.append(Violation("A1", f"{c.label}: rho is not in N", (c.label,)))
    if out:
        return out
    # axioms on M: A2 with the coroot on M, Sigma2 on M
    for a in root.labels:
        mine = [c for c in E.colors_a if a in c.moved_by]
        if not mine:
            continue
        if len(mine) == 2:
            total = tuple(x + y for x, y in zip(mine[0].rho, mine[1].rho))
            if total != tuple(root.pair(a, b) for b in E.m_basis):
                out.append(Violation("A2", f"rho({mine[0].label}) + rho({mine[1].label}) != {a}^vee on M",
                                     (a, mine[0].label, mine[1].label)))
    for i, a in enumerate(root.labels):
        for b in root.labels[i + 1:]:
            if root.orthogonal(a, b) and sum_in_sigma(root, E.sigma, a, b):
                if tuple(root.pair(a, x) for x in E.m_basis) != tuple(root.pair(b, x) for x in E.m_basis):
                    out.append(Violation("Sigma2", f"{a}^vee != {b}^vee on M", (a, b)))
    skel = SphericalSkeleton(root, E.sigma, E.sp, tuple(
        TypeAColor(c.label, c.moved_by, tuple(dot(c.rho, g) for g in sig)) for c in E.colors_a))
    out.extend(validate_skeleton(skel))
    for c in E.colors:
        if c.type != "a" and any(x.denominator != 1 for x in c.rho):
            out.append(Violation("M", f"{c.label}: rho is not integral on M", (c.label,)))
    return out


def validate_fan(E: LunaEmbedding, F: ColoredFan) -> list[Violation]:
    out: list[Violation] = []
    n = E.rank
    for l, v in F.rays:
        if l in E.color_map:
            out.append(Violation("fan", f"ray label {l} clashes with a color", (l,)))
        if len(v) != n:
            out.append(Violation("fan", f"ray {l} has wrong dimension", (l,)))
            return out
        if is_zero(v):
            out.append(Violation("fan", f"ray {l} is zero", (l,)))
        elif not _in_v(E, v):
            out.append(Violation("fan", f"ray {l} is not in the valuation cone", (l,)))
        if any(x.denominator != 1 for x in v):
            out.append(Violation("fan", f"ray {l} is not in N", (l,)))
    for cone in F.cones:
        unknown = sorted(l for l in cone if l not in F.ray_map and l not in E.color_map)
        if unknown:
            out.append(Violation("fan", f"cone {sorted(cone)} has unknown labels {unknown}", (tuple(sorted(cone)),)))
    if out:
        return out
    known = set(F.cones)
    for cone in F.cones:
        key = tuple(sorted(cone))
        for l in F.colors_of(cone):
            if is_zero(E.color_map[l].rho):
                out.append(Violation("fan", f"color {l} with rho = 0 in cone {list(key)}", (key, l)))
        C = cone_of(E, F, cone)
        if not C.is_pointed():
            out.append(Violation("fan", f"cone {list(key)} is not strictly convex", (key,)))
            continue
        if not F.abstract and not is_genuine(E, F, cone):
            out.append(Violation("fan", f"cone {list(key)} misses the valuation cone", (key,)))
        for face in faces_of(E, F, cone, genuine=not F.abstract):
            if face not in known:
                out.append(Violation("fan", f"face {sorted(face)} of {list(key)} is missing", (key, tuple(sorted(face)))))
    cones = list(F.cones)
    vecs = [[_vec(E, F, l) for l in sorted(c)] for c in cones]
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            if _relints_meet_in_v(E, vecs[i], vecs[j]):
                out.append(Violation("fan", f"cones {sorted(cones[i])} and {sorted(cones[j])} overlap on V",
                                     (tuple(sorted(cones[i])), tuple(sorted(cones[j])))))
    return out


def is_complete(E: LunaEmbedding, F: ColoredFan) -> bool:
    """Whether the cones cover the valuation cone, by exact subtraction."""
    facets = [scale(-1, g) for g in E.sigma_m]
    cones = [cone_of(E, F, c) for c in F.cones if c]
    if not cones:
        cones = [Cone([], dim=E.rank)] if F.cones else []
    return region_covered(facets, [], cones, E.rank)


@dataclass(frozen=True)
class GorensteinReport:
    ok: bool
    certificates: tuple  # (cone, f or None)

    def __bool__(self):
        return self.ok


def is_q_gorenstein(E: LunaEmbedding, F: ColoredFan) -> GorensteinReport:
    """Per cone, a linear ``f`` with ``<rho(D), f> = m_D`` on all its labels."""
    certs = []
    ok = True
    for cone in F.cones:
        labels = sorted(cone)
        rows = [_vec(E, F, l) for l in labels]
        rhs = [_m_of(E, F, l) for l in labels]
        f = solve_linear(rows, rhs, E.rank) if rows else tuple(Fraction(0) for _ in range(E.rank))
        if f is None:
            ok = False
        certs.append((frozenset(cone), f))
    return GorensteinReport(ok, tuple(certs))


# ---------------------------------------------------------------- wp


def delta_of(E: LunaEmbedding, F: ColoredFan) -> list[tuple[str, tuple, int]]:
    """All colors and the invariant rays used by the fan, with ``m``."""
    out = [(c.label, c.rho, c.m) for c in E.colors]
    out += [(l, F.ray_map[l], 1) for l in F.used_rays]
    return out


def wp_tilde_embedding(E: LunaEmbedding, F: ColoredFan) -> Value | NegativeInfinity:
    n = E.rank
    ds = delta_of(E, F)
    P = Polyhedron([(rho, -m) for _, rho, m in ds], n)
    T = Cone(E.sigma_m, dim=n) if E.sigma_m else Cone([], dim=n)
    objective = [sum((rho[i] for _, rho, _ in ds), Fraction(0)) for i in range(n)]
    res = solve_lp_sup(P, T, objective)
    if isinstance(res, Unbounded):
        return NegativeInfinity()
    if isinstance(res, Infeasible):
        raise FanError("internal error: Q* ∩ cone(Sigma) is empty")
    shift = sum(m - 1 for _, _, m in ds)
    return Value(rplus_diff(E.root, E.sp) - shift - res.value, res.argmax)


def skeleton_of_embedding(E: LunaEmbedding, F: ColoredFan) -> SphericalSkeleton:
    sig = E.sigma_m
    colors = tuple(TypeAColor(c.label, c.moved_by, tuple(dot(c.rho, g) for g in sig)) for c in E.colors_a)
    gamma = tuple(InvariantDivisor(l, tuple(dot(F.ray_map[l], g) for g in sig)) for l in F.used_rays)
    return SphericalSkeleton(E.root, E.sigma, E.sp, colors, gamma)


# ----------------------------------------------------- orbits, colors


def orbit_divisor_set(E: LunaEmbedding, F: ColoredFan, orbit: Iterable[str]) -> frozenset:
    """Colors of the orbit's cone and the invariant rays lying in it."""
    orbit = frozenset(orbit)
    if orbit not in set(F.cones):
        raise FanError(f"cone {sorted(orbit)} is not in the fan")
    C = cone_of(E, F, orbit) if orbit else Cone([], dim=E.rank)
    inv = {l for l in F.used_rays if C.contains(F.ray_map[l])}
    return frozenset(F.colors_of(orbit)) | frozenset(inv)


def codirectional_classify(E: LunaEmbedding, d1: str, d2: str) -> str:
    if d1 == d2:
        raise FanError("colors must be distinct")
    c1, c2 = E.color_map[d1], E.color_map[d2]
    if is_zero(c1.rho) or is_zero(c2.rho) or primitive(c1.rho) != primitive(c2.rho):
        return NOT_CODIRECTIONAL
    if c1.type == "a" and c2.type == "a":
        if c1.rho != c2.rho:
            raise FanError(f"codirectional type-a colors {d1}, {d2} with different rho")
        return TYPE_A_EQUAL
    if c1.type == "b" and c2.type == "b":
        return TYPE_B_PROPORTIONAL
    raise FanError(f"codirectional colors {d1} ({c1.type}) and {d2} ({c2.type}) of mixed type")


# ---------------------------------------------------- star subdivision


def colored_star_subdivision(E: LunaEmbedding, F: ColoredFan, D: str) -> ColoredFan:
    """Star subdivision at the color ``D`` via the abstract faces of ``F``."""
    if D not in E.color_map:
        raise FanError(f"unknown color {D!r}")
    v = E.color_map[D].rho
    abstract = set()
    for c in F.cones:
        abstract.update(faces_of(E, F, c, genuine=False))
    geo = {c: (cone_of(E, F, c) if c else Cone([], dim=E.rank)) for c in abstract}
    if not any(g.contains(v) for g in geo.values()):
        raise FanError(f"rho({D}) is not in the support of the fan")
    containing = [c for c, g in geo.items() if g.contains(v)]
    new = set()
    for c, g in geo.items():
        if g.contains(v):
            continue
        new.add(c)
        if any(all(geo[big].contains(_vec(E, F, l)) for l in c) for big in containing):
            new.add(c | {D})
    out = set()
    for c in new:
        c = canonical(E, F, c)
        if is_genuine(E, F, c):
            out.add(c)
    return make_fan(F.rays, out)


def _maximal(F: ColoredFan) -> list[frozenset]:
    return [c for c in F.cones if not any(c < d for d in F.cones)]


def support_in_v_covered(E: LunaEmbedding, F: ColoredFan, G: ColoredFan) -> bool:
    """Whether ``|F| ∩ V`` lies in ``|G|``, by exact subtraction."""
    V = valuation_cone(E)
    cover = [cone_of(E, G, c) if c else Cone([], dim=E.rank) for c in G.cones]
    for c in _maximal(F):
        C = cone_of(E, F, c) if c else Cone([], dim=E.rank)
        if not region_covered(tuple(C.facets) + tuple(V.facets), tuple(C.equations) + tuple(V.equations),
                              cover, E.rank):
            return False
    return True


def same_support_in_v(E: LunaEmbedding, F: ColoredFan, G: ColoredFan) -> bool:
    """``|F| ∩ V = |G| ∩ V``."""
    return support_in_v_covered(E, F, G) and support_in_v_covered(E, G, F)
