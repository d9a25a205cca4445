"""Exact rational linear algebra and polyhedral geometry.

Everything here works over :class:`fractions.Fraction`; no floating point
value is ever produced.  Cones are stored by generators and their facets are
computed lazily with the double description method.  Polyhedra are stored by
halfspaces ``<normal, v> >= offset``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence, Union

Rational = Fraction
Vector = tuple  # tuple of Fraction

__all__ = [
    "Rational",
    "Vector",
    "GeometryError",
    "vector",
    "dot",
    "add",
    "sub",
    "scale",
    "is_zero",
    "rank",
    "nullspace",
    "solve_linear",
    "row_space_basis",
    "primitive",
    "Cone",
    "Polyhedron",
    "dual_cone",
    "relative_interior_contains",
    "LPValue",
    "Unbounded",
    "Infeasible",
    "maximize",
    "solve_lp_sup",
    "strictly_feasible",
    "VectorConfiguration",
    "Subdivision",
    "regular_subdivision",
    "triangulate_cone",
    "region_covered",
]


class GeometryError(ValueError):
    """Raised on malformed geometric input or a violated precondition."""


# ---------------------------------------------------------------- vectors


def vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise GeometryError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def primitive(v: Sequence) -> Vector:
    """The primitive integer vector spanning the ray through ``v``.

    >>> primitive((Fraction(1, 2), Fraction(1, 3)))
    (Fraction(3, 1), Fraction(2, 1))
    """
    v = vector(v)
    if is_zero(v):
        raise GeometryError("the zero vector spans no ray")
    den = lcm(*(a.denominator for a in v))
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(Fraction(a // g) for a in ints)


# ------------------------------------------------------- linear algebra


def _rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [a / p for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(_rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def row_space_basis(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """A basis (in reduced echelon form) of the span of ``rows``."""
    if not rows:
        return []
    red, _ = _rref(rows, ncols)
    return [tuple(r) for r in red]


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """A basis of ``{x : <r, x> = 0 for every row r}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(red, pivots):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve_linear(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Vector | None:
    """Some exact solution of ``rows . x = rhs``, or None if inconsistent."""
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols))
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = _rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(red, pivots):
        x[p] = r[ncols]
    return tuple(x)


# -------------------------------------------------- double description


def _int_row(v: Sequence) -> tuple:
    """A positive integer multiple of ``v``, divided by its content."""
    v = vector(v)
    den = lcm(*(a.denominator for a in v)) if v else 1
    ints = [int(a * den) for a in v]
    return _int_normalize(ints)


def _int_normalize(ints) -> tuple:
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g > 1:
        return tuple(a // g for a in ints)
    return tuple(ints)


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def double_description(ineqs: Sequence[Sequence], dim: int):
    """Generators of the cone ``{y : <a, y> >= 0 for a in ineqs}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays modulo it, all as primitive integer vectors.
    """
    rows = []
    for a in ineqs:
        if len(a) != dim:
            raise GeometryError("inequality of wrong dimension")
        rows.append(_int_row(a))
    lin, rays = _dd_cached(tuple(rows), dim)
    as_q = lambda vs: [tuple(Fraction(x) for x in v) for v in vs]
    return as_q(lin), as_q(rays)


@lru_cache(maxsize=65536)
def _dd_cached(rows: tuple, dim: int):
    """Double description over the integers; every vector stays primitive."""
    lineality = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple] = []
    done: list[tuple] = []
    for a in rows:
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lineality) if _idot(a, l) != 0), None)
        if k is not None:
            pivot = lineality[k]
            ap = _idot(a, pivot)
            if ap < 0:
                pivot, ap = tuple(-x for x in pivot), -ap
            rest = lineality[:k] + lineality[k + 1:]
            lineality = [_int_normalize([ap * x - _idot(a, l) * y for x, y in zip(l, pivot)]) for l in rest]
            rays = [_int_normalize([ap * x - _idot(a, r) * y for x, y in zip(r, pivot)]) for r in rays]
            rays.append(_int_normalize(pivot))
            done.append(a)
            rays = _dedupe(rays)
            continue
        vals = [_idot(a, r) for r in rays]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        if not neg:
            done.append(a)
            continue
        tight = {r: frozenset(i for i, b in enumerate(done) if _idot(b, r) == 0) for r in rays}
        need = dim - len(lineality) - 2
        new = [r for r, v in zip(rays, vals) if v >= 0]
        for p, pv in ((r, v) for r, v in zip(rays, vals) if v > 0):
            for n, nv in neg:
                common = tight[p] & tight[n]
                if len(common) < need:
                    continue
                if any(r != p and r != n and common <= tight[r] for r in rays):
                    continue
                new.append(_int_normalize([pv * x - nv * y for x, y in zip(n, p)]))
        rays = _dedupe(new)
        done.append(a)
    return tuple(lineality), tuple(rays)


def _dedupe(vs: Iterable) -> list:
    seen = set()
    out = []
    for v in vs:
        if v not in seen and any(v):
            seen.add(v)
            out.append(v)
    return out


# ---------------------------------------------------------------- cones


class Cone:
    """A polyhedral cone given by generators, optionally labeled.

    Facets are computed on first use and cached.  ``facets`` are the
    inequality normals ``f`` with ``<f, x> >= 0`` on the cone, ``equations``
    span the linear functionals vanishing on it.
    """

    __slots__ = ("generators", "dim", "labels", "_facets", "_equations", "_rays", "_lineality")

    def __init__(self, generators: Iterable[Sequence], dim: int | None = None,
                 labels: Sequence[Hashable] | None = None):
        gens = tuple(vector(g) for g in generators)
        if dim is None:
            if not gens:
                raise GeometryError("dimension required for a cone without generators")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise GeometryError("generators must share the ambient dimension")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(gens):
                raise GeometryError("one label per generator required")
            if len(set(labels)) != len(labels):
                raise GeometryError("generator labels must be unique")
        self.generators = gens
        self.dim = dim
        self.labels = labels
        self._facets = None
        self._equations = None
        self._rays = None
        self._lineality = None

    def __repr__(self):
        return f"Cone({[tuple(str(a) for a in g) for g in self.generators]})"

    def _compute_facets(self):
        lin, rays = double_description(self.generators, self.dim)
        self._equations = tuple(lin)
        self._facets = tuple(rays)

    @property
    def facets(self) -> tuple:
        if self._facets is None:
            self._compute_facets()
        return self._facets

    @property
    def equations(self) -> tuple:
        if self._equations is None:
            self._compute_facets()
        return self._equations

    def _compute_rays(self):
        ineqs = list(self.facets) + list(self.equations) + [scale(-1, e) for e in self.equations]
        lin, rays = double_description(ineqs, self.dim)
        self._lineality = tuple(lin)
        self._rays = tuple(rays)

    @property
    def rays(self) -> tuple:
        """Primitive generators of the extreme rays (modulo lineality)."""
        if self._rays is None:
            self._compute_rays()
        return self._rays

    @property
    def lineality(self) -> tuple:
        if self._lineality is None:
            self._compute_rays()
        return self._lineality

    def is_pointed(self) -> bool:
        return not self.lineality

    def span_dim(self) -> int:
        return self.dim - len(self.equations)

    def contains(self, v: Sequence) -> bool:
        v = vector(v)
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) >= 0 for f in self.facets)

    def relative_interior_contains(self, v: Sequence) -> bool:
        v = vector(v)
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) > 0 for f in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_set(self, other: "Cone") -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    def is_simplicial(self) -> bool:
        return self.is_pointed() and len(self.rays) == self.span_dim()

    def face_label_sets(self) -> list[frozenset]:
        """All faces as sets of generator labels (or indices when unlabeled)."""
        keys = self.labels if self.labels is not None else tuple(range(len(self.generators)))
        full = frozenset(keys)
        facet_sets = set()
        for f in self.facets:
            facet_sets.add(frozenset(k for k, g in zip(keys, self.generators) if dot(f, g) == 0))
        faces = {full}
        frontier = set(facet_sets)
        while frontier:
            faces |= frontier
            nxt = set()
            for a in frontier:
                for b in facet_sets:
                    c = a & b
                    if c not in faces:
                        nxt.add(c)
            frontier = nxt
        return sorted(faces, key=lambda s: (len(s), sorted(map(str, s))))

    def h_representation(self) -> tuple[list[Vector], list[Vector]]:
        return list(self.facets), list(self.equations)


def dual_cone(C: Cone) -> Cone:
    """``C^vee = {f : <f, c> >= 0 for all c in C}`` by generators."""
    gens = list(C.facets) + list(C.equations) + [scale(-1, e) for e in C.equations]
    return Cone(gens, dim=C.dim)


def relative_interior_contains(C: Cone, v: Sequence) -> bool:
    if len(v) != C.dim:
        raise GeometryError("dimension mismatch")
    return C.relative_interior_contains(v)


# ------------------------------------------------------------ polyhedra


@dataclass(frozen=True)
class Polyhedron:
    """``{v : <normal, v> >= offset}`` for each halfspace."""

    halfspaces: tuple
    dim: int

    def __init__(self, halfspaces: Iterable, dim: int):
        hs = tuple((vector(n), Fraction(b)) for n, b in halfspaces)
        if any(len(n) != dim for n, _ in hs):
            raise GeometryError("halfspace normal of wrong dimension")
        object.__setattr__(self, "halfspaces", hs)
        object.__setattr__(self, "dim", dim)

    def contains(self, v: Sequence) -> bool:
        v = vector(v)
        return all(dot(n, v) >= b for n, b in self.halfspaces)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.halfspaces + other.halfspaces, self.dim)

    def minkowski_generators(self):
        """``(points, rays, lineality)`` with ``P = conv(points) + cone(rays) + lin``.

        Points are the vertices when ``P`` is pointed.  Computed by double
        description on the homogenization.
        """
        d = self.dim
        ineqs = [tuple(n) + (-b,) for n, b in self.halfspaces]
        ineqs.append(tuple([Fraction(0)] * d) + (Fraction(1),))
        lin, rays = double_description(ineqs, d + 1)
        points, rec = [], []
        for r in rays:
            if r[-1] > 0:
                points.append(tuple(a / r[-1] for a in r[:-1]))
            else:
                rec.append(r[:-1])
        lineality = [l[:-1] for l in lin]
        return points, rec, lineality

    def vertices(self) -> list[Vector]:
        points, _, lin = self.minkowski_generators()
        if lin:
            return []
        return sorted(points)


# ------------------------------------------------------------------- LP


@dataclass(frozen=True)
class LPValue:
    value: Fraction
    argmax: Vector


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Infeasible:
    pass


LPResult = Union[LPValue, Unbounded, Infeasible]


class _Tableau:
    """Dense simplex tableau for ``max c.y, A y = b, y >= 0`` with Bland's rule."""

    def __init__(self, A, b, basis):
        self.rows = [list(r) + [bi] for r, bi in zip(A, b)]
        self.basis = list(basis)
        self.n = len(A[0]) if A else 0

    def pivot(self, r, c):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row = [a / p if a else a for a in row]
        self.rows[r] = row
        nz = [k for k, b in enumerate(row) if b]
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                other = list(other)
                for k in nz:
                    other[k] = other[k] - f * row[k]
                self.rows[i] = other
        self.basis[r] = c

    def run(self, c, allowed):
        """Maximize ``c`` entering only columns in ``allowed``; True if bounded."""
        while True:
            cb = [c[j] for j in self.basis]
            entering = None
            for j in allowed:
                if j in self.basis:
                    continue
                red = c[j]
                for i, row in enumerate(self.rows):
                    if cb[i] and row[j]:
                        red -= cb[i] * row[j]
                if red > 0:
                    entering = j
                    break
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)

    def solution(self, n):
        y = [Fraction(0)] * n
        for i, j in enumerate(self.basis):
            if j < n:
                y[j] = self.rows[i][-1]
        return y


def _simplex_standard(A, b, c):
    """``max c.y`` s.t. ``A y = b``, ``y >= 0``.  Returns an LPResult over y."""
    m = len(A)
    n = len(c)
    A = [list(map(Fraction, r)) for r in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]
    if m == 0:
        if any(ci > 0 for ci in c):
            return Unbounded()
        return LPValue(Fraction(0), tuple([Fraction(0)] * n))
    # phase one with artificial columns n..n+m-1
    full = [r + [Fraction(int(i == k)) for k in range(m)] for i, r in enumerate(A)]
    tab = _Tableau(full, b, range(n, n + m))
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.run(phase1, range(n + m))
    if any(tab.rows[i][-1] != 0 for i, j in enumerate(tab.basis) if j >= n):
        return Infeasible()
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m
    if not tab.run(cost, range(n)):
        return Unbounded()
    y = tab.solution(n)
    return LPValue(sum((ci * yi for ci, yi in zip(c, y)), Fraction(0)), tuple(y))


def maximize(objective: Sequence, ineqs: Sequence = (), eqs: Sequence = (),
             nonneg: Sequence[bool] | None = None, dim: int | None = None) -> LPResult:
    """Maximize ``<objective, x>`` subject to ``<a, x> >= b`` and ``<a, x> = b``.

    ``ineqs`` and ``eqs`` are sequences of ``(a, b)`` pairs.  Variables are
    free unless flagged in ``nonneg``.
    """
    c = vector(objective)
    n = len(c) if dim is None else dim
    nonneg = list(nonneg) if nonneg is not None else [False] * n
    # column map: x_j = y_pos - y_neg for free variables
    cols = []
    for j in range(n):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    width = len(cols) + len(ineqs)
    A, b = [], []
    for k, (a, rhs) in enumerate(ineqs):
        a = vector(a)
        row = [a[j] * s for j, s in cols] + [Fraction(0)] * len(ineqs)
        row[len(cols) + k] = Fraction(-1)
        A.append(row)
        b.append(Fraction(rhs))
    for a, rhs in eqs:
        a = vector(a)
        A.append([a[j] * s for j, s in cols] + [Fraction(0)] * len(ineqs))
        b.append(Fraction(rhs))
    cost = [c[j] * s for j, s in cols] + [Fraction(0)] * len(ineqs)
    res = _simplex_standard(A, b, cost) if width else _trivial(A, b)
    if not isinstance(res, LPValue):
        return res
    x = [Fraction(0)] * n
    for (j, s), y in zip(cols, res.argmax):
        x[j] += s * y
    return LPValue(res.value, tuple(x))


def _trivial(A, b):
    if all(bi == 0 for bi in b):
        return LPValue(Fraction(0), ())
    return Infeasible()


def strictly_feasible(ineqs: Sequence[Sequence], eqs: Sequence[Sequence] = (), dim: int | None = None) -> bool:
    """Whether some x has ``<a, x> > 0`` for all ``a`` in ineqs and ``<e, x> = 0``.

    Zero rows are ignored.  Homogeneity lets ``> 0`` be replaced by ``>= 1``.
    """
    ineqs = [vector(a) for a in ineqs if not is_zero(a)]
    if dim is None:
        dim = len(ineqs[0]) if ineqs else (len(eqs[0]) if eqs else 0)
    if not ineqs:
        return True
    res = maximize([0] * dim, [(a, 1) for a in ineqs], [(e, 0) for e in eqs], dim=dim)
    return isinstance(res, LPValue)


def solve_lp_sup(P: Polyhedron, T: Cone, objective: Sequence) -> LPResult:
    """Exact supremum of ``objective`` over ``P ∩ T``.

    ``T`` is used by its generators: points of ``T`` are written as
    nonnegative combinations, so the witness is a basic solution in those
    coefficients.
    """
    if P.dim != T.dim or len(objective) != P.dim:
        raise GeometryError("dimension mismatch between polyhedron, cone and objective")
    c = vector(objective)
    gens = T.generators
    if not gens:
        if P.contains(tuple([Fraction(0)] * P.dim)):
            return LPValue(Fraction(0), tuple([Fraction(0)] * P.dim))
        return Infeasible()
    k = len(gens)
    ineqs = []
    for n, b in P.halfspaces:
        ineqs.append((tuple(dot(n, g) for g in gens), b))
    res = maximize([dot(c, g) for g in gens], ineqs, nonneg=[True] * k, dim=k)
    if not isinstance(res, LPValue):
        return res
    x = tuple(sum((t * g[i] for t, g in zip(res.argmax, gens)), Fraction(0)) for i in range(P.dim))
    return LPValue(res.value, x)


# ------------------------------------------------ vector configurations


@dataclass(frozen=True)
class VectorConfiguration:
    """A labeled multiset of vectors with an optional height per label."""

    vectors: tuple
    lift: Mapping | None = None

    def __init__(self, vectors: Iterable, lift: Mapping | None = None):
        vs = tuple((lab, vector(v)) for lab, v in vectors)
        labels = [lab for lab, _ in vs]
        if len(set(labels)) != len(labels):
            raise GeometryError("configuration labels must be unique")
        if vs and len({len(v) for _, v in vs}) != 1:
            raise GeometryError("configuration vectors must share a dimension")
        if lift is not None:
            lift = {lab: Fraction(h) for lab, h in lift.items()}
            missing = [lab for lab in labels if lab not in lift]
            if missing:
                raise GeometryError(f"labels without height: {missing}")
        object.__setattr__(self, "vectors", vs)
        object.__setattr__(self, "lift", lift)

    @property
    def labels(self):
        return tuple(lab for lab, _ in self.vectors)

    def vector_of(self, label) -> Vector:
        for lab, v in self.vectors:
            if lab == label:
                return v
        raise KeyError(label)

    def cone(self, dim: int | None = None) -> Cone:
        if not self.vectors and dim is None:
            raise GeometryError("dimension required for an empty configuration")
        return Cone([v for _, v in self.vectors], dim=dim, labels=self.labels)


@dataclass(frozen=True)
class Subdivision:
    cells: tuple  # of frozensets of labels
    side: str


def regular_subdivision(A: VectorConfiguration, side: str, dim: int | None = None) -> Subdivision:
    """Cells are the projections of the lower (or upper) faces of the lift.

    A face of the lifted configuration is lower when some face-selecting
    functional that cuts out exactly that face is positive on the last
    coordinate (negative for upper).  Such a functional exists iff one of the
    facet normals containing the face has that sign, or the lineality of the
    dual cone has a nonzero last coordinate.
    """
    if side not in ("lower", "upper"):
        raise GeometryError("side must be 'lower' or 'upper'")
    if A.lift is None:
        raise GeometryError("configuration has no lift")
    if dim is None:
        if not A.vectors:
            raise GeometryError("dimension required for an empty configuration")
        dim = len(A.vectors[0][1])
    if any(is_zero(v) for _, v in A.vectors):
        raise GeometryError("zero vectors are not allowed in a configuration")
    labels = A.labels
    if side == "lower":
        # some linear l with omega + l >= 0 on A
        rows = [(tuple(v), -A.lift[lab]) for lab, v in A.vectors]
        if isinstance(maximize([0] * dim, rows, dim=dim), Infeasible):
            raise GeometryError("no linear function makes the lift nonnegative")
    else:
        if A.vectors and not Cone([v for _, v in A.vectors], dim=dim).is_pointed():
            raise GeometryError("upper subdivision needs a strictly convex cone")
    if not A.vectors:
        return Subdivision((frozenset(),), side)
    lifted = [tuple(v) + (A.lift[lab],) for lab, v in A.vectors]
    K = Cone(lifted, dim=dim + 1, labels=labels)
    sign = 1 if side == "lower" else -1
    free_last = any(e[-1] != 0 for e in K.equations)
    good = [f for f in K.facets if sign * f[-1] > 0]
    good_sets = [frozenset(lab for lab, g in zip(labels, lifted) if dot(f, g) == 0) for f in good]
    cells = []
    for face in K.face_label_sets():
        if free_last or any(face <= s for s in good_sets):
            cells.append(face)
    return Subdivision(tuple(cells), side)


# -------------------------------------------------------- triangulation


def _simplex_facets(simplex: Sequence, vecs: Mapping, dim: int):
    """Facets of a simplicial cone: (facet labels, normal positive on the rest)."""
    out = []
    for i, drop in enumerate(simplex):
        rest = [lab for lab in simplex if lab != drop]
        ns = nullspace([vecs[l] for l in rest], dim) if rest else nullspace([], dim)
        # pick a normal not vanishing on the dropped generator
        f = next((n for n in ns if dot(n, vecs[drop]) != 0), None)
        if f is None:
            continue
        if dot(f, vecs[drop]) < 0:
            f = scale(-1, f)
        # restrict to the span: subtract components that vanish on the whole simplex
        out.append((frozenset(rest), f))
    return out


def triangulate_cone(C: Cone, marked: Sequence[Hashable] | None = None) -> list[Cone]:
    """Placing triangulation of a strictly convex cone.

    Generators are placed in the order of ``marked`` (default: the cone's own
    label order).  A generator already inside the current cone is skipped, so
    no new rays are introduced and every output cone is simplicial.
    """
    if not C.is_pointed():
        raise GeometryError("triangulation needs a strictly convex cone")
    labels = C.labels if C.labels is not None else tuple(range(len(C.generators)))
    vecs = dict(zip(labels, C.generators))
    order = list(marked) if marked is not None else list(labels)
    unknown = [m for m in order if m not in vecs]
    if unknown:
        raise GeometryError(f"unknown generator labels: {unknown}")
    dim = C.dim
    simplices: list[tuple] = []
    placed: list = []
    for lab in order:
        v = vecs[lab]
        if is_zero(v):
            continue
        if not placed:
            simplices = [(lab,)]
            placed.append(lab)
            continue
        span_rank = rank([vecs[p] for p in placed], dim)
        if rank([vecs[p] for p in placed] + [v], dim) > span_rank:
            simplices = [s + (lab,) for s in simplices]
            placed.append(lab)
            continue
        current = Cone([vecs[p] for p in placed], dim=dim)
        if current.contains(v):
            continue
        # boundary facets of the current triangulation visible from v
        count: dict[frozenset, int] = {}
        normals: dict[frozenset, Vector] = {}
        for s in simplices:
            for facet, f in _simplex_facets(s, vecs, dim):
                count[facet] = count.get(facet, 0) + 1
                normals[facet] = f
        new = []
        for facet, k in count.items():
            if k == 1 and dot(normals[facet], v) < 0:
                new.append(tuple(sorted(facet, key=order.index)) + (lab,))
        simplices.extend(new)
        placed.append(lab)
    if not simplices:
        return [Cone([], dim=dim, labels=())]
    return [Cone([vecs[l] for l in s], dim=dim, labels=s) for s in simplices]


# ------------------------------------------------------------- coverage


def _span_basis(facets: Sequence, equations: Sequence, dim: int) -> list[Vector]:
    lin, rays = double_description(
        list(facets) + list(equations) + [scale(-1, e) for e in equations], dim)
    gens = list(lin) + list(rays)
    return row_space_basis(gens, dim)


def region_covered(facets: Sequence, equations: Sequence, cones: Sequence[Cone], dim: int) -> bool:
    """Whether the cone ``{x : <f,x> >= 0, <e,x> = 0}`` lies in the union of ``cones``.

    Decided by exact subtraction inside the linear span of the region: the
    region is split into closed pieces outside each cone in turn, and pieces
    of lower dimension are discarded.
    """
    basis = _span_basis(facets, equations, dim)
    k = len(basis)
    if k == 0:
        return len(cones) > 0

    def pull(f):
        return tuple(dot(f, b) for b in basis)

    region = [pull(f) for f in facets]
    region = [r for r in region if not is_zero(r)]
    pieces = [region]
    for K in cones:
        if len(K.generators) == 0 and K.dim == dim:
            continue
        if any(not is_zero(pull(e)) for e in K.equations):
            continue
        kin = [pull(f) for f in K.facets]
        kin = [r for r in kin if not is_zero(r)]
        if not strictly_feasible(kin, dim=k):
            continue
        nxt = []
        for piece in pieces:
            if not strictly_feasible(piece + kin, dim=k):
                nxt.append(piece)
                continue
            for i, h in enumerate(kin):
                sub_piece = piece + kin[:i] + [scale(-1, h)]
                if strictly_feasible(sub_piece, dim=k):
                    nxt.append(sub_piece)
        pieces = nxt
        if not pieces:
            return True
    return not pieces
