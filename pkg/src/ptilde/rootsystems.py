"""Finite root systems of types A-G, their products and central tori.

Weights live in ``X(B)_Q`` with coordinates ``(simple-root coefficients,
torus coefficients)``.  Simple root ``i`` is the unit vector ``e_i``; a torus
factor contributes coordinates that every coroot pairs to zero.  Pairings
therefore reduce to the Cartan matrix ``cartan[i][j] = <alpha_i^vee, alpha_j>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "RootSystem",
    "RootSystemError",
    "cartan_matrix",
    "parse_root_system",
    "positive_roots",
    "kappa",
    "coroot_pair",
    "rho_half_sum",
]


class RootSystemError(ValueError):
    pass


def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    """Cartan matrix of an irreducible type in Bourbaki numbering."""
    def chain(n):
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 2
            if i + 1 < n:
                m[i][i + 1] = m[i + 1][i] = -1
        return m

    if kind == "A":
        if n < 1:
            raise RootSystemError("A_n needs n >= 1")
        return chain(n)
    if kind == "B":
        if n < 2:
            raise RootSystemError("B_n needs n >= 2")
        m = chain(n)
        m[n - 1][n - 2] = -2
        return m
    if kind == "C":
        if n < 2:
            raise RootSystemError("C_n needs n >= 2")
        m = chain(n)
        m[n - 2][n - 1] = -2
        return m
    if kind == "D":
        if n < 3:
            raise RootSystemError("D_n needs n >= 3")
        m = chain(n)
        m[n - 2][n - 1] = m[n - 1][n - 2] = 0
        m[n - 3][n - 1] = m[n - 1][n - 3] = -1
        return m
    if kind == "E":
        if n not in (6, 7, 8):
            raise RootSystemError("E_n needs n in 6, 7, 8")
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 2
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        for i, j in edges:
            m[i][j] = m[j][i] = -1
        return m
    if kind == "F":
        if n != 4:
            raise RootSystemError("F_n needs n = 4")
        return [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    if kind == "G":
        if n != 2:
            raise RootSystemError("G_n needs n = 2")
        return [[2, -3], [-1, 2]]
    raise RootSystemError(f"unknown root system type {kind!r}")


@dataclass(frozen=True)
class RootSystem:
    """A root system with labeled simple roots and an optional central torus.

    ``components`` records the factors as ``(kind, rank)`` with ``("T", k)``
    for a torus of rank ``k``.
    """

    labels: tuple
    cartan: tuple
    torus: tuple = ()
    components: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def weight_dim(self) -> int:
        return len(self.labels) + len(self.torus)

    @property
    def coordinate_labels(self) -> tuple:
        return self.labels + self.torus

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise RootSystemError(f"unknown simple root {label!r}") from None

    def simple_root(self, label: str) -> tuple:
        i = self.index(label)
        return tuple(Fraction(int(j == i)) for j in range(self.weight_dim))

    def pair(self, label: str, chi: Sequence) -> Fraction:
        """``<alpha^vee, chi>`` for the simple root ``label``."""
        if len(chi) != self.weight_dim:
            raise RootSystemError("weight of wrong dimension")
        i = self.index(label)
        row = self.cartan[i]
        return sum((Fraction(row[j]) * Fraction(chi[j]) for j in range(self.rank)), Fraction(0))

    def orthogonal(self, a: str, b: str) -> bool:
        return self.cartan[self.index(a)][self.index(b)] == 0

    def subsystem(self, labels: Iterable[str]) -> "RootSystem":
        """The root system generated by a subset of simple roots (no torus)."""
        keep = [l for l in self.labels if l in set(labels)]
        idx = [self.index(l) for l in keep]
        cartan = tuple(tuple(self.cartan[i][j] for j in idx) for i in idx)
        return RootSystem(tuple(keep), cartan, (), ())

    def restrict_weight(self, chi: Sequence, sub: "RootSystem") -> tuple:
        """Coordinates of a root-lattice weight in a subsystem's coordinates."""
        out = []
        for l in sub.coordinate_labels:
            out.append(Fraction(chi[self.coordinate_labels.index(l)]))
        return tuple(out)

    @cached_property
    def all_positive_roots(self) -> tuple:
        return tuple(_reflection_closure(self.cartan))

    def name(self) -> str:
        parts = [f"{k}{n}" for k, n in self.components]
        return "x".join(parts) if parts else "T0"


def _reflection_closure(cartan) -> list[tuple]:
    """Positive roots as integer root-coordinate tuples, by closing the
    simple roots under simple reflections."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                c = sum(cartan[i][j] * beta[j] for j in range(n))
                if c == 0:
                    continue
                img = tuple(beta[j] - (c if j == i else 0) for j in range(n))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(r for r in seen if all(x >= 0 for x in r))


_COMPONENT = re.compile(r"^([A-GT])(\d+)$")


def parse_root_system(name: str) -> RootSystem:
    """Parse names like ``"A2"``, ``"A3xC2xT1"`` or ``"T2"``.

    Simple roots are labeled ``a1, a2, ...`` across all components in order;
    torus coordinates are labeled ``t1, t2, ...``.
    """
    if not isinstance(name, str) or not name.strip():
        raise RootSystemError("empty root system name")
    comps = []
    blocks = []
    tor = 0
    for part in name.strip().split("x"):
        m = _COMPONENT.match(part.strip())
        if not m:
            raise RootSystemError(f"cannot parse root system component {part!r}")
        kind, n = m.group(1), int(m.group(2))
        comps.append((kind, n))
        if kind == "T":
            tor += n
        else:
            blocks.append(cartan_matrix(kind, n))
    size = sum(len(b) for b in blocks)
    cartan = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                cartan[off + i][off + j] = b[i][j]
        off += len(b)
    labels = tuple(f"a{i + 1}" for i in range(size))
    torus = tuple(f"t{i + 1}" for i in range(tor))
    return RootSystem(labels, tuple(map(tuple, cartan)), torus, tuple(comps))


def direct_product(r1: RootSystem, r2: RootSystem, prefix=("L.", "R.")) -> tuple[RootSystem, dict, dict]:
    """Product root system; labels are prefixed only if they collide.

    Returns the product and the relabeling maps for both factors.
    """
    l1 = set(r1.coordinate_labels)
    l2 = set(r2.coordinate_labels)
    clash = bool(l1 & l2)
    m1 = {l: (prefix[0] + l if clash else l) for l in r1.coordinate_labels}
    m2 = {l: (prefix[1] + l if clash else l) for l in r2.coordinate_labels}
    n1, n2 = r1.rank, r2.rank
    cartan = [[0] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            cartan[i][j] = r1.cartan[i][j]
    for i in range(n2):
        for j in range(n2):
            cartan[n1 + i][n1 + j] = r2.cartan[i][j]
    labels = tuple(m1[l] for l in r1.labels) + tuple(m2[l] for l in r2.labels)
    torus = tuple(m1[l] for l in r1.torus) + tuple(m2[l] for l in r2.torus)
    return RootSystem(labels, tuple(map(tuple, cartan)), torus, r1.components + r2.components), m1, m2


def _check_subset(R: RootSystem, I: Iterable[str]) -> frozenset:
    I = frozenset(I)
    unknown = sorted(I - set(R.labels))
    if unknown:
        raise RootSystemError(f"unknown simple roots: {unknown}")
    return I


def positive_roots(R: RootSystem, I: Iterable[str] | None = None) -> list[tuple]:
    """Positive roots of the subsystem generated by ``I`` (default: all of S),
    as weights in ``X(B)_Q`` coordinates."""
    I = frozenset(R.labels) if I is None else _check_subset(R, I)
    idx = {R.index(l) for l in I}
    pad = (Fraction(0),) * len(R.torus)
    out = []
    for r in R.all_positive_roots:
        if all(c == 0 or i in idx for i, c in enumerate(r)):
            out.append(tuple(Fraction(c) for c in r) + pad)
    return out


def rho_half_sum(R: RootSystem, I: Iterable[str]) -> tuple:
    roots = positive_roots(R, I)
    total = [Fraction(0)] * R.weight_dim
    for r in roots:
        for i, c in enumerate(r):
            total[i] += c
    return tuple(c / 2 for c in total)


def kappa(R: RootSystem, Sp: Iterable[str]) -> tuple:
    """``2 (rho_S - rho_{Sp})``: sum of positive roots outside ``R_{Sp}``."""
    Sp = _check_subset(R, Sp)
    full = rho_half_sum(R, R.labels)
    part = rho_half_sum(R, Sp)
    return tuple(2 * (a - b) for a, b in zip(full, part))


def coroot_pair(R: RootSystem, alpha: str, chi: Sequence) -> Fraction:
    return R.pair(alpha, chi)
