"""Spherical skeletons and the invariant wp-tilde computed from them.

A skeleton carries a root system, the spherical roots ``Sigma`` (weights in
root coordinates), the parabolic set ``Sp``, the type-a colors with their
movers and the invariant divisors ``Gamma``.  Spherical roots are linearly
independent, so ``Sigma`` itself is used as the basis of ``Lambda``: every
functional ``rho'`` is stored as its list of values on ``Sigma``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .exactgeom import (
    Cone, Infeasible, Polyhedron, Unbounded, rank, solve_lp_sup, vector,
)
from .rootsystems import RootSystem, direct_product, kappa, positive_roots

__all__ = [
    "TypeAColor",
    "InvariantDivisor",
    "Color",
    "SphericalSkeleton",
    "Violation",
    "SkeletonError",
    "Value",
    "NegativeInfinity",
    "validate_skeleton",
    "reconstruct_colors",
    "anticanonical_coeff",
    "movers",
    "color_data",
    "delta",
    "rplus_diff",
    "qstar_region",
    "wp_tilde_skeleton",
    "localize",
    "reduce_equivalence",
    "direct_sum",
    "is_isomorphic",
]


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class TypeAColor:
    label: str
    moved_by: frozenset
    rho: tuple  # values on Sigma


@dataclass(frozen=True)
class InvariantDivisor:
    label: str
    rho: tuple


@dataclass(frozen=True)
class Color:
    """An entry of the full color set, or an invariant divisor (type ``"G"``)."""

    label: str
    type: str  # "a", "2a", "b" or "G"
    moved_by: frozenset
    rho: tuple
    m: int


@dataclass(frozen=True)
class SphericalSkeleton:
    root: RootSystem
    sigma: tuple
    sp: frozenset = frozenset()
    colors_a: tuple = ()
    gamma: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(vector(g) for g in self.sigma))
        object.__setattr__(self, "sp", frozenset(self.sp))
        object.__setattr__(self, "colors_a", tuple(
            TypeAColor(c.label, frozenset(c.moved_by), vector(c.rho)) for c in self.colors_a))
        object.__setattr__(self, "gamma", tuple(
            InvariantDivisor(g.label, vector(g.rho)) for g in self.gamma))

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def sigma_index(self, gamma: Sequence) -> int | None:
        g = vector(gamma)
        for i, s in enumerate(self.sigma):
            if s == g:
                return i
        return None

    def support(self, gamma: Sequence) -> frozenset:
        return frozenset(l for l, c in zip(self.root.labels, gamma) if c != 0)


@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"({self.axiom}) {self.message}"


@dataclass(frozen=True)
class Value:
    value: Fraction
    argmax: tuple = field(default=(), compare=False)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class NegativeInfinity:
    def __str__(self):
        return "-infinity"


# ------------------------------------------------------------ helpers


def _coroot_on(root: RootSystem, alpha: str, basis: Sequence) -> tuple:
    return tuple(root.pair(alpha, b) for b in basis)


def _coroot_on_sigma(R: SphericalSkeleton, alpha: str) -> tuple:
    return _coroot_on(R.root, alpha, R.sigma)


def _index_in(vs: Sequence, v: Sequence) -> int | None:
    v = vector(v)
    for i, s in enumerate(vs):
        if s == v:
            return i
    return None


def simple_in_sigma(root: RootSystem, sigma: Sequence) -> list[str]:
    """Simple roots that are themselves spherical roots."""
    return [a for a in root.labels if _index_in(sigma, root.simple_root(a)) is not None]


def half_in_sigma(root: RootSystem, sigma: Sequence) -> list[str]:
    """Simple roots ``alpha`` with ``2 alpha`` a spherical root."""
    return [a for a in root.labels
            if _index_in(sigma, tuple(2 * x for x in root.simple_root(a))) is not None]


def sum_in_sigma(root: RootSystem, sigma: Sequence, a: str, b: str) -> bool:
    """Whether ``a + b`` lies in ``Sigma`` or ``2 Sigma``."""
    s = tuple(x + y for x, y in zip(root.simple_root(a), root.simple_root(b)))
    half = tuple(x / 2 for x in s)
    return _index_in(sigma, s) is not None or _index_in(sigma, half) is not None


def _simple_in_sigma(R: SphericalSkeleton) -> list[str]:
    return simple_in_sigma(R.root, R.sigma)


def _half_in_sigma(R: SphericalSkeleton) -> list[str]:
    return half_in_sigma(R.root, R.sigma)


def _is_sum_in(R: SphericalSkeleton, a: str, b: str) -> bool:
    return sum_in_sigma(R.root, R.sigma, a, b)


def _color_name(roots: Sequence[str]) -> str:
    parts = []
    for r in roots:
        m = re.fullmatch(r"a(\d+)", r)
        parts.append(m.group(1) if m else r)
    return "D" + "_".join(parts)


def color_data(root: RootSystem, sp: Iterable[str], sigma: Sequence,
               colors_a: Sequence[TypeAColor], basis: Sequence) -> tuple[Color, ...]:
    """Full color set with ``rho`` evaluated on ``basis``.

    Types and mergers are decided by ``sigma``; type-a colors keep the
    values they carry, which must already be given on ``basis``.
    """
    sp = frozenset(sp)
    k = kappa(root, sp)
    out = [Color(c.label, "a", frozenset(c.moved_by), vector(c.rho), 1) for c in colors_a]
    simple = set(simple_in_sigma(root, sigma))
    half = set(half_in_sigma(root, sigma))
    for a in root.labels:
        if a in half:
            rho = tuple(x / 2 for x in _coroot_on(root, a, basis))
            out.append(Color(_color_name([a]), "2a", frozenset([a]), rho, 1))
    rest = [a for a in root.labels if a not in sp and a not in simple and a not in half]
    used: set = set()
    for a in rest:
        if a in used:
            continue
        group = [a]
        for b in rest:
            if b != a and b not in used and root.orthogonal(a, b) and sum_in_sigma(root, sigma, a, b):
                group.append(b)
                break
        used.update(group)
        m = root.pair(a, k)
        if m.denominator != 1:
            raise SkeletonError(f"non-integral anticanonical coefficient at {a}")
        out.append(Color(_color_name(group), "b", frozenset(group), _coroot_on(root, a, basis), int(m)))
    labels = [c.label for c in out]
    if len(set(labels)) != len(labels):
        raise SkeletonError(f"color labels collide: {labels}")
    return tuple(out)


# ---------------------------------------------------------- validation


def validate_skeleton(R: SphericalSkeleton) -> list[Violation]:
    """Check the axioms that can be verified on the skeleton data."""
    out: list[Violation] = []
    root = R.root
    n = len(R.sigma)
    labels = set(root.labels)
    for i, g in enumerate(R.sigma):
        if len(g) != root.weight_dim:
            out.append(Violation("shape", f"spherical root {i} has wrong dimension", (i,)))
            return out
        if any(c < 0 for c in g[:root.rank]) or all(c == 0 for c in g[:root.rank]):
            out.append(Violation("shape", f"spherical root {i} is not a nonzero nonnegative combination of simple roots", (i,)))
        if any(c != 0 for c in g[root.rank:]):
            out.append(Violation("shape", f"spherical root {i} has torus component", (i,)))
    if n and rank(R.sigma, root.weight_dim) < n:
        out.append(Violation("shape", "spherical roots are linearly dependent"))
    unknown = sorted(R.sp - labels)
    if unknown:
        out.append(Violation("shape", f"unknown roots in Sp: {unknown}"))
    for c in list(R.colors_a) + list(R.gamma):
        if len(c.rho) != n:
            out.append(Violation("shape", f"{c.label}: rho' has {len(c.rho)} values for {n} spherical roots", (c.label,)))
    seen = set()
    for c in list(R.colors_a) + list(R.gamma):
        if c.label in seen:
            out.append(Violation("shape", f"duplicate label {c.label}", (c.label,)))
        seen.add(c.label)
    if out:
        return out

    simple_sigma = set(_simple_in_sigma(R))
    half_sigma = set(_half_in_sigma(R))

    # (S): parabolic roots avoid Sigma and are orthogonal to it
    for a in sorted(R.sp):
        if a in simple_sigma or a in half_sigma:
            out.append(Violation("S", f"{a} in Sp meets Sigma or half Sigma", (a,)))
        for i, g in enumerate(R.sigma):
            if root.pair(a, g) != 0:
                out.append(Violation("S", f"<{a}^vee, sigma_{i}> = {root.pair(a, g)} != 0", (a, i)))

    # (A3): movers of type-a colors are simple spherical roots
    for c in R.colors_a:
        if not c.moved_by:
            out.append(Violation("A3", f"{c.label} is moved by no simple root", (c.label,)))
        bad = sorted(c.moved_by - simple_sigma)
        if bad:
            out.append(Violation("A3", f"{c.label} moved by {bad} outside S ∩ Sigma", (c.label,)))
        if any(x.denominator != 1 for x in c.rho):
            out.append(Violation("A1", f"{c.label} has non-integral rho'", (c.label,)))

    # invariant divisors: integral values, and nonpositive on Sigma (inside V)
    for g in R.gamma:
        if any(x.denominator != 1 for x in g.rho):
            out.append(Violation("integrality", f"{g.label} has non-integral rho'", (g.label,)))
        for i, v in enumerate(g.rho):
            if v > 0:
                out.append(Violation("V", f"<rho'({g.label}), sigma_{i}> = {v} > 0", (g.label, i)))

    # (A1): <rho'(D), gamma> <= 1 with equality iff gamma is a mover of D
    for c in R.colors_a:
        for i, g in enumerate(R.sigma):
            v = c.rho[i]
            is_mover = any(R.sigma_index(root.simple_root(a)) == i for a in c.moved_by if a in labels)
            if v > 1:
                out.append(Violation("A1", f"<rho'({c.label}), sigma_{i}> = {v} > 1", (c.label, i)))
            elif v == 1 and not is_mover:
                out.append(Violation("A1", f"<rho'({c.label}), sigma_{i}> = 1 but sigma_{i} does not move it", (c.label, i)))
            elif v != 1 and is_mover:
                out.append(Violation("A1", f"<rho'({c.label}), sigma_{i}> = {v} != 1 for a mover", (c.label, i)))

    # (A2): exactly two colors per simple spherical root, summing to the coroot
    for a in sorted(simple_sigma):
        mine = [c for c in R.colors_a if a in c.moved_by]
        if len(mine) != 2:
            out.append(Violation("A2", f"{a} moves {len(mine)} type-a colors, expected 2", (a,)))
            continue
        total = tuple(x + y for x, y in zip(mine[0].rho, mine[1].rho))
        if total != _coroot_on_sigma(R, a):
            out.append(Violation("A2", f"rho'({mine[0].label}) + rho'({mine[1].label}) != {a}^vee on Lambda",
                                 (a, mine[0].label, mine[1].label)))

    # (Sigma1): for 2 alpha in Sigma, <alpha^vee, gamma> is even and <= 0 otherwise
    for a in sorted(half_sigma):
        two = R.sigma_index(tuple(2 * x for x in root.simple_root(a)))
        for i, g in enumerate(R.sigma):
            if i == two:
                continue
            v = root.pair(a, g)
            if v > 0 or v.denominator != 1 or v % 2 != 0:
                out.append(Violation("Sigma1", f"<{a}^vee, sigma_{i}> = {v} not a nonpositive even integer", (a, i)))

    # (Sigma2): orthogonal a, b with a + b in Sigma or 2 Sigma have equal coroots on Lambda
    for a, b in itertools.combinations(root.labels, 2):
        if root.orthogonal(a, b) and _is_sum_in(R, a, b):
            if _coroot_on_sigma(R, a) != _coroot_on_sigma(R, b):
                out.append(Violation("Sigma2", f"{a}^vee != {b}^vee on Lambda", (a, b)))
    return out


def _require_valid(R: SphericalSkeleton):
    bad = validate_skeleton(R)
    if bad:
        raise SkeletonError("invalid skeleton: " + "; ".join(map(str, bad)))


# ------------------------------------------------------- color data


def reconstruct_colors(R: SphericalSkeleton, check: bool = True) -> tuple[Color, ...]:
    """The full color set: type a as given, type 2a and b from the root data."""
    if check:
        _require_valid(R)
    return color_data(R.root, R.sp, R.sigma, R.colors_a, R.sigma)


def anticanonical_coeff(entry: Color) -> int:
    return entry.m


def movers(R: SphericalSkeleton, check: bool = True) -> dict:
    """Label of every divisor in Delta to the simple roots moving it."""
    out = {c.label: c.moved_by for c in reconstruct_colors(R, check)}
    for g in R.gamma:
        out[g.label] = frozenset()
    return out


def delta(R: SphericalSkeleton, check: bool = True) -> tuple[Color, ...]:
    """Colors followed by the invariant divisors, all with their ``m``."""
    cols = reconstruct_colors(R, check)
    return cols + tuple(Color(g.label, "G", frozenset(), g.rho, 1) for g in R.gamma)


def rplus_diff(root: RootSystem, sp: Iterable[str]) -> int:
    return len(positive_roots(root)) - len(positive_roots(root, sp))


# --------------------------------------------------------------- wp


def qstar_region(R: SphericalSkeleton, check: bool = True) -> Polyhedron:
    """``Q*`` of the skeleton in coordinates on ``Sigma``."""
    return Polyhedron([(d.rho, -d.m) for d in delta(R, check)], len(R.sigma))


def wp_tilde_skeleton(R: SphericalSkeleton, check: bool = True) -> Value | NegativeInfinity:
    ds = delta(R, check)
    n = len(R.sigma)
    P = Polyhedron([(d.rho, -d.m) for d in ds], n)
    T = Cone([tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)], dim=n)
    objective = [sum((d.rho[i] for d in ds), Fraction(0)) for i in range(n)]
    res = solve_lp_sup(P, T, objective)
    if isinstance(res, Unbounded):
        return NegativeInfinity()
    if isinstance(res, Infeasible):
        raise SkeletonError("internal error: Q* ∩ cone(Sigma) is empty")
    shift = sum((d.m - 1 for d in ds), 0)
    return Value(rplus_diff(R.root, R.sp) - shift - res.value, res.argmax)


# ------------------------------------------------------ localization


def localize(R: SphericalSkeleton, I: Iterable[str], check: bool = True) -> SphericalSkeleton:
    """Restrict the skeleton along the simple roots that move divisors in ``I``."""
    I = set(I)
    mv = movers(R, check)
    unknown = sorted(I - set(mv))
    if unknown:
        raise SkeletonError(f"unknown divisor labels: {unknown}")
    s_i = frozenset().union(*(mv[d] for d in I)) if I else frozenset()
    root = R.root
    sub = root.subsystem(s_i)
    keep = [i for i, g in enumerate(R.sigma) if R.support(g) <= s_i]
    sigma = tuple(root.restrict_weight(R.sigma[i], sub) for i in keep)
    simple_sigma_i = {a for a in s_i if R.sigma_index(root.simple_root(a)) in keep}
    colors = []
    for c in R.colors_a:
        moved = (c.moved_by & s_i) & simple_sigma_i
        if moved:
            colors.append(TypeAColor(c.label, frozenset(moved), tuple(c.rho[i] for i in keep)))
    gamma = tuple(InvariantDivisor(g.label, tuple(g.rho[i] for i in keep)) for g in R.gamma if g.label in I)
    return SphericalSkeleton(sub, sigma, R.sp & s_i, tuple(colors), gamma)


def reduce_equivalence(R: SphericalSkeleton) -> SphericalSkeleton:
    return replace(R, gamma=tuple(g for g in R.gamma if any(x != 0 for x in g.rho)))


def direct_sum(R1: SphericalSkeleton, R2: SphericalSkeleton) -> SphericalSkeleton:
    """Disjoint union of the data over the product root system."""
    root, m1, m2 = direct_product(R1.root, R2.root)

    def embed(g, mp, src):
        out = [Fraction(0)] * root.weight_dim
        for l, c in zip(src.coordinate_labels, g):
            out[root.coordinate_labels.index(mp[l])] = c
        return tuple(out)

    sigma = tuple(embed(g, m1, R1.root) for g in R1.sigma) + tuple(embed(g, m2, R2.root) for g in R2.sigma)
    n1, n2 = len(R1.sigma), len(R2.sigma)
    z1, z2 = (Fraction(0),) * n1, (Fraction(0),) * n2
    names1 = {c.label for c in R1.colors_a} | {g.label for g in R1.gamma}
    names2 = {c.label for c in R2.colors_a} | {g.label for g in R2.gamma}
    clash = bool(names1 & names2)
    p1, p2 = ("L.", "R.") if clash else ("", "")
    colors = tuple(TypeAColor(p1 + c.label, frozenset(m1[a] for a in c.moved_by), tuple(c.rho) + z2)
                   for c in R1.colors_a)
    colors += tuple(TypeAColor(p2 + c.label, frozenset(m2[a] for a in c.moved_by), z1 + tuple(c.rho))
                    for c in R2.colors_a)
    gamma = tuple(InvariantDivisor(p1 + g.label, tuple(g.rho) + z2) for g in R1.gamma)
    gamma += tuple(InvariantDivisor(p2 + g.label, z1 + tuple(g.rho)) for g in R2.gamma)
    sp = frozenset(m1[a] for a in R1.sp) | frozenset(m2[a] for a in R2.sp)
    return SphericalSkeleton(root, sigma, sp, colors, gamma)


# -------------------------------------------------------- isomorphism


def _root_matchings(r1: RootSystem, r2: RootSystem):
    """Bijections of simple roots preserving the Cartan matrix."""
    if r1.rank != r2.rank or len(r1.torus) != len(r2.torus):
        return
    n = r1.rank

    def extend(assign, used):
        i = len(assign)
        if i == n:
            yield tuple(assign)
            return
        for j in range(n):
            if j in used or r1.cartan[i][i] != r2.cartan[j][j]:
                continue
            if all(r1.cartan[i][k] == r2.cartan[j][assign[k]] and r1.cartan[k][i] == r2.cartan[assign[k]][j]
                   for k in range(i)):
                yield from extend(assign + [j], used | {j})

    yield from extend([], frozenset())


def _match_multisets(a: list, b: list) -> bool:
    b = list(b)
    for x in a:
        if x in b:
            b.remove(x)
        else:
            return False
    return not b


def is_isomorphic(R1: SphericalSkeleton, R2: SphericalSkeleton) -> bool:
    """Isomorphism over a matching of simple roots that preserves the Cartan
    matrix; divisors are matched by their data, labels are ignored."""
    r1, r2 = R1.root, R2.root
    if len(R1.sigma) != len(R2.sigma):
        return False
    for perm in _root_matchings(r1, r2):
        def move(g):
            out = [Fraction(0)] * r2.weight_dim
            for i in range(r1.rank):
                out[perm[i]] = g[i]
            for t in range(len(r1.torus)):
                out[r2.rank + t] = g[r1.rank + t]
            return tuple(out)

        image = [move(g) for g in R1.sigma]
        idx = [R2.sigma_index(g) for g in image]
        if None in idx or len(set(idx)) != len(idx):
            continue
        if frozenset(r2.labels[perm[r1.index(a)]] for a in R1.sp) != R2.sp:
            continue

        def rho_map(rho):
            out = [Fraction(0)] * len(rho)
            for i, j in enumerate(idx):
                out[j] = rho[i]
            return tuple(out)

        a1 = [(frozenset(r2.labels[perm[r1.index(a)]] for a in c.moved_by), rho_map(c.rho)) for c in R1.colors_a]
        a2 = [(c.moved_by, c.rho) for c in R2.colors_a]
        g1 = [rho_map(g.rho) for g in R1.gamma]
        g2 = [g.rho for g in R2.gamma]
        if _match_multisets(a1, a2) and _match_multisets(g1, g2):
            return True
    return False
