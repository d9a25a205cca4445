"""Seeded random corpus of Luna data and complete colored fans.

Luna data come from a small catalogue of homogeneous spaces of rank at most
two, combined by direct products.  Complete fans are lower regular
subdivisions of a vector configuration made of some colors and generators of
the valuation cone, under random heights; the cells whose relative interior
misses the valuation cone are dropped.
"""

from __future__ import annotations

import random
from fractions import Fraction as Fr
from functools import lru_cache

from ptilde.coloredfan import (
    LunaEmbedding, close_fan, is_complete, make_fan, validate_embedding, validate_fan, valuation_cone,
)
from ptilde.exactgeom import VectorConfiguration, primitive, regular_subdivision, solve_linear
from ptilde.rootsystems import parse_root_system
from ptilde.skeleton import TypeAColor

H = Fr(1, 2)


def _block(root, sigma=(), basis=(), colors=(), sp=()):
    return {"root": root, "sp": tuple(sp), "sigma": tuple(sigma), "basis": tuple(basis), "colors": tuple(colors)}


def fundamental_weight(name: str, k: int) -> tuple:
    R = parse_root_system(name)
    n = R.rank
    return tuple(solve_linear([list(r) for r in R.cartan], [int(i == k) for i in range(n)], n))


def catalogue(rng: random.Random) -> list[dict]:
    """Blocks in local coordinates; colors_a rho is given on the local basis."""
    w1, w2 = fundamental_weight("A2", 0), fundamental_weight("A2", 1)
    c = rng.randint(0, 2)
    k = rng.randint(1, 3)
    return [
        _block("T1", basis=[(1,)]),
        _block("A1", basis=[(Fr(k, 2),)]),
        _block("A1", sigma=[(1,)], basis=[(1,)], colors=[("+", {"a1"}, (1,)), ("-", {"a1"}, (1,))]),
        _block("A1", sigma=[(2,)], basis=[(2,)]),
        _block("A1xA1", sigma=[(H, H)], basis=[(H, H)]),
        _block("A1xA1", sigma=[(1, 1)], basis=[(1, 1)]),
        _block("A2", sigma=[(2, 0), (0, 2)], basis=[(2, 0), (0, 2)]),
        _block("A2", sigma=[(1, 1)], basis=[(1, 1)]),
        _block("A2", sigma=[(1, 1)], basis=[w1, w2]),
        _block("A2", sigma=[(1, 0)], basis=[(1, 0)], colors=[("+", {"a1"}, (1,)), ("-", {"a1"}, (1,))]),
        _block("A1xT1", sigma=[(1, 0)], basis=[(1, 0), (0, 1)],
               colors=[("+", {"a1"}, (1, c)), ("-", {"a1"}, (1, -c))]),
        _block("A1xT1", basis=[(H, 1)]),
        horospherical(rng),
    ]


def horospherical(rng: random.Random) -> dict:
    name = rng.choice(["A1", "A2", "B2", "G2", "A1xT1", "A2xT1"])
    R = parse_root_system(name)
    simple = list(R.labels)
    sp = [l for l in simple if rng.random() < 0.3]
    free = [i for i, l in enumerate(simple) if l not in sp]
    gens = [fundamental_weight(name.split("x")[0], i) + (0,) * len(R.torus) for i in free]
    gens += [tuple(int(j == R.rank + t) for j in range(R.weight_dim)) for t in range(len(R.torus))]
    if not gens:
        return _block("T1", basis=[(1,)])
    r = rng.randint(1, min(2, len(gens)))
    for _ in range(20):
        basis = []
        for _ in range(r):
            coeffs = [rng.randint(-2, 2) for _ in gens]
            basis.append(tuple(sum((a * g[j] for a, g in zip(coeffs, gens)), Fr(0)) for j in range(R.weight_dim)))
        try:
            E = LunaEmbedding(R, sp, (), tuple(basis))
        except Exception:
            continue
        if not validate_embedding(E):
            return _block(name, basis=basis, sp=sp)
    return _block(name, basis=[gens[0]], sp=sp)


def _rank(block) -> tuple[int, int]:
    R = parse_root_system(block["root"])
    return R.rank, len(block["basis"])


def combine(blocks: list[dict]) -> LunaEmbedding:
    parts, torus = [], 0
    for b in blocks:
        for p in b["root"].split("x"):
            if p.startswith("T"):
                torus += int(p[1:])
            else:
                parts.append(p)
    name = "x".join(parts + ([f"T{torus}"] if torus else [])) or "T0"
    R = parse_root_system(name)
    sim_off, tor_off, m_off = 0, 0, 0
    total_m = sum(len(b["basis"]) for b in blocks)
    sigma, basis, colors, sp = [], [], [], []
    for bi, b in enumerate(blocks):
        local = parse_root_system(b["root"])
        r, t = local.rank, len(local.torus)

        def place(v):
            out = [Fr(0)] * R.weight_dim
            for j in range(r):
                out[sim_off + j] = Fr(v[j])
            for j in range(t):
                out[R.rank + tor_off + j] = Fr(v[r + j])
            return tuple(out)

        relabel = {f"a{j + 1}": f"a{sim_off + j + 1}" for j in range(r)}
        sigma += [place(g) for g in b["sigma"]]
        basis += [place(v) for v in b["basis"]]
        sp += [relabel[l] for l in b["sp"]]
        for suffix, moved, rho in b["colors"]:
            full = [Fr(0)] * total_m
            for j, x in enumerate(rho):
                full[m_off + j] = Fr(x)
            colors.append(TypeAColor(f"A{bi}{suffix}", frozenset(relabel[l] for l in moved), tuple(full)))
        sim_off += r
        tor_off += t
        m_off += len(b["basis"])
    return LunaEmbedding(R, frozenset(sp), tuple(sigma), tuple(basis), tuple(colors))


def random_embedding(rng: random.Random, max_rank: int = 3, max_root_rank: int = 3) -> LunaEmbedding:
    while True:
        cat = catalogue(rng)
        blocks, rk, rr = [], 0, 0
        for _ in range(rng.randint(1, 3)):
            b = rng.choice(cat)
            r, m = _rank(b)
            if rk + m <= max_rank and rr + r <= max_root_rank:
                blocks.append(b)
                rk += m
                rr += r
        if not blocks:
            continue
        E = combine(blocks)
        if not validate_embedding(E):
            return E


def _integral(v) -> tuple:
    return tuple(int(x) for x in primitive(v))


def random_complete_fan(E: LunaEmbedding, rng: random.Random):
    V = valuation_cone(E)
    inv = []
    gens = [_integral(g) for g in V.rays] + [_integral(g) for g in V.lineality]
    gens += [tuple(-x for x in _integral(g)) for g in V.lineality]
    for g in gens:
        if g not in inv:
            inv.append(g)
    for _ in range(rng.randint(0, 2)):
        if not gens:
            break
        v = [0] * E.rank
        for g in gens:
            a = rng.randint(0, 2)
            v = [x + a * y for x, y in zip(v, g)]
        if any(v):
            v = _integral(v)
            if v not in inv:
                inv.append(v)
    colors = [c for c in E.colors if any(x != 0 for x in c.rho) and rng.random() < 0.7]
    taken = {_integral(c.rho) for c in colors}
    rays = {}
    for v in inv:
        if v not in taken:
            rays[f"X{len(rays) + 1}"] = v
    config = [(l, v) for l, v in rays.items()] + [(c.label, c.rho) for c in colors]
    if not config:
        return None
    heights = {l: rng.randint(1, 6) for l, _ in config}
    cells = regular_subdivision(VectorConfiguration(config, heights), "lower", dim=E.rank).cells
    return close_fan(E, make_fan(rays, [frozenset(c) for c in cells]))


@lru_cache(maxsize=None)
def corpus(size: int = 110, seed: int = 20240601) -> tuple:
    """``size`` complete valid (embedding, fan) pairs."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < size:
        attempts += 1
        if attempts > 20 * size:
            raise RuntimeError("random corpus generation keeps failing")
        E = random_embedding(rng)
        F = random_complete_fan(E, rng)
        if F is None or validate_fan(E, F) or not is_complete(E, F):
            continue
        out.append((E, F))
    return tuple(out)
