"""Independent reference computations used by the tests.

These avoid the simplex code entirely: linear programs are solved either by
enumerating the generators of the feasible region (double description) or by
brute force over basic solutions with a local Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ptilde.exactgeom import Cone, Infeasible, LPValue, Polyhedron, Unbounded


def gauss_solve(rows, rhs):
    """Unique solution of a square system, or None if singular."""
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [a / p for a in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def lp_by_generators(P: Polyhedron, T: Cone, objective):
    """sup of ``objective`` on ``P ∩ T`` from the vertices and rays of the region."""
    d = P.dim
    hs = list(P.halfspaces)
    hs += [(f, 0) for f in T.facets]
    hs += [(e, 0) for e in T.equations] + [(tuple(-x for x in e), 0) for e in T.equations]
    points, rays, lin = Polyhedron(hs, d).minkowski_generators()
    if not points:
        return Infeasible()
    c = [Fraction(x) for x in objective]
    val = lambda v: sum((a * b for a, b in zip(c, v)), Fraction(0))
    if any(val(r) > 0 for r in rays) or any(val(l) != 0 for l in lin):
        return Unbounded()
    return LPValue(max(val(p) for p in points), ())


def lp_brute_force_bounded(halfspaces, objective, dim):
    """max over a bounded region ``{x : a.x >= b}`` by trying every basis."""
    best = None
    for sub in combinations(halfspaces, dim):
        x = gauss_solve([a for a, _ in sub], [b for _, b in sub])
        if x is None:
            continue
        if all(sum((Fraction(p) * q for p, q in zip(a, x)), Fraction(0)) >= b for a, b in halfspaces):
            v = sum((Fraction(p) * q for p, q in zip(objective, x)), Fraction(0))
            if best is None or v > best:
                best = v
    return best
