"""Toricness and orbit-wise smoothness criteria, and the checker for the
multiplicity-free-space optima."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .coloredfan import (
    ColoredFan, FanError, LunaEmbedding, is_complete, orbit_divisor_set, skeleton_of_embedding,
    wp_tilde_embedding,
)
from .exactgeom import Cone, LPValue, Polyhedron, Unbounded, solve_lp_sup
from .skeleton import NegativeInfinity, SphericalSkeleton, Value, localize, wp_tilde_skeleton

__all__ = [
    "CriterionError",
    "ToricVerdict",
    "SmoothVerdict",
    "is_toric",
    "is_smooth_along",
    "MfsCase",
    "MfsReport",
    "argmax_coefficients",
    "parameters_in_range",
    "verify_mfs_case",
    "CorpusReport",
    "run_corpus",
]


class CriterionError(ValueError):
    pass


@dataclass(frozen=True)
class ToricVerdict:
    toric: bool
    wp: Value | NegativeInfinity

    def __bool__(self):
        return self.toric

    def __str__(self):
        return f"{'toric' if self.toric else 'not toric'} (wp = {self.wp})"


@dataclass(frozen=True)
class SmoothVerdict:
    smooth: bool
    divisors: frozenset
    local: SphericalSkeleton
    wp: Value | NegativeInfinity

    def __bool__(self):
        return self.smooth

    def __str__(self):
        if self.smooth:
            return f"smooth (wp_local = {self.wp} < 1)"
        return f"not smooth (wp_local = {self.wp} >= 1)"


def _below_one(wp) -> bool:
    return isinstance(wp, NegativeInfinity) or wp.value < 1


def is_toric(E: LunaEmbedding, F: ColoredFan) -> ToricVerdict:
    """A complete spherical variety is toric iff its wp vanishes."""
    if not is_complete(E, F):
        raise CriterionError("the fan is not complete")
    wp = wp_tilde_embedding(E, F)
    return ToricVerdict(isinstance(wp, Value) and wp.value == 0, wp)


def is_smooth_along(E: LunaEmbedding, F: ColoredFan, orbit: Iterable[str]) -> SmoothVerdict:
    """Smooth along the orbit iff the localized skeleton has wp below 1."""
    try:
        I = orbit_divisor_set(E, F, orbit)
    except FanError as exc:
        raise CriterionError(str(exc)) from None
    local = localize(skeleton_of_embedding(E, F), I)
    wp = wp_tilde_skeleton(local)
    return SmoothVerdict(_below_one(wp), I, local, wp)


# ------------------------------------------------ multiplicity-free spaces


@dataclass(frozen=True)
class MfsCase:
    """One multiplicity-free space in the dual basis of its divisors.

    ``lambda_coords[i]`` are the coordinates of the i-th spherical root in
    the basis dual to the divisor rays; ``argmax`` gives the coefficients of
    the claimed optimum in terms of the spherical roots (``None`` means use
    the formula table).
    """

    item: int
    params: tuple
    root_system: str
    rplus_diff: int
    m: tuple
    lambda_coords: tuple
    argmax: tuple | None = None
    sp: tuple | None = None
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.m)

    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class MfsReport:
    case: MfsCase
    wp: Fraction | None
    optimum: Fraction | None
    argmax_value: Fraction | None
    argmax_feasible: bool
    argmax_optimal: bool
    problems: tuple = ()

    @property
    def passed(self) -> bool:
        return self.wp == 0 and self.argmax_feasible and self.argmax_optimal and not self.problems

    def line(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.case.params)
        head = f"item {self.case.item}" + (f" {ps}" if ps else "")
        wp = "?" if self.wp is None else str(self.wp)
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(self.problems)})" if self.problems else ""
        return f"{head}: wp = {wp}, argmax feasible = {self.argmax_feasible}, optimal = {self.argmax_optimal} {status}{extra}"


def _delta(k: int) -> int:
    return k % 2


def _sum(pairs: Iterable[tuple[int, Fraction]]) -> dict:
    out: dict = {}
    for i, a in pairs:
        out[i] = out.get(i, Fraction(0)) + Fraction(a)
    return out


def _formula_table() -> dict[int, Callable[..., dict]]:
    """Optimal coefficients ``{i: a_i}`` of the spherical roots ``lambda_i``."""
    F = Fraction
    t: dict[int, Callable[..., dict]] = {}
    t[1] = lambda n: {}
    t[2] = lambda n: {}
    t[3] = lambda n: {1: F(1)}
    t[4] = lambda n: {1: F(1)}
    t[5] = lambda n: _sum((n - k, F(k * (k + 1), 2)) for k in range(1, n))
    t[6] = lambda n: _sum((n // 2 - k, k * (2 * k + 1)) for k in range(1, n // 2))
    t[7] = lambda n: _sum((n // 2 - k, k * (2 * k - 1)) for k in range(1, n // 2))
    t[8] = lambda n: _sum((n - k, k * k) for k in range(1, n))
    t[9] = lambda n, n1: _sum((n - k, k * (k + n - n1)) for k in range(1, n))
    t[10] = lambda n1: {1: 2 * n1 - 1, 2: 1}
    t[11] = lambda: {1: 8, 2: 3, 3: 6, 4: 2}
    t[12] = lambda n: {1: 4 * n, 2: 2 * n - 1, 3: 3, 4: 4 * n - 2, 5: 2 * n - 2}
    t[13] = lambda: {1: 12, 2: 5, 3: 9, 4: 4, 5: 1}
    t[14] = lambda n: {1: 4 * n - 4, 2: 2 * n - 3, 3: 3 * n - 3, 4: 2 * n - 4, 5: n - 3}
    t[15] = lambda: {1: 1}
    t[16] = lambda: {1: 1, 2: 5}
    t[17] = lambda: {1: 5}
    t[18] = lambda: {1: 1}
    t[19] = lambda: {1: 10, 2: 1}
    t[20] = lambda: {1: 1, 2: 1}
    t[21] = lambda: {1: 1}
    t[22] = lambda n: {1: n - 1}
    t[23] = lambda n: {1: 1}
    t[24] = lambda n: _sum((n - 1 - k, F(k * (k + 1), 2)) for k in range(1, n - 1))
    t[25] = lambda n: _sum((n - 1 - k, F(k * (k - 1), 2) + (n - 1) * _delta(k)) for k in range(1, n - 1))
    t[26] = lambda n: _sum([(n - 2, n - 1)] + [(n - 2 - k, F(k * (k + 1), 2) + (n - 1) * _delta(k))
                                               for k in range(1, n - 2)])
    t[27] = lambda n, n1: _sum([(k, k * (n1 - n + k)) for k in range(1, n)]
                               + [(n - 1 + k, k * (n1 - n + k - 1)) for k in range(1, n1)])
    t[28] = lambda n: _sum([(k, k * (k + 1)) for k in range(1, n)] + [(n - 1 + k, k * k) for k in range(1, n + 1)])
    t[29] = lambda n: _sum([(k, k * k) for k in range(1, n)] + [(n - 1 + k, k * (k + 1)) for k in range(1, n)])
    t[30] = lambda n, n1: _sum([(k, k * (n - n1 + k) - n + n1) for k in range(1, n1)]
                               + [(n1 - 1 + k, k * (n - n1 + k + 1)) for k in range(1, n1)])
    t[31] = lambda n, n1: _sum([(k, k * (k + n1 - n)) for k in range(1, n)]
                               + [(n - 1 + k, k * (k + n1 - n - 3) + (2 * n - n1 + 2)) for k in range(1, n + 1)])
    t[32] = lambda n: _sum([(k, k * (k + 1)) for k in range(1, n)]
                           + [(n - 1 + k, n + (k - 1) ** 2) for k in range(1, n + 1)])
    t[33] = lambda n: _sum([(k, k * k) for k in range(1, n)] + [(n - 1 + k, n + k * (k - 1)) for k in range(1, n)])
    t[34] = lambda n, n1: _sum([(k, k * (n - n1 + k)) for k in range(1, n1)]
                               + [(n1 - 1 + k, k * (n - n1 + k - 1) - n1) for k in range(1, n1)])
    t[35] = lambda: {1: 1, 2: 3, 3: 1}
    t[36] = lambda n: {1: n - 1, 2: n + 1, 3: 1}
    t[37] = lambda n, n2: {1: n - 1, 2: n + n2 - 1, 3: n2 - 1}
    t[38] = lambda n: {1: 2 * n - 1, 2: 1}
    t[39] = lambda n: {1: 2 * n - 1, 2: 1, 3: 2 * n + 2}
    t[40] = lambda n: {1: 2 * n - 1, 2: 1, 3: 2 * n + 1, 4: 1}
    t[41] = lambda n, n2: {1: 2 * n - 1, 2: 1, 3: 2 * n + n2 - 1, 4: n2 - 1}
    t[42] = lambda n, n2: {1: 2 * n - 1, 2: 1, 3: 2 * n + 2 * n2 - 1, 4: 2 * n2 - 1, 5: 1}
    return t


_FORMULAS = _formula_table()

# parameter names per item, in the order the formulas take them
_PARAMS = {
    9: ("n", "n1"), 10: ("n1",), 27: ("n", "n1"), 30: ("n", "n1"), 31: ("n", "n1"),
    34: ("n", "n1"), 37: ("n", "n2"), 41: ("n", "n2"), 42: ("n", "n2"),
}
for _i in (11, 13, 15, 16, 17, 18, 19, 20, 21, 35):
    _PARAMS[_i] = ()


def _ranges():
    at_least = lambda lo: (lambda n: n >= lo)
    table = {i: at_least(2) for i in (1, 2, 3, 5, 8, 38, 39, 40)}
    table.update({i: at_least(3) for i in (4, 12, 22, 23, 24, 36)})
    table.update({
        6: lambda n: n >= 5 and n % 2 == 1,
        7: lambda n: n >= 6 and n % 2 == 0,
        9: lambda n, n1: n > n1 >= 2,
        10: at_least(2),
        14: at_least(5),
        25: lambda n: n >= 4 and n % 2 == 0,
        26: lambda n: n >= 5 and n % 2 == 1,
        27: lambda n, n1: 2 <= n < n1 - 1,
        28: at_least(2),
        29: at_least(2),
        30: lambda n, n1: 2 <= n1 < n,
        31: lambda n, n1: 2 <= n < n1 - 1,
        32: at_least(2),
        33: at_least(2),
        34: lambda n, n1: 2 <= n1 < n,
        37: lambda n, n2: n >= n2 >= 3,
        41: lambda n, n2: n >= 2 and n2 >= 3,
        42: lambda n, n2: n >= 2 and n2 >= 3,
    })
    return table


# Parameter ranges on which each row of the table is stated.
_RANGES = _ranges()


def parameters_in_range(item: int, params: dict) -> bool:
    names = _PARAMS.get(item, ("n",))
    check = _RANGES.get(item)
    return check is None or check(*(params[k] for k in names))


def argmax_coefficients(item: int, params: dict, count: int) -> tuple:
    """The tabulated optimum as a coefficient list of length ``count``."""
    if item not in _FORMULAS:
        raise CriterionError(f"no formula for item {item}")
    names = _PARAMS.get(item, ("n",))
    try:
        args = [params[k] for k in names]
    except KeyError as exc:
        raise CriterionError(f"item {item} needs parameter {exc.args[0]}") from None
    if not parameters_in_range(item, params):
        raise CriterionError(f"item {item}: parameters {dict((k, params[k]) for k in names)} are outside the stated range")
    coeffs = _FORMULAS[item](*args)
    out = [Fraction(0)] * count
    for i, a in coeffs.items():
        if a == 0:
            continue
        if not 1 <= i <= count:
            raise CriterionError(f"item {item}: coefficient for lambda_{i} but only {count} spherical roots")
        out[i - 1] += Fraction(a)
    return tuple(out)


def verify_mfs_case(c: MfsCase) -> MfsReport:
    """Check the claimed optimum and solve the linear program independently."""
    k = c.rank
    for i, lam in enumerate(c.lambda_coords):
        if len(lam) != k:
            raise CriterionError(f"lambda_{i + 1} has {len(lam)} coordinates, expected {k}")
    coeffs = c.argmax if c.argmax is not None else argmax_coefficients(c.item, c.param_dict(), len(c.lambda_coords))
    coeffs = tuple(Fraction(a) for a in coeffs)
    if len(coeffs) != len(c.lambda_coords):
        raise CriterionError("argmax has the wrong number of coefficients")
    if any(a < 0 for a in coeffs):
        raise CriterionError("argmax coefficients must be nonnegative")
    problems = []
    if any(m < 1 for m in c.m):
        problems.append("some m_D < 1")
    theta = tuple(sum((a * lam[j] for a, lam in zip(coeffs, c.lambda_coords)), Fraction(0)) for j in range(k))
    feasible = all(t >= -m for t, m in zip(theta, c.m))
    target = Fraction(c.rplus_diff - sum(m - 1 for m in c.m))
    value = sum(theta, Fraction(0))
    P = Polyhedron([(tuple(Fraction(int(i == j)) for i in range(k)), -m) for j, m in enumerate(c.m)], k)
    T = Cone(c.lambda_coords, dim=k) if c.lambda_coords else Cone([], dim=k)
    res = solve_lp_sup(P, T, [1] * k)
    if isinstance(res, Unbounded):
        problems.append("linear program unbounded")
        return MfsReport(c, None, None, value, feasible, False, tuple(problems))
    if not isinstance(res, LPValue):
        problems.append("linear program infeasible")
        return MfsReport(c, None, None, value, feasible, False, tuple(problems))
    wp = target - res.value
    optimal = feasible and value == res.value
    return MfsReport(c, wp, res.value, value, feasible, optimal, tuple(problems))


@dataclass(frozen=True)
class CorpusReport:
    reports: tuple
    errors: tuple  # (path, message)

    @property
    def status(self) -> str:
        if not self.reports:
            return "no cases"
        return "pass" if self.passed else "fail"

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports) and not self.errors

    def lines(self) -> list[str]:
        out = [r.line() for r in self.reports]
        out += [f"error: {p}: {m}" for p, m in self.errors]
        out.append(f"summary: {sum(r.passed for r in self.reports)}/{len(self.reports)} cases pass; status {self.status}")
        return out


def _case_key(c: MfsCase):
    return (c.item, tuple(v for _, v in c.params))


def run_corpus(cases: Sequence[tuple[str, MfsCase | Exception]], max_param: int | None = None,
               max_rank: int | None = None, jobs: int = 1) -> CorpusReport:
    """Verify loaded cases; load failures are reported, not raised.

    ``cases`` pairs a source name with either a case or the error met while
    loading it.
    """
    good, errors = [], []
    for src, c in cases:
        if isinstance(c, Exception):
            errors.append((src, str(c)))
            continue
        if max_param is not None and any(v > max_param for _, v in c.params):
            continue
        if max_rank is not None and c.rank > max_rank:
            continue
        good.append((src, c))
    good.sort(key=lambda p: _case_key(p[1]))
    reports = []
    if jobs > 1 and len(good) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_safe_verify, [c for _, c in good]))
    else:
        results = [_safe_verify(c) for _, c in good]
    for (src, _), r in zip(good, results):
        if isinstance(r, str):
            errors.append((src, r))
        else:
            reports.append(r)
    return CorpusReport(tuple(reports), tuple(errors))


def _safe_verify(c: MfsCase):
    try:
        return verify_mfs_case(c)
    except CriterionError as exc:
        return str(exc)
