"""Turn a complete colored fan into a complete Q-Gorenstein one with the same wp.

The pipeline has five stages:

1. if no positive multiple of ``kappa`` lies in ``M``, adjoin ``kappa`` to ``M``;
2. lift every cone, colors to ``(rho, m)`` and invariant rays to ``(v, 1)``;
3. close the lifted fan with cones through the poles ``Y+ = (0, 1)`` and
   ``Y- = (0, -1)``, taken over the upper and lower regular subdivisions;
4. star-subdivide at every color that is used off a ray;
5. triangulate without new rays and drop cones missing the valuation cone.

Without augmentation stages 2 and 3 are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coloredfan import (
    ColoredFan, LunaEmbedding, canonical, close_fan, colored_star_subdivision, cone_of, is_complete, make_fan,
    wp_tilde_embedding, _vec, _m_of,
)
from .exactgeom import VectorConfiguration, primitive, regular_subdivision, triangulate_cone
from .skeleton import TypeAColor

__all__ = [
    "PipelineTrace",
    "PipelineError",
    "needs_augmentation",
    "augment_kappa",
    "lift_fan",
    "complete_with_poles",
    "colors_to_rays",
    "off_ray_colors",
    "triangulate_and_prune",
    "gorensteinify",
    "POLE_UP",
    "POLE_DOWN",
]

POLE_UP = "Y+"
POLE_DOWN = "Y-"


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineTrace:
    embedding: LunaEmbedding
    lifted: LunaEmbedding
    augmented: bool
    stages: tuple  # ((name, fan), ...) for F, F2, F3, F4, F5
    wp: tuple  # ((name, value), ...)

    def stage(self, name: str) -> ColoredFan:
        return dict(self.stages)[name]

    @property
    def output(self) -> ColoredFan:
        return self.stage("F5")


def needs_augmentation(E: LunaEmbedding) -> bool:
    """True iff no positive multiple of ``kappa`` lies in ``M``."""
    return E.to_m(E.kappa) is None


def augment_kappa(E: LunaEmbedding) -> LunaEmbedding:
    """``M' = M + Z kappa``; type-a colors get last coordinate ``m_D = 1``."""
    if not needs_augmentation(E):
        raise PipelineError("kappa already has a multiple in M")
    colors = tuple(TypeAColor(c.label, c.moved_by, tuple(c.rho) + (Fraction(1),)) for c in E.colors_a)
    return LunaEmbedding(E.root, E.sp, E.sigma, E.m_basis + (tuple(E.kappa),), colors)


def lift_fan(E: LunaEmbedding, E2: LunaEmbedding, F: ColoredFan) -> ColoredFan:
    """Stage 2: same label sets over lifted vectors, with their genuine faces."""
    rays = [(l, tuple(v) + (Fraction(1),)) for l, v in F.rays]
    return close_fan(E2, make_fan(rays, F.cones))


def complete_with_poles(E: LunaEmbedding, E2: LunaEmbedding, F: ColoredFan, F2: ColoredFan) -> ColoredFan:
    """Stage 3: add the poles and the cones over upper and lower cells."""
    n = E.rank
    for pole in (POLE_UP, POLE_DOWN):
        if pole in F2.ray_map or pole in E2.color_map:
            raise PipelineError(f"label {pole} is already in use")
    up = tuple([Fraction(0)] * n + [Fraction(1)])
    down = tuple([Fraction(0)] * n + [Fraction(-1)])
    rays = list(F2.rays) + [(POLE_UP, up), (POLE_DOWN, down)]
    cones = set(F2.cones)
    for c in F.cones:
        labels = sorted(c)
        config = VectorConfiguration([(l, _vec(E, F, l)) for l in labels],
                                     {l: _m_of(E, F, l) for l in labels})
        for side, pole in (("upper", POLE_UP), ("lower", POLE_DOWN)):
            for cell in regular_subdivision(config, side, dim=n).cells:
                cones.add(frozenset(cell) | {pole})
    return close_fan(E2, make_fan(rays, cones))


def _spans_ray(E, F: ColoredFan, cone: frozenset, label: str) -> bool:
    C = cone_of(E, F, cone)
    return tuple(primitive(_vec(E, F, label))) in {tuple(r) for r in C.rays}


def off_ray_colors(E, F: ColoredFan) -> list[str]:
    """Colors used by some cone without spanning one of its rays."""
    out = set()
    for c in F.cones:
        for d in F.colors_of(c):
            if d not in out and not _spans_ray(E, F, c, d):
                out.add(d)
    return sorted(out)


def colors_to_rays(E, F3: ColoredFan, max_passes: int = 32) -> ColoredFan:
    """Stage 4: star subdivisions in ascending label order.

    Before each subdivision the color is checked again, since an earlier
    subdivision may already have moved it onto rays or out of all colorings.
    """
    F = F3
    for _ in range(max_passes):
        pending = off_ray_colors(E, F)
        if not pending:
            return F
        for d in pending:
            if d in off_ray_colors(E, F):
                F = colored_star_subdivision(E, F, d)
    raise PipelineError("colors still off rays after repeated subdivision")


def triangulate_and_prune(E, F4: ColoredFan) -> ColoredFan:
    """Stage 5: placing triangulation in ascending label order, then pruning.

    Each simplex inherits every label of its parent whose vector it contains.
    """
    cones = set()
    for c in F4.cones:
        if not c:
            cones.add(c)
            continue
        C = cone_of(E, F4, c)
        for piece in triangulate_cone(C, sorted(c)):
            labels = frozenset(l for l in c if piece.contains(_vec(E, F4, l)))
            cones.add(canonical(E, F4, labels))
    return close_fan(E, make_fan(F4.rays, cones))


def gorensteinify(E: LunaEmbedding, F: ColoredFan, check: bool = True) -> PipelineTrace:
    if check and not is_complete(E, F):
        raise PipelineError("input fan is not complete")
    if needs_augmentation(E):
        E2 = augment_kappa(E)
        F2 = lift_fan(E, E2, F)
        F3 = complete_with_poles(E, E2, F, F2)
        augmented = True
    else:
        E2, F2, F3 = E, F, F
        augmented = False
    F4 = colors_to_rays(E2, F3)
    F5 = triangulate_and_prune(E2, F4)
    stages = (("F", F), ("F2", F2), ("F3", F3), ("F4", F4), ("F5", F5))
    wp = (("F", wp_tilde_embedding(E, F)),) + tuple(
        (name, wp_tilde_embedding(E2, fan)) for name, fan in stages[1:])
    return PipelineTrace(E, E2, augmented, stages, wp)
