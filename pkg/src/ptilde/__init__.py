"""Exact computations on spherical skeletons and colored fans.

Modules: ``exactgeom`` (rational cones, polyhedra, simplex, subdivisions),
``rootsystems``, ``skeleton`` (wp of a skeleton, localization),
``coloredfan`` (Luna data, colored fans, star subdivision),
``gorensteinify`` (Q-Gorenstein completion pipeline), ``criteria``
(toric and smoothness tests, multiplicity-free cases), ``documents`` and
``cli``.
"""

__version__ = "0.1.0"
