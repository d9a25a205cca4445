"""Regenerate the JSON documents under src/ptilde/data.

Run from the repository root: ``python tools/make_data.py``.
"""

from fractions import Fraction as Fr
from pathlib import Path

from ptilde.coloredfan import ColoredData, LunaEmbedding, close_fan, make_fan
from ptilde.criteria import MfsCase
from ptilde.documents import embedding_document, mfs_document, serialize_document, skeleton_document
from ptilde.rootsystems import parse_root_system
from ptilde.skeleton import Color, InvariantDivisor, SphericalSkeleton, TypeAColor

DATA = Path(__file__).resolve().parent.parent / "src" / "ptilde" / "data"

MFS_NOTE = ("spherical roots in the dual basis of the divisor rays and m_D worked out by hand "
            "from the weight monoid; not part of the tabulated optima")


def write(path: Path, tree: dict):
    path.write_text(serialize_document(tree), encoding="utf-8")


def conics():
    A2 = parse_root_system("A2")
    return LunaEmbedding(A2, [], [(2, 0), (0, 2)], [(2, 0), (0, 2)])


def a1a1t1():
    R = parse_root_system("A1xA1xT1")
    colors = [TypeAColor("D1+", {"a1"}, (1, 0, 0)), TypeAColor("D1-", {"a1"}, (0, 1, 0)),
              TypeAColor("D2+", {"a2"}, (0, 0, 1)), TypeAColor("D2-", {"a2"}, (0, 0, 1))]
    return LunaEmbedding(R, [], [(1, 0, 0), (0, 1, 0)],
                         [(Fr(1, 2), 0, 1), (Fr(1, 2), 0, -1), (0, 1, 0)], colors)


def examples():
    out = DATA / "examples"
    A2 = parse_root_system("A2")
    sk = SphericalSkeleton(A2, ((2, 0), (0, 2)), (), (), (InvariantDivisor("X1", (-1, 0)),))
    write(out / "conics_skeleton.json", skeleton_document(sk))
    A1 = parse_root_system("A1")
    loc = SphericalSkeleton(A1, ((2,),), (), (), (InvariantDivisor("X1", (-1,)),))
    write(out / "conics_localized.json", skeleton_document(loc))
    E = conics()
    write(out / "conics.json", embedding_document(E, close_fan(E, make_fan({"X1": (-1, 0)}, [{"X1", "D1"}]))))
    write(out / "conics_colorless.json", embedding_document(
        E, close_fan(E, make_fan({"X1": (-1, 0), "X2": (0, -1)}, [{"X1", "X2"}]))))
    E2 = a1a1t1()
    write(out / "a1a1t1.json", embedding_document(
        E2, close_fan(E2, make_fan({"X": (-1, -1, -1)}, [{"X", "D1+", "D1-"}]))))
    write(out / "a1a1t1_completed.json", embedding_document(E2, close_fan(E2, make_fan(
        {"X": (-1, -1, -1)}, [{"X", "D1+", "D1-"}, {"X", "D1+", "D2+"}, {"X", "D1-", "D2+"}]))))
    D = ColoredData(2, [(1, 1)], [Color("D1", "a", (), (1, 0), 1), Color("D2", "a", (), (0, 1), 1),
                                  Color("D3", "a", (), (-2, 1), 1)])
    write(out / "star.json", embedding_document(D, make_fan({"X": (-3, 1)}, [{"X", "D1", "D2", "D3"}, {"X"}, set()])))


def lam_a(n):
    """2 chi_i - chi_{i-1} - chi_{i+1} for i = 1..n-1 over n divisors."""
    out = []
    for i in range(1, n):
        v = [0] * n
        v[i - 1] = 2
        if i >= 2:
            v[i - 2] = -1
        v[i] = -1
        out.append(tuple(v))
    return tuple(out)


def a_sp(n):
    return tuple(f"a{i}" for i in range(2, n))


def mfs_cases():
    for n in range(2, 7):
        yield MfsCase(1, (("n", n),), f"A{n - 1}xT1", n - 1, (n,), (), None, a_sp(n),
                      "SL(n) x C* on C^n")
        yield MfsCase(2, (("n", n),), f"C{n}xT1", 2 * n - 1, (2 * n,), (), None,
                      tuple(f"a{i}" for i in range(2, n + 1)), "Sp(2n) x C* on C^2n")
        yield MfsCase(3, (("n", n),), f"B{n}xT1", 2 * n - 1, (2 * n - 1, 1), ((2, -1),), None,
                      tuple(f"a{i}" for i in range(2, n + 1)), "Spin(2n+1) x C* on C^(2n+1)")
        yield MfsCase(5, (("n", n),), f"A{n - 1}xT1", n * (n - 1) // 2, (1,) * n, lam_a(n), None, (),
                      "SL(n) x C* on S^2 C^n")
        yield MfsCase(8, (("n", n),), f"A{n - 1}xA{n - 1}xT1", n * (n - 1), (2,) * (n - 1) + (1,), lam_a(n),
                      None, (), "SL(n) x SL(n) x C* on C^n (x) C^n")
    yield MfsCase(21, (), "A1xT2", 1, (1, 1, 1), ((1, 1, -1),), None, (), "SL(2) x (C*)^2 on C^2 + C^2")


def mfs():
    out = DATA / "mfs"
    for c in mfs_cases():
        ps = "".join(f"_{k}{v}" for k, v in c.params)
        write(out / f"item{c.item:02d}{ps}.json", mfs_document(c, MFS_NOTE))


if __name__ == "__main__":
    examples()
    mfs()
