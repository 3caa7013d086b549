"""McKay graphs, ADE recognition and the exceptional fiber of the resolution.

The fiber over the singular point of the minimal resolution of C^2/G is a
tree of 2-spheres shaped like the finite Dynkin diagram.  Its K-theory is
computed here from an explicit cell structure, never from R(G), so that
comparing it with the character-theoretic side is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binary_subgroups import (
    DEFAULT_CAP,
    AdeLabel,
    CharacterTable,
    build_character_table,
    k_pair_of_group_algebra,
)
from .fgab import IntMatrix, KPair, cochain_cohomology, direct_sum, kpair_isomorphic


class McKayError(ValueError):
    pass


@dataclass(frozen=True)
class McKayGraph:
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    affine_vertex: int

    @property
    def size(self) -> int:
        return len(self.degrees)

    def matrix(self) -> np.ndarray:
        return np.array(self.adjacency, dtype=int).reshape(self.size, self.size)

    def cartan_kernel_residual(self) -> int:
        """max |(2I - a) d|; zero when the degree vector spans the affine Cartan kernel."""
        a = self.matrix()
        d = np.array(self.degrees)
        return int(np.abs(2 * d - a @ d).max())


@dataclass(frozen=True)
class ExceptionalFiber:
    sphere_count: int
    intersections: tuple[tuple[int, ...], ...]
    # McKay vertex each sphere came from
    vertices: tuple[int, ...] = ()

    def edges(self) -> list[tuple[int, int]]:
        """One entry per intersection point (multiplicities repeated)."""
        out = []
        for i in range(self.sphere_count):
            for j in range(i + 1, self.sphere_count):
                out += [(i, j)] * self.intersections[i][j]
        return out


def mckay_graph(t: CharacterTable) -> McKayGraph:
    """``a[i][j]`` is the multiplicity of chi_j in V (x) chi_i."""
    r = t.num_classes
    chars = t.characters
    a = [[t.multiplicity(t.defining_char * chars[i], chars[j]) for j in range(r)] for i in range(r)]
    if any(x < 0 for row in a for x in row):
        raise McKayError("negative multiplicity in McKay graph")
    trivial = [i for i in range(r) if np.allclose(chars[i], 1.0, atol=1e-6)]
    if len(trivial) != 1:
        raise McKayError("could not single out the trivial character")
    g = McKayGraph(tuple(map(tuple, a)), t.degrees, trivial[0])
    m = g.matrix()
    if not (m == m.T).all():
        raise McKayError("McKay graph is not symmetric")
    if g.cartan_kernel_residual():
        raise McKayError("degree vector is not in the kernel of 2I - a")
    return g


def _neighbours(adj: np.ndarray, v: int) -> list[int]:
    return [int(u) for u in np.nonzero(adj[v])[0]]


def _is_tree(adj: np.ndarray) -> bool:
    n = len(adj)
    if n == 0:
        return False
    if (adj > 1).any() or np.trace(adj):
        return False
    if adj.sum() // 2 != n - 1:
        return False
    seen, stack = {0}, [0]
    while stack:
        for u in _neighbours(adj, stack.pop()):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def _finite_part(g: McKayGraph) -> tuple[np.ndarray, list[int]]:
    keep = [i for i in range(g.size) if i != g.affine_vertex]
    return g.matrix()[np.ix_(keep, keep)], keep


def dynkin_type(g: McKayGraph) -> AdeLabel:
    """Classify an affine ADE McKay graph by the shape of its finite part."""
    a = g.matrix()
    r = g.size
    if r == 2:
        if a[0, 1] == 2 and a[0, 0] == a[1, 1] == 0:
            return AdeLabel("Cyclic", 2)
        raise McKayError(f"two-vertex graph is not affine A1: {a.tolist()}")
    fin, _ = _finite_part(g)
    if not _is_tree(fin):
        raise McKayError("finite part of the McKay graph is not a tree")
    deg = fin.sum(axis=1)
    branch = [v for v in range(len(fin)) if deg[v] >= 3]

    if not branch:
        # affine A_n is an (n+1)-cycle
        if (a.sum(axis=1) == 2).all() and a.max() == 1:
            return AdeLabel("Cyclic", r)
        raise McKayError("path-shaped finite part but the affine graph is not a cycle")

    if a[g.affine_vertex].sum() != 1 or a.sum() // 2 != r - 1:
        raise McKayError("affine D/E graph must be a tree with a leaf affine vertex")
    if len(branch) != 1 or deg[branch[0]] != 3:
        raise McKayError(f"unrecognized Dynkin shape, degrees {deg.tolist()}")
    b = branch[0]
    arms = []
    for start in _neighbours(fin, b):
        length, prev, cur = 1, b, start
        while True:
            nxt = [u for u in _neighbours(fin, cur) if u != prev]
            if not nxt:
                break
            length, prev, cur = length + 1, cur, nxt[0]
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        # D_{c+3} <-> BinaryDihedral(c+1)
        return AdeLabel("BinaryDihedral", arms[2] + 1)
    e_types = {(1, 2, 2): "BinaryTetrahedral", (1, 2, 3): "BinaryOctahedral", (1, 2, 4): "BinaryIcosahedral"}
    if tuple(arms) in e_types:
        return AdeLabel(e_types[tuple(arms)])
    raise McKayError(f"unrecognized arm lengths {arms}")


def exceptional_fiber(g: McKayGraph) -> ExceptionalFiber:
    fin, keep = _finite_part(g)
    if not _is_tree(fin):
        raise McKayError("removing the affine vertex does not leave a tree")
    return ExceptionalFiber(len(keep), tuple(map(tuple, fin.tolist())), tuple(keep))


def fiber_cochains(f: ExceptionalFiber) -> tuple[list[int], list[IntMatrix]]:
    """Cellular cochain complex of a configuration of 2-spheres.

    0-cells are the intersection points (plus a base point on any sphere
    meeting no other).  On a sphere carrying k points, k-1 arcs join them in
    a chain, and one 2-cell is attached along the arc chain traversed there
    and back, so its cellular boundary vanishes.
    """
    points: list[list[int]] = [[] for _ in range(f.sphere_count)]
    n0 = 0
    for i, j in f.edges():
        points[i].append(n0)
        points[j].append(n0)
        n0 += 1
    for pts in points:
        if not pts:
            pts.append(n0)
            n0 += 1
    arcs = [(pts[t], pts[t + 1]) for pts in points for t in range(len(pts) - 1)]
    boundary1 = [[0] * len(arcs) for _ in range(n0)]
    for c, (p, q) in enumerate(arcs):
        boundary1[q][c] += 1
        boundary1[p][c] -= 1
    d1 = IntMatrix(boundary1, cols=len(arcs))
    dims = [n0, len(arcs), f.sphere_count]
    coboundaries = [d1.T, IntMatrix.zeros(f.sphere_count, len(arcs))]
    return dims, coboundaries


def fiber_k_theory(f: ExceptionalFiber) -> KPair:
    """K^0 = H^0 + H^2 and K^1 = H^1 for a 2-dimensional CW complex."""
    dims, cob = fiber_cochains(f)
    h0, h1, h2 = cochain_cohomology(dims, cob)
    return KPair(direct_sum(h0, h2), h1)


@dataclass(frozen=True)
class McKayVerdict:
    label: AdeLabel
    detected: AdeLabel
    group_side: KPair
    fiber_side: KPair
    sphere_count: int

    @property
    def passed(self) -> bool:
        return (
            self.detected == self.label
            and kpair_isomorphic(self.group_side, self.fiber_side)
            and self.fiber_side.k1.is_trivial
            and self.group_side.k1.is_trivial
        )


def verify_mckay_correspondence(label: AdeLabel, seed: int = 0, cap: int = DEFAULT_CAP) -> McKayVerdict:
    t = build_character_table(label, seed, cap)
    g = mckay_graph(t)
    fiber = exceptional_fiber(g)
    return McKayVerdict(label, dynkin_type(g), k_pair_of_group_algebra(t), fiber_k_theory(fiber), fiber.sphere_count)


def fiber_for(label: AdeLabel, seed: int = 0, cap: int = DEFAULT_CAP) -> ExceptionalFiber:
    return exceptional_fiber(mckay_graph(build_character_table(label, seed, cap)))


def to_adjacency_list(g: McKayGraph) -> str:
    lines = []
    for i, row in enumerate(g.adjacency):
        nbrs = " ".join(str(j) for j, k in enumerate(row) for _ in range(k))
        mark = "*" if i == g.affine_vertex else ""
        lines.append(f"{i}{mark} [dim {g.degrees[i]}]: {nbrs}")
    return "\n".join(lines) + "\n"


def to_dot(g: McKayGraph, name: str = "mckay") -> str:
    lines = [f"graph {name} {{"]
    for i, d in enumerate(g.degrees):
        shape = ', shape=box' if i == g.affine_vertex else ""
        lines.append(f'  v{i} [label="{d}"{shape}];')
    for i in range(g.size):
        for j in range(i, g.size):
            lines += [f"  v{i} -- v{j};"] * g.adjacency[i][j]
    lines.append("}")
    return "\n".join(lines) + "\n"
