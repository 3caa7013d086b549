"""Finite subgroups of SU(2) as explicit sets of unit quaternions.

Groups are generated by multiplicative closure from classical generators,
classes come from conjugation orbits, and character tables are computed
with the Burnside-Dixon class-algebra method (no hardcoded tables).

Elements ``q`` and ``-q`` are distinct: these are the binary groups.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import cos, pi, sin, sqrt

import numpy as np
from scipy.spatial import cKDTree

from .fgab import ZERO, FgAbGroup, KPair

ELEMENT_TOL = 1e-9
CHARACTER_TOL = 1e-6
MAX_CYCLIC_ORDER = 500
DEFAULT_CAP = 1000


class GroupConstructionError(ValueError):
    pass


class UnknownLabelError(ValueError):
    pass


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    def __mul__(self, o: Quaternion) -> Quaternion:
        return Quaternion(*map(float, _qmul(np.array(self.coords), np.array(o.coords))))

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return sqrt(sum(c * c for c in self.coords))

    def is_close(self, o: Quaternion, tol: float = ELEMENT_TOL) -> bool:
        return all(abs(a - b) <= tol for a, b in zip(self.coords, o.coords))

    def to_su2(self) -> np.ndarray:
        """``w + xi + yj + zk`` as ``[[w + xi, y + zi], [-y + zi, w - xi]]``."""
        a = complex(self.w, self.x)
        b = complex(self.y, self.z)
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def _qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


FAMILIES = ("Cyclic", "BinaryDihedral", "BinaryTetrahedral", "BinaryOctahedral", "BinaryIcosahedral")
_E_TYPES = {"BinaryTetrahedral": "E6", "BinaryOctahedral": "E7", "BinaryIcosahedral": "E8"}


@dataclass(frozen=True)
class AdeLabel:
    family: str
    n: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownLabelError(f"unknown family {self.family!r}")
        if self.family in ("Cyclic", "BinaryDihedral"):
            if self.n is None or self.n < 2:
                raise UnknownLabelError(f"{self.family} needs a parameter n >= 2, got {self.n}")
            if self.family == "Cyclic" and self.n > MAX_CYCLIC_ORDER:
                raise UnknownLabelError(f"Cyclic order capped at {MAX_CYCLIC_ORDER}, got {self.n}")
        elif self.n is not None:
            raise UnknownLabelError(f"{self.family} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> AdeLabel:
        """``A<n>`` is Cyclic(n+1), ``D<n>`` (n >= 4) is BinaryDihedral(n-2), E6/E7/E8."""
        m = re.fullmatch(r"\s*([ADE])(\d+)\s*", text)
        if not m:
            raise UnknownLabelError(f"not an ADE label: {text!r}")
        kind, n = m.group(1), int(m.group(2))
        if kind == "A" and n >= 1:
            return cls("Cyclic", n + 1)
        if kind == "D" and n >= 4:
            return cls("BinaryDihedral", n - 2)
        if kind == "E" and n in (6, 7, 8):
            return cls({6: "BinaryTetrahedral", 7: "BinaryOctahedral", 8: "BinaryIcosahedral"}[n])
        raise UnknownLabelError(f"not an ADE label: {text!r}")

    def __str__(self) -> str:
        if self.family == "Cyclic":
            return f"A{self.n - 1}"
        if self.family == "BinaryDihedral":
            return f"D{self.n + 2}"
        return _E_TYPES[self.family]

    @property
    def order(self) -> int:
        return {
            "Cyclic": self.n,
            "BinaryDihedral": 4 * (self.n or 0),
            "BinaryTetrahedral": 24,
            "BinaryOctahedral": 48,
            "BinaryIcosahedral": 120,
        }[self.family]


def builtin_labels() -> list[AdeLabel]:
    """The battery used by selftest: A1..A19, D4..D12, E6, E7, E8."""
    return (
        [AdeLabel("Cyclic", n) for n in range(2, 21)]
        + [AdeLabel("BinaryDihedral", n) for n in range(2, 11)]
        + [AdeLabel(f) for f in ("BinaryTetrahedral", "BinaryOctahedral", "BinaryIcosahedral")]
    )


def generators(label: AdeLabel) -> list[Quaternion]:
    h = 0.5
    if label.family == "Cyclic":
        t = 2 * pi / label.n
        return [Quaternion(cos(t), sin(t), 0.0, 0.0)]
    if label.family == "BinaryDihedral":
        t = pi / label.n
        return [Quaternion(cos(t), sin(t), 0.0, 0.0), Quaternion(0.0, 0.0, 1.0, 0.0)]
    if label.family == "BinaryTetrahedral":
        return [Quaternion(0.0, 1.0, 0.0, 0.0), Quaternion(h, h, h, h)]
    if label.family == "BinaryOctahedral":
        s = 1 / sqrt(2)
        return [Quaternion(s, s, 0.0, 0.0), Quaternion(h, h, h, h)]
    phi = (1 + sqrt(5)) / 2
    return [Quaternion(h, h, h, h), Quaternion(h / phi, h * phi, h, 0.0)]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite subgroup of SU(2) with multiplication table and classes.

    ``table[a, b]`` is the index of ``elements[a] * elements[b]``.
    Classes are ordered by the smallest element index they contain, so the
    identity class comes first.
    """

    elements: tuple[Quaternion, ...]
    table: np.ndarray
    inverse: np.ndarray
    classes: tuple[tuple[int, ...], ...]
    identity_index: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=int)
        for k, c in enumerate(self.classes):
            out[list(c)] = k
        return out

    @property
    def coords(self) -> np.ndarray:
        return np.array([q.coords for q in self.elements])


def closure(gens: list[Quaternion], cap: int = DEFAULT_CAP) -> FiniteGroup:
    for g in gens:
        if abs(g.norm() - 1) > ELEMENT_TOL:
            raise GroupConstructionError(f"generator {g} is not a unit quaternion")
    gen = np.array([g.coords for g in gens])
    elems = np.array([[1.0, 0.0, 0.0, 0.0]])
    frontier = elems
    while len(frontier):
        cand = _qmul(frontier[:, None, :], gen[None, :, :]).reshape(-1, 4)
        fresh = []
        for q in cand:
            if np.abs(elems - q).max(axis=1).min() <= ELEMENT_TOL:
                continue
            if fresh and np.abs(np.array(fresh) - q).max(axis=1).min() <= ELEMENT_TOL:
                continue
            fresh.append(q)
        frontier = np.array(fresh).reshape(-1, 4)
        elems = np.vstack([elems, frontier])
        if len(elems) > cap:
            raise GroupConstructionError(f"not closed under cap {cap}")

    n = len(elems)
    tree = cKDTree(elems)
    prods = _qmul(elems[:, None, :], elems[None, :, :]).reshape(-1, 4)
    dist, idx = tree.query(prods, p=np.inf)
    if dist.max() > ELEMENT_TOL:
        raise GroupConstructionError("product left the element set; tolerance failure")
    table = idx.reshape(n, n)
    ident = 0
    inverse = np.argmax(table == ident, axis=1)
    if not np.all(table[np.arange(n), inverse] == ident):
        raise GroupConstructionError("some element has no inverse in the set")

    seen = np.full(n, False)
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        # g x g^-1 for every g
        orbit = sorted(set(table[table[:, x], inverse].tolist()))
        seen[orbit] = True
        classes.append(tuple(orbit))
    quats = tuple(Quaternion(*map(float, q)) for q in elems)
    return FiniteGroup(quats, table, inverse, tuple(classes), ident)


@lru_cache(maxsize=None)
def build_group(label: AdeLabel, cap: int = DEFAULT_CAP) -> FiniteGroup:
    return closure(generators(label), cap)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    characters: np.ndarray  # r x r complex, rows = irreducibles, cols = classes
    degrees: tuple[int, ...]
    class_sizes: tuple[int, ...]
    defining_char: np.ndarray
    order: int

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    def inner(self, chi: np.ndarray, psi: np.ndarray) -> complex:
        return complex(np.sum(np.array(self.class_sizes) * chi * np.conj(psi)) / self.order)

    def multiplicity(self, chi: np.ndarray, psi: np.ndarray) -> int:
        """Integer inner product, rejected if not integral within tolerance."""
        val = self.inner(chi, psi)
        k = round(val.real)
        if abs(val - k) > CHARACTER_TOL:
            raise GroupConstructionError(f"non-integral character inner product {val}")
        return k

    def orthogonality_residual(self) -> float:
        x = self.characters
        sizes = np.array(self.class_sizes)
        rows = (x * sizes) @ x.conj().T / self.order
        cols = x.conj().T @ x * sizes / self.order
        r = self.num_classes
        return float(max(np.abs(rows - np.eye(r)).max(), np.abs(cols - np.eye(r)).max()))


def class_structure_constants(g: FiniteGroup) -> np.ndarray:
    """``c[i, j, k]`` = number of ``(x, y)`` in ``C_i x C_j`` with ``xy = z_k``."""
    r = g.num_classes
    cls = g.class_of
    c = np.zeros((r, r, r))
    x = np.arange(g.order)
    for k, klass in enumerate(g.classes):
        z = klass[0]
        j = cls[g.table[g.inverse, z]]  # class of x^-1 z
        np.add.at(c, (cls[x], j, k), 1)
    return c


def character_table(g: FiniteGroup, seed: int = 0, attempts: int = 20) -> CharacterTable:
    """Burnside-Dixon: diagonalize a random combination of class matrices.

    Eigenvectors are the central characters ``|C| chi(C) / chi(1)``.
    """
    r = g.num_classes
    sizes = np.array(g.class_sizes, dtype=float)
    c = class_structure_constants(g)
    # M_j[i, k] = c[i, j, k]; w = (omega(C_k)) satisfies M_j w = omega(C_j) w
    mats = np.transpose(c, (1, 0, 2))
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        combo = np.tensordot(rng.standard_normal(r), mats, axes=1)
        vals, vecs = np.linalg.eig(combo)
        gaps = np.abs(vals[:, None] - vals[None, :])
        np.fill_diagonal(gaps, np.inf)
        if r == 1 or gaps.min() > CHARACTER_TOL * max(1.0, np.abs(vals).max()):
            break
    else:
        raise GroupConstructionError(f"no separating class-algebra combination in {attempts} attempts")

    chars = []
    degrees = []
    for v in vecs.T:
        omega = v / v[0]
        deg2 = g.order / np.sum(np.abs(omega) ** 2 / sizes)
        d = round(sqrt(deg2.real))
        if abs(d * d - deg2) > 1e-6 * g.order:
            raise GroupConstructionError(f"character degree not integral: {sqrt(deg2.real)}")
        chars.append(d * omega / sizes)
        degrees.append(d)

    def key(i):
        row = chars[i]
        return (degrees[i], tuple((-round(z.real, 6), -round(z.imag, 6)) for z in row))

    order = sorted(range(r), key=key)
    chars_arr = np.array([chars[i] for i in order])
    degrees_t = tuple(degrees[i] for i in order)
    defining = np.array([2 * g.elements[klass[0]].w for klass in g.classes], dtype=complex)
    table = CharacterTable(chars_arr, degrees_t, tuple(g.class_sizes), defining, g.order)
    if sum(d * d for d in degrees_t) != g.order:
        raise GroupConstructionError("sum of squared degrees differs from the group order")
    if table.orthogonality_residual() > CHARACTER_TOL:
        raise GroupConstructionError(f"orthogonality residual {table.orthogonality_residual():.2e}")
    return table


@lru_cache(maxsize=None)
def build_character_table(label: AdeLabel, seed: int = 0, cap: int = DEFAULT_CAP) -> CharacterTable:
    return character_table(build_group(label, cap), seed)


def k_pair_of_group_algebra(t: CharacterTable) -> KPair:
    """K-theory of the group C*-algebra: the representation ring in degree 0."""
    return KPair(FgAbGroup(t.num_classes), ZERO)
