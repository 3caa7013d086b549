"""Finitely generated abelian groups over the integers.

Everything here is exact: integer matrices hold Python ints, and every
group is reduced to invariant-factor form ``Z^r + Z/d1 + ... + Z/dm`` with
``d1 | d2 | ... | dm`` and each ``di >= 2``.  Two groups are isomorphic
exactly when their canonical forms agree.

Homomorphisms act on column vectors: a ``GroupHom`` from a presentation on
``a`` generators to one on ``b`` generators carries a ``b x a`` matrix.
Relations of a presentation are the *rows* of its relation matrix.

>>> from_presentation(IntMatrix([[2, 1], [0, 2]]))
FgAbGroup(free_rank=0, torsion=(4,))
>>> print(tensor(cyclic(4), cyclic(6)))
Z/2
>>> print(kunneth(KPair(free(2), free(2)), KPair(free(5), ZERO)))
(Z^10, Z^10)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix with explicit shape (so 0 x n is representable)."""

    __slots__ = ("rows", "cols", "_data", "_sparse_cols")

    def __init__(self, entries: Iterable[Iterable[int]] = (), cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise ValueError(f"ragged row: expected {cols} entries, got {len(row)}")
        self.rows = len(data)
        self.cols = cols
        self._data = data
        self._sparse_cols = None

    @classmethod
    def _raw(cls, data: tuple[tuple[int, ...], ...], cols: int) -> IntMatrix:
        # trusted internal path: no copying or validation
        m = object.__new__(cls)
        m.rows, m.cols, m._data, m._sparse_cols = len(data), cols, data, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls._raw(((0,) * cols,) * rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls._raw(_identity_rows(n), n)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            m[i][i] = d
        return cls(m, cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        if not self.rows:
            return [()] * self.cols
        return list(zip(*self._data))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, cols={self.cols})"

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        # row-by-row over nonzeros; the matrices in play are sparse
        odata, n = other._data, other.cols
        out = []
        for r in self._data:
            acc = [0] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(odata[k]):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return IntMatrix._raw(tuple(out), n)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return IntMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix([[k * a for a in r] for r in self._data], cols=self.cols)

    @property
    def T(self) -> IntMatrix:
        if not self.rows:
            return IntMatrix._raw(((),) * self.cols, 0)
        return IntMatrix._raw(tuple(zip(*self._data)), self.rows)

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        if self._sparse_cols is None:
            self._sparse_cols = [
                [(i, a) for i, a in enumerate(col) if a] for col in self.columns()
            ]
        acc = [0] * self.rows
        for j, xj in enumerate(x):
            if xj:
                for i, a in self._sparse_cols[j]:
                    acc[i] += a * xj
        return tuple(acc)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix._raw(tuple(a + b for a, b in zip(self._data, other._data)), self.cols + other.cols)

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix._raw(self._data + other._data, self.cols)

    def kron(self, other: IntMatrix) -> IntMatrix:
        out = tuple(tuple(a * b for a in r for b in s) for r in self._data for s in other._data)
        return IntMatrix._raw(out, self.cols * other.cols)

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@lru_cache(maxsize=256)
def _identity_rows(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = []
    c0 = 0
    for b in blocks:
        left, right = (0,) * c0, (0,) * (cols - c0 - b.cols)
        out += [left + row + right for row in b._data]
        c0 += b.cols
    return IntMatrix._raw(tuple(out), cols)


# --- Smith normal form -------------------------------------------------------


@lru_cache(maxsize=4096)
def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, d, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular and ``d`` is diagonal with nonnegative
    entries forming a divisibility chain (zeros last).
    """
    r, c = m.shape
    a = m.tolist()
    u = IntMatrix.identity(r).tolist()
    v = IntMatrix.identity(c).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for mat in (a, u):
            d, s = mat[dst], mat[src]
            for k, y in enumerate(s):
                if y:
                    d[k] += q * y

    def add_col(dst, src, q):
        for mat in (a, v):
            for row in mat:
                if row[src]:
                    row[dst] += q * row[src]

    def near(x, p):
        # quotient rounding to nearest keeps remainders within |p|/2
        q, rem = divmod(x, p)
        return q + 1 if 2 * abs(rem) > abs(p) else q

    for t in range(min(r, c)):
        while True:
            # pivot: smallest nonzero entry of the trailing block
            best = None
            for i in range(t, r):
                row = a[i]
                for j in range(t, c):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            swap_rows(t, best[1])
            swap_cols(t, best[2])
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -near(a[i][t], p))
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -near(a[t][j], p))
            if any(a[i][t] for i in range(t + 1, r)) or any(a[t][j] for j in range(t + 1, c)):
                continue  # a strictly smaller remainder becomes the next pivot
            bad = None
            if p not in (1, -1):
                bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (
        IntMatrix._raw(tuple(map(tuple, u)), r),
        IntMatrix._raw(tuple(map(tuple, a)), c),
        IntMatrix._raw(tuple(map(tuple, v)), c),
    )


def _diagonal_of(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.shape))]


def _rank_from_diagonal(diag: Sequence[int]) -> int:
    return sum(1 for x in diag if x)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : m x = 0}``."""
    _, d, v = smith_normal_form(m)
    rank = _rank_from_diagonal(_diagonal_of(d))
    return IntMatrix._raw(tuple(row[rank:] for row in v._data), m.cols - rank)


def solve_integer(b: IntMatrix, x: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer ``y`` with ``b y = x``, or None if x is outside the column lattice."""
    u, d, v = smith_normal_form(b)
    ux = u.apply(x)
    diag = _diagonal_of(d)
    rank = _rank_from_diagonal(diag)
    z = [0] * b.cols
    for i in range(rank):
        if ux[i] % diag[i]:
            return None
        z[i] = ux[i] // diag[i]
    if any(ux[i] for i in range(rank, b.rows)):
        return None
    return v.apply(z)


def _monomial_moduli(gens: IntMatrix) -> list[int] | None:
    """Per-coordinate moduli if every generator is a multiple of a basis vector."""
    mods = [0] * gens.rows
    for col in gens.columns():
        nz = [(i, a) for i, a in enumerate(col) if a]
        if len(nz) > 1:
            return None
        if nz:
            i, a = nz[0]
            mods[i] = gcd(mods[i], a)
    return mods


def lattice_contains(gens: IntMatrix, vectors: IntMatrix) -> bool:
    """True iff every column of ``vectors`` lies in the Z-span of the columns of ``gens``."""
    if vectors.rows != gens.rows:
        raise ValueError(f"ambient dimensions differ: {gens.rows} vs {vectors.rows}")
    if not vectors.cols:
        return True
    mods = _monomial_moduli(gens)
    if mods is not None:
        rows = vectors._data
    else:
        u, d, _ = smith_normal_form(gens)
        diag = _diagonal_of(d)
        rank = _rank_from_diagonal(diag)
        mods = diag[:rank] + [0] * (gens.rows - rank)
        rows = (u @ vectors)._data
    for row, m in zip(rows, mods):
        if m == 1:
            continue
        if (any(x % m for x in row) if m else any(row)):
            return False
    return True


def lattice_is_full(gens: IntMatrix) -> bool:
    """True iff the columns of ``gens`` span all of ``Z^rows``."""
    _, d, _ = smith_normal_form(gens)
    diag = _diagonal_of(d)
    return len(diag) >= gens.rows and all(x == 1 for x in diag[: gens.rows])


# --- groups ------------------------------------------------------------------


def _invariant_factors(moduli: Iterable[int]) -> tuple[int, ...]:
    mods = [int(m) for m in moduli]
    if any(m < 1 for m in mods):
        raise ValueError(f"torsion orders must be positive, got {mods}")
    mods = [m for m in mods if m > 1]
    if not mods:
        return ()
    _, d, _ = smith_normal_form(IntMatrix.diagonal(mods))
    return tuple(x for x in _diagonal_of(d) if x > 1)


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank + Z/t1 + ... + Z/tm`` in invariant-factor form."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not an invariant-factor chain; use FgAbGroup.of()")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def of(cls, free_rank: int = 0, torsion: Iterable[int] = ()) -> FgAbGroup:
        """Build from any list of cyclic orders, normalizing the torsion."""
        return cls(free_rank, _invariant_factors(torsion))

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def presentation(self) -> Presentation:
        """Diagonal presentation: torsion generators first, then free ones."""
        n = self.num_generators
        rels = tuple(tuple(d if j == i else 0 for j in range(n)) for i, d in enumerate(self.torsion))
        return Presentation(n, IntMatrix._raw(rels, n))

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: dict) -> FgAbGroup:
        return cls.of(d["free_rank"], d["torsion"])

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


ZERO = FgAbGroup()
Z = FgAbGroup(1)


def free(n: int) -> FgAbGroup:
    return FgAbGroup(n)


def cyclic(n: int) -> FgAbGroup:
    """``Z/n``; ``cyclic(0)`` is Z and ``cyclic(1)`` is trivial."""
    return Z if n == 0 else FgAbGroup.of(0, [n])


def from_presentation(relations: IntMatrix) -> FgAbGroup:
    """Canonical form of ``Z^g / (row lattice of relations)``."""
    _, d, _ = smith_normal_form(relations)
    diag = _diagonal_of(d)
    rank = _rank_from_diagonal(diag)
    return FgAbGroup(relations.cols - rank, tuple(x for x in diag if x > 1))


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    return FgAbGroup.of(sum(g.free_rank for g in groups), [t for g in groups for t in g.torsion])


def tensor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    tors = [gcd(d, e) for d in a.torsion for e in b.torsion]
    tors += list(a.torsion) * b.free_rank + list(b.torsion) * a.free_rank
    return FgAbGroup.of(a.free_rank * b.free_rank, tors)


def tor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return FgAbGroup.of(0, [gcd(d, e) for d in a.torsion for e in b.torsion])


def is_isomorphic(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a.free_rank == b.free_rank and a.torsion == b.torsion


@dataclass(frozen=True)
class KPair:
    k0: FgAbGroup = ZERO
    k1: FgAbGroup = ZERO

    def to_dict(self) -> dict:
        return {"k0": self.k0.to_dict(), "k1": self.k1.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> KPair:
        return cls(FgAbGroup.from_dict(d["k0"]), FgAbGroup.from_dict(d["k1"]))

    def __str__(self) -> str:
        return f"({self.k0}, {self.k1})"


def kunneth(a: KPair, b: KPair) -> KPair:
    """Graded K-theory of a tensor product, split Kunneth form.

    Tensor terms sit in total degree ``i + j`` and Tor terms one degree up.
    """
    k0 = direct_sum(tensor(a.k0, b.k0), tensor(a.k1, b.k1), tor(a.k0, b.k1), tor(a.k1, b.k0))
    k1 = direct_sum(tensor(a.k0, b.k1), tensor(a.k1, b.k0), tor(a.k0, b.k0), tor(a.k1, b.k1))
    return KPair(k0, k1)


def kpair_isomorphic(a: KPair, b: KPair) -> bool:
    return is_isomorphic(a.k0, b.k0) and is_isomorphic(a.k1, b.k1)


def rank_euler(p: KPair) -> int:
    return p.k0.free_rank - p.k1.free_rank


def cochain_cohomology(dims: Sequence[int], coboundaries: Sequence[IntMatrix]) -> list[FgAbGroup]:
    """Cohomology of ``C^0 -> C^1 -> ...`` with ``coboundaries[n]: C^n -> C^(n+1)``.

    ``dims[n]`` is the rank of ``C^n``; a missing trailing coboundary is zero.
    """
    out = []
    for n, dim in enumerate(dims):
        if n < len(coboundaries):
            ker = kernel_basis(coboundaries[n])
        else:
            ker = IntMatrix.identity(dim)
        rels = []
        if n > 0:
            for col in coboundaries[n - 1].columns():
                y = solve_integer(ker, col)
                if y is None:
                    raise ValueError(f"d^2 != 0 at degree {n}")
                rels.append(y)
        out.append(from_presentation(IntMatrix(rels, cols=ker.cols)))
    return out


# --- presented groups, homomorphisms and ladders -----------------------------


class DimensionMismatch(ValueError):
    """A homomorphism matrix does not fit the groups it connects."""

    def __init__(self, arrow: str, detail: str):
        super().__init__(f"{arrow}: {detail}")
        self.arrow = arrow


@dataclass(frozen=True)
class Presentation:
    """``Z^num_generators`` modulo the row lattice of ``relations``."""

    num_generators: int
    relations: IntMatrix = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(0, self.num_generators))
        if self.relations.cols != self.num_generators:
            raise ValueError(
                f"relation matrix has {self.relations.cols} columns for {self.num_generators} generators"
            )

    @property
    def relation_lattice(self) -> IntMatrix:
        """Relations as generator columns in ``Z^num_generators``."""
        return self.relations.T

    def group(self) -> FgAbGroup:
        return from_presentation(self.relations)


def direct_sum_presentation(*ps: Presentation) -> Presentation:
    return Presentation(sum(p.num_generators for p in ps), block_diagonal(*(p.relations for p in ps)))


def tensor_presentation(p: Presentation, q: Presentation) -> Presentation:
    """Generators ``e_i (x) f_j`` in row-major order, matching ``IntMatrix.kron``."""
    rels = p.relations.kron(IntMatrix.identity(q.num_generators)).vstack(
        IntMatrix.identity(p.num_generators).kron(q.relations)
    )
    return Presentation(p.num_generators * q.num_generators, rels)


@dataclass(frozen=True)
class GroupHom:
    source: Presentation
    target: Presentation
    matrix: IntMatrix

    def check_shape(self, arrow: str = "hom") -> None:
        want = (self.target.num_generators, self.source.num_generators)
        if self.matrix.shape != want:
            raise DimensionMismatch(arrow, f"matrix is {self.matrix.shape}, groups need {want}")

    def is_well_defined(self) -> bool:
        return lattice_contains(self.target.relation_lattice, self.matrix @ self.source.relation_lattice)

    def image_lattice(self) -> IntMatrix:
        return self.matrix.hstack(self.target.relation_lattice)

    def kernel_lattice(self) -> IntMatrix:
        """Generators of ``{x : matrix x in rel(target)}`` inside ``Z^a``."""
        a = self.source.num_generators
        k = kernel_basis(self.matrix.hstack(-self.target.relation_lattice))
        return IntMatrix._raw(k._data[:a], k.cols)

    def is_injective(self) -> bool:
        return lattice_contains(self.source.relation_lattice, self.kernel_lattice())

    def is_surjective(self) -> bool:
        return lattice_is_full(self.image_lattice())

    def is_isomorphism(self) -> bool:
        return self.is_well_defined() and self.is_injective() and self.is_surjective()


def identity_hom(p: Presentation) -> GroupHom:
    return GroupHom(p, p, IntMatrix.identity(p.num_generators))


def zero_hom(source: Presentation, target: Presentation) -> GroupHom:
    return GroupHom(source, target, IntMatrix.zeros(target.num_generators, source.num_generators))


def same_lattice(x: IntMatrix, y: IntMatrix) -> bool:
    return lattice_contains(x, y) and lattice_contains(y, x)


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """``image(f) == kernel(g)`` as sublattices of the middle generator space."""
    return same_lattice(f.image_lattice(), g.kernel_lattice())


@dataclass(frozen=True)
class ExactRow:
    """Five presented groups joined by four homomorphisms."""

    groups: tuple[Presentation, ...]
    maps: tuple[GroupHom, ...]


@dataclass
class LadderVerdict:
    squares_commute: list[bool]
    row_exact: dict[str, list[bool]]
    well_defined: dict[str, list[bool]]
    outer_isomorphisms: list[bool]
    middle_isomorphism: bool
    failures: list[str] = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return (
            all(self.squares_commute)
            and all(all(v) for v in self.row_exact.values())
            and all(all(v) for v in self.well_defined.values())
            and all(self.outer_isomorphisms)
        )

    @property
    def passed(self) -> bool:
        return self.hypotheses_hold and self.middle_isomorphism


class FiveLemmaViolation(AssertionError):
    """Hypotheses of the five lemma held but the middle map is not an iso."""


def _validate_row(row: ExactRow, name: str) -> None:
    if len(row.groups) != 5 or len(row.maps) != 4:
        raise DimensionMismatch(name, "a row needs five groups and four maps")
    for i, f in enumerate(row.maps):
        arrow = f"{name}.f{i + 1}"
        if f.source.num_generators != row.groups[i].num_generators:
            raise DimensionMismatch(arrow, "source does not match the row's group")
        if f.target.num_generators != row.groups[i + 1].num_generators:
            raise DimensionMismatch(arrow, "target does not match the row's group")
        f.check_shape(arrow)


def check_ladder_five_lemma(top: ExactRow, bottom: ExactRow, verticals: Sequence[GroupHom]) -> LadderVerdict:
    """Check the hypotheses and conclusion of the five lemma on a ladder.

    Raises DimensionMismatch for ill-shaped arrows and FiveLemmaViolation if
    every hypothesis holds yet the middle vertical is not an isomorphism.
    """
    _validate_row(top, "top")
    _validate_row(bottom, "bottom")
    if len(verticals) != 5:
        raise DimensionMismatch("verticals", f"expected 5 maps, got {len(verticals)}")
    for i, v in enumerate(verticals):
        arrow = f"v{i + 1}"
        if v.source.num_generators != top.groups[i].num_generators:
            raise DimensionMismatch(arrow, "source does not match the top row")
        if v.target.num_generators != bottom.groups[i].num_generators:
            raise DimensionMismatch(arrow, "target does not match the bottom row")
        v.check_shape(arrow)

    failures = []
    well_defined = {
        "top": [f.is_well_defined() for f in top.maps],
        "bottom": [f.is_well_defined() for f in bottom.maps],
        "verticals": [v.is_well_defined() for v in verticals],
    }
    for key, flags in well_defined.items():
        failures += [f"{key}[{i + 1}] does not respect relations" for i, ok in enumerate(flags) if not ok]

    squares = []
    for i in range(4):
        f, g = top.maps[i], bottom.maps[i]
        diff = verticals[i + 1].matrix @ f.matrix - g.matrix @ verticals[i].matrix
        ok = lattice_contains(bottom.groups[i + 1].relation_lattice, diff)
        squares.append(ok)
        if not ok:
            failures.append(f"square {i + 1} (v{i + 1} -> v{i + 2}) does not commute")

    exact = {}
    for name, row in (("top", top), ("bottom", bottom)):
        exact[name] = [is_exact_at(row.maps[i], row.maps[i + 1]) for i in range(3)]
        failures += [f"{name} row not exact at position {i + 2}" for i, ok in enumerate(exact[name]) if not ok]

    outer = [verticals[i].is_isomorphism() for i in (0, 1, 3, 4)]
    failures += [f"v{i} is not an isomorphism" for i, ok in zip((1, 2, 4, 5), outer) if not ok]
    middle = verticals[2].is_isomorphism()
    if not middle:
        failures.append("v3 is not an isomorphism")

    verdict = LadderVerdict(squares, exact, well_defined, outer, middle, failures)
    if verdict.hypotheses_hold and not middle:
        raise FiveLemmaViolation("five-lemma hypotheses hold but the middle map is not an isomorphism")
    return verdict
