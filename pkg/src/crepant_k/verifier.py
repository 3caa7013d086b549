"""Level-by-level comparison of the two ideal filtrations.

For every stratum ``S_j`` the orbifold subquotient has K-theory
``K(S_j) (x) R(G_j)`` and the resolution subquotient ``K(S_j) (x) K(Y_j)``;
the two are computed through disjoint paths (character theory versus the
cell structure of the exceptional fiber) and compared.  The shared bottom
piece, the regular part, enters only through the Euler characteristic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .binary_subgroups import DEFAULT_CAP, build_character_table, k_pair_of_group_algebra
from .fgab import (
    ExactRow,
    GroupHom,
    IntMatrix,
    KPair,
    LadderVerdict,
    Presentation,
    block_diagonal,
    check_ladder_five_lemma,
    direct_sum,
    direct_sum_presentation,
    is_isomorphic,
    kpair_isomorphic,
    kunneth,
    rank_euler,
    tensor_presentation,
    tor,
    zero_hom,
)
from .mckay_resolution import ExceptionalFiber, fiber_for, fiber_k_theory, mckay_graph
from .orbifold_model import OrbifoldSpec, Stratum

BASE_NOTE = (
    "bottom of both filtrations is the regular part N0; its K-theory is the shared input regular_k "
    "(the two sides are the same space, so no comparison is made there)"
)
EXTENSION_NOTE = (
    "boundary maps of the six-term sequences are not determined by the input data; "
    "level isomorphisms plus the five lemma give the global statement, totals are not assembled"
)


def orbifold_level(s: Stratum, seed: int = 0, cap: int = DEFAULT_CAP) -> KPair:
    return kunneth(s.base_k, k_pair_of_group_algebra(build_character_table(s.group, seed, cap)))


def resolution_level(s: Stratum, seed: int = 0, cap: int = DEFAULT_CAP) -> KPair:
    return kunneth(s.base_k, fiber_k_theory(fiber_for(s.group, seed, cap)))


# --- Kunneth ladders ---------------------------------------------------------

_TRIVIAL = Presentation(0)


def _kunneth_row(a: tuple[Presentation, Presentation], b: tuple[Presentation, Presentation], degree: int):
    """Split Kunneth row ``0 -> T -> T + Tor -> Tor -> 0`` in the given degree."""
    pairs = [(i, j) for i in (0, 1) for j in (0, 1) if (i + j) % 2 == degree]
    tor_pairs = [(i, j) for i in (0, 1) for j in (0, 1) if (i + j + 1) % 2 == degree]
    t = direct_sum_presentation(*(tensor_presentation(a[i], b[j]) for i, j in pairs))
    tor_group = direct_sum(*(tor(a[i].group(), b[j].group()) for i, j in tor_pairs))
    tp = tor_group.presentation()
    m = direct_sum_presentation(t, tp)
    nt, nq = t.num_generators, tp.num_generators
    incl = IntMatrix.identity(nt).vstack(IntMatrix.zeros(nq, nt))
    proj = IntMatrix.zeros(nq, nt).hstack(IntMatrix.identity(nq))
    maps = (
        zero_hom(_TRIVIAL, t),
        GroupHom(t, m, incl),
        GroupHom(m, tp, proj),
        zero_hom(tp, _TRIVIAL),
    )
    return ExactRow((_TRIVIAL, t, m, tp, _TRIVIAL), maps), pairs, tor_group


def kunneth_ladder(
    a: KPair, b: KPair, b_prime: KPair, beta: tuple[IntMatrix, IntMatrix], degree: int
) -> LadderVerdict:
    """Five-lemma ladder comparing ``a (x) b`` with ``a (x) b'`` via ``id (x) beta``.

    ``beta[j]`` is a matrix from the canonical generators of ``b.kj`` to those
    of ``b_prime.kj``.  Tor verticals are identities when the canonical Tor
    groups agree and zero otherwise (which the checker then reports).
    """
    ap = (a.k0.presentation(), a.k1.presentation())
    bp = (b.k0.presentation(), b.k1.presentation())
    bpp = (b_prime.k0.presentation(), b_prime.k1.presentation())
    top, pairs, tor_top = _kunneth_row(ap, bp, degree)
    bottom, _, tor_bottom = _kunneth_row(ap, bpp, degree)

    v_t = block_diagonal(*(IntMatrix.identity(ap[i].num_generators).kron(beta[j]) for i, j in pairs))
    nq_top = top.groups[3].num_generators
    nq_bot = bottom.groups[3].num_generators
    if is_isomorphic(tor_top, tor_bottom):
        v_tor = IntMatrix.identity(nq_top)
    else:
        v_tor = IntMatrix.zeros(nq_bot, nq_top)
    verticals = [
        GroupHom(_TRIVIAL, _TRIVIAL, IntMatrix.zeros(0, 0)),
        GroupHom(top.groups[1], bottom.groups[1], v_t),
        GroupHom(top.groups[2], bottom.groups[2], block_diagonal(v_t, v_tor)),
        GroupHom(top.groups[3], bottom.groups[3], v_tor),
        GroupHom(_TRIVIAL, _TRIVIAL, IntMatrix.zeros(0, 0)),
    ]
    return check_ladder_five_lemma(top, bottom, verticals)


def mckay_basis_map(num_irreps: int, affine_vertex: int, fiber: ExceptionalFiber) -> IntMatrix:
    """R(G) -> K^0(Y): trivial rep to the point class, rho_v to the sphere of vertex v.

    K^0(Y) is given the basis ``[pt], [S_1], ..., [S_m]`` in fiber order.
    """
    target = {affine_vertex: 0}
    target.update({v: 1 + k for k, v in enumerate(fiber.vertices)})
    m = [[0] * num_irreps for _ in range(fiber.sphere_count + 1)]
    for v in range(num_irreps):
        if v in target:
            m[target[v]][v] = 1
    return IntMatrix(m, cols=num_irreps)


@dataclass
class FiltrationLevel:
    index: int
    stratum: Stratum
    num_classes: int
    sphere_count: int
    orbifold_subquotient: KPair
    resolution_subquotient: KPair
    ladders: list[LadderVerdict] = field(default_factory=list)

    @property
    def isomorphic(self) -> bool:
        return kpair_isomorphic(self.orbifold_subquotient, self.resolution_subquotient)

    @property
    def passed(self) -> bool:
        return self.isomorphic and all(lv.passed for lv in self.ladders)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "stratum": self.stratum.name,
            "group": str(self.stratum.group),
            "num_classes": self.num_classes,
            "sphere_count": self.sphere_count,
            "orbifold_subquotient": self.orbifold_subquotient.to_dict(),
            "resolution_subquotient": self.resolution_subquotient.to_dict(),
            "isomorphic": self.isomorphic,
            "ladders_pass": [lv.passed for lv in self.ladders],
            "ladder_failures": [f for lv in self.ladders for f in lv.failures],
            "passed": self.passed,
        }


def evaluate_level(index: int, s: Stratum, seed: int = 0, cap: int = DEFAULT_CAP) -> FiltrationLevel:
    table = build_character_table(s.group, seed, cap)
    graph = mckay_graph(table)
    fiber = fiber_for(s.group, seed, cap)
    group_side = k_pair_of_group_algebra(table)
    fiber_side = fiber_k_theory(fiber)
    orb = kunneth(s.base_k, group_side)
    res = kunneth(s.base_k, fiber_side)
    level = FiltrationLevel(index, s, table.num_classes, fiber.sphere_count, orb, res)
    if kpair_isomorphic(group_side, fiber_side) and group_side.k0.is_free:
        beta0 = mckay_basis_map(table.num_classes, graph.affine_vertex, fiber)
        beta1 = IntMatrix.identity(group_side.k1.num_generators)
        level.ladders = [kunneth_ladder(s.base_k, group_side, fiber_side, (beta0, beta1), d) for d in (0, 1)]
    return level


def verify_levels(
    spec: OrbifoldSpec, seed: int = 0, cap: int = DEFAULT_CAP, max_workers: int = 1
) -> list[FiltrationLevel]:
    jobs = list(enumerate(spec.strata, start=1))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            return list(pool.map(lambda js: evaluate_level(js[0], js[1], seed, cap), jobs))
    return [evaluate_level(j, s, seed, cap) for j, s in jobs]


def euler_characteristics(
    spec: OrbifoldSpec, seed: int = 0, cap: int = DEFAULT_CAP
) -> tuple[int, int] | None:
    """Alternating ranks of both sides, or None when regular_k is unknown."""
    if spec.regular_k is None:
        return None
    base = rank_euler(spec.regular_k)
    orb = base + sum(rank_euler(orbifold_level(s, seed, cap)) for s in spec.strata)
    res = base + sum(rank_euler(resolution_level(s, seed, cap)) for s in spec.strata)
    return orb, res


@dataclass
class VerificationReport:
    spec_name: str
    complex_dimension: int
    levels: list[FiltrationLevel]
    euler_orbifold: int | None
    euler_resolution: int | None
    expected_euler: int | None
    conditional_total: dict | None
    skipped: list[str]
    base_note: str = BASE_NOTE
    notes: list[str] = field(default_factory=lambda: [EXTENSION_NOTE])

    @property
    def euler_agree(self) -> bool | None:
        if self.euler_orbifold is None:
            return None
        return self.euler_orbifold == self.euler_resolution

    @property
    def expected_match(self) -> bool | None:
        if self.expected_euler is None or self.euler_orbifold is None:
            return None
        return self.expected_euler == self.euler_resolution == self.euler_orbifold

    @property
    def passed(self) -> bool:
        return (
            all(lv.passed for lv in self.levels)
            and self.euler_agree is not False
            and self.expected_match is not False
        )

    def to_dict(self) -> dict:
        return {
            "spec": self.spec_name,
            "complex_dimension": self.complex_dimension,
            "levels": [lv.to_dict() for lv in self.levels],
            "base_note": self.base_note,
            "euler_orbifold": self.euler_orbifold,
            "euler_resolution": self.euler_resolution,
            "expected_euler": self.expected_euler,
            "expected_match": self.expected_match,
            "conditional_total": self.conditional_total,
            "skipped": self.skipped,
            "notes": self.notes,
            "passed": self.passed,
        }

    def render(self) -> str:
        header = f"{'j':>3}  {'stratum':<12} {'group':<6} {'r':>3}  {'K(I_j-1/I_j)':<22} {'K(J_j-1/J_j)':<22} verdict"
        lines = [f"orbifold {self.spec_name!r}, complex dimension {self.complex_dimension}, k = {len(self.levels)}"]
        lines.append(header)
        for lv in self.levels:
            lines.append(
                f"{lv.index:>3}  {lv.stratum.name:<12} {str(lv.stratum.group):<6} {lv.num_classes:>3}  "
                f"{str(lv.orbifold_subquotient):<22} {str(lv.resolution_subquotient):<22} "
                f"{'pass' if lv.passed else 'FAIL'}"
            )
        if not self.levels:
            lines.append("  (no singular strata: manifold case)")
        n_pass = sum(lv.passed for lv in self.levels)
        lines.append(f"levels: {n_pass}/{len(self.levels)} pass")
        if self.euler_orbifold is not None:
            lines.append(f"euler: orbifold {self.euler_orbifold}, resolution {self.euler_resolution}")
        if self.expected_euler is not None:
            lines.append(f"expected resolution euler: {self.expected_euler} ({'match' if self.expected_match else 'MISMATCH' if self.expected_match is False else 'not compared'})")
        if self.conditional_total is not None:
            ct = self.conditional_total
            lines.append(
                f"conditional total (degenerate boundary assumed, not a proof): orbifold {ct['orbifold']}, "
                f"resolution {ct['resolution']}" + (f", expected {ct['expected']}: {'match' if ct['matches_expected'] else 'no match'}" if ct.get("expected") else "")
            )
        for s in self.skipped:
            lines.append(f"skipped: {s}")
        lines.append(f"note: {self.base_note}")
        for n in self.notes:
            lines.append(f"note: {n}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _conditional_total(spec: OrbifoldSpec, levels: list[FiltrationLevel]) -> tuple[dict | None, str | None]:
    if spec.regular_k is None:
        return None, "conditional total: regular_k not supplied"
    groups = [spec.regular_k] + [lv.orbifold_subquotient for lv in levels] + [lv.resolution_subquotient for lv in levels]
    if not all(p.k0.is_free and p.k1.is_free for p in groups):
        return None, "conditional total: some level or regular_k has torsion"

    def total(parts: list[KPair]) -> KPair:
        return KPair(direct_sum(*(p.k0 for p in parts)), direct_sum(*(p.k1 for p in parts)))

    orb = total([spec.regular_k] + [lv.orbifold_subquotient for lv in levels])
    res = total([spec.regular_k] + [lv.resolution_subquotient for lv in levels])
    out = {"orbifold": str(orb), "resolution": str(res), "agree": kpair_isomorphic(orb, res)}
    if spec.expected_resolution_k is not None:
        out["expected"] = str(spec.expected_resolution_k)
        out["matches_expected"] = kpair_isomorphic(res, spec.expected_resolution_k)
    return out, None


def verdict(
    spec: OrbifoldSpec,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    assume_degenerate_boundary: bool = False,
    max_workers: int = 1,
) -> VerificationReport:
    levels = verify_levels(spec, seed, cap, max_workers)
    skipped = []
    euler = euler_characteristics(spec, seed, cap)
    if euler is None:
        skipped.append("euler characteristics: regular_k not supplied")
        e_orb = e_res = None
    else:
        e_orb, e_res = euler
    expected = None if spec.expected_resolution_k is None else rank_euler(spec.expected_resolution_k)
    if expected is not None and euler is None:
        skipped.append("expected_resolution_k comparison: needs regular_k")
    total = None
    if assume_degenerate_boundary:
        total, why = _conditional_total(spec, levels)
        if why:
            skipped.append(why)
    return VerificationReport(spec.name, spec.complex_dimension, levels, e_orb, e_res, expected, total, skipped)
