"""Built-in acceptance battery run by ``crepant-k selftest``.

Each check returns a ``CheckResult``; the oracles used here (brute-force
cyclic decompositions, explicit matrix products, determinants) are kept
independent of the code paths they check.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import gcd, prod

from .binary_subgroups import AdeLabel, UnknownLabelError, build_character_table, build_group, builtin_labels
from .fgab import (
    ZERO,
    DimensionMismatch,
    ExactRow,
    FgAbGroup,
    GroupHom,
    IntMatrix,
    KPair,
    Presentation,
    check_ladder_five_lemma,
    identity_hom,
    kpair_isomorphic,
    kunneth,
    rank_euler,
    smith_normal_form,
    tensor,
    tor,
    zero_hom,
)
from .mckay_resolution import verify_mckay_correspondence
from .orbifold_model import Stratum, UnknownGroupLabel, builtin_spec_text, parse_spec
from .verifier import evaluate_level, verdict

TORSION_CHOICES = (2, 3, 4, 6, 8, 9)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def expected_order_and_classes(label: AdeLabel) -> tuple[int, int]:
    n = label.n
    return {
        "Cyclic": lambda: (n, n),
        "BinaryDihedral": lambda: (4 * n, n + 3),
        "BinaryTetrahedral": lambda: (24, 7),
        "BinaryOctahedral": lambda: (48, 8),
        "BinaryIcosahedral": lambda: (120, 9),
    }[label.family]()


def random_group(rng: random.Random, max_rank: int = 6, max_factors: int = 2) -> FgAbGroup:
    return FgAbGroup.of(rng.randint(0, max_rank), [rng.choice(TORSION_CHOICES) for _ in range(rng.randint(0, max_factors))])


def random_kpair(rng: random.Random, max_rank: int = 6) -> KPair:
    return KPair(random_group(rng, max_rank), random_group(rng, max_rank))


def random_finite_orders(rng: random.Random, bound: int = 64) -> list[int]:
    """Cyclic orders whose product stays within ``bound``."""
    out: list[int] = []
    while rng.random() < 0.7:
        d = rng.randint(2, 16)
        if prod(out) * d > bound:
            break
        out.append(d)
    return out


def elements_killed_by(orders: list[int], k: int) -> int:
    """|{x : kx = 0}| in the finite group with these cyclic orders."""
    return prod(gcd(d, k) for d in orders)


def same_finite_group(orders: list[int], g: FgAbGroup, bound: int) -> bool:
    return all(elements_killed_by(orders, k) == elements_killed_by(list(g.torsion), k) for k in range(1, bound + 1))


def snf_instance_ok(m: IntMatrix) -> bool:
    u, d, v = smith_normal_form(m)
    if u @ m @ v != d or abs(u.det()) != 1 or abs(v.det()) != 1:
        return False
    diag = [d[i, i] for i in range(min(d.shape))]
    off = any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j)
    chain = all(x >= 0 for x in diag) and all(
        (b % a == 0) if a else b == 0 for a, b in zip(diag, diag[1:])
    )
    return chain and not off


def check_group_battery() -> CheckResult:
    bad = []
    worst = 0.0
    for label in builtin_labels():
        t0 = time.perf_counter()
        g = build_group.__wrapped__(label)
        table = build_character_table.__wrapped__(label)
        elapsed = time.perf_counter() - t0
        res = table.orthogonality_residual()
        worst = max(worst, res)
        if (g.order, g.num_classes) != expected_order_and_classes(label):
            bad.append(f"{label} order/classes {(g.order, g.num_classes)}")
        if res >= 1e-6 or sum(d * d for d in table.degrees) != g.order or elapsed >= 1.0:
            bad.append(f"{label} residual {res:.1e} time {elapsed:.2f}s")
    return CheckResult("ADE group battery", not bad, "; ".join(bad) or f"31 labels, max residual {worst:.1e}")


def check_mckay_battery() -> CheckResult:
    bad = []
    for label in builtin_labels():
        t0 = time.perf_counter()
        v = verify_mckay_correspondence(label)
        if not v.passed or time.perf_counter() - t0 >= 1.0:
            bad.append(f"{label}: {v.group_side} vs {v.fiber_side}")
    return CheckResult("McKay correspondence cross-path", not bad, "; ".join(bad) or "rank R(G) = rank K0(fiber), K1 = 0 on both sides")


def check_level_suite(seed: int = 0, count: int = 100) -> CheckResult:
    rng = random.Random(seed)
    labels = builtin_labels()
    t0 = time.perf_counter()
    bad = []
    for i in range(count):
        base = random_kpair(rng)
        if base.k0.free_rank == 0:
            base = KPair(FgAbGroup.of(1, base.k0.torsion), base.k1)
        level = evaluate_level(i + 1, Stratum(f"s{i}", rng.choice(labels), base))
        if not (level.passed and len(level.ladders) == 2):
            bad.append(f"{level.stratum.group} over {base}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    if elapsed >= 5.0:
        bad.append(f"took {elapsed:.1f}s")
    return CheckResult("level isomorphism suite", ok, "; ".join(bad) or f"{count} strata, ladders pass, under 5 s")


def check_kummer() -> CheckResult:
    t0 = time.perf_counter()
    spec = parse_spec(builtin_spec_text("kummer"))
    report = verdict(spec)
    elapsed = time.perf_counter() - t0
    ok = (
        report.passed
        and spec.k == 16
        and rank_euler(spec.regular_k) == -8
        and report.euler_orbifold == report.euler_resolution == 24
        and elapsed < 5.0
    )
    return CheckResult(
        "Kummer surface end-to-end", ok, f"euler {report.euler_orbifold} = {report.euler_resolution}" + ("" if elapsed < 5.0 else f", took {elapsed:.1f}s")
    )


def check_fgab_properties(seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    t0 = time.perf_counter()
    bad = []
    for _ in range(500):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = IntMatrix([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)])
        if not snf_instance_ok(m):
            bad.append(f"snf {m.tolist()}")
            break
    for _ in range(200):
        a, b = random_finite_orders(rng), random_finite_orders(rng)
        fa, fb = rng.randint(0, 2), rng.randint(0, 2)
        ga, gb = FgAbGroup.of(fa, a), FgAbGroup.of(fb, b)
        t_orders = [gcd(x, y) for x in a for y in b] + a * fb + b * fa
        tor_orders = [gcd(x, y) for x in a for y in b]
        t, q = tensor(ga, gb), tor(ga, gb)
        if t.free_rank != fa * fb or not same_finite_group(t_orders, t, 64) or q.free_rank or not same_finite_group(tor_orders, q, 64):
            bad.append(f"tensor/tor {a}+Z^{fa}, {b}+Z^{fb}")
            break
    unit = KPair(FgAbGroup(1), ZERO)
    for _ in range(200):
        a, b = random_kpair(rng, 4), random_kpair(rng, 4)
        ab, ba = kunneth(a, b), kunneth(b, a)
        if not (
            kpair_isomorphic(ab, ba)
            and kpair_isomorphic(kunneth(unit, b), b)
            and rank_euler(ab) == rank_euler(a) * rank_euler(b)
        ):
            bad.append(f"kunneth {a} {b}")
            break
    elapsed = time.perf_counter() - t0
    return CheckResult("fgab property suite", not bad and elapsed < 10.0, "; ".join(bad) or ("500 SNF, 200 tensor/tor, 200 kunneth" if elapsed < 10.0 else f"took {elapsed:.1f}s"))


def broken_square_ladder() -> tuple[ExactRow, ExactRow, list[GroupHom]]:
    """Rows 0 -> Z -> Z -> Z/2 -> 0 with the middle vertical doubled."""
    zero, z, z2 = Presentation(0), Presentation(1), Presentation(1, IntMatrix([[2]]))
    maps = (zero_hom(zero, z), GroupHom(z, z, IntMatrix([[2]])), GroupHom(z, z2, IntMatrix([[1]])), zero_hom(z2, zero))
    row = ExactRow((zero, z, z, z2, zero), maps)
    verticals = [identity_hom(zero), identity_hom(z), GroupHom(z, z, IntMatrix([[2]])), identity_hom(z2), identity_hom(zero)]
    return row, row, verticals


def check_negative_controls() -> CheckResult:
    bad = []
    broken = verdict(parse_spec(builtin_spec_text("broken")))
    if broken.passed:
        bad.append("mismatched expected_resolution_k passed")
    top, bottom, vert = broken_square_ladder()
    try:
        lv = check_ladder_five_lemma(top, bottom, vert)
        if lv.passed or all(lv.squares_commute):
            bad.append("broken square not reported")
    except DimensionMismatch as e:
        bad.append(f"unexpected dimension error {e}")
    doc = builtin_spec_text("kummer").replace('"A1"', '"E9"', 1)
    try:
        parse_spec(doc)
        bad.append("E9 accepted")
    except UnknownGroupLabel:
        pass
    try:
        AdeLabel.parse("X3")
        bad.append("X3 accepted")
    except UnknownLabelError:
        pass
    return CheckResult("negative controls", not bad, "; ".join(bad) or "mismatch fails, broken square reported, E9 rejected")


CHECKS = (
    check_group_battery,
    check_mckay_battery,
    check_level_suite,
    check_kummer,
    check_fgab_properties,
    check_negative_controls,
)


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
