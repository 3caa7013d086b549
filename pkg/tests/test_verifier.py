import random

import pytest

from crepant_k.binary_subgroups import AdeLabel, builtin_labels
from crepant_k.fgab import FgAbGroup, KPair, ZERO, rank_euler
from crepant_k.mckay_resolution import fiber_for
from crepant_k.orbifold_model import (
    POINT,
    OrbifoldSpec,
    Stratum,
    builtin_spec_text,
    kummer_spec,
    parse_spec,
    sphere,
    surface,
    torus,
)
from crepant_k.selftest import random_kpair
from crepant_k.verifier import (
    euler_characteristics,
    evaluate_level,
    mckay_basis_map,
    orbifold_level,
    resolution_level,
    verdict,
    verify_levels,
)

A1, A2 = AdeLabel("Cyclic", 2), AdeLabel("Cyclic", 3)
D4, E8 = AdeLabel("BinaryDihedral", 2), AdeLabel("BinaryIcosahedral")


def F(n):
    return FgAbGroup(n)


@pytest.mark.parametrize("base,label,expected", [
    (POINT, A1, KPair(F(2), ZERO)),
    (torus(2), D4, KPair(F(10), F(10))),
    (sphere(), E8, KPair(F(18), ZERO)),
    (surface(2), A2, KPair(F(6), F(12))),
])
def test_level_examples(base, label, expected):
    s = Stratum("s", label, base)
    assert orbifold_level(s) == expected
    assert resolution_level(s) == expected


@pytest.mark.parametrize("label", builtin_labels(), ids=str)
def test_single_stratum_over_every_label(label):
    base = KPair(FgAbGroup(1, (2, 4)), FgAbGroup(2, (3,)))
    level = evaluate_level(1, Stratum("s", label, base))
    assert level.passed
    assert len(level.ladders) == 2
    assert all(lv.passed for lv in level.ladders)


def test_random_levels_with_torsion():
    rng = random.Random(3)
    labels = builtin_labels()
    for i in range(40):
        base = random_kpair(rng)
        if base.k0.free_rank == 0:
            base = KPair(FgAbGroup.of(1, base.k0.torsion), base.k1)
        level = evaluate_level(i, Stratum("s", rng.choice(labels), base))
        assert level.passed, level.to_dict()


def test_mckay_basis_map_is_unimodular():
    for label in (A1, D4, E8, AdeLabel("Cyclic", 6)):
        f = fiber_for(label)
        m = mckay_basis_map(f.sphere_count + 1, 0, f)
        assert abs(m.det()) == 1


def test_kummer_verdict():
    report = verdict(parse_spec(builtin_spec_text("kummer")))
    assert len(report.levels) == 16
    assert all(lv.orbifold_subquotient == KPair(F(2), ZERO) for lv in report.levels)
    assert (report.euler_orbifold, report.euler_resolution) == (24, 24)
    assert report.expected_euler == 24
    assert report.passed
    assert "overall: PASS" in report.render()


def test_every_level_of_a_surface_spec_has_trivial_k1():
    spec = parse_spec(builtin_spec_text("kummer"))
    for lv in verify_levels(spec):
        assert lv.orbifold_subquotient.k1.is_trivial
        assert lv.resolution_subquotient.k1.is_trivial


def test_broken_verdict_fails_with_both_numbers():
    report = verdict(parse_spec(builtin_spec_text("broken")))
    assert not report.passed
    text = report.render()
    assert "24" in text and "22" in text and "MISMATCH" in text


def test_manifold_vacuous_pass():
    report = verdict(parse_spec(builtin_spec_text("manifold")))
    assert report.levels == []
    assert report.passed
    assert euler_characteristics(parse_spec(builtin_spec_text("manifold"))) == (0, 0)


def test_euler_examples():
    reg = KPair(F(3), F(1))
    spec = OrbifoldSpec("t", 3, (Stratum("t", AdeLabel("BinaryOctahedral"), torus(2)),), reg)
    assert euler_characteristics(spec) == (2, 2)
    empty = OrbifoldSpec("m", 3, (), reg)
    assert euler_characteristics(empty) == (rank_euler(reg), rank_euler(reg))


def test_missing_regular_k_is_skipped_not_failed():
    spec = OrbifoldSpec("x", 2, kummer_spec().strata, None, KPair(F(24), ZERO))
    report = verdict(spec)
    assert euler_characteristics(spec) is None
    assert report.passed
    assert any("regular_k" in s for s in report.skipped)


def test_permutation_invariance():
    rng = random.Random(5)
    labels = builtin_labels()
    strata = [Stratum(f"s{i}", rng.choice(labels), rng.choice([sphere(), torus(2), surface(3)])) for i in range(8)]
    reg = KPair(F(5), F(2))
    ref = verdict(OrbifoldSpec("a", 3, tuple(strata), reg))
    for _ in range(3):
        rng.shuffle(strata)
        r = verdict(OrbifoldSpec("b", 3, tuple(strata), reg))
        assert (r.euler_orbifold, r.euler_resolution) == (ref.euler_orbifold, ref.euler_resolution)
        assert r.passed == ref.passed
        by_name = {lv.stratum.name: lv.to_dict() for lv in ref.levels}
        for lv in r.levels:
            d = lv.to_dict()
            d["index"] = by_name[lv.stratum.name]["index"]
            assert d == by_name[lv.stratum.name]


def test_parallel_evaluation_is_deterministic():
    spec = parse_spec(builtin_spec_text("kummer_x_torus"))
    a = verdict(spec).to_dict()
    b = verdict(spec, max_workers=4).to_dict()
    assert a == b
    assert a["passed"]


def test_conditional_total_is_informational():
    spec = parse_spec(builtin_spec_text("kummer"))
    report = verdict(spec, assume_degenerate_boundary=True)
    ct = report.conditional_total
    assert ct is not None
    # the boundary maps cannot all vanish for the Kummer surface: the naive sum overshoots K(K3)
    assert ct["orbifold"] == ct["resolution"] == "(Z^39, Z^15)"
    assert ct["agree"] and not ct["matches_expected"]
    assert report.passed
    assert "not a proof" in report.render()


def test_conditional_total_skipped_with_torsion():
    base = KPair(FgAbGroup(1, (2,)), ZERO)
    spec = OrbifoldSpec("t", 3, (Stratum("s", A1, base),), KPair(F(1), ZERO))
    report = verdict(spec, assume_degenerate_boundary=True)
    assert report.conditional_total is None
    assert any("torsion" in s for s in report.skipped)


def test_report_dict_shape():
    d = verdict(kummer_spec()).to_dict()
    assert d["spec"] == "kummer"
    assert d["levels"][0]["orbifold_subquotient"] == {"k0": {"free_rank": 2, "torsion": []}, "k1": {"free_rank": 0, "torsion": []}}
    assert d["passed"] is True
