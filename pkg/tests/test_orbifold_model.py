import json

import pytest

from crepant_k.binary_subgroups import AdeLabel
from crepant_k.fgab import FgAbGroup, KPair, ZERO
from crepant_k.orbifold_model import (
    POINT,
    DimensionError,
    DuplicateStratum,
    OrbifoldSpec,
    SchemaError,
    Stratum,
    UnknownGroupLabel,
    builtin_spec_text,
    kummer_regular_part,
    kummer_spec,
    load_spec,
    parse_spec,
    serialize,
    sphere,
    surface,
    torus,
    tubular_models,
)


def doc(**over):
    base = json.loads(builtin_spec_text("kummer"))
    base.update(over)
    return base


def test_kummer_parses():
    spec = parse_spec(builtin_spec_text("kummer"))
    assert spec.k == 16
    assert spec.complex_dimension == 2
    assert all(s.group == AdeLabel("Cyclic", 2) and s.base_k == POINT for s in spec.strata)
    assert spec.regular_k == kummer_regular_part()
    assert spec.expected_resolution_k == KPair(FgAbGroup(24), ZERO)
    assert spec == kummer_spec()


@pytest.mark.parametrize("name", ["kummer", "broken", "manifold", "kummer_x_torus"])
def test_round_trip(name, tmp_path):
    spec = parse_spec(builtin_spec_text(name))
    text = serialize(spec)
    assert parse_spec(text) == spec
    path = tmp_path / f"{name}.spec"
    path.write_text(text)
    assert load_spec(path) == spec


def test_manifold_case():
    spec = parse_spec(json.dumps(doc(strata=[])))
    assert spec.k == 0
    assert tubular_models(spec) == []


def test_torsion_is_canonicalized():
    d = doc(complex_dimension=3, strata=[
        {"name": "s", "group": "A2", "k0": {"free_rank": 1, "torsion": [3, 2]}, "k1": {"free_rank": 0, "torsion": []}}
    ])
    spec = parse_spec(json.dumps(d))
    assert spec.strata[0].base_k.k0 == FgAbGroup(1, (6,))


@pytest.mark.parametrize("mutate,exc,path", [
    (lambda d: d["strata"][3].update(group="E9"), UnknownGroupLabel, "$.strata[3].group"),
    (lambda d: d["strata"][0].update(group=7), SchemaError, "$.strata[0].group"),
    (lambda d: d["strata"][5].update(name="p01"), DuplicateStratum, "$.strata[5].name"),
    (lambda d: d["strata"][2].update(k0={"free_rank": 2, "torsion": []}), DimensionError, "$.strata[2]"),
    (lambda d: d["strata"][2].update(k0={"free_rank": 0, "torsion": []}), DimensionError, "$.strata[2].k0"),
    (lambda d: d.update(complex_dimension=1), DimensionError, "$.complex_dimension"),
    (lambda d: d.update(colour="blue"), SchemaError, "$"),
    (lambda d: d.pop("strata"), SchemaError, "$"),
    (lambda d: d["strata"][1].update(extra=1), SchemaError, "$.strata[1]"),
    (lambda d: d["regular_k"]["k0"].update(free_rank=-1), SchemaError, "$.regular_k.k0.free_rank"),
    (lambda d: d["regular_k"]["k1"].update(torsion=[2, 0]), SchemaError, "$.regular_k.k1.torsion[1]"),
    (lambda d: d["regular_k"]["k1"].update(torsion="2"), SchemaError, "$.regular_k.k1.torsion"),
    (lambda d: d["expected_resolution_k"].pop("k1"), SchemaError, "$.expected_resolution_k"),
    (lambda d: d.update(complex_dimension=True), SchemaError, "$.complex_dimension"),
])
def test_validation_errors_carry_paths(mutate, exc, path):
    d = doc()
    mutate(d)
    with pytest.raises(exc) as e:
        parse_spec(json.dumps(d))
    assert e.value.path == path
    assert str(e.value).startswith(path)


def test_malformed_json():
    with pytest.raises(SchemaError) as e:
        parse_spec('{"name": "x",')
    assert e.value.path.startswith("line 1")


def test_regular_k_optional():
    d = doc()
    del d["regular_k"]
    assert parse_spec(json.dumps(d)).regular_k is None
    d["regular_k"] = None
    assert parse_spec(json.dumps(d)).regular_k is None


def test_direct_construction_validates():
    with pytest.raises(DuplicateStratum):
        OrbifoldSpec("x", 3, (Stratum("a", AdeLabel("Cyclic", 2), POINT),) * 2, None)
    with pytest.raises(DimensionError):
        OrbifoldSpec("x", 2, (Stratum("a", AdeLabel("Cyclic", 2), sphere()),), None)
    with pytest.raises(DimensionError):
        Stratum("a", AdeLabel("Cyclic", 2), KPair(ZERO, ZERO))


def test_tubular_models():
    models = tubular_models(kummer_spec())
    assert len(models) == 16
    assert all(m.fiber.sphere_count == 1 for m in models)
    d4 = OrbifoldSpec("d4", 3, (Stratum("c", AdeLabel("BinaryDihedral", 2), sphere()),), None)
    (m,) = tubular_models(d4)
    assert m.fiber.sphere_count == 4
    assert m.quotient_model == AdeLabel("BinaryDihedral", 2)


def test_catalog():
    assert sphere() == KPair(FgAbGroup(2), ZERO)
    assert surface(2) == KPair(FgAbGroup(2), FgAbGroup(4))
    assert torus(2) == KPair(FgAbGroup(2), FgAbGroup(2))
    assert torus(4) == KPair(FgAbGroup(8), FgAbGroup(8))
    # rational cohomology of (T^4 - 16 pts)/{+-1}: 1, 0, 6, 15, 0 -> compactly supported Euler -8
    betti = [1, 0, 6, 15, 0]
    assert sum((-1) ** i * b for i, b in enumerate(betti)) == -8
    reg = kummer_regular_part()
    assert reg.k0.free_rank - reg.k1.free_rank == -8
