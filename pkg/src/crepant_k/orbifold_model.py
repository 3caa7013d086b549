"""Stratified orbifolds with SU(2) isotropy: data model and spec files.

An orbifold is described by the K-theory of its pieces: the compactly
supported K-theory of the regular part, and for every singular stratum the
K-theory of the underlying closed manifold plus its ADE isotropy label.
Those K-groups are inputs; nothing here computes K-theory of manifolds.

Spec files are JSON::

    {
      "name": "kummer",
      "complex_dimension": 2,
      "regular_k": {"k0": {"free_rank": 7, "torsion": []}, "k1": {...}},
      "strata": [{"name": "p1", "group": "A1", "k0": {...}, "k1": {...}}],
      "expected_resolution_k": {"k0": ..., "k1": ...}
    }

``regular_k`` may be null when unknown; ``expected_resolution_k`` is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .binary_subgroups import AdeLabel, UnknownLabelError
from .fgab import Z, ZERO, FgAbGroup, KPair, free
from .mckay_resolution import ExceptionalFiber, fiber_for


class SpecError(ValueError):
    """Invalid orbifold specification; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class SchemaError(SpecError):
    pass


class UnknownGroupLabel(SpecError):
    pass


class DimensionError(SpecError):
    pass


class DuplicateStratum(SpecError):
    pass


POINT = KPair(Z, ZERO)


@dataclass(frozen=True)
class Stratum:
    name: str
    group: AdeLabel
    base_k: KPair

    def __post_init__(self):
        if self.base_k.k0.free_rank < 1:
            raise DimensionError(self.name, "K^0 of a nonempty closed manifold has rank >= 1")


@dataclass(frozen=True)
class OrbifoldSpec:
    name: str
    complex_dimension: int
    strata: tuple[Stratum, ...]
    regular_k: KPair | None
    expected_resolution_k: KPair | None = None

    def __post_init__(self):
        if self.complex_dimension < 2:
            raise DimensionError("complex_dimension", "must be at least 2")
        seen = set()
        for i, s in enumerate(self.strata):
            if s.name in seen:
                raise DuplicateStratum(f"strata[{i}].name", f"duplicate stratum name {s.name!r}")
            seen.add(s.name)
            if self.complex_dimension == 2 and s.base_k != POINT:
                raise DimensionError(f"strata[{i}]", "in complex dimension 2 every stratum is a point, K = (Z, 0)")

    @property
    def k(self) -> int:
        return len(self.strata)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "complex_dimension": self.complex_dimension,
            "regular_k": None if self.regular_k is None else self.regular_k.to_dict(),
            "strata": [
                {"name": s.name, "group": str(s.group), "k0": s.base_k.k0.to_dict(), "k1": s.base_k.k1.to_dict()}
                for s in self.strata
            ],
        }
        if self.expected_resolution_k is not None:
            out["expected_resolution_k"] = self.expected_resolution_k.to_dict()
        return out


@dataclass(frozen=True)
class TubularModel:
    stratum: Stratum
    fiber: ExceptionalFiber
    quotient_model: AdeLabel


# --- parsing -----------------------------------------------------------------

_TOP_FIELDS = {"name", "complex_dimension", "regular_k", "strata", "expected_resolution_k"}
_STRATUM_FIELDS = {"name", "group", "k0", "k1"}


def _require(obj: dict, fields: set[str], optional: set[str], path: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    unknown = set(obj) - fields - optional
    if unknown:
        raise SchemaError(path, f"unknown field(s) {sorted(unknown)}")
    missing = fields - set(obj)
    if missing:
        raise SchemaError(path, f"missing field(s) {sorted(missing)}")


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, f"expected an integer, got {v!r}")
    return v


def _group(obj, path: str) -> FgAbGroup:
    _require(obj, {"free_rank", "torsion"}, set(), path)
    rank = _int(obj["free_rank"], f"{path}.free_rank")
    if rank < 0:
        raise SchemaError(f"{path}.free_rank", "must be nonnegative")
    if not isinstance(obj["torsion"], list):
        raise SchemaError(f"{path}.torsion", "expected an array")
    tors = [_int(t, f"{path}.torsion[{i}]") for i, t in enumerate(obj["torsion"])]
    for i, t in enumerate(tors):
        if t < 1:
            raise SchemaError(f"{path}.torsion[{i}]", "torsion orders must be positive")
    return FgAbGroup.of(rank, tors)


def _kpair(obj, path: str) -> KPair:
    _require(obj, {"k0", "k1"}, set(), path)
    return KPair(_group(obj["k0"], f"{path}.k0"), _group(obj["k1"], f"{path}.k1"))


def spec_from_dict(doc: dict) -> OrbifoldSpec:
    _require(doc, {"name", "complex_dimension", "strata"}, {"regular_k", "expected_resolution_k"}, "$")
    if not isinstance(doc["name"], str):
        raise SchemaError("$.name", "expected a string")
    n = _int(doc["complex_dimension"], "$.complex_dimension")
    if n < 2:
        raise DimensionError("$.complex_dimension", "must be at least 2")
    regular = doc.get("regular_k")
    regular_k = None if regular is None else _kpair(regular, "$.regular_k")
    expected = doc.get("expected_resolution_k")
    expected_k = None if expected is None else _kpair(expected, "$.expected_resolution_k")
    if not isinstance(doc["strata"], list):
        raise SchemaError("$.strata", "expected an array")

    strata = []
    names = set()
    for i, s in enumerate(doc["strata"]):
        path = f"$.strata[{i}]"
        _require(s, _STRATUM_FIELDS, set(), path)
        if not isinstance(s["name"], str):
            raise SchemaError(f"{path}.name", "expected a string")
        if s["name"] in names:
            raise DuplicateStratum(f"{path}.name", f"duplicate stratum name {s['name']!r}")
        names.add(s["name"])
        if not isinstance(s["group"], str):
            raise SchemaError(f"{path}.group", "expected an ADE label string")
        try:
            label = AdeLabel.parse(s["group"])
        except UnknownLabelError as e:
            raise UnknownGroupLabel(f"{path}.group", str(e)) from None
        base = KPair(_group(s["k0"], f"{path}.k0"), _group(s["k1"], f"{path}.k1"))
        if base.k0.free_rank < 1:
            raise DimensionError(f"{path}.k0", "K^0 of a nonempty closed manifold has rank >= 1")
        if n == 2 and base != POINT:
            raise DimensionError(path, "in complex dimension 2 every stratum is a point, K = (Z, 0)")
        strata.append(Stratum(s["name"], label, base))
    return OrbifoldSpec(doc["name"], n, tuple(strata), regular_k, expected_k)


def parse_spec(text: str) -> OrbifoldSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return spec_from_dict(doc)


def load_spec(path) -> OrbifoldSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def serialize(spec: OrbifoldSpec) -> str:
    return json.dumps(spec.to_dict(), indent=2) + "\n"


def builtin_spec_text(name: str) -> str:
    """Text of a spec shipped with the package (``kummer``, ``manifold``, ``broken``)."""
    return resources.files("crepant_k").joinpath("specs", f"{name}.spec").read_text(encoding="utf-8")


def tubular_models(spec: OrbifoldSpec, seed: int = 0) -> list[TubularModel]:
    return [TubularModel(s, fiber_for(s.group, seed), s.group) for s in spec.strata]


# --- catalog of base spaces --------------------------------------------------


def point() -> KPair:
    return POINT


def sphere() -> KPair:
    return KPair(free(2), ZERO)


def surface(genus: int) -> KPair:
    """Closed orientable surface: K^0 = Z^2, K^1 = Z^(2g)."""
    return KPair(free(2), free(2 * genus))


def torus(dim: int = 2) -> KPair:
    """Real ``dim``-torus: both K-groups free of rank 2^(dim-1)."""
    return KPair(free(2 ** (dim - 1)), free(2 ** (dim - 1)))


def kummer_regular_part() -> KPair:
    """Ranks of compactly supported K-theory of (T^4 minus 16 points)/{+-1}.

    Rational cohomology of the quotient is 1, 0, 6, 15, 0 in degrees 0..4
    (odd classes of T^4 are killed, the 15 independent linking 3-spheres
    survive), so by duality the compactly supported ranks are 0, 15, 6, 0, 1.
    Torsion is not modeled.
    """
    return KPair(free(7), free(15))


def kummer_spec() -> OrbifoldSpec:
    strata = tuple(Stratum(f"p{i:02d}", AdeLabel("Cyclic", 2), POINT) for i in range(1, 17))
    return OrbifoldSpec("kummer", 2, strata, kummer_regular_part(), KPair(free(24), ZERO))
