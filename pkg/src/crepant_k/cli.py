"""Command-line entry point: ``crepant-k <verb> ...``.

Exit status: 0 pass, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .binary_subgroups import (
    DEFAULT_CAP,
    AdeLabel,
    GroupConstructionError,
    UnknownLabelError,
    build_character_table,
    build_group,
)
from .mckay_resolution import (
    McKayError,
    dynkin_type,
    fiber_for,
    mckay_graph,
    to_adjacency_list,
    to_dot,
    verify_mckay_correspondence,
)
from .orbifold_model import SpecError, builtin_spec_text, load_spec, parse_spec
from .verifier import euler_characteristics, verdict

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

LABEL_HELP = """\
group labels:
  A<n>      Cyclic(n+1), the cyclic group of order n+1 (n >= 1)
  D<n>      BinaryDihedral(n-2), order 4(n-2) (n >= 4)
  E6        binary tetrahedral, order 24
  E7        binary octahedral, order 48
  E8        binary icosahedral, order 120
Spec paths may be given as builtin:<name> (kummer, manifold, broken, kummer_x_torus).
"""


class UsageError(Exception):
    pass


def _label(text: str) -> AdeLabel:
    try:
        return AdeLabel.parse(text)
    except UnknownLabelError as e:
        raise UsageError(str(e)) from None


def _spec(path: str):
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        try:
            text = builtin_spec_text(name)
        except FileNotFoundError:
            raise UsageError(f"no builtin spec named {name!r}") from None
        return parse_spec(text)
    try:
        return load_spec(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _fmt(x: complex) -> str:
    re, im = round(x.real, 4) + 0.0, round(x.imag, 4) + 0.0
    if abs(im) < 5e-5:
        return f"{re:.4f}"
    return f"{re:.4f}{im:+.4f}i"


def _emit(args, obj: dict, text: str) -> None:
    if args.format == "structured":
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(text)


# --- verbs -------------------------------------------------------------------


def cmd_group(args) -> int:
    label = _label(args.label)
    g = build_group(label, args.cap)
    t = build_character_table(label, args.seed, args.cap)
    res = t.orthogonality_residual()
    rows = [[_fmt(complex(x)) for x in chi] for chi in t.characters]
    obj = {
        "label": str(label),
        "family": label.family,
        "order": g.order,
        "num_classes": g.num_classes,
        "class_sizes": list(g.class_sizes),
        "degrees": list(t.degrees),
        "character_table": rows,
        "orthogonality_residual": res,
    }
    width = max(len(x) for r in rows for x in r)
    lines = [
        f"{label} = {label.family}" + (f"({label.n})" if label.family in ("Cyclic", "BinaryDihedral") else ""),
        f"order: {g.order}",
        f"classes: {g.num_classes}",
        f"class sizes: {' '.join(map(str, g.class_sizes))}",
        f"degrees: {' '.join(map(str, t.degrees))}",
        "character table:",
        *("  " + " ".join(x.rjust(width) for x in r) for r in rows),
        f"orthogonality residual: {res:.1e}",
    ]
    _emit(args, obj, "\n".join(lines) + "\n")
    return EXIT_PASS


def cmd_mckay(args) -> int:
    label = _label(args.label)
    g = mckay_graph(build_character_table(label, args.seed, args.cap))
    detected = dynkin_type(g)
    if args.export == "adjlist":
        sys.stdout.write(to_adjacency_list(g))
        return EXIT_PASS
    if args.export == "dot":
        sys.stdout.write(to_dot(g))
        return EXIT_PASS
    obj = {
        "label": str(label),
        "adjacency": [list(r) for r in g.adjacency],
        "affine_vertex": g.affine_vertex,
        "affine_type": str(detected),
        "degrees": list(g.degrees),
        "cartan_kernel_residual": g.cartan_kernel_residual(),
    }
    lines = ["adjacency:", *("  " + " ".join(map(str, r)) for r in g.adjacency)]
    lines += [
        f"affine vertex: {g.affine_vertex}",
        f"affine type: {detected}~ ({g.size} vertices)",
        f"degree vector: {' '.join(map(str, g.degrees))}",
        f"cartan kernel residual: {g.cartan_kernel_residual()}",
    ]
    _emit(args, obj, "\n".join(lines) + "\n")
    return EXIT_PASS


def cmd_resolve(args) -> int:
    label = _label(args.label)
    fiber = fiber_for(label, args.seed, args.cap)
    v = verify_mckay_correspondence(label, args.seed, args.cap)
    edges = fiber.edges()
    obj = {
        "label": str(label),
        "sphere_count": fiber.sphere_count,
        "intersections": [list(e) for e in edges],
        "fiber_k": v.fiber_side.to_dict(),
        "representation_ring_k": v.group_side.to_dict(),
        "detected_type": str(v.detected),
        "passed": v.passed,
    }
    lines = [
        f"spheres: {fiber.sphere_count}",
        "intersection tree: " + (", ".join(f"{i}-{j}" for i, j in edges) or "(single sphere)"),
        f"K(fiber) from cells: {v.fiber_side}",
        f"K(C*G) from characters: {v.group_side}",
        f"detected type: {v.detected}",
        f"mckay correspondence: {'pass' if v.passed else 'FAIL'}",
    ]
    _emit(args, obj, "\n".join(lines) + "\n")
    return EXIT_PASS if v.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    spec = _spec(args.spec)
    report = verdict(spec, args.seed, args.cap, args.assume_degenerate_boundary, args.workers)
    _emit(args, report.to_dict(), report.render())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_euler(args) -> int:
    spec = _spec(args.spec)
    e = euler_characteristics(spec, args.seed, args.cap)
    if e is None:
        raise UsageError(f"{spec.name}: regular_k is required for the Euler characteristic")
    orb, res = e
    obj = {"spec": spec.name, "euler_orbifold": orb, "euler_resolution": res, "agree": orb == res}
    _emit(args, obj, f"euler: orbifold {orb}, resolution {res} ({'agree' if orb == res else 'DISAGREE'})\n")
    return EXIT_PASS if orb == res else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all()
    obj = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
    obj["passed"] = all(r.passed for r in results)
    _emit(args, obj, "\n".join(r.line() for r in results) + "\n")
    return EXIT_PASS if obj["passed"] else EXIT_FAIL


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--seed", type=int, default=0, help="seed for character-table computation (default 0)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure cap on group order")

    p = argparse.ArgumentParser(
        prog="crepant-k",
        description="Compare K-theory of SU(2) orbifolds with that of their crepant resolutions.",
        epilog=LABEL_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, fn, help_):
        sp = sub.add_parser(
            name, parents=[common], help=help_, epilog=LABEL_HELP, formatter_class=argparse.RawDescriptionHelpFormatter
        )
        sp.set_defaults(func=fn)
        return sp

    verb("group", cmd_group, "finite subgroup of SU(2): classes and character table").add_argument("label")
    sp = verb("mckay", cmd_mckay, "McKay graph and its affine Dynkin type")
    sp.add_argument("label")
    sp.add_argument("--export", choices=("adjlist", "dot"), help="print the graph in this format instead")
    verb("resolve", cmd_resolve, "exceptional fiber of the minimal resolution").add_argument("label")
    sp = verb("verify", cmd_verify, "verify a spec file level by level")
    sp.add_argument("spec", help="path to a spec file, or builtin:<name>")
    sp.add_argument(
        "--assume-degenerate-boundary",
        action="store_true",
        help="also report the total groups obtained if every boundary map vanished (informational)",
    )
    sp.add_argument("--workers", type=int, default=1, help="threads for level evaluation")
    verb("euler", cmd_euler, "Euler characteristics of both sides").add_argument("spec")
    verb("selftest", cmd_selftest, "run the built-in acceptance battery")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    if getattr(args, "workers", 1) < 1:
        print("crepant-k: error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SpecError) as e:
        print(f"crepant-k: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupConstructionError, McKayError) as e:
        print(f"crepant-k: verification error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
