"""Command-line front end.

Subcommands: polytope, stable-degree, wall-cross, pullback, compare, check.
Inputs are JSON files (schemas in jsonio) or inline flags; output is a plain
text table or, with --json, canonical JSON that is byte-identical across runs
on identical inputs.

Exit codes: 0 ok, 1 identity or verification failure, 2 malformed input,
3 degenerate parameter, 4 graph shape violation, 5 formula precondition
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import jsonio
from .divisor_classes import (
    DivisorClass,
    class_algebra,
    hain_class,
    mueller_class,
    mueller_comparison,
    stable_pairs_class,
    theta_pullback,
    wall_crossing,
    wall_crossing_single,
    zero_class,
)
from .errors import (
    BasisMismatch,
    DegenerateParameter,
    DegreeSumMismatch,
    EmptyOrFullSubset,
    EmptySubset,
    GraphMismatch,
    InadmissiblePair,
    InvalidGN,
    InvalidGraph,
    InvalidParameter,
    LoopEdge,
    MalformedInput,
    NoNegativeDegree,
    NonAmple,
    NotTreeLike,
)
from .graphs import admissible_pairs, enumerate_tree_type_graphs, genus
from .multidegrees import all_stable_multidegrees_bruteforce, is_semistable, stable_multidegree
from .stability import (
    PolytopeLabel,
    canonical_parameter,
    extend_to_graph,
    is_nondegenerate,
    is_theta_flat,
    is_theta_reduced,
    phi_from_degrees,
    phi_from_label,
    polytope_label,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_MALFORMED = 2
EXIT_DEGENERATE = 3
EXIT_GRAPH_SHAPE = 4
EXIT_PRECONDITION = 5

_GRAPH_SHAPE_ERRORS = (NotTreeLike, LoopEdge, InvalidGraph, GraphMismatch)
_PRECONDITION_ERRORS = (
    DegreeSumMismatch,
    NoNegativeDegree,
    InadmissiblePair,
    NonAmple,
    EmptySubset,
    EmptyOrFullSubset,
    BasisMismatch,
)
_MALFORMED_ERRORS = (MalformedInput, InvalidGN, InvalidParameter)


# -- small helpers ---------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part.strip()) for part in text.split(",")]
    except ValueError:
        raise MalformedInput(f"expected a comma-separated integer list, got {text!r}")


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _table(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip() for row in rows]
    return "\n".join(lines)


def _add_phi_source(parser: argparse.ArgumentParser, required: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--phi", metavar="FILE", help="stability parameter JSON file")
    group.add_argument(
        "--from-degrees",
        metavar="D1,..,DN",
        help="use the integral parameter attached to this degree vector",
    )
    group.add_argument(
        "--from-label",
        metavar="FILE",
        help="use an interior point of the polytope label in FILE",
    )


def _resolve_phi(args, g: int, n: int):
    if args.phi:
        phi = jsonio.parameter_from_json(_load_json(args.phi))
        if (phi.g, phi.n) != (g, n):
            raise MalformedInput(
                f"parameter file has (g,n)=({phi.g},{phi.n}), expected ({g},{n})"
            )
        return phi
    if args.from_degrees:
        return phi_from_degrees(g, n, _parse_int_list(args.from_degrees))
    label = jsonio.label_from_json(_load_json(args.from_label))
    if (label.g, label.n) != (g, n):
        raise MalformedInput(f"label file has (g,n)=({label.g},{label.n}), expected ({g},{n})")
    return phi_from_label(label)


def _phi_from_spec(spec: str, g: int, n: int):
    """Inline parameter spec: 'fromdeg:D1,..', 'label:D1,..', 'canonical', or a JSON file path."""
    if spec.startswith("fromdeg:"):
        return phi_from_degrees(g, n, _parse_int_list(spec[len("fromdeg:") :]))
    if spec.startswith("label:"):
        values = _parse_int_list(spec[len("label:") :])
        pairs = admissible_pairs(g, n)
        if len(values) != len(pairs):
            raise MalformedInput(
                f"label spec needs {len(pairs)} entries for (g,n)=({g},{n}), got {len(values)}"
            )
        return phi_from_label(PolytopeLabel(g, n, dict(zip(pairs, values))))
    if spec == "canonical":
        return canonical_parameter(g, n)
    path = spec[len("file:") :] if spec.startswith("file:") else spec
    phi = jsonio.parameter_from_json(_load_json(path))
    if (phi.g, phi.n) != (g, n):
        raise MalformedInput(f"parameter file has (g,n)=({phi.g},{phi.n}), expected ({g},{n})")
    return phi


def _class_rows(g: int, n: int, columns: list[tuple[str, DivisorClass]]) -> list[tuple[str, ...]]:
    rows = [("term",) + tuple(name for name, _ in columns)]

    def row(term: str, values) -> tuple[str, ...]:
        return (term,) + tuple(jsonio.format_rational(v) for v in values)

    rows.append(row("lambda", [c.lam for _, c in columns]))
    for j in range(1, n + 1):
        rows.append(row(f"psi_{j}", [c.psi_coeff(j) for _, c in columns]))
    rows.append(row("delta_irr", [c.delta_irr for _, c in columns]))
    for pair in admissible_pairs(g, n):
        rows.append(row(f"delta_{pair}", [c.delta_coeff(pair) for _, c in columns]))
    return rows


# -- polytope ---------------------------------------------------------------------


def _cmd_polytope(args) -> int:
    phi = _resolve_phi(args, args.g, args.n)
    label = polytope_label(phi)
    flat = is_theta_flat(phi)
    reduced = is_theta_reduced(phi)
    if args.json:
        payload = jsonio.label_to_json(label)
        payload.update(
            {"nondegenerate": True, "theta_flat": flat, "theta_reduced": reduced}
        )
        _emit_json(payload)
        return EXIT_OK
    print(f"stability polytope (g={args.g}, n={args.n})")
    rows = [("pair", "d")] + [(str(pair), str(label.d(pair))) for pair in label.pairs]
    print(_table(rows))
    print(f"nondegenerate: true")
    print(f"theta-flat: {str(flat).lower()}")
    print(f"theta-reduced: {str(reduced).lower()}")
    return EXIT_OK


# -- stable-degree -----------------------------------------------------------------


def _cmd_stable_degree(args) -> int:
    G = jsonio.graph_from_json(_load_json(args.graph))
    g, n = genus(G), G.n
    phi = _resolve_phi(args, g, n)
    pG = extend_to_graph(phi, G)
    md = stable_multidegree(pG)

    verified = None
    if args.verify:
        strict = all_stable_multidegrees_bruteforce(pG, strict=True)
        verified = strict == [md]
    if args.json:
        payload = {
            "g": g,
            "n": n,
            "phi": {v: jsonio.format_rational(pG.value(v)) for v in G.vertices},
            "degree": {v: md.deg[v] for v in G.vertices},
        }
        if verified is not None:
            payload["verified"] = verified
        _emit_json(payload)
    else:
        print(f"graph: {len(G.vertices)} vertices, {len(G.edges)} edges, genus {g}, n {n}")
        rows = [("vertex", "phi", "degree")]
        rows += [
            (v, jsonio.format_rational(pG.value(v)), str(md.deg[v])) for v in G.vertices
        ]
        print(_table(rows))
        if verified is not None:
            print(f"verified: {str(verified).lower()}")
    if verified is False:
        print("error: brute force disagrees with the tree solver", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- classes: pullback / wall-cross / compare ------------------------------------------


def _cmd_pullback(args) -> int:
    degrees = _parse_int_list(args.degrees)
    if args.phi or args.from_degrees or args.from_label:
        phi = _resolve_phi(args, args.g, args.n)
    else:
        phi = phi_from_degrees(args.g, args.n, degrees)
    cls = theta_pullback(phi, degrees)
    if args.json:
        payload = jsonio.class_to_json(cls)
        payload["degrees"] = degrees
        _emit_json(payload)
    else:
        print(f"theta pullback (g={args.g}, n={args.n}, degrees={args.degrees})")
        print(_table(_class_rows(args.g, args.n, [("coefficient", cls)])))
    return EXIT_OK


def _cmd_wall_cross(args) -> int:
    phi1 = _phi_from_spec(args.phi1, args.g, args.n)
    phi2 = _phi_from_spec(args.phi2, args.g, args.n)
    cls = wall_crossing(phi1, phi2)
    if args.json:
        _emit_json(jsonio.class_to_json(cls))
    else:
        print(f"wall crossing (g={args.g}, n={args.n})")
        print(_table(_class_rows(args.g, args.n, [("coefficient", cls)])))
    return EXIT_OK


def _cmd_compare(args) -> int:
    g, n = args.g, args.n
    degrees = _parse_int_list(args.degrees)
    if args.mueller and not any(d < 0 for d in degrees):
        raise NoNegativeDegree(
            f"the Mueller class needs a negative degree, got {degrees}"
        )
    phi_d = phi_from_degrees(g, n, degrees)
    pullback_d = theta_pullback(phi_d, degrees)
    pairs_class = stable_pairs_class(g, n, degrees)
    hain = hain_class(g, n, degrees)

    flat_phi = phi_from_label(
        PolytopeLabel(g, n, {pair: pair.i for pair in admissible_pairs(g, n)})
    )
    flat_pullback = theta_pullback(flat_phi, degrees)

    has_negative = any(d < 0 for d in degrees)
    mueller = t_set = diff = None
    if has_negative:
        mueller = mueller_class(g, n, degrees)
        t_set, diff = mueller_comparison(g, n, degrees)

    identities = [
        (
            "pullback(phi_dvec) has no boundary terms",
            pullback_d.delta_irr == 0 and not pullback_d.delta,
        ),
        ("pullback(flat phi) = stable-pairs", flat_pullback == pairs_class),
        (
            "hain = stable-pairs + delta_irr/8",
            hain - pairs_class == DivisorClass(g, n, delta_irr=Fraction(1, 8)),
        ),
    ]
    if has_negative:
        identities.append(("mueller + diff = stable-pairs", mueller + diff == pairs_class))

    columns = [("pullback(phi_d)", pullback_d), ("stable-pairs", pairs_class), ("hain", hain)]
    if mueller is not None:
        columns.append(("mueller", mueller))

    all_pass = all(ok for _, ok in identities)
    if args.json:
        payload = {
            "g": g,
            "n": n,
            "degrees": degrees,
            "classes": {name: jsonio.class_to_json(cls) for name, cls in columns},
            "T": [jsonio.pair_to_json(pair) for pair in (t_set or [])],
            "identities": {name: ok for name, ok in identities},
        }
        if diff is not None:
            payload["mueller_diff"] = jsonio.class_to_json(diff)
        _emit_json(payload)
    else:
        print(f"class comparison (g={g}, n={n}, degrees={args.degrees})")
        print(_table(_class_rows(g, n, columns)))
        if has_negative:
            t_text = ", ".join(str(pair) for pair in t_set) if t_set else "(empty)"
            print(f"T: {t_text}")
        else:
            print("T: (mueller class undefined: no negative degree)")
        for name, ok in identities:
            print(f"identity {name}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all_pass else EXIT_FAIL


# -- check: randomized self-check sweep ---------------------------------------------------


def _random_parameter(rng: random.Random, g: int, n: int, denominator_max: int = 10):
    from .stability import StabilityParameter

    coords = {}
    for pair in admissible_pairs(g, n):
        while True:
            q = rng.randint(1, denominator_max)
            value = Fraction(rng.randint(-3 * q, 3 * q), q)
            if (value - Fraction(1, 2)).denominator != 1:
                coords[pair] = value
                break
    return StabilityParameter(g, n, coords)


def _random_degrees(rng: random.Random, g: int, n: int) -> list[int]:
    while True:
        degrees = [rng.randint(-3, 4) for _ in range(n)]
        degrees[-1] = (g - 1) - sum(degrees[:-1])
        if -3 <= degrees[-1] <= 4:
            return degrees


def _cmd_check(args) -> int:
    seed = int(os.environ.get("JACWALL_SEED", "0"))
    rng = random.Random(seed)
    gn_list = [(args.g, args.n)] if args.g is not None else [(1, 2), (2, 1), (2, 2)]
    trials = args.trials
    failures = []

    def report(name: str, ok: bool, cases: int) -> None:
        print(f"{'PASS' if ok else 'FAIL'} {name} ({cases} cases)")
        if not ok:
            failures.append(name)

    ok = True
    cases = 0
    for g, n in gn_list:
        for _ in range(trials):
            phi1 = _random_parameter(rng, g, n)
            phi2 = _random_parameter(rng, g, n)
            degrees = _random_degrees(rng, g, n)
            lhs = theta_pullback(phi2, degrees) - theta_pullback(phi1, degrees)
            ok = ok and lhs == wall_crossing(phi1, phi2)
            cases += 1
    report("wall-crossing consistency", ok, cases)

    ok = True
    cases = 0
    for g, n in gn_list:
        for _ in range(trials):
            degrees = _random_degrees(rng, g, n)
            pairs_class = stable_pairs_class(g, n, degrees)
            ok = ok and hain_class(g, n, degrees) - pairs_class == DivisorClass(
                g, n, delta_irr=Fraction(1, 8)
            )
            easy = theta_pullback(phi_from_degrees(g, n, degrees), degrees)
            ok = ok and easy.delta_irr == 0 and not easy.delta
            if any(d < 0 for d in degrees):
                t_set, diff = mueller_comparison(g, n, degrees)
                ok = ok and mueller_class(g, n, degrees) + diff == pairs_class
            cases += 1
    report("class identities", ok, cases)

    ok = True
    cases = 0
    for g, n in gn_list:
        corpus = enumerate_tree_type_graphs(g, n, args.max_vertices)
        sample = corpus if len(corpus) <= 25 else rng.sample(corpus, 25)
        for G in sample:
            phi = _random_parameter(rng, g, n)
            pG = extend_to_graph(phi, G)
            strict = all_stable_multidegrees_bruteforce(pG, strict=True)
            ok = ok and strict == [stable_multidegree(pG)]
            ok = ok and all(
                is_semistable(pG, found, strict=True, mode="elementary") for found in strict
            )
            cases += 1
    report("unique stable multidegree", ok, cases)

    if failures:
        return EXIT_FAIL
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacwall",
        description=(
            "Stability polytopes, stable multidegrees, and theta-divisor classes "
            "over the moduli of stable marked curves, in exact arithmetic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polytope", help="label the stability polytope of a parameter")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_phi_source(p, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_polytope)

    p = sub.add_parser("stable-degree", help="the unique stable multidegree on a graph")
    p.add_argument("--graph", metavar="FILE", required=True, help="graph JSON file")
    _add_phi_source(p, required=True)
    p.add_argument("--verify", action="store_true", help="re-check via brute force")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_stable_degree)

    p = sub.add_parser("pullback", help="pullback of the theta class to the moduli of curves")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True, metavar="D1,..,DN")
    _add_phi_source(p, required=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_pullback)

    p = sub.add_parser("wall-cross", help="difference of theta classes between two parameters")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--phi1", required=True, metavar="SPEC")
    p.add_argument("--phi2", required=True, metavar="SPEC")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_wall_cross)

    p = sub.add_parser("compare", help="compare the theta, stable-pairs, Hain, and Mueller classes")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True, metavar="D1,..,DN")
    p.add_argument(
        "--mueller",
        action="store_true",
        help="require the Mueller comparison (error when no degree is negative)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("check", help="randomized self-check sweep (seeded by JACWALL_SEED)")
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--max-vertices", type=int, default=3)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and (args.g is None) != (args.n is None):
        print("error: --g and --n must be given together", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        return args.func(args)
    except DegenerateParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except _GRAPH_SHAPE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH_SHAPE
    except _PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except _MALFORMED_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
