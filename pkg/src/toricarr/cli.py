"""Command-line front end.

Commands run one computation per process and emit deterministic output:
identical inputs produce byte-identical bytes.  Exit codes: 0 success,
1 usage/parse error, 2 capability bound hit, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, layers, oracle, subsys, weyl
from .errors import CapabilityError
from .rootsys import (
    RootSystem,
    affine_diagram,
    build,
    diagram_automorphisms,
    format_type,
    parse_type,
    type_invariants,
)

_FORMATS = {
    "points": {"json", "text"},
    "layers": {"json", "text"},
    "census": {"json", "text", "csv"},
    "poincare": {"json", "text"},
    "euler": {"json", "text"},
    "identity": {"json", "text"},
    "poset": {"json", "text", "dot"},
    "verify": {"json", "text"},
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPABILITY = 2
EXIT_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _num(x: int) -> str:
    """Counts are serialized as decimal strings; they can exceed 2^53."""
    return str(x)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _poly_json(p: layers.IntPolynomial) -> dict:
    return {"coefficients": [_num(c) for c in p.coeffs], "display": str(p)}


def _build_parser() -> _Parser:
    parser = _Parser(prog="toricarr", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("points", "count the points of the arrangement and their orbit table"),
        ("layers", "per-dimension layer counts"),
        ("census", "full layer census with tangent types"),
        ("poincare", "Poincare polynomial of the complement"),
        ("euler", "Euler characteristic, both routes"),
        ("identity", "the degree identity check"),
        ("poset", "explicit layer poset"),
        ("verify", "run the oracle-vs-formula suite"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--type", required=True, help='root system type, e.g. "F4" or "A3xA1"')
        p.add_argument("--format", default="text", choices=["json", "csv", "dot", "text"])
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--max-group-order", type=int, default=weyl.DEFAULT_MAX_GROUP_ORDER)
        p.add_argument("--brute-rank", type=int, default=oracle.DEFAULT_BRUTE_RANK)
        p.add_argument("--poset-rank", type=int, default=oracle.DEFAULT_POSET_RANK)
        if name == "poincare":
            p.add_argument("--route", default="both", choices=["closed", "layers", "both"])
    return parser


def _json_payload(rs: RootSystem, command: str, results: dict) -> str:
    doc = {
        "type": format_type(rs.factors),
        "rank": rs.rank,
        "command": command,
        "tool_version": __version__,
        "results": results,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- command handlers ---------------------------------------------------------


def _cmd_points(rs: RootSystem, args) -> tuple[dict, list[str]]:
    total = layers.count_points(rs)
    factors_out = []
    lines = [f"type {format_type(rs.factors)}: {total} points"]
    start = 0
    for sym in rs.factors:
        frs = build((sym,))
        records = layers.point_orbits(frs)
        rows = []
        for r in records:
            rows.append(
                {
                    "vertex": r.vertex,
                    "orbit_size": _num(r.orbit_size),
                    "point_type": format_type(r.point_type),
                    "stabilizer_order": _num(r.stabilizer_order),
                    "aut_stabilizer_order": _num(r.aut_stabilizer_order),
                    "aut_orbit": r.aut_orbit,
                }
            )
        factors_out.append(
            {"factor": str(sym), "total": _num(layers.count_points(frs)), "orbits": rows}
        )
        lines.append(f"factor {sym}: {layers.count_points(frs)} points")
        for r in records:
            lines.append(
                f"  vertex {r.vertex}: orbit {r.orbit_size}, type {format_type(r.point_type)}, "
                f"|W_p| {r.stabilizer_order}, |Stab_Aut| {r.aut_stabilizer_order}, Q-orbit {r.aut_orbit}"
            )
        start += sym.rank
    return {"total": _num(total), "factors": factors_out}, lines


def _cmd_layers(rs: RootSystem, args) -> tuple[dict, list[str]]:
    counts = [layers.count_layers(rs, d) for d in range(rs.rank + 1)]
    lines = [f"type {format_type(rs.factors)}: layers by dimension"]
    for d, c in enumerate(counts):
        lines.append(f"  d={d}: {c}")
    lines.append(f"  total: {sum(counts)}")
    return {
        "by_dimension": [_num(c) for c in counts],
        "total": _num(sum(counts)),
    }, lines


def _census_rows(rs: RootSystem) -> list[dict]:
    rows = []
    for rec in layers.layer_census(rs):
        for ptype, count in rec.phi_c_types:
            rows.append(
                {
                    "dim": rec.dimension,
                    "theta_type": format_type(rec.theta_type),
                    "theta_orbit_size": rec.orbit_size,
                    "n_theta": rec.n_theta,
                    "phi_c_type": format_type(ptype),
                    "count": count,
                }
            )
    return rows


def _cmd_census(rs: RootSystem, args) -> tuple[dict, list[str]]:
    records = layers.layer_census(rs)
    out_records = []
    lines = [f"type {format_type(rs.factors)}: layer census"]
    for rec in records:
        out_records.append(
            {
                "dim": rec.dimension,
                "theta_type": format_type(rec.theta_type),
                "theta_orbit_size": _num(rec.orbit_size),
                "n_theta": _num(rec.n_theta),
                "layers_per_theta": _num(rec.layer_count),
                "phi_c_types": [
                    {"type": format_type(t), "count": _num(c)} for t, c in rec.phi_c_types
                ],
            }
        )
        types = ", ".join(f"{format_type(t)}:{c}" for t, c in rec.phi_c_types)
        lines.append(
            f"  d={rec.dimension} theta {format_type(rec.theta_type)} x{rec.orbit_size} "
            f"n_theta={rec.n_theta} layers/theta={rec.layer_count} [{types}]"
        )
    return {"records": out_records}, lines


def _cmd_poincare(rs: RootSystem, args) -> tuple[dict, list[str]]:
    route = getattr(args, "route", "both")
    results: dict = {"route": route}
    lines = [f"type {format_type(rs.factors)}: Poincare polynomial"]
    if route == "both":
        closed = layers.poincare(rs, "closed")
        by_layers = layers.poincare(rs, "layers")
        results["closed"] = _poly_json(closed)
        results["layers"] = _poly_json(by_layers)
        results["routes_agree"] = closed == by_layers
        lines.append(f"  closed-form: {closed}")
        lines.append(f"  layer-sum:   {by_layers}")
        lines.append(f"  routes agree: {closed == by_layers}")
    else:
        poly = layers.poincare(rs, route)
        results["polynomial"] = _poly_json(poly)
        lines.append(f"  {route}: {poly}")
    return results, lines


def _cmd_euler(rs: RootSystem, args) -> tuple[dict, list[str]]:
    value = layers.euler_characteristic(rs)
    closed = (-1) ** rs.rank * type_invariants(rs.factors).weyl_order
    results = {
        "point_sum": _num(value),
        "closed_form": _num(closed),
        "equivariant_multiple": _num(layers.equivariant_euler(rs).k),
    }
    lines = [
        f"type {format_type(rs.factors)}: Euler characteristic",
        f"  point-orbit sum: {value}",
        f"  (-1)^n |W|:      {closed}",
    ]
    try:
        p_eval = layers.poincare(rs, "closed")(-1)
        results["poincare_at_minus_one"] = _num(p_eval)
        lines.append(f"  P(-1):           {p_eval}")
    except CapabilityError:
        results["poincare_at_minus_one"] = None
        lines.append("  P(-1):           (K_d enumeration out of capability)")
    lines.append(f"  equivariant: {layers.equivariant_euler(rs).k} * regular character")
    return results, lines


def _cmd_identity(rs: RootSystem, args) -> tuple[dict, list[str]]:
    factors_out = []
    lines = [f"type {format_type(rs.factors)}: degree identity"]
    for sym in rs.factors:
        res = layers.verify_degree_identity(build((sym,)))
        factors_out.append(
            {
                "factor": str(sym),
                "holds": res.holds,
                "total": _frac(res.total),
                "terms": [
                    {"vertex": p, "value": _frac(v)} for p, v in res.terms
                ],
            }
        )
        lines.append(f"  {sym}: sum = {_frac(res.total)} ({'ok' if res.holds else 'FAIL'})")
        for p, v in res.terms:
            lines.append(f"    vertex {p}: {_frac(v)}")
    return {"factors": factors_out}, lines


def _poset_payload(rs: RootSystem, args):
    poset = oracle.build_poset(rs, max_rank=args.poset_rank)
    elements = []
    for el in poset.elements:
        elements.append(
            {
                "dim": el.dimension,
                "theta_type": format_type(el.theta.type),
                "base_point": [_frac(x) for x in el.base_point],
            }
        )
    covers = [list(c) for c in poset.covers()]
    return poset, elements, covers


def _cmd_poset(rs: RootSystem, args) -> tuple[dict, list[str]]:
    poset, elements, covers = _poset_payload(rs, args)
    lines = [f"type {format_type(rs.factors)}: layer poset ({len(elements)} layers)"]
    for i, el in enumerate(elements):
        lines.append(
            f"  [{i}] d={el['dim']} {el['theta_type']} @ ({', '.join(el['base_point'])})"
        )
    lines.append("  covering relations: " + " ".join(f"{i}<{j}" for i, j in covers))
    return {"elements": elements, "covers": covers}, lines


def _poset_dot(rs: RootSystem, args) -> str:
    poset, elements, covers = _poset_payload(rs, args)
    out = ["digraph layers {"]
    for i, el in enumerate(elements):
        label = f"{el['theta_type']}@{el['dim']}"
        out.append(f'  n{i} [label="{label}"];')
    for i, j in covers:
        out.append(f"  n{i} -> n{j};")
    out.append("}")
    return "\n".join(out) + "\n"


def _verify_checks(rs: RootSystem, args):
    """Yield (name, status, detail) rows; status in ok/mismatch/skipped."""

    def run(name, fn):
        try:
            detail = fn()
            return (name, "ok", detail or "")
        except CapabilityError as exc:
            return (name, "skipped", str(exc))
        except AssertionError as exc:
            return (name, "mismatch", str(exc))

    checks = []

    def degree_identity():
        for sym in rs.factors:
            res = layers.verify_degree_identity(build((sym,)))
            assert res.holds, f"{sym}: sum = {res.total}"
        return "sum over vertices equals 1 for every factor"

    checks.append(run("degree_identity", degree_identity))

    def euler():
        value = layers.euler_characteristic(rs)
        return f"both routes give {value}"

    checks.append(run("euler_characteristic", euler))

    def poincare_routes():
        poly = layers.poincare(rs, "both")
        assert poly(0) == 1, "constant term is not 1"
        return f"routes agree: {poly}"

    checks.append(run("poincare_routes", poincare_routes))

    def points_oracle():
        group = weyl.WeylGroup(rs, max_order=args.max_group_order)
        pts = oracle.brute_points(rs, max_rank=args.brute_rank, group=group)
        formula = layers.count_points(rs)
        assert len(pts) == formula, f"brute {len(pts)} != formula {formula}"
        brute_multiset = sorted((p.phi_type, p.stabilizer_order, p.wz_stabilizer_order) for p in pts)
        expected = []
        for sym_records in _factor_orbit_tables(rs):
            expected = _combine_orbit_tables(expected, sym_records)
        expected_multiset = sorted(
            (t, s, ws) for (t, s, ws, size) in expected for _ in range(size)
        )
        assert brute_multiset == expected_multiset, "type/stabilizer multisets differ"
        return f"{formula} points; types and stabilizers match"

    checks.append(run("points_oracle", points_oracle))

    def components():
        total = 0
        for d in range(rs.rank + 1):
            fam = subsys.enumerate_complete(rs, d)
            for th in fam.members:
                cc = oracle.component_count(rs, th)
                nt = layers.n_theta(rs, th)
                cp = layers.count_points_of_type(th.type)
                assert cc * nt == cp, (
                    f"theta {format_type(th.type)}: components {cc} != {cp}/{nt}"
                )
                total += 1
        return f"{total} tangent subsystems checked"

    checks.append(run("component_counts", components))

    def poset_grading():
        poset = oracle.build_poset(rs, max_rank=args.poset_rank)
        for d in range(rs.rank + 1):
            expected = layers.count_layers(rs, d)
            actual = sum(1 for el in poset.elements if el.dimension == d)
            assert actual == expected, f"d={d}: poset {actual} != census {expected}"
        return f"graded poset with {len(poset.elements)} layers"

    checks.append(run("poset_grading", poset_grading))

    def iwahori_matsumoto():
        for sym in rs.factors:
            frs = build((sym,))
            group = weyl.WeylGroup(frs, max_order=args.max_group_order)
            wz = weyl.center_subgroup(group)
            assert len(wz) == type_invariants(frs.factors).center_order, str(sym)
            _, aut_orbits = diagram_automorphisms(affine_diagram(frs))
            wz_orbits = _perm_orbits([e.diagram_perm for e in wz], frs.rank + 1)
            assert set(aut_orbits) == set(wz_orbits), f"{sym}: orbit mismatch"
        return "z_p.alpha_0 = alpha_p, |W_Z| = |Z|, W_Z orbits = Aut orbits"

    checks.append(run("iwahori_matsumoto", iwahori_matsumoto))
    return checks


def _perm_orbits(perms: Sequence[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    orbits = []
    for v in range(n):
        if v in seen:
            continue
        orbit = {v}
        queue = [v]
        while queue:
            x = queue.pop()
            for p in perms:
                y = p[x]
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        orbits.append(tuple(sorted(orbit)))
        seen |= orbit
    return orbits


def _factor_orbit_tables(rs: RootSystem):
    """Per factor: rows (type, |W_p|, |W_p| * |Stab_{W_Z} p|, orbit size)."""
    for sym in rs.factors:
        frs = build((sym,))
        group = weyl.WeylGroup(frs)
        wz = weyl.center_subgroup(group)
        wz_orbits = _perm_orbits([e.diagram_perm for e in wz], frs.rank + 1)
        rows = []
        for rec in layers.point_orbits(frs):
            orbit = next(o for o in wz_orbits if rec.vertex in o)
            wz_stab = len(wz) // len(orbit)
            rows.append(
                (rec.point_type, rec.stabilizer_order, rec.stabilizer_order * wz_stab, rec.orbit_size)
            )
        yield rows


def _combine_orbit_tables(acc, rows):
    if not acc:
        return [r for r in rows]
    out = []
    for (t1, s1, ws1, size1) in acc:
        for (t2, s2, ws2, size2) in rows:
            out.append((tuple(sorted(t1 + t2)), s1 * s2, ws1 * ws2, size1 * size2))
    return out


def _cmd_verify(rs: RootSystem, args) -> tuple[dict, list[str], int]:
    checks = _verify_checks(rs, args)
    lines = [f"type {format_type(rs.factors)}: verification suite"]
    for name, status, detail in checks:
        lines.append(f"  {name}: {status}" + (f" ({detail})" if detail else ""))
    results = {
        "checks": [
            {"name": n, "status": s, "detail": d} for n, s, d in checks
        ]
    }
    status = EXIT_MISMATCH if any(s == "mismatch" for _, s, _ in checks) else EXIT_OK
    return results, lines, status


# -- dispatch -----------------------------------------------------------------


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE

    if args.format not in _FORMATS[args.command]:
        sys.stderr.write(
            f"error: format {args.format!r} is not available for {args.command!r}\n"
        )
        return EXIT_USAGE
    if min(args.max_group_order, args.brute_rank, args.poset_rank) < 1:
        sys.stderr.write("error: capability bounds must be positive\n")
        return EXIT_USAGE

    try:
        rs = build(parse_type(args.type))
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE

    status = EXIT_OK
    try:
        if args.command == "poset" and args.format == "dot":
            _emit(_poset_dot(rs, args), args.out)
            return EXIT_OK
        if args.command == "census" and args.format == "csv":
            buf = io.StringIO()
            writer = csv.DictWriter(
                buf,
                fieldnames=["dim", "theta_type", "theta_orbit_size", "n_theta", "phi_c_type", "count"],
                lineterminator="\n",
            )
            writer.writeheader()
            for row in _census_rows(rs):
                writer.writerow(row)
            _emit(buf.getvalue(), args.out)
            return EXIT_OK

        handlers = {
            "points": _cmd_points,
            "layers": _cmd_layers,
            "census": _cmd_census,
            "poincare": _cmd_poincare,
            "euler": _cmd_euler,
            "identity": _cmd_identity,
            "poset": _cmd_poset,
        }
        if args.command == "verify":
            results, lines, status = _cmd_verify(rs, args)
        else:
            results, lines = handlers[args.command](rs, args)
        if args.format == "json":
            _emit(_json_payload(rs, args.command, results), args.out)
        else:
            _emit("\n".join(lines) + "\n", args.out)
        return status
    except CapabilityError as exc:
        sys.stderr.write(f"capability: {exc}\n")
        return EXIT_CAPABILITY
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
