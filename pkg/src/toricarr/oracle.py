"""Independent brute-force verification of the counting formulas.

Torsion points of the torus are enumerated on an exact grid whose modulus
comes from the finite-order bound on arrangement points (the marks of the
affine diagram times the exponent of the center, both computed from
lattice data, not tables).  Everything is exact integer/rational
arithmetic; set equality against the formula route is zero-tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import lcm
from typing import Optional

from . import intlat
from .errors import CapabilityError
from .rootsys import RootSystem, TypeSymbol, build, type_invariants, center_exponent
from .subsys import Subsystem, enumerate_complete, make_subsystem
from .weyl import WeylGroup

DEFAULT_BRUTE_RANK = 4
DEFAULT_POSET_RANK = 3

TorusPoint = tuple[Fraction, ...]


@lru_cache(maxsize=None)
def order_bound(factors: tuple[TypeSymbol, ...]) -> int:
    """Grid modulus M: every point of C_0 has order dividing M.

    Per irreducible factor: a point t induces an automorphism of order
    a_p for some vertex p, so t^{a_p} is central and
    ord(t) | a_p * exp(Z).  M is the lcm over factors of
    lcm(marks) * exp(Z).
    """
    m = 1
    for sym in factors:
        rs = build((sym,))
        m = lcm(m, lcm(*rs.marks) * center_exponent(sym))
    return m


@dataclass(frozen=True)
class BrutePoint:
    point: TorusPoint
    phi_type: tuple[TypeSymbol, ...]
    stabilizer_order: int
    wz_stabilizer_order: int


def _pairing_vectors(rs: RootSystem) -> list[tuple[int, ...]]:
    """For each positive root, its values on the simple coroots."""
    return [
        tuple(rs.pairing(r, k) for k in range(rs.rank)) for r in rs.positive_roots
    ]


def _center_grid_vectors(rs: RootSystem, m: int) -> list[tuple[int, ...]]:
    """Coweight representatives of Z(Phi) as grid vectors mod m."""
    ct = [[rs.cartan[k][j] for j in range(rs.rank)] for k in range(rs.rank)]
    ct = [list(col) for col in zip(*ct)]  # transpose: rows index alpha_j
    snf = intlat.smith_normal_form(ct)
    divisors = snf.divisors
    rinv = intlat.invert_unimodular(snf.right)
    # Lambda = (C^T)^{-1} Z^n; elements: V @ y with y_i in (1/d_i)Z.
    out = []
    ranges = [range(d) for d in divisors]
    for combo in iproduct(*ranges):
        vec = [0] * rs.rank
        for i, (j, d) in enumerate(zip(combo, divisors)):
            if m % d:
                raise AssertionError("center exponent does not divide the grid modulus")
            step = j * (m // d)
            for k in range(rs.rank):
                vec[k] += snf.right[k][i] * step
        out.append(tuple(x % m for x in vec))
    assert len(out) == type_invariants(rs.factors).center_order
    return out


_brute_cache: dict = {}


def brute_points(
    rs: RootSystem,
    *,
    max_rank: int = DEFAULT_BRUTE_RANK,
    group: Optional[WeylGroup] = None,
) -> tuple[BrutePoint, ...]:
    """All points of the arrangement by exhaustive grid scan.

    Returns one record per point with the type of its vanishing subsystem,
    its stabilizer order in W, and its stabilizer order in W x Z.
    """
    n = rs.rank
    if n > max_rank:
        raise CapabilityError(f"rank {n} exceeds brute-force bound brute_rank={max_rank}")
    cache_key = (rs, max_rank) if group is None else None
    if cache_key in _brute_cache:
        return _brute_cache[cache_key]
    m = order_bound(rs.factors)
    pair_vecs = _pairing_vectors(rs)
    hits = []
    for cand in iproduct(range(m), repeat=n):
        vanishing = [
            i for i, u in enumerate(pair_vecs)
            if sum(x * y for x, y in zip(u, cand)) % m == 0
        ]
        if len(vanishing) < n:
            continue
        if intlat.rational_rank([rs.all_roots[i] for i in vanishing]) == n:
            hits.append((cand, vanishing))
    group = group or WeylGroup(rs)
    matrices = group.element_matrices()
    centers = _center_grid_vectors(rs, m)
    records = []
    for cand, vanishing in hits:
        sub = make_subsystem(rs, vanishing)
        images = [
            tuple(sum(row[k] * cand[k] for k in range(n)) % m for row in mat)
            for mat in matrices
        ]
        stab = sum(1 for img in images if img == cand)
        orbit = set(images)
        shifts = sum(
            1 for z in centers
            if tuple((c - zc) % m for c, zc in zip(cand, z)) in orbit
        )
        records.append(
            BrutePoint(
                point=tuple(Fraction(c, m) for c in cand),
                phi_type=sub.type,
                stabilizer_order=stab,
                wz_stabilizer_order=stab * shifts,
            )
        )
    records.sort(key=lambda r: r.point)
    out = tuple(records)
    if cache_key is not None:
        _brute_cache[cache_key] = out
    return out


# -- counting layers tangent to one subsystem ---------------------------------


@dataclass(frozen=True)
class _QuotientArrangement:
    """The arrangement of theta on the quotient torus D' = d/R^Phi(Theta)."""

    gamma: tuple[tuple[int, ...], ...]       # functional matrix, rows = theta simples
    r_basis: tuple[tuple[int, ...], ...]     # HNF basis of R^Phi(Theta)
    theta_coords: tuple[tuple[int, ...], ...]  # positive roots of theta in its simple basis
    modulus: int


def _quotient_arrangement(rs: RootSystem, theta: Subsystem) -> _QuotientArrangement:
    gamma = tuple(
        tuple(rs.pairing(rs.all_roots[i], k) for k in range(rs.rank))
        for i in theta.simples
    )
    r_basis = intlat.hermite_normal_form(list(zip(*gamma)))
    simple_rows = [rs.all_roots[i] for i in theta.simples]
    cols = list(zip(*simple_rows))
    coords = []
    for i in theta.roots:
        if i >= rs.n_positive:
            continue
        sol = intlat.solve_rational(cols, rs.all_roots[i])
        if sol is None or any(c.denominator != 1 for c in sol):
            raise AssertionError("theta root not integral over its simple system")
        coords.append(tuple(int(c) for c in sol))
    return _QuotientArrangement(
        gamma=gamma,
        r_basis=r_basis,
        theta_coords=tuple(coords),
        modulus=order_bound(theta.type),
    )


def _quotient_points(qa: _QuotientArrangement) -> list[tuple[int, ...]]:
    """Grid coordinates (in the R-basis, units of 1/modulus) of the points."""
    rank = len(qa.gamma)
    if rank == 0:
        return [()]
    m = qa.modulus
    # Functional coordinates of the k-th grid candidate: (k @ r_basis) / m.
    pts = []
    for combo in iproduct(range(m), repeat=rank):
        func = [
            sum(combo[i] * qa.r_basis[i][j] for i in range(rank))
            for j in range(rank)
        ]
        vanishing = [
            c for c in qa.theta_coords
            if sum(x * y for x, y in zip(c, func)) % m == 0
        ]
        if len(vanishing) < rank:
            continue
        if intlat.rational_rank(vanishing) == rank:
            pts.append(combo)
    return pts


def component_count(rs: RootSystem, theta: Subsystem) -> int:
    """|C^Phi_Theta|: layers whose tangent subsystem completes to theta.

    Counted directly as the 0-dimensional layers of theta's arrangement on
    the quotient torus with lattice R^Phi(Theta) -- independent of both the
    point-count formula and the n_theta index computation.
    """
    if not theta.complete:
        raise ValueError("component_count requires a complete subsystem")
    return len(_quotient_points(_quotient_arrangement(rs, theta)))


# -- the explicit layer poset --------------------------------------------------


@dataclass(frozen=True)
class ExplicitLayer:
    theta: Subsystem
    base_point: TorusPoint
    dimension: int


@dataclass(frozen=True)
class LayerPoset:
    """Layers of the arrangement ordered by inclusion (C' <= C iff C' ⊆ C)."""

    elements: tuple[ExplicitLayer, ...]
    relation: frozenset  # pairs (i, j) with element i <= element j

    def levels(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for el in self.elements:
            out[el.dimension] = out.get(el.dimension, 0) + 1
        return out

    def covers(self) -> tuple[tuple[int, int], ...]:
        strict = {(i, j) for (i, j) in self.relation if i != j}
        out = []
        for (i, j) in sorted(strict):
            if not any((i, k) in strict and (k, j) in strict for k in range(len(self.elements))):
                out.append((i, j))
        return tuple(out)


def _layer_leq(
    rs: RootSystem,
    lower: ExplicitLayer,
    upper: ExplicitLayer,
    qa_upper: _QuotientArrangement,
) -> bool:
    """Whether `lower` is contained in `upper`."""
    if lower.dimension > upper.dimension:
        return False
    checker = intlat.SpanChecker(lower.theta.span_basis)
    for row in upper.theta.span_basis:
        if not checker.contains(row):
            return False
    diff = [a - b for a, b in zip(lower.base_point, upper.base_point)]
    image = [
        sum(g * x for g, x in zip(row, diff)) for row in qa_upper.gamma
    ]
    if any(v.denominator != 1 for v in image):
        return False
    return intlat.in_lattice(qa_upper.r_basis, [int(v) for v in image])


def build_poset(rs: RootSystem, *, max_rank: int = DEFAULT_POSET_RANK) -> LayerPoset:
    """Every layer of the arrangement, with the full order relation.

    Each layer is a fiber of the projection onto the quotient torus of its
    tangent subsystem; the base point is the lexicographically minimal
    grid point of the layer.
    """
    n = rs.rank
    if n > max_rank:
        raise CapabilityError(f"rank {n} exceeds poset bound poset_rank={max_rank}")
    m = order_bound(rs.factors)
    grid = [
        tuple(Fraction(c, m) for c in cand) for cand in iproduct(range(m), repeat=n)
    ]
    elements: list[ExplicitLayer] = []
    arrangements: list[_QuotientArrangement] = []
    for d in range(n + 1):
        family = enumerate_complete(rs, d)
        for theta in family.members:
            qa = _quotient_arrangement(rs, theta)
            rank = len(qa.gamma)
            for combo in _quotient_points(qa):
                func = [
                    Fraction(
                        sum(combo[i] * qa.r_basis[i][j] for i in range(rank)),
                        qa.modulus,
                    )
                    for j in range(rank)
                ]
                base = None
                for cand in grid:
                    image = [
                        sum(g * x for g, x in zip(row, cand)) for row in qa.gamma
                    ]
                    diff = [a - b for a, b in zip(image, func)]
                    if any(v.denominator != 1 for v in diff):
                        continue
                    if intlat.in_lattice(qa.r_basis, [int(v) for v in diff]):
                        base = cand
                        break
                if base is None:
                    raise AssertionError("layer contains no grid point")
                elements.append(ExplicitLayer(theta=theta, base_point=base, dimension=d))
                arrangements.append(qa)
    order = sorted(
        range(len(elements)),
        key=lambda i: (
            elements[i].dimension,
            elements[i].theta.span_basis,
            elements[i].base_point,
        ),
    )
    elements = [elements[i] for i in order]
    arrangements = [arrangements[i] for i in order]
    relation = set()
    for i, lower in enumerate(elements):
        for j, upper in enumerate(elements):
            if _layer_leq(rs, lower, upper, arrangements[j]):
                relation.add((i, j))
    return LayerPoset(elements=tuple(elements), relation=frozenset(relation))
