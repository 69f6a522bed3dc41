"""Counting and topology of the toric arrangement of a root system.

Points of the arrangement and their orbit structure from the affine
diagram, per-dimension layer counts through the complete-subsystem
partition, the full layer census with tangent types, Euler characteristic
and the Poincare polynomial of the complement by two independent routes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, prod, factorial
from typing import Iterable, Sequence

from . import intlat
from .rootsys import (
    RootSystem,
    TypeSymbol,
    affine_diagram,
    build,
    delete_vertex,
    diagram_automorphisms,
    type_invariants,
)
from .subsys import Subsystem, enumerate_complete, w_orbit_census
from .weyl import WeylGroup


# -- integer polynomials ----------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial in q with integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, coeffs: Iterable[int]) -> "IntPolynomial":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial.of(
            [x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)]
        )

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial.of([other * x for x in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return IntPolynomial.of(out)

    __rmul__ = __mul__

    def __call__(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                q = "q" if k == 1 else f"q^{k}"
                terms.append(q if c == 1 else f"{c}{q}")
        return " + ".join(terms).replace("+ -", "- ")


def _binomial_shift(d: int, m: int) -> IntPolynomial:
    """(q+1)^d * q^m."""
    return IntPolynomial.of([0] * m + [comb(d, k) for k in range(d + 1)])


# -- points of the arrangement ----------------------------------------------


@dataclass(frozen=True)
class PointOrbitRecord:
    """One W-orbit of 0-dimensional layers, keyed by an affine vertex."""

    vertex: int
    orbit_size: int
    point_type: tuple[TypeSymbol, ...]
    stabilizer_order: int
    aut_stabilizer_order: int
    aut_orbit: int  # index into the Aut(Gamma)-orbit list Q


@lru_cache(maxsize=None)
def _vertex_data(factors: tuple[TypeSymbol, ...]):
    """Per-vertex deletion types and |W|/|W_p| for one irreducible factor."""
    rs = build(factors)
    diag = affine_diagram(rs)
    w_order = type_invariants(factors).weyl_order
    out = []
    for p in diag.vertices:
        ptype = delete_vertex(diag, p)
        wp = type_invariants(ptype).weyl_order
        if w_order % wp:
            raise AssertionError("parabolic order does not divide |W|")
        out.append((p, ptype, wp, w_order // wp))
    return tuple(out)


@lru_cache(maxsize=None)
def point_type_multiset(factors: tuple[TypeSymbol, ...]) -> tuple[tuple[tuple[TypeSymbol, ...], int], ...]:
    """Multiset of Phi(t)-types over the points t, with multiplicities.

    Multiplicative over the irreducible factors.
    """
    combined: dict[tuple[TypeSymbol, ...], int] = {(): 1}
    for sym in factors:
        factor_counts: dict[tuple[TypeSymbol, ...], int] = {}
        for _, ptype, _, size in _vertex_data((sym,)):
            factor_counts[ptype] = factor_counts.get(ptype, 0) + size
        merged: dict[tuple[TypeSymbol, ...], int] = {}
        for t1, c1 in combined.items():
            for t2, c2 in factor_counts.items():
                key = tuple(sorted(t1 + t2))
                merged[key] = merged.get(key, 0) + c1 * c2
        combined = merged
    return tuple(sorted(combined.items()))


def count_points_of_type(factors: tuple[TypeSymbol, ...]) -> int:
    """|C_0| for a product type: sum over affine vertices of |W|/|W_p|."""
    total = 1
    for sym in factors:
        total *= sum(size for *_, size in _vertex_data((sym,)))
    return total


def count_points(rs: RootSystem) -> int:
    """Number of 0-dimensional layers (points) of the arrangement."""
    return count_points_of_type(rs.factors)


def point_orbits(rs: RootSystem) -> tuple[PointOrbitRecord, ...]:
    """W-orbits of points, one per affine vertex, grouped by Aut(Gamma)-orbit.

    Defined per irreducible system; factors of a product are handled
    independently by the callers (layers multiply).
    """
    if not rs.is_irreducible:
        raise ValueError("point_orbits is defined per irreducible factor")
    diag = affine_diagram(rs)
    autos, orbits = diagram_automorphisms(diag)
    records = []
    for p, ptype, wp, size in _vertex_data(rs.factors):
        q_index = next(i for i, orb in enumerate(orbits) if p in orb)
        aut_stab = len([a for a in autos if a[p] == p])
        records.append(
            PointOrbitRecord(
                vertex=p,
                orbit_size=size,
                point_type=ptype,
                stabilizer_order=wp,
                aut_stabilizer_order=aut_stab,
                aut_orbit=q_index,
            )
        )
    total = sum(r.orbit_size for r in records)
    by_orbit = 0
    for i, orb in enumerate(orbits):
        p = orb[0]
        by_orbit += len(orb) * next(r.orbit_size for r in records if r.vertex == p)
    if total != by_orbit:
        raise AssertionError("vertex and Q-orbit point counts disagree")
    return tuple(records)


# -- n_Theta and layer counts ------------------------------------------------


def _functional_matrix(rs: RootSystem, theta: Subsystem) -> tuple[tuple[int, ...], ...]:
    """Rows = values of theta's simple roots on the simple coroots of rs."""
    rows = []
    for i in theta.simples:
        root = rs.all_roots[i]
        rows.append(tuple(rs.pairing(root, k) for k in range(rs.rank)))
    return tuple(rows)


def restricted_coroot_lattice(
    rs: RootSystem, theta: Subsystem
) -> tuple[tuple[int, ...], ...]:
    """HNF basis of the projection of the coroot lattice of rs onto theta.

    Coordinates are functional values against theta's simple roots.
    """
    gamma = _functional_matrix(rs, theta)
    columns = list(zip(*gamma))
    return intlat.hermite_normal_form(columns)


def n_theta(rs: RootSystem, theta: Subsystem) -> int:
    """The index [R^Phi(Theta) : <Theta^vee>].

    Computed lattice-theoretically: project the coroots of rs onto the
    span of theta along its tangent space, then take the index of theta's
    own coroot lattice inside the projection.
    """
    if not theta.complete:
        raise ValueError("n_theta is defined for complete (tangent) subsystems")
    if theta.rank == 0:
        return 1
    sup = restricted_coroot_lattice(rs, theta)
    simple_coords = [rs.all_roots[i] for i in theta.simples]
    sub = []
    for i in theta.simples:
        coroot = rs.all_roots[i]
        sub.append(tuple(rs.pair_roots(g, coroot) for g in simple_coords))
    return intlat.lattice_index(sup, sub)


@dataclass(frozen=True)
class LayerClassRecord:
    """Census entry for one W-orbit of tangent subsystems."""

    dimension: int
    theta: Subsystem
    theta_type: tuple[TypeSymbol, ...]
    orbit_size: int
    n_theta: int
    layer_count: int  # layers tangent to each member of the orbit
    phi_c_types: tuple[tuple[tuple[TypeSymbol, ...], int], ...]


@lru_cache(maxsize=None)
def _census_records(rs: RootSystem, allow_e6: bool) -> tuple[LayerClassRecord, ...]:
    group = WeylGroup(rs)
    records = []
    for d in range(rs.rank + 1):
        family = enumerate_complete(rs, d, allow_e6=allow_e6)
        for orbit in w_orbit_census(rs, family, group):
            theta = orbit.representative
            nt = n_theta(rs, theta)
            types = point_type_multiset(theta.type)
            divided = []
            for ptype, count in types:
                q, r = divmod(count, nt)
                if r:
                    raise AssertionError("n_theta does not divide a point-type count")
                divided.append((ptype, q))
            layer_count = sum(c for _, c in divided)
            records.append(
                LayerClassRecord(
                    dimension=d,
                    theta=theta,
                    theta_type=theta.type,
                    orbit_size=orbit.size,
                    n_theta=nt,
                    layer_count=layer_count,
                    phi_c_types=tuple(divided),
                )
            )
    return tuple(records)


def layer_census(rs: RootSystem, *, allow_e6: bool = False) -> tuple[LayerClassRecord, ...]:
    """Full census over all dimensions, ordered canonically."""
    return _census_records(rs, allow_e6)


def count_layers(rs: RootSystem, d: int, *, allow_e6: bool = False) -> int:
    """|C_d|: number of d-dimensional layers (Cor. of the covering map)."""
    if not 0 <= d <= rs.rank:
        raise ValueError(f"dimension {d} out of range for rank {rs.rank}")
    return sum(
        r.orbit_size * r.layer_count
        for r in _census_records(rs, allow_e6)
        if r.dimension == d
    )


# -- topology of the complement ----------------------------------------------


def euler_characteristic(rs: RootSystem) -> int:
    """Euler characteristic of the set of regular points: (-1)^n |W|.

    Computed via the point-orbit sum (the only layers contributing at
    q = -1 are the points) and cross-checked against the closed form.
    """
    value = 1
    for sym in rs.factors:
        factor = 0
        for _, ptype, _, size in _vertex_data((sym,)):
            factor += size * type_invariants(ptype).exponent_product
        value *= (-1) ** sym.rank * factor
    closed = (-1) ** rs.rank * type_invariants(rs.factors).weyl_order
    if value != closed:
        raise AssertionError("point-sum and closed-form Euler characteristics differ")
    return value


@dataclass(frozen=True)
class RegularCharacterMultiple:
    """k, meaning k times the regular character of W."""

    k: int


def equivariant_euler(rs: RootSystem) -> RegularCharacterMultiple:
    """Equivariant Euler characteristic: (-1)^n times the regular character."""
    return RegularCharacterMultiple(k=(-1) ** rs.rank)


def poincare(
    rs: RootSystem, route: str = "closed", *, allow_e6: bool = False
) -> IntPolynomial:
    """Poincare polynomial of the complement.

    route="closed": sum over tangent orbits of n_theta^{-1} |W^Theta| times
    (q+1)^d q^{n-d}.  route="layers": sum over the census of the
    exponent-product of each layer's own subsystem.  route="both" computes
    the two and insists they agree.
    """
    if route not in ("closed", "layers", "both"):
        raise ValueError(f"unknown route {route!r}")
    records = _census_records(rs, allow_e6)
    n = rs.rank
    results = []
    if route in ("closed", "both"):
        total = IntPolynomial.of([])
        for d in range(n + 1):
            coeff = 0
            for r in records:
                if r.dimension != d:
                    continue
                w_theta = type_invariants(r.theta_type).weyl_order
                q, rem = divmod(r.orbit_size * w_theta, r.n_theta)
                if rem:
                    raise AssertionError("n_theta does not divide |W^Theta|")
                coeff += q
            total = total + coeff * _binomial_shift(d, n - d)
        results.append(total)
    if route in ("layers", "both"):
        total = IntPolynomial.of([])
        for r in records:
            weight = 0
            for ptype, count in r.phi_c_types:
                weight += count * type_invariants(ptype).exponent_product
            total = total + (r.orbit_size * weight) * _binomial_shift(
                r.dimension, n - r.dimension
            )
        results.append(total)
    if len(results) == 2 and results[0] != results[1]:
        raise AssertionError("closed-form and layer-sum Poincare polynomials differ")
    poly = results[0]
    if poly(0) != 1:
        raise AssertionError("Poincare polynomial has nonunit constant term")
    if poly(-1) != euler_characteristic(rs):
        raise AssertionError("Poincare polynomial disagrees with the Euler characteristic")
    return poly


def closed_form_sums(rs: RootSystem, *, allow_e6: bool = False) -> tuple[int, ...]:
    """Per-dimension coefficients sum_{K_d} n_theta^{-1} |W^Theta|."""
    records = _census_records(rs, allow_e6)
    out = []
    for d in range(rs.rank + 1):
        coeff = 0
        for r in records:
            if r.dimension == d:
                coeff += r.orbit_size * type_invariants(r.theta_type).weyl_order // r.n_theta
        out.append(coeff)
    return tuple(out)


# -- the A series by partitions ----------------------------------------------


def partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """Integer partitions of n in decreasing order, largest part first."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, maximum: int, prefix: list[int]):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, maximum), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def _b_lambda(lam: Sequence[int]) -> int:
    mult: dict[int, int] = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    return prod(factorial(i) ** b * factorial(b) for i, b in mult.items())


def a_series_census(n: int, d: int) -> tuple[int, tuple[tuple[tuple[int, ...], int], ...]]:
    """Layer count of A_{n-1} at dimension d, from partitions of n alone.

    A partition lambda with k parts describes tangent spaces of dimension
    k - 1; each contributes n! g_lambda / b_lambda layers, where g_lambda
    is the gcd of the parts.
    """
    if n < 2:
        raise ValueError("the A series starts at n = 2 (type A1)")
    breakdown = []
    total = 0
    for lam in partitions(n):
        if len(lam) != d + 1:
            continue
        g = 0
        for part in lam:
            g = gcd(g, part)
        count = factorial(n) * g // _b_lambda(lam)
        breakdown.append((lam, count))
        total += count
    return total, tuple(breakdown)


def a_series_poincare(n: int) -> IntPolynomial:
    """Poincare polynomial of the A_{n-1} complement, by partitions alone."""
    if n < 2:
        raise ValueError("the A series starts at n = 2 (type A1)")
    rank = n - 1
    total = IntPolynomial.of([])
    for lam in partitions(n):
        d = len(lam) - 1
        g = 0
        for part in lam:
            g = gcd(g, part)
        coeff = factorial(n) * g * prod(factorial(p - 1) for p in lam) // _b_lambda(lam)
        total = total + coeff * _binomial_shift(d, rank - d)
    return total


# -- the degree identity -------------------------------------------------------


@dataclass(frozen=True)
class DegreeIdentityResult:
    holds: bool
    terms: tuple[tuple[int, Fraction], ...]
    total: Fraction


def verify_degree_identity(rs: RootSystem) -> DegreeIdentityResult:
    """Exact check of sum_p P(Phi_p)/|W_p| = 1 over the affine vertices."""
    if not rs.is_irreducible:
        raise ValueError("the degree identity is per irreducible type")
    terms = []
    total = Fraction(0)
    for p, ptype, wp, _ in _vertex_data(rs.factors):
        term = Fraction(type_invariants(ptype).exponent_product, wp)
        terms.append((p, term))
        total += term
    return DegreeIdentityResult(holds=(total == 1), terms=tuple(terms), total=total)
