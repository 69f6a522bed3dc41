"""Crystallographic root systems with exact integer data.

Conventions, fixed globally:
  * roots carry integer coordinates in the simple-root basis;
  * coroots carry integer coordinates in the simple-coroot basis;
  * cartan[i][j] = <alpha_j, alpha_i^vee>, so the pairing of a root with
    coordinates m against the i-th simple coroot is sum_j cartan[i][j]*m[j].

Root data is generated by closure from the Cartan matrix (root strings),
one code path for every type; the per-type coordinate models appear only
in tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod
from typing import NamedTuple, Optional, Sequence

from . import intlat

_RANK_MIN = {"A": 1, "B": 2, "C": 3, "D": 4, "E": 6, "F": 4, "G": 2}
_RANK_MAX = {"E": 8, "F": 4, "G": 2}
_ALIASES = {("B", 1): ("A", 1), ("C", 1): ("A", 1), ("C", 2): ("B", 2), ("D", 3): ("A", 3)}


@dataclass(frozen=True, order=True)
class TypeSymbol:
    """An irreducible type in canonical form (aliases already resolved)."""

    family: str
    rank: int

    def __post_init__(self):
        fam, rk = self.family, self.rank
        if fam not in _RANK_MIN:
            raise ValueError(f"unknown family {fam!r}")
        if rk < _RANK_MIN[fam] or rk > _RANK_MAX.get(fam, 10 ** 9):
            raise ValueError(f"{fam}{rk} is not a valid canonical type")

    @classmethod
    def of(cls, family: str, rank: int) -> "TypeSymbol":
        """Normalize low-rank aliases (B1, C1 -> A1; C2 -> B2; D3 -> A3)."""
        family = family.upper()
        if rank < 1:
            raise ValueError(f"rank must be positive, got {family}{rank}")
        family, rank = _ALIASES.get((family, rank), (family, rank))
        return cls(family, rank)

    def __str__(self):
        return f"{self.family}{self.rank}"


def parse_type(text: str) -> tuple[TypeSymbol, ...]:
    """Parse a type string like "F4" or "A3xA1" into canonical factors."""
    parts = re.split(r"[xX*]", text.strip())
    factors = []
    for part in parts:
        m = re.fullmatch(r"([A-Ga-g])(\d+)", part.strip())
        if not m:
            raise ValueError(f"cannot parse type {part!r} in {text!r}")
        factors.append(TypeSymbol.of(m.group(1), int(m.group(2))))
    if not factors:
        raise ValueError("empty type string")
    return tuple(sorted(factors))


def format_type(factors: Sequence[TypeSymbol]) -> str:
    """Render a product of factors ("A0" for the empty product)."""
    if not factors:
        return "A0"
    return "x".join(str(f) for f in sorted(factors))


def _cartan_matrix(sym: TypeSymbol) -> list[list[int]]:
    n = sym.rank
    c = [[2 * (i == j) for j in range(n)] for i in range(n)]

    def bond(i, j, cij=-1, cji=-1):
        # c[i][j] = <alpha_j, alpha_i^vee>
        c[i][j] = cij
        c[j][i] = cji

    fam = sym.family
    if fam in "ABCF":
        for i in range(n - 1):
            bond(i, i + 1)
        if fam == "B":
            bond(n - 2, n - 1, -1, -2)  # alpha_n short
        elif fam == "C":
            bond(n - 2, n - 1, -2, -1)  # alpha_n long
        elif fam == "F":
            bond(1, 2, -1, -2)  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
    elif fam == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif fam == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5)] + [(5, 6)] * (n >= 7) + [(6, 7)] * (n >= 8):
            bond(i, j)
        bond(1, 3)
    elif fam == "G":
        bond(0, 1, -3, -1)  # alpha_1 short
    return c


def _symmetrizer(cartan: Sequence[Sequence[int]]) -> list[int]:
    """Positive integers d with d[i]*c[i][j] == d[j]*c[j][i], gcd 1 per block."""
    n = len(cartan)
    d: list[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        comp = [start]
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if i != j and cartan[i][j] and d[j] is None:
                    # d_j = d_i * c[i][j] / c[j][i]
                    d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    comp.append(j)
                    queue.append(j)
        denom = 1
        for i in comp:
            denom = denom * d[i].denominator // gcd(denom, d[i].denominator)
        vals = [int(d[i] * denom) for i in comp]
        g = 0
        for v in vals:
            g = gcd(g, v)
        for i, v in zip(comp, vals):
            d[i] = Fraction(v // g)
    return [int(x) for x in d]


def _positive_roots(cartan: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All positive roots by closure under root strings, height by height."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    current = list(simple)
    out = list(simple)
    while current:
        nxt = set()
        for m in current:
            for i in range(n):
                pairing = sum(cartan[i][j] * m[j] for j in range(n))
                down = list(m)
                p = 0
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    up = list(m)
                    up[i] += 1
                    cand = tuple(up)
                    if cand not in found:
                        nxt.add(cand)
        found |= nxt
        current = sorted(nxt)
        out.extend(current)
    return sorted(found, key=lambda r: (sum(r), r))


class Block(NamedTuple):
    symbol: TypeSymbol
    start: int  # first coordinate index of this factor


class RootSystem:
    """A (product of) irreducible system(s); immutable after construction."""

    def __init__(self, factors: Sequence[TypeSymbol]):
        factors = tuple(sorted(factors))
        blocks = []
        cartan_rows: list[list[int]] = []
        positive: list[tuple[int, ...]] = []
        symmetrizer: list[int] = []
        pos = 0
        for sym in factors:
            blocks.append(Block(sym, pos))
            sub = _cartan_matrix(sym)
            for i, row in enumerate(sub):
                cartan_rows.append([0] * pos + row + [0] * 0)
            symmetrizer.extend(_symmetrizer(sub))
            for root in _positive_roots(sub):
                positive.append((pos, root))
            pos += sym.rank
        n = pos
        cartan = []
        for row in cartan_rows:
            cartan.append(tuple(row + [0] * (n - len(row))))
        self.factors = factors
        self.rank = n
        self.blocks = tuple(blocks)
        self.cartan = tuple(cartan)
        self.symmetrizer = tuple(symmetrizer)
        embedded = []
        for start, root in positive:
            vec = [0] * n
            for k, x in enumerate(root):
                vec[start + k] = x
            embedded.append(tuple(vec))
        self.positive_roots = tuple(sorted(embedded, key=lambda r: (sum(r), r)))
        self.all_roots = self.positive_roots + tuple(
            tuple(-x for x in r) for r in self.positive_roots
        )
        self.root_index = {r: i for i, r in enumerate(self.all_roots)}
        self.n_positive = len(self.positive_roots)
        self._check_invariants()

    def _check_invariants(self):
        expected = sum(_n_positive_roots(b.symbol) for b in self.blocks)
        if self.n_positive != expected:
            raise AssertionError(
                f"closure produced {self.n_positive} positive roots, "
                f"expected {expected} for {format_type(self.factors)}"
            )
        for sym, marks in zip(self.factors, self.marks_by_factor):
            if any(a <= 0 for a in marks):
                raise AssertionError(f"bad marks for {sym}")

    # -- basic linear data ------------------------------------------------

    def pairing(self, root: Sequence[int], i: int) -> int:
        """<root, alpha_i^vee>."""
        return sum(self.cartan[i][j] * root[j] for j in range(self.rank))

    def inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Invariant bilinear form (block-scaled to integers)."""
        total = 0
        for i in range(self.rank):
            if a[i]:
                di = self.symmetrizer[i]
                total += a[i] * di * sum(self.cartan[i][j] * b[j] for j in range(self.rank))
        return total

    def pair_roots(self, a: Sequence[int], b: Sequence[int]) -> int:
        """<a, b^vee> = 2(a,b)/(b,b) for roots a, b."""
        num = 2 * self.inner(a, b)
        den = self.inner(b, b)
        q, r = divmod(num, den)
        if r:
            raise AssertionError("non-integral Cartan pairing")
        return q

    def coroot_coords(self, root: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of root^vee in the simple-coroot basis."""
        norm = self.inner(root, root)
        out = []
        for i, m in enumerate(root):
            q, r = divmod(2 * m * self.symmetrizer[i], norm)
            if r:
                raise AssertionError("non-integral coroot coordinate")
            out.append(q)
        return tuple(out)

    def reflect(self, root: Sequence[int], i: int) -> tuple[int, ...]:
        """Simple reflection s_i applied to a root."""
        c = self.pairing(root, i)
        out = list(root)
        out[i] -= c
        return tuple(out)

    # -- per-factor data ---------------------------------------------------

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1

    @property
    def highest_roots(self) -> tuple[tuple[int, ...], ...]:
        """Highest root of each factor, embedded in the full coordinates."""
        out = []
        for block in self.blocks:
            rk = block.symbol.rank
            cand = [
                r
                for r in self.positive_roots
                if any(r[block.start + k] for k in range(rk))
            ]
            top = max(cand, key=lambda r: (sum(r), r))
            for r in cand:
                if any(x > y for x, y in zip(r, top)):
                    raise AssertionError("highest root does not dominate")
            out.append(top)
        return tuple(out)

    @property
    def marks_by_factor(self) -> tuple[tuple[int, ...], ...]:
        """Highest-root coefficients a_1..a_k of each factor."""
        out = []
        for block, top in zip(self.blocks, self.highest_roots):
            rk = block.symbol.rank
            out.append(tuple(top[block.start + k] for k in range(rk)))
        return tuple(out)

    @property
    def marks(self) -> tuple[int, ...]:
        """(a_0, a_1, .., a_n) for an irreducible system."""
        if not self.is_irreducible:
            raise ValueError("marks are per irreducible factor")
        return (1,) + self.marks_by_factor[0]

    @property
    def degrees(self) -> tuple[int, ...]:
        return type_invariants(self.factors).degrees

    @property
    def weyl_order(self) -> int:
        return type_invariants(self.factors).weyl_order

    def __repr__(self):
        return f"RootSystem({format_type(self.factors)})"


@lru_cache(maxsize=None)
def build(factors: tuple[TypeSymbol, ...] | TypeSymbol) -> RootSystem:
    """Construct (and cache) the root system of a product of types."""
    if isinstance(factors, TypeSymbol):
        factors = (factors,)
    return RootSystem(factors)


def build_str(text: str) -> RootSystem:
    return build(parse_type(text))


def _n_positive_roots(sym: TypeSymbol) -> int:
    n = sym.rank
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0),
        "F": 24,
        "G": 6,
    }[sym.family]


def degrees_of(sym: TypeSymbol) -> tuple[int, ...]:
    """Degrees of the basic Weyl-group invariants (standard tables)."""
    n = sym.rank
    fam = sym.family
    if fam == "A":
        return tuple(range(2, n + 2))
    if fam in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if fam == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    if fam == "E":
        return {6: (2, 5, 6, 8, 9, 12),
                7: (2, 6, 8, 10, 12, 14, 18),
                8: (2, 8, 12, 14, 18, 20, 24, 30)}[n]
    if fam == "F":
        return (2, 6, 8, 12)
    return (2, 6)  # G2


class TypeInvariants(NamedTuple):
    weyl_order: int
    degrees: tuple[int, ...]
    exponent_product: int
    center_order: int


@lru_cache(maxsize=None)
def type_invariants(factors: tuple[TypeSymbol, ...]) -> TypeInvariants:
    """|W|, degrees, product of exponents, |Z| for a product of types.

    The center order is the determinant of the Cartan matrix (the index of
    the coroot lattice in the coweight lattice), computed via Smith normal
    form rather than read off a table.
    """
    degrees: list[int] = []
    center = 1
    for sym in factors:
        degrees.extend(degrees_of(sym))
        center *= prod(intlat.smith_normal_form(_cartan_matrix(sym)).divisors)
    degrees.sort()
    return TypeInvariants(
        weyl_order=prod(degrees),
        degrees=tuple(degrees),
        exponent_product=prod(d - 1 for d in degrees),
        center_order=center,
    )


def center_exponent(sym: TypeSymbol) -> int:
    """Exponent of Z(Phi) for one factor: the largest elementary divisor."""
    divisors = intlat.smith_normal_form(_cartan_matrix(sym)).divisors
    return max((d for d in divisors), default=1)


# -- affine Dynkin diagrams -------------------------------------------------


@dataclass(frozen=True)
class AffineDiagram:
    """Affine diagram on vertices 0..n with marks and directed edge labels.

    Edge (u, v, a_uv, a_vu) with u < v stores a_uv = |<alpha_u, alpha_v^vee>|
    and a_vu = |<alpha_v, alpha_u^vee>|; an arrow points from the long root
    toward the short one (a_uv > a_vu means u is longer than v).
    """

    n: int
    marks: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]

    @property
    def vertices(self) -> range:
        return range(self.n + 1)

    def edge_label(self, u: int, v: int) -> tuple[int, int]:
        if u > v:
            a = self.edge_label(v, u)
            return (a[1], a[0])
        for (x, y, a, b) in self.edges:
            if (x, y) == (u, v):
                return (a, b)
        return (0, 0)

    def neighbors(self, u: int) -> list[int]:
        out = []
        for (x, y, _, _) in self.edges:
            if x == u:
                out.append(y)
            elif y == u:
                out.append(x)
        return sorted(out)


def affine_diagram(rs: RootSystem) -> AffineDiagram:
    """Extend the Dynkin diagram of an irreducible system by the lowest root."""
    if not rs.is_irreducible:
        raise ValueError("affine diagrams are per irreducible factor")
    theta = rs.highest_roots[0]
    extended = [tuple(-x for x in theta)] + [
        tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)
    ]
    edges = []
    for u in range(rs.rank + 1):
        for v in range(u + 1, rs.rank + 1):
            auv = abs(rs.pair_roots(extended[u], extended[v]))
            avu = abs(rs.pair_roots(extended[v], extended[u]))
            if auv:
                edges.append((u, v, auv, avu))
    return AffineDiagram(n=rs.rank, marks=rs.marks, edges=tuple(edges))


def delete_vertex(diagram: AffineDiagram, p: int) -> tuple[TypeSymbol, ...]:
    """Type of the subdiagram left after removing vertex p."""
    if p not in diagram.vertices:
        raise ValueError(f"vertex {p} not in diagram")
    vertices = [v for v in diagram.vertices if v != p]
    labels = {}
    for (u, v, a, b) in diagram.edges:
        if u != p and v != p:
            labels[(u, v)] = (a, b)
    return classify_dynkin(vertices, labels)


def classify_dynkin(
    vertices: Sequence, labels: dict
) -> tuple[TypeSymbol, ...]:
    """Identify a labeled Dynkin graph as a product of irreducible types.

    `labels` maps ordered pairs (u, v) (one orientation per edge) to
    (|<alpha_u, alpha_v^vee>|, |<alpha_v, alpha_u^vee>|).
    """
    adj: dict = {v: [] for v in vertices}
    for (u, v), (a, b) in labels.items():
        adj[u].append((v, a, b))
        adj[v].append((u, b, a))
    seen = set()
    out = []
    for v in vertices:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        queue = [v]
        while queue:
            x = queue.pop()
            for (y, _, _) in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(_classify_component(comp, adj))
    return tuple(sorted(out))


def _classify_component(comp: Sequence, adj: dict) -> TypeSymbol:
    k = len(comp)
    if k == 1:
        return TypeSymbol("A", 1)
    degree = {v: len(adj[v]) for v in comp}
    edges = []
    for v in comp:
        for (w, a, b) in adj[v]:
            if (w, v) not in [(x, y) for (x, y, _, _) in edges]:
                edges.append((v, w, a, b))
    if len(edges) != k - 1:
        raise ValueError("graph is not a tree: not a finite Dynkin diagram")
    multi = [(v, w, a, b) for (v, w, a, b) in edges if (a, b) != (1, 1)]
    if not multi:
        if all(d <= 2 for d in degree.values()):
            return TypeSymbol("A", k)
        branches = [v for v in comp if degree[v] == 3]
        if len(branches) != 1 or any(d > 3 for d in degree.values()):
            raise ValueError("not a finite Dynkin diagram")
        b = branches[0]
        arms = []
        for (w, _, _) in adj[b]:
            length = 1
            prev, cur = b, w
            while degree[cur] == 2:
                nxt = next(x for (x, _, _) in adj[cur] if x != prev)
                prev, cur = cur, nxt
                length += 1
            arms.append(length)
        arms.sort()
        if arms[:2] == [1, 1]:
            return TypeSymbol("D", k)
        if arms == [1, 2, 2]:
            return TypeSymbol("E", 6)
        if arms == [1, 2, 3]:
            return TypeSymbol("E", 7)
        if arms == [1, 2, 4]:
            return TypeSymbol("E", 8)
        raise ValueError("not a finite Dynkin diagram")
    if len(multi) != 1 or any(d > 2 for d in degree.values()):
        raise ValueError("not a finite Dynkin diagram")
    v, w, a, b = multi[0]
    if sorted((a, b)) == [1, 3]:
        if k != 2:
            raise ValueError("triple bond only occurs in G2")
        return TypeSymbol("G", 2)
    if sorted((a, b)) != [1, 2]:
        raise ValueError(f"unrecognized bond {(a, b)}")
    if k == 2:
        return TypeSymbol("B", 2)  # canonical alias of C2
    # Chain with one double bond: B/C when at an end, F4 in the middle.
    ends = {v: degree[v] == 1, w: degree[w] == 1}
    if not any(ends.values()):
        if k == 4:
            return TypeSymbol("F", 4)
        raise ValueError("interior double bond only occurs in F4")
    if all(ends.values()):
        return TypeSymbol("B", 2)
    endpoint = v if ends[v] else w
    # a = |<alpha_v, alpha_w^vee>|; a == 2 means v is the long root.
    endpoint_long = (endpoint == v and a == 2) or (endpoint == w and b == 2)
    return TypeSymbol("C" if endpoint_long else "B", k)


def diagram_automorphisms(
    diagram: AffineDiagram,
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """All mark- and label-preserving vertex permutations, plus their orbits Q."""
    verts = list(diagram.vertices)
    invariant = {}
    for v in verts:
        inc = sorted(
            (diagram.edge_label(v, w) + (diagram.marks[w],)) for w in diagram.neighbors(v)
        )
        invariant[v] = (diagram.marks[v], tuple(inc))
    autos = []
    image: dict[int, int] = {}
    used = set()

    def extend(i):
        if i == len(verts):
            autos.append(tuple(image[v] for v in verts))
            return
        v = verts[i]
        for w in verts:
            if w in used or invariant[v] != invariant[w]:
                continue
            ok = True
            for u in verts[:i]:
                if diagram.edge_label(v, u) != diagram.edge_label(w, image[u]):
                    ok = False
                    break
            if ok:
                image[v] = w
                used.add(w)
                extend(i + 1)
                used.remove(w)
                del image[v]

    extend(0)
    seen = set()
    orbits = []
    for v in verts:
        if v in seen:
            continue
        orb = sorted({a[v] for a in autos})
        orbits.append(tuple(orb))
        seen.update(orb)
    return tuple(sorted(autos)), tuple(orbits)
