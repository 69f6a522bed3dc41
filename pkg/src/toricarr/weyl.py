"""The Weyl group as a permutation group on the full root set.

Elements are tuples of root-index images (positives first, then their
negatives), composed as functions: compose(a, b)[x] = a[b[x]].  The
linear action on simple-coroot coordinates is derived on demand for
torus points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import CapabilityError
from .rootsys import RootSystem, type_invariants

DEFAULT_MAX_GROUP_ORDER = 60000

Perm = tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class WeylGroup:
    """Weyl group of a root system, generated by the simple reflections."""

    def __init__(self, rs: RootSystem, max_order: int = DEFAULT_MAX_GROUP_ORDER):
        self.rs = rs
        self.max_order = max_order
        self.order = type_invariants(rs.factors).weyl_order
        n2 = len(rs.all_roots)
        self.identity: Perm = tuple(range(n2))
        self.gens = tuple(self.simple_reflection(i) for i in range(rs.rank))
        self._elements: Optional[tuple[Perm, ...]] = None
        self._simple_idx = tuple(rs.root_index[tuple(int(i == j) for j in range(rs.rank))]
                                 for i in range(rs.rank))
        self._coroot_table = tuple(rs.coroot_coords(r) for r in rs.all_roots)

    def simple_reflection(self, i: int) -> Perm:
        if not 0 <= i < self.rs.rank:
            raise IndexError(f"simple reflection index {i} out of range")
        rs = self.rs
        return tuple(rs.root_index[rs.reflect(r, i)] for r in rs.all_roots)

    def elements(self) -> tuple[Perm, ...]:
        """Full enumeration in shortlex order over generator words."""
        if self._elements is None:
            if self.order > self.max_order:
                raise CapabilityError(
                    f"|W| = {self.order} exceeds max_group_order={self.max_order}"
                )
            seen = {self.identity}
            frontier = [self.identity]
            out = [self.identity]
            while frontier:
                nxt = []
                for w in frontier:
                    for g in self.gens:
                        v = compose(w, g)
                        if v not in seen:
                            seen.add(v)
                            nxt.append(v)
                out.extend(nxt)
                frontier = nxt
            assert len(out) == self.order
            self._elements = tuple(out)
        return self._elements

    def is_positive_image(self, w: Perm, i: int) -> bool:
        """Whether w sends the i-th simple root to a positive root."""
        return w[self._simple_idx[i]] < self.rs.n_positive

    def coroot_matrix(self, w: Perm) -> tuple[tuple[int, ...], ...]:
        """Matrix of w on simple-coroot coordinates (columns = images)."""
        n = self.rs.rank
        cols = [self._coroot_table[w[self._simple_idx[k]]] for k in range(n)]
        return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))

    def element_matrices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Coroot matrices of every element, in enumeration order."""
        if not hasattr(self, "_matrices"):
            self._matrices = tuple(self.coroot_matrix(w) for w in self.elements())
        return self._matrices

    def act_point(self, w: Perm, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Action on a torus point in simple-coroot coordinates, mod 1."""
        m = self.coroot_matrix(w)
        return tuple(
            (sum(m[i][k] * point[k] for k in range(self.rs.rank))) % 1
            for i in range(self.rs.rank)
        )


@dataclass(frozen=True)
class OrbitStabilizer:
    orbit_size: int
    stabilizer_order: int
    stabilizer_generators: tuple[Perm, ...]


def orbit_and_stabilizer(
    group: WeylGroup, obj: Union[frozenset, tuple]
) -> OrbitStabilizer:
    """Orbit size and stabilizer data for a root-index set or a torus point.

    The stabilizer generators are the (deduplicated) Schreier generators of
    the orbit traversal; the stabilizer order comes from orbit-stabilizer.
    """
    if isinstance(obj, frozenset):
        def act(g: Perm, x):
            return frozenset(g[i] for i in x)
    elif isinstance(obj, tuple):
        def act(g: Perm, x):
            return group.act_point(g, x)
    else:
        raise TypeError(f"cannot act on {type(obj).__name__}")
    transversal = {obj: group.identity}
    queue = [obj]
    schreier = set()
    while queue:
        x = queue.pop(0)
        for g in group.gens:
            y = act(g, x)
            if y not in transversal:
                transversal[y] = compose(g, transversal[x])
                queue.append(y)
                if len(transversal) > group.max_order:
                    raise CapabilityError(
                        f"orbit exceeds max_group_order={group.max_order}"
                    )
            else:
                sg = compose(invert(transversal[y]), compose(g, transversal[x]))
                if sg != group.identity:
                    schreier.add(sg)
    size = len(transversal)
    if group.order % size:
        raise AssertionError("orbit size does not divide |W|")
    return OrbitStabilizer(size, group.order // size, tuple(sorted(schreier)))


def longest_element(group: WeylGroup, p: Optional[int] = None) -> Perm:
    """Longest element of W, or of the parabolic omitting vertex p (1-based).

    Built by greedy length ascent (w -> w s_i whenever w.alpha_i > 0), which
    needs no group enumeration.
    """
    skip = None if p is None else p - 1
    if skip is not None and not 0 <= skip < group.rs.rank:
        raise IndexError(f"parabolic vertex {p} out of range")
    w = group.identity
    while True:
        for i in range(group.rs.rank):
            if i != skip and group.is_positive_image(w, i):
                w = compose(w, group.gens[i])
                break
        else:
            return w


@dataclass(frozen=True)
class CenterElement:
    """One element of the Iwahori-Matsumoto subgroup W_Z.

    `vertex` is the affine vertex p the element sends vertex 0 to (the
    identity carries vertex 0); `diagram_perm` is the induced permutation
    of the affine vertices 0..n.
    """

    vertex: int
    perm: Perm
    diagram_perm: tuple[int, ...]


def center_subgroup(group: WeylGroup) -> tuple[CenterElement, ...]:
    """W_Z = {1} u {w_0^p w_0 : a_p = 1}, with induced diagram action.

    Verifies z_p . alpha_0 = alpha_p on construction.
    """
    rs = group.rs
    if not rs.is_irreducible:
        raise ValueError("W_Z is defined per irreducible factor")
    marks = rs.marks
    n = rs.rank
    theta = rs.highest_roots[0]
    lowest_idx = rs.root_index[tuple(-x for x in theta)]
    extended_idx = [lowest_idx] + [
        rs.root_index[tuple(int(i == j) for j in range(n))] for i in range(n)
    ]
    w0 = longest_element(group)
    out = [CenterElement(0, group.identity, tuple(range(n + 1)))]
    for p in range(1, n + 1):
        if marks[p] != 1:
            continue
        z = compose(longest_element(group, p), w0)
        if z[lowest_idx] != extended_idx[p]:
            raise AssertionError(f"z_{p}.alpha_0 != alpha_{p}")
        images = []
        for q in range(n + 1):
            img = z[extended_idx[q]]
            if img not in extended_idx:
                raise AssertionError("z_p does not permute the extended simple roots")
            images.append(extended_idx.index(img))
        out.append(CenterElement(p, z, tuple(images)))
    return tuple(out)


def permutation_group_order(gens: Sequence[Perm]) -> int:
    """Order of the group generated by permutations, via Schreier-Sims.

    A strong generator stored at level j fixes the first j base points and
    therefore belongs to the generating set of every level <= j; levels are
    verified bottom-up, re-descending whenever a new generator is added.
    """
    gens = [g for g in gens if g != tuple(range(len(g)))]
    if not gens:
        return 1
    deg = len(gens[0])
    identity = tuple(range(deg))
    bases: list[int] = []
    stored: list[list[Perm]] = []
    transversals: list[dict[int, Perm]] = []

    def effective(level: int) -> list[Perm]:
        return [g for j in range(level, len(stored)) for g in stored[j]]

    def recompute(level: int) -> None:
        t = {bases[level]: identity}
        queue = [bases[level]]
        gl = effective(level)
        while queue:
            x = queue.pop()
            for g in gl:
                y = g[x]
                if y not in t:
                    t[y] = compose(g, t[x])
                    queue.append(y)
        transversals[level] = t

    def strip(g: Perm, level: int) -> tuple[Perm, int]:
        for i in range(level, len(bases)):
            x = g[bases[i]]
            if x not in transversals[i]:
                return g, i
            g = compose(invert(transversals[i][x]), g)
        return g, len(bases)

    def register(g: Perm, level: int) -> None:
        if level == len(bases):
            b = next(i for i in range(deg) if g[i] != i)
            bases.append(b)
            stored.append([])
            transversals.append({b: identity})
        stored[level].append(g)
        for j in range(level + 1):
            recompute(j)

    for g in gens:
        rem, lvl = strip(g, 0)
        if rem != identity:
            register(rem, lvl)

    level = len(bases) - 1
    while level >= 0:
        failure = None
        t = transversals[level]
        gl = effective(level)
        for x in t:
            for h in gl:
                sg = compose(invert(t[h[x]]), compose(h, t[x]))
                if sg == identity:
                    continue
                rem, lvl = strip(sg, level + 1)
                if rem != identity:
                    failure = (rem, lvl)
                    break
            if failure:
                break
        if failure:
            register(*failure)
            level = failure[1]
        else:
            level -= 1
    order = 1
    for t in transversals:
        order *= len(t)
    return order
