"""Generating sets, Cayley-graph windows, case analysis, and coset ladders."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .abelian import (
    BoundExceeded,
    kz_add,
    kz_scale,
    lattice_canonicalize,
    lattice_contains,
    lattice_full,
    lattice_index,
    quotient_cyclic_order,
)
from .group import (
    GqdElem,
    GqdGroup,
    classify_subgroup,
    generates_group,
    inv,
    mul,
    to_kza,
)


class InvalidGeneratingSet(ValueError):
    """The proposed set is not a symmetric generating set of the group."""


class NoPivotError(RuntimeError):
    """No generator can be removed while keeping the rest infinite."""


@dataclass(frozen=True)
class GenSet:
    """Sorted symmetric generating set without the identity."""

    group: GqdGroup
    gens: tuple

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, idx):
        return self.gens[idx]

    def index(self, x):
        try:
            return self.gens.index(x)
        except ValueError:
            raise KeyError(f"not a generator: {x}") from None

    def inverse_index(self, idx):
        return self.index(inv(self.group, self.gens[idx]))


def make_gen_set(G: GqdGroup, elems) -> GenSet:
    closed = set()
    for x in elems:
        x = GqdElem(G.K.reduce(x.k), x.i, x.eps % 2)
        closed.add(x)
        closed.add(inv(G, x))
    if G.identity() in closed:
        raise InvalidGeneratingSet("identity is not allowed as a generator")
    if not closed:
        raise InvalidGeneratingSet("empty generating set")
    gens = tuple(sorted(closed))
    if not generates_group(G, classify_subgroup(G, gens)):
        raise InvalidGeneratingSet(f"does not generate the group: {gens}")
    return GenSet(G, gens)


@dataclass(frozen=True, eq=False)
class CayleyWindow:
    """Ball of given word-length radius, with labeled directed edges."""

    gen_set: GenSet
    radius: int
    verts: tuple  # BFS order, sorted within each layer
    depth: dict  # elem -> word length
    edges: tuple  # (g, generator index, g * s)

    @property
    def group(self):
        return self.gen_set.group

    def vertex_set(self):
        return set(self.verts)

    def inner_ball(self, r):
        return [v for v in self.verts if self.depth[v] <= r]

    def edge_set(self):
        return {(g, h) for g, _, h in self.edges}


def build_window(G: GqdGroup, S: GenSet, radius, budget=10**6) -> CayleyWindow:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    depth = {G.identity(): 0}
    layer = [G.identity()]
    verts = [G.identity()]
    for d in range(1, radius + 1):
        frontier = set()
        for g in layer:
            for s in S:
                h = mul(G, g, s)
                if h not in depth:
                    frontier.add(h)
        layer = sorted(frontier)
        for h in layer:
            depth[h] = d
        verts.extend(layer)
        if len(verts) > budget:
            raise BoundExceeded(f"window exceeds vertex budget {budget}")
    edges = []
    for g in verts:
        for idx, s in enumerate(S.gens):
            h = mul(G, g, s)
            if h in depth:
                edges.append((g, idx, h))
    return CayleyWindow(S, radius, tuple(verts), depth, tuple(edges))


class CaseKind(Enum):
    REFLECTIONS_ONLY = "reflections-only"
    FINITE_ROTATIONS = "finite-rotations"
    INFINITE_ROTATIONS = "infinite-rotations"


@dataclass(frozen=True)
class CaseTag:
    kind: CaseKind
    s1: tuple  # generators outside K<a>
    s2: tuple  # generators inside K<a>
    rotation_lattice: object  # <S2> canonical, None when S2 empty
    pivot: GqdElem | None = None
    companion: GqdElem | None = None


def classify_case(G: GqdGroup, S: GenSet) -> CaseTag:
    s1 = tuple(x for x in S if x.eps == 1)
    s2 = tuple(x for x in S if x.eps == 0)
    if not s2:
        pivot = companion = None
        try:
            pivot, companion = choose_pivot(G, S)
        except NoPivotError:
            pass
        return CaseTag(CaseKind.REFLECTIONS_ONLY, s1, s2, None, pivot, companion)
    lat = lattice_canonicalize(G.K, [to_kza(x) for x in s2])
    kind = (CaseKind.FINITE_ROTATIONS if lat.inf_gen is None
            else CaseKind.INFINITE_ROTATIONS)
    return CaseTag(kind, s1, s2, lat)


def pivot_candidates(G: GqdGroup, S: GenSet):
    """(s, t) pairs leaving an infinite remainder, in deterministic order."""
    if any(x.eps == 0 for x in S):
        raise ValueError("pivots exist only for all-reflection generating sets")
    seen = set()
    for s in S:
        pair = frozenset((s, inv(G, s)))
        if pair in seen:
            continue
        seen.add(pair)
        rest = [x for x in S if x not in pair]
        if len({x.i for x in rest}) >= 2:
            yield s, rest[0]


def choose_pivot(G: GqdGroup, S: GenSet):
    for s, t in pivot_candidates(G, S):
        return s, t
    raise NoPivotError("every removal leaves a single rotation exponent")


@dataclass(frozen=True)
class CosetLadder:
    """K<a> partitioned as H'(ts)^0, ..., H'(ts)^m; reflections via a t-shift."""

    h_prime: object  # LatticeSubgroup
    m: int
    s: GqdElem
    t: GqdElem
    ts: GqdElem


def coset_ladder(G: GqdGroup, S: GenSet, s, t) -> CosetLadder:
    pair = (s, inv(G, s))
    rest = [x for x in S if x not in pair]
    if t not in rest:
        raise ValueError("companion must avoid the pivot pair")
    hp = lattice_canonicalize(G.K, [to_kza(mul(G, t, x)) for x in rest])
    if hp.inf_gen is None:
        raise ValueError("pivot leaves a finite subgroup")
    ts = mul(G, t, s)
    order = quotient_cyclic_order(hp, to_kza(ts), lattice_full(G.K))
    # the ts-powers must exhaust K<a>/H', not just return to H'
    if order != lattice_index(hp, lattice_full(G.K)):
        raise RuntimeError("ts does not generate the rotation quotient")
    return CosetLadder(hp, order - 1, s, t, ts)


def coset_of(G: GqdGroup, ladder: CosetLadder, g: GqdElem):
    """(ell, side) with g in H'(ts)^ell (side 0) or H'(ts)^ell t (side 1)."""
    side = g.eps
    x = mul(G, g, inv(G, ladder.t)) if side else g
    kz = to_kza(x)
    step = to_kza(ladder.ts)
    for ell in range(ladder.m + 1):
        if lattice_contains(ladder.h_prime, kz_add(G.K, kz, kz_scale(G.K, -ell, step))):
            return ell, side
    raise RuntimeError(f"coset of {g} not located; ladder inconsistent")
