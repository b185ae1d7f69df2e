"""Exact arithmetic in finite abelian groups and in subgroups of K + Z.

A finite abelian group K is given by a tuple of cyclic factor moduli;
elements are residue vectors.  Subgroups of the rank-1 group K + Z are
kept in a canonical form (enumerated finite part plus one infinite
generator) so that equal subgroups compare equal structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from math import prod
from typing import Callable, Iterable, NamedTuple

KElem = tuple[int, ...]

ENUM_BOUND = 4096


class BoundExceeded(RuntimeError):
    """An enumeration outgrew the configured bound."""


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct product of cyclic groups Z_{n_1} x ... x Z_{n_t}."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        factors = tuple(int(n) for n in self.invariant_factors)
        if any(n < 1 for n in factors):
            raise ValueError(f"factor moduli must be >= 1, got {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def zero(self) -> KElem:
        return (0,) * self.rank

    def reduce(self, x: Iterable[int]) -> KElem:
        x = tuple(x)
        if len(x) != self.rank:
            raise ValueError(
                f"element has {len(x)} coordinates, group has rank {self.rank}"
            )
        return tuple(c % n for c, n in zip(x, self.invariant_factors))


def k_add(g: FiniteAbelianGroup, x: KElem, y: KElem) -> KElem:
    if len(x) != g.rank or len(y) != g.rank:
        raise ValueError("dimension mismatch")
    return tuple((a + b) % n for a, b, n in zip(x, y, g.invariant_factors))


def k_neg(g: FiniteAbelianGroup, x: KElem) -> KElem:
    if len(x) != g.rank:
        raise ValueError("dimension mismatch")
    return tuple((-a) % n for a, n in zip(x, g.invariant_factors))


def k_sub(g: FiniteAbelianGroup, x: KElem, y: KElem) -> KElem:
    return k_add(g, x, k_neg(g, y))


def k_scale(g: FiniteAbelianGroup, c: int, x: KElem) -> KElem:
    return tuple((c * a) % n for a, n in zip(x, g.invariant_factors))


def k_order(g: FiniteAbelianGroup, x: KElem) -> int:
    acc = g.reduce(x)
    zero = g.zero()
    n = 1
    while acc != zero:
        acc = k_add(g, acc, x)
        n += 1
    return n


def k_enumerate(g: FiniteAbelianGroup, bound: int = ENUM_BOUND) -> list[KElem]:
    """All elements in lexicographic order."""
    if g.order > bound:
        raise BoundExceeded(f"group order {g.order} exceeds bound {bound}")
    return [tuple(t) for t in iproduct(*(range(n) for n in g.invariant_factors))]


class KZElem(NamedTuple):
    """Element (k, z) of K + Z; z is the infinite-order coordinate."""

    k: KElem
    z: int


def kz_reduce(g: FiniteAbelianGroup, x: KZElem) -> KZElem:
    return KZElem(g.reduce(x.k), int(x.z))


def kz_add(g: FiniteAbelianGroup, x: KZElem, y: KZElem) -> KZElem:
    return KZElem(k_add(g, x.k, y.k), x.z + y.z)


def kz_neg(g: FiniteAbelianGroup, x: KZElem) -> KZElem:
    return KZElem(k_neg(g, x.k), -x.z)


def kz_scale(g: FiniteAbelianGroup, c: int, x: KZElem) -> KZElem:
    return KZElem(k_scale(g, c, x.k), c * x.z)


def close_subgroup(
    g: FiniteAbelianGroup, gens: Iterable[KElem], bound: int = ENUM_BOUND
) -> set[KElem]:
    """Additive closure of gens inside K (a subgroup; inverses come for free)."""
    gens = [g.reduce(x) for x in gens]
    seen = {g.zero()}
    frontier = [g.zero()]
    while frontier:
        cur = frontier.pop()
        for s in gens:
            nxt = k_add(g, cur, s)
            if nxt not in seen:
                if len(seen) >= bound:
                    raise BoundExceeded("subgroup closure exceeds bound")
                seen.add(nxt)
                frontier.append(nxt)
    return seen


@dataclass(frozen=True)
class LatticeSubgroup:
    """Canonical subgroup F + <(k_l, l)> of K + Z.

    finite_part is the full enumeration of F = {k : (k, 0) in the subgroup},
    sorted; inf_gen is the generator with minimal positive z, its K-part
    reduced to the lex-least representative of its F-coset.  Two values
    describe the same subgroup iff they are equal.
    """

    group: FiniteAbelianGroup
    finite_part: tuple[KElem, ...]
    inf_gen: KZElem | None

    @property
    def is_finite(self) -> bool:
        return self.inf_gen is None

    @property
    def finite_order(self) -> int:
        return len(self.finite_part)

    def finite_set(self) -> frozenset[KElem]:
        return frozenset(self.finite_part)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(d, u, v) with u*a + v*b = d = gcd(a, b), d >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def lattice_canonicalize(
    g: FiniteAbelianGroup, gens: Iterable[KZElem]
) -> LatticeSubgroup:
    """Canonical form of the subgroup of K + Z generated by gens.

    The z-coordinate is eliminated through an explicit extended-gcd
    combination gamma of the generators; the finite part is the closure of
    the gamma-corrected generators, which is exactly {k : (k, 0) in the
    subgroup}.
    """
    gens = [kz_reduce(g, KZElem(tuple(k), z)) for (k, z) in gens]
    with_z = [x for x in gens if x.z != 0]
    if not with_z:
        f = close_subgroup(g, [x.k for x in gens])
        return LatticeSubgroup(g, tuple(sorted(f)), None)
    gamma = with_z[0]
    for x in with_z[1:]:
        d, u, v = _ext_gcd(gamma.z, x.z)
        gamma = KZElem(
            k_add(g, k_scale(g, u, gamma.k), k_scale(g, v, x.k)), d
        )
    if gamma.z < 0:
        gamma = kz_neg(g, gamma)
    ell = gamma.z
    f_gens = [k_sub(g, x.k, k_scale(g, x.z // ell, gamma.k)) for x in gens]
    f = close_subgroup(g, f_gens)
    k_ell = min(k_add(g, gamma.k, c) for c in f)
    return LatticeSubgroup(g, tuple(sorted(f)), KZElem(k_ell, ell))


def lattice_contains(sub: LatticeSubgroup, x: KZElem) -> bool:
    g = sub.group
    x = kz_reduce(g, x)
    if sub.inf_gen is None:
        return x.z == 0 and x.k in sub.finite_set()
    k_ell, ell = sub.inf_gen
    if x.z % ell != 0:
        return False
    residue = k_sub(g, x.k, k_scale(g, x.z // ell, k_ell))
    return residue in sub.finite_set()


def lattice_gens(sub: LatticeSubgroup) -> list[KZElem]:
    """A generating set that canonicalizes back to sub."""
    out = [KZElem(k, 0) for k in sub.finite_part]
    if sub.inf_gen is not None:
        out.append(sub.inf_gen)
    return out


def lattice_full(g: FiniteAbelianGroup) -> LatticeSubgroup:
    """The whole group K + Z in canonical form."""
    return LatticeSubgroup(
        g, tuple(sorted(k_enumerate(g))), KZElem(g.zero(), 1)
    )


def lattice_is_subset(sub: LatticeSubgroup, ambient: LatticeSubgroup) -> bool:
    return all(lattice_contains(ambient, x) for x in lattice_gens(sub))


def lattice_index(sub: LatticeSubgroup, ambient: LatticeSubgroup) -> int:
    """Index of sub in ambient; raises when it is not finite."""
    if not lattice_is_subset(sub, ambient):
        raise ValueError("not a subgroup of the ambient lattice")
    if ambient.inf_gen is None:
        return ambient.finite_order // sub.finite_order
    if sub.inf_gen is None:
        raise ValueError("finite subgroup has infinite index in an infinite one")
    ell_ratio = sub.inf_gen.z // ambient.inf_gen.z
    return ell_ratio * ambient.finite_order // sub.finite_order


def quotient_cyclic_order(
    sub: LatticeSubgroup, x: KZElem, ambient: LatticeSubgroup
) -> int:
    """Smallest q >= 1 with q*x in sub, searched up to the index bound."""
    g = sub.group
    x = kz_reduce(g, x)
    if not lattice_contains(ambient, x):
        raise ValueError("element lies outside the ambient lattice")
    bound = lattice_index(sub, ambient)
    acc = x
    for q in range(1, bound + 1):
        if lattice_contains(sub, acc):
            return q
        acc = kz_add(g, acc, x)
    raise RuntimeError("no multiple landed in the subgroup within the index bound")


class Decomposition(NamedTuple):
    """A finite abelian group rebuilt as explicit cyclic coordinates."""

    group: FiniteAbelianGroup
    to_coords: dict
    from_coords: dict


def decompose_abelian(
    elements: Iterable,
    add: Callable,
    zero,
) -> Decomposition:
    """Write a finite abelian group as cyclic factors n_1 >= n_2 >= ...

    elements must be the full (sortable, hashable) carrier set; add is the
    group operation.  Splits off a maximal-order cyclic subgroup, finds a
    complement by bounded search, recurses.  Returns coordinate maps in
    both directions.
    """
    elems = sorted(set(elements))
    if zero not in elems:
        raise ValueError("carrier set misses the zero element")

    def order_of(x):
        acc = x
        n = 1
        while acc != zero:
            acc = add(acc, x)
            n += 1
            if n > len(elems):
                raise ValueError("element order exceeds carrier size; not a group?")
        return n

    def scale(c, x):
        acc = zero
        for _ in range(c):
            acc = add(acc, x)
        return acc

    def closure(gens):
        seen = {zero}
        frontier = [zero]
        while frontier:
            cur = frontier.pop()
            for s in gens:
                nxt = add(cur, s)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    if len(elems) == 1:
        triv = FiniteAbelianGroup(())
        return Decomposition(triv, {zero: ()}, {(): zero})

    orders = {x: order_of(x) for x in elems}
    n1 = max(orders.values())
    g1 = min(x for x in elems if orders[x] == n1)
    cyc = {scale(c, g1) for c in range(n1)}

    target = len(elems) // n1
    if len(elems) % n1 != 0:
        raise ValueError("carrier size not divisible by the maximal order")
    complement = None
    if target == 1:
        complement = {zero}
    else:
        nonzero = [x for x in elems if x != zero]
        for size in range(1, 5):
            for combo in combinations(nonzero, size):
                c = closure(combo)
                if len(c) == target and len(c & cyc) == 1:
                    complement = c
                    break
            if complement is not None:
                break
    if complement is None:
        raise RuntimeError("no complement found; carrier is not a finite abelian group")

    rest = decompose_abelian(sorted(complement), add, zero)
    factors = (n1,) + rest.group.invariant_factors
    group = FiniteAbelianGroup(factors)

    to_coords = {}
    from_coords = {}
    for x in elems:
        coords = None
        for e in range(n1):
            # x - e*g1, using (n1 - e)*g1 as the inverse of e*g1
            cand = add(x, scale((n1 - e) % n1, g1))
            if cand in complement:
                coords = (e,) + rest.to_coords[cand]
                break
        if coords is None:
            raise RuntimeError("element not covered by cyclic part + complement")
        to_coords[x] = coords
        from_coords[coords] = x
    return Decomposition(group, to_coords, from_coords)
