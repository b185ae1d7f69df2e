"""The ambient two-ended group G = K<a><b>, parameterized by (K, beta).

K is finite abelian, a has infinite order, and b inverts K<a> by
conjugation with b^2 = beta in K (beta of order at most 2).  Elements are
kept in the unique normal form k * a^i * b^eps, stored as (k, i, eps).
Rotations are the elements with eps = 0 (the index-2 subgroup K<a>);
reflections are the coset with eps = 1.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .abelian import (
    FiniteAbelianGroup,
    KElem,
    KZElem,
    LatticeSubgroup,
    k_add,
    k_neg,
    k_order,
    k_scale,
    k_sub,
    lattice_canonicalize,
    lattice_full,
)


class WordParseError(ValueError):
    """A word token did not parse."""


class GqdElem(NamedTuple):
    k: KElem
    i: int
    eps: int


@dataclass(frozen=True)
class GqdGroup:
    K: FiniteAbelianGroup
    beta: KElem

    def __post_init__(self) -> None:
        beta = self.K.reduce(self.beta)
        if k_add(self.K, beta, beta) != self.K.zero():
            raise ValueError(f"beta = {beta} must have order at most 2")
        object.__setattr__(self, "beta", beta)

    @property
    def is_infinite_dihedral(self) -> bool:
        return self.K.is_trivial

    def identity(self) -> GqdElem:
        return GqdElem(self.K.zero(), 0, 0)

    def elem(self, k: Iterable[int], i: int, eps: int) -> GqdElem:
        if eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        return GqdElem(self.K.reduce(k), int(i), eps)

    def a(self) -> GqdElem:
        return GqdElem(self.K.zero(), 1, 0)

    def b(self) -> GqdElem:
        return GqdElem(self.K.zero(), 0, 1)

    def b_prime(self) -> GqdElem:
        # b' = beta * a^-1 * b, the other transversal letter (a = b b')
        return GqdElem(self.beta, -1, 1)

    def beta_elem(self) -> GqdElem:
        return GqdElem(self.beta, 0, 0)


def mul(G: GqdGroup, x: GqdElem, y: GqdElem) -> GqdElem:
    if x.eps == 0:
        return GqdElem(k_add(G.K, x.k, y.k), x.i + y.i, y.eps)
    if y.eps == 0:
        return GqdElem(k_sub(G.K, x.k, y.k), x.i - y.i, 1)
    return GqdElem(k_add(G.K, k_sub(G.K, x.k, y.k), G.beta), x.i - y.i, 0)


def inv(G: GqdGroup, x: GqdElem) -> GqdElem:
    if x.eps == 0:
        return GqdElem(k_neg(G.K, x.k), -x.i, 0)
    return GqdElem(k_add(G.K, x.k, G.beta), x.i, 1)


def mul_all(G: GqdGroup, xs: Iterable[GqdElem]) -> GqdElem:
    acc = G.identity()
    for x in xs:
        acc = mul(G, acc, x)
    return acc


def elem_pow(G: GqdGroup, x: GqdElem, n: int) -> GqdElem:
    if x.eps == 0:
        return GqdElem(k_scale(G.K, n, x.k), n * x.i, 0)
    half, odd = divmod(abs(n), 2)
    acc = GqdElem(k_scale(G.K, half, G.beta), 0, 0)  # x^2 = beta
    if odd:
        acc = mul(G, acc, x)
    return acc if n >= 0 else inv(G, acc)


def to_kza(x: GqdElem) -> KZElem:
    if x.eps != 0:
        raise ValueError("only rotations live in K + Z coordinates")
    return KZElem(x.k, x.i)


def from_kza(kz: KZElem) -> GqdElem:
    return GqdElem(kz.k, kz.z, 0)


_TOKEN_RE = re.compile(r"^(a|b|b'|k\((-?\d+(,-?\d+)*)?\))(-?)$")


def parse_word(text: str) -> list[str]:
    """Split a whitespace-separated word into tokens, validating syntax."""
    tokens = text.split()
    for tok in tokens:
        if not _TOKEN_RE.match(tok):
            raise WordParseError(f"bad token {tok!r}")
    return tokens


def token_elem(G: GqdGroup, tok: str) -> GqdElem:
    m = _TOKEN_RE.match(tok)
    if not m:
        raise WordParseError(f"bad token {tok!r}")
    letter, coords, _, minus = m.groups()
    if letter == "a":
        base = G.a()
    elif letter == "b":
        base = G.b()
    elif letter == "b'":
        base = G.b_prime()
    else:
        parts = tuple(int(c) for c in coords.split(",")) if coords else ()
        try:
            base = G.elem(parts, 0, 0)
        except ValueError as e:
            raise WordParseError(str(e)) from None
    return inv(G, base) if minus else base


def normalize_word(G: GqdGroup, word: Iterable[str]) -> GqdElem:
    """Fold tokens left-to-right into the (k, i, eps) normal form."""
    acc = G.identity()
    for tok in word:
        acc = mul(G, acc, token_elem(G, tok))
    return acc


@dataclass(frozen=True)
class AmalgamNormalForm:
    """x = head * (alternating b / b' string), head in K."""

    head: KElem
    tail: tuple[str, ...]

    def __post_init__(self) -> None:
        for u, v in zip(self.tail, self.tail[1:]):
            if u == v:
                raise ValueError("tail letters must alternate between b and b'")

    def render(self) -> list[str]:
        coords = ",".join(str(c) for c in self.head)
        return [f"k({coords})", *self.tail]


def amalgam_normal_form(G: GqdGroup, x: GqdElem) -> AmalgamNormalForm:
    """Closed form of the alternating-transversal factorization.

    a = b b' and a^-1 = b' b, so a^i unrolls into an alternating string; a
    trailing b b collapses to beta, which is absorbed into the head.
    """
    b, bp = "b", "b'"
    if x.i > 0:
        tail = (b, bp) * x.i + ((b,) if x.eps else ())
        head = x.k
    elif x.i == 0:
        tail = (b,) * x.eps
        head = x.k
    elif x.eps == 0:
        tail = (bp, b) * (-x.i)
        head = x.k
    else:
        tail = (bp, b) * (-x.i - 1) + (bp,)
        head = k_add(G.K, x.k, G.beta)
    return AmalgamNormalForm(head, tail)


def is_torsion(G: GqdGroup, x: GqdElem) -> bool:
    return x.eps == 1 or x.i == 0


def order(G: GqdGroup, x: GqdElem):
    """Element order; math.inf for the non-torsion elements."""
    if not is_torsion(G, x):
        return math.inf
    if x.eps == 1:
        return 2 if G.beta == G.K.zero() else 4
    return k_order(G.K, x.k)


def six_cycle_identity(
    G: GqdGroup, s1: GqdElem, s2: GqdElem, s3: GqdElem
) -> bool:
    """s1 s2 s3 = s3 s2 s1 for reflections; the relation behind 6-cycles."""
    if not (s1.eps == s2.eps == s3.eps == 1):
        raise ValueError("all three factors must be reflections")
    return mul_all(G, [s1, s2, s3]) == mul_all(G, [s3, s2, s1])


def six_cycle_vertices(
    G: GqdGroup, g: GqdElem, s1: GqdElem, s2: GqdElem, s3: GqdElem
) -> list[GqdElem]:
    gs1 = mul(G, g, s1)
    gs1s2 = mul(G, gs1, s2)
    gs3 = mul(G, g, s3)
    gs3s2 = mul(G, gs3, s2)
    return [g, gs1, gs1s2, mul(G, gs1s2, s3), gs3s2, gs3]


def four_cycle_identity(G: GqdGroup, s1: GqdElem, s2: GqdElem) -> bool:
    """s1 s2 = s2^-1 s1 for a reflection s1 and rotation s2."""
    if s1.eps != 1 or s2.eps != 0:
        raise ValueError("need a reflection and a rotation")
    return mul(G, s1, s2) == mul(G, inv(G, s2), s1)


def four_cycle_vertices(
    G: GqdGroup, g: GqdElem, s1: GqdElem, s2: GqdElem
) -> list[GqdElem]:
    gs1 = mul(G, g, s1)
    return [g, gs1, mul(G, gs1, s2), mul(G, g, inv(G, s2))]


def conjugate_in_k(G: GqdGroup, g: GqdElem, k: KElem) -> KElem:
    """g k g^-1 for k in K: fixed by rotations, inverted by reflections."""
    k = G.K.reduce(k)
    return k_neg(G.K, k) if g.eps == 1 else k


@dataclass(frozen=True)
class ClassifiedSubgroup:
    """<X> described as an index-<=2 pair: rotation part plus a reflection.

    rep is None when X contains no reflection (the subgroup is abelian and
    equals the part); otherwise the subgroup is part + part*rep.
    """

    part: LatticeSubgroup
    rep: GqdElem | None

    @property
    def is_abelian(self) -> bool:
        return self.rep is None


def classify_subgroup(G: GqdGroup, X: Iterable[GqdElem]) -> ClassifiedSubgroup:
    """Canonical description of the subgroup generated by X.

    The rotation part <X> intersect K<a> is generated by the rotation
    generators together with x0*y for each reflection generator y, where
    x0 is a fixed reflection generator (coset-transversal rewriting for an
    index-2 subgroup).
    """
    xs = set(X)
    xs |= {inv(G, x) for x in xs}
    rots = sorted(x for x in xs if x.eps == 0)
    refl = sorted(x for x in xs if x.eps == 1)
    if not refl:
        part = lattice_canonicalize(G.K, [to_kza(x) for x in rots])
        return ClassifiedSubgroup(part, None)
    x0 = refl[0]
    gens = [to_kza(x) for x in rots]
    gens += [to_kza(mul(G, x0, y)) for y in refl]
    part = lattice_canonicalize(G.K, gens)
    return ClassifiedSubgroup(part, x0)


def generates_group(G: GqdGroup, cls: ClassifiedSubgroup) -> bool:
    return cls.rep is not None and cls.part == lattice_full(G.K)
