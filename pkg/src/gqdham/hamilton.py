"""Hamiltonian double rays and circles in two-ended Cayley graphs.

Every construction is returned as a GroupDoubleRay: one motif period of
vertices, a non-torsion rotation that translates the motif, and the
generator label of each edge.  The constructor replays the whole chain, so
a ray that builds at all is internally consistent; coverage is a separate
concern handled by the verifier.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .abelian import (
    BoundExceeded,
    close_subgroup,
    decompose_abelian,
    k_add,
    k_enumerate,
    k_neg,
    k_scale,
    k_sub,
    lattice_canonicalize,
    lattice_full,
    lattice_index,
    quotient_cyclic_order,
)
from .cayley import (
    CaseKind,
    GenSet,
    InvalidGeneratingSet,
    NoPivotError,
    choose_pivot,
    classify_case,
    coset_ladder,
    make_gen_set,
    pivot_candidates,
)
from .group import GqdElem, GqdGroup, elem_pow, inv, is_torsion, mul, to_kza
from .walls import (
    CylinderParams,
    cylinder_double_ray,
    cylinder_two_rays,
    grid_double_ray,
    grid_two_rays,
)


@dataclass(frozen=True, eq=False)
class GroupDoubleRay:
    """Periodic two-way Hamiltonian walk: vertex_at(t + p) = period * vertex_at(t)."""

    group: GqdGroup
    gens: tuple  # labels index into this symmetric generator tuple
    motif: tuple
    period: GqdElem
    labels: tuple

    def __post_init__(self):
        G = self.group
        p = len(self.motif)
        if p == 0 or len(self.labels) != p:
            raise ValueError("motif and labels must align and be nonempty")
        if self.period.eps != 0 or is_torsion(G, self.period):
            raise ValueError("period must be a non-torsion rotation")
        for j in range(p - 1):
            if mul(G, self.motif[j], self.gens[self.labels[j]]) != self.motif[j + 1]:
                raise ValueError(f"edge label {j} does not reach the next vertex")
        wrap = mul(G, self.motif[-1], self.gens[self.labels[-1]])
        if wrap != mul(G, self.period, self.motif[0]):
            raise ValueError("final edge does not close onto the translated motif")
        seen = set()
        for q in (-1, 0, 1):
            shift = elem_pow(G, self.period, q)
            for v in self.motif:
                w = mul(G, shift, v)
                if w in seen:
                    raise ValueError("adjacent period translates collide")
                seen.add(w)

    def __len__(self):
        return len(self.motif)

    def vertex_at(self, t):
        q, r = divmod(t, len(self.motif))
        return mul(self.group, elem_pow(self.group, self.period, q), self.motif[r])

    def label_at(self, t):
        return self.labels[t % len(self.motif)]


@dataclass(frozen=True, eq=False)
class HamCircle:
    """Two disjoint double rays jointly covering every vertex."""

    rays: tuple

    def __post_init__(self):
        if len(self.rays) != 2:
            raise ValueError("a Hamiltonian circle is a pair of double rays")


def rotate(ray: GroupDoubleRay, t0: int) -> GroupDoubleRay:
    """The same bi-infinite walk reindexed to start at position t0."""
    p = len(ray.motif)
    motif = tuple(ray.vertex_at(t0 + j) for j in range(p))
    labels = tuple(ray.label_at(t0 + j) for j in range(p))
    return GroupDoubleRay(ray.group, ray.gens, motif, ray.period, labels)


def reverse(ray: GroupDoubleRay) -> GroupDoubleRay:
    """The same walk traversed the other way."""
    G = ray.group
    p = len(ray.motif)
    inv_index = {x: j for j, x in enumerate(ray.gens)}
    motif = tuple(ray.vertex_at(-j) for j in range(p))
    labels = tuple(inv_index[inv(G, ray.gens[ray.label_at(-j - 1)])]
                   for j in range(p))
    return GroupDoubleRay(G, ray.gens, motif, inv(G, ray.period), labels)


def locate_on_ray(ray: GroupDoubleRay, g: GqdElem):
    """Index t with ray.vertex_at(t) == g, or None when g is off the ray."""
    G = ray.group
    p = len(ray.motif)
    isig = ray.period.i
    for r in range(p):
        x = mul(G, g, inv(G, ray.motif[r]))
        if x.eps != 0 or x.i % isig != 0:
            continue
        q = x.i // isig
        if elem_pow(G, ray.period, q) == x:
            return q * p + r
    return None


def embed_pull_back(G, gens, vm, big_p, sigma_l, coord_ray) -> GroupDoubleRay:
    """Transport a coordinate double ray through a periodic vertex map.

    vm(n, m) must satisfy vm(n + big_p, m) = sigma_l * vm(n, m); every step
    of the coordinate ray must map to a generator edge, checked by dividing
    consecutive images.
    """
    index = {x: j for j, x in enumerate(gens)}
    dn = coord_ray.shift
    reps = big_p // math.gcd(big_p, abs(dn))
    total = len(coord_ray.motif) * reps
    sigma = elem_pow(G, sigma_l, reps * dn // big_p)
    motif, labels = [], []
    prev = vm(*coord_ray.vertex_at(0))
    for j in range(total):
        nxt = vm(*coord_ray.vertex_at(j + 1))
        step = mul(G, inv(G, prev), nxt)
        if step not in index:
            raise RuntimeError(f"embedded step {step} is not a generator")
        motif.append(prev)
        labels.append(index[step])
        prev = nxt
    return GroupDoubleRay(G, tuple(gens), tuple(motif), sigma, tuple(labels))


def base_ray(G: GqdGroup, S: GenSet) -> GroupDoubleRay:
    """The two-generator case: a bare line of two alternating involutions."""
    if len(S) != 2:
        raise ValueError("base ray needs exactly two generators")
    x, y = S.gens
    if x.eps != 1 or y.eps != 1 or abs(x.i - y.i) != 1:
        raise ValueError("a two-element generating set must be a pair of "
                         "reflections with adjacent rotation exponents")
    motif = (G.identity(), x)
    labels = (S.index(x), S.index(y))
    return GroupDoubleRay(G, S.gens, motif, mul(G, x, y), labels)


def _four_reflection_pair(G, S):
    """The two generator pairs of the pivot-free configuration.

    Symmetric all-reflection sets without a pivot are exactly
    {x, x^-1, y, y^-1} with x^2 = y^2 = beta of order 2 generating K, and
    the two rotation exponents adjacent."""
    gens = S.gens
    if len(gens) != 4 or any(g.eps == 0 for g in gens):
        raise ValueError("expected four reflection generators")
    if G.beta == G.K.zero() or G.K.order != 2:
        raise ValueError("pivot-free sets force K to be generated by beta")
    exps = sorted({g.i for g in gens})
    if len(exps) != 2 or exps[1] - exps[0] != 1:
        raise ValueError("pivot-free sets carry two adjacent exponents")
    x = min(g for g in gens if g.i == exps[0])
    y = min(g for g in gens if g.i == exps[1])
    return x, y


def _fat_snake(G: GqdGroup, S: GenSet, burn, hops) -> GroupDoubleRay:
    """Column-burning snake through a pivot-free four-reflection graph.

    Each block burns all four vertices over one rotation coordinate by
    zigzagging on the burn generator, then moves to the next coordinate
    with the block's hop generator.  The hop schedule cycles through
    `hops`."""
    bi = S.index(burn)
    motif = [G.identity()]
    labels = []
    for hop in hops:
        for _ in range(3):
            motif.append(mul(G, motif[-1], burn))
            labels.append(bi)
        motif.append(mul(G, motif[-1], S[hop]))
        labels.append(hop)
    sigma = motif.pop()
    return GroupDoubleRay(G, S.gens, tuple(motif), sigma, tuple(labels))


def fat_base_variants(G: GqdGroup, S: GenSet):
    """The closed family of snake rays through a pivot-free graph.

    Burning on x drifts the spine one way, burning on y the other; the hop
    flavour decides which K-class the spine threads.  Which combination
    lets ladder rows wrap evenly depends on the ladder above, so
    assemblies try each in turn."""
    x, y = _four_reflection_pair(G, S)
    out = []
    for burn, hop in ((x, y), (y, x)):
        hi, lo = S.index(hop), S.index(inv(G, hop))
        for hops in ((hi, lo), (lo, hi), (hi,), (lo,)):
            out.append(_fat_snake(G, S, burn, hops))
    return out


def four_reflection_ray(G: GqdGroup, S: GenSet) -> GroupDoubleRay:
    """Single ray for the pivot-free four-reflection sets."""
    return fat_base_variants(G, S)[0]


def four_reflection_two_rays(G: GqdGroup, S: GenSet):
    """Circle pair for the pivot-free sets: the plain zigzag and its
    beta-translate split the two K-classes."""
    x, y = _four_reflection_pair(G, S)
    sigma = mul(G, x, y)
    labels = (S.index(x), S.index(y))
    beta = G.beta_elem()
    r1 = GroupDoubleRay(G, S.gens, (G.identity(), x), sigma, labels)
    r2 = GroupDoubleRay(G, S.gens, (beta, mul(G, x, beta)), sigma, labels)
    return r1, r2


def finite_ham_path(vertices, step, gens, start=None, bound=256):
    """Hamiltonian path through a finite graph v -> step(v, g).

    Deterministic backtracking: candidates are tried fewest-onward-moves
    first with sorted tie-breaks, and branches die as soon as some
    unvisited vertex has no way back in.
    """
    verts = sorted(set(vertices))
    if len(verts) > bound:
        raise BoundExceeded(f"refusing a Hamiltonian search on {len(verts)} vertices")
    vset = set(verts)
    nbrs = {}
    for v in verts:
        out = set()
        for g in gens:
            w = step(v, g)
            if w in vset and w != v:
                out.add(w)
        nbrs[v] = sorted(out)
    if start is None:
        start = verts[0]
    if start not in vset:
        raise ValueError("start vertex not in the graph")
    used = {start}
    path = [start]
    n = len(verts)

    def dead_branch():
        tail = path[-1]
        forced = 0
        for u in verts:
            if u in used:
                continue
            if all(w in used for w in nbrs[u]):
                if tail not in nbrs[u]:
                    return True
                forced += 1  # u must be the very next vertex
                if forced > 1:
                    return True
        return False

    def extend():
        if len(path) == n:
            return True
        tail = path[-1]
        cands = [w for w in nbrs[tail] if w not in used]
        cands.sort(key=lambda w: (sum(1 for z in nbrs[w] if z not in used), w))
        for w in cands:
            used.add(w)
            path.append(w)
            if not dead_branch() and extend():
                return True
            used.remove(w)
            path.pop()
        return False

    if not extend():
        raise RuntimeError("graph has no Hamiltonian path from this start")
    return path


def grid_assemble(G, gens, vm, big_p, sigma_l, height, circle=False):
    """Pull the standard grid ray (or ray pair) back through a vertex map.

    Checks one period of the map first: rungs and horizontal steps must be
    generator edges and the map must repeat by sigma_l."""
    gen_set = set(gens)
    for n in range(big_p):
        for m in range(height):
            if vm(n + big_p, m) != mul(G, sigma_l, vm(n, m)):
                raise RuntimeError("vertex map does not repeat by its period")
            here = vm(n, m)
            if mul(G, inv(G, here), vm(n + 1, m)) not in gen_set:
                raise RuntimeError("horizontal grid step is not a generator edge")
            if m + 1 < height and mul(G, inv(G, here), vm(n, m + 1)) not in gen_set:
                raise RuntimeError("grid rung is not a generator edge")
    if circle:
        pair = grid_two_rays(height)
        return HamCircle(tuple(
            embed_pull_back(G, gens, vm, big_p, sigma_l, r) for r in pair))
    return embed_pull_back(G, gens, vm, big_p, sigma_l, grid_double_ray(height))


# --- case 1: every generator is a reflection -------------------------------


@dataclass(frozen=True, eq=False)
class SubRepresentation:
    """<S'> rewritten as a group of the same two-ended family.

    Rotations of the subgroup are the lattice points (finite coordinates
    plus a power of the infinite generator); reflections append the
    companion t.  to_ambient/to_sub are mutually inverse isomorphisms.
    """

    ambient: GqdGroup
    sub: GqdGroup
    lat: object
    t: GqdElem
    decomp: object
    sub_gen_set: GenSet
    label_map: tuple  # sub generator index -> ambient generator index

    def to_ambient(self, x: GqdElem) -> GqdElem:
        k_ell, ell = self.lat.inf_gen
        k = k_add(self.ambient.K, self.decomp.from_coords[x.k],
                  k_scale(self.ambient.K, x.i, k_ell))
        rot = GqdElem(k, x.i * ell, 0)
        return rot if x.eps == 0 else mul(self.ambient, rot, self.t)

    def to_sub(self, h: GqdElem) -> GqdElem:
        G = self.ambient
        r = h if h.eps == 0 else mul(G, h, inv(G, self.t))
        kz = to_kza(r)
        k_ell, ell = self.lat.inf_gen
        if kz.z % ell != 0:
            raise ValueError("element lies outside the subgroup")
        j = kz.z // ell
        f = k_sub(G.K, kz.k, k_scale(G.K, j, k_ell))
        return GqdElem(self.decomp.to_coords[f], j, h.eps)


def represent_subgroup(G: GqdGroup, S: GenSet, ladder) -> SubRepresentation:
    lat = ladder.h_prime
    fin = sorted(lat.finite_part)
    decomp = decompose_abelian(fin, lambda u, v: k_add(G.K, u, v), G.K.zero())
    beta_sub = decomp.to_coords[G.beta]  # t*t = beta lands in the finite part
    sub = GqdGroup(decomp.group, beta_sub)
    rep = SubRepresentation(G, sub, lat, ladder.t, decomp, None, ())
    pair = (ladder.s, inv(G, ladder.s))
    rest = [x for x in S if x not in pair]
    sub_gen_set = make_gen_set(sub, [rep.to_sub(x) for x in rest])
    label_map = tuple(S.index(rep.to_ambient(x)) for x in sub_gen_set.gens)
    object.__setattr__(rep, "sub_gen_set", sub_gen_set)
    object.__setattr__(rep, "label_map", label_map)
    return rep


def push_ray(G, S, rep: SubRepresentation, ray: GroupDoubleRay) -> GroupDoubleRay:
    """Transport a ray of the re-presented subgroup into ambient labels."""
    motif = tuple(rep.to_ambient(v) for v in ray.motif)
    labels = tuple(rep.label_map[j] for j in ray.labels)
    return GroupDoubleRay(G, S.gens, motif, rep.to_ambient(ray.period), labels)


def next_row(ray: GroupDoubleRay, s: GqdElem, src_par: int) -> GroupDoubleRay:
    """Shift an alternating row off itself by the pivot.

    Sources (positions of parity src_par) step straight down by s; each
    in-between vertex is re-routed through the six-cycle identity, which
    swaps the two labels of the subpath it interpolates."""
    G, gens = ray.group, ray.gens
    p = len(ray.motif)
    if p % 2 != 0:
        raise ValueError("rows must have even period")
    motif, labels = [], []
    for u in range(p):
        if u % 2 == src_par:
            motif.append(mul(G, ray.motif[u], s))
            labels.append(ray.labels[(u + 1) % p])
        else:
            prev = ray.vertex_at(u - 1)
            motif.append(mul(G, mul(G, prev, s), gens[ray.labels[u]]))
            labels.append(ray.labels[u - 1])
    return GroupDoubleRay(G, gens, tuple(motif), ray.period, tuple(labels))


def _case1_rows(G, S, ladder, base: GroupDoubleRay):
    rows = [base]
    for ell in range(ladder.m):
        rows.append(next_row(rows[-1], ladder.s, ell % 2))
    return rows


def _case1_embedding(G, S, ladder, rows):
    """Wrap the rows into a twisted cylinder via the pivot edges that leave
    the last row, and read off the twist."""
    base, last = rows[0], rows[-1]
    p = len(base.motif)
    m = ladder.m
    offsets = set()
    for u in range(p):
        if u % 2 == m % 2:
            img = mul(G, last.motif[u], ladder.s)
            back = locate_on_ray(base, img)
            if back is None:
                raise RuntimeError("pivot edge off the last row misses the base row")
            offsets.add(back - u)
    if len(offsets) != 1:
        raise RuntimeError(f"wrap offsets disagree: {sorted(offsets)}")
    twist = offsets.pop()
    if (m + 1 + twist) % 2 != 0:
        raise RuntimeError("wrap offset parity contradicts the cylinder rule")
    if twist >= 0:
        def vm(n, row):
            return rows[row].vertex_at(n)
        sigma_l = base.period
    else:
        # flip the cylinder left-to-right; column parities survive negation
        def vm(n, row):
            return rows[row].vertex_at(-n)
        sigma_l = inv(G, base.period)
        twist = -twist
    return vm, p, sigma_l, CylinderParams(m + 1, twist)


def _hop_words(q, hi, lo, cap=64):
    """Primitive hop words for a snake under q rows, most promising first.

    The descent through q rows shifts a wrap column by two, so words whose
    net displacement is -2 mod q are tried first, shortest first; the rest
    follow as a safety net.  Repetitions of shorter words revisit the same
    walk and are dropped."""
    def primitive(w):
        n = len(w)
        return all(n % d or any(w[j] != w[j % d] for j in range(n))
                   for d in range(1, n))

    known = {(hi,), (lo,), (hi, lo), (lo, hi)}
    out = []
    for n in range(1, max(q, 2) + 2):
        for word in itertools.product((hi, lo), repeat=n):
            if word in known or not primitive(word):
                continue
            net = sum(1 if c == hi else -1 for c in word)
            out.append(((net + 2) % q != 0, n, word))
    out.sort(key=lambda rec: rec[:2])
    return [word for _, _, word in out[:cap]]


def _case1_bases(G, S, ladder, rep, _depth):
    """Candidate base rays for a ladder assembly, in ambient labels.

    A pivot-free subgroup offers the snake family, because which hop word
    wraps evenly depends on the rows above it; any other subgroup streams
    the distinct rays its own ladder choices produce, since a base whose
    interpolated vertices collide under one alignment of labels can be
    innocent under another."""
    sub, sub_set = rep.sub, rep.sub_gen_set
    fat = len(sub_set) == 4 and not any(True for _ in pivot_candidates(sub, sub_set))
    if not fat:
        inner = _case1_candidates(sub, sub_set, _depth - 1)
        for r in itertools.islice(inner, 12):
            yield push_ray(G, S, rep, r)
        return
    for r in fat_base_variants(sub, sub_set):
        yield push_ray(G, S, rep, r)
    x, y = _four_reflection_pair(sub, sub_set)
    for burn, hop in ((x, y), (y, x)):
        hi, lo = sub_set.index(hop), sub_set.index(inv(sub, hop))
        for word in _hop_words(ladder.m + 1, hi, lo):
            try:
                yield push_ray(G, S, rep, _fat_snake(sub, sub_set, burn, word))
            except (ValueError, RuntimeError):
                continue


def _aligned_assemblies(G, S, ladder, rep, _depth):
    """Each candidate base aligned and stacked into wrapping rows, lazily.

    Rung sources must be reflections, and walks through an all-reflection
    graph alternate strictly, so a base is aligned once to put reflections
    on the source parity; rotating further shifts every row together and
    leaves the wrap offsets untouched, while reversal genuinely moves them.
    Yields {(base, None)} when the ladder has a single rung and the base
    already walks everything, else (base, embedding parts)."""
    for raw in _case1_bases(G, S, ladder, rep, _depth):
        for cand in (raw, reverse(raw)):
            base = rotate(cand, 1 if cand.motif[0].eps == 0 else 0)
            if ladder.m == 0:
                yield base, None
                continue
            try:
                rows = _case1_rows(G, S, ladder, base)
                parts = _case1_embedding(G, S, ladder, rows)
            except (ValueError, RuntimeError):
                continue
            yield base, parts


def _ladder_attempts(G, S: GenSet):
    """Every (ladder, representation) choice, in deterministic order.

    The subgroup left by removing a pivot pair is choice-free, but the rung
    direction (s against its inverse) and the companion both move the rows,
    and a wrap that shears for one choice can close up for another."""
    seen = set()
    for s0 in S:
        pair = frozenset((s0, inv(G, s0)))
        if pair in seen:
            continue
        seen.add(pair)
        rest = [x for x in S if x not in pair]
        if len({x.i for x in rest}) < 2:
            continue
        orient = (s0,) if inv(G, s0) == s0 else (s0, inv(G, s0))
        for s in orient:
            for t in rest:
                try:
                    ladder = coset_ladder(G, S, s, t)
                except (ValueError, RuntimeError):
                    continue
                yield ladder, represent_subgroup(G, S, ladder)


def _subset_gen_sets(G: GqdGroup, S: GenSet):
    """Proper symmetric generating subsets of S, largest first."""
    pairs, seen = [], set()
    for x in S:
        if x in seen:
            continue
        ix = inv(G, x)
        seen.update((x, ix))
        pairs.append((x,) if ix == x else (x, ix))
    for r in range(len(pairs) - 1, 0, -1):
        for keep in itertools.combinations(pairs, r):
            try:
                yield make_gen_set(G, [x for pr in keep for x in pr])
            except InvalidGeneratingSet:
                continue


def _relabel(S: GenSet, sub_S: GenSet, ray: GroupDoubleRay) -> GroupDoubleRay:
    """Reinterpret a walk over a generating subset as a walk over all of S."""
    idx = tuple(S.index(x) for x in sub_S.gens)
    return GroupDoubleRay(ray.group, S.gens, ray.motif, ray.period,
                          tuple(idx[j] for j in ray.labels))


def _perfect_matching(adj):
    """One value per row, all distinct, by augmenting paths; None if stuck."""
    owner = {}

    def augment(j, seen):
        for c in adj[j]:
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = j
                return True
        return False

    for j in range(len(adj)):
        if not augment(j, set()):
            return None
    out = [None] * len(adj)
    for c, j in owner.items():
        out[j] = c
    return out


def _alternating_ray(G: GqdGroup, S: GenSet) -> GroupDoubleRay:
    """Hamiltonian double ray of an all-reflection graph via its rotation half.

    Walks in such a graph strictly alternate rotations and reflections, so
    the even subsequence traverses the abelian rotation group by products
    of two generators.  Any Hamiltonian double ray of that product graph
    lifts back once each period step picks a first factor whose landing
    reflections form a transversal of the translation classes; the picking
    is a perfect matching between period positions and classes."""
    elem_index = {x: j for j, x in enumerate(S.gens)}
    prods = {mul(G, x, y) for x in S for y in S if y != inv(G, x)}
    whole = abelian_double_ray(G, prods)
    if len(whole.motif) > 300:
        raise RuntimeError("rotation period too long for transversal matching")
    for R in (whole, reverse(whole)):
        base_p = len(R.motif)
        # landing classes that coincide over one period can separate over
        # several, so widen the matching until it closes or gets too big
        for mult in (1, 2, 3, 4):
            P = mult * base_p
            sigma = elem_pow(G, R.period, mult)

            def cls(w, sigma=sigma):
                return mul(G, elem_pow(G, sigma, -(w.i // sigma.i)), w)

            options = []
            for j in range(P):
                d = R.gens[R.label_at(j)]
                opts = {}
                for xi, sx in enumerate(S.gens):
                    yi = elem_index.get(mul(G, inv(G, sx), d))
                    if yi is None:
                        continue
                    opts.setdefault(cls(mul(G, R.vertex_at(j), sx)), (xi, yi))
                options.append(opts)
            match = _perfect_matching([list(o) for o in options])
            if match is None:
                continue
            motif, labels = [], []
            for j in range(P):
                xi, yi = options[j][match[j]]
                motif.append(R.vertex_at(j))
                motif.append(mul(G, R.vertex_at(j), S.gens[xi]))
                labels.extend((xi, yi))
            return GroupDoubleRay(G, S.gens, tuple(motif), sigma, tuple(labels))
    raise RuntimeError("no reflection transversal completes the rotation walk")


def _winding_quotients(G: GqdGroup, S: GenSet):
    """Small powers of the shortest pair-product translations, deduplicated."""
    prods = {mul(G, x, y) for x in S for y in S if y != inv(G, x)}
    sigmas = sorted({x if x.i > 0 else inv(G, x) for x in prods if x.i != 0},
                    key=lambda x: (x.i, x))
    tried = set()
    for sigma in sigmas[:3]:
        for m in (1, 2):
            sig = elem_pow(G, sigma, m)
            if sig not in tried:
                tried.add(sig)
                yield sig


def _winding_cycle_ray(G: GqdGroup, S: GenSet, budget=2_000_000) -> GroupDoubleRay:
    """Periodic Hamiltonian double ray by finite search on a translation quotient.

    Quotienting the graph by a non-torsion rotation sigma leaves finitely
    many vertices; a Hamiltonian cycle there lifts to a double ray exactly
    when its net winding around the sigma direction is one, since winding
    zero closes up finite and larger winding skips translates.  Backtracking
    over such cycles is exhaustive for the quotient, so this succeeds
    whenever any sigma-periodic walk exists, at bounded cost."""
    spent = [0]
    for sig in _winding_quotients(G, S):
        ray = _winding_cycle_search(G, S, sig, budget, spent)
        if ray is not None:
            return ray
    raise RuntimeError("no winding-one cycle within the search budget")


def _winding_circle(G: GqdGroup, S: GenSet, budget=2_000_000) -> HamCircle:
    """Hamiltonian circle by finite search on a translation quotient.

    A quotient Hamiltonian cycle with net winding two lifts to a double ray
    that meets every sigma-orbit on alternate levels only; its sigma
    translate fills the skipped levels, and the two rays together cover
    every vertex exactly once."""
    spent = [0]
    for sig in _winding_quotients(G, S):
        ray = _winding_cycle_search(G, S, sig, budget, spent, target=2)
        if ray is not None:
            mate = GroupDoubleRay(
                G, ray.gens, tuple(mul(G, sig, v) for v in ray.motif),
                ray.period, ray.labels)
            return HamCircle((ray, mate))
    raise RuntimeError("no winding-two cycle within the search budget")


def _winding_cycle_search(G, S, sig, budget, spent, target=1):
    reps = [GqdElem(k, i, e)
            for k in k_enumerate(G.K) for i in range(sig.i) for e in (0, 1)]
    n = len(reps)
    if n > 160:
        return None
    index = {r: j for j, r in enumerate(reps)}
    edges = []
    wmax = 1
    for r in reps:
        out = []
        for gi, s in enumerate(S.gens):
            v = mul(G, r, s)
            q = v.i // sig.i
            out.append((index[mul(G, elem_pow(G, sig, -q), v)], q, gi))
            wmax = max(wmax, abs(q))
        edges.append(out)
    start = index[G.identity()]
    visited = [False] * n
    visited[start] = True
    path = []  # (vertex, winding so far, next edge slot)
    here, wind, slot = start, 0, 0
    while True:
        spent[0] += 1
        if spent[0] > budget:
            return None
        advanced = False
        while slot < len(edges[here]):
            to, q, gi = edges[here][slot]
            slot += 1
            w2 = wind + q
            left = n - len(path) - 1
            if left == 0:
                if to == start and abs(w2) == target:
                    labels = [p[3] for p in path] + [gi]
                    motif, v = [], G.identity()
                    for lab in labels[:-1]:
                        motif.append(v)
                        v = mul(G, v, S.gens[lab])
                    motif.append(v)
                    return GroupDoubleRay(G, S.gens, tuple(motif),
                                          elem_pow(G, sig, w2), tuple(labels))
                continue
            if visited[to] or abs(w2) - target > left * wmax:
                continue
            path.append((here, wind, slot, gi))
            visited[to] = True
            here, wind, slot = to, w2, 0
            advanced = True
            break
        if advanced:
            continue
        if not path:
            return None
        visited[here] = False
        here, wind, slot, _ = path.pop()


def _case1_candidates(G: GqdGroup, S: GenSet, _depth):
    """Every Hamiltonian double ray the ladder machinery can assemble, lazily.

    Order: the first few ladder choices with each of their bases in both
    directions, then the bounded quotient search, which is cheap and
    exhaustive on small groups, then the remaining ladder choices, the
    rotation-half rebuild, and finally the rays of proper generating
    subsets, which span the same vertex set and so remain Hamiltonian
    here."""
    if _depth < 0:
        return
    if len(S) == 2:
        yield base_ray(G, S)
        return

    def assemble(ladder, rep):
        for base, parts in _aligned_assemblies(G, S, ladder, rep, _depth):
            if parts is None:
                yield base
                continue
            vm, big_p, sigma_l, params = parts
            yield embed_pull_back(G, S.gens, vm, big_p, sigma_l,
                                  cylinder_double_ray(params))

    attempted = False
    attempts = _ladder_attempts(G, S)
    for ladder, rep in itertools.islice(attempts, 3):
        attempted = True
        yield from assemble(ladder, rep)
    if attempted:
        try:
            yield _winding_cycle_ray(G, S)
        except (ValueError, RuntimeError):
            pass
    for ladder, rep in attempts:
        attempted = True
        yield from assemble(ladder, rep)
    if not attempted:
        try:
            yield from fat_base_variants(G, S)
        except (ValueError, RuntimeError):
            pass
        return
    try:
        yield _alternating_ray(G, S)
    except (ValueError, RuntimeError):
        pass
    for sub_S in _subset_gen_sets(G, S):
        for inner in _case1_candidates(G, sub_S, _depth - 1):
            yield _relabel(S, sub_S, inner)


def case1_ray(G: GqdGroup, S: GenSet, _depth) -> GroupDoubleRay:
    for ray in _case1_candidates(G, S, _depth):
        return ray
    raise RuntimeError("no ladder assembly wrapped evenly for this generating set")


def _case1_circle_candidates(G: GqdGroup, S: GenSet, _depth):
    """Every Hamiltonian circle the ladder machinery can assemble, lazily.

    Mirrors the double-ray order: the first few ladder choices, then the
    bounded quotient search, then the remaining ladder choices, then the
    circle of the subgroup a single-rung pivot leaves behind, the
    four-reflection seam, and finally the circles of proper generating
    subsets."""
    if _depth < 0:
        return
    fallback = None

    def pairs(ladder, rep):
        for _, parts in _aligned_assemblies(G, S, ladder, rep, _depth):
            vm, big_p, sigma_l, params = parts
            yield HamCircle(tuple(
                embed_pull_back(G, S.gens, vm, big_p, sigma_l, r)
                for r in cylinder_two_rays(params)))

    attempts = _ladder_attempts(G, S)
    first = list(itertools.islice(attempts, 3))
    for ladder, rep in first:
        if ladder.m == 0:
            fallback = fallback or rep
            continue
        yield from pairs(ladder, rep)
    if not first:
        try:
            yield HamCircle(four_reflection_two_rays(G, S))
        except (ValueError, RuntimeError):
            pass
    try:
        yield _winding_circle(G, S)
    except (ValueError, RuntimeError):
        pass
    for ladder, rep in attempts:
        if ladder.m == 0:
            fallback = fallback or rep
            continue
        yield from pairs(ladder, rep)
    if fallback is not None:
        # every workable pivot leaves a subgroup that is already everything,
        # so the circle of the smaller generating set is a circle here too
        try:
            inner = hamiltonian_circle(fallback.sub, fallback.sub_gen_set,
                                       _depth - 1)
        except (ValueError, RuntimeError):
            inner = None
        if inner is not None:
            yield HamCircle(tuple(
                push_ray(G, S, fallback, r) for r in inner.rays))
    for sub_S in _subset_gen_sets(G, S):
        if len(sub_S) < 3:
            continue
        try:
            inner = hamiltonian_circle(G, sub_S, _depth - 1)
        except (ValueError, RuntimeError):
            continue
        yield HamCircle(tuple(_relabel(S, sub_S, r) for r in inner.rays))


def case1_circle(G: GqdGroup, S: GenSet, _depth) -> HamCircle:
    for circ in _case1_circle_candidates(G, S, _depth):
        return circ
    raise RuntimeError("no ladder assembly wrapped evenly for this generating set")


# --- case 2i: rotation generators span a finite subgroup -------------------


def _finite_rotation_quotient(G: GqdGroup, f_set):
    """G modulo a finite rotation subgroup F <= K, with projection and a
    coset-representative section."""
    K = G.K
    fin = sorted(f_set)
    reps = {}
    for k in k_enumerate(K):
        reps[k] = min(k_add(K, k, f) for f in fin)
    carrier = sorted(set(reps.values()))
    decomp = decompose_abelian(
        carrier, lambda u, v: reps[k_add(K, u, v)], reps[K.zero()])
    quo = GqdGroup(decomp.group, decomp.to_coords[reps[G.beta]])

    def project(x: GqdElem) -> GqdElem:
        return GqdElem(decomp.to_coords[reps[x.k]], x.i, x.eps)

    def section(x: GqdElem) -> GqdElem:
        return GqdElem(decomp.from_coords[x.k], x.i, x.eps)

    return quo, project, section


def _finite_rotation_grid(G: GqdGroup, S: GenSet, tag, _depth):
    f_set = close_subgroup(G.K, [x.k for x in tag.s2])
    quo, project, _ = _finite_rotation_quotient(G, f_set)
    preimage_of = {}
    for x in tag.s1:
        preimage_of.setdefault(project(x), x)
    sq = make_gen_set(quo, preimage_of.keys())
    quo_ray = hamiltonian_double_ray(quo, sq, _depth - 1)
    start = locate_on_ray(quo_ray, quo.identity())
    if start is None:
        raise RuntimeError("quotient ray misses the identity")
    quo_ray = rotate(quo_ray, start)

    pbar = len(quo_ray.motif)
    lifts = [preimage_of[sq.gens[quo_ray.labels[j]]] for j in range(pbar)]
    walk = [G.identity()]
    for x in lifts:
        walk.append(mul(G, walk[-1], x))
    shift = walk[pbar]
    big_p = pbar if pbar % 2 == 0 else 2 * pbar
    sigma_l = shift if pbar % 2 == 0 else mul(G, shift, shift)

    path = finite_ham_path(
        f_set,
        lambda c, d: k_add(G.K, c, d),
        [x.k for x in tag.s2],
        start=G.K.zero(),
    )

    def vm(n, i):
        q, u = divmod(n, big_p)
        w = walk[u] if u < pbar else mul(G, shift, walk[u - pbar])
        c = path[i] if u % 2 == 0 else k_neg(G.K, path[i])
        base = mul(G, w, GqdElem(c, 0, 0))
        return mul(G, elem_pow(G, sigma_l, q), base)

    return vm, big_p, sigma_l, len(path)


def case2i_ray(G, S, tag, _depth) -> GroupDoubleRay:
    vm, big_p, sigma_l, height = _finite_rotation_grid(G, S, tag, _depth)
    return grid_assemble(G, S.gens, vm, big_p, sigma_l, height)


def case2i_circle(G, S, tag, _depth) -> HamCircle:
    vm, big_p, sigma_l, height = _finite_rotation_grid(G, S, tag, _depth)
    return grid_assemble(G, S.gens, vm, big_p, sigma_l, height, circle=True)


# --- case 2ii: rotation generators span an infinite subgroup ---------------


def abelian_double_ray(G: GqdGroup, gens) -> GroupDoubleRay:
    """Hamiltonian double ray of an infinite subgroup of K<a> over its own
    rotation generators, by peeling one infinite-order generator at a time."""
    closed = set()
    for x in gens:
        if x.eps != 0:
            raise ValueError("rotation generators only")
        closed.add(x)
        closed.add(inv(G, x))
    gens = tuple(sorted(closed))
    star = next((x for x in gens if x.i != 0), None)
    if star is None:
        raise ValueError("the generators span a finite subgroup")
    rest = tuple(x for x in gens if x not in (star, inv(G, star)))
    if all(x.i == 0 for x in rest):
        fin = close_subgroup(G.K, [x.k for x in rest])
        path = finite_ham_path(
            fin, lambda c, d: k_add(G.K, c, d), [x.k for x in rest],
            start=G.K.zero())

        def vm(n, i):
            return mul(G, elem_pow(G, star, n), GqdElem(path[i], 0, 0))

        return grid_assemble(G, gens, vm, 1, star, len(path))
    inner = abelian_double_ray(G, rest)
    lat_rest = lattice_canonicalize(G.K, [to_kza(x) for x in rest])
    lat_all = lattice_canonicalize(G.K, [to_kza(x) for x in gens])
    depth = quotient_cyclic_order(lat_rest, to_kza(star), lat_all)
    if depth != lattice_index(lat_rest, lat_all):
        raise RuntimeError("peeled generator does not fill the quotient")

    def vm(n, j):
        return mul(G, inner.vertex_at(n), elem_pow(G, star, j))

    return grid_assemble(G, gens, vm, len(inner.motif), inner.period, depth)


def _infinite_rotation_grid(G: GqdGroup, S: GenSet, tag, _depth):
    along = abelian_double_ray(G, tag.s2)
    lat = tag.rotation_lattice
    k_ell, ell = lat.inf_gen
    fin = sorted(lat.finite_part)

    def coset_key(g: GqdElem):
        z = g.i % ell
        j = (g.i - z) // ell
        k0 = k_sub(G.K, g.k, k_scale(G.K, j, k_ell))
        return (g.eps, z, min(k_add(G.K, k0, f) for f in fin))

    canon = {coset_key(G.identity()): G.identity()}
    frontier = [G.identity()]
    while frontier:
        new = []
        for g in frontier:
            for x in tag.s1:
                h = mul(G, g, x)
                kh = coset_key(h)
                if kh not in canon:
                    canon[kh] = h
                    new.append(h)
        frontier = new
    expected = 2 * lattice_index(lat, lattice_full(G.K))
    if len(canon) != expected:
        raise RuntimeError("coset enumeration disagrees with the lattice index")

    preimage_of = {}
    for x in tag.s1:
        preimage_of.setdefault(coset_key(x), x)

    def step(kv, kx):
        return coset_key(mul(G, canon[kv], preimage_of[kx]))

    path = finite_ham_path(
        canon.keys(), step, sorted(preimage_of), start=coset_key(G.identity()))
    stops = [G.identity()]
    for u in range(len(path) - 1):
        x = next(preimage_of[kx] for kx in sorted(preimage_of)
                 if step(path[u], kx) == path[u + 1])
        stops.append(mul(G, stops[-1], x))

    def vm(n, i):
        r = along.vertex_at(n)
        if i % 2:
            r = inv(G, r)
        return mul(G, stops[i], r)

    return vm, len(along.motif), along.period, len(path)


def case2ii_ray(G, S, tag, _depth) -> GroupDoubleRay:
    vm, big_p, sigma_l, height = _infinite_rotation_grid(G, S, tag, _depth)
    return grid_assemble(G, S.gens, vm, big_p, sigma_l, height)


def case2ii_circle(G, S, tag, _depth) -> HamCircle:
    vm, big_p, sigma_l, height = _infinite_rotation_grid(G, S, tag, _depth)
    return grid_assemble(G, S.gens, vm, big_p, sigma_l, height, circle=True)


# --- dispatch --------------------------------------------------------------


def hamiltonian_double_ray(G: GqdGroup, S: GenSet, _depth=None) -> GroupDoubleRay:
    """A Hamiltonian double ray of Cay(G, S), as a periodic labeled walk."""
    if _depth is None:
        _depth = len(S) + 2
    if _depth < 0:
        raise RuntimeError("recursion failed to shrink the generating set")
    if len(S) == 2:
        return base_ray(G, S)
    tag = classify_case(G, S)
    if tag.kind is CaseKind.REFLECTIONS_ONLY:
        return case1_ray(G, S, _depth)
    if tag.kind is CaseKind.FINITE_ROTATIONS:
        return case2i_ray(G, S, tag, _depth)
    return case2ii_ray(G, S, tag, _depth)


def hamiltonian_circle(G: GqdGroup, S: GenSet, _depth=None) -> HamCircle:
    """A Hamiltonian circle of Cay(G, S): two disjoint covering double rays.

    Requires degree at least three; the two-generator graphs are bare lines
    and have no circle."""
    if len(S) < 3:
        raise ValueError("a Hamiltonian circle needs degree at least three")
    if _depth is None:
        _depth = len(S) + 2
    if _depth < 0:
        raise RuntimeError("recursion failed to shrink the generating set")
    tag = classify_case(G, S)
    if tag.kind is CaseKind.REFLECTIONS_ONLY:
        return case1_circle(G, S, _depth)
    if tag.kind is CaseKind.FINITE_ROTATIONS:
        return case2i_circle(G, S, tag, _depth)
    return case2ii_circle(G, S, tag, _depth)
