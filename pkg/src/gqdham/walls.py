"""Wall graphs, twisted cubic cylinders, grids, and their Hamiltonian rays.

Vertices are pairs (n, m): column n ranges over all integers, row m over
[0, height).  A wall of height k has horizontal edges everywhere, vertical
("straight") edges only where column and lower-row parities agree, and a
twisted cylinder adds jump edges from row k-1 back to row 0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product

Vertex = tuple  # (n, m)

HORIZONTAL = "horizontal"
STRAIGHT = "straight"
TWISTED = "twisted"


@dataclass(frozen=True)
class CylinderParams:
    """Height k >= 2 and twist l >= 0 with k + l even."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("cylinder height must be at least 2")
        if self.l < 0:
            raise ValueError("twist must be nonnegative")
        if (self.k + self.l) % 2:
            raise ValueError("height + twist must be even")

    def __iter__(self):
        return iter((self.k, self.l))


def wall_adjacent(k, u, v):
    """Edge label joining u and v in the height-k wall, or None."""
    (n1, m1), (n2, m2) = u, v
    if not (0 <= m1 < k and 0 <= m2 < k):
        return None
    if m1 == m2 and abs(n1 - n2) == 1:
        return HORIZONTAL
    if n1 == n2 and abs(m1 - m2) == 1:
        # straight edges exist only where column parity matches the lower row
        if n1 % 2 == min(m1, m2) % 2:
            return STRAIGHT
    return None


def twist_partner(p: CylinderParams, v):
    """Row-0 endpoint of the twisted edge leaving v, or None.

    Twisted edges leave row k-1 at columns whose parity matches k-1 and
    land l columns to the right in row 0.
    """
    n, m = v
    if m == p.k - 1 and (n - m) % 2 == 0:
        return (n + p.l, 0)
    return None


def cylinder_adjacent(p: CylinderParams, u, v):
    """Edge label joining u and v in the twisted cylinder, or None."""
    lab = wall_adjacent(p.k, u, v)
    if lab is not None:
        return lab
    if twist_partner(p, u) == v or twist_partner(p, v) == u:
        return TWISTED
    return None


def grid_adjacent(height, u, v):
    """Edge label in the height-h grid (verticals at every column)."""
    (n1, m1), (n2, m2) = u, v
    if not (0 <= m1 < height and 0 <= m2 < height):
        return None
    if m1 == m2 and abs(n1 - n2) == 1:
        return HORIZONTAL
    if n1 == n2 and abs(m1 - m2) == 1:
        return STRAIGHT
    return None


@dataclass(frozen=True)
class WallWindow:
    """A finite column range of a wall, cylinder, or grid with labeled edges."""

    kind: str  # "wall" | "cylinder" | "grid"
    height: int
    twist: int | None
    n_lo: int
    n_hi: int
    edges: tuple  # ((u, v, label), ...), u < v lexicographically

    def vertices(self):
        return [(n, m) for n in range(self.n_lo, self.n_hi + 1)
                for m in range(self.height)]

    def vertex_set(self):
        return set(self.vertices())

    def adjacency(self):
        nbrs = {v: [] for v in self.vertices()}
        for u, v, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs

    def degree(self, v):
        return sum(1 for u, w, _ in self.edges if v in (u, w))

    def has_edge(self, u, v):
        a, b = min(u, v), max(u, v)
        return any((x, y) == (a, b) for x, y, _ in self.edges)


def _collect_window(kind, height, twist, n_lo, n_hi, adjacent):
    if n_lo > n_hi:
        raise ValueError("empty column range")
    inside = lambda v: n_lo <= v[0] <= n_hi and 0 <= v[1] < height
    edges = set()
    for n, m in product(range(n_lo, n_hi + 1), range(height)):
        u = (n, m)
        for cand in [(n + 1, m), (n, m + 1),
                     (n + twist, 0) if twist is not None and m == height - 1
                     else None,
                     (n - twist, height - 1) if twist is not None and m == 0
                     else None]:
            if cand is None or not inside(cand):
                continue
            lab = adjacent(u, cand)
            if lab is not None:
                edges.add((min(u, cand), max(u, cand), lab))
    return WallWindow(kind, height, twist, n_lo, n_hi, tuple(sorted(edges)))


def wall_window(k, n_lo, n_hi):
    if k < 1:
        raise ValueError("wall height must be positive")
    return _collect_window("wall", k, None, n_lo, n_hi,
                           lambda u, v: wall_adjacent(k, u, v))


def cylinder_window(p: CylinderParams, n_lo, n_hi):
    return _collect_window("cylinder", p.k, p.l, n_lo, n_hi,
                           lambda u, v: cylinder_adjacent(p, u, v))


def grid_window(height, n_lo, n_hi):
    if height < 1:
        raise ValueError("grid height must be positive")
    return _collect_window("grid", height, None, n_lo, n_hi,
                           lambda u, v: grid_adjacent(height, u, v))


def snake(p: CylinderParams, i, width):
    """Boustrophedon Hamiltonian path of a width-column block, ascending rows.

    For even heights the block spans columns [2i+1, 2i+width] and the path
    runs from (2i+1, 0) up to (2i+1, k-1); for odd heights it spans
    [2i+2-width, 2i+1] and runs from (2i+1, 0) up to (2i+2-width, k-1).
    Row-change columns then always carry straight edges.
    """
    k = p.k
    if width < 2 or width % 2:
        raise ValueError("snake width must be a positive even number")
    if k % 2 == 0:
        cols = list(range(2 * i + 1, 2 * i + width + 1))
    else:
        cols = list(range(2 * i + 1, 2 * i + 1 - width, -1))
    path = []
    for m in range(k):
        row = cols if m % 2 == 0 else cols[::-1]
        path.extend((n, m) for n in row)
    return tuple(path)


def column(p: CylinderParams, i):
    """The width-2 snake."""
    return snake(p, i, 2)


def staircase(p: CylinderParams, i):
    """The alternating horizontal/straight path from (2i+1, 0) to (2i+1+k, k-1)."""
    return tuple((2 * i + 1 + (j + 1) // 2, j // 2) for j in range(2 * p.k))


def vertex_to_staircase(v):
    """Index (i, j) of the unique staircase position holding v."""
    n, m = v
    if (n - m) % 2:
        return ((n - m - 1) // 2, 2 * m)
    return ((n - m - 2) // 2, 2 * m + 1)


@dataclass(frozen=True)
class CylinderIso:
    """Coordinate bijection between a cylinder and its re-parameterization.

    Concatenating every kappa-th staircase end-to-end along twisted edges
    yields kappa pairwise disjoint double rays that jointly span the source;
    these become the rows of the target cylinder.
    """

    source: CylinderParams
    target: CylinderParams

    def forward(self, v):
        k = self.source.k
        kappa = self.target.k
        s, j = vertex_to_staircase(v)
        i, r = divmod(s, kappa)
        n = kappa + 1 - r - (2 * k * i + j)
        return (n, kappa - 1 - r)

    def inverse(self, v):
        k = self.source.k
        kappa = self.target.k
        n, row = v
        r = kappa - 1 - row
        i, j = divmod(kappa + 1 - r - n, 2 * k)
        s = i * kappa + r
        return (2 * s + 1 + (j + 1) // 2, j // 2)


def cylinder_iso(p: CylinderParams):
    k, l = p
    kappa, lam = (k + l) // 2, (3 * k - l) // 2
    if kappa < 2:
        raise ValueError("re-parameterized height below 2")
    if lam < 0:
        raise ValueError("re-parameterized twist negative")
    return CylinderIso(p, CylinderParams(kappa, lam))


@dataclass(frozen=True)
class CoordDoubleRay:
    """Periodic double ray in coordinates: motif plus column shift per period."""

    motif: tuple
    shift: int

    def __post_init__(self):
        if not self.motif:
            raise ValueError("empty motif")
        if self.shift == 0:
            raise ValueError("zero shift: tails would not diverge")
        seen = {(n + q * self.shift, m)
                for q in (-1, 0, 1) for n, m in self.motif}
        if len(seen) != 3 * len(self.motif):
            raise ValueError("motif collides with its own translates")

    def vertex_at(self, t):
        q, r = divmod(t, len(self.motif))
        n, m = self.motif[r]
        return (n + q * self.shift, m)

    def index_range_covering(self, n_lo, n_hi):
        """(t_lo, t_hi) such that every ray vertex in the column range
        appears among vertex_at(t), t_lo <= t <= t_hi."""
        p = len(self.motif)
        cols = [n for n, _ in self.motif]
        step = abs(self.shift)
        q_lo = (n_lo - max(cols)) // step - 1
        q_hi = (n_hi - min(cols)) // step + 1
        if self.shift < 0:
            q_lo, q_hi = -q_hi, -q_lo
        return q_lo * p, q_hi * p + p - 1


def _checked(ray, adjacent):
    for t in range(len(ray.motif)):
        u, v = ray.vertex_at(t), ray.vertex_at(t + 1)
        if adjacent(u, v) is None:
            raise RuntimeError(f"constructed ray not locally connected: {u} {v}")
    return ray


def pullback_ray(iso: CylinderIso, ray: CoordDoubleRay):
    """Lift a target-cylinder ray back through the isomorphism.

    Moving 2k steps along any source staircase line shifts source columns
    by 2*kappa, so the pulled-back motif closes after enough target periods
    to make the target shift a multiple of 2k.
    """
    k = iso.source.k
    p = len(ray.motif)
    reps = 2 * k // math.gcd(2 * k, abs(ray.shift))
    total = p * reps
    motif = tuple(iso.inverse(ray.vertex_at(t)) for t in range(total))
    closing = iso.inverse(ray.vertex_at(total))
    if closing[1] != motif[0][1]:
        raise RuntimeError("pullback did not close onto a translate")
    return CoordDoubleRay(motif, closing[0] - motif[0][0])


# The height-3 twist-3 cylinder is the unique fixed point of the
# re-parameterization reachable from the low-twist branch, so its two-ray
# decomposition is pinned directly: two six-vertex motifs of shift 4 whose
# column classes mod 4 partition all twelve (class, row) pairs.
_TWO_RAYS_33 = (
    CoordDoubleRay(((0, 0), (0, 1), (-1, 1), (-1, 2), (0, 2), (3, 0)), 4),
    CoordDoubleRay(((1, 0), (2, 0), (2, 1), (1, 1), (1, 2), (2, 2)), 4),
)


def cylinder_double_ray(p: CylinderParams):
    """A spanning double ray of the twisted cylinder."""
    k, l = p
    adj = lambda u, v: cylinder_adjacent(p, u, v)
    if (k, l) == (2, 0):
        # all four straight/twisted rungs per two columns; direct zigzag
        return _checked(CoordDoubleRay(((1, 0), (2, 0), (2, 1), (3, 1)), 2), adj)
    if l >= 2 and k % 2 == 0:
        return _checked(CoordDoubleRay(snake(p, 0, l), l), adj)
    if l >= 3:
        # odd heights: a width-2 and a width-(l-1) snake chain into one period
        motif = snake(p, 0, 2) + snake(p, (l - 1) // 2, l - 1)
        return _checked(CoordDoubleRay(motif, l + 1), adj)
    iso = cylinder_iso(p)
    target_adj = lambda u, v: cylinder_adjacent(iso.target, u, v)
    inner = _checked(cylinder_double_ray(iso.target), target_adj)
    return _checked(pullback_ray(iso, inner), adj)


def cylinder_two_rays(p: CylinderParams):
    """Two disjoint double rays jointly spanning the twisted cylinder."""
    k, l = p
    adj = lambda u, v: cylinder_adjacent(p, u, v)
    if k == 2:
        return (_checked(CoordDoubleRay(((0, 0),), 1), adj),
                _checked(CoordDoubleRay(((0, 1),), 1), adj))
    if (k, l) == (3, 3):
        return tuple(_checked(r, adj) for r in _TWO_RAYS_33)
    if l <= 3:
        iso = cylinder_iso(p)
        return tuple(_checked(pullback_ray(iso, r), adj)
                     for r in cylinder_two_rays(iso.target))
    if k % 2 == 0:
        # column pair plus the remaining block of each twist-length segment
        d1 = CoordDoubleRay(snake(p, 0, 2), l)
        d2 = CoordDoubleRay(snake(p, 1, l - 2), l)
    else:
        half = (l - 1) // 2
        d1 = CoordDoubleRay(
            snake(p, 0, 2) + snake(p, half, l - 3) + snake(p, half + 2, 2),
            2 * l + 2)
        d2 = CoordDoubleRay(
            snake(p, 1, 2) + snake(p, half + 1, 2) + snake(p, l, l - 3),
            2 * l + 2)
    return (_checked(d1, adj), _checked(d2, adj))


def grid_double_ray(height):
    """A spanning double ray of the height-h grid."""
    if height < 1:
        raise ValueError("grid height must be positive")
    adj = lambda u, v: grid_adjacent(height, u, v)
    if height == 1:
        return _checked(CoordDoubleRay(((0, 0),), 1), adj)
    up = tuple((0, m) for m in range(height))
    down = tuple((1, m) for m in reversed(range(height)))
    return _checked(CoordDoubleRay(up + down, 2), adj)


def grid_two_rays(height):
    """Row 0 plus a snake over the remaining rows; disjoint and spanning."""
    if height < 2:
        raise ValueError("two disjoint spanning rays need height at least 2")
    adj = lambda u, v: grid_adjacent(height, u, v)
    d1 = CoordDoubleRay(((0, 0),), 1)
    if height == 2:
        d2 = CoordDoubleRay(((0, 1),), 1)
    else:
        up = tuple((0, m) for m in range(1, height))
        down = tuple((1, m) for m in reversed(range(1, height)))
        d2 = CoordDoubleRay(up + down, 2)
    return (_checked(d1, adj), _checked(d2, adj))


def ray_window_edges(window: WallWindow, ray: CoordDoubleRay):
    """Consecutive ray edges with both endpoints inside the window."""
    vs = window.vertex_set()
    t_lo, t_hi = ray.index_range_covering(window.n_lo, window.n_hi)
    out = []
    for t in range(t_lo, t_hi + 1):
        u, v = ray.vertex_at(t), ray.vertex_at(t + 1)
        if u in vs and v in vs:
            out.append((u, v))
    return out


def window_to_json(window: WallWindow, rays=()):
    doc = {
        "kind": window.kind,
        "height": window.height,
        "twist": window.twist,
        "n_range": [window.n_lo, window.n_hi],
        "vertices": [list(v) for v in window.vertices()],
        "edges": [{"u": list(u), "v": list(v), "label": lab}
                  for u, v, lab in window.edges],
    }
    if rays:
        doc["rays"] = [{"motif": [list(v) for v in r.motif], "shift": r.shift}
                       for r in rays]
    return json.dumps(doc, indent=2)


_RAY_COLORS = ("red", "blue")


def window_to_dot(window: WallWindow, rays=()):
    """Graphviz source; straight edges solid, twisted dashed, rays colored."""
    name = lambda v: f'"{v[0]},{v[1]}"'
    lines = ["graph {", "  node [shape=point width=0.12];"]
    for v in window.vertices():
        lines.append(f'  {name(v)} [pos="{v[0]},{v[1]}!"];')
    colored = {}
    for ray, color in zip(rays, _RAY_COLORS):
        for u, v in ray_window_edges(window, ray):
            colored[(min(u, v), max(u, v))] = color
    for u, v, lab in window.edges:
        attrs = [f'kind={lab}']
        if lab == TWISTED:
            attrs.append("style=dashed")
        if (u, v) in colored:
            attrs.append(f"color={colored[(u, v)]}")
            attrs.append("penwidth=2")
        lines.append(f'  {name(u)} -- {name(v)} [{" ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines)
