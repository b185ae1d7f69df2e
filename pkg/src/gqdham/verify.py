"""Finite-window certification of Hamiltonicity claims.

A periodic double ray drifts through the exponent coordinate at a fixed
rate per period, so every index that could land inside a word-length ball
lies in an interval computable in advance.  Scanning that interval exactly
certifies exact-once coverage, rechecks each step against independently
built window edges, and confirms the tails leave the ball in both
directions.  Verification is sound for what it checks: it never passes a
walk that misses, repeats, or disconnects inside the inner region.
"""
from dataclasses import dataclass

from .cayley import CayleyWindow
from .group import is_torsion
from .hamilton import GroupDoubleRay, HamCircle
from .walls import CoordDoubleRay, WallWindow

DEFAULT_BUDGET = 10**5


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one verification scan.

    checked_inner_radius is -1 when the whole graph was checked (finite
    paths).  tail_status holds one (negative, positive) divergence pair
    per ray and is empty for finite paths.  passed holds exactly when the
    defect lists are empty, the inner region is fully covered, and every
    tail diverges."""

    passed: bool
    checked_inner_radius: int
    covered: int
    duplicates: tuple
    non_edges: tuple
    tail_status: tuple
    notes: tuple = ()


class _Scan:
    def __init__(self):
        self.seen = {}  # vertex -> first (ray idx, t)
        self.duplicates = []
        self.non_edges = []
        self.tails = []
        self.notes = []
        self.inner_hits = 0

    def record(self, v, where, inner):
        if v in self.seen:
            self.duplicates.append((v, self.seen[v], where))
        else:
            self.seen[v] = where
            if inner:
                self.inner_hits += 1


def _group_scan(scan, window, ray, inner_radius, budget, ray_idx):
    S = window.gen_set
    if ray.gens != S.gens:
        raise ValueError("ray and window use different generating sets")
    if inner_radius < 0:
        raise ValueError("inner radius must be nonnegative")
    if inner_radius > window.radius - len(ray.motif):
        raise ValueError(
            "window too small: needs radius at least the inner radius "
            "plus one motif length")
    G = window.group
    sigma = ray.period
    if sigma.eps != 0 or is_torsion(G, sigma):
        scan.notes.append(f"ray {ray_idx}: period is torsion, walk cannot "
                          "reach both ends")
        scan.tails.append((False, False))
        return
    drift = max(abs(s.i) for s in S.gens)
    p = len(ray.motif)
    reach = inner_radius * drift + max(abs(v.i) for v in ray.motif)
    q_bound = reach // abs(sigma.i) + 1
    t_lo, t_hi = -q_bound * p, (q_bound + 1) * p - 1
    if t_hi - t_lo + 1 > budget:
        scan.notes.append(f"ray {ray_idx}: coverage budget exceeded, "
                          f"{t_hi - t_lo + 1} indices over budget {budget}")
        scan.tails.append((False, False))
        return
    depth = window.depth
    inner_set = {v for v in window.verts if depth[v] <= inner_radius}
    edge_set = set(window.edges)
    prev = None
    for t in range(t_lo, t_hi + 1):
        v = ray.vertex_at(t)
        scan.record(v, (ray_idx, t), v in inner_set)
        if prev is not None and prev in depth and v in depth:
            if (prev, ray.label_at(t - 1), v) not in edge_set:
                scan.non_edges.append((t - 1, prev, v))
        prev = v

    def gone(v):
        return v not in depth or depth[v] > inner_radius

    scan.tails.append((gone(ray.vertex_at(t_lo - 1)),
                       gone(ray.vertex_at(t_hi + 1))))


def _coord_scan(scan, window, ray, inner_radius, budget, ray_idx):
    if inner_radius < 0:
        raise ValueError("inner radius must be nonnegative")
    if window.n_lo > -inner_radius or window.n_hi < inner_radius:
        raise ValueError("window too small: the inner column range "
                         "must sit inside it")
    if ray.shift == 0:
        scan.notes.append(f"ray {ray_idx}: zero shift, walk cannot "
                          "reach both ends")
        scan.tails.append((False, False))
        return
    t_lo, t_hi = ray.index_range_covering(window.n_lo, window.n_hi)
    if t_hi - t_lo + 1 > budget:
        scan.notes.append(f"ray {ray_idx}: coverage budget exceeded, "
                          f"{t_hi - t_lo + 1} indices over budget {budget}")
        scan.tails.append((False, False))
        return
    vset = window.vertex_set()
    pairs = {(u, v) for u, v, _ in window.edges}
    prev = None
    for t in range(t_lo, t_hi + 1):
        v = ray.vertex_at(t)
        scan.record(v, (ray_idx, t),
                    v in vset and abs(v[0]) <= inner_radius)
        if prev is not None and prev in vset and v in vset:
            if (min(prev, v), max(prev, v)) not in pairs:
                scan.non_edges.append((t - 1, prev, v))
        prev = v

    def gone(v):
        return abs(v[0]) > inner_radius

    scan.tails.append((gone(ray.vertex_at(t_lo - 1)),
                       gone(ray.vertex_at(t_hi + 1))))


def _scan_for(window, ray):
    if isinstance(ray, GroupDoubleRay) and isinstance(window, CayleyWindow):
        return _group_scan
    if isinstance(ray, CoordDoubleRay) and isinstance(window, WallWindow):
        return _coord_scan
    raise TypeError("window and ray kinds do not match")


def _inner_size(window, inner_radius):
    if isinstance(window, CayleyWindow):
        return len(window.inner_ball(inner_radius))
    return sum(1 for n, _ in window.vertices() if abs(n) <= inner_radius)


def _finish(scan, inner_radius, total):
    if scan.inner_hits < total:
        scan.notes.append(f"missing {total - scan.inner_hits} of {total} "
                          "inner vertices")
    passed = (not scan.duplicates and not scan.non_edges
              and scan.inner_hits == total
              and all(neg and pos for neg, pos in scan.tails)
              and bool(scan.tails))
    return VerifyReport(passed, inner_radius, scan.inner_hits,
                        tuple(scan.duplicates), tuple(scan.non_edges),
                        tuple(scan.tails), tuple(scan.notes))


def verify_ray(window, ray, inner_radius, budget=DEFAULT_BUDGET) -> VerifyReport:
    """Certify a double ray over a window: exact-once inner coverage,
    edge-by-edge adjacency, diverging tails."""
    scan = _Scan()
    _scan_for(window, ray)(scan, window, ray, inner_radius, budget, 0)
    return _finish(scan, inner_radius, _inner_size(window, inner_radius))


def verify_circle(window, circle: HamCircle, inner_radius,
                  budget=DEFAULT_BUDGET) -> VerifyReport:
    """Certify a circle: the two rays are disjoint over the full scanned
    ranges, jointly cover the inner region exactly once, and each reaches
    both ends."""
    scan = _Scan()
    for idx, ray in enumerate(circle.rays):
        _scan_for(window, ray)(scan, window, ray, inner_radius, budget, idx)
    return _finish(scan, inner_radius, _inner_size(window, inner_radius))


def _graph_adjacency(graph):
    if isinstance(graph, dict):
        pairs = {(u, v) for u, nbrs in graph.items() for v in nbrs}
        return set(graph), lambda u, v: (u, v) in pairs or (v, u) in pairs
    if isinstance(graph, CayleyWindow):
        pairs = graph.edge_set()
        return graph.vertex_set(), lambda u, v: (u, v) in pairs
    pairs = {(u, v) for u, v, _ in graph.edges}
    return graph.vertex_set(), \
        lambda u, v: (min(u, v), max(u, v)) in pairs


def verify_finite_path(graph, path) -> VerifyReport:
    """Certify a Hamiltonian path of a finite graph: every vertex exactly
    once, consecutive vertices adjacent.  The graph is a window or a plain
    adjacency mapping."""
    verts, adjacent = _graph_adjacency(graph)
    seen = {}
    duplicates = []
    non_edges = []
    notes = []
    stray = 0
    for j, v in enumerate(path):
        if v not in verts:
            stray += 1
            continue
        if v in seen:
            duplicates.append((v, seen[v], j))
        else:
            seen[v] = j
    for j in range(len(path) - 1):
        if not adjacent(path[j], path[j + 1]):
            non_edges.append((j, path[j], path[j + 1]))
    if stray:
        notes.append(f"path leaves the graph at {stray} steps")
    if len(seen) < len(verts):
        notes.append(f"path omits {len(verts) - len(seen)} of "
                     f"{len(verts)} graph vertices")
    passed = (not duplicates and not non_edges and not stray
              and len(seen) == len(verts))
    return VerifyReport(passed, -1, len(seen), tuple(duplicates),
                        tuple(non_edges), (), tuple(notes))
