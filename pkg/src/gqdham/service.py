"""HTTP service exposing the constructions and the verifier.

Input problems are 400s; a construction or verification that runs and
fails reports through the response body so callers can distinguish bad
requests from honest negative results.
"""
import math

from fastapi import FastAPI, HTTPException

from .abelian import BoundExceeded, FiniteAbelianGroup
from .cayley import InvalidGeneratingSet, build_window, classify_case, make_gen_set
from .group import GqdGroup, is_torsion, order
from .hamilton import HamCircle, hamiltonian_circle, hamiltonian_double_ray
from .schemas import (
    ElemModel,
    GenCensusEntry,
    GroupInfoRequest,
    GroupInfoResponse,
    HamCircleResponse,
    HamRayResponse,
    HamRequest,
    RayModel,
    ReportModel,
    VerifyRequest,
    VerifyResponse,
    WallRequest,
    WallResponse,
)
from .verify import verify_circle, verify_ray
from .walls import (
    CylinderParams,
    column,
    cylinder_double_ray,
    cylinder_iso,
    cylinder_two_rays,
    cylinder_window,
    snake,
    staircase,
)

app = FastAPI(title="gqdham")


def _group(model) -> GqdGroup:
    try:
        K = FiniteAbelianGroup(tuple(model.invariant_factors))
        return GqdGroup(K, tuple(model.beta))
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err))


def _gen_set(G, models):
    try:
        return make_gen_set(G, [m.to_elem(G) for m in models])
    except (InvalidGeneratingSet, ValueError) as err:
        raise HTTPException(status_code=400, detail=str(err))


@app.post("/group-info", response_model=GroupInfoResponse)
def group_info(req: GroupInfoRequest):
    G = _group(req.group)
    S = _gen_set(G, req.gens)
    census = []
    for x in S.gens:
        n = order(G, x)
        census.append(GenCensusEntry(
            elem=ElemModel.of(x), torsion=is_torsion(G, x),
            order=None if n is math.inf else int(n)))
    return GroupInfoResponse(
        invariant_factors=list(G.K.invariant_factors),
        beta=list(G.beta),
        k_order=G.K.order,
        infinite_dihedral=G.is_infinite_dihedral,
        case=classify_case(G, S).kind.value,
        degree=len(S),
        census=census)


@app.post("/ham-ray", response_model=HamRayResponse)
def ham_ray(req: HamRequest):
    G = _group(req.group)
    S = _gen_set(G, req.gens)
    case = classify_case(G, S).kind.value
    try:
        ray = hamiltonian_double_ray(G, S)
        window = build_window(G, S, req.radius + len(ray.motif))
        report = verify_ray(window, ray, req.inner_radius, budget=req.budget)
    except (ValueError, RuntimeError, BoundExceeded) as err:
        return HamRayResponse(case=case, error=str(err))
    return HamRayResponse(ray=RayModel.of(ray), report=ReportModel.of(report),
                          case=case)


@app.post("/ham-circle", response_model=HamCircleResponse)
def ham_circle(req: HamRequest):
    G = _group(req.group)
    S = _gen_set(G, req.gens)
    case = classify_case(G, S).kind.value
    if len(S) < 3:
        raise HTTPException(status_code=400,
                            detail="degree < 3: no Hamiltonian circle")
    try:
        circle = hamiltonian_circle(G, S)
        margin = max(len(r.motif) for r in circle.rays)
        window = build_window(G, S, req.radius + margin)
        report = verify_circle(window, circle, req.inner_radius,
                               budget=req.budget)
    except (ValueError, RuntimeError, BoundExceeded) as err:
        return HamCircleResponse(case=case, error=str(err))
    return HamCircleResponse(rays=[RayModel.of(r) for r in circle.rays],
                             report=ReportModel.of(report), case=case)


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest):
    G = _group(req.group)
    S = _gen_set(G, req.gens)
    if (req.ray is None) == (req.rays is None):
        raise HTTPException(status_code=400,
                            detail="provide either ray or rays")
    if req.rays is not None and len(req.rays) != 2:
        raise HTTPException(status_code=400,
                            detail="a circle takes exactly two rays")
    try:
        if req.ray is not None:
            ray = req.ray.to_ray(G, S.gens)
            window = build_window(G, S, req.radius + len(ray.motif))
            report = verify_ray(window, ray, req.inner_radius,
                                budget=req.budget)
        else:
            rays = tuple(m.to_ray(G, S.gens) for m in req.rays)
            margin = max(len(r.motif) for r in rays)
            window = build_window(G, S, req.radius + margin)
            report = verify_circle(window, HamCircle(rays), req.inner_radius,
                                   budget=req.budget)
    except (ValueError, RuntimeError, BoundExceeded) as err:
        # a walk the ray constructor itself rejects is a failed artifact
        return VerifyResponse(error=str(err))
    return VerifyResponse(report=ReportModel.of(report))


def _ray_overlay(window, rays):
    vset = window.vertex_set()
    verts = []
    edges = []
    for ray in rays:
        t_lo, t_hi = ray.index_range_covering(window.n_lo, window.n_hi)
        own = []
        for t in range(t_lo, t_hi + 1):
            v = ray.vertex_at(t)
            if v in vset:
                own.append(v)
            w = ray.vertex_at(t + 1)
            if v in vset and w in vset and t < t_hi:
                edges.append((min(v, w), max(v, w)))
        verts.append(own)
    return verts, edges


def _palette(i):
    colors = ("red", "blue", "darkgreen", "orange", "purple",
              "brown", "cadetblue", "magenta")
    return colors[i % len(colors)]


def _wall_dot(window, highlight_edges, classes):
    vertex_color = {}
    for idx, (name, verts) in enumerate(sorted(classes.items())):
        for v in verts:
            vertex_color[v] = _palette(idx)
    hl = {(min(u, v), max(u, v)) for u, v in highlight_edges}
    lines = ["graph wall {", "  node [shape=circle];"]
    for n, m in window.vertices():
        attrs = f' [label="({n},{m})"'
        if (n, m) in vertex_color:
            attrs += f", style=filled, fillcolor={vertex_color[(n, m)]}"
        attrs += "];"
        lines.append(f'  "v{n}_{m}"{attrs}')
    for u, v, label in window.edges:
        attrs = f' [tooltip="{label}"'
        if (u, v) in hl:
            attrs += ", color=red, penwidth=3"
        attrs += "];"
        lines.append(f'  "v{u[0]}_{u[1]}" -- "v{v[0]}_{v[1]}"{attrs}')
    lines.append("}")
    return "\n".join(lines)


@app.post("/wall", response_model=WallResponse)
def wall(req: WallRequest):
    try:
        p = CylinderParams(req.k, req.l)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err))
    if req.n_lo > req.n_hi:
        raise HTTPException(status_code=400, detail="empty column range")
    window = cylinder_window(p, req.n_lo, req.n_hi)
    vset = window.vertex_set()
    highlight_vertices = []
    highlight_edges = []
    classes = {}
    if req.show == "column":
        path = [v for v in column(p, 0) if v in vset]
        highlight_vertices = path
        highlight_edges = list(zip(path, path[1:]))
    elif req.show == "snake":
        width = 2 if req.l < 2 else req.l - (req.l % 2)
        path = [v for v in snake(p, 0, width) if v in vset]
        highlight_vertices = path
        highlight_edges = list(zip(path, path[1:]))
    elif req.show == "staircase":
        path = [v for v in staircase(p, 0) if v in vset]
        highlight_vertices = path
        highlight_edges = list(zip(path, path[1:]))
    elif req.show == "ray":
        verts, highlight_edges = _ray_overlay(window,
                                              [cylinder_double_ray(p)])
        highlight_vertices = verts[0]
    elif req.show == "two-rays":
        try:
            pair = cylinder_two_rays(p)
        except (ValueError, RuntimeError) as err:
            raise HTTPException(status_code=400, detail=str(err))
        verts, highlight_edges = _ray_overlay(window, pair)
        classes = {f"ray{i}": v for i, v in enumerate(verts)}
        highlight_vertices = [v for own in verts for v in own]
    elif req.show == "iso-rows":
        try:
            iso = cylinder_iso(p)
        except ValueError as err:
            raise HTTPException(status_code=400, detail=str(err))
        rows = {}
        for v in window.vertices():
            rows.setdefault(iso.forward(v)[1], []).append(v)
        classes = {f"row{m}": vs for m, vs in sorted(rows.items())}
    resp = WallResponse(k=req.k, l=req.l, show=req.show)
    if req.format == "dot":
        resp.dot = _wall_dot(window, highlight_edges, classes)
        return resp
    resp.vertices = window.vertices()
    resp.edges = [(u, v, lab) for u, v, lab in window.edges]
    resp.highlight_vertices = highlight_vertices
    resp.highlight_edges = highlight_edges
    resp.classes = classes or None
    return resp
