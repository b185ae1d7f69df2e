"""Request and response models for the service layer."""
from typing import Literal, Optional

from pydantic import BaseModel, Field

from .group import GqdElem, GqdGroup
from .hamilton import GroupDoubleRay
from .verify import VerifyReport


class GroupModel(BaseModel):
    invariant_factors: list[int] = Field(default_factory=list)
    beta: list[int] = Field(default_factory=list)


class ElemModel(BaseModel):
    k: list[int] = Field(default_factory=list)
    i: int = 0
    eps: int = 0

    @classmethod
    def of(cls, x: GqdElem):
        return cls(k=list(x.k), i=x.i, eps=x.eps)

    def to_elem(self, G: GqdGroup) -> GqdElem:
        return G.elem(tuple(self.k), self.i, self.eps)


class RayModel(BaseModel):
    motif: list[ElemModel]
    period: ElemModel
    labels: list[int]

    @classmethod
    def of(cls, ray: GroupDoubleRay):
        return cls(motif=[ElemModel.of(v) for v in ray.motif],
                   period=ElemModel.of(ray.period),
                   labels=list(ray.labels))

    def to_ray(self, G: GqdGroup, gens) -> GroupDoubleRay:
        return GroupDoubleRay(G, tuple(gens),
                              tuple(v.to_elem(G) for v in self.motif),
                              self.period.to_elem(G), tuple(self.labels))


class ReportModel(BaseModel):
    passed: bool
    checked_inner_radius: int
    covered: int
    duplicates: list[str]
    non_edges: list[str]
    tail_status: list[tuple[bool, bool]]
    notes: list[str]

    @classmethod
    def of(cls, report: VerifyReport):
        return cls(passed=report.passed,
                   checked_inner_radius=report.checked_inner_radius,
                   covered=report.covered,
                   duplicates=[repr(d) for d in report.duplicates],
                   non_edges=[repr(e) for e in report.non_edges],
                   tail_status=[tuple(t) for t in report.tail_status],
                   notes=list(report.notes))


class GroupInfoRequest(BaseModel):
    group: GroupModel
    gens: list[ElemModel]


class GenCensusEntry(BaseModel):
    elem: ElemModel
    torsion: bool
    order: Optional[int] = None  # omitted for the infinite-order elements


class GroupInfoResponse(BaseModel):
    invariant_factors: list[int]
    beta: list[int]
    k_order: int
    infinite_dihedral: bool
    case: str
    degree: int
    census: list[GenCensusEntry]


class HamRequest(BaseModel):
    group: GroupModel
    gens: list[ElemModel]
    radius: int = 12
    inner_radius: int = 10
    budget: int = 10**5
    seed: int = 0  # reserved; the pipeline is deterministic


class HamRayResponse(BaseModel):
    ray: Optional[RayModel] = None
    report: Optional[ReportModel] = None
    case: str = ""
    error: Optional[str] = None


class HamCircleResponse(BaseModel):
    rays: Optional[list[RayModel]] = None
    report: Optional[ReportModel] = None
    case: str = ""
    error: Optional[str] = None


class VerifyRequest(BaseModel):
    group: GroupModel
    gens: list[ElemModel]
    ray: Optional[RayModel] = None
    rays: Optional[list[RayModel]] = None  # exactly two for a circle
    radius: int = 12
    inner_radius: int = 10
    budget: int = 10**5


class VerifyResponse(BaseModel):
    report: Optional[ReportModel] = None
    error: Optional[str] = None


class WallRequest(BaseModel):
    k: int
    l: int
    show: Literal["window", "column", "snake", "staircase",
                  "ray", "two-rays", "iso-rows"] = "window"
    n_lo: int = -8
    n_hi: int = 8
    format: Literal["dot", "json"] = "json"


class WallResponse(BaseModel):
    k: int
    l: int
    show: str
    vertices: Optional[list[tuple[int, int]]] = None
    edges: Optional[list[tuple[tuple[int, int], tuple[int, int], str]]] = None
    highlight_vertices: Optional[list[tuple[int, int]]] = None
    highlight_edges: Optional[list[tuple[tuple[int, int],
                                         tuple[int, int]]]] = None
    classes: Optional[dict[str, list[tuple[int, int]]]] = None
    dot: Optional[str] = None
