"""Hamiltonian double rays and circles in Cayley graphs of two-ended
generalized quasi-dihedral groups.

The core objects: GqdGroup holds the abelian part and the twist, GenSet
a symmetric generating set, GroupDoubleRay a periodic spanning walk, and
HamCircle a disjoint spanning pair.  hamiltonian_double_ray and
hamiltonian_circle construct them; verify_ray and verify_circle certify
exact coverage on finite windows.
"""
from .abelian import BoundExceeded, FiniteAbelianGroup
from .cayley import CaseKind, GenSet, build_window, classify_case, make_gen_set
from .group import (
    GqdElem,
    GqdGroup,
    WordParseError,
    amalgam_normal_form,
    inv,
    is_torsion,
    mul,
    normalize_word,
    order,
    parse_word,
)
from .hamilton import (
    GroupDoubleRay,
    HamCircle,
    finite_ham_path,
    hamiltonian_circle,
    hamiltonian_double_ray,
)
from .verify import VerifyReport, verify_circle, verify_finite_path, verify_ray
from .walls import (
    CoordDoubleRay,
    CylinderParams,
    cylinder_double_ray,
    cylinder_iso,
    cylinder_two_rays,
    cylinder_window,
)

__all__ = [
    "BoundExceeded",
    "CaseKind",
    "CoordDoubleRay",
    "CylinderParams",
    "FiniteAbelianGroup",
    "GenSet",
    "GqdElem",
    "GqdGroup",
    "GroupDoubleRay",
    "HamCircle",
    "VerifyReport",
    "WordParseError",
    "amalgam_normal_form",
    "build_window",
    "classify_case",
    "cylinder_double_ray",
    "cylinder_iso",
    "cylinder_two_rays",
    "cylinder_window",
    "finite_ham_path",
    "hamiltonian_circle",
    "hamiltonian_double_ray",
    "inv",
    "is_torsion",
    "make_gen_set",
    "mul",
    "normalize_word",
    "order",
    "parse_word",
    "verify_circle",
    "verify_finite_path",
    "verify_ray",
]
