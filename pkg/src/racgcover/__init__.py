"""Torsion classes in small covers of right-angled Coxeter groups, verified on finite complexes."""
__version__ = "0.1.0"

from .complex import Chain, CellMap, ComplexError, DeltaComplex, boundary
from .homology import HomologyGroup, homology, homology_all, order_of_class, smith_normal_form
from .instances import InstanceBundle, build_moore_instance, build_twisted_bundle, verify_bundle

__all__ = [
    "Chain", "CellMap", "ComplexError", "DeltaComplex", "boundary", "HomologyGroup", "homology",
    "homology_all", "order_of_class", "smith_normal_form", "InstanceBundle", "build_moore_instance",
    "build_twisted_bundle", "verify_bundle",
]
