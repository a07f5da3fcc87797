"""Rigid dualizing modules, twisted inverse images and traces of differential forms
for essentially finite type algebras over a field, computed with Groebner bases."""

from .algebra import AlgebraPresentation, make_algebra
from .duality_core import (canonical_module, dualize, etale_pairing, eval_trace,
                           finite_upper_shriek, rigidity_check, twisted_inverse_image)
from .form_trace import TopForm, Tower, power_map_tower
from .groebner import buchberger
from .modres import FPModule, ext_module, free_resolution, iso_probe
from .polyring import QQ, PolyRing, PrimeField
from .smoothalg import is_etale, kahler_module, make_hom, smoothness_rank

__version__ = "0.1.0"

__all__ = ["QQ", "PrimeField", "PolyRing", "buchberger", "AlgebraPresentation", "make_algebra",
           "make_hom", "kahler_module", "smoothness_rank", "is_etale", "FPModule",
           "free_resolution", "ext_module", "iso_probe", "canonical_module", "finite_upper_shriek",
           "eval_trace", "etale_pairing", "rigidity_check", "dualize", "twisted_inverse_image",
           "Tower", "TopForm", "power_map_tower"]
