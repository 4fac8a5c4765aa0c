"""Twin buildings at desk scale: Coxeter groups, buildings, twinnings,
retractions and the extension of local isometries."""

from ._kernels import BACKEND
from .building import BuildingSpace, Residue, validate_building
from .chamsys import ChamberSystem, Gallery, OppChamber, find_gallery, opp_system
from .coxeter import CoxeterGroup, CoxeterMatrix, build_group
from .isom import (
    ExtensionResult,
    PartialIsometry,
    Transporter,
    gallery_transport,
    main_extension,
    make_isometry,
    step_extend,
    transport_family,
)
from .retract import connecting_sequence, descent_step, omega_retraction, pi_retraction
from .twin import TwinSpace, project, spherical_double, twin_apartment_of, validate_twin

__all__ = [
    "BACKEND",
    "BuildingSpace",
    "ChamberSystem",
    "CoxeterGroup",
    "CoxeterMatrix",
    "ExtensionResult",
    "Gallery",
    "OppChamber",
    "PartialIsometry",
    "Residue",
    "Transporter",
    "TwinSpace",
    "build_group",
    "connecting_sequence",
    "descent_step",
    "find_gallery",
    "gallery_transport",
    "main_extension",
    "make_isometry",
    "omega_retraction",
    "opp_system",
    "pi_retraction",
    "project",
    "spherical_double",
    "step_extend",
    "transport_family",
    "twin_apartment_of",
    "validate_building",
    "validate_twin",
]
