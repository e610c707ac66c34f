"""Exact convex geometry over the rationals."""

from .fan import (Cone, Fan, common_refinement, extreme_rays, fan_from_json, fan_to_json,
                  is_refinement, linearity_witness, normal_fan)
from .lattice import (LatticeChart, orthogonal_lattice_basis, primitive, saturated_basis)
from .mixed import (MixedVolumeTrace, mixed_volume, mixed_volume_recursive,
                    mixed_volume_segments, mixed_volume_sublattice, mixed_volume_virtual,
                    split_segments)
from .polytope import (LatticePolytope, VirtualPolytope, affine_lattice_basis, convex_hull, face,
                       minkowski_sum, minkowski_sum_all, point, support_value,
                       to_lattice_coordinates, volume, volume_or_zero, volume_sublattice)

__all__ = [
    "Cone", "Fan", "LatticeChart", "LatticePolytope", "MixedVolumeTrace", "VirtualPolytope",
    "affine_lattice_basis", "common_refinement", "convex_hull", "extreme_rays", "face",
    "fan_from_json", "fan_to_json", "is_refinement", "linearity_witness", "minkowski_sum",
    "minkowski_sum_all", "mixed_volume", "mixed_volume_recursive", "mixed_volume_segments",
    "mixed_volume_sublattice",
    "mixed_volume_virtual", "normal_fan", "orthogonal_lattice_basis", "point", "primitive",
    "saturated_basis", "split_segments", "support_value", "to_lattice_coordinates", "volume", "volume_or_zero",
    "volume_sublattice",
]
