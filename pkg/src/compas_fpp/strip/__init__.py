"""Percolation on the strip, in the cross model (diagonals open) and the standard model."""

from __future__ import print_function
from __future__ import absolute_import
from __future__ import division

from .geometry import Model
from .geometry import StripGeometry
from .geometry import EdgeColumn
from .geometry import DistanceProfile
from .geometry import StripConfiguration
from .sampling import sample_column
from .sampling import sample_configuration
from .cross import cross_step
from .cross import cross_sweep
from .cross import cross_distance
from .cross import batched_cross_distances
from .oracle import shortest_path_oracle
from .standard import Box
from .standard import standard_distance
from .standard import check_event_A
from .standard import event_a_mask
from .standard import event_a_bound
from .edgeio import dump_edges
from .edgeio import load_edges

__all__ = [
    "Model",
    "StripGeometry",
    "EdgeColumn",
    "DistanceProfile",
    "StripConfiguration",
    "sample_column",
    "sample_configuration",
    "cross_step",
    "cross_sweep",
    "cross_distance",
    "batched_cross_distances",
    "shortest_path_oracle",
    "Box",
    "standard_distance",
    "check_event_A",
    "event_a_mask",
    "event_a_bound",
    "dump_edges",
    "load_edges",
]
