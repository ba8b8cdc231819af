"""Bond percolation on finite windows of the square lattice."""

from __future__ import print_function
from __future__ import absolute_import
from __future__ import division

from .window import PlaneWindow
from .clusters import ClusterLabels
from .clusters import label_clusters
from .distances import plane_distance
from .distances import cross_plane_distances
from .distances import find_T
from .mu import MuEstimate
from .mu import mu_reference
from .mu import estimate_mu
from .mu import WindowDoubling
from .mu import window_doubling

__all__ = [
    "PlaneWindow",
    "ClusterLabels",
    "label_clusters",
    "plane_distance",
    "cross_plane_distances",
    "find_T",
    "MuEstimate",
    "mu_reference",
    "estimate_mu",
    "WindowDoubling",
    "window_doubling",
]
