"""Exact radius, diameter and eccentricities with checkable certificates."""

from .certificates import (
    BoundState,
    CertificateBundle,
    FingerprintMismatch,
    Verdict,
    verify_all_ecc_certificate,
    verify_bundle,
    verify_diameter_certificate,
    verify_radius_certificate,
)
from .graph import Graph, GraphFormatError, Ranking, read_graph, restrict_to_core
from .selection import select
from .solvers import (
    all_eccentricities,
    diameter,
    diameter_approx,
    diameter_doubling,
    radius,
    radius_approx,
)
from .traversal import INF, QueryCounter, dist_from

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "CertificateBundle",
    "FingerprintMismatch",
    "Graph",
    "GraphFormatError",
    "INF",
    "QueryCounter",
    "Ranking",
    "Verdict",
    "all_eccentricities",
    "diameter",
    "diameter_approx",
    "diameter_doubling",
    "dist_from",
    "radius",
    "radius_approx",
    "read_graph",
    "restrict_to_core",
    "select",
    "verify_all_ecc_certificate",
    "verify_bundle",
    "verify_diameter_certificate",
    "verify_radius_certificate",
]
