"""Phase portraits on the sphere as labeled embedded graphs."""

from .embedded_graph import (
    EmbeddedGraph,
    EmbeddingError,
    Face,
    trace_faces,
    validate_embedding,
)
from .skeleton import (
    LimitCycle,
    LimitObject,
    Separatrix,
    SingularPoint,
    Skeleton,
    canonical_regions,
    nests,
    side_boundaries,
    validate_skeleton,
)

__version__ = "0.1.0"
