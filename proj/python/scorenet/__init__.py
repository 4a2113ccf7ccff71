from ._core import (
    Graph,
    InvalidArgument,
    NumericalError,
    ParseError,
    count_quadrilaterals,
    estimate_k,
    giant_component,
    hamming_error,
    hier_score,
    load_edge_list,
    mixed_score,
    sample_adjacency,
    sgnq,
    spectral_cluster,
    topic_score,
    vertex_hunt,
)

__all__ = [
    "Graph",
    "InvalidArgument",
    "NumericalError",
    "ParseError",
    "count_quadrilaterals",
    "estimate_k",
    "giant_component",
    "hamming_error",
    "hier_score",
    "load_edge_list",
    "mixed_score",
    "sample_adjacency",
    "sgnq",
    "spectral_cluster",
    "topic_score",
    "vertex_hunt",
]
