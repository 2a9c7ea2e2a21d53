"""Graph metrics for Helly-type graph classes.

Radius, diameter, diametral pairs and eccentricities for Helly, C4-free
Helly, split and chordal graphs, with brute-force oracles, class
recognizers, instance generators and a CLI.
"""

from .graph import Graph, VertexSet, read_edgelist, write_edgelist, load_graph
from .metrics import (
    DistanceRow,
    EccentricityTable,
    ball,
    bfs,
    eccentricities_bruteforce,
    projection,
    slice_set,
)
from .helly import SampleParams

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "VertexSet",
    "DistanceRow",
    "EccentricityTable",
    "SampleParams",
    "bfs",
    "ball",
    "slice_set",
    "projection",
    "eccentricities_bruteforce",
    "read_edgelist",
    "write_edgelist",
    "load_graph",
    "__version__",
]
