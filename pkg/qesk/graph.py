"""
Module containing the graph types shared by all kernel stages.

A ``Graph`` is an undirected simple graph over the vertex indices
``0 .. vertex_count - 1`` with optional integer vertex attributes.
A ``DatasetBundle`` groups the graphs of one benchmark dataset together
with their class labels. Both are immutable after construction and can be
shared freely between worker threads.
"""
import numpy as np

# typing imports
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple


IEdge = Tuple[int, int]


class QeskException(Exception):
    """
    Base exception raised from the kernel toolkit.
    """


class ContractViolation(QeskException):
    """
    Exception raised if a function is called with arguments violating
    its preconditions (asymmetric matrices, length mismatches, ...).
    """


class NumericException(QeskException):
    """
    Exception raised on numerical failures, e.g. a non converging eigensolver
    or a kernel normalization hitting a zero diagonal entry.
    """


def _normalize_edge(u: int, v: int) -> IEdge:
    return (u, v) if u < v else (v, u)


class Graph:
    """
    .. _graph:

    Simple undirected graph implementation.

    Edges are stored as unordered pairs ``(u, v)`` with ``u < v``, thus
    both orientations of an edge and duplicates collapse into one edge.
    Self-loops and out of range endpoints raise a ``ContractViolation``.
    """
    __slots__ = ('vertex_count', 'edges', 'initial_attributes', '_neighbors')

    def __init__(
            self,
            vertex_count: int,
            edges: Iterable[Tuple[int, int]] = (),
            initial_attributes: Optional[Sequence[int]] = None
    ):
        if vertex_count < 0:
            raise ContractViolation(f'negative vertex count {vertex_count}')
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ContractViolation(f'self-loop on vertex {u}')
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ContractViolation(f'edge ({u}, {v}) out of range for {vertex_count} vertices')
            normalized.add(_normalize_edge(u, v))
        if initial_attributes is not None:
            initial_attributes = tuple(int(attr) for attr in initial_attributes)
            if len(initial_attributes) != vertex_count:
                raise ContractViolation(
                    f'{len(initial_attributes)} attributes given for {vertex_count} vertices')
        self.vertex_count: int = vertex_count
        self.edges: FrozenSet[IEdge] = frozenset(normalized)
        self.initial_attributes: Optional[Tuple[int, ...]] = initial_attributes
        neighbors: List[List[int]] = [[] for _ in range(vertex_count)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        self._neighbors: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(n)) for n in neighbors)

    def __repr__(self) -> str:
        return f'<Graph vertices={self.vertex_count} edges={len(self.edges)}>'

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and self.edges == other.edges
                and self.initial_attributes == other.initial_attributes)

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges, self.initial_attributes))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, vertex: int) -> Tuple[int, ...]:
        """Neighbors of ``vertex`` in ascending order."""
        return self._neighbors[vertex]

    def degree(self, vertex: int) -> int:
        return len(self._neighbors[vertex])

    def sorted_edges(self) -> List[IEdge]:
        return sorted(self.edges)

    def permuted(self, permutation: Sequence[int]) -> 'Graph':
        """
        Returns an isomorphic copy where vertex ``v`` is renamed to ``permutation[v]``.
        Attributes travel with their vertices.
        """
        if sorted(permutation) != list(range(self.vertex_count)):
            raise ContractViolation('permutation does not match the vertex set')
        attributes = None
        if self.initial_attributes is not None:
            moved = [0] * self.vertex_count
            for v, attr in enumerate(self.initial_attributes):
                moved[permutation[v]] = attr
            attributes = moved
        return Graph(
            self.vertex_count,
            ((permutation[u], permutation[v]) for u, v in self.edges),
            attributes
        )


def adjacency(g: Graph) -> np.ndarray:
    """
    Symmetric 0/1 adjacency matrix of ``g`` with zero diagonal,
    used as the Hamiltonian of the quantum walk.
    """
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=float)
    if g.edges:
        rows, cols = np.array(sorted(g.edges), dtype=int).T
        a[rows, cols] = 1.0
        a[cols, rows] = 1.0
    return a


class DatasetBundle:
    """
    Graphs of one dataset together with one integer class label per graph.
    """
    __slots__ = ('name', 'graphs', 'class_labels', 'has_vertex_attributes')

    def __init__(
            self,
            name: str,
            graphs: Sequence[Graph],
            class_labels: Sequence[int],
            has_vertex_attributes: bool = False
    ):
        if len(graphs) != len(class_labels):
            raise ContractViolation(
                f'{len(class_labels)} class labels given for {len(graphs)} graphs')
        if has_vertex_attributes and any(g.initial_attributes is None for g in graphs):
            raise ContractViolation('bundle claims vertex attributes, but a graph has none')
        self.name: str = name
        self.graphs: Tuple[Graph, ...] = tuple(graphs)
        self.class_labels: Tuple[int, ...] = tuple(int(label) for label in class_labels)
        self.has_vertex_attributes: bool = has_vertex_attributes

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)

    def __getitem__(self, index: int) -> Graph:
        return self.graphs[index]

    def __repr__(self) -> str:
        return f'<DatasetBundle {self.name} graphs={len(self.graphs)}>'

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatasetBundle):
            return NotImplemented
        return (self.name == other.name
                and self.graphs == other.graphs
                and self.class_labels == other.class_labels
                and self.has_vertex_attributes == other.has_vertex_attributes)

    @property
    def classes(self) -> List[int]:
        """Distinct class labels in ascending order."""
        return sorted(set(self.class_labels))

    def class_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for label in self.class_labels:
            counts[label] = counts.get(label, 0) + 1
        return counts
