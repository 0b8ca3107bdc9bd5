"""
Weisfeiler-Lehman tree-index refinement over a whole dataset.

Iteration 1 compresses the initial vertex attributes, every further
iteration compresses the signature ``own code | sorted neighbor codes``
of each vertex. All graphs share one ``AttributeCodebook``, so equal codes
denote isomorphic rooted subtrees across the whole dataset.

Codes are handed out in first-seen order while walking the graphs in
bundle order and their vertices in index order, which makes runs
reproducible bit by bit. Signatures may be built on worker threads, the
code assignment itself always runs single-threaded.
"""
import logging

import numpy as np

from .conf import ConfigurationException
from .graph import ContractViolation, DatasetBundle, Graph
from .helper import worker_map

# typing imports
from typing import Dict, List, Optional, Sequence, Tuple


logger = logging.getLogger(__name__)

ILabels = List[np.ndarray]


class AttributeCodebook:
    """
    Injective mapping of signatures to dense integer codes, one table per
    iteration (iterations are counted from 1).
    """

    def __init__(self):
        self._tables: List[Dict[str, int]] = []

    def table(self, iteration: int) -> Dict[str, int]:
        while len(self._tables) < iteration:
            self._tables.append({})
        return self._tables[iteration - 1]

    def compress(self, iteration: int, signature: str) -> int:
        table = self.table(iteration)
        code = table.get(signature)
        if code is None:
            code = table[signature] = len(table)
        return code

    @property
    def iterations(self) -> int:
        return len(self._tables)

    def size(self, iteration: int) -> int:
        """Number of codes ``M_I`` handed out at `iteration`."""
        return len(self._tables[iteration - 1]) if iteration <= len(self._tables) else 0

    def sizes(self) -> List[int]:
        return [self.size(iteration) for iteration in range(1, self.iterations + 1)]


class LabelAssignment:
    """
    Vertex codes per graph and iteration, ``labels[graph][iteration - 1]``.
    """

    def __init__(self, graph_count: int):
        self.labels: List[ILabels] = [[] for _ in range(graph_count)]

    @property
    def iterations(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    def append(self, codes: ILabels) -> None:
        if len(codes) != len(self.labels):
            raise ContractViolation(f'got codes for {len(codes)} graphs, expected {len(self.labels)}')
        for per_graph, graph_codes in zip(self.labels, codes):
            per_graph.append(graph_codes)

    def at(self, iteration: int) -> ILabels:
        """Codes of all graphs at `iteration`."""
        return [per_graph[iteration - 1] for per_graph in self.labels]

    def for_graph(self, index: int) -> ILabels:
        """Codes of graph `index` for all iterations."""
        return self.labels[index]


def resolve_policy(bundle: DatasetBundle, policy: Optional[str] = None) -> str:
    """
    Unlabeled datasets default to the degree policy.
    """
    if policy is None:
        return 'given-attributes' if bundle.has_vertex_attributes else 'degree'
    return policy


def _raw_attributes(g: Graph, policy: str) -> Sequence[int]:
    if policy == 'given-attributes':
        return g.initial_attributes or ()
    if policy == 'degree':
        return [g.degree(v) for v in range(g.vertex_count)]
    return [0] * g.vertex_count


def initial_labels(
        bundle: DatasetBundle,
        policy: Optional[str],
        codebook: AttributeCodebook
) -> ILabels:
    """
    Iteration 1 codes: raw attribute, degree or constant 0 per vertex,
    compressed through `codebook`.
    """
    policy = resolve_policy(bundle, policy)
    if policy not in ('given-attributes', 'degree', 'constant'):
        raise ConfigurationException(f'unknown label policy {policy!r}')
    if policy == 'given-attributes' and not bundle.has_vertex_attributes:
        raise ConfigurationException(
            f'{bundle.name} has no vertex attributes, use the degree or constant policy')
    codes: ILabels = []
    for g in bundle.graphs:
        codes.append(np.array(
            [codebook.compress(1, str(attr)) for attr in _raw_attributes(g, policy)], dtype=np.int64))
    return codes


def _signatures(g: Graph, codes: np.ndarray) -> List[str]:
    signatures = []
    for v in range(g.vertex_count):
        neighborhood = sorted(int(codes[u]) for u in g.neighbors(v))
        signatures.append(f'{int(codes[v])}|{",".join(map(str, neighborhood))}')
    return signatures


def refine_once(
        bundle: DatasetBundle,
        labels_at_i: ILabels,
        codebook: AttributeCodebook,
        iteration: Optional[int] = None,
        workers: int = 1
) -> ILabels:
    """
    Computes the codes of `iteration` (default: the next codebook iteration)
    from the codes of the previous one.
    """
    if iteration is None:
        iteration = codebook.iterations + 1
    signatures = worker_map(
        lambda item: _signatures(*item), list(zip(bundle.graphs, labels_at_i)), workers)
    return [
        np.array([codebook.compress(iteration, signature) for signature in graph_signatures],
                 dtype=np.int64)
        for graph_signatures in signatures
    ]


def run_wl(
        bundle: DatasetBundle,
        i_max: int,
        policy: Optional[str] = None,
        workers: int = 1
) -> Tuple[LabelAssignment, AttributeCodebook]:
    """
    Runs `i_max` iterations, the first one being the initial labeling.
    """
    if i_max < 1:
        raise ConfigurationException('i_max must be >= 1')
    codebook = AttributeCodebook()
    assignment = LabelAssignment(len(bundle.graphs))
    codes = initial_labels(bundle, policy, codebook)
    assignment.append(codes)
    for iteration in range(2, i_max + 1):
        codes = refine_once(bundle, codes, codebook, iteration, workers)
        assignment.append(codes)
    logger.info('%s: codebook sizes %s', bundle.name, codebook.sizes())
    return assignment, codebook


def label_histograms(assignment: LabelAssignment) -> List[Dict[int, int]]:
    """
    Dataset wide code histograms, one per iteration.
    """
    histograms: List[Dict[int, int]] = []
    for iteration in range(1, assignment.iterations + 1):
        histogram: Dict[int, int] = {}
        for codes in assignment.at(iteration):
            for code, count in zip(*np.unique(codes, return_counts=True)):
                histogram[int(code)] = histogram.get(int(code), 0) + int(count)
        histograms.append(dict(sorted(histogram.items())))
    return histograms
