"""
Per graph feature maps built from WL codes.

Both representations are sparse, keyed by the global code of an iteration;
codes absent from a graph have no entry.

- entropic: fraction of the graph's total vertex entropy carried by the
  vertices of each code,
- count: number of vertices carrying each code.
"""
import numpy as np

from .graph import ContractViolation
from .spectral import EntropyVector
from .wlrefine import LabelAssignment

# typing imports
from typing import Dict, List, Sequence, Union


EntropicFeature = List[Dict[int, float]]
CountFeature = List[Dict[int, int]]

#: total entropy below this counts as zero
ZERO_ENTROPY = 1e-12


def entropic_representation(
        labels: Sequence[np.ndarray],
        entropies: Union[EntropyVector, np.ndarray]
) -> EntropicFeature:
    """
    Entropic subtree pattern per iteration: member entropy sum over total entropy.

    Graphs without entropy (AMM is the identity) fall back to uniform vertex
    mass, i.e. normalized code counts. Weights of one iteration sum to 1.
    """
    values = np.asarray(getattr(entropies, 'values', entropies), dtype=float)
    feature: EntropicFeature = []
    total = float(values.sum())
    for codes in labels:
        codes = np.asarray(codes)
        if len(codes) != len(values):
            raise ContractViolation(f'{len(codes)} vertex codes for {len(values)} entropies')
        if not len(codes):
            feature.append({})
            continue
        present, inverse = np.unique(codes, return_inverse=True)
        if total < ZERO_ENTROPY:
            weights = np.bincount(inverse, minlength=len(present)) / len(codes)
        else:
            weights = np.bincount(inverse, weights=values, minlength=len(present)) / total
        feature.append({int(code): float(weight) for code, weight in zip(present, weights)})
    return feature


def count_representation(labels: Sequence[np.ndarray]) -> CountFeature:
    """
    Histogram of codes per iteration.
    """
    feature: CountFeature = []
    for codes in labels:
        present, counts = np.unique(np.asarray(codes, dtype=np.int64), return_counts=True)
        feature.append({int(code): int(count) for code, count in zip(present, counts)})
    return feature


def entropic_features(
        assignment: LabelAssignment,
        entropies: Sequence[EntropyVector]
) -> List[EntropicFeature]:
    if len(entropies) != len(assignment.labels):
        raise ContractViolation(f'{len(entropies)} entropy vectors for {len(assignment.labels)} graphs')
    return [entropic_representation(assignment.for_graph(index), entropies[index])
            for index in range(len(entropies))]


def count_features(assignment: LabelAssignment) -> List[CountFeature]:
    return [count_representation(assignment.for_graph(index))
            for index in range(len(assignment.labels))]
