"""
Average mixing matrix of the continuous-time quantum walk.

With the adjacency matrix ``A = sum_j lambda_j P_j`` as Hamiltonian, the
Cesaro time average of the walk's mixing matrix is

.. code:: python

    Q = sum_j P_j * P_j    # Schur-Hadamard (entrywise) square

where ``P_j`` projects onto the eigenspace of the distinct eigenvalue
``lambda_j``. ``Q`` is symmetric and doubly stochastic, each row is a
probability distribution whose Shannon entropy characterizes its vertex.

No time evolution is simulated, everything is derived from the spectrum.
"""
import numpy as np
from scipy import linalg
from scipy.special import entr

from .graph import ContractViolation, Graph, NumericException, adjacency

# typing imports
from typing import Dict, List, NamedTuple, Sequence


#: max allowed asymmetry of eigensolver input
SYMMETRY_TOL = 1e-12
#: default relative tolerance for merging numerically equal eigenvalues
GROUP_TOL = 1e-8


class Spectrum(NamedTuple):
    """
    Distinct eigenvalues (strictly increasing) and their eigenspace projectors.
    """
    distinct_eigenvalues: np.ndarray
    projectors: List[np.ndarray]

    @property
    def size(self) -> int:
        return self.projectors[0].shape[0] if self.projectors else 0


class MixingMatrix(NamedTuple):
    values: np.ndarray


class EntropyVector(NamedTuple):
    values: np.ndarray


def _cluster_bounds(eigenvalues: np.ndarray, tolerance: float) -> List[int]:
    """
    Greedy gap clustering of sorted eigenvalues. Returns the start offsets
    of all clusters plus the total length as final entry.
    """
    bounds = [0]
    for k in range(1, len(eigenvalues)):
        if eigenvalues[k] - eigenvalues[k - 1] > tolerance:
            bounds.append(k)
    bounds.append(len(eigenvalues))
    return bounds


def eigendecompose_symmetric(a: np.ndarray, group_tol: float = GROUP_TOL) -> Spectrum:
    """
    Full eigendecomposition of the real symmetric matrix `a` grouped by
    distinct eigenvalues.

    Consecutive sorted eigenvalues closer than ``group_tol * max(1, spectral radius)``
    form one cluster, represented by the cluster mean and the projector
    ``V_c @ V_c.T`` over the cluster's orthonormal eigenvectors.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation(f'expected a square matrix, got shape {a.shape}')
    if not group_tol > 0:
        raise ContractViolation('group_tol must be > 0')
    n = a.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), [])
    if np.max(np.abs(a - a.T)) >= SYMMETRY_TOL:
        raise ContractViolation('matrix is not symmetric')
    try:
        eigenvalues, eigenvectors = linalg.eigh(a)
    except linalg.LinAlgError as exc:
        raise NumericException(f'eigensolver failed on a {n}x{n} matrix: {exc}')
    radius = float(np.max(np.abs(eigenvalues)))
    bounds = _cluster_bounds(eigenvalues, group_tol * max(1.0, radius))
    means = []
    projectors = []
    for start, stop in zip(bounds[:-1], bounds[1:]):
        vectors = eigenvectors[:, start:stop]
        means.append(float(np.mean(eigenvalues[start:stop])))
        projectors.append(vectors @ vectors.T)
    return Spectrum(np.array(means), projectors)


def average_mixing_matrix(spec: Spectrum) -> MixingMatrix:
    """
    Sums the entrywise squares of all eigenspace projectors.
    Roundoff outside of ``[0, 1]`` gets clamped.
    """
    n = spec.size
    q = np.zeros((n, n))
    for projector in spec.projectors:
        q += projector * projector
    return MixingMatrix(np.clip(q, 0.0, 1.0))


def vertex_entropies(q: MixingMatrix) -> EntropyVector:
    """
    Shannon entropy (natural log) of every row of the mixing matrix,
    ``0 * ln(0)`` counts as 0.
    """
    values = np.clip(np.asarray(q.values, dtype=float), 0.0, None)
    if values.size == 0:
        return EntropyVector(np.zeros(values.shape[0]))
    return EntropyVector(entr(values).sum(axis=1))


def graph_entropies(g: Graph, group_tol: float = GROUP_TOL) -> EntropyVector:
    """
    Convenience chain adjacency -> spectrum -> mixing matrix -> entropies.
    """
    return vertex_entropies(average_mixing_matrix(eigendecompose_symmetric(adjacency(g), group_tol)))


def projector_residuals(spec: Spectrum, a: Sequence[Sequence[float]]) -> Dict[str, float]:
    """
    Max-norm residuals of the spectrum invariants (idempotence, orthogonality,
    completeness, reconstruction of `a`).
    """
    a = np.asarray(a, dtype=float)
    n = spec.size
    idempotence = 0.0
    orthogonality = 0.0
    for j, pj in enumerate(spec.projectors):
        idempotence = max(idempotence, float(np.max(np.abs(pj @ pj - pj))))
        for pk in spec.projectors[j + 1:]:
            orthogonality = max(orthogonality, float(np.max(np.abs(pj @ pk))))
    total = sum(spec.projectors, np.zeros((n, n)))
    rebuilt = sum((lam * p for lam, p in zip(spec.distinct_eigenvalues, spec.projectors)), np.zeros((n, n)))
    return {
        'idempotence': idempotence,
        'orthogonality': orthogonality,
        'completeness': float(np.max(np.abs(total - np.eye(n)))) if n else 0.0,
        'reconstruction': float(np.max(np.abs(rebuilt - a))) if n else 0.0,
    }
