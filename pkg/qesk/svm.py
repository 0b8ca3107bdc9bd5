"""
C-SVM on precomputed kernels.

The binary dual soft-margin problem

.. code:: python

    min  0.5 * a.T @ Q @ a - sum(a)    with  Q = (y y^T) * K
    s.t. 0 <= a_i <= C,  y.T @ a = 0

is solved by sequential minimal optimization: the maximally KKT violating
pair gets selected, its two variable subproblem is solved analytically,
until the violation drops below `tol`. Multiclass problems are handled
one-vs-one with majority vote.
"""
import logging

import numpy as np

from .graph import ContractViolation

# typing imports
from typing import List, Optional, Sequence, Tuple


logger = logging.getLogger(__name__)

#: replaces non positive curvature of a pair
TAU = 1e-12
#: pair update cap
MAX_ITER = 10 ** 7


class SvmModel:
    """
    Trained binary C-SVM. ``dual_coefficients`` hold ``alpha_i * y_i`` of the
    support vectors, ``support_indices`` index into the training set.

    ``converged`` is ``False`` if the iteration cap was reached.
    """

    def __init__(
            self,
            alphas: np.ndarray,
            labels: np.ndarray,
            bias: float,
            c: float,
            converged: bool,
            kkt_violation: float,
            iterations: int,
            objective_trace: Optional[List[float]] = None
    ):
        self.alphas = alphas
        self.support_indices: np.ndarray = np.flatnonzero(alphas > 0)
        self.dual_coefficients: np.ndarray = alphas[self.support_indices] * labels[self.support_indices]
        self.bias: float = bias
        self.c: float = c
        self.training_size: int = len(alphas)
        self.converged: bool = converged
        self.kkt_violation: float = kkt_violation
        self.iterations: int = iterations
        self.objective_trace: Optional[List[float]] = objective_trace

    def __repr__(self) -> str:
        return f'<SvmModel C={self.c:g} support={len(self.support_indices)}/{self.training_size}>'


def _select_pair(alphas: np.ndarray, y: np.ndarray, grad: np.ndarray, c: float) -> Tuple[int, int, float]:
    """
    Maximal violating pair ``(i, j)`` and its KKT gap.
    """
    score = -y * grad
    up = ((y > 0) & (alphas < c)) | ((y < 0) & (alphas > 0))
    low = ((y > 0) & (alphas > 0)) | ((y < 0) & (alphas < c))
    i = int(np.argmax(np.where(up, score, -np.inf)))
    j = int(np.argmin(np.where(low, score, np.inf)))
    if not up[i] or not low[j]:
        return i, j, 0.0
    return i, j, float(score[i] - score[j])


def _solve_pair(a_i: float, a_j: float, y_i: float, y_j: float,
                g_i: float, g_j: float, q_ii: float, q_jj: float, q_ij: float,
                c: float) -> Tuple[float, float]:
    """
    Analytic solution of the two variable subproblem, clipped to the box.
    """
    if y_i != y_j:
        quad = q_ii + q_jj + 2 * q_ij
        delta = (-g_i - g_j) / (quad if quad > 0 else TAU)
        diff = a_i - a_j
        a_i += delta
        a_j += delta
        if diff > 0:
            if a_j < 0:
                a_j, a_i = 0.0, diff
        elif a_i < 0:
            a_i, a_j = 0.0, -diff
        if diff > 0:
            if a_i > c:
                a_i, a_j = c, c - diff
        elif a_j > c:
            a_j, a_i = c, c + diff
    else:
        quad = q_ii + q_jj - 2 * q_ij
        delta = (g_i - g_j) / (quad if quad > 0 else TAU)
        total = a_i + a_j
        a_i -= delta
        a_j += delta
        if total > c:
            if a_i > c:
                a_i, a_j = c, total - c
            if a_j > c:
                a_j, a_i = c, total - c
        else:
            if a_j < 0:
                a_j, a_i = 0.0, total
            if a_i < 0:
                a_i, a_j = 0.0, total
    return a_i, a_j


def _bias(alphas: np.ndarray, y: np.ndarray, grad: np.ndarray, c: float) -> float:
    """
    Offset from the free support vectors' average, or the midpoint of the
    feasible interval if no vector is free.
    """
    y_grad = y * grad
    free = (alphas > 0) & (alphas < c)
    if np.any(free):
        rho = float(np.mean(y_grad[free]))
    else:
        at_upper = alphas >= c
        upper_mask = (at_upper & (y < 0)) | (~at_upper & (y > 0))
        lower_mask = (at_upper & (y > 0)) | (~at_upper & (y < 0))
        upper = float(np.min(y_grad[upper_mask])) if np.any(upper_mask) else np.inf
        lower = float(np.max(y_grad[lower_mask])) if np.any(lower_mask) else -np.inf
        rho = (upper + lower) / 2
    return -rho


def smo_train(
        gram_sub: np.ndarray,
        labels: Sequence[int],
        c: float,
        tol: float = 1e-3,
        max_iter: int = MAX_ITER,
        record_objective: bool = False
) -> SvmModel:
    """
    Trains a binary C-SVM on the training Gram matrix `gram_sub` with
    labels in ``{+1, -1}``.

    With `record_objective` the dual objective is stored after every pair
    update in ``model.objective_trace`` (it never decreases).
    """
    k = np.asarray(gram_sub, dtype=float)
    y = np.asarray(labels, dtype=float)
    n = len(y)
    if k.shape != (n, n):
        raise ContractViolation(f'gram of shape {k.shape} for {n} labels')
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ContractViolation('labels must be +1 or -1')
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ContractViolation('both classes are needed for training')
    if not c > 0:
        raise ContractViolation('C must be > 0')

    q = np.outer(y, y) * k
    alphas = np.zeros(n)
    grad = -np.ones(n)
    trace: Optional[List[float]] = [0.0] if record_objective else None
    iterations = 0
    gap = np.inf
    while iterations < max_iter:
        i, j, gap = _select_pair(alphas, y, grad, c)
        if gap < tol:
            break
        old_i, old_j = alphas[i], alphas[j]
        alphas[i], alphas[j] = _solve_pair(
            old_i, old_j, y[i], y[j], grad[i], grad[j], q[i, i], q[j, j], q[i, j], c)
        grad += q[:, i] * (alphas[i] - old_i) + q[:, j] * (alphas[j] - old_j)
        iterations += 1
        if trace is not None:
            trace.append(float(-0.5 * alphas @ (grad - 1.0)))
    converged = gap < tol
    if not converged:
        _, _, gap = _select_pair(alphas, y, grad, c)
        logger.warning('SMO reached the iteration cap of %d, KKT violation %g', max_iter, gap)
    return SvmModel(alphas, y, _bias(alphas, y, grad, c), c, converged, float(gap), iterations, trace)


def decision_function(model: SvmModel, gram_cross: np.ndarray) -> np.ndarray:
    k = np.asarray(gram_cross, dtype=float)
    if k.ndim == 1:
        k = k[np.newaxis, :]
    if k.shape[1] != model.training_size:
        raise ContractViolation(
            f'kernel rows have {k.shape[1]} columns, model was trained on {model.training_size}')
    return k[:, model.support_indices] @ model.dual_coefficients + model.bias


def predict(model: SvmModel, gram_cross: np.ndarray) -> np.ndarray:
    """
    Predicts ``+1`` / ``-1`` for every row of the test-vs-train kernel rows,
    a decision value of 0 maps to ``+1``.
    """
    return np.where(decision_function(model, gram_cross) >= 0, 1, -1)


class OneVsOneClassifier:
    """
    Multiclass C-SVM: one binary model per class pair (smaller class +1),
    prediction by majority vote, ties broken toward the smaller class.
    Two class problems reduce to a single binary model.
    """

    def __init__(self, c: float, tol: float = 1e-3, max_iter: int = MAX_ITER):
        self.c = c
        self.tol = tol
        self.max_iter = max_iter
        self.classes: np.ndarray = np.zeros(0, dtype=int)
        self.models: List[Tuple[int, int, np.ndarray, SvmModel]] = []

    def fit(self, gram_train: np.ndarray, labels: Sequence[int]) -> 'OneVsOneClassifier':
        k = np.asarray(gram_train, dtype=float)
        labels = np.asarray(labels)
        self.classes = np.unique(labels)
        if len(self.classes) < 2:
            raise ContractViolation('training data contains a single class')
        self.models = []
        for a in range(len(self.classes)):
            for b in range(a + 1, len(self.classes)):
                index = np.flatnonzero((labels == self.classes[a]) | (labels == self.classes[b]))
                y = np.where(labels[index] == self.classes[a], 1, -1)
                model = smo_train(k[np.ix_(index, index)], y, self.c, self.tol, self.max_iter)
                self.models.append((a, b, index, model))
        return self

    def predict(self, gram_cross: np.ndarray) -> np.ndarray:
        k = np.asarray(gram_cross, dtype=float)
        if k.ndim == 1:
            k = k[np.newaxis, :]
        votes = np.zeros((k.shape[0], len(self.classes)), dtype=int)
        for a, b, index, model in self.models:
            positive = predict(model, k[:, index]) > 0
            votes[positive, a] += 1
            votes[~positive, b] += 1
        return self.classes[np.argmax(votes, axis=1)]
