"""
Pairwise kernels and Gram matrices.

- QESK: ``sum_I exp(-gamma * ||F_QS^I(G_p) - F_QS^I(G_q)||)`` over the
  entropic features, Euclidean distances taken over the union of both
  supports (absent codes count as 0). ``gamma`` defaults to 1.
- WLSK: ``sum_I <F_WL^I(G_p), F_WL^I(G_q)>`` over the code counts,
  optionally cosine normalized.

Every unordered pair is computed once by its owning row and mirrored, thus
the Gram matrix is exactly symmetric and does not depend on the worker count.
"""
import logging
import math

import numpy as np
from scipy import linalg

from .graph import ContractViolation, NumericException
from .helper import split_interleaved, worker_map

# typing imports
from typing import Callable, Dict, List, Mapping, Sequence, Tuple, Union


logger = logging.getLogger(__name__)

GRAM_KINDS = ('qesk', 'wlsk', 'wlsk-normalized')


class GramMatrix:
    """
    N x N kernel matrix with the kernel kind and the number of WL levels used.
    """

    def __init__(self, values: np.ndarray, kernel_kind: str, i_max: int):
        if kernel_kind not in GRAM_KINDS:
            raise ContractViolation(f'unknown kernel kind {kernel_kind!r}')
        self.values: np.ndarray = np.asarray(values, dtype=float)
        self.kernel_kind: str = kernel_kind
        self.i_max: int = i_max

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        return f'<GramMatrix {self.kernel_kind} imax={self.i_max} n={len(self)}>'


def qesk_level(fp: Mapping[int, float], fq: Mapping[int, float], gamma: float = 1.0) -> float:
    """
    Single level kernel ``exp(-gamma * d)``. The distance is summed exactly
    (``math.fsum``), so it neither depends on the code order nor on codes
    absent from both graphs.
    """
    codes = sorted(set(fp).union(fq))
    distance = math.sqrt(math.fsum((fp.get(c, 0.0) - fq.get(c, 0.0)) ** 2 for c in codes))
    return math.exp(-gamma * distance)


def wlsk_level(cp: Mapping[int, int], cq: Mapping[int, int]) -> int:
    if len(cq) < len(cp):
        cp, cq = cq, cp
    return sum(count * cq[code] for code, count in cp.items() if code in cq)


def _check_levels(fp: Sequence, fq: Sequence, i_max: int) -> None:
    if len(fp) != i_max or len(fq) != i_max:
        raise ContractViolation(f'features with {len(fp)} and {len(fq)} levels, expected i_max={i_max}')


def qesk_pair(
        fp: Sequence[Mapping[int, float]],
        fq: Sequence[Mapping[int, float]],
        i_max: int,
        gamma: float = 1.0
) -> float:
    _check_levels(fp, fq, i_max)
    return sum(qesk_level(lp, lq, gamma) for lp, lq in zip(fp, fq))


def wlsk_pair(
        cp: Sequence[Mapping[int, int]],
        cq: Sequence[Mapping[int, int]],
        i_max: int
) -> int:
    _check_levels(cp, cq, i_max)
    return sum(wlsk_level(lp, lq) for lp, lq in zip(cp, cq))


def gram(
        features: Sequence[Sequence[Mapping]],
        kind: str,
        i_max: int,
        normalize: bool = False,
        gamma: float = 1.0,
        workers: int = 1
) -> GramMatrix:
    """
    Assembles the Gram matrix over all graphs.

    `kind` is ``'qesk'`` (entropic features) or ``'wlsk'`` (count features).
    Normalization ``K_pq / sqrt(K_pp * K_qq)`` applies to WLSK only, QESK
    already has the constant diagonal `i_max`.
    """
    if kind not in ('qesk', 'wlsk'):
        raise ContractViolation(f'unknown kernel kind {kind!r}')
    if normalize and kind == 'qesk':
        raise ContractViolation('the qesk kernel is never normalized')
    pair: Callable[[Sequence[Mapping], Sequence[Mapping]], float]
    if kind == 'qesk':
        pair = lambda fp, fq: qesk_pair(fp, fq, i_max, gamma)
    else:
        pair = lambda fp, fq: wlsk_pair(fp, fq, i_max)
    n = len(features)
    values = np.zeros((n, n))

    def fill(rows: List[int]) -> None:
        for p in rows:
            for q in range(p, n):
                values[p, q] = values[q, p] = pair(features[p], features[q])

    worker_map(fill, split_interleaved(n, workers), workers)
    if normalize:
        diagonal = np.diag(values).copy()
        zero = np.flatnonzero(diagonal <= 0)
        if len(zero):
            raise NumericException(f'cannot normalize, graph {int(zero[0])} has a zero self-similarity')
        values = values / np.sqrt(np.outer(diagonal, diagonal))
        np.fill_diagonal(values, 1.0)
        return GramMatrix(values, 'wlsk-normalized', i_max)
    return GramMatrix(values, kind, i_max)


def psd_check(k: Union[GramMatrix, np.ndarray], tol: float = 1e-6) -> Tuple[float, bool]:
    """
    Empirical positive (semi)definiteness check:
    passes iff ``min_eig >= -tol * max(1, max_eig)``.
    """
    values = np.asarray(getattr(k, 'values', k), dtype=float)
    if values.size == 0:
        return 0.0, True
    if np.max(np.abs(values - values.T)) > 0:
        raise ContractViolation('psd check needs a symmetric matrix')
    try:
        eigenvalues = linalg.eigvalsh(values)
    except linalg.LinAlgError as exc:
        raise NumericException(f'eigensolver failed on the {len(values)}x{len(values)} gram matrix: {exc}')
    min_eig, max_eig = float(eigenvalues[0]), float(eigenvalues[-1])
    passed = min_eig >= -tol * max(1.0, max_eig)
    if not passed:
        logger.warning('gram matrix is not PSD: min eigenvalue %g, max eigenvalue %g', min_eig, max_eig)
    return min_eig, passed


def write_gram(k: GramMatrix, path: str) -> None:
    """
    Writes `k` as comma separated text with the header
    ``# kernel=<kind> imax=<I> n=<N>`` and 17 significant digits.
    """
    np.savetxt(path, k.values.reshape(len(k), len(k)), fmt='%.17g', delimiter=',',
               header=f'kernel={k.kernel_kind} imax={k.i_max} n={len(k)}', comments='# ')


def _parse_header(line: str, path: str) -> Dict[str, str]:
    if not line.startswith('#'):
        raise ContractViolation(f'{path}: missing gram header')
    try:
        return dict(token.split('=', 1) for token in line[1:].split())
    except ValueError:
        raise ContractViolation(f'{path}: malformed gram header {line.strip()!r}')


def read_gram(path: str) -> GramMatrix:
    """
    Reads a Gram matrix written by ``write_gram``.
    """
    with open(path, 'r', encoding='ascii') as f:
        header = _parse_header(f.readline(), path)
        try:
            kind, i_max, n = header['kernel'], int(header['imax']), int(header['n'])
        except (KeyError, ValueError):
            raise ContractViolation(f'{path}: incomplete gram header')
        values = np.loadtxt(f, delimiter=',', ndmin=2) if n else np.zeros((0, 0))
    if values.shape != (n, n):
        raise ContractViolation(f'{path}: expected a {n}x{n} matrix, got {values.shape}')
    return GramMatrix(values, kind, i_max)
