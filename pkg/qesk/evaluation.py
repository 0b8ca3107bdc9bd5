"""
Repeated stratified k-fold evaluation of a precomputed kernel.

Per repetition the dataset is shuffled into stratified folds. For every
outer fold, C is picked from the grid by an inner stratified
``max(2, folds - 1)``-fold CV on the training portion (ties go to the smaller C),
then a model trained on the whole training portion is scored on the test fold.

All shuffle seeds are drawn from the run seed before any work gets
dispatched, thus reports are identical for any worker count.
"""
import json
import logging
import warnings

import numpy as np
from sklearn.model_selection import StratifiedKFold

from .conf import ConfigurationException
from .graph import ContractViolation
from .helper import fmt, worker_map
from .kernel import GramMatrix
from .svm import MAX_ITER, OneVsOneClassifier

# typing imports
from typing import Dict, List, Optional, Sequence, Tuple, Union
from typing_extensions import TypedDict


logger = logging.getLogger(__name__)

C_GRID = [10.0 ** exp for exp in range(-3, 4)]
SEED_BOUND = 2 ** 31 - 1


class CvReport(TypedDict):
    dataset: str
    kernel_kind: str
    i_max: int
    folds: int
    repetitions: int
    seed: int
    reshuffle_per_repetition: bool
    per_fold_accuracies: List[List[float]]
    repetition_means: List[float]
    mean: float
    std_error: float
    chosen_c: List[List[float]]
    chosen_c_histogram: Dict[str, int]


class _FoldTask(TypedDict):
    repetition: int
    fold: int
    train: np.ndarray
    test: np.ndarray
    inner_seed: int


def _splits(labels: np.ndarray, folds: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    Stratified shuffled splits. Raises ``ValueError`` if the data cannot be split.
    """
    with warnings.catch_warnings():
        # classes smaller than `folds` are fine, affected folds get skipped later
        warnings.simplefilter('ignore', UserWarning)
        splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
        return list(splitter.split(np.zeros(len(labels)), labels))


def _accuracy(k: np.ndarray, labels: np.ndarray, train: np.ndarray, test: np.ndarray,
              c: float, tol: float, max_iter: int) -> float:
    classifier = OneVsOneClassifier(c, tol, max_iter).fit(k[np.ix_(train, train)], labels[train])
    predicted = classifier.predict(k[np.ix_(test, train)])
    return float(np.mean(predicted == labels[test]))


def select_c(
        k: np.ndarray,
        labels: np.ndarray,
        train: np.ndarray,
        c_grid: Sequence[float],
        inner_folds: int,
        seed: int,
        tol: float = 1e-3,
        max_iter: int = MAX_ITER
) -> float:
    """
    Picks C by inner CV on the `train` portion. Inner folds whose training
    part holds a single class are skipped.
    """
    try:
        splits = _splits(labels[train], inner_folds, seed)
    except ValueError as exc:
        raise ConfigurationException(f'inner cross-validation impossible: {exc}')
    scores: Dict[float, List[float]] = {c: [] for c in c_grid}
    for inner_train, inner_test in splits:
        fit_index, score_index = train[inner_train], train[inner_test]
        if len(np.unique(labels[fit_index])) < 2:
            logger.warning('skipping inner fold with a single training class')
            continue
        for c in c_grid:
            scores[c].append(_accuracy(k, labels, fit_index, score_index, c, tol, max_iter))
    best_c: Optional[float] = None
    best_score = -np.inf
    for c in sorted(c_grid):
        if not scores[c]:
            continue
        score = float(np.mean(scores[c]))
        if score > best_score:
            best_c, best_score = c, score
    if best_c is None:
        raise ConfigurationException('every inner fold has a single training class')
    return best_c


def cross_validate(
        k: Union[GramMatrix, np.ndarray],
        class_labels: Sequence[int],
        folds: int = 10,
        repetitions: int = 10,
        c_grid: Optional[Sequence[float]] = None,
        seed: int = 0,
        tol: float = 1e-3,
        max_iter: int = MAX_ITER,
        workers: int = 1,
        dataset: str = ''
) -> CvReport:
    """
    Repeated stratified cross-validation of a C-SVM on the Gram matrix `k`.
    """
    values = np.asarray(getattr(k, 'values', k), dtype=float)
    c_grid = sorted(float(c) for c in (c_grid or C_GRID))
    n = len(class_labels)
    if values.shape != (n, n):
        raise ConfigurationException(f'gram of shape {values.shape} for {n} class labels')
    if n < folds:
        raise ConfigurationException(f'{n} graphs cannot be split into {folds} folds')
    # dense class indices 0..k-1
    classes, labels = np.unique(np.asarray(class_labels), return_inverse=True)
    if len(classes) < 2:
        raise ConfigurationException('at least two classes are needed')

    rng = np.random.default_rng(seed)
    outer_seeds = rng.integers(0, SEED_BOUND, size=repetitions)
    inner_seeds = rng.integers(0, SEED_BOUND, size=(repetitions, folds))
    tasks: List[_FoldTask] = []
    for repetition in range(repetitions):
        try:
            splits = _splits(labels, folds, int(outer_seeds[repetition]))
        except ValueError as exc:
            raise ConfigurationException(f'cross-validation impossible: {exc}')
        for fold, (train, test) in enumerate(splits):
            tasks.append({'repetition': repetition, 'fold': fold, 'train': train, 'test': test,
                          'inner_seed': int(inner_seeds[repetition, fold])})

    def run(task: _FoldTask) -> Tuple[float, float]:
        c = select_c(values, labels, task['train'], c_grid, max(2, folds - 1), task['inner_seed'], tol, max_iter)
        try:
            accuracy = _accuracy(values, labels, task['train'], task['test'], c, tol, max_iter)
        except ContractViolation as exc:
            raise ConfigurationException(f'fold {task["fold"]}: {exc}')
        logger.debug('repetition %d fold %d: C=%g accuracy=%.4f',
                     task['repetition'], task['fold'], c, accuracy)
        return accuracy, c

    results = worker_map(run, tasks, workers)
    accuracies = np.array([accuracy for accuracy, _ in results]).reshape(repetitions, folds)
    chosen = [[c for _, c in results[r * folds:(r + 1) * folds]] for r in range(repetitions)]
    histogram: Dict[str, int] = {}
    for c in c_grid:
        count = sum(row.count(c) for row in chosen)
        if count:
            histogram[fmt(c)] = count
    repetition_means = accuracies.mean(axis=1)
    report: CvReport = {
        'dataset': dataset,
        'kernel_kind': getattr(k, 'kernel_kind', 'precomputed'),
        'i_max': int(getattr(k, 'i_max', 0)),
        'folds': folds,
        'repetitions': repetitions,
        'seed': seed,
        'reshuffle_per_repetition': True,
        'per_fold_accuracies': accuracies.tolist(),
        'repetition_means': repetition_means.tolist(),
        'mean': float(np.mean(repetition_means)),
        'std_error': float(np.std(repetition_means) / np.sqrt(repetitions)),
        'chosen_c': chosen,
        'chosen_c_histogram': histogram,
    }
    logger.info('%s: mean accuracy %.4f +- %.4f over %d x %d folds',
                dataset or 'dataset', report['mean'], report['std_error'], repetitions, folds)
    return report


def report_to_text(report: CvReport) -> str:
    """
    Deterministic text form of a report (sorted keys, exact floats).
    """
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


def write_report(report: CvReport, path: str) -> None:
    with open(path, 'w', encoding='ascii') as f:
        f.write(report_to_text(report))
