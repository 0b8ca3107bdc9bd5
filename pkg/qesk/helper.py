from joblib import Parallel, delayed
from typing import Callable, Iterable, List, Sequence, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def fmt(value: float) -> str:
    """Lossless text form of a double (17 significant digits)."""
    return '%.17g' % value


def fmt_row(values: Iterable[float]) -> str:
    return ','.join(fmt(value) for value in values)


def worker_map(func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """
    Maps `func` over `items`, optionally on `workers` threads.
    The result order always matches `items`.
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    return Parallel(n_jobs=workers, prefer='threads')(delayed(func)(item) for item in items)


def split_interleaved(count: int, parts: int) -> List[List[int]]:
    """
    Splits ``range(count)`` into `parts` interleaved index lists,
    e.g. ``split_interleaved(5, 2) == [[0, 2, 4], [1, 3]]``.
    """
    parts = max(1, min(parts, count)) if count else 1
    return [list(range(start, count, parts)) for start in range(parts)]
