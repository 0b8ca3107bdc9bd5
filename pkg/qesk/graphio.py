"""
Reader and writer for the multi-file graph benchmark layout.

A dataset ``DS`` is a directory containing

- ``DS_A.txt``: one edge per line as ``u, v`` (1-based global vertex ids),
- ``DS_graph_indicator.txt``: the 1-based graph id of each global vertex,
- ``DS_graph_labels.txt``: one integer class label per graph,
- ``DS_node_labels.txt`` (optional): one integer attribute per global vertex.

Edge label files are ignored. Vertex indices of the returned graphs are
0-based and local to their graph.
"""
import logging
import os

from .graph import DatasetBundle, Graph, QeskException

# typing imports
from typing import Iterator, List, Optional, Set, Tuple
from typing_extensions import TypedDict


logger = logging.getLogger(__name__)


class DatasetLoadException(QeskException):
    """
    Exception raised if a mandatory dataset file cannot be read.
    """
    def __init__(self, filename: str, reason: str = 'file not found'):
        super().__init__(f'{filename}: {reason}')
        self.filename = filename


class DatasetFormatException(QeskException):
    """
    Exception raised for malformed dataset files, names file and line number.
    """
    def __init__(self, filename: str, line: int, reason: str):
        super().__init__(f'{filename}, line {line}: {reason}')
        self.filename = filename
        self.line = line


class IDatasetStatistics(TypedDict):
    name: str
    graphs: int
    classes: int
    mean_vertices: float
    mean_edges: float
    vertex_labels: Optional[int]


def _path(directory: str, dataset: str, suffix: str) -> str:
    return os.path.join(directory, f'{dataset}_{suffix}.txt')


def _records(filename: str) -> Iterator[Tuple[int, List[str]]]:
    """
    Yields ``(line number, fields)`` of all non-blank lines,
    fields split at commas with surrounding whitespace stripped.
    """
    try:
        with open(filename, 'r', encoding='ascii') as f:
            for number, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                yield number, [field.strip() for field in line.split(',')]
    except FileNotFoundError:
        raise DatasetLoadException(filename)
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetLoadException(filename, str(exc))


def _ints(filename: str, number: int, fields: List[str], expected: int) -> List[int]:
    if len(fields) != expected:
        raise DatasetFormatException(filename, number, f'expected {expected} field(s), got {len(fields)}')
    try:
        return [int(field) for field in fields]
    except ValueError:
        raise DatasetFormatException(filename, number, f'not an integer record: {",".join(fields)!r}')


def parse_tu_dataset(directory_path: str, dataset_name: str) -> DatasetBundle:
    """
    Parses the dataset `dataset_name` from `directory_path`.

    Duplicate edges and both orientations of an edge collapse into one
    undirected edge. Self-loops are dropped, their count gets logged.
    """
    labels_file = _path(directory_path, dataset_name, 'graph_labels')
    indicator_file = _path(directory_path, dataset_name, 'graph_indicator')
    edges_file = _path(directory_path, dataset_name, 'A')
    attributes_file = _path(directory_path, dataset_name, 'node_labels')
    for filename in (edges_file, indicator_file, labels_file):
        if not os.path.isfile(filename):
            raise DatasetLoadException(filename)

    label_records = list(_records(labels_file))
    class_labels = [_ints(labels_file, number, fields, 1)[0] for number, fields in label_records]
    graph_count = len(class_labels)

    # global vertex id (1-based) -> (graph index, local vertex index)
    owner: List[Tuple[int, int]] = []
    sizes = [0] * graph_count
    for number, fields in _records(indicator_file):
        graph_id = _ints(indicator_file, number, fields, 1)[0]
        if not 1 <= graph_id <= graph_count:
            raise DatasetFormatException(
                indicator_file, number,
                f'graph id {graph_id} outside of the {graph_count} labeled graphs')
        owner.append((graph_id - 1, sizes[graph_id - 1]))
        sizes[graph_id - 1] += 1
    for index, size in enumerate(sizes):
        if size == 0:
            raise DatasetFormatException(
                labels_file, label_records[index][0],
                f'graph {index + 1} has no vertices in the graph indicator')

    edges: List[Set[Tuple[int, int]]] = [set() for _ in range(graph_count)]
    self_loops = 0
    for number, fields in _records(edges_file):
        u, v = _ints(edges_file, number, fields, 2)
        for vertex in (u, v):
            if not 1 <= vertex <= len(owner):
                raise DatasetFormatException(
                    edges_file, number, f'vertex {vertex} is not part of any graph')
        (gu, lu), (gv, lv) = owner[u - 1], owner[v - 1]
        if gu != gv:
            raise DatasetFormatException(
                edges_file, number, f'edge connects graphs {gu + 1} and {gv + 1}')
        if lu == lv:
            self_loops += 1
            continue
        edges[gu].add((min(lu, lv), max(lu, lv)))
    if self_loops:
        logger.warning('%s: dropped %d self-loop(s)', dataset_name, self_loops)

    has_attributes = os.path.isfile(attributes_file)
    attributes: List[List[int]] = [[] for _ in range(graph_count)]
    if has_attributes:
        count = 0
        for number, fields in _records(attributes_file):
            if count >= len(owner):
                raise DatasetFormatException(
                    attributes_file, number, f'more vertex labels than the {len(owner)} vertices')
            attributes[owner[count][0]].append(_ints(attributes_file, number, fields, 1)[0])
            count += 1
        if count != len(owner):
            raise DatasetFormatException(
                attributes_file, count + 1, f'{count} vertex labels for {len(owner)} vertices')

    if os.path.isfile(_path(directory_path, dataset_name, 'edge_labels')):
        logger.info('%s: edge labels present, ignored', dataset_name)

    graphs = [
        Graph(sizes[index], edges[index], attributes[index] if has_attributes else None)
        for index in range(graph_count)
    ]
    bundle = DatasetBundle(dataset_name, graphs, class_labels, has_attributes)
    logger.info('loaded %s: %d graphs, %d classes, vertex attributes: %s',
                dataset_name, len(graphs), len(bundle.classes), has_attributes)
    return bundle


def write_tu_dataset(bundle: DatasetBundle, directory_path: str) -> None:
    """
    Writes `bundle` in the benchmark layout into `directory_path`,
    both edge orientations listed like in the published datasets.
    """
    os.makedirs(directory_path, exist_ok=True)
    name = bundle.name
    offset = 0
    with open(_path(directory_path, name, 'A'), 'w', encoding='ascii') as edges, \
            open(_path(directory_path, name, 'graph_indicator'), 'w', encoding='ascii') as indicator:
        for graph_id, g in enumerate(bundle.graphs, 1):
            for _ in range(g.vertex_count):
                indicator.write(f'{graph_id}\n')
            lines = []
            for u, v in g.sorted_edges():
                lines.append((u, v))
                lines.append((v, u))
            for u, v in sorted(lines):
                edges.write(f'{u + offset + 1}, {v + offset + 1}\n')
            offset += g.vertex_count
    with open(_path(directory_path, name, 'graph_labels'), 'w', encoding='ascii') as labels:
        for label in bundle.class_labels:
            labels.write(f'{label}\n')
    if bundle.has_vertex_attributes:
        with open(_path(directory_path, name, 'node_labels'), 'w', encoding='ascii') as attributes:
            for g in bundle.graphs:
                for attr in g.initial_attributes or ():
                    attributes.write(f'{attr}\n')


def load_dataset(dataset_name: str, root: Optional[str] = None) -> DatasetBundle:
    """
    Loads `dataset_name` from ``<root>/<dataset_name>``,
    `root` defaults to the ``QESK_DATASET_ROOT`` setting.
    """
    if root is None:
        from .conf import get_setting
        root = get_setting('QESK_DATASET_ROOT')
    return parse_tu_dataset(os.path.join(root, dataset_name), dataset_name)


def dataset_statistics(bundle: DatasetBundle) -> IDatasetStatistics:
    """
    Summary of a dataset as listed in graph kernel benchmark tables.
    """
    count = len(bundle.graphs)
    vertex_labels: Optional[int] = None
    if bundle.has_vertex_attributes:
        seen: Set[int] = set()
        for g in bundle.graphs:
            seen.update(g.initial_attributes or ())
        vertex_labels = len(seen)
    return {
        'name': bundle.name,
        'graphs': count,
        'classes': len(bundle.class_counts()),
        'mean_vertices': sum(g.vertex_count for g in bundle.graphs) / count if count else 0.0,
        'mean_edges': sum(g.edge_count for g in bundle.graphs) / count if count else 0.0,
        'vertex_labels': vertex_labels,
    }
