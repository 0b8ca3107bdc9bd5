"""
Contains the stage orchestration shared by the management commands.

A ``KernelPipeline`` runs the stages

    parse -> spectral -> wl -> features -> gram -> psd [-> evaluate]

lazily and at most once per instance. Each stage is timed and logged, any
toolkit error raised inside a stage is re-raised as ``StageException``
carrying the stage name.
"""
from contextlib import contextmanager
import json
import logging
import os
import time

from .conf import ConfigurationException, RunConfig, config_hash, kernel_kind_name
from .evaluation import CvReport, cross_validate
from .features import count_features, count_representation, entropic_features, entropic_representation
from .graph import DatasetBundle, QeskException, adjacency
from .graphio import IDatasetStatistics, dataset_statistics, parse_tu_dataset
from .helper import fmt, fmt_row, worker_map
from .kernel import GramMatrix, gram, psd_check, read_gram
from .spectral import (EntropyVector, MixingMatrix, average_mixing_matrix,
                       eigendecompose_symmetric, vertex_entropies)
from .wlrefine import AttributeCodebook, LabelAssignment, label_histograms, resolve_policy, run_wl
from . import __version__

# typing imports
from typing import Any, Dict, Iterator, List, Optional, Tuple
from typing_extensions import TypedDict


logger = logging.getLogger(__name__)


class StageException(QeskException):
    """
    Exception raised if a pipeline stage fails, ``stage`` names the stage.
    """
    def __init__(self, stage: str, error: Exception):
        super().__init__(f'stage {stage} failed: {error}')
        self.stage = stage
        self.error = error


class IPsdResult(TypedDict):
    min_eigenvalue: float
    passed: bool


class IManifest(TypedDict, total=False):
    tool: str
    version: str
    config: RunConfig
    config_hash: str
    label_policy: str
    dataset: IDatasetStatistics
    codebook_sizes: List[int]
    psd: IPsdResult
    timings: Dict[str, float]


class KernelPipeline:
    """
    Holds the intermediate results of one run described by a ``RunConfig``.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.timings: Dict[str, float] = {}
        self._bundle: Optional[DatasetBundle] = None
        self._entropies: Optional[List[EntropyVector]] = None
        self._wl: Optional[Tuple[LabelAssignment, AttributeCodebook]] = None
        self._features: Optional[List[Any]] = None
        self._gram: Optional[GramMatrix] = None
        self._psd: Optional[IPsdResult] = None

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        except StageException:
            raise
        except QeskException as exc:
            logger.error('stage %s failed: %s', name, exc)
            raise StageException(name, exc)
        duration = time.perf_counter() - start
        self.timings[name] = self.timings.get(name, 0.0) + duration
        logger.info('stage %s done in %.3fs', name, duration)

    @property
    def workers(self) -> int:
        return self.config['worker_count']

    @property
    def bundle(self) -> DatasetBundle:
        if self._bundle is None:
            with self.stage('parse'):
                directory = os.path.join(self.config['dataset_dir'], self.config['dataset_name'])
                if not os.path.isdir(directory) and os.path.isfile(os.path.join(
                        self.config['dataset_dir'], f'{self.config["dataset_name"]}_A.txt')):
                    # dataset_dir points directly at the dataset files
                    directory = self.config['dataset_dir']
                self._bundle = parse_tu_dataset(directory, self.config['dataset_name'])
        return self._bundle

    def mixing_matrix(self, index: int) -> MixingMatrix:
        g = self.bundle.graphs[index]
        return average_mixing_matrix(eigendecompose_symmetric(adjacency(g), self.config['eig_group_tol']))

    @property
    def entropies(self) -> List[EntropyVector]:
        if self._entropies is None:
            bundle = self.bundle
            with self.stage('spectral'):
                self._entropies = worker_map(
                    lambda index: vertex_entropies(self.mixing_matrix(index)),
                    list(range(len(bundle))), self.workers)
        return self._entropies

    @property
    def wl(self) -> Tuple[LabelAssignment, AttributeCodebook]:
        if self._wl is None:
            bundle = self.bundle
            with self.stage('wl'):
                self._wl = run_wl(bundle, self.config['i_max'], self.config['label_policy'], self.workers)
        return self._wl

    @property
    def features(self) -> List[Any]:
        if self._features is None:
            assignment, _ = self.wl
            entropies = self.entropies if self.config['kernel_kind'] == 'qesk' else None
            with self.stage('features'):
                if entropies is not None:
                    self._features = entropic_features(assignment, entropies)
                else:
                    self._features = count_features(assignment)
        return self._features

    @property
    def gram(self) -> GramMatrix:
        if self._gram is None:
            features = self.features
            with self.stage('gram'):
                self._gram = gram(features, self.config['kernel_kind'], self.config['i_max'],
                                  self.config['normalize'], self.config['gamma'], self.workers)
        return self._gram

    @property
    def psd(self) -> IPsdResult:
        if self._psd is None:
            k = self.gram
            with self.stage('psd'):
                min_eig, passed = psd_check(k, self.config['psd_tol'])
                self._psd = {'min_eigenvalue': min_eig, 'passed': passed}
                logger.info('psd check: min eigenvalue %g, passed: %s', min_eig, passed)
        return self._psd

    def use_gram_file(self, path: str) -> GramMatrix:
        """
        Loads a previously written Gram matrix instead of computing it.
        """
        bundle = self.bundle
        with self.stage('gram'):
            k = read_gram(path)
            if len(k) != len(bundle):
                raise ConfigurationException(
                    f'gram file has {len(k)} rows, dataset {bundle.name} has {len(bundle)} graphs')
            if k.i_max != self.config['i_max'] or k.kernel_kind != kernel_kind_name(self.config):
                logger.warning('gram file was built as %s with imax=%d', k.kernel_kind, k.i_max)
            self._gram = k
        return k

    def evaluate(self) -> CvReport:
        k = self.gram
        bundle = self.bundle
        with self.stage('evaluate'):
            return cross_validate(
                k, bundle.class_labels,
                folds=self.config['folds'],
                repetitions=self.config['repetitions'],
                c_grid=self.config['c_grid'],
                seed=self.config['seed'],
                tol=self.config['smo_tol'],
                max_iter=self.config['smo_max_iter'],
                workers=self.workers,
                dataset=bundle.name
            )

    def manifest(self) -> IManifest:
        """
        Everything needed to reproduce the run, plus the stage results known so far.
        """
        data: IManifest = {
            'tool': 'django-qesk',
            'version': __version__,
            'config': self.config,
            'config_hash': config_hash(self.config),
            'label_policy': resolve_policy(self.bundle, self.config['label_policy']),
            'dataset': dataset_statistics(self.bundle),
            'timings': dict(self.timings),
        }
        if self._wl is not None:
            data['codebook_sizes'] = self._wl[1].sizes()
        if self._psd is not None:
            data['psd'] = self._psd
        return data

    def write_manifest(self, path: str) -> None:
        with open(path, 'w', encoding='ascii') as f:
            json.dump(self.manifest(), f, sort_keys=True, indent=2)
            f.write('\n')

    def inspect(self, graph_index: int) -> str:
        """
        Text dump of the intermediate quantities of one graph: mixing matrix,
        entropies, WL codes, entropic and count features, and the dataset wide
        code histograms.
        """
        bundle = self.bundle
        with self.stage('inspect'):
            if not 0 <= graph_index < len(bundle):
                raise ConfigurationException(
                    f'graph index {graph_index} out of range, {bundle.name} has {len(bundle)} graphs')
            g = bundle.graphs[graph_index]
            q = self.mixing_matrix(graph_index)
            entropies = vertex_entropies(q)
        assignment, _ = self.wl
        with self.stage('inspect'):
            labels = assignment.for_graph(graph_index)
            lines = [f'# graph {graph_index} vertices={g.vertex_count} edges={g.edge_count} '
                     f'class={bundle.class_labels[graph_index]}', '# amm']
            lines.extend(fmt_row(row) for row in q.values)
            lines.append('# entropies')
            lines.extend(fmt(value) for value in entropies.values)
            lines.append('# labels: iteration, vertex, code')
            for iteration, codes in enumerate(labels, 1):
                lines.extend(f'{iteration}, {v}, {int(code)}' for v, code in enumerate(codes))
            sections = (
                ('entropic_features', entropic_representation(labels, entropies)),
                ('count_features', count_representation(labels)),
            )
            for title, feature in sections:
                lines.append(f'# {title}: graph_id, iteration, code, value')
                for iteration, level in enumerate(feature, 1):
                    lines.extend(f'{graph_index}, {iteration}, {code}, {fmt(value)}'
                                 for code, value in sorted(level.items()))
            lines.append('# label_histogram: iteration, code, count')
            for iteration, histogram in enumerate(label_histograms(assignment), 1):
                lines.extend(f'{iteration}, {code}, {count}' for code, count in histogram.items())
        return '\n'.join(lines) + '\n'
