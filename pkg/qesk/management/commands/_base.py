from django.core.management.base import BaseCommand, CommandError

from qesk.conf import (KERNEL_KINDS, LABEL_POLICIES, ConfigurationException, RunConfig, build_run_config,
                       kernel_kind_name)
from qesk.graph import QeskException
from qesk.pipeline import KernelPipeline

# typing imports
from typing import Any, Dict, List


#: exit code of runs whose gram matrix fails the psd check
PSD_FAILURE = 3


def float_list(value: str) -> List[float]:
    return [float(token) for token in value.split(',') if token.strip()]


class PipelineCommand(BaseCommand):
    """
    Base class of the kernel commands, adds the common run arguments and
    translates toolkit errors into ``CommandError``.
    """
    #: file suffix of the main output
    output_suffix = ''

    def add_arguments(self, parser):
        parser.add_argument('--dataset', required=True, dest='dataset_name',
                            help='dataset name, e.g. MUTAG')
        parser.add_argument('--dataset-dir', dest='dataset_dir',
                            help='directory holding the dataset directory (default: QESK_DATASET_ROOT)')
        parser.add_argument('--kind', dest='kernel_kind', choices=KERNEL_KINDS, default='qesk')
        parser.add_argument('--imax', dest='i_max', type=int)
        parser.add_argument('--label-policy', dest='label_policy', choices=LABEL_POLICIES)
        parser.add_argument('--eig-group-tol', dest='eig_group_tol', type=float)
        parser.add_argument('--gamma', type=float)
        parser.add_argument('--normalize', action='store_true', help='cosine normalization (wlsk only)')
        parser.add_argument('--psd-tol', dest='psd_tol', type=float)
        parser.add_argument('--workers', dest='worker_count', type=int)
        parser.add_argument('--output', dest='output_path')

    def build_config(self, options: Dict[str, Any], **extra: Any) -> RunConfig:
        self.verbosity = options.get('verbosity', 1)
        fields = ('dataset_name', 'dataset_dir', 'kernel_kind', 'i_max', 'label_policy',
                  'eig_group_tol', 'gamma', 'normalize', 'psd_tol', 'worker_count', 'output_path')
        overrides = {name: options.get(name) for name in fields}
        overrides.update(extra)
        try:
            config = build_run_config(**overrides)
        except ConfigurationException as exc:
            raise CommandError(f'configuration: {exc}')
        if not config['output_path']:
            config['output_path'] = f'{config["dataset_name"]}_{kernel_kind_name(config)}{self.output_suffix}'
        return config

    def run(self, pipeline: KernelPipeline) -> None:
        raise NotImplementedError

    def execute_pipeline(self, config: RunConfig) -> KernelPipeline:
        pipeline = KernelPipeline(config)
        try:
            self.run(pipeline)
        except QeskException as exc:
            raise CommandError(str(exc))
        return pipeline

    def check_psd(self, pipeline: KernelPipeline) -> None:
        psd = pipeline.psd
        if not psd['passed']:
            raise CommandError(
                f'gram matrix failed the psd check (min eigenvalue {psd["min_eigenvalue"]:g})',
                returncode=PSD_FAILURE)
