"""
Settings access and run configuration.

All defaults can be overridden in the project's `settings.py` by the
``QESK_*`` names listed in ``DEFAULTS``. Management commands merge their
command line arguments on top of these defaults into a ``RunConfig``.
"""
from hashlib import sha256
import json
import os

from django.conf import settings

from .graph import QeskException
from . import __version__

# typing imports
from typing import Any, Dict, List, Optional
from typing_extensions import TypedDict


LABEL_POLICIES = ('given-attributes', 'degree', 'constant')
KERNEL_KINDS = ('qesk', 'wlsk')

DEFAULTS: Dict[str, Any] = {
    'QESK_DATASET_ROOT': None,
    'QESK_IMAX': 10,
    'QESK_LABEL_POLICY': None,
    'QESK_EIG_GROUP_TOL': 1e-8,
    'QESK_GAMMA': 1.0,
    'QESK_PSD_TOL': 1e-6,
    'QESK_C_GRID': [10.0 ** exp for exp in range(-3, 4)],
    'QESK_FOLDS': 10,
    'QESK_REPETITIONS': 10,
    'QESK_SEED': 0,
    'QESK_SMO_TOL': 1e-3,
    'QESK_SMO_MAX_ITER': 10 ** 7,
    'QESK_WORKERS': None,
}


class ConfigurationException(QeskException):
    """
    Exception raised for invalid or inapplicable configuration values.
    """


class RunConfig(TypedDict):
    dataset_dir: str
    dataset_name: str
    kernel_kind: str
    i_max: int
    label_policy: Optional[str]
    eig_group_tol: float
    gamma: float
    normalize: bool
    psd_tol: float
    c_grid: List[float]
    folds: int
    repetitions: int
    seed: int
    smo_tol: float
    smo_max_iter: int
    output_path: Optional[str]
    worker_count: int


def get_setting(name: str) -> Any:
    """
    Returns the value of setting `name` from `settings.py` or its default.
    """
    value = getattr(settings, name, DEFAULTS[name])
    if name == 'QESK_DATASET_ROOT' and not value:
        value = os.environ.get('QESK_DATASET_ROOT', os.getcwd())
    if name == 'QESK_WORKERS' and not value:
        value = os.cpu_count() or 1
    return value


def build_run_config(**overrides: Any) -> RunConfig:
    """
    Creates a validated ``RunConfig`` from the settings defaults.
    Overrides with value ``None`` are ignored.
    """
    config: RunConfig = {
        'dataset_dir': get_setting('QESK_DATASET_ROOT'),
        'dataset_name': '',
        'kernel_kind': 'qesk',
        'i_max': get_setting('QESK_IMAX'),
        'label_policy': get_setting('QESK_LABEL_POLICY'),
        'eig_group_tol': get_setting('QESK_EIG_GROUP_TOL'),
        'gamma': get_setting('QESK_GAMMA'),
        'normalize': False,
        'psd_tol': get_setting('QESK_PSD_TOL'),
        'c_grid': list(get_setting('QESK_C_GRID')),
        'folds': get_setting('QESK_FOLDS'),
        'repetitions': get_setting('QESK_REPETITIONS'),
        'seed': get_setting('QESK_SEED'),
        'smo_tol': get_setting('QESK_SMO_TOL'),
        'smo_max_iter': get_setting('QESK_SMO_MAX_ITER'),
        'output_path': None,
        'worker_count': get_setting('QESK_WORKERS'),
    }
    for key, value in overrides.items():
        if key not in config:
            raise ConfigurationException(f'unknown config field {key!r}')
        if value is not None:
            config[key] = value  # type: ignore
    config['c_grid'] = sorted(float(c) for c in config['c_grid'])
    validate_run_config(config)
    return config


def validate_run_config(config: RunConfig) -> None:
    """
    Checks the value ranges of a ``RunConfig``.
    Raises ``ConfigurationException`` on the first violation.
    """
    if config['kernel_kind'] not in KERNEL_KINDS:
        raise ConfigurationException(f'unknown kernel kind {config["kernel_kind"]!r}')
    if config['i_max'] < 1:
        raise ConfigurationException('i_max must be >= 1')
    if config['folds'] < 2:
        raise ConfigurationException('folds must be >= 2')
    if config['repetitions'] < 1:
        raise ConfigurationException('repetitions must be >= 1')
    if not config['eig_group_tol'] > 0:
        raise ConfigurationException('eig_group_tol must be > 0')
    if not config['c_grid'] or min(config['c_grid']) <= 0:
        raise ConfigurationException('c_grid must be a nonempty list of positive values')
    if config['normalize'] and config['kernel_kind'] != 'wlsk':
        raise ConfigurationException('normalization is only defined for the wlsk kernel')
    if config['label_policy'] is not None and config['label_policy'] not in LABEL_POLICIES:
        raise ConfigurationException(f'unknown label policy {config["label_policy"]!r}')
    if config['worker_count'] < 1:
        raise ConfigurationException('worker_count must be >= 1')


def kernel_kind_name(config: RunConfig) -> str:
    """Kind tag used in gram headers and reports."""
    if config['kernel_kind'] == 'wlsk' and config['normalize']:
        return 'wlsk-normalized'
    return config['kernel_kind']


def config_hash(config: RunConfig) -> str:
    """
    Create a hash identifying a run. Accounts all config fields except
    the worker count (results are independent of it) and the package version.
    """
    data = dict(config)
    data.pop('worker_count', None)
    data['version'] = __version__
    return sha256(json.dumps(data, sort_keys=True).encode('utf-8')).hexdigest()


def check_settings() -> None:
    """
    Validates the ``QESK_*`` settings, used by ``QeskConfig.ready``.
    """
    build_run_config()
