from django.apps import AppConfig
from django.core.exceptions import ImproperlyConfigured


class QeskConfig(AppConfig):
    name = 'qesk'
    verbose_name = 'Quantum entropic subtree kernels'

    def ready(self):
        from .conf import ConfigurationException, check_settings
        try:
            check_settings()
        except ConfigurationException as exc:
            raise ImproperlyConfigured(f'invalid QESK_* setting: {exc}')
