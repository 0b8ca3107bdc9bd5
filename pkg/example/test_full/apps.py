from django.apps import AppConfig


class TestFullConfig(AppConfig):
    name = 'test_full'
