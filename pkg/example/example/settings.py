"""
Django settings for the example/test project of django-qesk.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/3.2/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = 'qesk-example-not-secret'

DEBUG = True

ALLOWED_HOSTS = []
DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

# Application definition

INSTALLED_APPS = [
    'qesk',
    'test_full',
]

# Benchmark datasets live in <QESK_DATASET_ROOT>/<NAME>/<NAME>_A.txt etc.
QESK_DATASET_ROOT = os.environ.get('QESK_DATASET_ROOT', os.path.join(BASE_DIR, 'datasets'))
QESK_IMAX = 10
QESK_EIG_GROUP_TOL = 1e-8
QESK_SEED = 0
# QESK_WORKERS = 4

# no models, the test runner still wants a database
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'qesk': {
            'handlers': ['console'],
            'level': os.environ.get('QESK_LOGLEVEL', 'WARNING'),
        },
    },
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True
