# Sphinx configuration for django-qesk.
import os
import sys
sys.path.insert(0, os.path.abspath('../example'))

# autodoc imports the app, which needs configured settings
import django
os.environ['DJANGO_SETTINGS_MODULE'] = 'example.settings'
django.setup()

from qesk import __version__

project = 'django-qesk'
copyright = '2022 django-qesk authors'
author = 'django-qesk authors'
version = release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosectionlabel',
]
master_doc = 'index'
exclude_patterns = ['_build']
html_theme = 'sphinx_rtd_theme'
autodoc_member_order = 'bysource'
