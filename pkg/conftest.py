# Test collection wiring for pytest: the suite lives in the example Django
# project (normally run via `example/manage.py test`), so configure Django
# the same way manage.py does before test modules are imported.
import os
import sys

import django

EXAMPLE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'example')
if EXAMPLE_DIR not in sys.path:
    sys.path.insert(0, EXAMPLE_DIR)
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'example.settings')
django.setup()
