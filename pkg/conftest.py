# Test collection wiring: the apps live under opacity_toolkit/ and expect
# Django to be configured, as `python manage.py test` would do.
import os
import sys

import django

PROJECT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'opacity_toolkit')
if PROJECT_DIR not in sys.path:
    sys.path.insert(0, PROJECT_DIR)
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'opacity_toolkit.settings')
django.setup()
