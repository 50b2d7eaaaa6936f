# Copy this file to localsettings.py and adjust; every value set here overrides settings.py.

DEBUG = False

# Make this unique, and don't share it with anybody.
# SECRET_KEY = ''

# To change single knobs, start from the dict in settings.py:
# from .settings import OPACITY
# OPACITY = dict(OPACITY, FUZZ_WORKERS=4)
