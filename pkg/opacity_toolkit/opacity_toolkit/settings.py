# Django settings for opacity_toolkit project.

DEBUG = False

# No database is used; every test is a SimpleTestCase.
DATABASES = {}

# Make this unique, and don't share it with anybody.
SECRET_KEY = 'opacity-toolkit-insecure-default-key'

TIME_ZONE = 'UTC'
USE_TZ = True
LANGUAGE_CODE = 'en-us'
USE_I18N = False

INSTALLED_APPS = (
    'automata',
    'constructions',
    'verifiers',
    'oracle',
)

# Knobs of the toolkit.  Command-line flags take precedence over these values.
OPACITY = {
    'FORMAT_VERSION': 1,
    'DEFAULT_SEED': 0,
    # random campaigns
    'FUZZ_COUNT': 1000,
    'FUZZ_MAX_STATES': 6,
    'FUZZ_MAX_EVENTS': 4,
    'FUZZ_WORKERS': 1,
    # random generation
    'GEN_STATES': 5,
    'GEN_EVENTS': 3,
    'GEN_OBS_RATIO': 0.67,
    'GEN_SECRET_RATIO': 0.3,
    'GEN_DENSITY': 0.2,
    'GEN_INITIAL_RATIO': 0.2,
    # length bound of the bounded language comparisons in the tests
    'LANGUAGE_DEPTH': 5,
}

# Log records go to stderr so that machine-readable output on stdout stays clean.
# Set the app loggers to DEBUG in localsettings.py to see construction sizes and timings.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(levelname)s %(asctime)s %(name)s %(message)s'
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose'
        },
    },
    'loggers': {
        'automata': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': True,
        },
        'constructions': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': True,
        },
        'verifiers': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': True,
        },
        'oracle': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': True,
        },
    }
}

try:
    from .localsettings import *
except ImportError:
    pass
