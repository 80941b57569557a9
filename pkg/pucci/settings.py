"""
Settings for the pucci project.

Holds the Django settings needed to run the management commands and the
numerical defaults shared by every solver. Nothing here is read from the
environment: runs are configured through command flags or a flat
``key=value`` config file (see ``load_config_file``).
"""
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Commands never serve requests or sign anything; the key only satisfies Django.
SECRET_KEY = 'pucci-cli-not-used-for-signing'

DEBUG = False

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'apps.cli',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# Stdout carries the emitted tables only; log records go to stderr and,
# optionally, to a rotating file.

LOG_LEVEL = 'WARNING'
LOG_PATH = None


# Radial ODE

R_EPS = 1e-8
BLOWUP_LIMIT = 1e100


# Integrator

REL_TOL = 1e-10
ABS_TOL = 1e-12
MAX_STEP = 1.0
MAX_R = 10.0


# Half-spectrum by shooting

HORIZON_DOUBLINGS = 10
ZERO_TOL = 1e-12
ZERO_XTOL = 1e-13
SIMPLICITY_FLOOR = 1e-6
DEFAULT_SAMPLES = 1000


# Bifurcation branches

BRACKET_HALF_WIDTH = 0.25
BRACKET_EXPANSION = 2.0
BRACKET_MAX_EXPANSIONS = 8
BRACKET_SAMPLES = 8
ROOT_TOL = 1e-10
BOUNDARY_ZERO_GAP = 1e-7


# Finite-difference oracle

HOWARD_MAX_ITERS = 200
POWER_TOL = 1e-10
POWER_MAX_ITERS = 1000
LINEAR_POWER_TOL = 1e-12
MAX_PRINCIPLE_TOL = 1e-10


# Command line

DEFAULT_SEED = 42
FLOAT_DIGITS = 17
TOOL_VERSION = '1.0.0'


def load_config_file(path):
    """Read a flat ``key=value`` config file into a dict of strings.

    Keys may be written with dashes or underscores (``alpha-min`` and
    ``alpha_min`` are the same key); ``#`` starts a comment.
    """
    values = {}
    with open(path, 'r') as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f'{path}:{lineno}: expected key=value, got {raw.strip()!r}')
            key, value = line.split('=', 1)
            values[key.strip().lstrip('-').replace('-', '_')] = value.strip()
    return values
