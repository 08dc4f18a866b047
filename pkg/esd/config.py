# Python packages
import os
# Local modules
from esd.errors import ConfigError

ORACLE_BOUND_ENV = 'ESD_ORACLE_BOUND'
DEFAULT_ORACLE_BOUND = 20
DEFAULT_MAX_CUTS = 10 ** 6
TRACE_VERSION = 1


def oracle_bound(bound=None):
    """
    Returns the element limit for brute-force oracles: an explicit bound
    wins, then the ESD_ORACLE_BOUND environment variable, then the default
    """
    if bound is None:
        bound = os.environ.get(ORACLE_BOUND_ENV, DEFAULT_ORACLE_BOUND)
    try:
        bound = int(bound)
    except (TypeError, ValueError):
        raise ConfigError("Oracle bound must be an integer, got %r" % bound)
    if bound < 0:
        raise ConfigError("Oracle bound must be non-negative, got %d" % bound)
    return bound
