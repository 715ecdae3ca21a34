import json
import logging
import os
from functools import lru_cache

from compat_match import constants

version = '1.0.0'

DEFAULTS_FILE = os.path.join(os.path.dirname(__file__), 'defaults.json')

logger = logging.getLogger('compat_match.config')


@lru_cache(maxsize=1)
def load_defaults() -> dict:
    """Read the packaged defaults.json once."""
    with open(DEFAULTS_FILE, 'r', encoding='utf-8') as defaults_file:
        return json.load(defaults_file)


def default_budget() -> int:
    """Node budget for the exact solvers; COMPAT_MATCH_BUDGET overrides the packaged default."""
    override = os.environ.get(constants.BUDGET_ENV_VAR)
    if override:
        try:
            budget = int(override)
        except ValueError:
            logger.warning("Ignoring non-integer {}={!r}".format(constants.BUDGET_ENV_VAR, override))
        else:
            if budget > 0:
                return budget
            logger.warning("Ignoring non-positive {}={}".format(constants.BUDGET_ENV_VAR, budget))
    return int(load_defaults()['solver']['node_budget'])


def svg_settings() -> dict:
    return dict(load_defaults()['svg'])


def generator_settings() -> dict:
    return dict(load_defaults()['generators'])


def experiment_settings() -> dict:
    return dict(load_defaults()['experiments'])
