import yaml

import copy
import logging

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "transgression": {
        "pivot_order": "lex",
        "ce_sign": 1,
    },
    "wonderful": {
        "degree_bound": 6,
        "check_membership": True,
    },
    "spectral": {
        "seed": 1,
        "trials": 100,
        "max_dim": 4,
        "max_length": 3,
        "k_length": 2,
    },
    "logging": {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s - %(levelname)s - %(filename)s (%(process)d): %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "standard",
                "level": "INFO",
                "stream": "ext://sys.stderr",
            },
        },
        "loggers": {
            "root": {
                "handlers": ["console"],
                "level": "INFO",
            },
        },
    },
}


def merge_config(loaded: dict | None) -> dict:
    """Overlay loaded sections on the defaults; the logging section is replaced as a whole."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    for section, values in (loaded or {}).items():
        if section == "logging" or not isinstance(values, dict) or not isinstance(config.get(section), dict):
            config[section] = values
        else:
            config[section].update(values)
    return config


def load_config(config_file: str | None = None) -> dict:

    if config_file is None:
        return merge_config(None)

    try:
        with open(config_file, 'r') as file:
            loaded = yaml.safe_load(file)
    except Exception as e:
        logger.error(f"Error reading config file: {e}")
        raise

    if loaded is not None and not isinstance(loaded, dict):
        raise ValueError(f"Config file {config_file} must contain a mapping, got {type(loaded).__name__}.")
    return merge_config(loaded)
