"""Configuration defaults and loaders.

Defaults live here as module constants. The only environment override is the
output directory; simulation settings come from a key=value file.
"""

import logging
import os
from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values

from crosszone.core.errors import SequenceFormatError
from crosszone.core.models import SimConfig

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "CROSSZONE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"

DEFAULT_SEED = 20200721
SEARCH_MAX_N = 26
NAIVE_MAX_N = 12
SPLIT_DEPTH = 8
MAX_SEARCH_CANDIDATES = 2**34
LS_CONDITION_LIMIT = 1e12
ZERO_TOLERANCE = 1e-9
TARGET_ENERGY = 32.0

SIM_CONFIG_KEYS = ("ebno_grid", "trials", "rng_seed", "n_r", "paths", "workers")


def output_dir(default: Optional[Union[str, Path]] = None) -> Path:
    """Resolve the output directory.

    Args:
        default: Directory to use when the environment does not override it

    Returns:
        The output directory path (not created)
    """
    fallback = str(default) if default is not None else DEFAULT_OUTPUT_DIR
    return Path(os.environ.get(OUTPUT_DIR_ENV, fallback))


def parse_sim_values(values: Dict[str, Optional[str]]) -> SimConfig:
    """Validate raw key=value pairs into a SimConfig.

    Args:
        values: Mapping of recognised keys to their raw string values

    Returns:
        SimConfig with defaults filled in for missing keys

    Raises:
        SequenceFormatError: For unknown keys or unparsable values
    """
    unknown = sorted(set(values) - set(SIM_CONFIG_KEYS))
    if unknown:
        raise SequenceFormatError(f"unknown simulation config keys: {', '.join(unknown)}")

    fields: Dict[str, object] = {}
    try:
        for key, raw in values.items():
            if raw is None or raw.strip() == "":
                continue
            if key == "ebno_grid":
                fields[key] = [float(v) for v in raw.split(",") if v.strip()]
            else:
                fields[key] = int(raw)
    except ValueError as e:
        raise SequenceFormatError(f"bad simulation config value: {e}") from e

    fields.setdefault("rng_seed", DEFAULT_SEED)
    return SimConfig(**fields)


def load_sim_config(path: Union[str, Path]) -> SimConfig:
    """Load a line-oriented key=value simulation config file.

    Args:
        path: Path to the config file

    Returns:
        Validated SimConfig
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"simulation config not found: {path}")
    values = dotenv_values(path)
    logger.info(f"Loaded simulation config from {path} ({len(values)} keys)")
    return parse_sim_values(dict(values))
