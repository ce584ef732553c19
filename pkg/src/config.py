"""
Runtime configuration for the udense toolkit.

Every setting is resolved from an explicit constructor argument first, then
from the environment (a local .env file is loaded on import), then from the
built-in default.
"""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(float(raw)) if 'e' in raw.lower() else int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


class Settings:
    """
    Tunable limits and defaults shared by the library and the CLI.

    Mirrors the environment variables documented in readme.md
    (UDENSE_LOG, UDENSE_PROB_FLOOR, UDENSE_MAX_DENSEST, ...).
    """

    def __init__(self,
                 log_level: Optional[str] = None,
                 probability_floor: Optional[float] = None,
                 max_densest: Optional[int] = None,
                 pattern_node_cap: Optional[int] = None,
                 miner_cap: Optional[int] = None,
                 oracle_max_edges: Optional[int] = None,
                 oracle_max_nodes: Optional[int] = None,
                 threads: Optional[int] = None,
                 weight_quantum: Optional[int] = None,
                 world_cache_size: Optional[int] = None):
        """
        Initialize settings.

        Args:
            log_level: Logging level name (defaults to UDENSE_LOG env var)
            probability_floor: Floor for derived edge probabilities (UDENSE_PROB_FLOOR)
            max_densest: Cap on densest subgraphs enumerated per world (UDENSE_MAX_DENSEST)
            pattern_node_cap: Largest pattern accepted for instance listing (UDENSE_PATTERN_NODE_CAP)
            miner_cap: Closed sets the itemset miner may explore (UDENSE_MINER_CAP)
            oracle_max_edges: Oracle limit on uncertain edges (UDENSE_ORACLE_MAX_EDGES)
            oracle_max_nodes: Oracle limit on nodes (UDENSE_ORACLE_MAX_NODES)
            threads: Default worker count (UDENSE_THREADS)
            weight_quantum: Integer scale for expected-density weights (UDENSE_WEIGHT_QUANTUM)
            world_cache_size: Per-worker memo of solved worlds (UDENSE_WORLD_CACHE)

        Raises:
            ValueError: If a value is out of range or not parseable
        """
        self.log_level = (log_level or os.getenv('UDENSE_LOG', 'INFO')).upper()
        self.probability_floor = probability_floor if probability_floor is not None \
            else _env_float('UDENSE_PROB_FLOOR', 1e-9)
        self.max_densest = max_densest if max_densest is not None \
            else _env_int('UDENSE_MAX_DENSEST', 1_000_000)
        self.pattern_node_cap = pattern_node_cap if pattern_node_cap is not None \
            else _env_int('UDENSE_PATTERN_NODE_CAP', 6)
        self.miner_cap = miner_cap if miner_cap is not None \
            else _env_int('UDENSE_MINER_CAP', 1_000_000)
        self.oracle_max_edges = oracle_max_edges if oracle_max_edges is not None \
            else _env_int('UDENSE_ORACLE_MAX_EDGES', 20)
        self.oracle_max_nodes = oracle_max_nodes if oracle_max_nodes is not None \
            else _env_int('UDENSE_ORACLE_MAX_NODES', 10)
        self.threads = threads if threads is not None else _env_int('UDENSE_THREADS', 1)
        self.weight_quantum = weight_quantum if weight_quantum is not None \
            else _env_int('UDENSE_WEIGHT_QUANTUM', 1_000_000)
        self.world_cache_size = world_cache_size if world_cache_size is not None \
            else _env_int('UDENSE_WORLD_CACHE', 65536)

        if not 0 < self.probability_floor < 1:
            raise ValueError("UDENSE_PROB_FLOOR must lie in (0, 1)")
        for name in ('max_densest', 'pattern_node_cap', 'miner_cap', 'oracle_max_edges',
                     'oracle_max_nodes', 'threads', 'weight_quantum'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.world_cache_size < 0:
            raise ValueError("world_cache_size must be non-negative")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings resolved from the environment."""
    return Settings()
