"""
Pydantic models of every JSON document the command line emits.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Document(BaseModel):
    model_config = ConfigDict(extra='forbid')


class RankedSet(_Document):
    nodes: List[int]
    estimate: float
    labels: Optional[List[str]] = None


class ThetaRung(_Document):
    theta: int
    jaccard: Optional[float] = Field(None, description="Similarity to the previous rung; absent on the first")


class EstimateDocument(_Document):
    """Output of the mpds and nds subcommands."""

    mode: str
    notion: str
    k: int
    theta: int
    seed: int
    l_m: Optional[int] = None
    results: List[RankedSet]
    bounds: Optional[Dict[str, float]] = None
    warnings: List[str] = Field(default_factory=list)
    stats: Optional[Dict[str, float]] = None
    convergence: Optional[List[ThetaRung]] = None


class MatchingCheck(_Document):
    lhs: float
    rhs: float
    edges: int
    nodes: int


class OracleDocument(_Document):
    """Output of the oracle subcommand; only the requested parts are present."""

    notion: Optional[str] = None
    nodes: Optional[List[int]] = None
    tau: Optional[float] = None
    gamma: Optional[float] = None
    mode: Optional[str] = None
    k: Optional[int] = None
    l_m: Optional[int] = None
    results: Optional[List[RankedSet]] = None
    matching: Optional[MatchingCheck] = None
    warnings: List[str] = Field(default_factory=list)


class BaselineSet(_Document):
    nodes: List[int]
    expected_density: float
    tau: Optional[float] = None


class EdsDocument(_Document):
    """Expected densest subgraph next to the skeleton's densest subgraph."""

    notion: str
    eds: BaselineSet
    dds: BaselineSet
    warnings: List[str] = Field(default_factory=list)


class MetricsDocument(_Document):
    notion: str
    nodes: List[int]
    expected_density: float
    probabilistic_density: Optional[float] = None
    clustering_coefficient: float
    purity: Optional[float] = None
    rank_f1: Optional[float] = None
    warnings: List[str] = Field(default_factory=list)
