"""Network-aware top-k retrieval over social tagging data."""

from ._socialtopk import (
    ConfigError,
    Corpus,
    DomainError,
    NotFoundError,
    ParseError,
    ProximityFunction,
    Query,
    RankingKind,
    RankingSpec,
    SearchEngine,
    Semantics,
    SocialNetwork,
    TaggingStore,
    build_profile,
    cost,
    dice,
    dice_network,
    drill_delta_query,
    synthesize,
)

__all__ = [
    "ConfigError",
    "Corpus",
    "DomainError",
    "NotFoundError",
    "ParseError",
    "ProximityFunction",
    "Query",
    "RankingKind",
    "RankingSpec",
    "SearchEngine",
    "Semantics",
    "SocialNetwork",
    "TaggingStore",
    "build_profile",
    "cost",
    "dice",
    "dice_network",
    "drill_delta_query",
    "synthesize",
]
