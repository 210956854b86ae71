"""Python bindings for the symbiolife simulator."""

from ._core import (
    ConfigError,
    Error,
    ExperimentConfig,
    GameFactors,
    GameOutcome,
    MalformedCsv,
    MalformedRle,
    SeedGenome,
    __version__,
    cmd_report,
    cmd_run,
    emit_rle,
    fitness_vs_random,
    load_config,
    measure_vs_past_winners,
    measure_vs_random,
    parse_config,
    parse_rle,
    pearson_significance,
    run_game,
    welch_t_test,
)

__all__ = [
    "ConfigError",
    "Error",
    "ExperimentConfig",
    "GameFactors",
    "GameOutcome",
    "MalformedCsv",
    "MalformedRle",
    "SeedGenome",
    "__version__",
    "cmd_report",
    "cmd_run",
    "emit_rle",
    "fitness_vs_random",
    "load_config",
    "measure_vs_past_winners",
    "measure_vs_random",
    "parse_config",
    "parse_rle",
    "pearson_significance",
    "run_game",
    "welch_t_test",
]
