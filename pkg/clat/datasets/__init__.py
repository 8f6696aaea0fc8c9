"""Builtin Datasets."""

from ._synthetic import (
    SUBCONDITIONS,
    EMOTIONS,
    SCENARIO,
    SyntheticDatasetSpec,
    default_scenario,
    gen_dataset,
    scenario,
)
