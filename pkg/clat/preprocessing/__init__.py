"""Preprocessing"""

from ._schema import (
    UNKNOWN,
    SubConditionDescriptor,
    ConditionSchema,
    DatasetRecord,
    ingest_metadata,
    remap_records,
    condition_shape,
)
from ._encoding import (
    WILDCARD,
    MultiCondition,
    hash_tokens,
    encode_subcondition,
    assemble_condition_vector,
    assemble_condition_matrix,
    apply_wildcard,
    stochastic_mask,
    make_condition,
    record_to_condition,
)
