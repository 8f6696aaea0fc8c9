"""Multi-condition encoding, wildcards and stochastic masking"""

import math
import numpy as np
import attr
from sklearn.feature_extraction import FeatureHasher

from .._errors import SchemaError
from ._schema import UNKNOWN


class _Wildcard:
    """Marker of a sub-condition that is left unspecified"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'WILDCARD'

    def __reduce__(self):
        return (_Wildcard, ())


WILDCARD = _Wildcard()


def _freeze(value):
    if value is WILDCARD:
        return value
    if isinstance(value, np.ndarray):
        value = np.array(value, dtype=np.float64)
        if value.ndim != 1:
            raise ValueError("distribution values must be 1-D")
        if (value < 0).any() or abs(value.sum() - 1.0) > 1e-9:
            raise ValueError("distribution values must be non-negative "
                             "and sum to 1")
        value.setflags(write=False)
        return value
    if isinstance(value, (list, tuple)):
        return tuple(str(x) for x in value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    raise ValueError(f"unsupported sub-condition value: {value!r}")


@attr.s(frozen=True, eq=False)
class MultiCondition:
    """A condition made of named sub-conditions

    Values are a categorical index (`int`), a probability vector
    (`numpy.ndarray`), a token sequence (`tuple` of `str`)
    or `WILDCARD`.

    Attributes
    ----------
    names: `tuple` of `str`
    values: `tuple`
    """
    names = attr.ib(converter=tuple)
    values = attr.ib(converter=lambda x: tuple(_freeze(v) for v in x))

    def __attrs_post_init__(self):
        if len(self.names) != len(self.values):
            raise SchemaError(f"{len(self.names)} names for "
                              f"{len(self.values)} values")

    def __getitem__(self, name):
        if name not in self.names:
            raise SchemaError(f"unknown sub-condition '{name}'")
        return self.values[self.names.index(name)]

    def __eq__(self, other):
        if not isinstance(other, MultiCondition):
            return NotImplemented
        if self.names != other.names:
            return False
        for a, b in zip(self.values, other.values):
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if not (isinstance(a, np.ndarray)
                        and isinstance(b, np.ndarray)
                        and np.array_equal(a, b)):
                    return False
            elif a != b:
                return False
        return True

    @property
    def wildcards(self):
        """Names of the unspecified sub-conditions"""
        return tuple(n for n, v in zip(self.names, self.values)
                     if v is WILDCARD)


def hash_tokens(tokens, dim, seed=0):
    """Fixed-width L2-normalised embedding of a token sequence

    Every token `t` is hashed as the string f'{seed}:{t}' with the
    32-bit MurmurHash3: the bucket is |h| mod `dim` and the sign is +1
    when h >= 0, -1 otherwise. Bucket values are summed and the result
    is scaled to unit norm. When the signed sum cancels to zero the
    tokens are counted unsigned instead.

    Parameters
    ----------
    tokens: `list` of `str`
    dim: `int`
        Embedding width.
    seed: `int`, optional (default: 0)
        Salt of the hash.

    Returns
    -------
    v: `numpy.ndarray`
        Vector of shape (dim, ) with unit norm.
    """
    tokens = [str(x) for x in tokens]
    if len(tokens) == 0:
        raise ValueError("cannot embed an empty token sequence")
    salted = [[f'{seed}:{x}' for x in tokens]]
    for alternate_sign in [True, False]:
        hasher = FeatureHasher(n_features=dim,
                               input_type='string',
                               alternate_sign=alternate_sign)
        v = np.asarray(hasher.transform(salted).toarray()[0],
                       dtype=np.float64)
        norm = np.linalg.norm(v)
        if norm > 0:
            break
    return v / norm


def encode_subcondition(descriptor, value):
    """Encode one concrete sub-condition value

    Parameters
    ----------
    descriptor: `SubConditionDescriptor`
    value:
        Categorical: index or label. Distribution: {outcome: count}
        or an array of counts in vocabulary order.
        Text: sequence of tokens.

    Returns
    -------
    v: `numpy.ndarray`
        Vector of shape (descriptor.dim, ).
    """
    if value is WILDCARD:
        raise ValueError("a wildcard has no encoding of its own, "
                         "use `assemble_condition_vector`")
    if descriptor.kind == 'categorical':
        if isinstance(value, str):
            value = descriptor.index(value)
        if not isinstance(value, (int, np.integer)) or isinstance(value,
                                                                   bool):
            raise ValueError(f"'{descriptor.name}': categorical value must "
                             f"be an index or a label, got {value!r}")
        if value < 0 or value >= descriptor.dim:
            raise ValueError(f"'{descriptor.name}': index {value} is out of "
                             f"range [0, {descriptor.dim})")
        v = np.zeros(descriptor.dim)
        v[value] = 1.0
        return v
    if descriptor.kind == 'distribution':
        if isinstance(value, dict):
            unseen = sorted(set(value.keys()) - set(descriptor.vocab))
            if len(unseen) > 0:
                raise SchemaError(f"'{descriptor.name}': unknown "
                                  f"outcomes {unseen}")
            value = [value.get(x, 0) for x in descriptor.vocab]
        v = np.asarray(value, dtype=np.float64).ravel()
        if v.shape[0] != descriptor.dim:
            raise ValueError(f"'{descriptor.name}': expected "
                             f"{descriptor.dim} counts, got {v.shape[0]}")
        if (v < 0).any():
            raise ValueError(f"'{descriptor.name}': negative counts")
        total = v.sum()
        if total <= 0:
            raise ValueError(f"'{descriptor.name}': counts sum to zero")
        return v / total
    return hash_tokens(value, descriptor.dim, seed=descriptor.seed)


def assemble_condition_vector(zeta, schema):
    """Concatenate sub-condition encodings in schema order

    Wildcard sub-conditions contribute an all-zero block.

    Parameters
    ----------
    zeta: `MultiCondition`
    schema: `ConditionSchema`

    Returns
    -------
    c: `numpy.ndarray`
        Vector of shape (schema.total_dim, ).
    """
    if zeta.names != schema.names:
        raise SchemaError(f"condition has sub-conditions {zeta.names}, "
                          f"the schema expects {schema.names}")
    list_blocks = []
    for desc, value in zip(schema, zeta.values):
        if value is WILDCARD:
            list_blocks.append(np.zeros(desc.dim))
        else:
            list_blocks.append(encode_subcondition(desc, value))
    return np.concatenate(list_blocks)


def assemble_condition_matrix(list_zeta, schema):
    """Stack condition vectors of several multi-conditions row-wise"""
    return np.vstack([assemble_condition_vector(x, schema)
                      for x in list_zeta])


def apply_wildcard(zeta, mask):
    """Replace the named sub-conditions by `WILDCARD`

    Parameters
    ----------
    zeta: `MultiCondition`
    mask: `list` of `str`
        Sub-conditions to leave unspecified.

    Returns
    -------
    zeta: `MultiCondition`
        A new multi-condition; the input is not modified.
    """
    unknown = sorted(set(mask) - set(zeta.names))
    if len(unknown) > 0:
        raise SchemaError(f"cannot mask unknown sub-conditions {unknown}")
    values = [WILDCARD if n in mask else v
              for n, v in zip(zeta.names, zeta.values)]
    return attr.evolve(zeta, values=values)


def stochastic_mask(zeta, k=None, p=0.5, rng=None):
    """Randomly wildcard sub-conditions during training

    `k` distinct sub-conditions are drawn uniformly without replacement
    and each of them is masked independently with probability `p`.

    Parameters
    ----------
    zeta: `MultiCondition`
    k: `int`, optional (default: None)
        Number of candidate sub-conditions. None means ceil(|S|/2).
    p: `float`, optional (default: 0.5)
        Masking probability of a candidate.
    rng: `numpy.random.Generator`
        Source of randomness.

    Returns
    -------
    zeta: `MultiCondition`
    """
    n = len(zeta.names)
    if k is None:
        k = math.ceil(n / 2)
    if k < 0 or k > n:
        raise ValueError(f"`k` must lie in [0, {n}], got {k}")
    if not 0 <= p <= 1:
        raise ValueError(f"`p` must lie in [0, 1], got {p}")
    if rng is None:
        raise ValueError("`rng` must be a numpy Generator")
    candidates = rng.choice(n, size=k, replace=False)
    hits = rng.random(k) < p
    mask = [zeta.names[i] for i, hit in zip(candidates, hits) if hit]
    return apply_wildcard(zeta, mask)


def make_condition(schema, values):
    """Build a multi-condition from readable values

    Parameters
    ----------
    schema: `ConditionSchema`
    values: `dict`
        sub-condition -> label, index, {outcome: count} or tokens.
        Missing sub-conditions, None and `WILDCARD` are wildcards.

    Returns
    -------
    zeta: `MultiCondition`
    """
    unknown = sorted(set(values.keys()) - set(schema.names))
    if len(unknown) > 0:
        raise SchemaError(f"unknown sub-conditions {unknown}. "
                          f"Available sub-conditions are: {schema.names}")
    list_values = []
    for desc in schema:
        value = values.get(desc.name)
        if value is None or value is WILDCARD:
            list_values.append(WILDCARD)
        elif desc.kind == 'categorical':
            if isinstance(value, str):
                value = desc.index(value)
            list_values.append(int(value))
        elif desc.kind == 'distribution':
            list_values.append(encode_subcondition(desc, value))
        else:
            list_values.append(tuple(value))
    return MultiCondition(names=schema.names, values=list_values)


def record_to_condition(record, schema):
    """Multi-condition annotated by a dataset record

    A categorical label outside the vocabulary maps to Unknown;
    an explicit null distribution or text becomes a wildcard.
    """
    values = dict()
    for desc in schema:
        field = getattr(record, desc.kind)
        if desc.name not in field:
            raise SchemaError(f"record '{record.sample_id}' is missing "
                              f"{desc.kind} sub-condition '{desc.name}'")
        value = field[desc.name]
        if desc.kind == 'categorical':
            value = desc.index(UNKNOWN if value is None else str(value))
        values[desc.name] = value
    return make_condition(schema, values)
