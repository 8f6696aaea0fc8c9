"""Condition schema and metadata ingestion"""

import numpy as np
import pandas as pd
import attr

from .._errors import SchemaError

UNKNOWN = 'Unknown'
KINDS = ('categorical', 'distribution', 'text')


@attr.s(frozen=True, auto_attribs=True)
class SubConditionDescriptor:
    """One category of conditioning inside a multi-condition

    Attributes
    ----------
    name: `str`
        Sub-condition name, e.g. 'style'.
    kind: `str`
        One of {'categorical', 'distribution', 'text'}.
    dim: `int`
        Vocabulary size (categorical, Unknown included),
        number of outcomes (distribution) or embedding width (text).
    vocab: `tuple`
        One-hot order of a categorical vocabulary,
        outcome order of a distribution, empty for text.
    seed: `int`
        Seed of the token hasher, text only.
    """
    name: str
    kind: str = attr.ib(validator=attr.validators.in_(KINDS))
    dim: int
    vocab: tuple = attr.ib(default=(), converter=tuple)
    seed: int = 0

    def __attrs_post_init__(self):
        if self.dim < 1:
            raise SchemaError(f"sub-condition '{self.name}' must have "
                              f"dim >= 1, got {self.dim}")
        if self.kind == 'categorical' and UNKNOWN not in self.vocab:
            raise SchemaError(f"categorical sub-condition '{self.name}' "
                              f"lacks the reserved '{UNKNOWN}' entry")
        if self.kind != 'text' and len(self.vocab) != self.dim:
            raise SchemaError(f"sub-condition '{self.name}': vocabulary "
                              f"size {len(self.vocab)} != dim {self.dim}")

    def index(self, label):
        """One-hot position of `label`; unseen labels map to Unknown"""
        if self.kind != 'categorical':
            raise SchemaError(f"'{self.name}' is not categorical")
        if label in self.vocab:
            return self.vocab.index(label)
        return self.vocab.index(UNKNOWN)

    def to_dict(self):
        dict_desc = {'name': self.name,
                     'kind': self.kind,
                     'dim': int(self.dim),
                     'vocab': list(self.vocab)}
        if self.kind == 'text':
            dict_desc['seed'] = int(self.seed)
        return dict_desc


@attr.s(frozen=True)
class ConditionSchema:
    """Ordered sub-conditions spanning the condition space

    Attributes
    ----------
    subconditions: `tuple` of `SubConditionDescriptor`
    """
    subconditions = attr.ib(converter=tuple)

    def __attrs_post_init__(self):
        if len(self.subconditions) == 0:
            raise SchemaError("a schema needs at least one sub-condition")
        names = [x.name for x in self.subconditions]
        dups = sorted({x for x in names if names.count(x) > 1})
        if len(dups) > 0:
            raise SchemaError(f"duplicate sub-condition names: {dups}")

    def __len__(self):
        return len(self.subconditions)

    def __iter__(self):
        return iter(self.subconditions)

    def __getitem__(self, name):
        for x in self.subconditions:
            if x.name == name:
                return x
        raise SchemaError(f"unknown sub-condition '{name}'. "
                          f"Available sub-conditions are: {self.names}")

    @property
    def names(self):
        return tuple(x.name for x in self.subconditions)

    @property
    def total_dim(self):
        return int(sum(x.dim for x in self.subconditions))

    @property
    def slices(self):
        """Block of each sub-condition in the assembled vector"""
        dict_slices = dict()
        start = 0
        for x in self.subconditions:
            dict_slices[x.name] = slice(start, start + x.dim)
            start += x.dim
        return dict_slices

    def to_dict(self):
        return {'subconditions': [x.to_dict() for x in self.subconditions]}

    @classmethod
    def from_dict(cls, dict_schema):
        try:
            return cls([SubConditionDescriptor(**x)
                        for x in dict_schema['subconditions']])
        except (KeyError, TypeError) as e:
            raise SchemaError(f"malformed schema: {e}")


@attr.s(frozen=True, auto_attribs=True)
class DatasetRecord:
    """Raw annotations of one sample

    Attributes
    ----------
    sample_id: `str`
    categorical: `dict`
        sub-condition -> label (None or 'Unknown' for an explicit Unknown)
    distribution: `dict`
        sub-condition -> {outcome: annotator count}
    text: `dict`
        sub-condition -> list of tokens
    image: `int`
        Row of the image vector in the dataset's image container.
    condition: `str`
        Name of the scenario condition the sample was drawn for, if any.
    """
    sample_id: str
    categorical: dict = attr.ib(factory=dict)
    distribution: dict = attr.ib(factory=dict)
    text: dict = attr.ib(factory=dict)
    image: int = None
    condition: str = None

    def to_json(self):
        dict_record = {'id': self.sample_id,
                       'categorical': self.categorical,
                       'distribution': self.distribution,
                       'text': self.text}
        if self.image is not None:
            dict_record['image'] = int(self.image)
        if self.condition is not None:
            dict_record['condition'] = self.condition
        return dict_record

    @classmethod
    def from_json(cls, dict_record):
        return cls(sample_id=str(dict_record['id']),
                   categorical=dict(dict_record.get('categorical', {})),
                   distribution=dict(dict_record.get('distribution', {})),
                   text={k: list(v) for k, v in
                         dict_record.get('text', {}).items()},
                   image=dict_record.get('image'),
                   condition=dict_record.get('condition'))


def _declared_subconditions(records):
    """Sub-conditions in order of first appearance, categorical first"""
    declared = dict()
    for kind in KINDS:
        for record in records:
            for name in getattr(record, kind).keys():
                if name in declared and declared[name] != kind:
                    raise SchemaError(
                        f"sub-condition '{name}' is declared both as "
                        f"'{declared[name]}' and '{kind}'")
                declared.setdefault(name, kind)
    return list(declared.items())


def ingest_metadata(records,
                    min_count=100,
                    text_dim=32,
                    subconditions=None,
                    text_seed=0):
    """Build the condition schema from dataset metadata

    Categorical labels with a support below `min_count` are folded into
    the reserved Unknown entry.

    Parameters
    ----------
    records: `list` of `DatasetRecord`
        Dataset metadata.
    min_count: `int`, optional (default: 100)
        Minimum support of a categorical label.
    text_dim: `int`, optional (default: 32)
        Embedding width of text sub-conditions.
    subconditions: `list`, optional (default: None)
        Declared (name, kind) pairs in schema order.
        By default they are inferred from the records,
        categorical first, then distributions, then text.
    text_seed: `int`, optional (default: 0)
        Seed of the token hasher.

    Returns
    -------
    schema: `ConditionSchema`
    df_freq: `pandas.DataFrame`
        Support of every surviving categorical entry,
        with columns ['subcondition', 'entry', 'support'].
    """
    if records is None or len(records) == 0:
        raise ValueError("`records` is empty")
    if min_count < 1:
        raise ValueError(f"`min_count` must be >= 1, got {min_count}")
    if subconditions is None:
        subconditions = _declared_subconditions(records)
    for record in records:
        for name, kind in subconditions:
            if name not in getattr(record, kind):
                raise SchemaError(f"record '{record.sample_id}' is missing "
                                  f"{kind} sub-condition '{name}'")

    list_desc = []
    list_freq = []
    for name, kind in subconditions:
        if kind == 'categorical':
            labels = pd.Series(
                [UNKNOWN if r.categorical[name] is None
                 else str(r.categorical[name]) for r in records])
            counts = labels.value_counts()
            surviving = sorted(x for x in counts.index
                               if x != UNKNOWN and counts[x] >= min_count)
            vocab = surviving + [UNKNOWN]
            n_unknown = int(len(labels) - counts[surviving].sum())
            for x in surviving:
                list_freq.append([name, x, int(counts[x])])
            list_freq.append([name, UNKNOWN, n_unknown])
            list_desc.append(SubConditionDescriptor(
                name=name, kind=kind, dim=len(vocab), vocab=vocab))
        elif kind == 'distribution':
            outcomes = set()
            for r in records:
                if r.distribution[name] is not None:
                    outcomes.update(r.distribution[name].keys())
            vocab = sorted(outcomes)
            if len(vocab) == 0:
                raise SchemaError(f"distribution '{name}' has no outcomes")
            list_desc.append(SubConditionDescriptor(
                name=name, kind=kind, dim=len(vocab), vocab=vocab))
        else:
            list_desc.append(SubConditionDescriptor(
                name=name, kind=kind, dim=text_dim, seed=text_seed))
    schema = ConditionSchema(list_desc)
    df_freq = pd.DataFrame(list_freq,
                           columns=['subcondition', 'entry', 'support'])
    n_folded = int(sum(x.dim - 1 for x in schema
                       if x.kind == 'categorical'))
    print(f'#sub-conditions: {len(schema)}, '
          f'#categorical entries kept: {n_folded}')
    return schema, df_freq


def remap_records(records, schema):
    """Fold labels outside the schema vocabularies into Unknown

    Parameters
    ----------
    records: `list` of `DatasetRecord`
    schema: `ConditionSchema`

    Returns
    -------
    records: `list` of `DatasetRecord`
        New records; the inputs are not modified.
    """
    list_records = []
    for record in records:
        categorical = dict(record.categorical)
        for x in schema:
            if x.kind != 'categorical' or x.name not in categorical:
                continue
            label = categorical[x.name]
            if label is None or str(label) not in x.vocab:
                categorical[x.name] = UNKNOWN
        list_records.append(attr.evolve(record, categorical=categorical))
    return list_records


def condition_shape(schema):
    """Number of condition entries of every sub-condition

    Parameters
    ----------
    schema: `ConditionSchema`

    Returns
    -------
    c_shape: `numpy.ndarray`
        (dim_1, ..., dim_d) in schema order.
    """
    return np.array([x.dim for x in schema], dtype=np.int64)
