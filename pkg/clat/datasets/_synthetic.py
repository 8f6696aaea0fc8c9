"""Synthetic condition-labeled datasets"""

import os
import numpy as np
import attr

from .._settings import settings
from .._utils import stage_rng
from ..preprocessing._schema import (
    UNKNOWN,
    SubConditionDescriptor,
    ConditionSchema,
    DatasetRecord,
)
from ..readwrite import (
    write_metadata,
    write_matrix,
    read_dataset,
)

SUBCONDITIONS = ['style', 'genre', 'painter', 'medium',
                 'era', 'palette', 'school', 'subject']
EMOTIONS = ['amusement', 'awe', 'contentment', 'fear', 'sadness']

# A/B and C/D differ in two sub-conditions, E differs from all in eight
SCENARIO = {
    'A': (0, 0, 0, 0, 0, 0, 0, 0),
    'B': (1, 1, 0, 0, 0, 0, 0, 0),
    'C': (0, 0, 1, 1, 1, 1, 1, 1),
    'D': (1, 1, 1, 1, 1, 1, 1, 1),
    'E': (2, 2, 2, 2, 2, 2, 2, 2),
}


@attr.s(frozen=True, eq=False)
class SyntheticDatasetSpec:
    """Generator of a condition-labeled set of image vectors

    An image of condition c is the sum of the offsets of its categorical
    entries plus isotropic noise whose variance is the mean squared
    spread of those entries.

    Attributes
    ----------
    schema: `ConditionSchema`
    conditions: `dict`
        condition name -> {sub-condition: label}.
    offsets: `dict`
        sub-condition -> {label: offset vector}.
    spreads: `dict`
        sub-condition -> {label: noise standard deviation}.
    counts: `dict`
        condition name -> number of samples.
    emotions: `dict`, optional
        condition name -> preference over `EMOTIONS`,
        annotated by five simulated annotators.
    seed: `int`
    """
    schema = attr.ib()
    conditions = attr.ib()
    offsets = attr.ib()
    spreads = attr.ib()
    counts = attr.ib()
    emotions = attr.ib(factory=dict)
    seed = attr.ib(default=0)

    def __attrs_post_init__(self):
        for name, labels in self.conditions.items():
            if self.counts.get(name, 0) < 1:
                raise ValueError(f"condition '{name}' needs a count >= 1, "
                                 f"got {self.counts.get(name)}")
            for sub, label in labels.items():
                if label not in self.offsets.get(sub, {}) \
                        or label not in self.spreads.get(sub, {}):
                    raise ValueError(f"entry '{label}' of '{sub}' has no "
                                     "generator parameters")

    @property
    def image_dim(self):
        first = next(iter(self.offsets.values()))
        return len(next(iter(first.values())))

    def mean(self, name):
        """Expected image vector of a condition"""
        return np.sum([self.offsets[s][x]
                       for s, x in self.conditions[name].items()], axis=0)

    def spread(self, name):
        return float(np.sqrt(np.mean(
            [self.spreads[s][x] ** 2
             for s, x in self.conditions[name].items()])))


def default_scenario(image_dim=192,
                     count=300,
                     spread=1.0,
                     offset_scale=3.0,
                     with_emotion=True,
                     seed=0):
    """The bundled five-condition scenario

    Conditions A and B, and C and D, are designed partners sharing six of
    eight categorical entries; E shares none with any other condition.

    Parameters
    ----------
    image_dim: `int`, optional (default: 192)
    count: `int`, optional (default: 300)
        Samples per condition.
    spread: `float`, optional (default: 1.0)
        Noise standard deviation of every entry.
    offset_scale: `float`, optional (default: 3.0)
        Expected norm of an entry offset.
    with_emotion: `bool`, optional (default: True)
        Annotate an emotion distribution per sample.
    seed: `int`, optional (default: 0)

    Returns
    -------
    spec: `SyntheticDatasetSpec`
    """
    rng = stage_rng(seed, 'scenario')
    list_desc = []
    offsets = dict()
    spreads = dict()
    for sub in SUBCONDITIONS:
        labels = [f'{sub}_{i}' for i in range(3)]
        list_desc.append(SubConditionDescriptor(
            name=sub, kind='categorical', dim=4,
            vocab=labels + [UNKNOWN]))
        offsets[sub] = {x: offset_scale * rng.standard_normal(image_dim)
                        / np.sqrt(image_dim) for x in labels}
        spreads[sub] = {x: float(spread) for x in labels}
    if with_emotion:
        list_desc.append(SubConditionDescriptor(
            name='emotion', kind='distribution', dim=len(EMOTIONS),
            vocab=EMOTIONS))
    conditions = {name: {sub: f'{sub}_{i}'
                         for sub, i in zip(SUBCONDITIONS, idx)}
                  for name, idx in SCENARIO.items()}
    emotions = dict()
    if with_emotion:
        emotions = {name: rng.dirichlet(np.ones(len(EMOTIONS)))
                    for name in SCENARIO}
    return SyntheticDatasetSpec(schema=ConditionSchema(list_desc),
                                conditions=conditions,
                                offsets=offsets,
                                spreads=spreads,
                                counts={name: int(count)
                                        for name in SCENARIO},
                                emotions=emotions,
                                seed=seed)


def gen_dataset(spec, path=None):
    """Generate a synthetic dataset

    Parameters
    ----------
    spec: `SyntheticDatasetSpec`
    path: `str`, optional (default: None)
        Output directory. By default `settings.workdir`/'data'.

    Returns
    -------
    dict_files: `dict`
        'metadata' (JSON Lines records) and 'images' (binary container).
    """
    if path is None:
        path = os.path.join(settings.workdir, 'data')
    os.makedirs(path, exist_ok=True)
    rng = stage_rng(spec.seed, 'dataset')
    records = []
    list_X = []
    for name, labels in spec.conditions.items():
        n = spec.counts[name]
        print(f'Generating {n} samples of condition {name} ...')
        list_X.append(spec.mean(name)
                      + spec.spread(name)
                      * rng.standard_normal((n, spec.image_dim)))
        for i in range(n):
            distribution = dict()
            if name in spec.emotions:
                votes = rng.multinomial(5, spec.emotions[name])
                distribution['emotion'] = {
                    x: int(v) for x, v in zip(EMOTIONS, votes)}
            records.append(DatasetRecord(
                sample_id=f'{name}_{i:05d}',
                categorical=dict(labels),
                distribution=distribution,
                image=len(records),
                condition=name))
    dict_files = {'metadata': os.path.join(path, 'metadata.jsonl'),
                  'images': os.path.join(path, 'images.clat')}
    write_metadata(records, dict_files['metadata'])
    write_matrix(np.vstack(list_X), dict_files['images'], kind='images')
    print(f'{len(records)} samples were written to "{path}".')
    return dict_files


def scenario(count=300, seed=0):
    """Bundled five-condition dataset

    Generated into `settings.workdir`/'data' on first use.

    Returns
    -------
    adata: `AnnData`
        Image vectors with the categorical labels and the condition name.
    """
    path = os.path.join(settings.workdir, 'data', f'scenario_{seed}')
    if not os.path.exists(os.path.join(path, 'metadata.jsonl')):
        gen_dataset(default_scenario(count=count, seed=seed), path)
    return read_dataset(path)
