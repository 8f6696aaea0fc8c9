"""Evaluation metrics: FID, FJD, I-FID, e_qual, n_qual and e_art"""

import math
import warnings
import numpy as np
import pandas as pd
import attr
from sklearn.random_projection import GaussianRandomProjection

from ..preprocessing._schema import UNKNOWN
from .._utils import (
    as_rng,
    check_finite,
    leaky_relu,
)
from ._gaussian import (
    fit_gaussian,
    frechet_distance,
)

FID_MIN_SAMPLES = 50000
EMBEDDING_KINDS = ('identity', 'random-projection', 'external-file')


@attr.s(frozen=True, eq=False)
class EmbeddingFunction:
    """Deterministic stand-in for an image feature extractor

    'random-projection' applies a seeded Gaussian random projection
    followed by a leaky ReLU(0.2). 'identity' passes image vectors through.
    'external-file' expects precomputed embeddings and only checks widths.

    Attributes
    ----------
    kind: `str`
    input_dim: `int`
    output_dim: `int`
    seed: `int`
    """
    kind = attr.ib(validator=attr.validators.in_(EMBEDDING_KINDS))
    input_dim = attr.ib()
    output_dim = attr.ib(default=64)
    seed = attr.ib(default=0)
    _projection = attr.ib(init=False, repr=False, default=None)

    def __attrs_post_init__(self):
        if self.kind == 'random-projection':
            projection = GaussianRandomProjection(
                n_components=self.output_dim,
                random_state=self.seed)
            projection.fit(np.zeros((1, self.input_dim)))
            object.__setattr__(self, '_projection', projection)
        elif self.output_dim != self.input_dim:
            raise ValueError(f"'{self.kind}' embeddings keep their width, "
                             f"got input_dim={self.input_dim} and "
                             f"output_dim={self.output_dim}")

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(f"expected width {self.input_dim}, "
                             f"got shape {X.shape}")
        if self.kind == 'random-projection':
            return leaky_relu(self._projection.transform(X), 0.2)
        return X.copy()


@attr.s(frozen=True, eq=False)
class JointSample:
    """Image embedding paired with its condition embedding

    Attributes
    ----------
    image: `numpy.ndarray`
        f(x).
    condition: `numpy.ndarray`
        h(y), the assembled condition vector.
    alpha: `float`
        Weight of the condition embedding.
    """
    image = attr.ib(converter=lambda x: np.asarray(x, dtype=np.float64))
    condition = attr.ib(converter=lambda x: np.asarray(x, dtype=np.float64))
    alpha = attr.ib(default=1.0)

    def __attrs_post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"`alpha` must be >= 0, got {self.alpha}")
        check_finite(self.image, 'image')
        check_finite(self.condition, 'condition')

    def vector(self):
        return np.concatenate([self.image, self.alpha * self.condition])


def joint_samples(images, conditions, alpha=0.5):
    """Pair the rows of two matrices into joint samples"""
    images = np.asarray(images, dtype=np.float64)
    conditions = np.asarray(conditions, dtype=np.float64)
    if images.shape[0] != conditions.shape[0]:
        raise ValueError(f"{images.shape[0]} image rows for "
                         f"{conditions.shape[0]} condition rows")
    return [JointSample(image=f, condition=h, alpha=alpha)
            for f, h in zip(images, conditions)]


def fid(real, fake, warn=True):
    """Frechet distance between Gaussians fitted to two embedding sets

    Parameters
    ----------
    real, fake: `numpy.ndarray`
        Embedding matrices with >= 2 rows and the same width.
    warn: `bool`, optional (default: True)
        Warn when a set has fewer than 50,000 rows.

    Returns
    -------
    fid: `float`
    """
    real = np.asarray(real, dtype=np.float64)
    fake = np.asarray(fake, dtype=np.float64)
    if real.ndim != 2 or fake.ndim != 2 or real.shape[1] != fake.shape[1]:
        raise ValueError(f"width mismatch: {real.shape} vs {fake.shape}")
    if warn and min(real.shape[0], fake.shape[0]) < FID_MIN_SAMPLES:
        warnings.warn(f"FID computed from {real.shape[0]} real and "
                      f"{fake.shape[0]} generated samples; estimates below "
                      f"{FID_MIN_SAMPLES} samples are biased upwards")
    return frechet_distance(fit_gaussian(real), fit_gaussian(fake))


def _joint_matrix(x, alpha):
    if isinstance(x, tuple):
        images, conditions = x
        images = np.asarray(images, dtype=np.float64)
        conditions = np.asarray(conditions, dtype=np.float64)
        if images.shape[0] != conditions.shape[0]:
            raise ValueError(f"{images.shape[0]} image rows for "
                             f"{conditions.shape[0]} condition rows")
        return np.hstack([images, alpha * conditions])
    return np.vstack([attr.evolve(s, alpha=alpha).vector() for s in x])


def fjd(real, fake, alpha=0.5, warn=True):
    """Frechet joint distance

    FID on the joint space [f(x), alpha*h(y)]; alpha = 0 recovers the FID
    of the image embeddings.

    Parameters
    ----------
    real, fake: `list` of `JointSample` or `tuple`
        Joint samples, or (image embeddings, condition vectors) matrices.
    alpha: `float`, optional (default: 0.5)
    warn: `bool`, optional (default: True)

    Returns
    -------
    fjd: `float`
    """
    if alpha < 0:
        raise ValueError(f"`alpha` must be >= 0, got {alpha}")
    return fid(_joint_matrix(real, alpha), _joint_matrix(fake, alpha),
               warn=warn)


def _n_kept(fraction, count):
    return int(math.ceil(round(fraction * count, 9)))


def select_entries(support, fraction=0.5):
    """Condition entries kept for the I-FID

    Entries are ranked by support in descending order, ties by name,
    and the first ceil(fraction * #entries) are kept.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"`fraction` must lie in (0, 1], got {fraction}")
    ranked = sorted(support.items(), key=lambda x: (-x[1], str(x[0])))
    return [x[0] for x in ranked[:_n_kept(fraction, len(ranked))]]


def intra_fid(real_by_entry, fake_by_entry, support=None, fraction=0.5):
    """Intra-FID over the best-supported condition entries

    Parameters
    ----------
    real_by_entry, fake_by_entry: `dict`
        sub-condition -> {entry: embedding matrix}.
    support: `dict`, optional (default: None)
        sub-condition -> {entry: dataset support}.
        By default the number of real samples.
    fraction: `float`, optional (default: 0.5)
        Fraction of entries kept per sub-condition.

    Returns
    -------
    per_entry: `dict`
        sub-condition -> {entry: FID}
    per_condition: `dict`
        sub-condition -> mean FID of its scored entries
    average: `float`
        Mean of the per-condition averages.
    """
    if len(real_by_entry) == 0:
        raise ValueError("`real_by_entry` is empty")
    per_entry = dict()
    per_condition = dict()
    for cond, dict_real in real_by_entry.items():
        if len(dict_real) == 0:
            raise ValueError(f"condition '{cond}' has no entries")
        dict_fake = fake_by_entry.get(cond, dict())
        if support is None or cond not in support:
            dict_support = {e: len(x) for e, x in dict_real.items()}
        else:
            dict_support = support[cond]
        per_entry[cond] = dict()
        for entry in select_entries(dict_support, fraction=fraction):
            X_real = dict_real.get(entry)
            X_fake = dict_fake.get(entry)
            n_real = 0 if X_real is None else len(X_real)
            n_fake = 0 if X_fake is None else len(X_fake)
            if n_real < 2 or n_fake < 2:
                warnings.warn(f"skipping entry '{entry}' of '{cond}': "
                              f"{n_real} real and {n_fake} generated samples")
                continue
            per_entry[cond][entry] = fid(X_real, X_fake, warn=False)
        if len(per_entry[cond]) == 0:
            warnings.warn(f"no entry of '{cond}' could be scored")
            continue
        per_condition[cond] = float(np.mean(list(per_entry[cond].values())))
    if len(per_condition) == 0:
        raise ValueError("no condition entry could be scored")
    average = float(np.mean(list(per_condition.values())))
    return per_entry, per_condition, average


def e_qual(b):
    """Qualitative score of a binary samples x conditions matrix"""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.size == 0:
        raise ValueError(f"`b` must be a non-empty matrix, got shape "
                         f"{b.shape}")
    if not np.isin(b, [0, 1]).all():
        raise ValueError("`b` must only contain 0 and 1")
    return float(b.mean(axis=1).mean())


def n_qual(c_shape, n_max=100):
    """Number of samples of a qualitative evaluation

    min(ceil(prod(c_shape)/10) + 10, n_max)
    """
    c_shape = [int(x) for x in c_shape]
    if len(c_shape) == 0:
        raise ValueError("`c_shape` is empty")
    if min(c_shape) < 1:
        raise ValueError(f"entries of `c_shape` must be >= 1, got {c_shape}")
    prod = math.prod(c_shape)
    return min(-(-prod // 10) + 10, int(n_max))


def e_art(i_fid_avg, fjd_value, e_qual_score):
    """Hybrid score ((I-FID + FJD)/2) * (2 - e_qual)"""
    if i_fid_avg < 0 or fjd_value < 0:
        raise ValueError("I-FID and FJD must be >= 0")
    if not 0 <= e_qual_score <= 1:
        raise ValueError(f"`e_qual_score` must lie in [0, 1], "
                         f"got {e_qual_score}")
    return ((i_fid_avg + fjd_value) / 2) * (2 - e_qual_score)


@attr.s(auto_attribs=True, kw_only=True)
class MetricReport:
    """Evaluation summary

    Attributes
    ----------
    fid: `float`
    fjd_alpha: `float`
    fjd: `float`
    intra_fid_per_condition: `dict`
    intra_fid_average: `float`
    intra_fid_per_entry: `dict`
        sub-condition -> {entry: I-FID} of the scored entries.
    e_qual: `float`
        None when no qualitative labels were supplied.
    n_qual: `int`
    e_art: `float`
        None unless e_qual is known.
    sample_counts: `dict`
        Number of real and generated samples, written after the warnings.
    warnings: `list` of `str`
    """
    fid: float
    fjd_alpha: float
    fjd: float
    intra_fid_per_condition: dict
    intra_fid_average: float
    n_qual: int
    intra_fid_per_entry: dict = attr.ib(factory=dict)
    e_qual: float = None
    e_art: float = None
    sample_counts: dict = attr.ib(factory=dict)
    warnings: list = attr.ib(factory=list)

    def to_json(self):
        return {'fid': self.fid,
                'fjd': {'alpha': self.fjd_alpha, 'value': self.fjd},
                'intra_fid': {'per_condition': self.intra_fid_per_condition,
                              'average': self.intra_fid_average,
                              'per_entry': self.intra_fid_per_entry},
                'e_qual': self.e_qual,
                'n_qual': self.n_qual,
                'e_art': self.e_art,
                'warnings': list(self.warnings),
                'sample_counts': self.sample_counts}


def fid_convergence(real,
                    fake=None,
                    sizes=(500, 2500, 12500, 50000),
                    seed=0):
    """FID as a function of the sample size

    Without `fake`, the rows of `real` are shuffled and each size n
    compares its first n rows with the next n rows.

    Parameters
    ----------
    real: `numpy.ndarray`
    fake: `numpy.ndarray`, optional (default: None)
    sizes: `list` of `int`
    seed: `int`, optional (default: 0)

    Returns
    -------
    df_fid: `pandas.DataFrame`
        Columns ['size', 'fid'].
    """
    rng = as_rng(seed)
    real = np.asarray(real, dtype=np.float64)
    real = real[rng.permutation(real.shape[0])]
    if fake is not None:
        fake = np.asarray(fake, dtype=np.float64)
        fake = fake[rng.permutation(fake.shape[0])]
    list_fid = []
    for n in sizes:
        if fake is None:
            if 2 * n > real.shape[0]:
                raise ValueError(f"two halves of {n} rows need "
                                 f"{2 * n} samples, got {real.shape[0]}")
            X_a, X_b = real[:n], real[n:2 * n]
        else:
            if n > min(real.shape[0], fake.shape[0]):
                raise ValueError(f"size {n} exceeds the available samples")
            X_a, X_b = real[:n], fake[:n]
        list_fid.append([int(n), fid(X_a, X_b, warn=False)])
    return pd.DataFrame(list_fid, columns=['size', 'fid'])


def qualitative_plan(schema, n, seed=0):
    """Multi-conditions to be judged by a human annotator

    Draws one known entry of every categorical sub-condition per sample.

    Parameters
    ----------
    schema: `ConditionSchema`
    n: `int`
        Number of samples, usually `n_qual(condition_shape(schema))`.
    seed: `int`, optional (default: 0)

    Returns
    -------
    df_plan: `pandas.DataFrame`
        One row per sample, one column per categorical sub-condition.
    """
    rng = as_rng(seed)
    categorical = [x for x in schema if x.kind == 'categorical']
    if len(categorical) == 0:
        raise ValueError("the schema has no categorical sub-condition")
    dict_plan = dict()
    for desc in categorical:
        known = [x for x in desc.vocab if x != UNKNOWN] or [UNKNOWN]
        dict_plan[desc.name] = [known[i]
                                for i in rng.integers(len(known), size=n)]
    df_plan = pd.DataFrame(dict_plan)
    df_plan.index.name = 'sample'
    return df_plan
