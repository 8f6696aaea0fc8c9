"""Per-condition Gaussian analysis of latent spaces"""

import warnings
import numpy as np
import pandas as pd
import attr
import scipy.linalg
from anndata import AnnData

from .._errors import NumericalError
from .._utils import (
    as_rng,
    stage_rng,
    check_finite,
)
from ._mapping import (
    map_conditional,
    p_transform,
)

EIG_CLIP = -1e-8
EIG_FAIL = -1e-6


def _readonly(x):
    x = np.array(x, dtype=np.float64)
    x.setflags(write=False)
    return x


@attr.s(frozen=True, eq=False)
class ConditionGaussian:
    """Gaussian fitted to the latent samples of one condition

    Attributes
    ----------
    mu: `numpy.ndarray`
        Mean of shape (n, ).
    sigma: `numpy.ndarray`
        Covariance of shape (n, n).
    sample_count: `int`
        Number of samples behind the fit. None for hand-built Gaussians.
    condition: `str`
        Condition id.
    space: `str`
        Latent space of the samples, 'P' by default.
    """
    mu = attr.ib(converter=_readonly)
    sigma = attr.ib(converter=_readonly)
    sample_count = attr.ib(default=None)
    condition = attr.ib(default=None)
    space = attr.ib(default='P')
    _cache = attr.ib(factory=dict, init=False, repr=False)

    def __attrs_post_init__(self):
        n = self.mu.shape[0]
        if self.mu.ndim != 1 or self.sigma.shape != (n, n):
            raise ValueError(f"mu of shape {self.mu.shape} does not match "
                             f"sigma of shape {self.sigma.shape}")
        scale = max(1.0, float(np.abs(self.sigma).max()))
        if np.abs(self.sigma - self.sigma.T).max() > 1e-10 * scale:
            raise ValueError("sigma is not symmetric")

    @property
    def n(self):
        return self.mu.shape[0]

    @property
    def degenerate(self):
        """True when the Gaussian cannot back a density classifier"""
        if self.sample_count is not None and self.sample_count < self.n + 1:
            return True
        return not np.trace(self.sigma) > 0

    def default_ridge(self):
        return 1e-9 * np.trace(self.sigma) / self.n

    def cholesky(self, ridge=None):
        """Lower Cholesky factor of sigma + ridge*I, cached per ridge"""
        if ridge is None:
            ridge = self.default_ridge()
        key = float(ridge)
        if key not in self._cache:
            try:
                self._cache[key] = scipy.linalg.cholesky(
                    self.sigma + key * np.eye(self.n), lower=True)
            except np.linalg.LinAlgError:
                raise NumericalError(
                    f"covariance of condition '{self.condition}' is not "
                    f"positive definite after a ridge of {key:g}")
        return self._cache[key]


def sample_condition_points(mapping, c, count, space='P', rng=None):
    """Sample latent points of one condition

    Parameters
    ----------
    mapping: `MappingModel`
    c: `numpy.ndarray`
        Condition vector.
    count: `int`
        Number of points.
    space: `str`, optional (default: 'P')
        Choose from {'W', 'P'}.
    rng: `numpy.random.Generator` or `int`
        Source of the standard-normal z.

    Returns
    -------
    X: `numpy.ndarray`
        Sample matrix of shape (count, w_dim).
    """
    if count < 1:
        raise ValueError(f"`count` must be >= 1, got {count}")
    if space not in ('W', 'P'):
        raise ValueError(f"unrecognized space '{space}'. "
                         "Choose from {'W', 'P'}")
    rng = as_rng(rng)
    z = rng.standard_normal((int(count), mapping.z_dim))
    w = map_conditional(mapping, z, c)
    if space == 'P':
        return np.array(p_transform(w, 'W->P').data)
    return np.array(w.data)


def sample_latents(mapping, conditions, count, space='P', seed=0):
    """Sample several conditions into one annotated matrix

    Parameters
    ----------
    mapping: `MappingModel`
    conditions: `dict`
        condition id -> condition vector.
    count: `int`
        Points per condition.
    space: `str`, optional (default: 'P')
    seed: `int`, optional (default: 0)

    Returns
    -------
    adata: `AnnData`
        Latent points of shape (#conditions*count, w_dim) with
        `.obs['condition']`.
    """
    list_X = []
    list_cond = []
    for name, c in conditions.items():
        list_X.append(sample_condition_points(
            mapping, c, count, space=space,
            rng=stage_rng(seed, f'sample:{name}')))
        list_cond += [str(name)] * int(count)
    X = np.vstack(list_X)
    obs = pd.DataFrame(
        {'condition': pd.Categorical(list_cond,
                                     categories=[str(x) for x in conditions])},
        index=[f'{c}_{i % int(count)}' for i, c in enumerate(list_cond)])
    adata = AnnData(X=X, obs=obs)
    adata.uns['space'] = space
    return adata


def fit_gaussian(X, condition=None, space='P'):
    """Fit a Gaussian with the unbiased covariance estimator

    Parameters
    ----------
    X: `numpy.ndarray`
        Sample matrix of shape (N, n), N >= 2.
    condition: `str`, optional (default: None)
    space: `str`, optional (default: 'P')

    Returns
    -------
    g: `ConditionGaussian`
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError(f"at least 2 samples are needed, "
                         f"got shape {X.shape}")
    check_finite(X, 'X')
    mu = X.mean(axis=0)
    sigma = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    sigma = (sigma + sigma.T) / 2
    return ConditionGaussian(mu=mu, sigma=sigma, sample_count=X.shape[0],
                             condition=condition, space=space)


def log_pdf(x, g, ridge=None):
    """Log-density of a Gaussian

    Evaluated through the Cholesky factor of sigma + ridge*I.

    Parameters
    ----------
    x: `numpy.ndarray`
        Point of shape (n, ) or points of shape (m, n).
    g: `ConditionGaussian`
    ridge: `float`, optional (default: None)
        None applies 1e-9*trace(sigma)/n.

    Returns
    -------
    logp: `float` or `numpy.ndarray`
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != g.n or x.ndim not in (1, 2):
        raise ValueError(f"`x` must have width {g.n}, got shape {x.shape}")
    L = g.cholesky(ridge)
    diff = np.atleast_2d(x) - g.mu
    y = scipy.linalg.solve_triangular(L, diff.T, lower=True)
    quad = np.sum(y ** 2, axis=0)
    logdet = 2 * np.sum(np.log(np.diag(L)))
    logp = -0.5 * (g.n * np.log(2 * np.pi) + logdet + quad)
    if x.ndim == 1:
        return float(logp[0])
    return logp


def classify(x, gaussians, ridge=None):
    """Assign points to the condition with the highest density

    Ties go to the lowest condition index.

    Parameters
    ----------
    x: `numpy.ndarray`
        Point of shape (n, ) or points of shape (m, n).
    gaussians: `list` of `ConditionGaussian`
    ridge: `float`, optional (default: None)
        Common ridge of all covariances. None averages the per-condition
        1e-9*trace/n rule.

    Returns
    -------
    idx: `int` or `numpy.ndarray`
        Index into `gaussians`.
    """
    if len(gaussians) == 0:
        raise ValueError("`gaussians` is empty")
    n = gaussians[0].n
    for g in gaussians:
        if g.n != n:
            raise ValueError("all Gaussians must share their dimension")
        if g.degenerate:
            raise NumericalError(f"condition '{g.condition}' is degenerate "
                                 f"(sample_count={g.sample_count}, n={n})")
    if ridge is None:
        ridge = float(np.mean([g.default_ridge() for g in gaussians]))
    scores = np.vstack([np.atleast_1d(log_pdf(x, g, ridge=ridge))
                        for g in gaussians])
    idx = np.argmax(scores, axis=0)
    if np.ndim(x) == 1:
        return int(idx[0])
    return idx


def _clip_eigenvalues(eig, what):
    low = eig.min()
    if low < EIG_FAIL:
        raise NumericalError(f"{what} has eigenvalue {low:.3g}")
    if low < EIG_CLIP:
        warnings.warn(f"clipping negative eigenvalue {low:.3g} of {what}")
    # eigenvalues at rounding level stand for exact zeros
    tol = eig.size * np.finfo(np.float64).eps * max(np.abs(eig).max(), 0.0)
    return np.where(eig > tol, eig, 0.0)


def _sqrtm_psd(S):
    eig, vecs = scipy.linalg.eigh(S)
    eig = _clip_eigenvalues(eig, 'a covariance')
    return (vecs * np.sqrt(eig)) @ vecs.T


def frechet_distance(g1, g2):
    """Frechet distance between two Gaussians

    sqrt(|mu1 - mu2|^2 + Tr(S1) + Tr(S2) - 2 Tr((S1^1/2 S2 S1^1/2)^1/2))

    Parameters
    ----------
    g1, g2: `ConditionGaussian`

    Returns
    -------
    fd: `float`
    """
    if g1.n != g2.n:
        raise ValueError(f"dimension mismatch: {g1.n} != {g2.n}")
    if np.array_equal(g1.mu, g2.mu) and np.array_equal(g1.sigma, g2.sigma):
        return 0.0
    diff = g1.mu - g2.mu
    s1_half = _sqrtm_psd(g1.sigma)
    M = s1_half @ g2.sigma @ s1_half
    M = (M + M.T) / 2
    try:
        eig = scipy.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"eigendecomposition failed: {e}")
    eig = _clip_eigenvalues(eig, 'the covariance product')
    fd2 = diff @ diff + np.trace(g1.sigma) + np.trace(g2.sigma) \
        - 2 * np.sum(np.sqrt(eig))
    return float(np.sqrt(max(fd2, 0.0)))


@attr.s(frozen=True, eq=False)
class FDMatrix:
    """Pairwise Frechet distances between conditions

    Attributes
    ----------
    conditions: `tuple` of `str`
    values: `numpy.ndarray`
        Symmetric matrix with a zero diagonal.
    """
    conditions = attr.ib(converter=tuple)
    values = attr.ib(converter=_readonly)

    @property
    def nearest(self):
        """Nearest neighbor of every condition"""
        dict_nn = dict()
        for i, name in enumerate(self.conditions):
            d = np.where(np.arange(len(self.conditions)) == i,
                         np.inf, self.values[i])
            dict_nn[name] = self.conditions[int(np.argmin(d))]
        return dict_nn

    def to_frame(self):
        return pd.DataFrame(self.values,
                            index=list(self.conditions),
                            columns=list(self.conditions))

    def to_table(self):
        """One row per ordered pair of conditions

        Returns
        -------
        df_fd: `pandas.DataFrame`
            Columns ['condition_a', 'condition_b', 'fd'].
        """
        k = len(self.conditions)
        names = np.array(self.conditions, dtype=object)
        return pd.DataFrame({'condition_a': np.repeat(names, k),
                             'condition_b': np.tile(names, k),
                             'fd': self.values.ravel()})


def fd_matrix(gaussians, conditions=None):
    """Frechet distances of all pairs of conditions

    Parameters
    ----------
    gaussians: `list` of `ConditionGaussian`
    conditions: `list` of `str`, optional (default: None)
        Row labels. By default `g.condition`, or the position.

    Returns
    -------
    fdm: `FDMatrix`
    """
    k = len(gaussians)
    if k < 2:
        raise ValueError(f"at least 2 Gaussians are needed, got {k}")
    if conditions is None:
        conditions = [str(g.condition) if g.condition is not None else str(i)
                      for i, g in enumerate(gaussians)]
    values = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            values[i, j] = frechet_distance(gaussians[i], gaussians[j])
            values[j, i] = values[i, j]
    return FDMatrix(conditions=conditions, values=values)
