"""Centers of mass, truncation, condition arithmetic and inversion"""

import numpy as np
import attr
from tqdm.auto import tqdm

from .._errors import NumericalError
from .._settings import settings
from .._utils import (
    as_rng,
    batch_sizes,
)
from ._mapping import (
    LatentVector,
    latent_data,
    map_conditional,
    synthesize,
    synthesize_grad,
)

MAX_HALVINGS = 20


def _readonly(x):
    if x is None:
        return None
    x = np.array(x, dtype=np.float64)
    x.setflags(write=False)
    return x


@attr.s(frozen=True, eq=False)
class CenterOfMass:
    """Monte-Carlo center of mass of W

    Attributes
    ----------
    w_bar: `numpy.ndarray`
        Mean latent of shape (w_dim, ).
    condition: `numpy.ndarray`
        Condition vector, None for the global center.
    sample_count: `int`
    seed: `int`
        Seed of the z stream, None if a generator was passed.
    """
    w_bar = attr.ib(converter=_readonly)
    condition = attr.ib(default=None, converter=_readonly)
    sample_count = attr.ib(default=None)
    seed = attr.ib(default=None)


@attr.s(frozen=True, eq=False)
class TransformationVector:
    """Average W displacement from condition `source` to `target`

    Attributes
    ----------
    t: `numpy.ndarray`
    source, target: `numpy.ndarray`
        Condition vectors.
    sample_count: `int`
    """
    t = attr.ib(converter=_readonly)
    source = attr.ib(default=None, converter=_readonly)
    target = attr.ib(default=None, converter=_readonly)
    sample_count = attr.ib(default=None)


def _seed_of(rng):
    return int(rng) if isinstance(rng, (int, np.integer)) else None


def _condition_or_wildcard(mapping, c):
    if c is None:
        return np.zeros(mapping.c_dim)
    return np.asarray(c, dtype=np.float64)


def center_of_mass(mapping,
                   c=None,
                   n_samples=100000,
                   rng=0,
                   batch_size=10000):
    """Estimate the (conditional) center of mass of W

    The global center uses the all-wildcard (zero) condition vector.
    Batches are drawn and summed in a fixed order.

    Parameters
    ----------
    mapping: `MappingModel`
    c: `numpy.ndarray`, optional (default: None)
        Condition vector. None gives the global center.
    n_samples: `int`, optional (default: 100000)
        Number of standard-normal z.
    rng: `int` or `numpy.random.Generator`, optional (default: 0)
        Seed or generator of the z stream.
    batch_size: `int`, optional (default: 10000)

    Returns
    -------
    center: `CenterOfMass`
    """
    if n_samples < 1:
        raise ValueError(f"`n_samples` must be >= 1, got {n_samples}")
    seed = _seed_of(rng)
    rng = as_rng(rng)
    cvec = _condition_or_wildcard(mapping, c)
    total = np.zeros(mapping.w_dim)
    for b in tqdm(batch_sizes(n_samples, batch_size),
                  disable=not settings.verbose,
                  desc='center of mass'):
        z = rng.standard_normal((b, mapping.z_dim))
        total += map_conditional(mapping, z, cvec).data.sum(axis=0)
    return CenterOfMass(w_bar=total / n_samples,
                        condition=None if c is None else cvec,
                        sample_count=int(n_samples),
                        seed=seed)


def _center_data(center):
    if isinstance(center, CenterOfMass):
        return center.w_bar
    return latent_data(center, 'W', name='center')


def truncate(w, center, psi):
    """Truncation trick w' = w_bar + psi*(w - w_bar)

    Passing a conditional center gives the conditional truncation trick.

    Parameters
    ----------
    w: `LatentVector` or `numpy.ndarray`
        Latent(s) in W.
    center: `CenterOfMass` or `numpy.ndarray`
    psi: `float`
        Any real value; psi > 1 extrapolates away from the center.

    Returns
    -------
    w: `LatentVector`
    """
    w = latent_data(w, 'W', name='w')
    w_bar = _center_data(center)
    if w.shape[-1] != w_bar.shape[-1]:
        raise ValueError(f"dimension mismatch: {w.shape[-1]} != "
                         f"{w_bar.shape[-1]}")
    if psi == 1:
        return LatentVector('W', w)
    return LatentVector('W', w_bar + psi * (w - w_bar))


def distance_to_center(w, center):
    """Euclidean distance of latent(s) in W to a center of mass"""
    w = latent_data(w, 'W', name='w')
    return np.linalg.norm(w - _center_data(center), axis=-1)


def transformation_vector(mapping,
                          c1,
                          c2,
                          n_samples=100000,
                          rng=0,
                          batch_size=10000):
    """Transformation vector t = E_z[f(z, c2) - f(z, c1)]

    Both conditions share one z stream, so swapping them negates t
    exactly and t equals the difference of the two conditional centers
    computed with the same seed.

    Parameters
    ----------
    mapping: `MappingModel`
    c1, c2: `numpy.ndarray`
        Source and target condition vectors.
    n_samples: `int`, optional (default: 100000)
    rng: `int` or `numpy.random.Generator`, optional (default: 0)
    batch_size: `int`, optional (default: 10000)

    Returns
    -------
    t: `TransformationVector`
    """
    if n_samples < 1:
        raise ValueError(f"`n_samples` must be >= 1, got {n_samples}")
    rng = as_rng(rng)
    c1 = np.asarray(c1, dtype=np.float64)
    c2 = np.asarray(c2, dtype=np.float64)
    total = np.zeros(mapping.w_dim)
    for b in tqdm(batch_sizes(n_samples, batch_size),
                  disable=not settings.verbose,
                  desc='transformation vector'):
        z = rng.standard_normal((b, mapping.z_dim))
        total += (map_conditional(mapping, z, c2).data
                  - map_conditional(mapping, z, c1).data).sum(axis=0)
    return TransformationVector(t=total / n_samples,
                                source=c1,
                                target=c2,
                                sample_count=int(n_samples))


def apply_transformation(w, t):
    """Re-condition latent(s) in W by adding a transformation vector"""
    w = latent_data(w, 'W', name='w')
    t = t.t if isinstance(t, TransformationVector) else np.asarray(t)
    if w.shape[-1] != t.shape[-1]:
        raise ValueError(f"dimension mismatch: {w.shape[-1]} != "
                         f"{t.shape[-1]}")
    return LatentVector('W', w + t)


def conditional_interpolate(mapping, z, c1, c2, lam):
    """Interpolate between two conditions for the same z

    Parameters
    ----------
    mapping: `MappingModel`
    z: `LatentVector` or `numpy.ndarray`
    c1, c2: `numpy.ndarray`
    lam: `float`
        Position in [0, 1]; 0 gives f(z, c1) and 1 gives f(z, c2).

    Returns
    -------
    w: `LatentVector`
    """
    if not 0 <= lam <= 1:
        raise ValueError(f"`lam` must lie in [0, 1], got {lam}")
    w1 = map_conditional(mapping, z, c1).data
    w2 = map_conditional(mapping, z, c2).data
    return LatentVector('W', (1 - lam) * w1 + lam * w2)


def _loss(synthesis, w, target):
    r = synthesize(synthesis, w) - target
    return float(r @ r), r


def invert(synthesis,
           target,
           init_w,
           steps=2000,
           step_size=None,
           momentum='nesterov'):
    """Find the latent in W whose synthesis matches a target image

    Minimizes |g(w) - target|^2. A step that increases the loss is
    rejected: with momentum the iteration first restarts from the last
    accepted point, otherwise the step size is halved, at most 20 times.

    Parameters
    ----------
    synthesis: `SynthesisModel`
    target: `numpy.ndarray`
        Image vector of shape (image_dim, ).
    init_w: `LatentVector` or `numpy.ndarray`
        Starting point in W.
    steps: `int`, optional (default: 2000)
    step_size: `float`, optional (default: None)
        None uses 1/(2*|J|^2) with J the synthesis Jacobian at `init_w`.
    momentum: `str`, optional (default: 'nesterov')
        Choose from {'nesterov', None}.

    Returns
    -------
    w_hat: `LatentVector`
    losses: `numpy.ndarray`
        Non-increasing loss trace, starting with the initial loss.
    """
    if steps < 0:
        raise ValueError(f"`steps` must be >= 0, got {steps}")
    if momentum not in ('nesterov', None):
        raise ValueError(f"unrecognized momentum '{momentum}'. "
                         "Choose from {'nesterov', None}")
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (synthesis.image_dim, ):
        raise ValueError(f"`target` must have shape "
                         f"({synthesis.image_dim}, ), got {target.shape}")
    w = np.array(latent_data(init_w, 'W', name='init_w'), dtype=np.float64)
    if w.shape != (synthesis.w_dim, ):
        raise ValueError(f"`init_w` must have shape ({synthesis.w_dim}, ), "
                         f"got {w.shape}")
    if step_size is None:
        J_T = synthesize_grad(synthesis, w, np.eye(synthesis.image_dim))
        step_size = 1 / (2 * np.linalg.norm(J_T, ord=2) ** 2)
    loss, _ = _loss(synthesis, w, target)
    if not np.isfinite(loss):
        raise NumericalError("inversion loss is not finite")
    losses = [loss]
    y = w.copy()
    t_k = 1.0
    at_w = True
    n_halvings = 0
    for _ in tqdm(range(steps),
                  disable=not settings.verbose,
                  desc='inversion'):
        if loss == 0:
            break
        _, r = _loss(synthesis, y, target)
        grad = 2 * synthesize_grad(synthesis, y, r)
        w_new = y - step_size * grad
        loss_new, _ = _loss(synthesis, w_new, target)
        if not np.isfinite(loss_new):
            raise NumericalError("inversion diverged: loss is not finite")
        if loss_new > loss:
            if not at_w:
                y = w.copy()
                t_k = 1.0
                at_w = True
            else:
                n_halvings += 1
                if n_halvings > MAX_HALVINGS:
                    break
                step_size /= 2
            losses.append(loss)
            continue
        if momentum == 'nesterov':
            t_next = (1 + np.sqrt(1 + 4 * t_k ** 2)) / 2
            beta = (t_k - 1) / t_next
            y = w_new + beta * (w_new - w)
            t_k = t_next
            at_w = beta == 0
        else:
            y = w_new
        w = w_new
        loss = loss_new
        losses.append(loss)
    return LatentVector('W', w), np.array(losses)
