"""Conditional mapping network, P-space transform and toy synthesis"""

import numpy as np
import attr

from .._errors import LatentSpaceError
from .._utils import (
    leaky_relu,
    check_finite,
)

SPACES = ('Z', 'W', 'P')
LEAKY_SLOPE = 0.2
P_SLOPE = 5.0


def _frozen_array(x):
    x = np.array(x, dtype=np.float64)
    x.setflags(write=False)
    return x


def _frozen_arrays(list_x):
    return tuple(_frozen_array(x) for x in list_x)


@attr.s(frozen=True, eq=False)
class LatentVector:
    """A latent vector, or a matrix of row vectors, tagged with its space

    Attributes
    ----------
    space: `str`
        One of {'Z', 'W', 'P'}.
    data: `numpy.ndarray`
        Shape (dim, ) or (n, dim).
    """
    space = attr.ib(validator=attr.validators.in_(SPACES))
    data = attr.ib(converter=_frozen_array)

    def __len__(self):
        return self.data.shape[-1]


def latent_data(v, space, name='v'):
    """Raw array of `v`, checking the space of a `LatentVector`

    Plain arrays are taken to be in `space`.
    """
    if isinstance(v, LatentVector):
        if v.space != space:
            raise LatentSpaceError(f"`{name}` lives in {v.space}, "
                                   f"expected a vector in {space}")
        return v.data
    return np.asarray(v, dtype=np.float64)


def _check_width(x, dim, name):
    if x.ndim not in (1, 2) or x.shape[-1] != dim:
        raise ValueError(f"`{name}` must have width {dim}, "
                         f"got shape {x.shape}")


@attr.s(frozen=True, eq=False)
class MappingModel:
    """Conditional mapping network f_c: Z x C -> W

    Attributes
    ----------
    z_dim, c_dim, w_dim: `int`
    depth: `int`
        Number of fully connected layers.
    seed: `int`
        Seed the weights were drawn with.
    weights: `tuple` of `numpy.ndarray`
        Layer matrices of shape (fan_in, w_dim).
    biases: `tuple` of `numpy.ndarray`
    leaky_slope: `float`
    """
    z_dim = attr.ib()
    c_dim = attr.ib()
    w_dim = attr.ib()
    depth = attr.ib()
    seed = attr.ib()
    weights = attr.ib(converter=_frozen_arrays, repr=False)
    biases = attr.ib(converter=_frozen_arrays, repr=False)
    leaky_slope = attr.ib(default=LEAKY_SLOPE)

    def __attrs_post_init__(self):
        if len(self.weights) != self.depth or len(self.biases) != self.depth:
            raise ValueError(f"expected {self.depth} layers, got "
                             f"{len(self.weights)} weights and "
                             f"{len(self.biases)} biases")
        fan_in = self.z_dim + self.c_dim
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (fan_in, self.w_dim) or b.shape != (self.w_dim, ):
                raise ValueError(f"layer {i} has shapes {W.shape}, {b.shape}")
            check_finite(W, f'weights[{i}]')
            fan_in = self.w_dim


@attr.s(frozen=True, eq=False)
class SynthesisModel:
    """Toy synthesis network g: W -> image

    Hidden layers use a leaky ReLU, the output layer is linear.

    Attributes
    ----------
    w_dim, image_dim: `int`
    depth: `int`
    seed: `int`
    weights: `tuple` of `numpy.ndarray`
        Layer matrices of shape (fan_in, image_dim).
    biases: `tuple` of `numpy.ndarray`
    leaky_slope: `float`
    """
    w_dim = attr.ib()
    image_dim = attr.ib()
    depth = attr.ib()
    seed = attr.ib()
    weights = attr.ib(converter=_frozen_arrays, repr=False)
    biases = attr.ib(converter=_frozen_arrays, repr=False)
    leaky_slope = attr.ib(default=LEAKY_SLOPE)

    def __attrs_post_init__(self):
        if len(self.weights) != self.depth or len(self.biases) != self.depth:
            raise ValueError(f"expected {self.depth} layers, got "
                             f"{len(self.weights)} weights and "
                             f"{len(self.biases)} biases")
        fan_in = self.w_dim
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (fan_in, self.image_dim) \
                    or b.shape != (self.image_dim, ):
                raise ValueError(f"layer {i} has shapes {W.shape}, {b.shape}")
            check_finite(W, f'weights[{i}]')
            fan_in = self.image_dim


def _init_layers(rng, widths):
    weights = []
    biases = []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        weights.append(rng.standard_normal((fan_in, fan_out))
                       / np.sqrt(fan_in))
        biases.append(np.zeros(fan_out))
    return weights, biases


def init_models(z_dim=32,
                c_dim=1,
                w_dim=64,
                image_dim=192,
                depth=8,
                seed=0,
                synthesis_depth=3):
    """Initialize the mapping and synthesis networks

    Weights are drawn from N(0, 1/fan_in), biases are zero.

    Parameters
    ----------
    z_dim: `int`, optional (default: 32)
        Width of the noise space Z.
    c_dim: `int`, optional (default: 1)
        Width of the assembled condition vector.
    w_dim: `int`, optional (default: 64)
        Width of the intermediate latent space W.
    image_dim: `int`, optional (default: 192)
        Width of a synthesized image vector.
    depth: `int`, optional (default: 8)
        Number of mapping layers.
    seed: `int`, optional (default: 0)
        Root seed. The two networks draw from independent child streams.
    synthesis_depth: `int`, optional (default: 3)
        Number of synthesis layers.

    Returns
    -------
    mapping: `MappingModel`
    synthesis: `SynthesisModel`
    """
    for name, value in [('z_dim', z_dim), ('c_dim', c_dim),
                        ('w_dim', w_dim), ('image_dim', image_dim),
                        ('depth', depth), ('synthesis_depth',
                                           synthesis_depth)]:
        if int(value) < 1:
            raise ValueError(f"`{name}` must be >= 1, got {value}")
    ss_mapping, ss_synthesis = np.random.SeedSequence(int(seed)).spawn(2)
    weights, biases = _init_layers(
        np.random.default_rng(ss_mapping),
        [z_dim + c_dim] + [w_dim] * depth)
    mapping = MappingModel(z_dim=int(z_dim), c_dim=int(c_dim),
                           w_dim=int(w_dim), depth=int(depth),
                           seed=int(seed), weights=weights, biases=biases)
    weights, biases = _init_layers(
        np.random.default_rng(ss_synthesis),
        [w_dim] + [image_dim] * synthesis_depth)
    synthesis = SynthesisModel(w_dim=int(w_dim), image_dim=int(image_dim),
                               depth=int(synthesis_depth), seed=int(seed),
                               weights=weights, biases=biases)
    return mapping, synthesis


def map_conditional(model, z, cvec):
    """Map noise and a condition vector into W

    concat(z, c) is scaled to unit RMS, then every layer applies a
    leaky ReLU, the last one included.

    Parameters
    ----------
    model: `MappingModel`
    z: `LatentVector` or `numpy.ndarray`
        Noise in Z, shape (z_dim, ) or (n, z_dim).
    cvec: `numpy.ndarray`
        Condition vector (c_dim, ), or one row per z.

    Returns
    -------
    w: `LatentVector`
        Latent in W with the leading shape of `z`.
    """
    z = latent_data(z, 'Z', name='z')
    cvec = np.asarray(cvec, dtype=np.float64)
    _check_width(z, model.z_dim, 'z')
    _check_width(cvec, model.c_dim, 'cvec')
    check_finite(z, 'z')
    check_finite(cvec, 'cvec')
    if z.ndim == 2 and cvec.ndim == 1:
        cvec = np.broadcast_to(cvec, (z.shape[0], model.c_dim))
    elif z.ndim == 1 and cvec.ndim == 2:
        raise ValueError("one z cannot be paired with several conditions")
    elif z.ndim == 2 and cvec.shape[0] != z.shape[0]:
        raise ValueError(f"{z.shape[0]} noise rows for "
                         f"{cvec.shape[0]} condition rows")
    x = np.concatenate([z, cvec], axis=-1)
    x = x / np.sqrt(np.mean(x ** 2, axis=-1, keepdims=True) + 1e-8)
    for W, b in zip(model.weights, model.biases):
        x = leaky_relu(x @ W + b, model.leaky_slope)
    return LatentVector('W', x)


def p_transform(v, direction='W->P'):
    """Move a latent between W and P

    W -> P inverts the final leaky ReLU of the mapping network with
    slope 5.0, P -> W applies slope 0.2 again.

    Parameters
    ----------
    v: `LatentVector` or `numpy.ndarray`
    direction: `str`, optional (default: 'W->P')
        Choose from {'W->P', 'P->W'}.

    Returns
    -------
    v: `LatentVector`
    """
    if direction == 'W->P':
        x = latent_data(v, 'W')
        return LatentVector('P', leaky_relu(x, P_SLOPE))
    if direction == 'P->W':
        x = latent_data(v, 'P')
        return LatentVector('W', leaky_relu(x, LEAKY_SLOPE))
    raise ValueError(f"unrecognized direction '{direction}'. "
                     "Choose from {'W->P', 'P->W'}")


def _synthesis_forward(model, w):
    pres = []
    h = w
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        a = h @ W + b
        pres.append(a)
        h = a if i == model.depth - 1 else leaky_relu(a, model.leaky_slope)
    return h, pres


def synthesize(model, w):
    """Synthesize image vectors

    Parameters
    ----------
    model: `SynthesisModel`
    w: `LatentVector` or `numpy.ndarray`
        Latent in W, shape (w_dim, ) or (n, w_dim).

    Returns
    -------
    image: `numpy.ndarray`
        Shape (image_dim, ) or (n, image_dim).
    """
    w = latent_data(w, 'W', name='w')
    _check_width(w, model.w_dim, 'w')
    check_finite(w, 'w')
    image, _ = _synthesis_forward(model, w)
    return image


def synthesize_grad(model, w, upstream):
    """Gradient of <upstream, g(w)> with respect to w

    Parameters
    ----------
    model: `SynthesisModel`
    w: `LatentVector` or `numpy.ndarray`
        Latent in W, shape (w_dim, ).
    upstream: `numpy.ndarray`
        Shape (image_dim, ), or (m, image_dim) for m gradients at once.
        The identity matrix gives the transposed Jacobian.

    Returns
    -------
    grad: `numpy.ndarray`
        Shape (w_dim, ) or (m, w_dim).
    """
    w = latent_data(w, 'W', name='w')
    upstream = np.asarray(upstream, dtype=np.float64)
    _check_width(w, model.w_dim, 'w')
    _check_width(upstream, model.image_dim, 'upstream')
    _, pres = _synthesis_forward(model, w)
    g = upstream
    for i in range(model.depth - 1, -1, -1):
        if i < model.depth - 1:
            g = g * np.where(pres[i] >= 0, 1.0, model.leaky_slope)
        g = g @ model.weights[i].T
    return g
