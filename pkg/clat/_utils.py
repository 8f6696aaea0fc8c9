"""Utility functions and classes"""

import zlib
import numpy as np

from ._errors import NumericalError


def stage_rng(seed, stage):
    """Random number generator of one named pipeline stage.

    All randomness of a run flows from a single root seed. Each stage gets
    its own stream keyed by the CRC-32 of its name, so adding or reordering
    stages never shifts the draws of another stage.

    Parameters
    ----------
    seed: `int`
        Root seed.
    stage: `str`
        Stage name, e.g. 'fit:A' or 'center:global'.

    Returns
    -------
    rng: `numpy.random.Generator`
    """
    key = zlib.crc32(str(stage).encode('utf-8'))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))


def as_rng(rng):
    """Accept a seed or a generator"""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit `rng` or seed is required")
    return np.random.default_rng(rng)


def batch_sizes(n, batch_size):
    """Split `n` draws into fixed-order batches"""
    n_full, rest = divmod(int(n), int(batch_size))
    sizes = [int(batch_size)] * n_full
    if rest > 0:
        sizes.append(rest)
    return sizes


def leaky_relu(x, slope):
    return np.where(x >= 0, x, x * slope)


def check_finite(x, name):
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"`{name}` contains non-finite values")
