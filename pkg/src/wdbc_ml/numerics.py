"""Dense float64 matrix helpers and seeded weight initialisation.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 with samples
as rows. Randomness always flows through an explicit
``numpy.random.Generator`` backed by PCG64, which produces the same stream
for a given seed on every platform.
"""

import enum

import numpy as np

from .exceptions import ConfigurationError, DimensionError

DTYPE = np.float64


class InitScheme(enum.Enum):
    ZEROS = "zeros"
    UNIFORM = "uniform"
    SCALED_NORMAL = "scaled_normal"


def make_rng(seed):
    """Return a PCG64 generator for ``seed`` (a non-negative integer)."""
    if isinstance(seed, np.random.Generator):
        return seed
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a 2-D float64 array with at least one row and column."""
    m = np.asarray(a, dtype=DTYPE)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column, got {m.shape}")
    return m


def matmul(a, b):
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def check_same_shape(a, b, what="operands"):
    if np.shape(a) != np.shape(b):
        raise DimensionError(f"{what} differ in shape: {np.shape(a)} vs {np.shape(b)}")


def init_weights(shape, scheme=InitScheme.SCALED_NORMAL, rng=None, scale=1.0):
    """Allocate a ``(fan_in, fan_out)`` weight matrix.

    ``scaled_normal`` draws N(0, 1/sqrt(fan_in)) entries, ``uniform`` draws
    U(-scale, scale), ``zeros`` ignores the generator.
    """
    rows, cols = (int(s) for s in shape)
    if rows < 1 or cols < 1:
        raise DimensionError(f"weight shape must be positive, got {shape}")
    scheme = InitScheme(scheme)
    if scheme is InitScheme.ZEROS:
        return np.zeros((rows, cols), dtype=DTYPE)
    if rng is None:
        raise ConfigurationError(f"{scheme.value} initialisation needs an rng")
    if scheme is InitScheme.UNIFORM:
        return rng.uniform(-scale, scale, size=(rows, cols))
    return rng.standard_normal((rows, cols)) / np.sqrt(rows)


def sigmoid(x, out=None):
    # tanh form: no overflow, saturates to exactly 0/1 far from the origin
    y = np.multiply(np.asarray(x, dtype=DTYPE), 0.5, out=out)
    np.tanh(y, out=y)
    y += 1.0
    y *= 0.5
    return y
