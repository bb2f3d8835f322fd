"""Deterministic Monte Carlo engine for sphere-valued random sums.

Draws are organized around :class:`RandomStream`, a value object naming one
substream of a keyed counter-based generator.  Every draw of a batch gets
its own substream, which buys two contracts at once:

* determinism - identical ``(seed, stream_index)`` always reproduces the
  identical value, independent of batch size or grouping;
* partition invariance - a batch of M draws rooted at substream s equals
  the concatenation of sub-batches rooted at s, s + m1, s + m1 + m2, ...,
  so work may be split across processes by declaring substream offsets.

Supported draw kinds are the Euclidean norm of a coefficient-weighted sum
of i.i.d. uniform unit vectors, the normalized sum with coefficients
1/sqrt(n), and the norm of a centered Gaussian vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _philox

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SEED",
    "EMPIRICAL_MOMENT_CAP",
    "GaussianNorm",
    "NormalizedSumNorm",
    "RandomStream",
    "WeightedSumNorm",
    "collect_batch",
    "empirical_even_moment",
    "empirical_tail",
    "export_batch",
    "sample_gaussian_norm",
    "sample_normalized_sum_norm",
    "sample_uniform_sphere",
    "sample_weighted_sum_norm",
]

DEFAULT_SAMPLES = 200_000
DEFAULT_SEED = 0

# Empirical moments of bounded batches above this order are dominated by
# Monte Carlo noise; analytic moment formulas are not capped.
EMPIRICAL_MOMENT_CAP = 8

# Resampling threshold for the pre-normalization Gaussian norm.  The event
# has probability ~eps^dim and exists only to keep the division safe.
_TINY_NORM = 1e-300

# target number of doubles generated per vectorized group (~32 MB)
_GROUP_VALUES = 1 << 22


def _check_dim(dim):
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")


@dataclass(frozen=True)
class RandomStream:
    """One substream of the keyed generator: ``(seed, stream_index)``.

    Distinct stream indexes yield statistically independent substreams
    (distinct Philox keys).  Instances are immutable values; drawing from
    one never mutates it.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < _philox.MAX_STREAM:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0 <= int(self.stream_index) < _philox.MAX_STREAM:
            raise ValueError("stream_index must be an unsigned 64-bit integer")

    def substream(self, offset):
        """Stream shifted by ``offset``; draw ``i`` of a batch uses offset ``i``."""
        return RandomStream(self.seed, self.stream_index + offset)

    def _indices(self, count):
        if self.stream_index + count > _philox.MAX_STREAM:
            raise ValueError("batch exhausts the 64-bit substream space")
        return np.arange(self.stream_index, self.stream_index + count,
                         dtype=np.uint64)

    def uniforms(self, count):
        """First ``count`` uniform (0, 1) values of this substream."""
        return _philox.uniform_matrix(self.seed, self._indices(1), count)[0]

    def normals(self, count):
        """First ``count`` standard normal values of this substream."""
        return _philox.normal_matrix(self.seed, self._indices(1), count)[0]


def _resample_tiny_rows(seed, substreams, matrix, norms):
    """Replace Gaussian rows whose norm underflowed the safety threshold.

    Replacement rows continue the owning draw's substream immediately after
    its regular block of n*dim values, so other draws are unaffected.
    """
    n, dim = matrix.shape[1], matrix.shape[2]
    cursors = {}
    for i, j in zip(*np.nonzero(norms < _TINY_NORM)):
        offset = cursors.get(i, n * dim)
        while True:
            row = _philox.normals_at(seed, int(substreams[i]), offset, dim)
            offset += dim
            length = math.sqrt(float(row @ row))
            if length >= _TINY_NORM:
                break
        matrix[i, j] = row
        norms[i, j] = length
        cursors[i] = offset


class _DrawKind:
    """Shared batching loop; subclasses map a normal block to one value."""

    normals_per_draw = None  # set by subclasses

    def _values_from_normals(self, block):
        raise NotImplementedError

    def draw(self, stream):
        """One realization, read from ``stream`` itself."""
        return float(self.draw_batch(stream, 1)[0])

    def draw_batch(self, stream, count):
        """``count`` realizations; draw ``i`` uses ``stream.substream(i)``."""
        if not isinstance(count, (int, np.integer)) or count < 1:
            raise ValueError(f"batch size must be a positive integer, got {count!r}")
        out = np.empty(count, dtype=np.float64)
        group = max(1, _GROUP_VALUES // self.normals_per_draw)
        position = 0
        while position < count:
            size = min(group, count - position)
            subs = stream.substream(position)._indices(size)
            block = _philox.normal_matrix(stream.seed, subs,
                                          self.normals_per_draw)
            out[position:position + size] = self._values_from_normals(
                stream.seed, subs, block)
            position += size
        return out


@dataclass(frozen=True, eq=False)
class WeightedSumNorm(_DrawKind):
    """Norm of sum_j a_j X_j with X_j i.i.d. uniform on the unit sphere."""

    coefficients: np.ndarray
    dim: int
    coefficient_norm: float = field(init=False)

    def __post_init__(self):
        _check_dim(self.dim)
        a = np.asarray(self.coefficients, dtype=np.float64)
        if a.ndim != 1 or a.size == 0 or not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be a nonempty finite 1-d sequence")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "coefficient_norm", float(np.linalg.norm(a)))

    @property
    def normals_per_draw(self):
        return self.coefficients.size * self.dim

    def _values_from_normals(self, seed, subs, block):
        n = self.coefficients.size
        x = block.reshape(-1, n, self.dim)
        norms = np.sqrt(np.einsum("ijk,ijk->ij", x, x))
        if norms.min() < _TINY_NORM:
            _resample_tiny_rows(seed, subs, x, norms)
        y = np.einsum("j,ijk->ik", self.coefficients, x / norms[:, :, None])
        return np.sqrt(np.einsum("ik,ik->i", y, y))


class NormalizedSumNorm(WeightedSumNorm):
    """Norm of the CLT-normalized sum of n uniform unit vectors."""

    def __init__(self, n, dim):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"number of summands must be positive, got {n!r}")
        super().__init__(np.full(n, 1.0 / math.sqrt(n)), dim)


@dataclass(frozen=True, eq=False)
class GaussianNorm(_DrawKind):
    """Norm of a centered Gaussian vector with covariance scale * identity."""

    dim: int
    variance_scale: float = 1.0

    def __post_init__(self):
        _check_dim(self.dim)
        if not self.variance_scale > 0.0:
            raise ValueError(
                f"variance_scale must be positive, got {self.variance_scale!r}")

    @property
    def normals_per_draw(self):
        return self.dim

    def _values_from_normals(self, seed, subs, block):
        return math.sqrt(self.variance_scale) * np.sqrt(
            np.einsum("ij,ij->i", block, block))


def sample_uniform_sphere(dim, stream):
    """One uniform point on the unit sphere in ``dim`` dimensions.

    A standard Gaussian vector is normalized to unit length, which is
    rotation invariant exactly; for dim = 1 this is a fair sign flip.
    Degenerate draws below the underflow threshold are redrawn from the
    same substream (probability is negligible, the branch only guards the
    division).
    """
    _check_dim(dim)
    vector = stream.normals(dim)
    offset = dim
    while True:
        length = math.sqrt(float(vector @ vector))
        if length >= _TINY_NORM:
            return vector / length
        vector = _philox.normals_at(stream.seed, stream.stream_index,
                                    offset, dim)
        offset += dim


def sample_weighted_sum_norm(coefficients, dim, stream):
    """One realization of ||sum_j a_j X_j||; lies in [0, sum |a_j|]."""
    return WeightedSumNorm(coefficients, dim).draw(stream)


def sample_normalized_sum_norm(n, dim, stream):
    """One realization of ||sum_j X_j / sqrt(n)||; lies in [0, sqrt(n)]."""
    return NormalizedSumNorm(n, dim).draw(stream)


def sample_gaussian_norm(dim, variance_scale, stream):
    """One realization of the norm of a centered isotropic Gaussian vector."""
    return GaussianNorm(dim, variance_scale).draw(stream)


def collect_batch(kind, count, stream):
    """``count`` realizations of ``kind`` rooted at ``stream``.

    Draw ``i`` depends only on ``(stream.seed, stream.stream_index + i)``,
    hence splitting the batch as sub-batches rooted at declared substream
    offsets reproduces the same values:

        collect_batch(kind, 10, s) == concat(collect_batch(kind, 5, s),
                                             collect_batch(kind, 5, s.substream(5)))
    """
    return kind.draw_batch(stream, count)


def empirical_even_moment(values, k):
    """Mean of s_i^(2k) over the batch.

    Capped at k <= EMPIRICAL_MOMENT_CAP: beyond that the estimate of a
    bounded batch is noise, not signal.
    """
    if not isinstance(k, (int, np.integer)) or not 0 <= k <= EMPIRICAL_MOMENT_CAP:
        raise ValueError(
            f"empirical moment order must be an integer in [0, {EMPIRICAL_MOMENT_CAP}], got {k!r}")
    batch = _as_batch(values)
    return float(np.mean(batch ** (2 * k)))


def empirical_tail(values, t):
    """Fraction of batch values strictly greater than ``t`` (t > 0)."""
    if not t > 0.0:
        raise ValueError(f"threshold must be positive, got {t!r}")
    batch = _as_batch(values)
    return float(np.mean(batch > t))


def export_batch(destination, values):
    """Write a batch as decimal text, one value per line, at full precision."""
    np.savetxt(destination, _as_batch(values), fmt="%.17g")


def _as_batch(values):
    batch = np.asarray(values, dtype=np.float64)
    if batch.ndim != 1 or batch.size == 0:
        raise ValueError("batch must be a nonempty 1-d sequence")
    return batch
