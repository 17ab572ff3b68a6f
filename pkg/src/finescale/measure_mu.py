"""The averaging measure with density 2 sin^2(x/2) / (pi x^2).

This is the Fejer-type probability density whose Fourier transform is
the triangle function max(1 - |u|, 0); the sampler's statistical
contract is exactly that transform, checked through the empirical
characteristic function.

Sampling is rejection from the two-piece envelope
g(x) = min(1/(2 pi), 2/(pi x^2)) (valid since sin^2 <= min(1, (x/2)^2)):
the central piece is uniform on [-2, 2], the tails have density
proportional to x^-2, and the two pieces carry equal mass, so the
acceptance rate is pi/4.

Draws are indexed streams: draw k of seed s consumes uniforms
u(s, k, round, slot) produced by a counter-based bit mixer, so the k-th
draw is the same no matter how draws are batched or threaded.  Parallel
consumers must take disjoint index ranges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INDEX_STRIDE = 0x2545F4914F6CDD1D


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = (x + np.uint64(_GOLDEN)).astype(np.uint64)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def _uniforms(seed: int, indices: np.ndarray, round_: int, slot: int) -> np.ndarray:
    """One uniform in [0, 1) per (seed, draw index, rejection round, slot)."""
    offset = (round_ * _GOLDEN + slot) & _MASK64
    h = indices * np.uint64(_INDEX_STRIDE) + np.uint64(offset)
    h = _splitmix64(np.uint64(seed & _MASK64) ^ _splitmix64(h))
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def mu_density(x) -> float | np.ndarray:
    """2 sin^2(x/2) / (pi x^2), with the series branch
    (1/(2 pi)) (1 - x^2/12 + x^4/360) below |x| = 1e-6."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x).astype(np.float64)
    out = np.empty_like(xv)
    small = np.abs(xv) < 1e-6
    xs = xv[~small]
    out[~small] = 2.0 * np.sin(xs / 2.0) ** 2 / (np.pi * xs * xs)
    x2 = xv[small] ** 2
    out[small] = (1.0 - x2 / 12.0 + x2 * x2 / 360.0) / (2.0 * np.pi)
    return float(out[0]) if scalar else out


def _envelope(x: np.ndarray) -> np.ndarray:
    return np.where(np.abs(x) <= 2.0, 1.0 / (2.0 * np.pi), 2.0 / (np.pi * x * x))


def _draw_values(seed: int, start: int, n: int) -> np.ndarray:
    """Values for draw indices start..start+n-1 (vectorized rejection)."""
    indices = np.arange(start, start + n, dtype=np.uint64)
    out = np.empty(n, dtype=np.float64)
    pending = np.arange(n)
    round_ = 0
    while pending.size:
        idx = indices[pending]
        u1 = _uniforms(seed, idx, round_, 0)  # piece and tail sign
        u2 = _uniforms(seed, idx, round_, 1)  # coordinate
        u3 = _uniforms(seed, idx, round_, 2)  # accept test
        central = u1 < 0.5  # the two envelope pieces carry equal mass
        sign = np.where((u1 * 4.0) % 2.0 < 1.0, 1.0, -1.0)
        x = np.where(
            central,
            (2.0 * u2 - 1.0) * 2.0,
            sign * 2.0 / np.maximum(u2, 1e-300),
        )
        accept = u3 * _envelope(x) <= mu_density(x)
        out[pending[accept]] = x[accept]
        pending = pending[~accept]
        round_ += 1
    return out


@dataclass
class MuSampler:
    """Seeded, splittable sampler; (seed, counter) fixes every draw."""

    seed: int
    counter: int = 0

    def draw(self, n: int) -> np.ndarray:
        """Next n draws; advances the counter."""
        vals = _draw_values(self.seed, self.counter, n)
        self.counter += n
        return vals

    def values_at(self, start: int, n: int) -> np.ndarray:
        """Draws for an explicit index range, without touching the
        counter (for parallel consumers with disjoint ranges)."""
        return _draw_values(self.seed, start, n)


def sample_alpha(sampler: MuSampler, r: int) -> np.ndarray:
    """One r-coordinate draw (consumes r stream indices)."""
    if r < 1:
        raise InvalidSpec("r must be >= 1")
    return sampler.draw(r)


def sample_alpha_at(sampler: MuSampler, draw_index: int, r: int) -> np.ndarray:
    """The draw_index-th alpha vector (indices r*draw_index..r*draw_index+r-1)."""
    if r < 1:
        raise InvalidSpec("r must be >= 1")
    return sampler.values_at(r * draw_index, r)


def sample_box_at(
    sampler: MuSampler, draw_index: int, r: int, lo: float = 1.0, hi: float = 2.0
) -> np.ndarray:
    """Uniform-box alternative to the measure draw (same index
    discipline); the box [1, 2]^r avoids the degenerate origin."""
    if r < 1:
        raise InvalidSpec("r must be >= 1")
    if not hi > lo:
        raise InvalidSpec("box needs hi > lo")
    idx = np.arange(r * draw_index, r * draw_index + r, dtype=np.uint64)
    u = _uniforms(sampler.seed, idx, 0, 3)
    return lo + (hi - lo) * u


def empirical_charfn(samples, u: float) -> complex:
    """(1/n) sum of e^{i u x_k}."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise InvalidSpec("empty sample list")
    return complex(np.mean(np.exp(1j * u * samples)))


def triangle(u: float) -> float:
    """Fourier transform of the density: max(1 - |u|, 0)."""
    return max(1.0 - abs(u), 0.0)


def quadrature_nodes(n_nodes: int = 10**4, box: float = 50.0):
    """Midpoint nodes and density weights on [-box, box] for the
    deterministic alpha mode; weights are unnormalized (consumers
    divide by their sum, which removes the truncated tail mass)."""
    if n_nodes < 2:
        raise InvalidSpec("need at least two quadrature nodes")
    step = 2.0 * box / n_nodes
    nodes = -box + (np.arange(n_nodes) + 0.5) * step
    return nodes, mu_density(nodes) * step
