"""Random variate generation with a fully specified, portable generator.

Draws must be reproducible from a seed across platforms and languages, so
the generator is SplitMix64 (Steele, Lea & Flood's 64-bit mixer with the
golden-ratio increment) rather than whatever the host runtime provides.
A Hermite draw is the linear combination sum_i i*X_i of independent Poisson
components; thinning replaces each realized x by a Binomial(x, p) draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, OverflowGuard
from .model import HermiteParams

_MASK64 = (1 << 64) - 1

#: Component rates above this are refused (sequential samplers degrade).
MAX_COMPONENT_RATE = 1e6

#: Rate threshold between sequential cdf inversion and envelope rejection.
_POISSON_INVERSION_MAX = 30.0

#: Largest count thinned by literal Bernoulli trials; above it, cdf inversion.
_BERNOULLI_MAX = 64


class SplitMix64:
    """SplitMix64: state advances by 0x9E3779B97F4A7C15, output is mixed.

    Constants follow the reference implementation (Vigna's splitmix64.c),
    so any conforming implementation reproduces the same stream.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def derive_seed(seed: int, stream: int) -> int:
    """A decorrelated child seed for sub-stream ``stream`` of ``seed``."""
    rng = SplitMix64((int(seed) ^ (int(stream) * 0xD1342543DE82EF95)) & _MASK64)
    return rng.next_u64()


@dataclass(frozen=True, slots=True)
class SampleBatch:
    """Realized draws plus the seed that produced them."""

    values: tuple[int, ...]
    seed: int

    def __len__(self) -> int:
        return len(self.values)

    def mean(self) -> float:
        return sum(self.values) / len(self.values)


def sample_poisson(rate: float, rng: SplitMix64) -> int:
    """One Poisson draw using the supplied generator state.

    rate <= 30: sequential cdf inversion (exact search).
    rate  > 30: Atkinson's rejection method with a logistic envelope
    (c = 0.767 - 3.36/rate, beta = pi/sqrt(3 rate)), which needs no
    normal-approximation shortcut and stays exact for large rates.
    """
    if rate < 0.0 or not math.isfinite(rate):
        raise DomainError(f"Poisson rate must be finite and >= 0, got {rate}")
    if rate == 0.0:
        return 0
    if rate <= _POISSON_INVERSION_MAX:
        u = rng.next_float()
        k = 0
        term = math.exp(-rate)
        cum = term
        # A uniform above the representable cdf limit cannot occur with
        # meaningful probability; cap the search defensively.
        cap = int(rate + 60.0 * math.sqrt(rate) + 200.0)
        while u >= cum and k < cap:
            k += 1
            term *= rate / k
            cum += term
            if term == 0.0:
                break
        return k
    c = 0.767 - 3.36 / rate
    beta = math.pi / math.sqrt(3.0 * rate)
    alpha = beta * rate
    k0 = math.log(c / beta) - rate
    log_rate = math.log(rate)
    while True:
        u = rng.next_float()
        if u <= 0.0 or u >= 1.0:
            continue
        x = (alpha - math.log((1.0 - u) / u)) / beta
        n = math.floor(x + 0.5)
        if n < 0:
            continue
        v = rng.next_float()
        if v <= 0.0:
            continue
        y = alpha - beta * x
        lhs = y + math.log(v / (1.0 + math.exp(y)) ** 2)
        rhs = k0 + n * log_rate - math.lgamma(n + 1.0)
        if lhs <= rhs:
            return int(n)


def sample_binomial(trials: int, p: float, rng: SplitMix64) -> int:
    """One Binomial(trials, p) draw.

    Small counts run literal Bernoulli trials; larger ones use cdf inversion
    on the smaller of (p, 1-p) so the starting mass never underflows at
    realistic counts (an exact trial-by-trial fallback covers the rest).
    """
    if trials < 0:
        raise DomainError(f"trial count must be >= 0, got {trials}")
    if trials == 0 or p == 0.0:
        return 0
    if p == 1.0:
        return trials
    if trials <= _BERNOULLI_MAX:
        return sum(rng.next_float() < p for _ in range(trials))
    flip = p > 0.5
    q = 1.0 - p if flip else p
    base = (1.0 - q) ** trials
    if base == 0.0:
        # (1-q)**trials underflowed; fall back to exact Bernoulli trials.
        hits = sum(rng.next_float() < q for _ in range(trials))
        return trials - hits if flip else hits
    u = rng.next_float()
    k = 0
    term = base
    cum = term
    ratio = q / (1.0 - q)
    while u >= cum and k < trials:
        term *= ratio * (trials - k) / (k + 1.0)
        k += 1
        cum += term
    return trials - k if flip else k


def sample_hermite(params: HermiteParams, n: int, seed: int) -> SampleBatch:
    """``n`` independent draws of sum_i i*X_i with X_i ~ Poisson(a_i)."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    for i, rate in enumerate(params.a, start=1):
        if rate > MAX_COMPONENT_RATE:
            raise OverflowGuard(
                f"component rate a_{i} = {rate} exceeds {MAX_COMPONENT_RATE}"
            )
    rng = SplitMix64(seed)
    rates = params.a
    values = []
    for _ in range(n):
        total = 0
        for i, rate in enumerate(rates, start=1):
            if rate > 0.0:
                total += i * sample_poisson(rate, rng)
        values.append(total)
    return SampleBatch(values=tuple(values), seed=int(seed) & _MASK64)


def thin_sample(batch: SampleBatch, p: float, seed: int) -> SampleBatch:
    """Binomially subsample every realized count: x -> Binomial(x, p)."""
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"thinning fraction must lie in (0, 1], got {p}")
    if p == 1.0:
        return SampleBatch(values=batch.values, seed=int(seed) & _MASK64)
    rng = SplitMix64(seed)
    values = tuple(sample_binomial(x, p, rng) for x in batch.values)
    return SampleBatch(values=values, seed=int(seed) & _MASK64)
