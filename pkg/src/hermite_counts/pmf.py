"""Exact probability mass tables and the log-likelihood built on them.

Probabilities follow the Panjer-style recurrence

    k * p_k = sum_{i=1..r} i * a_i * p_{k-i},      p_0 = exp(-sum_i a_i),

with p_{-1} = ... = p_{1-r} = 0.  Everything is evaluated in linear space;
p_0 underflows once sum_i a_i exceeds roughly 745, so a hard guard rejects
rates above RATE_GUARD before that happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import CountHistogram
from .errors import DomainError, IterationCap, OverflowGuard
from .model import HermiteParams

#: Largest admissible sum of coefficients; beyond this exp(-sum) underflows.
RATE_GUARD = 700.0

#: Hard cap on adaptive table length.
MAX_TABLE_LEN = 10**7

#: Initial table length for adaptive truncation; grown by doubling.
ADAPTIVE_START = 64


@dataclass(frozen=True, eq=False)
class PmfTable:
    """Truncated probability vector p_0..p_K with its unaccounted tail mass.

    ``probs`` is read-only; ``tail_mass`` is 1 - sum(probs) computed with
    compensated summation at construction.  Identity semantics: compare
    ``probs`` arrays directly when equality of content matters.
    """

    probs: np.ndarray
    tail_mass: float = field(init=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise DomainError("a pmf table needs a one-dimensional, non-empty vector")
        if not np.all(np.isfinite(p)):
            raise DomainError("pmf table entries must be finite")
        if np.any(p < 0.0):
            raise DomainError("pmf table entries must be non-negative")
        total = math.fsum(p.tolist())
        if total > 1.0 + 1e-12:
            raise DomainError(f"pmf table mass {total} exceeds 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "tail_mass", 1.0 - total)

    @property
    def k_max(self) -> int:
        return len(self.probs) - 1

    def __len__(self) -> int:
        return len(self.probs)

    def truncated_mean(self) -> float:
        """Mean of the tabulated part, sum_k k * p_k."""
        return math.fsum(k * pk for k, pk in enumerate(self.probs.tolist()))

    def truncate(self, k_max: int) -> "PmfTable":
        """A copy cut off at ``k_max`` (tail mass grows accordingly)."""
        if k_max < 0:
            raise DomainError("k_max must be non-negative")
        return PmfTable(self.probs[: k_max + 1])


def _check_rate(params: HermiteParams) -> float:
    lam = params.total_rate
    if lam > RATE_GUARD:
        raise OverflowGuard(
            f"sum of coefficients {lam} exceeds {RATE_GUARD}; p_0 would underflow"
        )
    return lam


def _recurrence(a: tuple[float, ...], p0: float, k_max: int) -> list[float]:
    r = len(a)
    p = [0.0] * (k_max + 1)
    p[0] = p0
    for k in range(1, k_max + 1):
        acc = 0.0
        for i in range(1, min(r, k) + 1):
            acc += i * a[i - 1] * p[k - i]
        p[k] = acc / k
    return p


def pmf_table(params: HermiteParams, k_max: int) -> PmfTable:
    """Exact probabilities p_0..p_{k_max} by the recurrence above."""
    if k_max < 0:
        raise DomainError(f"k_max must be non-negative, got {k_max}")
    lam = _check_rate(params)
    return PmfTable(np.array(_recurrence(params.a, math.exp(-lam), int(k_max))))


def adaptive_pmf(params: HermiteParams, eps: float) -> PmfTable:
    """Smallest table whose tail mass is below ``eps``.

    The table is grown by doubling from ADAPTIVE_START entries and trimmed
    back to the first index where the accumulated mass exceeds 1 - eps.
    """
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    lam = _check_rate(params)
    a = params.a
    r = len(a)

    p = [math.exp(-lam)]
    # Neumaier running sum of p, recorded per entry to locate the trim point.
    total, comp = p[0], 0.0
    cums = [total]
    size = ADAPTIVE_START
    while True:
        if cums[-1] > 1.0 - eps:
            k_stop = next(k for k, c in enumerate(cums) if c > 1.0 - eps)
            # The running sum and the table's fsum-based tail can disagree by
            # an ulp; certify against the authoritative field, nudging right.
            while k_stop < len(p):
                table = PmfTable(np.array(p[: k_stop + 1]))
                if table.tail_mass < eps:
                    return table
                k_stop += 1
        if size > MAX_TABLE_LEN:
            raise IterationCap(f"tail mass still >= {eps} at table length {MAX_TABLE_LEN}")
        for k in range(len(p), size + 1):
            acc = 0.0
            for i in range(1, min(r, k) + 1):
                acc += i * a[i - 1] * p[k - i]
            pk = acc / k
            p.append(pk)
            t = total + pk
            if abs(total) >= abs(pk):
                comp += (total - t) + pk
            else:
                comp += (pk - t) + total
            total = t
            cums.append(total + comp)
        size *= 2


def log_likelihood(params: HermiteParams, hist: CountHistogram) -> float:
    """sum_k n_k log p_k, or -inf when any observed count has zero probability.

    -inf is a legitimate value (zero-gap models assign zero probability to
    some counts), distinguished from errors so optimizers can treat the
    point as infeasible.
    """
    table = pmf_table(params, hist.max_count)
    probs = table.probs
    terms = []
    for count, freq in hist.bins:
        pk = probs[count]
        if pk <= 0.0:
            return float("-inf")
        terms.append(freq * math.log(pk))
    return math.fsum(terms)


def loglik_gradient(params: HermiteParams, hist: CountHistogram) -> np.ndarray:
    """Analytic gradient of the log-likelihood in the coefficients.

    d p_k / d a_j = p_{k-j} [k >= j] - p_k, hence
    d l / d a_j = sum_k n_k (p_{k-j}/p_k - 1).
    """
    table = pmf_table(params, hist.max_count)
    probs = table.probs
    r = params.order
    grad = np.empty(r)
    for j in range(1, r + 1):
        terms = []
        for count, freq in hist.bins:
            pk = probs[count]
            if pk <= 0.0:
                raise DomainError(
                    f"observed count {count} has zero probability; gradient undefined"
                )
            ratio = probs[count - j] / pk if count >= j else 0.0
            terms.append(freq * (ratio - 1.0))
        grad[j - 1] = math.fsum(terms)
    return grad
