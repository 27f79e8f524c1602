"""Closure operators: binomial subsampling and addition.

Parameter-space forms are exact and cheap; the distribution-level oracles
work directly on pmf tables and exist to verify the parameter forms against
brute force.  Oracle outputs inherit the input truncation: an entry of a
thinned table is accurate to within the input's tail mass, so comparisons
should only trust entries once inputs were built with tails well below the
comparison tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .model import FactorialCumulants, HermiteParams
from .pmf import PmfTable

#: Tables longer than this are refused by the thinning oracle (it is
#: quadratic in the length and intended for verification work only).
ORACLE_MAX_LEN = 5001


def _check_thinning_fraction(p: float) -> float:
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"thinning fraction must lie in (0, 1], got {p}")
    return p


def thin_params(params: HermiteParams, p: float) -> HermiteParams:
    """Coefficients of the p-thinned distribution, same order.

    Substituting 1 - p(1 - t) into the pgf and expanding
    (1 - p + p t)**i binomially gives

        a'_j = sum_{i=j..r} C(i, j) p**j (1-p)**(i-j) a_i,

    which stays non-negative whenever the input does.
    """
    p = _check_thinning_fraction(p)
    if p == 1.0:
        return params
    a = params.a
    r = len(a)
    q = 1.0 - p
    thinned = []
    for j in range(1, r + 1):
        acc = 0.0
        # multiplicative update of C(i, j) p**j q**(i-j) as i grows
        weight = p**j
        for i in range(j, r + 1):
            acc += weight * a[i - 1]
            weight *= q * (i + 1) / (i + 1 - j)
        thinned.append(acc)
    return HermiteParams(tuple(thinned))


def thin_factorial_cumulants(cumulants: FactorialCumulants, p: float) -> FactorialCumulants:
    """Factorial cumulants scale as kappa'_(j) = p**j kappa_(j) under thinning."""
    p = _check_thinning_fraction(p)
    return FactorialCumulants(
        tuple(p**j * k for j, k in enumerate(cumulants.kappa, start=1))
    )


def add_params(first: HermiteParams, second: HermiteParams) -> HermiteParams:
    """Coefficients of the sum of two independent variables (componentwise add).

    Orders may differ; the shorter vector is zero-padded.
    """
    r = max(first.order, second.order)
    a = [0.0] * r
    for i, x in enumerate(first.a):
        a[i] += x
    for i, x in enumerate(second.a):
        a[i] += x
    return HermiteParams(tuple(a))


def convolve_pmf_oracle(first: PmfTable, second: PmfTable) -> PmfTable:
    """Distribution of the sum, (P*Q)_k = sum_j P_j Q_{k-j}, by direct convolution."""
    return PmfTable(np.convolve(first.probs, second.probs))


def _binomial_row(n: int, p: float) -> np.ndarray:
    """Binomial(n, p) pmf over k = 0..n.

    Multiplicative recurrence b_{k+1} = b_k (n-k)/(k+1) * p/(1-p), anchored at
    the mode via lgamma: starting the recurrence at k = 0 underflows for p
    near 1 once n is a few hundred, losing the entire row.
    """
    if n == 0:
        return np.ones(1)
    m = min(int((n + 1) * p), n)
    log_bm = (
        math.lgamma(n + 1)
        - math.lgamma(m + 1)
        - math.lgamma(n - m + 1)
        + m * math.log(p)
        + (n - m) * math.log1p(-p)
    )
    row = np.zeros(n + 1)
    row[m] = math.exp(log_bm)
    ratio = p / (1.0 - p)
    k = np.arange(n)
    up = (n - k) / (k + 1.0) * ratio  # b_{k+1} / b_k
    if m < n:
        row[m + 1 :] = row[m] * np.cumprod(up[m:])
    if m > 0:
        row[m - 1 :: -1] = row[m] * np.cumprod(1.0 / up[m - 1 :: -1])
    return row


def thin_pmf_oracle(table: PmfTable, p: float) -> PmfTable:
    """Exact distribution of the p-thinning of a tabulated variable.

    Mixes binomials over the table: p*_k = sum_{n>=k} P_n C(n,k) p**k (1-p)**(n-k),
    truncated at the input's length.  Quadratic in the table length.
    """
    p = _check_thinning_fraction(p)
    if len(table) > ORACLE_MAX_LEN:
        raise DomainError(
            f"thinning oracle is restricted to tables of at most {ORACLE_MAX_LEN} entries"
        )
    if p == 1.0:
        return table
    probs = table.probs
    out = np.zeros(len(probs))
    out[0] = probs[0]
    for n in range(1, len(probs)):
        pn = probs[n]
        if pn == 0.0:
            continue
        out[: n + 1] += pn * _binomial_row(n, p)
    return PmfTable(out)
