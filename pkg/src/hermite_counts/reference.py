"""Reference count laws closed under binomial subsampling.

Three concrete families exercise the closure machinery from outside the
main code path:

* a doubled Poisson variable 2*X (even support only, so it has zero-gaps
  and cannot itself arise by thinning anything else) whose thinnings sweep
  out exactly the order-2 Hermite laws,
* the negative binomial family, closed under thinning with the shape held
  fixed and the mean scaled,
* a discrete law with alternating geometric probabilities on the even and
  odd integers, fully supported yet still not obtainable by thinning, whose
  thinnings form a one-parameter closed family.

``run_verification`` checks all of the documented identities numerically
and backs the command line ``verify`` subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import hermite2_from_mean_variance
from .pmf import PmfTable, pmf_table
from .transform import thin_pmf_oracle

#: Truncation target for internally built base tables.
_BASE_TAIL = 1e-14


def doubled_poisson_pmf(eta1: float, k_max: int) -> PmfTable:
    """Law of 2*X for X Poisson with mean 1/(2*eta1).

    All odd entries are exactly zero.  Thinning this law with p = mean*eta1
    reproduces the order-2 Hermite law with that mean and dispersion eta1.
    """
    eta1 = float(eta1)
    if not eta1 > 0.0:
        raise DomainError(f"eta1 must be positive, got {eta1}")
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    lam = 1.0 / (2.0 * eta1)
    probs = np.zeros(k_max + 1)
    term = math.exp(-lam)
    probs[0] = term
    for k in range(1, k_max // 2 + 1):
        term *= lam / k
        probs[2 * k] = term
    return PmfTable(probs)


def negative_binomial_pmf(mean: float, eta1: float, k_max: int) -> PmfTable:
    """Negative binomial with the given mean and dispersion ratio eta1.

    Parameterized so the pgf is (1 - mean*eta1*(t - 1))**(-1/eta1): shape
    1/eta1, success probability 1/(1 + mean*eta1).  Computed by the ratio
    recurrence p_{k+1} = p_k * (1-q) * (shape + k)/(k + 1).
    """
    mean = float(mean)
    eta1 = float(eta1)
    if not mean > 0.0:
        raise DomainError(f"mean must be positive, got {mean}")
    if not eta1 > 0.0:
        raise DomainError(f"eta1 must be positive, got {eta1}")
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    shape = 1.0 / eta1
    q = 1.0 / (1.0 + mean * eta1)
    probs = np.empty(k_max + 1)
    probs[0] = q**shape
    for k in range(k_max):
        probs[k + 1] = probs[k] * (1.0 - q) * (shape + k) / (k + 1.0)
    return PmfTable(probs)


def _alternating_geometric_base() -> PmfTable:
    """Base law p_{2k} = c/3**k, p_{2k+1} = c/2**k with c = 2/7, tail < 1e-14."""
    c = 2.0 / 7.0
    probs = [c, c]
    even, odd = c, c
    k = 0
    # remaining mass beyond pairs 0..k: c*(1/3)^{k+1}*(3/2) + c*(1/2)^{k+1}*2
    while c * ((1.0 / 3.0) ** (k + 1) * 1.5 + (1.0 / 2.0) ** (k + 1) * 2.0) >= _BASE_TAIL:
        k += 1
        even /= 3.0
        odd /= 2.0
        probs.append(even)
        probs.append(odd)
    return PmfTable(np.array(probs))


def alternating_geometric_pmf(p: float, k_max: int) -> PmfTable:
    """p-thinning of the alternating-geometric base law, cut at ``k_max``.

    Built numerically: the base table is tabulated to tail < 1e-14 and fed
    through the distribution-level thinning oracle.  The family mean is
    15*p/7, so the parameter range ends at mean 15/7 (the base itself).
    """
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"thinning fraction must lie in (0, 1], got {p}")
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    base = _alternating_geometric_base()
    thinned = thin_pmf_oracle(base, p)
    return thinned.truncate(min(k_max, thinned.k_max))


def alternating_geometric_pgf_values(p: float, t: float) -> tuple[float, float]:
    """(closed form, power series) for the thinned alternating-geometric pgf at ``t``.

    The base pgf is 6/(21 - 7*s**2) + 4*s/(14 - 7*s**2); thinning substitutes
    s = 1 - p*(1 - t).  The second component sums p*_k t**k from the
    numerically thinned table; the pair should agree to ~1e-10.
    """
    p = float(p)
    t = float(t)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"thinning fraction must lie in (0, 1], got {p}")
    if abs(t) > 1.0:
        raise DomainError(f"|t| must be <= 1, got {t}")
    s = 1.0 - p * (1.0 - t)
    closed = 6.0 / (21.0 - 7.0 * s * s) + 4.0 * s / (14.0 - 7.0 * s * s)
    base = _alternating_geometric_base()
    table = thin_pmf_oracle(base, p)
    series = math.fsum(pk * t**k for k, pk in enumerate(table.probs.tolist()))
    return closed, series


def has_zero_gap(table: PmfTable) -> bool:
    """True when some exactly-zero entry precedes a positive one.

    A zero-gap certifies that the variable is not a thinning of anything:
    thinning spreads mass downward, so a thinned law supported at n is
    positive everywhere below n.
    """
    probs = table.probs
    positive = np.nonzero(probs > 0.0)[0]
    if positive.size == 0:
        return False
    last = positive[-1]
    return bool(np.any(probs[:last] == 0.0))


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _close(x: np.ndarray | float, y: np.ndarray | float, tol: float) -> tuple[bool, float]:
    dev = float(np.max(np.abs(np.asarray(x) - np.asarray(y))))
    return dev <= tol, dev


def run_verification() -> list[CheckResult]:
    """Numerical identity suite over the three reference families."""
    checks: list[CheckResult] = []
    tol = 1e-10

    # Thinning the doubled Poisson with p = mean*eta1 gives the order-2
    # Hermite law with that mean and dispersion.
    worst = 0.0
    ok = True
    for mu in (0.5, 1.0, 2.0):
        for eta1 in (0.1, 0.25, 0.5):
            p = mu * eta1
            if p > 1.0:
                continue
            base = doubled_poisson_pmf(eta1, 120)
            thinned = thin_pmf_oracle(base, p)
            hermite = pmf_table(hermite2_from_mean_variance(mu, mu + eta1 * mu**2), thinned.k_max)
            good, dev = _close(thinned.probs, hermite.probs, tol)
            ok &= good
            worst = max(worst, dev)
    checks.append(
        CheckResult("doubled-poisson thinning sweeps the order-2 family", ok, f"max dev {worst:.3e}")
    )

    # Doubled Poisson has zero-gaps; the alternating-geometric base does not.
    gaps_ok = has_zero_gap(doubled_poisson_pmf(0.25, 20)) and not has_zero_gap(
        _alternating_geometric_base()
    )
    checks.append(CheckResult("zero-gap classification of the base laws", gaps_ok, ""))

    # Negative binomial: thinning scales the mean, keeps the shape.
    worst = 0.0
    ok = True
    for mu, eta1 in ((1.0, 1.0), (2.0, 0.5), (0.7, 0.3)):
        full = negative_binomial_pmf(mu, eta1, 400)
        for p in (0.2, 0.5, 0.9):
            thinned = thin_pmf_oracle(full, p)
            target = negative_binomial_pmf(p * mu, eta1, thinned.k_max)
            good, dev = _close(thinned.probs, target.probs, tol)
            ok &= good
            worst = max(worst, dev)
    checks.append(
        CheckResult("negative-binomial thinning stability", ok, f"max dev {worst:.3e}")
    )

    # Alternating-geometric family: thinning twice composes multiplicatively.
    worst = 0.0
    ok = True
    for p in (0.4, 0.8):
        for q in (0.5, 0.9):
            once = thin_pmf_oracle(alternating_geometric_pmf(p, 120), q)
            direct = alternating_geometric_pmf(p * q, once.k_max)
            good, dev = _close(once.probs, direct.probs, tol)
            ok &= good
            worst = max(worst, dev)
    checks.append(
        CheckResult("alternating-geometric thinning semigroup", ok, f"max dev {worst:.3e}")
    )

    # Base normalization and the family mean 15p/7.
    base = _alternating_geometric_base()
    norm_ok = abs(base.tail_mass) < 1e-12
    mean_ok = True
    worst = 0.0
    for p in (0.3, 0.7, 1.0):
        table = alternating_geometric_pmf(p, 200)
        dev = abs(table.truncated_mean() - 15.0 * p / 7.0)
        worst = max(worst, dev)
        mean_ok &= dev < 1e-8
    checks.append(CheckResult("alternating-geometric base normalizes", norm_ok, ""))
    checks.append(
        CheckResult("alternating-geometric mean is 15p/7", mean_ok, f"max dev {worst:.3e}")
    )

    # Closed-form pgf against the tabulated power series.
    worst = 0.0
    ok = True
    for p in (0.5, 1.0):
        for t in (-1.0, -0.3, 0.0, 0.3, 0.9, 1.0):
            closed, series = alternating_geometric_pgf_values(p, t)
            dev = abs(closed - series)
            worst = max(worst, dev)
            ok &= dev < 1e-10
    checks.append(
        CheckResult("alternating-geometric pgf matches its series", ok, f"max dev {worst:.3e}")
    )
    return checks
