"""Order selection by nested likelihood-ratio tests with a boundary null.

Testing whether the top coefficient vanishes puts the null on the boundary
of the feasible set, so the statistic is asymptotically a 50:50 mixture of
a point mass at zero and chi-square with one degree of freedom: its upper
alpha tail points coincide with the chi-square upper 2*alpha points, which
is why the survival probability below is halved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .data import CountHistogram
from .errors import DomainError
from .estimation import DEFAULT_MAX_ITER, DEFAULT_TOL, FitResult, fit_mle

#: Statistics below this are attributed to optimizer noise on nested fits
#: and treated as the mixture's atom at zero.
ZERO_STATISTIC_TOL = 1e-7


@dataclass(frozen=True, slots=True)
class LadderStep:
    """One rung: the order-``alt_order`` fit tested against the next order down."""

    alt_order: int
    statistic: float
    p_value: float
    rejected: bool


@dataclass(frozen=True, slots=True)
class SelectionTrace:
    """Everything a selection run saw: fits for orders 1..len(fits), the
    ladder of tests, the chosen order, and the significance level used."""

    alpha: float
    r_max: int
    chosen_order: int
    fits: tuple[FitResult, ...]
    steps: tuple[LadderStep, ...]

    def fit_for(self, order: int) -> FitResult:
        return self.fits[order - 1]


def lrt_statistic(loglik_full: float, loglik_null: float) -> float:
    """D = max(0, 2*(l_full - l_null)); tiny negatives are optimizer noise."""
    if not (math.isfinite(loglik_full) and math.isfinite(loglik_null)):
        raise DomainError("log-likelihoods must be finite")
    return max(0.0, 2.0 * (loglik_full - loglik_null))


def lrt_pvalue(statistic: float) -> float:
    """Upper tail of the 50:50 zero/chi-square(1) mixture at ``statistic``.

    Exactly zero hits the atom (p = 1); positive values get half the
    chi-square(1) survival function, erfc(sqrt(D/2))/2.
    """
    if statistic < 0.0 or not math.isfinite(statistic):
        raise DomainError(f"statistic must be finite and >= 0, got {statistic}")
    if statistic == 0.0:
        return 1.0
    return 0.5 * math.erfc(math.sqrt(statistic / 2.0))


def select_order(
    hist: CountHistogram,
    r_max: int,
    alpha: float,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SelectionTrace:
    """Forward ladder: accept order r+1 only while its top coefficient tests nonzero.

    Fits order 1 first; each subsequent rung compares the order-(r+1) fit to
    the order-r fit and stops at the first non-rejection (p >= alpha) or at
    ``r_max``.  Statistics below ZERO_STATISTIC_TOL are snapped to the atom
    at zero before the p-value is taken.
    """
    if r_max < 1:
        raise DomainError(f"r_max must be >= 1, got {r_max}")
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")

    fits = [fit_mle(hist, 1, tol=tol, max_iter=max_iter)]
    steps: list[LadderStep] = []
    chosen = 1
    for alt_order in range(2, r_max + 1):
        fit_alt = fit_mle(hist, alt_order, tol=tol, max_iter=max_iter)
        fits.append(fit_alt)
        statistic = lrt_statistic(fit_alt.loglik, fits[alt_order - 2].loglik)
        if statistic < ZERO_STATISTIC_TOL:
            statistic = 0.0
        p_value = lrt_pvalue(statistic)
        rejected = p_value < alpha
        steps.append(
            LadderStep(alt_order=alt_order, statistic=statistic, p_value=p_value, rejected=rejected)
        )
        if not rejected:
            break
        chosen = alt_order
    return SelectionTrace(
        alpha=alpha,
        r_max=r_max,
        chosen_order=chosen,
        fits=tuple(fits),
        steps=tuple(steps),
    )
