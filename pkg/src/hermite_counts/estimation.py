"""Fitting: moment-based initialization and box-constrained maximum likelihood.

The feasible set is the non-negative orthant in the exponent coefficients,
so the optimizer is projected gradient ascent (spectral trial steps, Armijo
backtracking): the analytic gradient costs one pmf recurrence, the
projection is a clamp, and second-order machinery adds nothing at these
orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import CountHistogram
from .errors import DataError, DomainError, OverflowGuard
from .model import (
    FactorialCumulants,
    HermiteParams,
    _coeffs_from_factorial_cumulants,
)
from .pmf import log_likelihood, loglik_gradient

#: Armijo line-search constants: sufficient-increase slope and step shrink.
_ARMIJO_SLOPE = 1e-4
_ARMIJO_SHRINK = 0.5

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True, slots=True)
class FitResult:
    """Outcome of a likelihood fit.

    ``grad_norm`` is the Euclidean norm of the gradient projected onto the
    feasible cone (components at an active bound count only when they point
    inward) at the final iterate; ``converged`` means it dropped below
    tol * (1 + |loglik|) within the iteration budget.
    """

    params: HermiteParams
    loglik: float
    converged: bool
    iterations: int
    grad_norm: float
    init: HermiteParams


def sample_factorial_moments(hist: CountHistogram, r: int) -> tuple[float, ...]:
    """Empirical factorial moments m_(k) = mean of x(x-1)...(x-k+1), k = 1..r.

    The falling factorials are exact integers, so each moment is a single
    exact integer sum divided by n.
    """
    if r < 1:
        raise DomainError(f"order must be >= 1, got {r}")
    n = hist.n
    moments = []
    for k in range(1, r + 1):
        total = sum(freq * math.perm(count, k) for count, freq in hist.bins if count >= k)
        moments.append(total / n)
    return tuple(moments)


def factorial_moments_to_cumulants(moments: tuple[float, ...]) -> FactorialCumulants:
    """Convert factorial moments to factorial cumulants.

    Uses the log-exp recursion
    kappa_(k) = m_(k) - sum_{j=1..k-1} C(k-1, j-1) kappa_(j) m_(k-j),
    which reproduces the closed forms kappa_(2) = m_(2) - m_(1)**2, etc.
    """
    if len(moments) < 1:
        raise DomainError("need at least one moment")
    kappa: list[float] = []
    for k in range(1, len(moments) + 1):
        correction = math.fsum(
            math.comb(k - 1, j - 1) * kappa[j - 1] * moments[k - j - 1]
            for j in range(1, k)
        )
        kappa.append(moments[k - 1] - correction)
    return FactorialCumulants(tuple(kappa))


def _uniform_mean_split(mean: float, r: int) -> HermiteParams:
    # a_i = mean/(i*r) keeps sum_i i*a_i equal to the sample mean.
    return HermiteParams(tuple(mean / (i * r) for i in range(1, r + 1)))


def fit_moments(hist: CountHistogram, r: int) -> HermiteParams:
    """Moment estimator: sample factorial cumulants, back-substituted and clamped.

    Negative coefficients produced by sampling noise are clamped to zero as
    the substitution proceeds, so the result always lies in the feasible set.
    """
    kappa = factorial_moments_to_cumulants(sample_factorial_moments(hist, r))
    if kappa.mean <= 0.0:
        raise DataError("sample mean is zero; every observation is 0")
    coeffs = _coeffs_from_factorial_cumulants(kappa.kappa, clamp_all=True)
    if all(c == 0.0 for c in coeffs):
        return _uniform_mean_split(kappa.mean, r)
    return HermiteParams(tuple(coeffs))


def _project(a: np.ndarray) -> np.ndarray:
    return np.maximum(a, 0.0)


def _projected_gradient(a: np.ndarray, grad: np.ndarray) -> np.ndarray:
    g = grad.copy()
    at_bound = a <= 0.0
    g[at_bound] = np.maximum(g[at_bound], 0.0)
    return g


def mle_iterates(
    hist: CountHistogram,
    init: HermiteParams,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
):
    """Yield (params, loglik, grad_norm) per accepted ascent iterate.

    The first yield is the initial point; iteration stops once the projected
    gradient norm falls below tol * (1 + |loglik|), the line search stalls,
    or ``max_iter`` accepted steps have been taken.
    """
    a = np.array(init.a, dtype=float)
    loglik = log_likelihood(HermiteParams(tuple(a)), hist)
    if not math.isfinite(loglik):
        raise DomainError("initial point has zero likelihood; choose a feasible start")
    step = 1.0
    prev_a: np.ndarray | None = None
    prev_grad: np.ndarray | None = None
    for taken in range(max_iter + 1):
        params = HermiteParams(tuple(a))
        grad = loglik_gradient(params, hist)
        gnorm = float(np.linalg.norm(_projected_gradient(a, grad)))
        yield params, loglik, gnorm
        if gnorm <= tol * (1.0 + abs(loglik)) or taken == max_iter:
            return
        # Spectral (Barzilai-Borwein) trial step: plain steepest ascent
        # zigzags to a standstill on the nearly flat directions that nested
        # overfits produce; the BB step tracks the local curvature instead.
        if prev_a is not None:
            dx = a - prev_a
            dg = grad - prev_grad
            curvature = -float(dx @ dg)
            if curvature > 0.0:
                step = float(dx @ dx) / curvature
        alpha = min(max(step, 1e-13), 1e13)
        prev_a, prev_grad = a.copy(), grad.copy()
        # Backtracking: accept the first step with sufficient increase along
        # the projected arc; the reference direction is the raw gradient.
        while True:
            cand = _project(a + alpha * grad)
            try:
                cand_ll = log_likelihood(HermiteParams(tuple(cand)), hist)
            except OverflowGuard:
                cand_ll = float("-inf")  # trial step left the computable region
            gain_floor = _ARMIJO_SLOPE * float(grad @ (cand - a))
            if math.isfinite(cand_ll) and cand_ll >= loglik + gain_floor:
                break
            alpha *= _ARMIJO_SHRINK
            if alpha < 1e-18:
                return  # stalled: no representable step improves the objective
        if np.array_equal(cand, a):
            return  # step rounded to no movement
        a, loglik, step = cand, cand_ll, alpha


def fit_mle(
    hist: CountHistogram,
    r: int,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FitResult:
    """Constrained maximum likelihood over coefficients a_i >= 0.

    Starts from :func:`fit_moments`; if that initializer assigns zero
    probability to an observed count (possible when clamping zeroes a_1 on
    data with odd counts), falls back to the uniform mean split, which is
    strictly positive and therefore always feasible.
    """
    if r < 1:
        raise DomainError(f"order must be >= 1, got {r}")
    init = fit_moments(hist, r)
    if not math.isfinite(log_likelihood(init, hist)):
        init = _uniform_mean_split(hist.mean(), r)

    params, loglik, gnorm = init, float("-inf"), float("inf")
    iterations = -1  # the first yield is the initial point, not a step
    for params, loglik, gnorm in mle_iterates(hist, init, tol=tol, max_iter=max_iter):
        iterations += 1
    converged = gnorm <= tol * (1.0 + abs(loglik))
    return FitResult(
        params=params,
        loglik=loglik,
        converged=converged,
        iterations=iterations,
        grad_norm=gnorm,
        init=init,
    )
