"""Parameterizations of rth-order Hermite count distributions.

A distribution in this family has probability generating function

    Phi(t) = exp( sum_{i=1..r} a_i * (t**i - 1) ),    a_i >= 0,

equivalently the law of X = sum_i i*X_i for independent Poisson X_i with
means a_i.  r = 1 is Poisson; r = 2 is the classical Hermite distribution.

Three equivalent parameter systems live here:

* the exponent coefficients ``a`` (closed-form pmf recurrence, sampling),
* the factorial cumulants ``kappa_(j) = d^j log Phi / dt^j |_{t=1}``,
  which add under convolution and scale as p**j under binomial thinning,
* ordinary cumulants up to order four, ``kappa_s = sum_i i**s * a_i``,
  from which the thinning-invariant ratios eta_i are formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: Negative coefficients larger than this (in absolute value) are rejected
#: when converting factorial cumulants back to exponent coefficients;
#: smaller ones are treated as floating-point noise and clamped to zero.
COEFF_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class HermiteParams:
    """Exponent coefficients a_1..a_r; all non-negative and finite.

    The all-zero vector is legal and denotes the point mass at zero.
    """

    a: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(x) for x in self.a)
        if len(coeffs) < 1:
            raise DomainError("order must be at least 1")
        for i, x in enumerate(coeffs, start=1):
            if not math.isfinite(x):
                raise DomainError(f"a_{i} must be finite, got {x}")
            if x < 0.0:
                raise DomainError(f"a_{i} must be non-negative, got {x}")
        object.__setattr__(self, "a", coeffs)

    @property
    def order(self) -> int:
        return len(self.a)

    @property
    def total_rate(self) -> float:
        """sum_i a_i, the total rate of the underlying Poisson components."""
        return math.fsum(self.a)

    def is_degenerate(self) -> bool:
        """True for the point mass at zero (every a_i == 0)."""
        return all(x == 0.0 for x in self.a)


@dataclass(frozen=True, slots=True)
class FactorialCumulants:
    """Factorial cumulants kappa_(1)..kappa_(r).

    kappa_(1) is the mean and must be non-negative.  The vector corresponds
    to an admissible coefficient vector iff the triangular back-substitution
    of :func:`factorial_cumulants_to_params` yields all a_i >= 0.
    """

    kappa: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(x) for x in self.kappa)
        if len(values) < 1:
            raise DomainError("order must be at least 1")
        for j, x in enumerate(values, start=1):
            if not math.isfinite(x):
                raise DomainError(f"kappa_({j}) must be finite, got {x}")
        if values[0] < 0.0:
            raise DomainError(f"kappa_(1) is the mean and must be >= 0, got {values[0]}")
        object.__setattr__(self, "kappa", values)

    @property
    def order(self) -> int:
        return len(self.kappa)

    @property
    def mean(self) -> float:
        return self.kappa[0]


@dataclass(frozen=True, slots=True)
class CumulantSummary:
    """Ordinary cumulants: mean, variance, and the third and fourth cumulants."""

    mean: float
    variance: float
    kappa3: float
    kappa4: float


@dataclass(frozen=True, slots=True)
class ThinningInvariants:
    """Ratios (eta_1, eta_2, eta_3) that binomial subsampling leaves unchanged.

    eta_i equals kappa_(i+1) / mean**(i+1); thinning scales kappa_(j) by p**j
    and the mean by p, so each ratio is invariant.  For an order-r family
    every eta_j with j >= r vanishes.
    """

    eta: tuple[float, float, float]

    @property
    def eta1(self) -> float:
        return self.eta[0]

    @property
    def eta2(self) -> float:
        return self.eta[1]

    @property
    def eta3(self) -> float:
        return self.eta[2]


def params_to_factorial_cumulants(params: HermiteParams) -> FactorialCumulants:
    """Factorial cumulants of the distribution with exponent coefficients ``params``.

    Differentiating sum_i a_i (t**i - 1) j times at t = 1 gives
    kappa_(j) = sum_{i=j..r} i!/(i-j)! * a_i.
    """
    r = params.order
    a = params.a
    kappa = tuple(
        math.fsum(math.perm(i, j) * a[i - 1] for i in range(j, r + 1))
        for j in range(1, r + 1)
    )
    return FactorialCumulants(kappa)


def _coeffs_from_factorial_cumulants(kappa: tuple[float, ...], *, clamp_all: bool) -> list[float]:
    """Triangular back-substitution from kappa_(r) downward.

    With ``clamp_all`` every negative coefficient is clamped to zero and the
    clamped value feeds the remaining substitutions (moment-initializer
    behaviour); otherwise negatives beyond COEFF_TOL raise.
    """
    r = len(kappa)
    a = [0.0] * r
    for j in range(r, 0, -1):
        resid = kappa[j - 1] - math.fsum(
            math.perm(i, j) * a[i - 1] for i in range(j + 1, r + 1)
        )
        aj = resid / math.factorial(j)
        if aj < 0.0:
            if not clamp_all and aj < -COEFF_TOL:
                raise DomainError(
                    f"cumulant vector is not admissible: back-substitution gives a_{j} = {aj}"
                )
            aj = 0.0
        a[j - 1] = aj
    return a


def factorial_cumulants_to_params(cumulants: FactorialCumulants) -> HermiteParams:
    """Invert :func:`params_to_factorial_cumulants` by back-substitution.

    Raises DomainError when the cumulant vector does not correspond to any
    non-negative coefficient vector (beyond a noise tolerance of
    ``COEFF_TOL``, inside which coefficients are clamped to zero).
    """
    return HermiteParams(tuple(_coeffs_from_factorial_cumulants(cumulants.kappa, clamp_all=False)))


def ordinary_cumulants(params: HermiteParams) -> CumulantSummary:
    """Mean, variance and third/fourth cumulants via kappa_s = sum_i i**s a_i."""
    a = params.a
    moments = [
        math.fsum(i**s * a[i - 1] for i in range(1, len(a) + 1)) for s in (1, 2, 3, 4)
    ]
    return CumulantSummary(mean=moments[0], variance=moments[1], kappa3=moments[2], kappa4=moments[3])


def thinning_invariants(summary: CumulantSummary) -> ThinningInvariants:
    """The ratios eta_1..eta_3 computed from ordinary cumulants.

    eta_1 = (var - mean)/mean**2
    eta_2 = (kappa3 - 3 var + 2 mean)/mean**3
    eta_3 = (kappa4 - 6 kappa3 + 11 var - 6 mean)/mean**4
    """
    mu = summary.mean
    if not mu > 0.0:
        raise DomainError(f"mean must be positive to form thinning invariants, got {mu}")
    eta1 = (summary.variance - mu) / mu**2
    eta2 = (summary.kappa3 - 3.0 * summary.variance + 2.0 * mu) / mu**3
    eta3 = (summary.kappa4 - 6.0 * summary.kappa3 + 11.0 * summary.variance - 6.0 * mu) / mu**4
    return ThinningInvariants((eta1, eta2, eta3))


def pgf_eval(params: HermiteParams, t: float) -> float:
    """Probability generating function exp(sum_i a_i (t**i - 1)) at ``t``."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    return math.exp(math.fsum(a_i * (t**i - 1.0) for i, a_i in enumerate(params.a, start=1)))


def hermite2_from_mean_variance(mean: float, variance: float) -> HermiteParams:
    """Order-2 coefficients from (mean, variance): a_1 = 2*mean - var, a_2 = (var - mean)/2.

    Admissible iff mean > 0 and mean <= variance <= 2*mean.
    """
    mean = float(mean)
    variance = float(variance)
    if not mean > 0.0:
        raise DomainError(f"mean must be positive, got {mean}")
    if not (mean <= variance <= 2.0 * mean):
        raise DomainError(
            f"(mean, variance) = ({mean}, {variance}) violates mean <= variance <= 2*mean"
        )
    return HermiteParams((2.0 * mean - variance, (variance - mean) / 2.0))
