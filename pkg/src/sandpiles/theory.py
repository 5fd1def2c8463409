"""Closed-form predictions for p-ranks of random bipartite sandpile groups.

The limiting law implemented here: for a random bipartite graph with parts of
size n and floor(alpha*n), the p-rank of the sandpile group is (up to an O(1)
distributional distance) distributed as

    max(B(n, 1/p) - floor(alpha*n), 0),

a truncated shifted binomial.  Everything else in the module is supporting
machinery: exact binomial arithmetic over ``fractions.Fraction``, the three
expectation regimes (alpha below / above / at 1/p), an exact identity for
binomial conditional means, the De Moivre-Laplace local estimate, a Hoeffding
tail bound, and a min-entropy lower bound for the full-rank probability of
random matrices over GF(p).

Exactness policy: whenever a parameter is rational, probabilities are
computed in exact rational arithmetic and rounded to binary64 only at the
reporting boundary.  Float parameters take a log-gamma path with relative
error comfortably below 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, lgamma, log, pi, sqrt

from .bigraph import floor_ratio
from .errors import (
    EmptyConditioningEventError,
    InvalidParamsError,
    InvalidShapeError,
    NotPrimeError,
    OutOfRangeError,
    OutOfSupportError,
)
from .gfp import is_prime


@dataclass(frozen=True)
class BinomialSpec:
    """A binomial distribution B(n, prob).

    ``prob`` may be a ``Fraction`` (all downstream arithmetic is then exact)
    or a float (log-gamma evaluation).
    """

    n: int
    prob: Fraction | float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InvalidParamsError(f"n must be an integer >= 0, got {self.n}")
        if isinstance(self.prob, int) and not isinstance(self.prob, bool):
            object.__setattr__(self, "prob", Fraction(self.prob))
        if not isinstance(self.prob, (Fraction, float)):
            raise InvalidParamsError(f"prob must be Fraction or float, got {self.prob!r}")
        if not 0 <= self.prob <= 1:
            raise InvalidParamsError(f"prob must be in [0, 1], got {self.prob}")

    @property
    def exact(self) -> bool:
        return isinstance(self.prob, Fraction)


def _pmf_exact(n: int, q: Fraction, k: int) -> Fraction:
    return comb(n, k) * q**k * (1 - q) ** (n - k)


def _pmf_float(n: int, q: float, k: int) -> float:
    if q == 0.0:
        return 1.0 if k == 0 else 0.0
    if q == 1.0:
        return 1.0 if k == n else 0.0
    log_choose = lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)
    return exp(log_choose + k * log(q) + (n - k) * log(1.0 - q))


def binom_pmf(spec: BinomialSpec, k: int) -> Fraction | float:
    """P(B(n, prob) = k); exact when ``prob`` is a Fraction.

    Raises :class:`OutOfSupportError` unless 0 <= k <= n.
    """
    if not 0 <= k <= spec.n:
        raise OutOfSupportError(f"k={k} outside support [0, {spec.n}]")
    if spec.exact:
        return _pmf_exact(spec.n, spec.prob, k)
    return _pmf_float(spec.n, spec.prob, k)


def binom_tail_gt(spec: BinomialSpec, s: int) -> Fraction | float:
    """P(B(n, prob) > s); s may be any integer (s < 0 gives 1, s >= n gives 0)."""
    if s < 0:
        return Fraction(1) if spec.exact else 1.0
    if s >= spec.n:
        return Fraction(0) if spec.exact else 0.0
    return sum(binom_pmf(spec, k) for k in range(s + 1, spec.n + 1))


def conditional_mean_above(n: int, alpha: Fraction | float, s: int) -> Fraction | float:
    """E(B(n, alpha) | B(n, alpha) > s) via an exact closed identity.

    The identity
        E(B | B > s) = alpha*n + alpha*(1-alpha)*n * P(B(n-1)=s) / P(B(n)>s)
    holds for every integer s with P(B > s) > 0; it is cross-checked against
    direct summation in the tests.  All arithmetic is rational; the result is
    a Fraction when ``alpha`` is one, else a float.

    Raises :class:`EmptyConditioningEventError` when the event B > s has
    probability zero (in particular whenever s >= n).
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidParamsError(f"n must be an integer >= 1, got {n}")
    if s >= n:
        raise EmptyConditioningEventError(
            f"B({n}, alpha) > {s} has probability zero"
        )
    a = Fraction(alpha)
    if not 0 <= a <= 1:
        raise InvalidParamsError(f"alpha must be in [0, 1], got {alpha}")
    tail = binom_tail_gt(BinomialSpec(n, a), s)
    if tail == 0:
        raise EmptyConditioningEventError(
            f"B({n}, {alpha}) > {s} has probability zero"
        )
    if 0 <= s <= n - 1:
        bump = _pmf_exact(n - 1, a, s)
    else:
        bump = Fraction(0)
    result = a * n + a * (1 - a) * n * bump / tail
    return result if isinstance(alpha, Fraction) else float(result)


def expected_excess_exact(n: int, alpha_cut: Fraction | float, p: int) -> float:
    """E(max(B(n, 1/p) - alpha_cut*n, 0)), exact arithmetic, binary64 result.

    The sum runs over k > floor(alpha_cut*n) of (k - alpha_cut*n) * pmf(k),
    with the *exact* (unfloored) cut in the summand.
    """
    if not is_prime(p):
        raise NotPrimeError(f"p must be prime, got {p}")
    if not isinstance(n, int) or n < 0:
        raise InvalidParamsError(f"n must be an integer >= 0, got {n}")
    ac = Fraction(alpha_cut)
    q = Fraction(1, p)
    cut = math.floor(ac * n)
    total = Fraction(0)
    for k in range(max(cut + 1, 0), n + 1):
        total += (k - ac * n) * _pmf_exact(n, q, k)
    return float(total)


def expected_rank_asymptotic(n: int, alpha: Fraction | float, p: int) -> tuple[float, str]:
    """Leading term of the expected p-rank, with its regime label.

    Three regimes by exact comparison of alpha to 1/p:
      * "subcritical"  (alpha < 1/p): (1/p - alpha) * n
      * "supercritical" (alpha > 1/p): 0
      * "critical"     (alpha = 1/p): sqrt((1/p)(1-1/p) n / (2 pi))
    The O(1) corrections are deliberately not included.
    """
    if not is_prime(p):
        raise NotPrimeError(f"p must be prime, got {p}")
    a = Fraction(alpha)
    if not 0 < a <= 1:
        raise InvalidParamsError(f"alpha must be in (0, 1], got {alpha}")
    threshold = Fraction(1, p)
    if a < threshold:
        return float((threshold - a) * n), "subcritical"
    if a > threshold:
        return 0.0, "supercritical"
    variance = float(threshold * (1 - threshold))
    return sqrt(variance * n / (2 * pi)), "critical"


@dataclass(frozen=True)
class RankDistribution:
    """The predicted law max(B(n, 1/p) - offset, 0) as an explicit finite pmf.

    ``pmf`` maps each rank value to its probability; ``offset`` is the
    truncation point floor(alpha*n).
    """

    n: int
    alpha: float
    p: int
    offset: int
    pmf: dict[int, float]

    def __post_init__(self):
        if not self.pmf:
            raise InvalidParamsError("pmf must be nonempty")
        for k, prob in self.pmf.items():
            if not isinstance(k, int) or k < 0 or k > self.n:
                raise InvalidParamsError(f"support point {k} outside [0, {self.n}]")
            if prob < 0:
                raise InvalidParamsError(f"negative probability at {k}")
        total = sum(self.pmf.values())
        if abs(total - 1.0) > 1e-12:
            raise InvalidParamsError(f"pmf sums to {total}, not 1")

    def support(self) -> list[int]:
        return sorted(self.pmf)

    def mean(self) -> float:
        return sum(k * prob for k, prob in self.pmf.items())

    def variance(self) -> float:
        mu = self.mean()
        return sum((k - mu) ** 2 * prob for k, prob in self.pmf.items())

    def cdf_at(self, k: int) -> float:
        return sum(prob for j, prob in self.pmf.items() if j <= k)

    def quantile(self, u: float) -> int:
        """Smallest support point whose CDF reaches ``u`` (0 < u < 1)."""
        if not 0 < u < 1:
            raise InvalidParamsError(f"u must be in (0, 1), got {u}")
        acc = 0.0
        points = self.support()
        for k in points:
            acc += self.pmf[k]
            if acc >= u:
                return k
        return points[-1]

    def to_json(self) -> dict:
        return {
            "params": {"n": self.n, "alpha": self.alpha, "p": self.p, "offset": self.offset},
            "pmf": [[k, self.pmf[k]] for k in self.support()],
        }


def rank_pmf_theoretical(n: int, alpha: Fraction | float, p: int) -> RankDistribution:
    """Exact pmf of max(B(n, 1/p) - floor(alpha*n), 0).

    All mass of B at or below the cut collapses onto rank 0; above the cut,
    rank j carries P(B = cut + j).  Probabilities are computed exactly and
    rounded once.
    """
    if not is_prime(p):
        raise NotPrimeError(f"p must be prime, got {p}")
    a = Fraction(alpha)
    if not 0 < a <= 1:
        raise InvalidParamsError(f"alpha must be in (0, 1], got {alpha}")
    q = Fraction(1, p)
    offset = floor_ratio(alpha, n)
    at_zero = sum(
        (_pmf_exact(n, q, k) for k in range(0, min(offset, n) + 1)), Fraction(0)
    )
    pmf: dict[int, float] = {0: float(at_zero)}
    j = 1
    while offset + j <= n:
        pmf[j] = float(_pmf_exact(n, q, offset + j))
        j += 1
    return RankDistribution(n=n, alpha=float(alpha), p=p, offset=offset, pmf=pmf)


def dml_estimate(n: int, alpha: float, s: int) -> float:
    """De Moivre-Laplace local estimate of P(B(n, alpha) = s).

    Valid only in the window |alpha*n - s| < sqrt(n); outside it the estimate
    raises :class:`OutOfRangeError` rather than return a number the
    approximation does not cover.  Relative error against the exact pmf decays
    like 1/sqrt(n).
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidParamsError(f"n must be an integer >= 1, got {n}")
    a = float(alpha)
    if not 0 < a < 1:
        raise InvalidParamsError(f"alpha must be in (0, 1), got {alpha}")
    gap = a * n - s
    if abs(gap) >= sqrt(n):
        raise OutOfRangeError(
            f"|alpha*n - s| = {abs(gap):.3f} >= sqrt(n) = {sqrt(n):.3f}"
        )
    var = a * (1.0 - a) * n
    return exp(-(gap * gap) / (2.0 * var)) / sqrt(2.0 * pi * var)


def hoeffding_bound(n: int, q: float, eps: float) -> float:
    """The explicit Hoeffding tail bound 2*exp(-2*eps^2*n).

    Upper bound on P(|B(n, q) - q*n| > eps*n); independent of q.  The value
    may exceed 1 for tiny n (vacuous but valid); callers clamp for display.
    """
    if eps <= 0:
        raise InvalidParamsError(f"eps must be > 0, got {eps}")
    if not isinstance(n, int) or n < 0:
        raise InvalidParamsError(f"n must be an integer >= 0, got {n}")
    return 2.0 * exp(-2.0 * eps * eps * n)


def min_entropy_rank_bound(n: int, m: int, beta: float) -> float:
    """Lower bound on P(an n x m random matrix has full rank n).

    Applies to entry distributions with min-entropy at least beta (no entry
    can be forced into a single value with probability above 1 - beta, under
    any conditioning on other designated entries).  The bound is
    1 - (1-beta)^(m+1-n) / beta^2, clamped at 0 where vacuous.

    Raises :class:`InvalidShapeError` when m < n (a wide matrix is required).
    """
    if m < n:
        raise InvalidShapeError(f"need m >= n, got n={n}, m={m}")
    if not 0 < beta < 1:
        raise InvalidParamsError(f"beta must be in (0, 1), got {beta}")
    return max(0.0, 1.0 - (1.0 - beta) ** (m + 1 - n) / (beta * beta))
