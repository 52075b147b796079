"""Loss probabilities and sizing solvers for replicated and erasure coded storage.

All functions here are pure and operate on plain floats/ints; the scheme
dataclasses describe redundancy layouts and are shared with the placement,
simulation, and CLI layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SolverBoundError

#: Largest parity count the sizing solver will consider before giving up.
DEFAULT_PARITY_CAP = 64

# Below this per-disk probability the tail terms are evaluated in log space
# to avoid underflow in the p**i factors.
_LOG_TERM_THRESHOLD = 1e-4

# Log-ratio solutions closer than this to an integer are re-checked by
# direct powering instead of trusting the floating-point ceiling.
_INTEGER_GUARD = 1e-9


def _check_prob(name: str, value: float, *, exclusive: bool = False) -> None:
    if exclusive:
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must be strictly between 0 and 1, got {value!r}")
    elif not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be within [0, 1], got {value!r}")


@dataclass(frozen=True)
class DiskFailureModel:
    """Steady-state per-disk probabilities.

    ``p_dead`` is the chance a disk is permanently unreadable at any moment
    (mean life and replacement time folded into one number).  ``p_unavail``
    is the chance it cannot be reached at all, dead or not, so it can never
    be smaller than ``p_dead``.  Omitting ``p_unavail`` pins it to ``p_dead``.
    """

    p_dead: float
    p_unavail: float | None = None

    def __post_init__(self):
        if self.p_unavail is None:
            object.__setattr__(self, "p_unavail", self.p_dead)
        _check_prob("p_dead", self.p_dead)
        _check_prob("p_unavail", self.p_unavail)
        if self.p_dead > self.p_unavail:
            raise ValueError(
                f"p_dead ({self.p_dead!r}) cannot exceed p_unavail ({self.p_unavail!r})"
            )


@dataclass(frozen=True)
class ReplicationScheme:
    """Whole-object copies, one per disk."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"replica count must be >= 1, got {self.k}")

    @property
    def fragment_count(self) -> int:
        return self.k

    @property
    def label(self) -> str:
        return f"rep:{self.k}"


@dataclass(frozen=True)
class ErasureScheme:
    """m data fragments plus n parity fragments; any m of them reconstruct."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"data fragment count must be >= 1, got {self.m}")
        if self.n < 0:
            raise ValueError(f"parity fragment count must be >= 0, got {self.n}")

    @property
    def fragment_count(self) -> int:
        return self.m + self.n

    @property
    def label(self) -> str:
        return f"ec:{self.m}+{self.n}"


@dataclass(frozen=True)
class HybridScheme:
    """k full replicas of an erasure coded fragment set."""

    k: int
    inner: ErasureScheme

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"replica count must be >= 1, got {self.k}")

    @property
    def fragment_count(self) -> int:
        return self.k * self.inner.fragment_count

    @property
    def label(self) -> str:
        return f"hybrid:{self.k}x{self.inner.m}+{self.inner.n}"


Scheme = ReplicationScheme | ErasureScheme | HybridScheme


def binomial_tail(p: float, total: int, threshold: int) -> float:
    """P[X > threshold] for X ~ Binomial(total, p).

    Terms are accumulated from the largest index downward with exact
    summation; for very small p each term is formed in log space so the
    result stays accurate down to p = 1e-6 and total = 64.
    """
    _check_prob("p", p)
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    if threshold >= total:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    if threshold == total - 1:
        # single-term tail; also keeps the replication special case m=1,
        # n=k-1 bit-identical to p**k
        return p**total

    if p < _LOG_TERM_THRESHOLD:
        log_p = math.log(p)
        log_q = math.log1p(-p)
        terms = [
            math.exp(math.log(math.comb(total, i)) + i * log_p + (total - i) * log_q)
            for i in range(total, threshold, -1)
        ]
    else:
        q = 1.0 - p
        terms = [
            math.comb(total, i) * p**i * q ** (total - i)
            for i in range(total, threshold, -1)
        ]
    return min(1.0, math.fsum(terms))


def prob_loss_replication(p_dead: float, copies: int) -> float:
    """Probability that all ``copies`` replicas are dead at once: p_dead**copies."""
    _check_prob("p_dead", p_dead)
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    return p_dead**copies


def prob_loss_ec(p: float, m: int, n: int) -> float:
    """Probability of data loss for an m+n code: more than n of m+n disks dead."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return binomial_tail(p, m + n, n)


def replicas_needed(epsilon: float, p: float) -> int:
    """Smallest replica count k with p**k <= epsilon.

    Equals the ceiling of log(epsilon)/log(p).  When the log ratio lands
    within 1e-9 of an integer the answer is settled by direct powering so a
    misrounded ceiling cannot shift the result.
    """
    _check_prob("epsilon", epsilon, exclusive=True)
    _check_prob("p", p, exclusive=True)
    ratio = math.log(epsilon) / math.log(p)
    k = max(1, math.ceil(ratio))
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) < _INTEGER_GUARD:
        k = nearest
    while p**k > epsilon:
        k += 1
    while k > 1 and p ** (k - 1) <= epsilon:
        k -= 1
    return k


def parity_needed(
    epsilon: float, p: float, m: int, cap: int = DEFAULT_PARITY_CAP
) -> int:
    """Smallest parity count n >= 1 with prob_loss_ec(p, m, n) < epsilon.

    The search starts at n=1; n=0 is expressible in prob_loss_ec but never
    returned here.  Raises SolverBoundError once n exceeds ``cap``.
    """
    _check_prob("epsilon", epsilon, exclusive=True)
    _check_prob("p", p, exclusive=True)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    for n in range(1, cap + 1):
        if prob_loss_ec(p, m, n) < epsilon:
            return n
    raise SolverBoundError(
        f"no parity count n <= {cap} achieves loss probability below "
        f"{epsilon!r} for m={m}, p={p!r}"
    )


def redundancy_factor(scheme: Scheme) -> float:
    """Storage multiplier of a scheme: k, (m+n)/m, or k*(m+n)/m."""
    if isinstance(scheme, ReplicationScheme):
        return float(scheme.k)
    if isinstance(scheme, ErasureScheme):
        return (scheme.m + scheme.n) / scheme.m
    if isinstance(scheme, HybridScheme):
        return scheme.k * (scheme.inner.m + scheme.inner.n) / scheme.inner.m
    raise TypeError(f"unsupported scheme type: {type(scheme).__name__}")


def prob_any_failure(p: float, disks: int) -> float:
    """Exact probability that at least one of ``disks`` disks has failed."""
    _check_prob("p", p)
    if disks < 1:
        raise ValueError(f"disks must be >= 1, got {disks}")
    if disks == 1:
        return p
    if p == 1.0:
        return 1.0
    return -math.expm1(disks * math.log1p(-p))


def prob_any_failure_approx(p: float, disks: int) -> float:
    """First-order approximation disks*p of prob_any_failure, valid for small p."""
    _check_prob("p", p)
    if disks < 1:
        raise ValueError(f"disks must be >= 1, got {disks}")
    return disks * p


def gaussian_tail_loss(p: float, m: int, n: int, scale: int = 1) -> float:
    """Normal-approximation stand-in for the exact m+n loss tail.

    Approximates P[X > scale*n] for X ~ Binomial(scale*(m+n), p) by the
    upper tail of a normal with matching mean and variance.  Useful for
    convergence arguments at large scale, and for demonstrating how badly
    the approximation can miss at small m+n.  Requires p <= n/(m+n); the
    convergence-to-zero guarantee additionally needs strict inequality.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    _check_prob("p", p)
    bound = n / (m + n)
    if p > bound:
        raise ValueError(
            f"normal approximation requires p <= n/(m+n) = {bound!r}, got p={p!r}"
        )
    if p == 0.0:
        return 0.0
    total = scale * (m + n)
    mean = total * p
    std = math.sqrt(total * p * (1.0 - p))
    z = (scale * n - mean) / std
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def gaussian_parity_estimate(
    epsilon: float, p: float, m: int, cap: int = DEFAULT_PARITY_CAP
) -> int:
    """Parity count the normal approximation claims is sufficient.

    Runs the same search as parity_needed but against gaussian_tail_loss.
    At the small fragment counts real systems use, this under-estimates the
    parity requirement of the exact solver.
    """
    _check_prob("epsilon", epsilon, exclusive=True)
    _check_prob("p", p, exclusive=True)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    for n in range(1, cap + 1):
        if p > n / (m + n):
            continue  # approximation not defined; tail would not be below 0.5 anyway
        if gaussian_tail_loss(p, m, n) < epsilon:
            return n
    raise SolverBoundError(
        f"no parity count n <= {cap} satisfies the normal-approximation "
        f"target {epsilon!r} for m={m}, p={p!r}"
    )
