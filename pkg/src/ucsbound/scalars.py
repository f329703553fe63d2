"""Scalar kernels: binary entropy and the OR-output probability of two bits.

Everything here works on plain floats and is deliberately allocation-free;
the grid search in :mod:`ucsbound.optimizer` calls these functions millions
of times.  All entropies are in bits.
"""

from __future__ import annotations

import math
from typing import Sequence

__all__ = [
    "require_prob",
    "binary_entropy",
    "entropy_bits",
    "or_prob",
    "joint_mass_window",
    "median3",
    "max_entropy_or_prob",
    "max_entropy_or_prob_fullcorr",
]


def require_prob(x: float, name: str = "value") -> float:
    """Validate that ``x`` is a probability and return it as a float.

    Rejects NaN and anything outside [0, 1].
    """
    x = float(x)
    if math.isnan(x) or x < 0.0 or x > 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def binary_entropy(a: float) -> float:
    """Entropy in bits of a Bernoulli(a) variable, with 0*log(0) = 0.

    The endpoint convention is handled by branching rather than by
    adding a fudge term, so ``binary_entropy(0.0) == 0.0`` exactly.
    """
    if a <= 0.0 or a >= 1.0:
        return 0.0
    return -(a * math.log2(a) + (1.0 - a) * math.log2(1.0 - a))


def entropy_bits(masses: Sequence[float]) -> float:
    """Shannon entropy in bits of a finite mass vector.

    Zero masses contribute nothing.  Tiny negative entries (roundoff
    from upstream linear algebra) are treated as zero rather than fed
    to the logarithm.
    """
    total = 0.0
    for m in masses:
        if m > 0.0:
            total -= m * math.log2(m)
    return total


def or_prob(p: float, q: float) -> float:
    """P(X or Y = 1) for independent bits with marginals p and q."""
    return p + q - p * q


def joint_mass_window(rho: float, p: float, q: float) -> tuple[float, float]:
    """Window of joint on-masses P(X=1, Y=1) with correlation at most rho.

    For a coupling of Bernoulli(p) and Bernoulli(q) whose Pearson
    correlation has magnitude <= rho, the joint on-mass z = P(X=1, Y=1)
    satisfies

        p*q - rho*s  <=  z  <=  p*q + rho*s,   s = sqrt(p(1-p)q(1-q)).

    Returns the pair (low, high).  The window is not intersected with
    the Frechet bounds; callers that need a realisable z clamp it
    themselves (see :func:`max_entropy_or_prob`, where the median does
    the clamping implicitly).
    """
    if math.isnan(rho) or rho < 0.0 or rho > 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho!r}")
    require_prob(p, "p")
    require_prob(q, "q")
    spread = rho * math.sqrt(p * (1.0 - p) * q * (1.0 - q))
    return p * q - spread, p * q + spread


def median3(x: float, y: float, z: float) -> float:
    """Middle value of three reals."""
    return sorted((x, y, z))[1]


def max_entropy_or_prob(rho: float, p: float, q: float) -> float:
    """OR-output probability with maximal entropy under a correlation cap.

    Over couplings of Bernoulli(p) and Bernoulli(q) with |correlation|
    <= rho, the OR of the two bits has on-probability p + q - z with z
    in the window from :func:`joint_mass_window`.  Binary entropy is
    maximised by the feasible on-probability closest to 1/2:

        median{ max(p, q, p+q-z_high), 1/2, min(p+q, p+q-z_low) }.

    The outer max/min fold in the constraints z >= p+q-1 and z >= 0, so
    the result is always a probability even though the raw window may
    poke outside [0, 1].
    """
    z_low, z_high = joint_mass_window(rho, p, q)
    lo = max(p, q, p + q - z_high)
    hi = min(p + q, p + q - z_low)
    return median3(lo, 0.5, hi)


def max_entropy_or_prob_fullcorr(p: float, q: float) -> float:
    """Specialisation of :func:`max_entropy_or_prob` to rho = 1.

    At full correlation the window formula collapses to

        median{ max(p, q), 1/2, min(p+q, 1) }

    which is cheaper than the general route and is used in the inner
    loop of the certificate search.  The test-suite checks agreement
    with the general function on a dense grid.
    """
    lo = p if p >= q else q
    s = p + q
    hi = s if s < 1.0 else 1.0
    if lo >= 0.5:
        return lo
    if hi <= 0.5:
        return hi
    return 0.5
