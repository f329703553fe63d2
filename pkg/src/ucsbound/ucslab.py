"""Desk-scale laboratory for union-closed families on tiny ground sets.

A set over the ground elements {0, ..., n-1} is encoded as an integer
bitmask in [0, 2^n); taking unions is then bitwise OR.  A *family* of
such sets is in turn encoded as a bitmask over the 2^n possible
members, so exhaustive enumeration for n <= 4 is a loop over at most
2^16 - 1 family masks.

Besides enumeration and frequency bookkeeping, the module maximises the
entropy of Z = X OR Y over symmetric couplings of two uniform copies of
a family, by conditional-gradient ascent over the scaled Birkhoff
polytope.  The identity coupling already achieves entropy log2 |A|, so
the maximiser doubles as a numerical check that the ascent machinery
and the entropy ceiling agree.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionTooLarge, NotClosed
from .scalars import entropy_bits

__all__ = [
    "MAX_ENUM_N",
    "FamilySet",
    "CouplingMatrix",
    "EntropyCheckReport",
    "is_or_closed",
    "or_closure",
    "element_frequencies",
    "peak_frequency",
    "enumerate_or_closed",
    "min_peak_frequency",
    "sample_or_closed",
    "max_symmetric_coupling_entropy",
    "coupling_entropies",
    "check_entropy_inequality",
    "worker_count",
]

# Exhaustive enumeration walks 2^(2^n) - 1 family masks; n = 4 is the
# last size where that is a desk-scale number.
MAX_ENUM_N = 4

_LOG2_FLOOR = 1e-300  # replaces exact zeros before taking logs


@dataclass(frozen=True)
class FamilySet:
    """A nonempty family of subsets of {0, ..., n-1}, as a member bitmask.

    Bit k of ``mask`` is set iff the subset with element-bitmask k
    belongs to the family.  Note the empty *set* (k = 0) is an ordinary
    member; only the empty *family* is forbidden.
    """

    n: int
    mask: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= 5:
            raise ValueError(f"ground-set size must be in 1..5, got {self.n!r}")
        if not 1 <= self.mask < (1 << (1 << self.n)):
            raise ValueError(
                f"family mask must be in [1, 2^(2^{self.n})), got {self.mask!r}"
            )

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "FamilySet":
        mask = 0
        for m in members:
            if not 0 <= m < (1 << n):
                raise ValueError(f"member {m!r} outside [0, 2^{n})")
            mask |= 1 << m
        return cls(n, mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(k for k in range(1 << self.n) if (self.mask >> k) & 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def hex_mask(self) -> str:
        return f"0x{self.mask:x}"


def is_or_closed(family: FamilySet) -> bool:
    """True iff the union of every member pair is again a member."""
    members = family.members
    mask = family.mask
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if not (mask >> (a | b)) & 1:
                return False
    return True


def or_closure(n: int, generators: Iterable[int]) -> FamilySet:
    """Smallest OR-closed family containing the given member sets."""
    seed = FamilySet.from_members(n, generators)
    mask = seed.mask
    while True:
        members = [k for k in range(1 << n) if (mask >> k) & 1]
        grown = mask
        for i, a in enumerate(members):
            for b in members[i:]:
                grown |= 1 << (a | b)
        if grown == mask:
            return FamilySet(n, mask)
        mask = grown


def element_frequencies(family: FamilySet) -> np.ndarray:
    """Fraction of members containing each ground element, shape (n,)."""
    members = family.members
    freq = np.zeros(family.n)
    for m in members:
        for e in range(family.n):
            if (m >> e) & 1:
                freq[e] += 1.0
    return freq / len(members)


def peak_frequency(family: FamilySet) -> float:
    """Largest element frequency of the family.

    For the family whose only member is the empty set this is 0; every
    other family contains a nonempty member, so some element appears.
    """
    return float(element_frequencies(family).max())


def enumerate_or_closed(n: int) -> Iterator[FamilySet]:
    """All OR-closed families on n elements, in increasing mask order.

    Raises :class:`DimensionTooLarge` for n > 4: the search space is
    2^(2^n) - 1 family masks and stops being desk-scale at n = 5.  Use
    :func:`sample_or_closed` there instead.
    """
    if n > MAX_ENUM_N:
        raise DimensionTooLarge(
            f"exhaustive enumeration supports n <= {MAX_ENUM_N}, got {n}; "
            "use sampling for larger ground sets"
        )
    if n < 1:
        raise ValueError(f"ground-set size must be >= 1, got {n!r}")
    size = 1 << n
    for mask in range(1, 1 << size):
        members = [k for k in range(size) if (mask >> k) & 1]
        closed = True
        for i, a in enumerate(members):
            if not closed:
                break
            for b in members[i + 1 :]:
                if not (mask >> (a | b)) & 1:
                    closed = False
                    break
        if closed:
            yield FamilySet(n, mask)


def min_peak_frequency(n: int) -> tuple[float, FamilySet]:
    """Minimum peak frequency over OR-closed families, with a witness.

    The family {empty set} is excluded: it has no elements at all and
    its peak frequency of 0 says nothing about the frequency question
    being probed.  Ties go to the smallest family mask, so the witness
    is deterministic.
    """
    best: float | None = None
    witness: FamilySet | None = None
    for fam in enumerate_or_closed(n):
        if fam.mask == 1:  # the {empty set} family
            continue
        value = peak_frequency(fam)
        if best is None or value < best - 1e-15:
            best = value
            witness = fam
    assert best is not None and witness is not None
    return best, witness


def sample_or_closed(
    n: int, count: int, seed: int, max_generators: int = 4
) -> list[FamilySet]:
    """Distinct OR-closed families grown from random generator sets.

    Each draw picks 1..max_generators member sets uniformly at random
    and closes them under OR; duplicates (by mask) are dropped, so the
    result may be shorter than ``count`` draws.  Deterministic in
    ``seed``.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")
    rng = np.random.default_rng(seed)
    seen: set[int] = set()
    out: list[FamilySet] = []
    for _ in range(count):
        k = int(rng.integers(1, max_generators + 1))
        gens = rng.integers(0, 1 << n, size=k)
        fam = or_closure(n, (int(g) for g in gens))
        if fam.mask not in seen:
            seen.add(fam.mask)
            out.append(fam)
    return out


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Symmetric coupling of two uniform copies of a family.

    ``matrix[i, j]`` couples members[i] with members[j]; rows and
    columns each sum to 1/|A| (uniform marginals) and the matrix is
    symmetric.  :meth:`validate` checks those invariants explicitly;
    construction runs it once.
    """

    family: FamilySet
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=float))
        self.validate()

    def validate(self, tol: float = 1e-9) -> None:
        k = self.family.size
        m = self.matrix
        if m.shape != (k, k):
            raise ValueError(f"coupling shape {m.shape} does not match |A| = {k}")
        if m.min() < -1e-12:
            raise ValueError(f"coupling has negative mass {m.min()!r}")
        if abs(float(m.sum()) - 1.0) > tol:
            raise ValueError(f"coupling mass {float(m.sum())!r} is not 1")
        if np.abs(m - m.T).max() > tol:
            raise ValueError("coupling is not symmetric")
        if np.abs(m.sum(axis=1) - 1.0 / k).max() > tol:
            raise ValueError("coupling marginals are not uniform")

    def or_output_dist(self) -> np.ndarray:
        """Distribution of OR(X, Y) over the family members."""
        members = np.array(self.family.members)
        zi = np.searchsorted(members, np.bitwise_or.outer(members, members))
        return np.bincount(zi.ravel(), weights=self.matrix.ravel(), minlength=len(members))

    def or_entropy(self) -> float:
        return entropy_bits(self.or_output_dist())


def max_symmetric_coupling_entropy(
    family: FamilySet,
    iterations: int = 200,
    gap_tol: float = 1e-10,
) -> tuple[float, CouplingMatrix]:
    """Maximise H(OR(X, Y)) over symmetric uniform-marginal couplings.

    Conditional-gradient ascent on the concave objective D -> H(Z),
    Z = OR(X, Y) with (X, Y) ~ D, over couplings with two uniform
    marginals.  Each step solves the linearised problem with an
    assignment solver (the vertices of the feasible set are permutation
    matrices scaled by 1/|A|), symmetrises the chosen vertex (the
    gradient is symmetric, so this loses nothing), and takes the
    classic 2/(k+2) step.  Fixed steps are not monotone, so the best
    iterate seen is tracked and returned.

    Stops early once the duality gap of the linearised problem drops
    below ``gap_tol``; the gap at the returned point bounds its
    suboptimality.  Raises :class:`NotClosed` if some pairwise OR
    escapes the family, and rejects |A| > 64 (the dense K^2 iteration
    stops being appropriate there).
    """
    members = np.array(family.members)
    k = len(members)
    if k > 64:
        raise ValueError(f"coupling search supports |A| <= 64, got {k}")
    ors = np.bitwise_or.outer(members, members)
    zi = np.searchsorted(members, ors)
    zi[zi >= k] = k - 1  # keep indices legal before the membership check
    if not np.array_equal(members[zi], ors):
        raise NotClosed(f"family {family.hex_mask} is not closed under OR")

    flat_zi = zi.ravel()
    inv_ln2 = 1.0 / math.log(2.0)

    def or_dist(d: np.ndarray) -> np.ndarray:
        return np.bincount(flat_zi, weights=d.ravel(), minlength=k)

    current = np.full((k, k), 1.0 / (k * k))
    best_entropy = -1.0
    best_matrix = current
    for step_index in range(iterations):
        q = or_dist(current)
        h = entropy_bits(q)
        if h > best_entropy:
            best_entropy = h
            best_matrix = current.copy()
        # Gradient of H wrt the coupling cells, in bits.
        grad = -(np.log2(np.maximum(q, _LOG2_FLOOR))[zi] + inv_ln2)
        rows, cols = linear_sum_assignment(-grad)
        vertex = np.zeros_like(current)
        vertex[rows, cols] = 1.0 / k
        gap = float((grad * (vertex - current)).sum())
        if gap < gap_tol:
            break
        vertex = 0.5 * (vertex + vertex.T)
        current = current + (2.0 / (step_index + 2.0)) * (vertex - current)
    else:
        # Ran out of iterations; score the last iterate too.
        h = entropy_bits(or_dist(current))
        if h > best_entropy:
            best_entropy = h
            best_matrix = current.copy()

    return best_entropy, CouplingMatrix(family, best_matrix)


@dataclass(frozen=True)
class EntropyCheckReport:
    """Outcome of sweeping the coupling-entropy ceiling over all families."""

    n: int
    tol: float
    size_cap: int
    checked: int
    skipped: int
    violations: tuple[str, ...]
    ratio_min: float
    ratio_mean: float
    ratio_max: float
    worst_family: str

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "tol": self.tol,
            "size_cap": self.size_cap,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": list(self.violations),
            "ratio_min": self.ratio_min,
            "ratio_mean": self.ratio_mean,
            "ratio_max": self.ratio_max,
            "worst_family": self.worst_family,
        }


def worker_count() -> int:
    """Thread count for family sweeps, from UCSB_THREADS (default 1)."""
    raw = os.environ.get("UCSB_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"UCSB_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)


def coupling_entropies(
    families: Sequence[FamilySet], iterations: int = 200
) -> list[float]:
    """H_star of each family, on ``worker_count()`` threads.

    Results come back in input order regardless of thread count, so
    reports built on top are deterministic.
    """

    def score(fam: FamilySet) -> float:
        h_star, _ = max_symmetric_coupling_entropy(fam, iterations=iterations)
        return h_star

    workers = worker_count()
    if workers > 1 and len(families) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(score, families))
    return [score(f) for f in families]


def check_entropy_inequality(
    n: int,
    tol: float = 1e-6,
    size_cap: int = 16,
    iterations: int = 200,
) -> EntropyCheckReport:
    """Check H_star <= log2 |A| + tol over every enumerated family.

    H_star is the maximal symmetric-coupling OR entropy from
    :func:`max_symmetric_coupling_entropy`; log2 |A| is its information
    ceiling, attained by the identity coupling.  Families with fewer
    than two members or more than ``size_cap`` are skipped.  The
    reported ratios are H_star / log2 |A|, so values persistently below
    1 would mean the ascent is not reaching the ceiling.

    Sweeps run on ``worker_count()`` threads; results are reduced in
    enumeration order either way, so the report is deterministic.
    """
    families: list[FamilySet] = []
    skipped = 0
    for f in enumerate_or_closed(n):
        if 2 <= f.size <= size_cap:
            families.append(f)
        else:
            skipped += 1
    stars = coupling_entropies(families, iterations=iterations)

    violations: list[str] = []
    ratios: list[float] = []
    worst = (math.inf, "")
    for fam, h_star in zip(families, stars):
        ceiling = math.log2(fam.size)
        if h_star > ceiling + tol:
            violations.append(
                f"{fam.hex_mask}: H_star={h_star!r} exceeds log2|A|={ceiling!r}"
            )
        ratio = h_star / ceiling
        ratios.append(ratio)
        if ratio < worst[0]:
            worst = (ratio, fam.hex_mask)
    return EntropyCheckReport(
        n=n,
        tol=tol,
        size_cap=size_cap,
        checked=len(families),
        skipped=skipped,
        violations=tuple(violations),
        ratio_min=min(ratios),
        ratio_mean=sum(ratios) / len(ratios),
        ratio_max=max(ratios),
        worst_family=worst[1],
    )
