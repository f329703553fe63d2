"""Certificate search: the worst-case entropy ratio over candidate families.

The quantity of interest, for a mean target t in (0, 1/2) and a blend
weight alpha, is the infimum of :func:`ucsbound.distributions.entropy_ratio`
over all :class:`~ucsbound.distributions.ExtremeFamily` candidates.  A
value above 1 certifies t as a valid frequency lower bound; the best
such certificate over alpha is what :func:`gamma_hat` reports, and
:func:`find_tmax` bisects for the largest certifiable t.

Search scheme
-------------
The candidate space is four numbers (a1, a2, b1, b2), so the search is
deliberately elementary and fully deterministic:

1. a uniform grid per axis, evaluated vectorised with the symmetry
   a1 <= a2, b1 <= b2 folded out.  The expensive per-pair and
   cross-block entropy sums do not depend on alpha, so the workspace
   caches them and re-scans for a new alpha at the cost of one saxpy;
2. the best ``multistart_count`` grid points are each polished by
   cyclic per-coordinate golden-section refinement with a shrinking
   trust window, clipped to the feasible box at every step;
3. the reported minimum is re-evaluated through the reference
   implementation in :mod:`ucsbound.distributions`, so the fast path
   cannot silently drift from the definition it is searching over.

Everything downstream (the alpha sweep, the bisection over t) reuses
this one inner search.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .distributions import ExtremeFamily, entropy_ratio
from .errors import BracketFailure, EmptyFeasible, VerificationFailed
from .scalars import binary_entropy, max_entropy_or_prob_fullcorr, require_prob

__all__ = [
    "SearchConfig",
    "InnerSearchReport",
    "BoundCertificate",
    "ThresholdCertificate",
    "inner_inf",
    "gamma_hat",
    "find_tmax",
    "verify_reference_point",
    "default_alpha_grid",
    "REFERENCE_T",
    "REFERENCE_ALPHA",
    "REFERENCE_RATIO",
    "REFERENCE_LOW_VALUE",
    "REFERENCE_BETA",
    "BASELINE_THRESHOLD",
]

# Published reference evaluation this package is expected to reproduce:
# at t = 0.38234 and blend weight alpha = 0.035 the worst-case ratio is
# 1.00000889, attained at a1 = a2 = b1 ~ 0.3300622, b2 = 1 with high-block
# weight beta ~ 0.1560676.
REFERENCE_T = 0.38234
REFERENCE_ALPHA = 0.035
REFERENCE_RATIO = 1.00000889
REFERENCE_LOW_VALUE = 0.3300622
REFERENCE_BETA = 0.1560676

# Threshold certified without the blended objective (alpha = 0), i.e. by
# the independent-coupling argument alone: (3 - sqrt 5) / 2.
BASELINE_THRESHOLD = (3.0 - math.sqrt(5.0)) / 2.0

_INF = math.inf
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_DENOM_FLOOR = 1e-14
_ALPHA_REFINE_TOL = 1e-4
_BRANCH_ZERO = "beta_zero"
_BRANCH_POSITIVE = "beta_positive"


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the grid-plus-refinement search.

    The defaults reproduce the reference evaluation to ~1e-9 in a few
    hundred milliseconds; they are not tuned per call site.
    """

    grid_points_per_axis: int = 64
    refine_rounds: int = 6
    multistart_count: int = 16
    param_tol: float = 1e-10
    objective_tol: float = 1e-12
    epsilon_boundary: float = 1e-9
    b2_pinned_to_one: bool = False

    def __post_init__(self) -> None:
        if self.grid_points_per_axis < 2:
            raise ValueError("grid_points_per_axis must be >= 2")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")
        for name in ("param_tol", "objective_tol", "epsilon_boundary"):
            if not 0.0 < getattr(self, name) < 0.1:
                raise ValueError(f"{name} must lie in (0, 0.1)")

    def to_json_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class InnerSearchReport:
    """Result of one worst-case-ratio search at fixed (alpha, t)."""

    alpha: float
    t: float
    min_ratio: float
    argmin: ExtremeFamily
    branch: str
    evaluations: int
    refined: bool

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "t": self.t,
            "min_ratio": self.min_ratio,
            "argmin": self.argmin.argmin_dict(),
            "branch": self.branch,
            "evaluations": self.evaluations,
            "refined": self.refined,
        }


@dataclass(frozen=True)
class BoundCertificate:
    """Best certificate over the alpha sweep at one mean target t."""

    t: float
    alpha_star: float
    gamma_hat_lower: float
    argmin: ExtremeFamily
    branch: str
    evaluations: int
    config: SearchConfig
    wall_time_ms: float | None = None

    @property
    def certifies(self) -> bool:
        """Whether the worst-case ratio clears 1."""
        return self.gamma_hat_lower > 1.0

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "alpha_star": self.alpha_star,
            "gamma_hat_lower": self.gamma_hat_lower,
            "argmin": self.argmin.argmin_dict(),
            "branch": self.branch,
            "evaluations": self.evaluations,
            "config": self.config.to_json_dict(),
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass(frozen=True)
class ThresholdCertificate:
    """Outcome of bisecting for the largest certifiable mean target."""

    t_certified: float
    t_ceiling: float
    margin: float
    bracket: tuple[float, float]
    endpoint_bounds: tuple[float, float]
    steps: int
    certificate: BoundCertificate
    wall_time_ms: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "t_certified": self.t_certified,
            "t_ceiling": self.t_ceiling,
            "margin": self.margin,
            "bracket": list(self.bracket),
            "endpoint_bounds": list(self.endpoint_bounds),
            "steps": self.steps,
            "certificate": self.certificate.to_json_dict(),
            "wall_time_ms": self.wall_time_ms,
        }


def _entropy_arr(x: np.ndarray) -> np.ndarray:
    """Vectorised binary entropy with the 0 log 0 = 0 convention."""
    out = np.zeros(x.shape)
    m = (x > 0.0) & (x < 1.0)
    xm = x[m]
    out[m] = -(xm * np.log2(xm) + (1.0 - xm) * np.log2(1.0 - xm))
    return out


def _fullcorr_arr(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised max_entropy_or_prob_fullcorr."""
    return np.minimum(np.maximum(0.5, np.maximum(x, y)), np.minimum(x + y, 1.0))


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [lo, hi] to bracket width tol."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _ratio_fast(
    a1: float,
    a2: float,
    b1: float | None,
    b2: float | None,
    t: float,
    alpha: float,
    eps: float,
) -> float:
    """Scalar search objective; +inf outside the feasible box.

    Mirrors :func:`ucsbound.distributions.entropy_ratio` on plain floats
    with no allocation, since this runs inside golden-section loops.
    The final reported minimum always goes back through the reference
    implementation, so any drift between the two would be caught there.
    """
    if a1 < 0.0 or a1 > 1.0 or a2 < 0.0 or a2 > 1.0:
        return _INF
    amean = 0.5 * (a1 + a2)
    if amean > t + 1e-15:
        return _INF
    h = binary_entropy
    if b1 is None:
        denom = 0.5 * (h(a1) + h(a2))
        if denom <= _DENOM_FLOOR:
            return _INF
        ind = 0.25 * (
            h(a1 + a1 - a1 * a1)
            + 2.0 * h(a1 + a2 - a1 * a2)
            + h(a2 + a2 - a2 * a2)
        )
        cor = h(max_entropy_or_prob_fullcorr(a1, a2))
        return ((1.0 - alpha) * ind + alpha * cor) / denom
    if b1 < 0.0 or b1 > 1.0 or b2 < 0.0 or b2 > 1.0:
        return _INF
    bmean = 0.5 * (b1 + b2)
    if bmean < t + 0.5 * eps:
        return _INF
    beta = (t - amean) / (bmean - amean)
    if beta < 0.0:
        beta = 0.0
    elif beta > 1.0:
        beta = 1.0
    wa = 0.5 * (1.0 - beta)
    wb = 0.5 * beta
    denom = wa * (h(a1) + h(a2)) + wb * (h(b1) + h(b2))
    if denom <= _DENOM_FLOOR:
        return _INF
    ind = (
        wa * wa * (h(a1 + a1 - a1 * a1) + 2.0 * h(a1 + a2 - a1 * a2) + h(a2 + a2 - a2 * a2))
        + wb * wb * (h(b1 + b1 - b1 * b1) + 2.0 * h(b1 + b2 - b1 * b2) + h(b2 + b2 - b2 * b2))
        + 2.0
        * wa
        * wb
        * (
            h(a1 + b1 - a1 * b1)
            + h(a1 + b2 - a1 * b2)
            + h(a2 + b1 - a2 * b1)
            + h(a2 + b2 - a2 * b2)
        )
    )
    cor = (1.0 - beta) * h(max_entropy_or_prob_fullcorr(a1, a2)) + beta * h(
        max_entropy_or_prob_fullcorr(b1, b2)
    )
    return ((1.0 - alpha) * ind + alpha * cor) / denom


class _PairGrid:
    """Grid workspace bound to one (t, config); reusable across alpha.

    Precomputes every alpha-independent quantity, in particular the
    cross-block entropy sums that dominate the cost, so re-scanning at a
    new alpha is a single linear blend of two cached matrices.
    """

    def __init__(self, t: float, config: SearchConfig):
        t = float(t)
        if math.isnan(t) or not 0.0 < t < 0.5:
            raise EmptyFeasible(f"t must lie in (0, 1/2), got {t!r}")
        self.t = t
        self.config = config
        self.evaluations = 0
        eps = config.epsilon_boundary

        g = config.grid_points_per_axis
        axis = np.linspace(0.0, 1.0, g)
        ii, jj = np.triu_indices(g)
        lo, hi = axis[ii], axis[jj]

        keep_a = lo + hi <= 2.0 * t + 1e-12
        a1, a2 = lo[keep_a], hi[keep_a]
        if config.b2_pinned_to_one:
            keep_b = axis + 1.0 >= 2.0 * (t + eps)
            b1 = axis[keep_b]
            b2 = np.ones_like(b1)
        else:
            keep_b = lo + hi >= 2.0 * (t + eps)
            b1, b2 = lo[keep_b], hi[keep_b]
        if a1.size == 0 or b1.size == 0:
            raise EmptyFeasible(
                f"grid of {g} points per axis yields no feasible pairs at t={t}"
            )
        self._a = (a1, a2)
        self._b = (b1, b2)

        h = _entropy_arr
        ha = h(a1) + h(a2)
        hb = h(b1) + h(b2)
        pa = h(_fullcorr_arr(a1, a2))
        pb = h(_fullcorr_arr(b1, b2))
        saa = h(2.0 * a1 - a1 * a1) + 2.0 * h(a1 + a2 - a1 * a2) + h(2.0 * a2 - a2 * a2)
        sbb = h(2.0 * b1 - b1 * b1) + 2.0 * h(b1 + b2 - b1 * b2) + h(2.0 * b2 - b2 * b2)

        # Cross-block sums, chunked along the b axis to bound peak memory.
        sab = np.empty((a1.size, b1.size))
        a1c, a2c = a1[:, None], a2[:, None]
        chunk = max(1, int(1e6) // max(1, a1.size))
        for s in range(0, b1.size, chunk):
            b1c = b1[None, s : s + chunk]
            b2c = b2[None, s : s + chunk]
            sab[:, s : s + chunk] = (
                h(a1c + b1c - a1c * b1c)
                + h(a1c + b2c - a1c * b2c)
                + h(a2c + b1c - a2c * b1c)
                + h(a2c + b2c - a2c * b2c)
            )

        amean = 0.5 * (a1 + a2)
        bmean = 0.5 * (b1 + b2)
        beta = np.clip(
            (t - amean[:, None]) / (bmean[None, :] - amean[:, None]), 0.0, 1.0
        )
        wa = 0.5 * (1.0 - beta)
        wb = 0.5 * beta
        denom = wa * ha[:, None] + wb * hb[None, :]
        ind = wa * wa * saa[:, None] + wb * wb * sbb[None, :] + 2.0 * wa * wb * sab
        cor = (1.0 - beta) * pa[:, None] + beta * pb[None, :]
        bad = denom <= _DENOM_FLOOR
        safe = np.where(bad, 1.0, denom)
        self._bad = bad
        self._ind_over_denom = np.where(bad, 0.0, ind / safe)
        self._cor_over_denom = np.where(bad, 0.0, cor / safe)

        denom0 = 0.5 * ha
        bad0 = denom0 <= _DENOM_FLOOR
        safe0 = np.where(bad0, 1.0, denom0)
        self._bad0 = bad0
        self._ind0_over_denom0 = np.where(bad0, 0.0, (0.25 * saa) / safe0)
        self._cor0_over_denom0 = np.where(bad0, 0.0, pa / safe0)

    # -- grid scan ---------------------------------------------------------

    def _candidates(self, alpha: float) -> list[tuple]:
        """Top grid points of both branches, worst (smallest) first."""
        k = self.config.multistart_count
        a1, a2 = self._a
        b1, b2 = self._b

        r = (1.0 - alpha) * self._ind_over_denom + alpha * self._cor_over_denom
        r[self._bad] = _INF
        self.evaluations += r.size
        flat = r.ravel()
        take = min(k, flat.size)
        idx = np.argpartition(flat, take - 1)[:take]
        out = []
        for f in idx:
            i, j = divmod(int(f), b1.size)
            out.append(
                (
                    float(flat[f]),
                    _BRANCH_POSITIVE,
                    [float(a1[i]), float(a2[i]), float(b1[j]), float(b2[j])],
                )
            )

        r0 = (1.0 - alpha) * self._ind0_over_denom0 + alpha * self._cor0_over_denom0
        r0[self._bad0] = _INF
        self.evaluations += r0.size
        take0 = min(k, r0.size)
        idx0 = np.argpartition(r0, take0 - 1)[:take0]
        for f in idx0:
            out.append(
                (float(r0[f]), _BRANCH_ZERO, [float(a1[f]), float(a2[f]), None, None])
            )

        out.sort(key=_candidate_key)
        return out[:k]

    # -- refinement --------------------------------------------------------

    def _refine(self, alpha: float, branch: str, params: list) -> tuple[float, list]:
        cfg = self.config
        t = self.t
        eps = cfg.epsilon_boundary

        def objective(vec: list) -> float:
            self.evaluations += 1
            return _ratio_fast(vec[0], vec[1], vec[2], vec[3], t, alpha, eps)

        x = list(params)
        best = objective(x)
        if cfg.refine_rounds == 0:
            return best, x
        coords = [0, 1]
        if branch == _BRANCH_POSITIVE:
            coords += [2] if cfg.b2_pinned_to_one else [2, 3]
        window = 1.0 / (cfg.grid_points_per_axis - 1)
        for _ in range(cfg.refine_rounds):
            for ci in coords:
                lo = max(0.0, x[ci] - window)
                hi = min(1.0, x[ci] + window)
                if ci == 0:
                    hi = min(hi, 2.0 * t - x[1])
                elif ci == 1:
                    hi = min(hi, 2.0 * t - x[0])
                elif ci == 2:
                    floor = 2.0 * (t + eps) - x[3]
                    lo = max(lo, floor)
                elif ci == 3:
                    lo = max(lo, 2.0 * (t + eps) - x[2])
                if hi - lo <= cfg.param_tol:
                    continue

                def along(v: float, ci=ci) -> float:
                    y = list(x)
                    y[ci] = v
                    return objective(y)

                v, fv = _golden_min(along, lo, hi, cfg.param_tol)
                if fv < best:
                    x[ci] = v
                    best = fv
            window *= 0.35
        return best, x

    # -- public entry ------------------------------------------------------

    def inner_min(self, alpha: float) -> InnerSearchReport:
        alpha = require_prob(alpha, "alpha")
        before = self.evaluations
        best_value = _INF
        best_branch = ""
        best_params: list = []
        for value, branch, params in self._candidates(alpha):
            refined_value, refined_params = self._refine(alpha, branch, params)
            key = _candidate_key((refined_value, branch, refined_params))
            if not best_params or key < _candidate_key(
                (best_value, best_branch, best_params)
            ):
                best_value = refined_value
                best_branch = branch
                best_params = refined_params
        if not math.isfinite(best_value):
            raise EmptyFeasible(
                f"no family with positive marginal entropy found at t={self.t}; "
                "increase grid_points_per_axis"
            )
        family = _params_to_family(best_params, best_branch, self.t)
        # Authoritative value: the reference implementation, not the fast path.
        min_ratio = entropy_ratio(family, alpha)
        return InnerSearchReport(
            alpha=alpha,
            t=self.t,
            min_ratio=min_ratio,
            argmin=family,
            branch=best_branch,
            evaluations=self.evaluations - before,
            refined=self.config.refine_rounds > 0,
        )


def _candidate_key(candidate: tuple) -> tuple:
    value, branch, params = candidate
    return (value, branch != _BRANCH_ZERO, [p if p is not None else -1.0 for p in params])


def _params_to_family(params: Sequence, branch: str, t: float) -> ExtremeFamily:
    a1, a2 = sorted(params[:2])
    if branch == _BRANCH_ZERO:
        return ExtremeFamily(a1, a2, t)
    b1, b2 = sorted(params[2:])
    return ExtremeFamily(a1, a2, t, b1, b2)


def inner_inf(alpha: float, t: float, config: SearchConfig | None = None) -> InnerSearchReport:
    """Worst-case entropy ratio over candidate families at fixed (alpha, t).

    Raises :class:`EmptyFeasible` when t is outside (0, 1/2).  The
    report's ``min_ratio`` is computed by the reference objective at the
    argmin, so it differs from the true infimum only by how well the
    search converged, never by formula drift.
    """
    return _PairGrid(t, config or SearchConfig()).inner_min(alpha)


def default_alpha_grid() -> list[float]:
    """Nine evenly spaced blend weights covering [0, 0.1]."""
    return [round(0.0125 * i, 6) for i in range(9)]


def gamma_hat(
    t: float,
    alphas: str | float | Iterable[float] = "auto",
    config: SearchConfig | None = None,
) -> BoundCertificate:
    """Best worst-case-ratio certificate over a sweep of blend weights.

    ``alphas`` may be the string ``"auto"`` (the default grid on
    [0, 0.1]), a single weight, or an iterable of weights.  When more
    than one weight is swept, the best one is polished by golden-section
    on the spanned neighbourhood; the inner minimum is concave in alpha,
    so a local polish is the right tool.  A single explicit weight is
    taken as pinned and not moved.
    """
    cfg = config or SearchConfig()
    if isinstance(alphas, str):
        if alphas != "auto":
            raise ValueError(f'alphas must be "auto", a number, or a list, got {alphas!r}')
        alpha_list = default_alpha_grid()
    elif isinstance(alphas, (int, float)):
        alpha_list = [float(alphas)]
    else:
        alpha_list = sorted({float(a) for a in alphas})
    if not alpha_list:
        raise ValueError("alphas must be nonempty")
    for a in alpha_list:
        require_prob(a, "alpha")

    started = time.perf_counter()
    grid = _PairGrid(t, cfg)
    reports: dict[float, InnerSearchReport] = {}

    def measure(a: float) -> InnerSearchReport:
        if a not in reports:
            reports[a] = grid.inner_min(a)
        return reports[a]

    best_alpha = alpha_list[0]
    for a in alpha_list[1:]:
        if measure(a).min_ratio > measure(best_alpha).min_ratio:
            best_alpha = a

    if len(alpha_list) > 1:
        pos = alpha_list.index(best_alpha)
        left = alpha_list[pos - 1] if pos > 0 else max(0.0, 2 * best_alpha - alpha_list[pos + 1])
        right = (
            alpha_list[pos + 1]
            if pos + 1 < len(alpha_list)
            else min(1.0, 2 * best_alpha - alpha_list[pos - 1])
        )
        if right - left > _ALPHA_REFINE_TOL:
            refined_alpha, neg_value = _golden_min(
                lambda a: -measure(a).min_ratio, left, right, _ALPHA_REFINE_TOL
            )
            if -neg_value > measure(best_alpha).min_ratio:
                best_alpha = refined_alpha

    report = measure(best_alpha)
    wall_ms = (time.perf_counter() - started) * 1000.0
    return BoundCertificate(
        t=grid.t,
        alpha_star=best_alpha,
        gamma_hat_lower=report.min_ratio,
        argmin=report.argmin,
        branch=report.branch,
        evaluations=grid.evaluations,
        config=cfg,
        wall_time_ms=wall_ms,
    )


def find_tmax(
    config: SearchConfig | None = None,
    margin: float = 1e-7,
    bracket: tuple[float, float] = (0.37, 0.40),
    t_tol: float = 1e-6,
    alphas: str | float | Iterable[float] = "auto",
) -> ThresholdCertificate:
    """Bisect for the largest t whose certificate clears 1 + margin.

    The bracket must straddle the threshold: the low endpoint has to
    certify and the high endpoint has to fail, otherwise
    :class:`BracketFailure` is raised with both endpoint bounds in the
    message.  The returned ``t_certified`` carries an actual certificate
    (its bound exceeded 1 + margin); ``t_ceiling`` is the smallest
    tested t that failed, so the true threshold lies between the two.
    """
    cfg = config or SearchConfig()
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi < 0.5:
        raise ValueError(f"bracket must satisfy 0 < lo < hi < 1/2, got {bracket!r}")
    if not 0.0 < t_tol < hi - lo:
        raise ValueError(f"t_tol must lie in (0, hi-lo), got {t_tol!r}")

    started = time.perf_counter()
    cert_lo = gamma_hat(lo, alphas, cfg)
    cert_hi = gamma_hat(hi, alphas, cfg)
    endpoint_bounds = (cert_lo.gamma_hat_lower, cert_hi.gamma_hat_lower)
    threshold = 1.0 + margin
    if cert_lo.gamma_hat_lower <= threshold:
        raise BracketFailure(
            f"low endpoint t={lo} has bound {cert_lo.gamma_hat_lower}, "
            f"not above 1 + margin = {threshold}; nothing in the bracket certifies"
        )
    if cert_hi.gamma_hat_lower > threshold:
        raise BracketFailure(
            f"high endpoint t={hi} has bound {cert_hi.gamma_hat_lower}, "
            f"already above 1 + margin = {threshold}; enlarge the bracket"
        )

    best = cert_lo
    steps = 0
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        cert = gamma_hat(mid, alphas, cfg)
        steps += 1
        if cert.gamma_hat_lower > threshold:
            lo = mid
            best = cert
        else:
            hi = mid
    wall_ms = (time.perf_counter() - started) * 1000.0
    return ThresholdCertificate(
        t_certified=lo,
        t_ceiling=hi,
        margin=margin,
        bracket=(float(bracket[0]), float(bracket[1])),
        endpoint_bounds=endpoint_bounds,
        steps=steps,
        certificate=best,
        wall_time_ms=wall_ms,
    )


def verify_reference_point(
    config: SearchConfig | None = None, strict: bool = False
) -> BoundCertificate:
    """Reproduce the published reference evaluation and check it.

    Runs the inner search at t = 0.38234, alpha = 0.035 (by default on
    a finer grid than usual) and compares the minimum and its argmin
    against the published values.  Tolerances: 2e-5 on the ratio
    (1e-6 when ``strict``) and 1e-3 on each argmin coordinate and on
    beta.  On any mismatch raises :class:`VerificationFailed` carrying
    the measured and expected values.
    """
    cfg = config or SearchConfig(grid_points_per_axis=96, refine_rounds=8)
    started = time.perf_counter()
    grid = _PairGrid(REFERENCE_T, cfg)
    report = grid.inner_min(REFERENCE_ALPHA)
    wall_ms = (time.perf_counter() - started) * 1000.0

    fam = report.argmin
    measured = {
        "min_ratio": report.min_ratio,
        "a1": fam.a1,
        "a2": fam.a2,
        "b1": fam.b1,
        "b2": fam.b2,
        "beta": fam.beta,
        "branch": report.branch,
    }
    expected = {
        "min_ratio": REFERENCE_RATIO,
        "a1": REFERENCE_LOW_VALUE,
        "a2": REFERENCE_LOW_VALUE,
        "b1": REFERENCE_LOW_VALUE,
        "b2": 1.0,
        "beta": REFERENCE_BETA,
        "branch": _BRANCH_POSITIVE,
    }
    ratio_tol = 1e-6 if strict else 2e-5
    problems = []
    if abs(measured["min_ratio"] - REFERENCE_RATIO) > ratio_tol:
        problems.append(
            f"min_ratio {measured['min_ratio']!r} vs {REFERENCE_RATIO!r} (tol {ratio_tol})"
        )
    if report.branch != _BRANCH_POSITIVE:
        problems.append(f"branch {report.branch!r} vs {_BRANCH_POSITIVE!r}")
    else:
        for key in ("a1", "a2", "b1", "b2", "beta"):
            if abs(measured[key] - expected[key]) > 1e-3:
                problems.append(f"{key} {measured[key]!r} vs {expected[key]!r} (tol 0.001)")
    if problems:
        raise VerificationFailed(
            "reference evaluation not reproduced: " + "; ".join(problems),
            measured=measured,
            expected=expected,
        )
    return BoundCertificate(
        t=REFERENCE_T,
        alpha_star=REFERENCE_ALPHA,
        gamma_hat_lower=report.min_ratio,
        argmin=fam,
        branch=report.branch,
        evaluations=report.evaluations,
        config=cfg,
        wall_time_ms=wall_ms,
    )
