"""Weil-Petersson distance lower bounds and threshold arithmetic.

Functions come in two flavours: ones taking the genus ``g`` and ``*_log``
ones taking ``x = log g`` so that astronomically large genera (``log g`` up to
1e6 and beyond) stay representable.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize_scalar


@dataclass(frozen=True)
class WpConstants:
    a_sys: float = 0.5492
    b_inj: float = 0.3884
    eps: float = 0.1

    def __post_init__(self):
        for name in ("a_sys", "b_inj", "eps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")


DEFAULTS = WpConstants()
STATED_COEFFICIENT = 0.6521


def _log_genus(g):
    g = float(g)
    if not g > math.e:
        raise ValueError(f"g must exceed e, got {g!r}")
    return math.log(g)


def inj_profile_log(x, consts=DEFAULTS):
    """``Q = x/4 - (3/4 + eps/2) log x`` with ``x = log g``."""
    if not x > 1.0:
        raise ValueError(f"log g must exceed 1, got {x!r}")
    return 0.25 * x - (0.75 + 0.5 * consts.eps) * math.log(x)


def inj_profile(g, consts=DEFAULTS):
    """Injectivity-radius lower bound along the wide-collar curve; ``<= 0`` means vacuous."""
    return inj_profile_log(_log_genus(g), consts)


def _minimax_terms(s, Q, L, consts):
    return (
        (math.sqrt(s) - math.sqrt(L)) / consts.a_sys,
        (math.sqrt(Q) - math.sqrt(s / 2.0)) / consts.b_inj,
    )


def eliminate_closed(Q, L, consts=DEFAULTS):
    """Balanced point of the two distance inequalities: ``(sqrt(2Q) - sqrt(L)) / (a + sqrt2 b)``."""
    return (math.sqrt(2.0 * Q) - math.sqrt(L)) / (consts.a_sys + math.sqrt(2.0) * consts.b_inj)


def balanced_sys(Q, L, consts=DEFAULTS):
    """The systole value ``s*`` at which both inequalities give the same bound."""
    a, b = consts.a_sys, consts.b_inj
    x = (a * math.sqrt(Q) + b * math.sqrt(L)) / (b + a / math.sqrt(2.0))
    return x * x


def eliminate_numeric(Q, L, consts=DEFAULTS):
    """``min_s max(...)`` by 1-D minimisation over ``sqrt(s)``.

    A bounded Brent pass locates the kink; golden section then polishes it,
    since comparisons alone resolve a kink to near machine precision.
    """
    hi = math.sqrt(2.0 * Q) + math.sqrt(L) + 1.0

    def f(x):
        return max(_minimax_terms(x * x, Q, L, consts))

    rough = minimize_scalar(f, bounds=(0.0, hi), method="bounded")
    x = float(rough.x)
    if 0.0 < x < hi and f(x) < min(f(0.0), f(hi)):
        res = minimize_scalar(f, bracket=(0.0, x, hi), method="golden", tol=1e-15)
        if res.fun <= rough.fun:
            x = float(res.x)
    return f(x), x * x


def eliminate_sys(Q, L, consts=DEFAULTS, check=True):
    """WP lower bound after eliminating the unknown systole, clamped at 0.

    With ``check`` the closed form is compared with the numeric minimax and a
    mismatch above 1e-8 raises.
    """
    if not (Q > 0 and L > 0):
        raise ValueError(f"Q and L must be positive, got {Q!r}, {L!r}")
    closed = eliminate_closed(Q, L, consts)
    if check:
        numeric, _ = eliminate_numeric(Q, L, consts)
        if abs(numeric - closed) > 1e-8:
            raise ArithmeticError(f"closed form {closed} and numeric minimax {numeric} disagree")
    return max(closed, 0.0)


def leading_coefficient(consts=DEFAULTS):
    """Coefficient of ``sqrt(log g)`` in the recomputed bound: ``(1/sqrt2) / (a + sqrt2 b)``."""
    return (1.0 / math.sqrt(2.0)) / (consts.a_sys + math.sqrt(2.0) * consts.b_inj)


def wp_recomputed_log(x, consts=DEFAULTS):
    Q = inj_profile_log(x, consts)
    if Q <= 0:
        return 0.0
    return eliminate_sys(Q, math.log(x), consts, check=False)


def stated_wp_threshold_log(x):
    return STATED_COEFFICIENT * (math.sqrt(x) - math.sqrt(7.0 * math.log(x)))


def stated_wp_threshold(g):
    """``0.6521 (sqrt(log g) - sqrt(7 log log g))``; may be negative."""
    return stated_wp_threshold_log(_log_genus(g))


def fit_sqrt_coefficient(fn, xs):
    """Least-squares ``fn(x) ~ k sqrt(x) + m sqrt(log x)``; returns ``k``."""
    xs = np.asarray(xs, dtype=float)
    basis = np.column_stack([np.sqrt(xs), np.sqrt(np.log(xs))])
    ys = np.array([fn(x) for x in xs])
    coef, *_ = np.linalg.lstsq(basis, ys, rcond=None)
    return float(coef[0])


def teich_inequality_log(x):
    """``(lhs, rhs, defined)`` of ``1/4 log((x - 2 log x) / (log x / 5)) > log x / 5``."""
    if x <= 1.0:
        return math.nan, math.nan, False
    ll = math.log(x)
    num = x - 2.0 * ll
    if num <= 0:
        return math.nan, 0.2 * ll, False
    return 0.25 * math.log(num / (0.2 * ll)), 0.2 * ll, True


def _holds(x):
    lhs, rhs, ok = teich_inequality_log(x)
    return ok and lhs > rhs


def teich_threshold_crossover_log(search_max_log, points=4000, lower_log=1e-6):
    """Smallest ``log g`` from which the Teichmüller threshold inequality holds.

    Scans a logarithmic grid of ``log g`` in ``[lower_log, search_max_log]``,
    then bisects between the last failing and first passing grid points.
    """
    grid = np.geomspace(lower_log, search_max_log, points)
    prev = None
    for x in grid:
        if _holds(x):
            if prev is None:
                return float(x)
            lo, hi = prev, float(x)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if _holds(mid):
                    hi = mid
                else:
                    lo = mid
                if hi - lo <= 1e-15 * hi:
                    break
            return hi
        prev = float(x)
    raise ValueError(f"inequality does not hold anywhere up to log g = {search_max_log}")


def teich_threshold_crossover(search_max, points=4000):
    """Genus form of :func:`teich_threshold_crossover_log`."""
    if not search_max > math.exp(math.e):
        raise ValueError(f"search_max must exceed e^e, got {search_max!r}")
    return math.exp(teich_threshold_crossover_log(math.log(search_max), points))


def teich_threshold_log(x):
    """The systole threshold ``(1/5) log log g``."""
    return 0.2 * math.log(x)


def mp_tail(c_g, B):
    """Tail bound ``B c e^{-c}`` for the probability that the systole exceeds ``c``."""
    if not (c_g > 0 and B > 0):
        raise ValueError(f"c_g and B must be positive, got {c_g!r}, {B!r}")
    return B * c_g * math.exp(-c_g)


def threshold_table(log_gs, consts=DEFAULTS):
    """Rows ``(log g, teich threshold, stated WP threshold, recomputed WP bound)``."""
    rows = []
    for x in log_gs:
        rows.append((float(x), teich_threshold_log(x), stated_wp_threshold_log(x), wp_recomputed_log(x, consts)))
    return rows
