"""Teichmüller / Thurston distance bounds and diameter estimates.

Every function returns a :class:`BoundReport`.  Lower bounds that come out
non-positive are returned with ``vacuous=True`` rather than raised: the
underlying inequalities still hold, they just carry no information there.
"""
import math

import numpy as np
from scipy.optimize import minimize_scalar

from . import hyp_trig
from .pants_graph import ARCCOSH2, tree_parameter
from .reports import BoundReport
from .surface_models import CHAIN_CUFF, chain_seam, solve_c1, solve_c2_t2

LOG12 = math.log(12.0)
DEFAULT_GRID = 10001


def _pos(x, name):
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise ValueError(f"{name} must be positive and finite, got {x!r}")
    return x


def filling_lower_bound(L, sys):
    """``1/4 log(L / sys)``: distance to the surfaces whose systoles fill."""
    L, sys = _pos(L, "L"), _pos(sys, "sys")
    v = 0.25 * math.log(L / sys)
    return BoundReport("filling_lower_bound", v, "lower", {"L": L, "sys": sys}, "1/4*log(L/sys)", v <= 0)


def hole_bound_exact(n):
    """``1/4 log n`` for the tree surface built from depth-``n`` trees."""
    return 0.25 * math.log(n)


def thm_hole_bound(g, n=None):
    """``1/4 log(log g - log 12)``, with the exact ``1/4 log n`` variant alongside.

    Where ``log g <= log 12`` the formula is undefined or non-positive; the
    report then carries the trivial value 0 and ``vacuous=True``.
    """
    if int(g) != g or g < 3:
        raise ValueError(f"genus must be an integer >= 3, got {g!r}")
    g = int(g)
    n = tree_parameter(g) if n is None else int(n)
    arg = math.log(g) - LOG12
    defined = arg > 0
    v = 0.25 * math.log(arg) if defined else 0.0
    return BoundReport(
        "hole_bound",
        v,
        "lower",
        {"g": g, "n": n},
        "1/4*log(log(g)-log(12))",
        (not defined) or v <= 0,
        {"exact": hole_bound_exact(n), "formula_defined": defined},
    )


def hole_pipeline(g):
    """Tree surface -> shortest filling-curve length bound -> filling lower bound."""
    from .pants_graph import build_tree_for_genus, min_length_through_center, surface_from_tree

    graph = surface_from_tree(build_tree_for_genus(g))
    L = min_length_through_center(graph)
    rep = filling_lower_bound(L, ARCCOSH2)
    rep.inputs["g"] = int(g)
    return rep


def ext_ratio_distance(ext1, ext2):
    """``1/2 |log(ext1 / ext2)|``."""
    ext1, ext2 = _pos(ext1, "ext1"), _pos(ext2, "ext2")
    # difference of logs rather than log of the ratio: exactly symmetric
    return 0.5 * abs(math.log(ext1) - math.log(ext2))


def collar_theta(g, c):
    """Collar angle of the cuffs of ``S_g(c, 0)`` with width half the seam."""
    cos_t = (1.0 + math.cos(math.pi / (g + 1)) ** 2 / math.sinh(c / 4.0) ** 2) ** -0.5
    return math.acos(cos_t)


def _params(g, c1=None, c2=None, t2=None):
    if c1 is None:
        c1 = solve_c1(g)
    if c2 is None or t2 is None:
        c2s, t2s, _ = solve_c2_t2(g)
        c2 = c2s if c2 is None else c2
        t2 = t2s if t2 is None else t2
    return c1, c2, t2


def dist_s1_mid(g, c1=None, c2=None):
    """``1/2 log(pi c2 / (2 theta c1))`` bounding the distance from ``S_g(c1,0)`` to ``S_g(c2,0)``."""
    c1, c2, _ = _params(g, c1, c2, 0.0)
    theta = collar_theta(g, c2)
    lower, upper = c1 / math.pi, c2 / (2.0 * theta)
    if lower > upper:
        raise ValueError(f"extremal-length sandwich inverted: {lower} > {upper}")
    v = ext_ratio_distance(upper, lower)
    return BoundReport(
        "dist_s1_mid",
        v,
        "upper",
        {"g": int(g), "c1": c1, "c2": c2},
        "1/2*log(pi*c2/(2*theta*c1))",
        False,
        {"theta": theta, "ext_lower": lower, "ext_upper": upper},
    )


def _check_strip(theta, phi):
    lo, hi = math.pi / 2 - theta, math.pi / 2 + theta
    if not (lo - 1e-12 <= phi <= hi + 1e-12):
        raise hyp_trig.HyperbolicDomainError(f"phi = {phi!r} outside the collar strip [{lo}, {hi}]")


def phi_map(t2, theta, phi):
    """Radial stretch ``Phi(phi)`` of the collar homeomorphism."""
    a = math.sinh(t2 / 2.0) * math.cos(phi) / math.sin(theta)
    return a + math.sqrt(a * a + 1.0)


def phi_map_prime(t2, theta, phi):
    """Analytic ``d Phi / d phi``."""
    k = math.sinh(t2 / 2.0) / math.sin(theta)
    a = k * math.cos(phi)
    return -k * math.sin(phi) * (1.0 + a / math.sqrt(a * a + 1.0))


def twist_dilatation(t2, theta, phi):
    """Dilatation ``K`` of the collar homeomorphism at angle ``phi``."""
    _check_strip(theta, phi)
    p = phi_map(t2, theta, phi)
    dp = abs(phi_map_prime(t2, theta, phi))
    root = math.sqrt(p * p + 0.25 * dp * dp)
    return (root + 0.5 * dp) / (root - 0.5 * dp)


def dilatation_curve(t2, theta, points=2001):
    phis = np.linspace(math.pi / 2 - theta, math.pi / 2 + theta, points)
    return phis, np.array([twist_dilatation(t2, theta, p) for p in phis])


def sup_dilatation(t2, theta, grid=DEFAULT_GRID):
    """``(phi*, K*)``: supremum of ``K`` over the strip by a grid scan refined by golden section."""
    phis, ks = dilatation_curve(t2, theta, grid)
    i = int(np.argmax(ks))
    best = (float(phis[i]), float(ks[i]))
    if 0 < i < len(phis) - 1:
        res = minimize_scalar(
            lambda p: -twist_dilatation(t2, theta, min(max(p, phis[0]), phis[-1])),
            bracket=(phis[i - 1], phis[i], phis[i + 1]),
            method="golden",
            tol=1e-12,
        )
        if -res.fun > best[1]:
            best = (float(res.x), float(-res.fun))
    return best


def twist_distance_bound(t2, theta, grid=DEFAULT_GRID):
    """``1/2 log sup K`` bounding the distance from ``S_g(c2,0)`` to ``S_g(c2,t2)``."""
    if t2 < 0:
        raise ValueError(f"t2 must be non-negative, got {t2!r}")
    phi_star, k_star = sup_dilatation(t2, theta, grid)
    v = 0.5 * math.log(k_star)
    return BoundReport(
        "twist_distance_bound",
        v,
        "upper",
        {"t2": t2, "theta": theta},
        "1/2*log(sup K(phi))",
        False,
        {"phi_star": phi_star, "K_star": k_star, "grid": grid},
    )


def dist_small_total(g, grid=DEFAULT_GRID):
    """Sum of the two legs through ``S_g(c2, 0)``."""
    c1, c2, t2 = _params(g)
    first = dist_s1_mid(g, c1, c2)
    second = twist_distance_bound(t2, first.extra["theta"], grid)
    total = first.value + second.value
    return BoundReport(
        "dist_small_total",
        total,
        "upper",
        {"g": int(g), "c1": c1, "c2": c2, "t2": t2},
        "dist_s1_mid + twist_distance_bound",
        False,
        {"dist_s1_mid": first.value, "twist_distance_bound": second.value, "theta": first.extra["theta"]},
    )


def _floor_term(g):
    return math.floor((g - 1) / 2.0 - 2.0)


def diam_lower_s3(g, cuff=CHAIN_CUFF):
    """``d(cuff) * floor((g-1)/2 - 2)`` with the stated ``0.6 floor((g-5)/2)`` alongside."""
    if int(g) != g or g < 5:
        raise ValueError(f"genus must be an integer >= 5, got {g!r}")
    g = int(g)
    d = chain_seam(cuff)
    v = d * _floor_term(g)
    sens = {f"{s:+.2f}": chain_seam(cuff + s) * _floor_term(g) for s in (-0.01, 0.01)}
    return BoundReport(
        "diam_lower_s3",
        v,
        "lower",
        {"g": g, "cuff": cuff},
        "chain_seam(cuff)*floor((g-1)/2-2)",
        v <= 0,
        {"seam": d, "stated": 0.6 * math.floor((g - 5) / 2.0), "cuff_sensitivity": sens},
    )


def diam_upper_exact(g):
    return 4.0 * math.acosh(1.0 / math.tan(math.pi / (2 * g + 2)))


def diam_upper_closed(g):
    return 4.0 * math.log((4 * g + 4) / math.pi)


def diam_upper_s1(g):
    """``4 arccosh cot(pi/(2g+2))`` with the looser ``4 log((4g+4)/pi)`` alongside."""
    if int(g) != g or g < 2:
        raise ValueError(f"genus must be an integer >= 2, got {g!r}")
    g = int(g)
    return BoundReport(
        "diam_upper_s1",
        diam_upper_exact(g),
        "upper",
        {"g": g},
        "4*arccosh(cot(pi/(2g+2)))",
        False,
        {"closed_form": diam_upper_closed(g)},
    )


def large_closed_form(g):
    return 0.5 * math.log(g - 6) - 0.5 * math.log(40.0 / 3.0 * math.log((4 * g + 4) / math.pi))


def dist_large_lower(g, cuff=CHAIN_CUFF):
    """Diameter-ratio lower bound on the distance between the small and chain examples.

    ``value`` is the closed form with the rounded constants; the variant
    recomputed from the chain seam and the exact diameter is in ``extra``.
    """
    if int(g) != g or g < 13:
        raise ValueError(f"genus must be an integer >= 13, got {g!r}")
    g = int(g)
    closed = large_closed_form(g)
    lower = diam_lower_s3(g, cuff)
    sharp = 0.5 * math.log(lower.value / diam_upper_exact(g))
    sens = {k: 0.5 * math.log(v / diam_upper_exact(g)) for k, v in lower.extra["cuff_sensitivity"].items()}
    return BoundReport(
        "dist_large_lower",
        closed,
        "lower",
        {"g": g, "cuff": cuff},
        "1/2*log(g-6)-1/2*log(40/3*log((4g+4)/pi))",
        closed <= 0,
        {"recomputed": sharp, "recomputed_vacuous": sharp <= 0, "recomputed_cuff_sensitivity": sens},
    )


def large_crossover(g_max=10000, recomputed=False, cuff=CHAIN_CUFF):
    """Smallest ``g >= 13`` from which the bound stays positive up to ``g_max``."""
    first = None
    for g in range(13, int(g_max) + 1):
        rep = dist_large_lower(g, cuff)
        v = rep.extra["recomputed"] if recomputed else rep.value
        if v > 0:
            if first is None:
                first = g
        else:
            first = None
    if first is None:
        raise ValueError(f"bound never turns positive for g <= {g_max}")
    return first
