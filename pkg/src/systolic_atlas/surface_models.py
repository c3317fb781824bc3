"""The tree, rotation and chain surface families and their parameter solvers.

Rotation family ``S_g(c, t)``: two copies of the (g+1)-holed sphere with all
cuffs of length ``c`` (each sphere is two right-angled 2(g+1)-gons), glued
cuff ``k`` to cuff ``k``.  At ``t = 0`` the seams of the two spheres meet and
close up into the curves ``alpha_k``; ``t`` is a simultaneous twist along all
cuffs ``gamma_k``.  ``beta_k`` is ``alpha_k`` Dehn-twisted once along
``gamma_{k+1}``, in the direction that makes it shorter for small ``t > 0``.

Curve words are read off the tiling at ``t = 0`` and then evaluated on the
deformed representations, whose generators are labelled identically.
"""
from dataclasses import dataclass
from functools import lru_cache
import importlib.resources
import json
import math

import numpy as np
from scipy.optimize import brentq

from . import hyp_trig
from .holonomy import CuffGluing, FNSurface, geodesic_length, representation
from .holonomy.tiling import reduce_word
from .pants_graph import build_tree_for_genus, surface_from_tree

CHAIN_CUFF = 6.980
C1_BRACKET = (0.1, 10.0)
RESIDUAL_TOL = 1e-8


class SolverError(RuntimeError):
    """A parameter solver failed to converge or lost its bracket."""


def _genus(g, low=2):
    if int(g) != g or g < low:
        raise ValueError(f"genus must be an integer >= {low}, got {g!r}")
    return int(g)


@dataclass(frozen=True)
class TreeSpec:
    g: int
    family = "tree"

    def __post_init__(self):
        _genus(self.g, 3)

    def gluing_graph(self):
        return surface_from_tree(build_tree_for_genus(self.g))

    def to_fn_surface(self):
        return self.gluing_graph().to_fn_surface()


@dataclass(frozen=True)
class RotFamilySpec:
    g: int
    c: float
    t: float = 0.0
    family = "rot"

    def __post_init__(self):
        _genus(self.g)
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"cuff length must be positive, got {self.c!r}")
        if not (0.0 <= self.t <= self.c / 2.0):
            raise ValueError(f"twist must lie in [0, c/2], got {self.t!r}")

    @property
    def n(self):
        return self.g + 1

    def to_fn_surface(self):
        return rot_surface(self.g, self.c, self.t)


def rot_surface(g, c, t=0.0):
    """Fenchel-Nielsen data of ``S_g(c, t)``; ``t`` is not range checked (marking tests use full twists)."""
    n = _genus(g) + 1
    lengths = ((float(c),) * n, (float(c),) * n)
    # a shift of c/2 brings seam ends of the two spheres together
    gl = tuple(CuffGluing(0, k, 1, k, c / 2.0 + t) for k in range(n))
    return FNSurface(lengths, gl)


@dataclass(frozen=True)
class ChainSpec:
    """Cyclic chain of ``g - 1`` four-holed spheres with the order-4 rotation."""

    g: int
    cuff: float = CHAIN_CUFF
    family = "chain"

    def __post_init__(self):
        _genus(self.g)
        if not (math.isfinite(self.cuff) and self.cuff > 0):
            raise ValueError(f"cuff length must be positive, got {self.cuff!r}")

    @property
    def count(self):
        return self.g - 1

    def to_fn_surface(self):
        m = self.count
        lengths = tuple((float(self.cuff),) * 4 for _ in range(m))
        gl = []
        for k in range(m):
            nxt = (k + 1) % m
            gl.append(CuffGluing(k, 2, nxt, 1, 0.0))
            gl.append(CuffGluing(k, 3, nxt, 0, 0.0))
        return FNSurface(lengths, tuple(gl))


def family_spec(family, g, **kw):
    if family == "tree":
        return TreeSpec(g)
    if family == "rot":
        return RotFamilySpec(g, kw["c"], kw.get("t", 0.0))
    if family == "chain":
        return ChainSpec(g, kw.get("cuff", CHAIN_CUFF))
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class NamedCurve:
    family: str  # "alpha", "beta" or "gamma"
    k: int = 1

    def __post_init__(self):
        if self.family not in ("alpha", "beta", "gamma"):
            raise ValueError(f"curve family must be alpha, beta or gamma, got {self.family!r}")


def c1_closed_form(g):
    return 4.0 * math.asinh(math.sqrt(math.cos(math.pi / (_genus(g) + 1))))


def alpha_closed_form(g, c):
    """Length of ``alpha_k`` on ``S_g(c, 0)``: twice the seam of the (g+1)-holed sphere."""
    return 4.0 * hyp_trig.seam_half(c, _genus(g) + 1)


@lru_cache(maxsize=None)
def _base_rep(g):
    return representation(rot_surface(g, c1_closed_form(g), 0.0))


def _alpha_word(g, i):
    rep = _base_rep(g)
    # alpha runs along the seam between cuffs i and i+1 (0-based)
    return rep.edge_line_word(0, rep.polygons[0].seam_edge[i])


def _cuff_loop(g, i):
    rep = _base_rep(g)
    return rep.path_word(rep.cuff_loop_path(0, (i + 1) % (g + 1)))


@lru_cache(maxsize=None)
def _twist_sign(g):
    """Orientation of the Dehn twist that shortens ``beta`` for small ``t > 0``."""
    h = 1e-4
    rep_h = representation(rot_surface(g, c1_closed_form(g), h))
    alpha, loop = _alpha_word(g, 0), _cuff_loop(g, 0)
    plus = reduce_word(alpha + loop)
    minus = reduce_word(alpha + tuple(-x for x in reversed(loop)))
    return 1 if geodesic_length(rep_h, plus) < geodesic_length(rep_h, minus) else -1


@lru_cache(maxsize=None)
def curve_word(g, family, k):
    """Word of a named curve (``k`` 1-based) in the rotation-family generators."""
    g = _genus(g)
    i = _index(g, k)
    if family == "alpha":
        return _alpha_word(g, i)
    if family == "gamma":
        return _base_rep(g).cuff_word(i)
    if family == "beta":
        lam = _cuff_loop(g, i)
        if _twist_sign(g) < 0:
            lam = tuple(-x for x in reversed(lam))
        return reduce_word(_alpha_word(g, i) + lam)
    raise ValueError(f"curve family must be alpha, beta or gamma, got {family!r}")


def curve_words(g):
    """Words of ``(alpha_k, beta_k, gamma_k)`` for k = 1..g+1."""
    g = _genus(g)
    return {f: tuple(curve_word(g, f, k) for k in range(1, g + 2)) for f in ("alpha", "beta", "gamma")}


def _index(g, k):
    if not (1 <= k <= g + 1):
        raise ValueError(f"curve index must lie in 1..{g + 1}, got {k}")
    return k - 1


def l_curve(spec, curve, rep=None):
    """Hyperbolic length of a named curve on ``S_g(c, t)``."""
    idx = _index(spec.g, curve.k)
    if curve.family == "gamma":
        return float(spec.c)
    rep = rep if rep is not None else representation(rot_surface(spec.g, spec.c, spec.t))
    return geodesic_length(rep, curve_word(spec.g, curve.family, idx + 1))


def _lengths(g, c, t):
    rep = representation(rot_surface(g, c, t))
    return geodesic_length(rep, curve_word(g, "alpha", 1)), geodesic_length(rep, curve_word(g, "beta", 1))


def solve_c1(g, xtol=1e-13):
    """Root of ``l_alpha(c, 0) = c`` on the bracket [0.1, 10]."""
    g = _genus(g)
    word = curve_word(g, "alpha", 1)

    def f(c):
        return geodesic_length(representation(rot_surface(g, c, 0.0)), word) - c

    lo, hi = C1_BRACKET
    if f(lo) * f(hi) > 0:
        raise SolverError(f"l_alpha(c, 0) - c has no sign change on {C1_BRACKET}")
    return brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)


def _c_of_t(g, t, lo=0.1, hi=10.0):
    word = curve_word(g, "alpha", 1)

    def f(c):
        return geodesic_length(representation(rot_surface(g, c, t)), word) - c

    return brentq(f, lo, hi, xtol=1e-12, maxiter=200)


def _newton(g, c, t, tol=1e-12, max_iter=30, h=1e-6):
    for _ in range(max_iter):
        la, lb = _lengths(g, c, t)
        r = np.array([la - c, lb - c])
        if np.max(np.abs(r)) < tol:
            return c, t, r
        la_c, lb_c = _lengths(g, c + h, t)
        la_t, lb_t = _lengths(g, c, t + h)
        jac = np.array([[(la_c - la) / h - 1.0, (la_t - la) / h], [(lb_c - lb) / h - 1.0, (lb_t - lb) / h]])
        if abs(np.linalg.det(jac)) < 1e-14:
            raise SolverError("singular Jacobian in the (c2, t2) Newton step")
        dc, dt = np.linalg.solve(jac, -r)
        c, t = c + dc, t + dt
        if max(abs(dc), abs(dt)) < 1e-13:
            # step below the holonomy round-off floor: further iterations only add noise
            break
        if not (0 < c and 0 < t < c / 2):
            raise SolverError("Newton iterate left the admissible region")
    la, lb = _lengths(g, c, t)
    return c, t, np.array([la - c, lb - c])


def _bracket_t2(g):
    """Nested solve: ``c(t)`` from the alpha equation, then the beta equation in ``t``."""

    def h(t):
        c = _c_of_t(g, t)
        return _lengths(g, c, t)[1] - c

    c0 = solve_c1(g)
    grid = np.linspace(0.0, c0 / 2.0, 9)[1:]
    prev_t, prev_v = 0.0, h(1e-9)
    for t in grid:
        v = h(t)
        if prev_v * v < 0:
            t2 = brentq(h, prev_t, t, xtol=1e-10)
            return _c_of_t(g, t2), t2
        prev_t, prev_v = t, v
    raise SolverError(f"no (c2, t2) found for g={g}: l_beta - c keeps its sign on t in (0, c/2]")


@lru_cache(maxsize=None)
def solve_c2_t2(g, guess=None):
    """Simultaneous root of ``l_alpha = l_beta = c`` on ``S_g(c, t)``.

    Returns ``(c2, t2, residuals)``.  Starts from ``guess`` (or the golden
    table, or a nested bracketed solve) and polishes with 2-D Newton.
    """
    g = _genus(g)
    if guess is None:
        guess = golden_guess(g)
    if guess is None:
        guess = _bracket_t2(g)
    try:
        c, t, r = _newton(g, *guess)
    except SolverError:
        c, t, r = _newton(g, *_bracket_t2(g))
    if np.max(np.abs(r)) >= RESIDUAL_TOL:
        raise SolverError(f"(c2, t2) residuals {r} above {RESIDUAL_TOL} for g={g}")
    if not (0 < t < c / 2):
        raise SolverError(f"t2 = {t} outside (0, c2/2) for g={g}")
    return float(c), float(t), tuple(float(x) for x in r)


@lru_cache(maxsize=1)
def load_golden():
    """Golden table ``{g: {"c1", "c2", "t2", "residuals"}}`` shipped with the package."""
    path = importlib.resources.files("systolic_atlas") / "data" / "golden_params.json"
    try:
        rows = json.loads(path.read_text())["rows"]
    except FileNotFoundError:
        return {}
    return {int(r["g"]): r for r in rows}


def golden_guess(g):
    row = load_golden().get(int(g))
    return None if row is None else (row["c2"], row["t2"])


def chain_seam(spec_or_cuff):
    """Distance between neighbouring cuffs of the four-holed sphere: ``sinh(c/4) sinh(d/2) = cos(pi/4)``."""
    cuff = spec_or_cuff.cuff if isinstance(spec_or_cuff, ChainSpec) else spec_or_cuff
    return 2.0 * hyp_trig.seam_half(cuff, 4)


def golden_table(genera):
    """Rows for the golden file, solving each genus with the previous solution as warm start."""
    rows = []
    guess = None
    for g in genera:
        c1 = solve_c1(g)
        c2, t2, res = solve_c2_t2(g, guess) if guess else solve_c2_t2(g)
        guess = (c2, t2)
        rows.append({"g": g, "c1": c1, "c2": c2, "t2": t2, "residuals": list(res)})
    return rows
