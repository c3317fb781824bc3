"""Hyperbolic trigonometry for right-angled polygons and collars.

All functions are pure and work on plain floats: lengths in hyperbolic units,
angles in radians.  Inputs outside the domain of an identity raise
:class:`HyperbolicDomainError` so callers can tell "no such polygon" apart
from a numerical failure.
"""
import math

__all__ = [
    "HyperbolicDomainError",
    "right_triangle_hyp",
    "trirectangle_angle",
    "trirectangle_side",
    "pentagon_side",
    "hexagon_side",
    "pants_seam",
    "seam_half",
    "collar_angle",
    "collar_width",
    "maskit_bounds",
]


class HyperbolicDomainError(ValueError):
    """The requested hyperbolic polygon or quantity does not exist."""


def _length(x, name="length"):
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise HyperbolicDomainError(f"{name} must be a positive finite length, got {x!r}")
    return x


def _angle(x, name="angle", upper=math.pi):
    x = float(x)
    if not (0.0 < x < upper):
        raise HyperbolicDomainError(f"{name} must lie in (0, {upper:g}), got {x!r}")
    return x


def right_triangle_hyp(alpha, beta):
    """Hypotenuse of a right triangle with acute angles ``alpha`` and ``beta``.

    Uses ``cosh c = cot(alpha) cot(beta)``.
    """
    alpha = _angle(alpha, "alpha")
    beta = _angle(beta, "beta")
    rhs = 1.0 / (math.tan(alpha) * math.tan(beta))
    if not rhs > 1.0 + 1e-15:
        raise HyperbolicDomainError(
            f"cot(alpha)*cot(beta) = {rhs!r} <= 1: angle sum too large for a hyperbolic right triangle"
        )
    return math.acosh(rhs)


def trirectangle_angle(a, b):
    """Acute angle of a trirectangle whose sides opposite to it are ``a`` and ``b``."""
    a = _length(a, "a")
    b = _length(b, "b")
    prod = math.sinh(a) * math.sinh(b)
    if prod >= 1.0:
        raise HyperbolicDomainError(f"sinh(a)*sinh(b) = {prod!r} >= 1: no trirectangle")
    return math.acos(prod)


def trirectangle_side(phi, a):
    """Inverse use of the trirectangle identity: the side ``b`` with ``cos phi = sinh a sinh b``."""
    phi = _angle(phi, "phi", math.pi / 2)
    a = _length(a, "a")
    return math.asinh(math.cos(phi) / math.sinh(a))


def pentagon_side(a, b):
    """Side of a right-angled pentagon opposite the two adjacent sides ``a``, ``b``.

    ``cosh c = sinh a sinh b``.
    """
    a = _length(a, "a")
    b = _length(b, "b")
    prod = math.sinh(a) * math.sinh(b)
    if not prod > 1.0:
        raise HyperbolicDomainError(f"sinh(a)*sinh(b) = {prod!r} <= 1: no right-angled pentagon")
    return math.acosh(prod)


def hexagon_side(a, b, gamma):
    """Side of a right-angled hexagon opposite ``gamma``.

    ``a`` and ``b`` are the sides adjacent to ``gamma``'s neighbours, i.e. the
    alternating triple ``a, gamma, b`` is read with ``gamma`` in the middle:
    ``cosh c = sinh a sinh b cosh gamma - cosh a cosh b``.
    """
    a = _length(a, "a")
    b = _length(b, "b")
    gamma = _length(gamma, "gamma")
    rhs = math.sinh(a) * math.sinh(b) * math.cosh(gamma) - math.cosh(a) * math.cosh(b)
    if not rhs > 1.0:
        raise HyperbolicDomainError(f"hexagon right-hand side {rhs!r} <= 1: no such hexagon")
    return math.acosh(rhs)


def pants_seam(half_a, half_b, half_opposite):
    """Seam joining the cuff halves ``half_a`` and ``half_b`` of a pair of pants.

    This is the hexagon identity solved for the middle side: the hexagon of a
    pair of pants has alternating sides (cuff halves) and the seam between
    ``half_a`` and ``half_b`` is opposite ``half_opposite``.
    """
    a = _length(half_a, "half_a")
    b = _length(half_b, "half_b")
    c = _length(half_opposite, "half_opposite")
    return math.acosh((math.cosh(c) + math.cosh(a) * math.cosh(b)) / (math.sinh(a) * math.sinh(b)))


def seam_half(c, n):
    """Half the seam length of the n-holed sphere with all cuffs of length ``c``.

    The sphere is two right-angled 2n-gons with an order-n rotation; the
    trirectangle cut out by the rotation centre gives
    ``sinh(s/2) sinh(c/4) = cos(pi/n)``.
    """
    c = _length(c, "c")
    n = int(n)
    if n < 3:
        raise HyperbolicDomainError(f"n must be >= 3, got {n}")
    return math.asinh(math.cos(math.pi / n) / math.sinh(c / 4.0))


def collar_angle(w):
    """Collar angle ``theta`` of a collar of width ``w``: ``cos theta = 1/cosh w``."""
    w = _length(w, "w")
    return math.acos(1.0 / math.cosh(w))


def collar_width(theta):
    """Collar width for angle ``theta`` in (0, pi/2): ``w = arccosh(1/cos theta)``."""
    theta = _angle(theta, "theta", math.pi / 2)
    return math.acosh(1.0 / math.cos(theta))


def maskit_bounds(length, theta):
    """Extremal length sandwich ``(l/pi, l/(2 theta))`` for a geodesic with collar angle ``theta``."""
    length = _length(length, "length")
    theta = _angle(theta, "theta", math.pi / 2)
    return length / math.pi, length / (2.0 * theta)
