"""SL(2,R) helpers on the upper half plane.

A *frame* is a matrix ``F``: it stands for the point ``F(i)`` together with
the unit tangent obtained by pushing the upward direction at ``i`` through
``F``.  Walking forward by ``l`` is right-multiplication by ``translation(l)``
and turning left by ``phi`` is right-multiplication by ``rotation(phi)``.
"""
import math

import numpy as np

DET_TOL = 1e-9


class NonHyperbolicError(ArithmeticError):
    """A holonomy that should be hyperbolic has ``|trace| <= 2``."""


def translation(length):
    h = 0.5 * length
    return np.array([[math.exp(h), 0.0], [0.0, math.exp(-h)]])


def rotation(phi):
    c, s = math.cos(0.5 * phi), math.sin(0.5 * phi)
    return np.array([[c, s], [-s, c]])


def inv(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


# ad - bc is only known to about DET_RESOLUTION * (|ad| + |bc|); a correction
# smaller than that would inject cancellation noise instead of removing drift
DET_RESOLUTION = 8 * np.finfo(float).eps


def _renorm_factor(ps, qr):
    """``1/sqrt(det)`` when the drift of ``det`` from 1 is resolved, else ``None``."""
    det = ps - qr
    if abs(det - 1.0) <= DET_RESOLUTION * (abs(ps) + abs(qr)):
        return None
    if det <= 0:
        raise ArithmeticError(f"matrix left SL(2,R): det = {det!r}")
    return 1.0 / math.sqrt(det)


def renormalize(m):
    k = _renorm_factor(m[0, 0] * m[1, 1], m[0, 1] * m[1, 0])
    return m if k is None else m * k


def mul(*ms, renorm=True):
    """Product of 2x2 matrices, renormalised to unit determinant when the drift is measurable.

    Pass ``renorm=False`` for long products of unit-determinant factors: their
    true drift is tiny, and once an intermediate has large entries its computed
    determinant is rounding noise that a later renormalisation would spread
    into every entry.
    """
    # scalar arithmetic: numpy call overhead dominates at this size
    (p, q), (r, s) = ms[0].tolist()
    for m in ms[1:]:
        (a, b), (c, d) = m.tolist()
        p, q, r, s = p * a + q * c, p * b + q * d, r * a + s * c, r * b + s * d
    k = _renorm_factor(p * s, q * r) if renorm else None
    if k is not None:
        p, q, r, s = p * k, q * k, r * k, s * k
    return np.array([[p, q], [r, s]])


def apply(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def dist(z, w):
    arg = 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
    return math.acosh(max(arg, 1.0))


def cosh_displacement(m):
    """``cosh d(i, m(i))`` for ``m`` in SL(2,R)."""
    return 0.5 * float(np.sum(m * m))


def translation_length(m):
    tr = abs(m[0, 0] + m[1, 1])
    # a trace within rounding of 2 cannot be told apart from a parabolic or the identity
    if tr <= 2.0 + DET_RESOLUTION * (abs(m[0, 0]) + abs(m[1, 1])):
        raise NonHyperbolicError(f"|trace| = {tr!r} <= 2")
    return 2.0 * math.acosh(0.5 * tr)


def to_identity_frame(z):
    """Matrix sending the point ``z`` to ``i`` (no rotation about the result)."""
    x, y = z.real, z.imag
    r = math.sqrt(y)
    return np.array([[1.0 / r, -x / r], [0.0, r]])


def frame_between(p, q):
    """Frame based at ``p`` pointing towards ``q``."""
    a = to_identity_frame(p)
    w = apply(a, q)
    u = (w - 1j) / (w + 1j)
    return mul(inv(a), rotation(math.atan2(u.imag, u.real)))


def point_to_line_matrix(m):
    """Matrix sending the axis of the hyperbolic element ``m`` onto the imaginary axis.

    Orientation: the attracting fixed point goes to infinity, so the image of
    the axis points upward in the direction of translation.
    """
    vals, vecs = np.linalg.eig(m)
    if np.iscomplexobj(vals) and np.max(np.abs(vals.imag)) > 0:
        raise NonHyperbolicError("element has complex eigenvalues")
    vals = vals.real
    vecs = vecs.real
    order = np.argsort(-np.abs(vals))
    attract, repel = vecs[:, order[0]], vecs[:, order[1]]
    k_inv = np.column_stack([attract, repel])
    if np.linalg.det(k_inv) < 0:
        k_inv[:, 1] = -k_inv[:, 1]
    return inv(renormalize(k_inv))


def signed_line_distance(k, z):
    """Signed ``sinh`` of the distance from ``z`` to the line ``k^{-1}(iR)``.

    Negative values lie to the left of the upward-oriented image line.
    """
    w = apply(k, z)
    return w.real / w.imag


def to_hyperboloid(z):
    x, y = z.real, z.imag
    s = x * x + y * y
    return np.array([(s + 1.0) / (2.0 * y), (s - 1.0) / (2.0 * y), x / y])


def from_hyperboloid(v):
    t, u, w = v
    y = 1.0 / (t - u)
    return complex(w * y, y)


def centroid(points):
    """Hyperboloid centre of mass of a finite point set."""
    acc = sum(to_hyperboloid(p) for p in points)
    norm = math.sqrt(acc[0] ** 2 - acc[1] ** 2 - acc[2] ** 2)
    return from_hyperboloid(acc / norm)


def sign_normalize(m):
    """Pick the representative of ``+-m`` whose first significant entry is positive."""
    for v in m.flat:
        if abs(v) > 1e-9:
            return m if v > 0 else -m
    return m
