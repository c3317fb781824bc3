"""Brute-force enumeration of closed geodesics up to a length cutoff.

Search: fix a base tile ``P`` (every polygon of the decomposition in turn)
with centre ``x`` and circumradius ``r``.  If the axis of a group element
``h`` with translation length ``l`` passes through ``P`` at a point ``p``, the
geodesic segment ``[p, h p]`` has length ``l`` and every tile meeting it lies
within ``l + r + r_T`` of ``x`` (``r_T`` the radius of that tile).  Consecutive
tiles along the segment share a point, so a breadth-first walk over tiles
sharing a point with their predecessor, expanding only tiles ``T`` with
``d(x, centre T) - r_T <= L + r``, reaches the translate ``h P`` for every
such ``h`` with ``l <= L``.  Every closed geodesic has a lift crossing some
base tile, so looping over all base tiles is complete.

Identification: the lifts of one closed geodesic crossing tile ``P`` are the
distinct segments of that geodesic inside ``P``.  For each candidate the axis
is traced through the tiling for one period, recording the axis in local
polygon coordinates; two candidates are the same closed geodesic iff the
base-tile axis of one appears in the trace of the other.  Powers share an
axis with their root and are discarded in favour of the shortest element.
"""
from dataclasses import dataclass
import csv
import math
import os

import numpy as np

from . import mobius as mb
from .tiling import canonical_cyclic_word, cyclic_reduce, format_word, parse_word

AXIS_TOL = 1e-7
LENGTH_TOL = 1e-9
DEFAULT_BUDGET = int(os.environ.get("SYSTOLIC_ATLAS_TILE_BUDGET", 400000))


class EnumerationBudgetError(RuntimeError):
    """The tile search exceeded its budget before the cutoff was covered."""


@dataclass(frozen=True)
class GeodesicRecord:
    word: str
    length: float


def geodesic_length(rep, word):
    """Translation length ``2 arccosh(|tr|/2)`` of the holonomy of ``word``."""
    if isinstance(word, str):
        word = parse_word(word)
    # the trace is a class function: cyclic reduction is exact and keeps entries small
    word = cyclic_reduce(word)
    if not word:
        raise mb.NonHyperbolicError("identity word has no translation length")
    return mb.translation_length(rep.word_matrix(word))


def _axis_involution(h):
    """Traceless matrix encoding the unoriented axis of ``h`` (sign fixed)."""
    x = h - mb.inv(h)
    det = x[0, 0] * x[1, 1] - x[0, 1] * x[1, 0]
    return mb.sign_normalize(x / math.sqrt(-det))


def _axis_interval(kmat, poly):
    """Interval of ``log y`` for which ``iy`` lies in the placed polygon ``kmat(poly)``.

    ``kmat`` maps polygon coordinates into coordinates where the axis is the
    imaginary axis.  Returns ``(lo, hi, exit_edge)``.
    """
    lo, hi, exit_edge = -math.inf, math.inf, None
    for k, frame in enumerate(poly.frames):
        n = mb.inv(kmat @ frame)
        a, b, c, d = n[0, 0], n[0, 1], n[1, 0], n[1, 1]
        p, q = a * c, b * d  # inside iff p y^2 + q <= 0
        if abs(p) < 1e-8 and abs(q) < 1e-8:
            continue  # the axis runs along this edge
        if p > 0 and q < 0:
            u = 0.5 * math.log(-q / p)
            if u < hi:
                hi, exit_edge = u, k
        elif p < 0 and q > 0:
            lo = max(lo, 0.5 * math.log(-q / p))
        elif p >= 0 and q >= 0 and p + q > 0:
            return math.inf, -math.inf, None
    return lo, hi, exit_edge


class _AxisIndex:
    """Approximate lookup of (polygon, axis) keys with tolerance ``AXIS_TOL``."""

    def __init__(self, cell=1e-4):
        self.cell = cell
        self.data = {}

    def _cells(self, x):
        return tuple(int(math.floor(v / self.cell)) for v in (x[0, 0], x[0, 1], x[1, 0]))

    def find(self, q, x):
        c = self._cells(x)
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    for y, val in self.data.get((q, c[0] + da, c[1] + db, c[2] + dc), ()):
                        if np.max(np.abs(y - x)) < AXIS_TOL:
                            return val
        return None

    def add(self, q, x, val):
        c = self._cells(x)
        self.data.setdefault((q, *c), []).append((x, val))


def _tile_key(q, m):
    m = mb.sign_normalize(m)
    return (q, *np.round(m.ravel() * 1e6).astype(np.int64).tolist())


def _candidates_from(rep, q0, cutoff, budget, counter):
    """Group elements whose axis crosses the base tile ``q0``, with length <= cutoff."""
    base = rep.base[q0]
    x0 = mb.apply(base, 1j)
    r0 = rep.polygons[q0].radius
    reach = cutoff + r0 + 1e-9
    seen = {_tile_key(q0, base)}
    frontier = [(q0, base, [])]
    found = []
    while frontier:
        nxt = []
        for q, m, path in frontier:
            for loc, nq, step in rep.neighbours(q):
                nm = mb.mul(m, loc)
                key = _tile_key(nq, nm)
                if key in seen:
                    continue
                seen.add(key)
                counter[0] += 1
                if counter[0] > budget:
                    raise EnumerationBudgetError(
                        f"tile budget {budget} exhausted at cutoff {cutoff}; raise the budget or lower the cutoff"
                    )
                if mb.dist(x0, mb.apply(nm, 1j)) - rep.polygons[nq].radius > reach:
                    continue
                npath = path + step
                nxt.append((nq, nm, npath))
                if nq == q0:
                    h = mb.mul(nm, rep.base_inv[q0])
                    if abs(h[0, 0] + h[1, 1]) <= 2.0:
                        continue
                    length = mb.translation_length(h)
                    if length > cutoff + LENGTH_TOL:
                        continue
                    kmat = mb.mul(mb.point_to_line_matrix(h), base)
                    lo, hi, _ = _axis_interval(kmat, rep.polygons[q0])
                    if hi - lo <= 1e-9:
                        continue
                    found.append((length, h, rep.path_word(npath)))
        frontier = nxt
    return found


def _trace(rep, q0, h, length):
    """Local axes of a closed geodesic in every tile it crosses during one period.

    Starts from the base tile of ``q0`` (whose axis segment must have positive
    length).  Tiles having the axis on their boundary are recorded on both sides.
    """
    kline = mb.point_to_line_matrix(h)
    kline_inv = mb.inv(kline)
    xh = _axis_involution(h)
    m = mb.mul(kline, rep.base[q0])
    lo0, hi, _ = _axis_interval(m, rep.polygons[q0])
    end = lo0 + length - 1e-7
    q = q0
    out = []
    seen = set()

    def record(q, m):
        key = _tile_key(q, m)
        if key not in seen:
            seen.add(key)
            world = mb.mul(kline_inv, m)
            out.append((q, mb.sign_normalize(mb.inv(world) @ xh @ world)))

    record(q, m)
    for _ in range(100000):
        best = None
        for loc, nq, _ in rep.neighbours(q):
            nm = mb.mul(m, loc)
            nlo, nhi, _ = _axis_interval(nm, rep.polygons[nq])
            if nhi - nlo <= 1e-9 or nhi <= lo0 + 1e-9 or nlo >= end:
                continue
            record(nq, nm)
            if nlo <= hi + 1e-8 and nhi > hi + 1e-9 and (best is None or nhi > best[0]):
                best = (nhi, nq, nm)
        if best is None:
            return out
        hi, q, m = best
    raise ArithmeticError("axis trace did not close")


def enumerate_geodesics(rep, cutoff, budget=None):
    """Unoriented primitive closed geodesics of length ``<= cutoff``.

    Returns a list of :class:`GeodesicRecord` sorted by length then word.  Each
    record's word is the shortest cyclically reduced word found for the class,
    minimised over rotations and inversion.
    """
    cutoff = float(cutoff)
    if not cutoff > 0:
        return []
    budget = DEFAULT_BUDGET if budget is None else int(budget)
    counter = [0]
    cands = []
    for q0 in range(len(rep.polygons)):
        for length, h, word in _candidates_from(rep, q0, cutoff, budget, counter):
            cands.append((q0, length, h, word))

    # primitive roots: shortest element per (tile, axis)
    roots = _AxisIndex()
    root_list = []
    for q0, length, h, word in sorted(cands, key=lambda c: c[1]):
        x = _axis_involution(mb.mul(rep.base_inv[q0], h, rep.base[q0]))
        hit = roots.find(q0, x)
        if hit is None:
            roots.add(q0, x, len(root_list))
            root_list.append([q0, length, h, [word], x])
        elif abs(root_list[hit][1] - length) < LENGTH_TOL:
            root_list[hit][3].append(word)

    # classes: trace each unassigned root and absorb every root on its trace
    owner = [None] * len(root_list)
    classes = []
    for i, (q0, length, h, words, _) in enumerate(root_list):
        if owner[i] is not None:
            continue
        cid = len(classes)
        classes.append([length, list(words)])
        owner[i] = cid
        for q, x in _trace(rep, q0, h, length):
            j = roots.find(q, x)
            if j is not None and owner[j] is None and abs(root_list[j][1] - length) < 1e-7:
                owner[j] = cid
                classes[cid][1].extend(root_list[j][3])

    out = []
    for length, words in classes:
        best = min((canonical_cyclic_word(w) for w in words), key=lambda w: (len(w), tuple((abs(v), v < 0) for v in w)))
        out.append(GeodesicRecord(format_word(best), length))
    # lengths equal up to round-off tie-break on the word
    out.sort(key=lambda r: (round(r.length, 9), r.word, r.length))
    return out


def systole_bruteforce(rep, cutoff, budget=None):
    """``(systole, number of minimising classes)`` from an enumeration up to ``cutoff``."""
    recs = enumerate_geodesics(rep, cutoff, budget)
    if not recs:
        raise ValueError(f"no closed geodesic of length <= {cutoff}; raise the cutoff above the systole")
    sys_len = recs[0].length
    count = sum(1 for r in recs if r.length - sys_len <= LENGTH_TOL)
    return sys_len, count


def records_to_csv(records, fh):
    """Write ``word,length`` rows with 15 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["word", "length"])
    for r in records:
        w.writerow([r.word, f"{r.length:.15g}"])
