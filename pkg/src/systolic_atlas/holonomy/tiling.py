"""Fenchel-Nielsen data to a Fuchsian representation.

Every piece of a pants-type decomposition (a pair of pants, or an n-holed
sphere with an order-n rotation) is cut along its seams into two mirror
right-angled 2n-gons, F and B.  Edges of these polygons alternate between
cuff arcs (half a cuff) and seams.  The *dual graph* has one node per polygon
and one edge per glued polygon side pair:

* seam ``i`` of a piece glues edge ``2i+1`` of F to the matching edge of B;
* every cuff gluing glues the cuff arc of F on one side to the cuff arc of F on
  the other side, shifted along the cuff by the twist.

Placing polygon 0 at the identity and developing along a spanning tree of the
dual graph gives base placements ``B_Q``.  Each non-tree dual edge ``e: P -> Q``
with gluing matrix ``G_e`` yields a generator ``B_P G_e B_Q^{-1}``; the
holonomy of any dual path is the product of the generators it crosses.

Twist convention: ``twist = 0`` matches the start of the F arc on one side with
the end of the F arc on the other side, so that seams on both sides meet.  A
shift by half the cuff length matches seams the other way round.
"""
from collections import deque
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .. import hyp_trig
from . import mobius as mb

CLOSURE_TOL = 1e-9


class ConstructionError(ValueError):
    """The Fenchel-Nielsen data does not describe a valid closed surface."""


@dataclass(frozen=True)
class CuffGluing:
    piece_a: int
    cuff_a: int
    piece_b: int
    cuff_b: int
    twist: float = 0.0


@dataclass(frozen=True)
class FNSurface:
    """Pieces given by their cuff lengths, plus the cuff gluings with twists.

    A piece with three cuffs is a pair of pants of arbitrary cuff lengths; a
    piece with ``n > 3`` cuffs must have all cuffs equal (the rotationally
    symmetric n-holed sphere).
    """

    cuff_lengths: tuple
    gluings: tuple

    def __post_init__(self):
        object.__setattr__(self, "cuff_lengths", tuple(tuple(float(x) for x in p) for p in self.cuff_lengths))
        object.__setattr__(self, "gluings", tuple(self.gluings))
        self.validate()

    @property
    def genus(self):
        chi = sum(2 - len(p) for p in self.cuff_lengths)
        return (2 - chi) // 2

    def validate(self):
        if not self.cuff_lengths:
            raise ConstructionError("surface has no pieces")
        used = {}
        for p, lengths in enumerate(self.cuff_lengths):
            if len(lengths) < 3:
                raise ConstructionError(f"piece {p} has {len(lengths)} cuffs; need at least 3")
            for x in lengths:
                if not (math.isfinite(x) and x > 0):
                    raise ConstructionError(f"piece {p} has invalid cuff length {x!r}")
            if len(lengths) > 3 and max(lengths) - min(lengths) > 1e-12 * max(lengths):
                raise ConstructionError(f"piece {p}: unequal cuffs are only supported on pants")
        for e, gl in enumerate(self.gluings):
            for slot in ((gl.piece_a, gl.cuff_a), (gl.piece_b, gl.cuff_b)):
                p, i = slot
                if not (0 <= p < len(self.cuff_lengths) and 0 <= i < len(self.cuff_lengths[p])):
                    raise ConstructionError(f"gluing {e} refers to missing cuff {slot}")
                if slot in used:
                    raise ConstructionError(f"cuff {slot} glued twice (gluings {used[slot]} and {e})")
                used[slot] = e
            la = self.cuff_lengths[gl.piece_a][gl.cuff_a]
            lb = self.cuff_lengths[gl.piece_b][gl.cuff_b]
            if abs(la - lb) > 1e-12 * max(la, lb):
                raise ConstructionError(f"gluing {e} joins cuffs of lengths {la} and {lb}")
            if not math.isfinite(gl.twist):
                raise ConstructionError(f"gluing {e} has non-finite twist")
        total = sum(len(p) for p in self.cuff_lengths)
        if len(used) != total:
            raise ConstructionError(f"{total - len(used)} cuffs left unglued: surface is not closed")
        # connectivity
        adj = {p: set() for p in range(len(self.cuff_lengths))}
        for gl in self.gluings:
            adj[gl.piece_a].add(gl.piece_b)
            adj[gl.piece_b].add(gl.piece_a)
        seen, todo = {0}, [0]
        while todo:
            for q in adj[todo.pop()]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        if len(seen) != len(self.cuff_lengths):
            raise ConstructionError("surface is disconnected")

    def with_twists(self, twists):
        gl = tuple(
            CuffGluing(g.piece_a, g.cuff_a, g.piece_b, g.cuff_b, float(t)) for g, t in zip(self.gluings, twists)
        )
        return FNSurface(self.cuff_lengths, gl)


@dataclass
class Polygon:
    """Right-angled polygon in local coordinates with its centre at ``i``."""

    piece: int
    side: str  # "F" or "B"
    sides: np.ndarray
    labels: list  # ("arc", cuff) or ("seam", i) meaning seam between cuffs i and i+1
    frames: list  # frame at the start vertex of each edge, pointing along it

    def __post_init__(self):
        self.arc_edge = {lab[1]: k for k, lab in enumerate(self.labels) if lab[0] == "arc"}
        self.seam_edge = {lab[1]: k for k, lab in enumerate(self.labels) if lab[0] == "seam"}

    @cached_property
    def inv_frames(self):
        return [mb.inv(f) for f in self.frames]

    @cached_property
    def _inv_stack(self):
        return np.array(self.inv_frames)

    @cached_property
    def vertices(self):
        return [mb.apply(f, 1j) for f in self.frames]

    @cached_property
    def radius(self):
        return max(mb.dist(1j, v) for v in self.vertices)

    def edge_values(self, z):
        """Signed sinh-distances of ``z`` to each edge line; ``<= 0`` means inside."""
        st = self._inv_stack
        w = (st[:, 0, 0] * z + st[:, 0, 1]) / (st[:, 1, 0] * z + st[:, 1, 1])
        return w.real / w.imag

    def contains(self, z, tol=1e-10):
        return float(np.max(self.edge_values(z))) <= tol


def _labels(n, side):
    out = []
    if side == "F":
        for i in range(n):
            out += [("arc", i), ("seam", i)]
    else:
        for m in range(n):
            out += [("arc", (-m) % n), ("seam", (-m - 1) % n)]
    return out


def _turtle(sides):
    frames = [np.eye(2)]
    quarter = mb.rotation(math.pi / 2)
    for s in sides:
        frames.append(mb.mul(frames[-1], mb.translation(s), quarter))
    closing = frames.pop()
    resid = min(np.max(np.abs(closing - np.eye(2))), np.max(np.abs(closing + np.eye(2))))
    return frames, resid


def _regular_frames(arc, seam, n):
    """Frames of the 2n-gon with alternating sides ``arc``, ``seam`` and an order-n rotation."""
    step = mb.mul(mb.translation(arc), mb.rotation(math.pi / 2), mb.translation(seam), mb.rotation(math.pi / 2))
    tr = abs(step[0, 0] + step[1, 1])
    resid = abs(tr - 2.0 * math.cos(math.pi / n))
    if resid > CLOSURE_TOL:
        raise ConstructionError(f"regular {2 * n}-gon does not close (trace residual {resid:.3e})")
    # centre: walk half the arc, turn inwards, walk the distance to the arc line
    # (Lambert quadrilateral: tanh h = tanh(seam/2) cosh(arc/2))
    h = math.atanh(math.tanh(seam / 2.0) * math.cosh(arc / 2.0))
    to_i = mb.inv(mb.mul(mb.translation(arc / 2.0), mb.rotation(math.pi / 2), mb.translation(h)))
    local_step = mb.mul(to_i, step, mb.inv(to_i))
    theta = math.copysign(2.0 * math.pi / n, local_step[0, 1] * local_step[0, 0])
    frames = []
    for j in range(n):
        f_arc = mb.mul(mb.rotation(j * theta), to_i)
        frames += [f_arc, mb.mul(f_arc, mb.translation(arc), mb.rotation(math.pi / 2))]
    return frames


def build_piece_polygons(p, lengths):
    """The F and B polygons of piece ``p`` with the given cuff lengths."""
    n = len(lengths)
    halves = [x / 2.0 for x in lengths]
    regular = max(lengths) - min(lengths) <= 1e-12 * max(lengths)
    if regular:
        seam = 2.0 * hyp_trig.seam_half(lengths[0], n)
        seams = [seam] * n
    else:
        seams = [hyp_trig.pants_seam(halves[i], halves[(i + 1) % 3], halves[(i + 2) % 3]) for i in range(3)]
    out = []
    shared = _regular_frames(halves[0], seams[0], n) if regular else None
    for side in ("F", "B"):
        labels = _labels(n, side)
        sides = np.array([halves[i] if kind == "arc" else seams[i] for kind, i in labels])
        if regular:
            frames = shared
        else:
            frames, resid = _turtle(sides)
            if resid > CLOSURE_TOL:
                raise ConstructionError(f"piece {p}: hexagon does not close (residual {resid:.3e})")
            centre = mb.centroid([mb.apply(f, 1j) for f in frames])
            to_i = mb.to_identity_frame(centre)
            frames = [mb.mul(to_i, f) for f in frames]
        out.append(Polygon(p, side, sides, labels, frames))
    return out


@dataclass
class DualEdge:
    src: int
    src_edge: int
    dst: int
    dst_edge: int
    glue: tuple  # (src polygon, dst polygon, shift): the matrix is built on first use
    kind: str  # "seam" or "cuff"
    ref: tuple  # (piece, seam) or (gluing index,)

    @cached_property
    def matrix(self):
        pa, pb, shift = self.glue
        return _glue_matrix(pa, self.src_edge, pb, self.dst_edge, shift)


def _glue_matrix(pa, ka, pb, kb, shift=0.0):
    length = pa.sides[ka]
    return mb.mul(pa.frames[ka], mb.translation(length), mb.rotation(math.pi), mb.translation(shift), pb.inv_frames[kb])


def _gen_name(gid):
    return f"x{gid}" if gid > 0 else f"X{-gid}"


def reduce_word(word):
    """Free reduction of a word given as signed generator ids."""
    out = []
    for w in word:
        if out and out[-1] == -w:
            out.pop()
        else:
            out.append(w)
    return tuple(out)


def cyclic_reduce(word):
    w = list(reduce_word(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def canonical_cyclic_word(word):
    """Cyclically reduced, minimal rotation over the word and its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    inv_w = tuple(-x for x in reversed(w))

    def key(x):
        return tuple((abs(v), v < 0) for v in x)

    rots = [w[i:] + w[:i] for i in range(len(w))] + [inv_w[i:] + inv_w[:i] for i in range(len(w))]
    return min(rots, key=key)


def format_word(word):
    return ".".join(_gen_name(g) for g in word) if word else "e"


def parse_word(text):
    text = text.strip()
    if text in ("", "e"):
        return ()
    out = []
    for tok in text.replace(" ", "").split("."):
        if len(tok) < 2 or tok[0] not in "xX" or not tok[1:].isdigit():
            raise ValueError(f"bad generator token {tok!r}")
        g = int(tok[1:])
        out.append(g if tok[0] == "x" else -g)
    return tuple(out)


class HolonomyRep:
    """Generators, base placements and the polygon tiling of one marked surface."""

    def __init__(self, surface):
        self.surface = surface
        self.polygons = []
        for p, lengths in enumerate(surface.cuff_lengths):
            self.polygons += build_piece_polygons(p, lengths)
        self.edges = []
        # polygon-edge slot -> (dual edge id, direction)
        self.slot = {}
        for p, lengths in enumerate(surface.cuff_lengths):
            f, b = self.polygons[2 * p], self.polygons[2 * p + 1]
            for i in range(len(lengths)):
                kf, kb = f.seam_edge[i], b.seam_edge[i]
                self._add_edge(2 * p, kf, 2 * p + 1, kb, (f, b, 0.0), "seam", (p, i))
        for e, gl in enumerate(surface.gluings):
            pa, pb = self.polygons[2 * gl.piece_a], self.polygons[2 * gl.piece_b]
            ka, kb = pa.arc_edge[gl.cuff_a], pb.arc_edge[gl.cuff_b]
            self._add_edge(2 * gl.piece_a, ka, 2 * gl.piece_b, kb, (pa, pb, gl.twist), "cuff", (e,))
        self._spanning_tree()
        self._arc_neighbours = {}

    def _add_edge(self, src, ks, dst, kd, glue, kind, ref):
        eid = len(self.edges)
        self.edges.append(DualEdge(src, ks, dst, kd, glue, kind, ref))
        self.slot[(src, ks)] = (eid, 1)
        self.slot[(dst, kd)] = (eid, -1)

    def _spanning_tree(self):
        n = len(self.polygons)
        adj = {q: [] for q in range(n)}
        for eid, e in enumerate(self.edges):
            adj[e.src].append((eid, 1, e.dst))
            adj[e.dst].append((eid, -1, e.src))
        self.base = [None] * n
        self.base[0] = np.eye(2)
        tree = set()
        todo = deque([0])
        while todo:
            q = todo.popleft()
            for eid, d, r in sorted(adj[q]):
                if self.base[r] is None:
                    self.base[r] = mb.mul(self.base[q], self.step_matrix(eid, d))
                    tree.add(eid)
                    todo.append(r)
        self.gen_of_edge = {}
        self.generator_edges = []
        for eid in range(len(self.edges)):
            if eid not in tree:
                self.generator_edges.append(eid)
                self.gen_of_edge[eid] = len(self.generator_edges)
        self._generators = {}
        self.base_inv = [mb.inv(b) for b in self.base]

    @property
    def n_generators(self):
        return len(self.generator_edges)

    def generator(self, gid):
        """Matrix of generator ``gid`` (1-based), built on first use."""
        m = self._generators.get(gid)
        if m is None:
            e = self.edges[self.generator_edges[gid - 1]]
            m = mb.mul(self.base[e.src], e.matrix, self.base_inv[e.dst])
            self._generators[gid] = m
        return m

    @property
    def generators(self):
        return [self.generator(i) for i in range(1, self.n_generators + 1)]

    # ---------------------------------------------------------------- paths
    def step_matrix(self, eid, direction):
        m = self.edges[eid].matrix
        return m if direction > 0 else mb.inv(m)

    def path_word(self, path):
        word = []
        for eid, d in path:
            g = self.gen_of_edge.get(eid)
            if g:
                word.append(g if d > 0 else -g)
        return reduce_word(word)

    def word_matrix(self, word):
        factors = [np.eye(2)]
        for g in word:
            if g == 0 or abs(g) > self.n_generators:
                raise ValueError(f"unknown generator {g}")
            x = self.generator(abs(g))
            factors.append(x if g > 0 else mb.inv(x))
        return mb.mul(*factors, renorm=False)

    def path_matrix(self, start, path):
        """Element of the group carried by a dual path starting at polygon ``start``."""
        m = self.base[start]
        q = start
        for eid, d in path:
            e = self.edges[eid]
            src = e.src if d > 0 else e.dst
            if src != q:
                raise ValueError("path is not connected")
            m = mb.mul(m, self.step_matrix(eid, d))
            q = e.dst if d > 0 else e.src
        return mb.mul(m, self.base_inv[q]), q

    def cross(self, q, k):
        """Dual edge crossed when leaving polygon ``q`` through its edge ``k``."""
        eid, d = self.slot[(q, k)]
        e = self.edges[eid]
        return eid, d, (e.dst, e.dst_edge) if d > 0 else (e.src, e.src_edge)

    # ----------------------------------------------------------- cuff loops
    def cuff_loop_path(self, piece, cuff):
        """Dual path from polygon F of ``piece`` once around ``cuff`` (piece on the left)."""
        f = 2 * piece
        eid1, d1, (b, _) = self.cross(f, self.polygons[f].seam_edge[cuff])
        n = len(self.surface.cuff_lengths[piece])
        eid2, d2, (f2, _) = self.cross(b, self.polygons[b].seam_edge[(cuff - 1) % n])
        assert f2 == f
        return [(eid1, d1), (eid2, d2)]

    def cuff_word(self, gluing, side="a"):
        gl = self.surface.gluings[gluing]
        if side == "a":
            return self.path_word(self.cuff_loop_path(gl.piece_a, gl.cuff_a))
        return self.path_word(self.cuff_loop_path(gl.piece_b, gl.cuff_b))

    def relators(self):
        """One relator per cuff: the cuff loop seen from both sides agrees."""
        out = []
        for e, gl in enumerate(self.surface.gluings):
            eid = next(i for i, d in enumerate(self.edges) if d.kind == "cuff" and d.ref == (e,))
            path = (
                self.cuff_loop_path(gl.piece_a, gl.cuff_a)
                + [(eid, 1)]
                + self.cuff_loop_path(gl.piece_b, gl.cuff_b)
                + [(eid, -1)]
            )
            out.append(self.path_word(path))
        return out

    # ------------------------------------------------------ arc neighbours
    def _line_walk(self, q, k, steps):
        """Tiles along the cuff line of arc ``k`` of polygon ``q``, on its own side.

        Returns ``[(r, polygon, arc_edge, placement, path)]`` for ``|r| <= steps``;
        positive ``r`` continues in the arc's direction.
        """
        out = [(0, q, k, np.eye(2), [])]
        for direction in (1, -1):
            cur_q, cur_k, m, path = q, k, np.eye(2), []
            for r in range(1, steps + 1):
                poly = self.polygons[cur_q]
                nedge = len(poly.sides)
                seam_k = (cur_k + 1) % nedge if direction > 0 else (cur_k - 1) % nedge
                eid, d, (nq, nk) = self.cross(cur_q, seam_k)
                m = mb.mul(m, self.step_matrix(eid, d))
                path = path + [(eid, d)]
                npoly = self.polygons[nq]
                nn = len(npoly.sides)
                cur_q, cur_k = nq, (nk + 1) % nn if direction > 0 else (nk - 1) % nn
                assert npoly.labels[cur_k][0] == "arc"
                out.append((direction * r, cur_q, cur_k, m, path))
        return out

    def arc_neighbours(self, q, k):
        """Tiles across the cuff arc ``k`` of polygon ``q`` meeting the closed arc.

        Each entry is ``(placement, polygon, path, u0, u1)`` where placement is
        relative to ``q`` and ``[u0, u1]`` is the neighbour's arc in the line
        coordinate of ``q``'s arc (0 at the arc start, arc length at its end).
        """
        key = (q, k)
        if key in self._arc_neighbours:
            return self._arc_neighbours[key]
        poly = self.polygons[q]
        cuff = poly.labels[k][1]
        a = poly.sides[k]
        if poly.side == "B":
            # step to the F polygon sharing the start vertex of this arc
            eid0, d0, (fq, _) = self.cross(q, (k - 1) % len(poly.sides))
            pre_m, pre_path = self.step_matrix(eid0, d0), [(eid0, d0)]
        else:
            fq, pre_m, pre_path = q, np.eye(2), []
        fpoly = self.polygons[fq]
        eid, d, (oq, ok) = self.cross(fq, fpoly.arc_edge[cuff])
        gl = self.surface.gluings[self.edges[eid].ref[0]]
        steps = int(abs(gl.twist) / a) + 4
        m0 = mb.mul(pre_m, self.step_matrix(eid, d))
        inv_frame = poly.inv_frames[k]
        out = []
        for _, nq, nk, m, path in self._line_walk(oq, ok, steps):
            place = mb.mul(m0, m)
            npoly = self.polygons[nq]
            rel = mb.mul(inv_frame, place, npoly.frames[nk])
            ws = [mb.apply(end, 1j) for end in (rel, mb.mul(rel, mb.translation(npoly.sides[nk])))]
            us = [math.log(abs(w)) for w in ws]
            u0, u1 = min(us), max(us)
            if u1 >= -1e-9 and u0 <= a + 1e-9:
                if any(abs(w.real) > 1e-7 * abs(w) for w in ws):
                    raise ConstructionError("cuff arcs across a gluing are not collinear")
                out.append((place, nq, pre_path + [(eid, d)] + path, u0, u1))
        out.sort(key=lambda x: x[3])
        self._arc_neighbours[key] = out
        return out

    def neighbours(self, q):
        """All tiles sharing at least one point with polygon ``q``: ``(placement, polygon, path)``."""
        out = []
        for k, (kind, _) in enumerate(self.polygons[q].labels):
            if kind == "seam":
                eid, d, (nq, _) = self.cross(q, k)
                out.append((self.step_matrix(eid, d), nq, [(eid, d)]))
            else:
                out += [(m, nq, path) for m, nq, path, _, _ in self.arc_neighbours(q, k)]
        return out

    # ------------------------------------------------------- curve words
    def locate_step(self, q, m, z):
        """Move from tile ``(q, m)`` to a neighbouring tile containing ``z``."""
        poly = self.polygons[q]
        vals = poly.edge_values(mb.apply(mb.inv(m), z))
        k = int(np.argmax(vals))
        if vals[k] <= 1e-10:
            return q, m, []
        if poly.labels[k][0] == "seam":
            eid, d, (nq, _) = self.cross(q, k)
            options = [(self.step_matrix(eid, d), nq, [(eid, d)])]
        else:
            options = [(pl, nq, path) for pl, nq, path, _, _ in self.arc_neighbours(q, k)]
        best = None
        for attempt in (options, None):
            if attempt is None:
                attempt = self.neighbours(q)
            for loc, nq, path in attempt:
                nm = mb.mul(m, loc)
                val = float(np.max(self.polygons[nq].edge_values(mb.apply(mb.inv(nm), z))))
                if best is None or val < best[0]:
                    best = (val, nq, nm, path)
            if best[0] <= 1e-10:
                break
        if best[0] > 1e-10:
            raise ConstructionError("walk step left the neighbourhood of the current tile")
        return best[1], best[2], best[3]

    def edge_line_word(self, q, k, offset=1e-3, step=0.02, max_length=200.0):
        """Word of the closed curve running along the line of edge ``k`` of polygon ``q``.

        Walks a curve at distance ``offset`` from the edge line, inside ``q``,
        in the edge's direction, until it reaches a translate of ``q`` by an
        element that preserves the line.  Valid when that line closes up into
        a closed geodesic of the surface.
        """
        poly = self.polygons[q]
        frame = poly.frames[k]
        lift = mb.mul(frame, mb.rotation(math.pi / 2), mb.translation(offset), mb.rotation(-math.pi / 2))
        cur, m, path = q, np.eye(2), []
        u = 0.5 * poly.sides[k]
        while u < max_length:
            u += step
            z = mb.apply(mb.mul(lift, mb.translation(u)), 1j)
            cur, m, more = self.locate_step(cur, m, z)
            if not more:
                continue
            path += more
            if cur == q:
                rel = mb.mul(poly.inv_frames[k], m, frame)
                if abs(rel[0, 1]) < 1e-8 and abs(rel[1, 0]) < 1e-8 and abs(rel[0, 0]) > 1.0:
                    return self.path_word(path)
        raise ConstructionError("edge line did not close up within the length limit")


def representation(surface):
    """Build the holonomy representation of an :class:`FNSurface`."""
    return HolonomyRep(surface)
