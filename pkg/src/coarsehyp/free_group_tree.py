"""The 4-regular tree: Cayley graph of the free group on two generators.

Vertices are labeled by digit sequences: the first digit picks one of the
four edges at the root (0..3), every later digit one of the three onward
edges (0..2).  The empty sequence is the basepoint e.  Word length equals
graph distance to e, and the Gromov product of two vertices at e equals
their longest-common-prefix length, which makes the depth-k prefixes exact
finite-scale boundary cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .metric_core import SpaceModel


@dataclass(frozen=True)
class Word:
    """A tree vertex; digits (a1, a2, ...) with a1 in 0..3, rest in 0..2."""

    digits: tuple[int, ...] = ()

    def __post_init__(self):
        d = self.digits
        if d and not 0 <= d[0] <= 3:
            raise UsageError(f"first digit out of range: {d}")
        if any(not 0 <= a <= 2 for a in d[1:]):
            raise UsageError(f"digit out of range: {d}")

    def __len__(self):
        return len(self.digits)

    def child(self, digit):
        return Word(self.digits + (digit,))

    @property
    def parent(self):
        if not self.digits:
            raise UsageError("the basepoint has no parent")
        return Word(self.digits[:-1])

    def is_prefix_of(self, other):
        return self.digits == other.digits[:len(self.digits)]

    def __repr__(self):
        return "e" if not self.digits else "(" + ",".join(map(str, self.digits)) + ")"


E = Word()


@dataclass(frozen=True)
class EdgePoint:
    """Interior point of the edge parent -> parent.child(digit) at parameter t.

    t = 0 is the parent vertex, t = 1 the child vertex.
    """

    parent: Word
    digit: int
    t: float

    def __post_init__(self):
        hi = 2 if self.parent.digits else 3
        if not 0 <= self.digit <= hi:
            raise UsageError(f"invalid child digit {self.digit} at {self.parent!r}")
        if not 0.0 <= self.t <= 1.0:
            raise UsageError("edge parameter must lie in [0, 1]")

    @property
    def child(self):
        return self.parent.child(self.digit)

    def as_vertex(self):
        """The vertex this point coincides with, or None for a true interior point."""
        if self.t == 0.0:
            return self.parent
        if self.t == 1.0:
            return self.child
        return None


@dataclass(frozen=True)
class BoundaryWord:
    """Depth-k prefix standing for the cell of rays through it."""

    digits: tuple[int, ...]

    @property
    def depth(self):
        return len(self.digits)

    def __repr__(self):
        return "[" + ",".join(map(str, self.digits)) + "...]"


def lcp(u, v):
    """Longest-common-prefix length of two words."""
    n = 0
    for a, b in zip(u.digits, v.digits):
        if a != b:
            break
        n += 1
    return n


def word_distance(u, v):
    """Graph distance |u| + |v| - 2 lcp(u, v)."""
    return len(u) + len(v) - 2 * lcp(u, v)


def _vertex_of(p):
    return p if isinstance(p, Word) else p.as_vertex()


def edge_point_distance(p, q):
    """Length-metric distance between two (possibly interior) tree points.

    Same-edge pairs are |t1 - t2|; otherwise the path leaves each edge
    through one of its endpoints, so minimize over the four vertex routes.
    """
    pv, qv = _vertex_of(p), _vertex_of(q)
    if pv is not None and qv is not None:
        return float(word_distance(pv, qv))
    if pv is None and qv is None and p.parent == q.parent and p.digit == q.digit:
        return abs(p.t - q.t)

    def ends(x, xv):
        if xv is not None:
            return [(xv, 0.0)]
        return [(x.parent, x.t), (x.child, 1.0 - x.t)]

    return min(dp + word_distance(u, v) + dq
               for u, dp in ends(p, pv) for v, dq in ends(q, qv))


def sphere(n):
    """All words of length n in lexicographic order; 4 * 3^(n-1) of them for n >= 1."""
    if n < 0:
        raise UsageError("sphere radius must be nonnegative")
    if n == 0:
        return [E]
    out = [Word((a,)) for a in range(4)]
    for _ in range(n - 1):
        out = [w.child(a) for w in out for a in range(3)]
    return out


def truncated_boundary(k):
    """Depth-k boundary cells, enumerated like sphere(k).

    The Gromov product of two cells is their lcp length; a cell against
    itself is only resolved to depth k.
    """
    if k < 1:
        raise UsageError("truncation depth must be positive")
    return [BoundaryWord(w.digits) for w in sphere(k)]


def ball(depth):
    """All words of length <= depth: breadth-first, lexicographic within a sphere."""
    out = []
    for n in range(depth + 1):
        out.extend(sphere(n))
    return out


def path_vertices(u, v):
    """The vertex sequence of the geodesic from u to v."""
    k = lcp(u, v)
    down = [Word(u.digits[:i]) for i in range(len(u), k, -1)]
    up = [Word(v.digits[:i]) for i in range(k, len(v) + 1)]
    return down + up


class FreeGroupTree(SpaceModel):
    """Tree as a space model over vertex handles (Words).

    ``distance`` also accepts EdgePoints; the enumeration and the vectorized
    distance matrix cover vertices only.
    """

    name = "f2tree"
    geodesic_slack = 0.0
    visual_constant = 0.0

    @property
    def basepoint(self):
        return E

    def check_point(self, p):
        if not isinstance(p, (Word, EdgePoint)):
            raise UsageError(f"not a tree point: {p!r}")

    def distance(self, x, y):
        if isinstance(x, Word) and isinstance(y, Word):
            return float(word_distance(x, y))
        return float(edge_point_distance(x, y))

    def enumerate(self, depth):
        return ball(depth)

    def geodesic(self, x, y, step):
        """Geodesic samples at spacing <= step; vertices when step >= 1,
        interleaved edge points otherwise."""
        if step <= 0:
            raise UsageError("step must be positive")
        verts = path_vertices(x, y)
        if step >= 1.0 or len(verts) == 1:
            return verts
        per_edge = math.ceil(1.0 / step)
        out = [verts[0]]
        for a, b in zip(verts, verts[1:]):
            parent, digit, flip = (a, b.digits[-1], False) if len(b) > len(a) \
                else (b, a.digits[-1], True)
            for i in range(1, per_edge):
                t = i / per_edge
                out.append(EdgePoint(parent, digit, 1.0 - t if flip else t))
            out.append(b)
        return out

    def distance_matrix(self, pts_a, pts_b=None):
        pts_b = pts_a if pts_b is None else pts_b
        return pairwise_word_distances(pts_a, pts_b).astype(float)

    def point_payload(self, p):
        if isinstance(p, Word):
            return {"word": list(p.digits)}
        return {"edge": list(p.parent.digits) + [p.digit], "t": p.t}


def pairwise_word_distances(words_a, words_b=None):
    """Integer distance matrix via per-level ancestor identifiers.

    lcp(u, v) is the number of levels at which the prefixes of u and v
    coincide; comparing interned prefix ids level by level vectorizes this.
    """
    words_b = words_a if words_b is None else words_b
    max_len = max((len(w) for w in list(words_a) + list(words_b)), default=0)
    ids = {}

    def prefix_ids(words):
        n = len(words)
        out = np.full((max_len, n), -1, dtype=np.int64)
        for j, w in enumerate(words):
            for lev in range(1, len(w) + 1):
                out[lev - 1, j] = ids.setdefault(w.digits[:lev], len(ids))
        return out

    ia, ib = prefix_ids(words_a), prefix_ids(words_b)
    la = np.array([len(w) for w in words_a], dtype=np.int64)
    lb = np.array([len(w) for w in words_b], dtype=np.int64)
    common = np.zeros((len(words_a), len(words_b)), dtype=np.int64)
    for lev in range(max_len):
        common += (ia[lev][:, None] == ib[lev][None, :]) & (ia[lev][:, None] >= 0)
    return la[:, None] + lb[None, :] - 2 * common
