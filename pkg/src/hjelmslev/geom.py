"""Projective Hjelmslev planes PHG(2,R) over the supported chain rings.

Points are the free rank-1 right submodules of R^3, represented by the
unique generator whose first unit coordinate equals 1 (scaled from the
right).  Lines are given dually by row triples canonicalized from the
left; a point v lies on a line a iff a.v = sum a_i v_i = 0, with the row
entries as left factors (the order matters over T4).

For composition length 2 the plane has (q^3-1)/(q-1) * q^2 points and as
many lines, each line carries q(q+1) points, and the fibres of the
coordinatewise residue projection phi partition the points into
(q^3-1)/(q-1) neighbor classes of q^2 points whose induced geometry is
the affine plane AG(2,q).  Fields (m = 1) yield the ordinary PG(2,q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ring import RingTable, build_ring


def _mask_from_bits(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def iter_bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class Plane:
    ring: RingTable
    points: list[tuple[int, int, int]]
    lines: list[tuple[int, int, int]]
    point_id: dict
    line_id: dict
    line_pointmask: list[int]
    point_linemask: list[int]
    base: "Plane | None"
    point_class: list[int]          # base-plane point id (own id when m = 1)
    line_class: list[int]
    class_points: list[list[int]]
    class_mask: list[int]
    _pair_excl: "list[list[int]] | None" = field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @property
    def all_points_mask(self) -> int:
        return (1 << self.n_points) - 1

    # -- canonical coordinates ------------------------------------------

    def canon_point(self, v) -> tuple[int, int, int]:
        """Scale v from the right so its first unit coordinate becomes 1."""
        r = self.ring
        for x in v:
            if r.unit[x]:
                u = r.inv[x]
                return tuple(r.mul[y][u] for y in v)
        raise ValueError(f"no unit coordinate in {tuple(v)}")

    def canon_line(self, a) -> tuple[int, int, int]:
        r = self.ring
        for x in a:
            if r.unit[x]:
                u = r.inv[x]
                return tuple(r.mul[u][y] for y in a)
        raise ValueError(f"no unit coordinate in {tuple(a)}")

    def point_index(self, v) -> int:
        return self.point_id[self.canon_point(v)]

    def line_index(self, a) -> int:
        return self.line_id[self.canon_line(a)]

    # -- incidence -------------------------------------------------------

    def incident(self, pid: int, lid: int) -> bool:
        return bool(self.line_pointmask[lid] >> pid & 1)

    def points_on_line(self, lid: int) -> list[int]:
        return list(iter_bits(self.line_pointmask[lid]))

    def lines_through(self, pid: int) -> list[int]:
        return list(iter_bits(self.point_linemask[pid]))

    def common_lines_mask(self, p: int, q: int) -> int:
        return self.point_linemask[p] & self.point_linemask[q]

    def common_lines(self, p: int, q: int) -> list[int]:
        return list(iter_bits(self.common_lines_mask(p, q)))

    def collinear_triple(self, p: int, q: int, r: int) -> bool:
        """True iff some line carries all three (distinct) points."""
        return (self.point_linemask[p] & self.point_linemask[q]
                & self.point_linemask[r]) != 0

    # -- neighbor structure ----------------------------------------------

    def neighbors(self, p: int, q: int) -> bool:
        """Distinct points whose phi-images coincide."""
        return p != q and self.point_class[p] == self.point_class[q]

    def phi_point(self, pid: int) -> int:
        """Base-plane point id under the residue projection (m = 2 only)."""
        if self.base is None:
            return pid
        return self.point_class[pid]

    def phi_line(self, lid: int) -> int:
        if self.base is None:
            return lid
        return self.line_class[lid]

    def restrict_class(self, class_id: int):
        """Points of one neighbor class plus the induced line traces.

        Returns (points, traces); each trace is the sorted tuple of class
        points cut out by one plane line (traces of size >= 2, deduplicated).
        The result is an affine plane AG(2,q) when m = 2.
        """
        pts = self.class_points[class_id]
        cmask = self.class_mask[class_id]
        seen = set()
        for p in pts:
            for lid in iter_bits(self.point_linemask[p]):
                t = self.line_pointmask[lid] & cmask
                if t.bit_count() >= 2:
                    seen.add(t)
        traces = sorted(tuple(iter_bits(t)) for t in seen)
        return list(pts), traces

    # -- pair exclusion masks (search support) ----------------------------

    def pair_excludes(self) -> list[list[int]]:
        """excl[p][q] = union of the point masks of all lines through p and q.

        Any point in excl[p][q] (other than p, q) completes a collinear
        triple with p and q.  Non-neighbor pairs share exactly one line, so
        their entry aliases that line's mask; neighbor pairs get a union.
        """
        if self._pair_excl is None:
            n = self.n_points
            excl = [[0] * n for _ in range(n)]
            lpm = self.line_pointmask
            plm = self.point_linemask
            for p in range(n):
                row = excl[p]
                mp = plm[p]
                for q in range(p + 1, n):
                    cm = mp & plm[q]
                    if cm & (cm - 1) == 0:
                        m = lpm[cm.bit_length() - 1]
                    else:
                        m = 0
                        for lid in iter_bits(cm):
                            m |= lpm[lid]
                    row[q] = m
                    excl[q][p] = m
            self._pair_excl = excl
        return self._pair_excl


def _canonical_triples(ring: RingTable) -> list[tuple[int, int, int]]:
    n = ring.order
    nonunits = [a for a in range(n) if not ring.unit[a]]
    out = [(1, a, b) for a in range(n) for b in range(n)]
    out += [(a, 1, b) for a in nonunits for b in range(n)]
    out += [(a, b, 1) for a in nonunits for b in nonunits]
    return out


@lru_cache(maxsize=None)
def build_plane(label: str) -> Plane:
    """Construct (and cache) the plane over the named ring."""
    ring = build_ring(label)
    pts = _canonical_triples(ring)
    point_id = {v: i for i, v in enumerate(pts)}
    lines = list(pts)
    line_id = dict(point_id)
    n = len(pts)

    P = np.array(pts, dtype=np.int16)
    add = np.array(ring.add, dtype=np.int16)
    mul = np.array(ring.mul, dtype=np.int16)
    acc = mul[P[:, 0][:, None], P[:, 0][None, :]]
    acc = add[acc, mul[P[:, 1][:, None], P[:, 1][None, :]]]
    acc = add[acc, mul[P[:, 2][:, None], P[:, 2][None, :]]]
    inc = acc == 0  # inc[line, point]

    line_pointmask = [_mask_from_bits(inc[i]) for i in range(n)]
    point_linemask = [_mask_from_bits(inc[:, j]) for j in range(n)]

    if ring.m == 1:
        point_class = list(range(n))
        line_class = list(range(n))
        base = None
    else:
        base = build_plane(ring.residue.label)
        phi = ring.phi_map
        point_class = [base.point_id[base.canon_point((phi[a], phi[b], phi[c]))]
                       for a, b, c in pts]
        line_class = [base.line_id[base.canon_line((phi[a], phi[b], phi[c]))]
                      for a, b, c in lines]

    n_classes = n if ring.m == 1 else base.n_points
    class_points = [[] for _ in range(n_classes)]
    for pid, cid in enumerate(point_class):
        class_points[cid].append(pid)
    class_mask = [0] * n_classes
    for pid, cid in enumerate(point_class):
        class_mask[cid] |= 1 << pid

    return Plane(ring, pts, lines, point_id, line_id, line_pointmask,
                 point_linemask, base, point_class, line_class,
                 class_points, class_mask)


def det3(ring: RingTable, rows) -> int:
    """Determinant of a 3x3 matrix over a commutative supported ring."""
    if not ring.spec.commutative:
        raise ValueError("determinant needs a commutative ring")
    (a, b, c), (d, e, f), (g, h, i) = rows
    m, ad, ng = ring.mul, ring.add, ring.neg
    t1 = m[a][ad[m[e][i]][ng[m[f][h]]]]
    t2 = m[b][ad[m[d][i]][ng[m[f][g]]]]
    t3 = m[c][ad[m[d][h]][ng[m[e][g]]]]
    return ad[ad[t1][ng[t2]]][t3]


def plane_summary(label: str) -> dict:
    """Headline counts for one plane (used by the CLI plane-info report)."""
    pl = build_plane(label)
    spec = pl.ring.spec
    per_line = pl.line_pointmask[0].bit_count()
    return {
        "ring": label,
        "ring_order": spec.order,
        "q": spec.q,
        "m": spec.m,
        "points": pl.n_points,
        "lines": pl.n_lines,
        "neighbor_classes": len(pl.class_points),
        "class_size": len(pl.class_points[0]),
        "points_per_line": per_line,
        "lines_per_point": pl.point_linemask[0].bit_count(),
    }
