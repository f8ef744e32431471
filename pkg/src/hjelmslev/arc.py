"""2-arcs in the planes: verification, structure analysis, and file I/O.

A 2-arc is a point set meeting every line in at most 2 points.  Besides
the basic predicates (arc / complete arc / extension candidates) this
module computes the structural invariants used to describe an arc: the
distribution over point neighbor classes, the image and complement under
the natural projection to the residue-field plane, blocking-set and oval
structure of those projections, and the automorphism group inside the
plane's collineation group.

Arcs travel as text files: a `ring:` header line, optional `#` comments,
then `(x:y:z)` points (one or more per line) using the ring's element
notation.  Two reference arcs are built in, a 21-point arc over Z25 and
a 22-point arc over S5; both are complete and currently the largest
known in their planes.
"""

from __future__ import annotations

import os
import re
from functools import lru_cache

from .geom import Plane, build_plane, iter_bits
from .group import PermGroup, collineation_group, linear_collineation_group, \
    setwise_stabilizer

FIXTURES: dict[str, str] = {
    "kZ25": """\
ring: Z25
# complete 21-point 2-arc, automorphism group of order 3 (coordinate rotation)
# one rotation orbit per comment block
(1:1:4)
(1:19:19)
(1:4:1)
(1:1:22)
(1:8:8)
(1:22:1)
(1:3:12)
(1:23:19)
(1:4:17)
(1:7:8)
(1:22:4)
(1:19:18)
(1:7:22)
(1:8:6)
(1:21:18)
(5:1:2)
(1:15:13)
(1:2:5)
(5:1:23)
(1:10:12)
(1:23:5)
""",
    "kS5": """\
ring: S5
# complete 22-point 2-arc, automorphism group of order 60 (isomorphic to A5)
# seven rotation orbits of size 3 plus the fixed point (1:1:1)
(1:X+1:4X)
(4X:1:X+1)
(1:4X:4X+1)
(1:4X+1:4X)
(4X:1:4X+1)
(1:4X:X+1)
(1:X+1:3X+4)
(1:2X+4:X+4)
(1:4X+4:4X+1)
(1:4X+1:4X+4)
(1:X+4:2X+4)
(1:3X+4:X+1)
(1:3X+2:3X+2)
(1:3X+3:1)
(1:1:3X+3)
(1:2X+3:4X+2)
(1:4X+3:3X+4)
(1:2X+4:2X+2)
(1:4X+2:2X+3)
(1:2X+2:2X+4)
(1:3X+4:4X+3)
(1:1:1)
""",
}

DATA_DIR_ENV = "HJ_ARC_DATA"

# outer (x:y:z) groups; element notation may itself contain one paren level
_POINT_RE = re.compile(r"\(((?:[^()]|\([^()]*\))*)\)")


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def fixture_text(name: str) -> str:
    """Raw text of a built-in arc; HJ_ARC_DATA overrides with <name>.arc files."""
    data_dir = os.environ.get(DATA_DIR_ENV)
    if data_dir:
        path = os.path.join(data_dir, name + ".arc")
        if os.path.exists(path):
            with open(path) as fh:
                return fh.read()
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {fixture_names()}") from None


def load_fixture(name: str) -> tuple[Plane, list[int]]:
    return parse_arc(fixture_text(name))


def parse_arc(text: str) -> tuple[Plane, list[int]]:
    """Parse arc text into (plane, point ids); points are re-canonicalized."""
    label = None
    pts: list[int] = []
    plane = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if label is None:
            if not line.startswith("ring:"):
                raise ValueError("arc file must start with a 'ring: <label>' line")
            label = line.split(":", 1)[1].strip()
            plane = build_plane(label)
            continue
        chunks = _POINT_RE.findall(line)
        if not chunks or _POINT_RE.sub("", line).strip():
            raise ValueError(f"malformed point line {raw!r}")
        ring = plane.ring
        for chunk in chunks:
            tokens = [t.strip() for t in chunk.split(":")]
            if len(tokens) != 3:
                raise ValueError(f"point ({chunk}) does not have 3 coordinates")
            v = tuple(ring.parse_element(t) for t in tokens)
            if not any(ring.unit[c] for c in v):
                raise ValueError(f"point ({chunk}) has no unit coordinate")
            pid = plane.point_id[plane.canon_point(v)]
            if pid in pts:
                raise ValueError(f"point ({chunk}) occurs twice")
            pts.append(pid)
    if plane is None:
        raise ValueError("arc file has no 'ring:' line")
    return plane, pts


def format_point(plane: Plane, pid: int) -> str:
    ring = plane.ring
    return "(" + ":".join(ring.format_element(c) for c in plane.points[pid]) + ")"


def format_arc(plane: Plane, pts, comments=()) -> str:
    lines = [f"ring: {plane.ring.label}"]
    lines += [f"# {c}" for c in comments]
    lines += [format_point(plane, p) for p in pts]
    return "\n".join(lines) + "\n"


def read_arc(path: str) -> tuple[Plane, list[int]]:
    with open(path) as fh:
        return parse_arc(fh.read())


def write_arc(path: str, plane: Plane, pts, comments=()) -> None:
    with open(path, "w") as fh:
        fh.write(format_arc(plane, pts, comments))


# -- arc predicates -----------------------------------------------------------

def arc_mask(plane: Plane, pts) -> int:
    m = 0
    for p in pts:
        m |= 1 << p
    return m


def line_multiplicities(plane: Plane, pts) -> list[int]:
    m = arc_mask(plane, pts)
    return [(lm & m).bit_count() for lm in plane.line_pointmask]


def max_line_multiplicity(plane: Plane, pts) -> int:
    return max(line_multiplicities(plane, pts), default=0)


def is_two_arc(plane: Plane, pts) -> bool:
    return max_line_multiplicity(plane, pts) <= 2


def secant_line_mask(plane: Plane, pts) -> int:
    """Bit mask over line ids of lines carrying exactly 2 arc points."""
    pts = list(pts)
    out = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            out |= plane.common_lines_mask(pts[i], pts[j])
    return out


def candidate_mask(plane: Plane, pts) -> int:
    """Points whose addition keeps the 2-arc property (assumes pts is one)."""
    blocked = arc_mask(plane, pts)
    for lid in iter_bits(secant_line_mask(plane, pts)):
        blocked |= plane.line_pointmask[lid]
    return plane.all_points_mask & ~blocked


def is_complete(plane: Plane, pts) -> bool:
    return is_two_arc(plane, pts) and candidate_mask(plane, pts) == 0


# -- projection structure ------------------------------------------------------

def class_multiplicities(plane: Plane, pts) -> list[int]:
    counts = [0] * len(plane.class_points)
    for p in pts:
        counts[plane.point_class[p]] += 1
    return counts


def class_histogram(plane: Plane, pts) -> dict[int, int]:
    """How many neighbor classes carry 0, 1, 2, ... arc points."""
    hist: dict[int, int] = {}
    for c in class_multiplicities(plane, pts):
        hist[c] = hist.get(c, 0) + 1
    return dict(sorted(hist.items()))


def phi_image(plane: Plane, pts) -> list[int]:
    """Base-plane point ids hit by the arc (sorted, no multiplicities)."""
    return sorted({plane.phi_point(p) for p in pts})


def empty_classes(plane: Plane, pts) -> list[int]:
    hit = set(phi_image(plane, pts))
    return [c for c in range(len(plane.class_points)) if c not in hit]


def is_blocking_set(base: Plane, pts) -> bool:
    """Every line of the plane contains at least one of the points."""
    m = arc_mask(base, pts)
    return all(lm & m for lm in base.line_pointmask)


def oval_classification(base: Plane, oval) -> dict:
    """Tangent lines and internal/external point split of a point set.

    Tangents meet the set exactly once; points off the set are external
    when they lie on a tangent and internal otherwise.  For an oval in an
    odd-order plane this is the classical partition with q(q+1)/2 external
    and q(q-1)/2 internal points.
    """
    m = arc_mask(base, oval)
    tangents = [lid for lid, lm in enumerate(base.line_pointmask)
                if (lm & m).bit_count() == 1]
    touched = 0
    for lid in tangents:
        touched |= base.line_pointmask[lid]
    internal, external = [], []
    for pid in range(base.n_points):
        if (m >> pid) & 1:
            continue
        (external if (touched >> pid) & 1 else internal).append(pid)
    return {"tangents": tangents, "internal": internal, "external": external}


def tangent_at(base: Plane, oval, pid: int) -> int | None:
    """The unique tangent line of the set at one of its points, if unique."""
    m = arc_mask(base, oval)
    tl = [lid for lid in iter_bits(base.point_linemask[pid])
          if (base.line_pointmask[lid] & m).bit_count() == 1]
    return tl[0] if len(tl) == 1 else None


def tangent_alignment_check(plane: Plane, pts) -> bool | None:
    """For each neighbor class carrying 2 arc points, test whether the pair
    is aligned in the tangent direction of the doubled-class image set.

    The two points of such a class span a pencil of lines all projecting
    to a single base line; the check asks that this base line be the
    tangent, at the class's image point, of the set of all doubled-class
    images.  Returns None when no class carries exactly 2 points.
    """
    counts = class_multiplicities(plane, pts)
    doubled = [c for c, k in enumerate(counts) if k == 2]
    if not doubled or plane.base is None:
        return None
    dset = set(doubled)
    by_class: dict[int, list[int]] = {c: [] for c in doubled}
    for p in pts:
        c = plane.point_class[p]
        if c in dset:
            by_class[c].append(p)
    for c, (p, q) in by_class.items():
        common = plane.common_lines(p, q)
        directions = {plane.phi_line(lid) for lid in common}
        if len(directions) != 1:
            return False
        if directions.pop() != tangent_at(plane.base, doubled, c):
            return False
    return True


def analyze(plane: Plane, pts) -> dict:
    """Structural report of a point set, keyed for the text interface."""
    pts = list(pts)
    mults = line_multiplicities(plane, pts)
    info: dict = {
        "ring": plane.ring.label,
        "size": len(pts),
        "is_arc": max(mults, default=0) <= 2,
        "secants": sum(1 for c in mults if c == 2),
        "tangent_lines": sum(1 for c in mults if c == 1),
        "passants": sum(1 for c in mults if c == 0),
    }
    if info["is_arc"]:
        cand = candidate_mask(plane, pts)
        info["complete"] = cand == 0
        info["extension_candidates"] = cand.bit_count()
    if plane.base is not None:
        base = plane.base
        info["class_histogram"] = class_histogram(plane, pts)
        image = phi_image(plane, pts)
        empty = empty_classes(plane, pts)
        info["image_size"] = len(image)
        info["empty_classes"] = len(empty)
        info["empty_classes_blocking"] = is_blocking_set(base, empty)
        doubled = [c for c, k in enumerate(class_multiplicities(plane, pts)) if k == 2]
        if doubled:
            cls = oval_classification(base, doubled)
            info["doubled_image_size"] = len(doubled)
            info["doubled_image_is_arc"] = is_two_arc(base, doubled)
            info["doubled_image_tangents"] = len(cls["tangents"])
            info["doubled_image_internal"] = len(cls["internal"])
            info["doubled_image_external"] = len(cls["external"])
            singles = [c for c, k in
                       enumerate(class_multiplicities(plane, pts)) if k == 1]
            info["singles_all_internal"] = set(singles) <= set(cls["internal"])
            align = tangent_alignment_check(plane, pts)
            if align is not None:
                info["tangent_alignment"] = align
    return info


# -- automorphisms -------------------------------------------------------------

def arc_automorphism_group(label: str, pts) -> PermGroup:
    """Setwise stabilizer of the arc in the full collineation group."""
    return setwise_stabilizer(collineation_group(label), pts)


def automorphisms_all_linear(label: str, aut: PermGroup) -> bool:
    """Whether every arc automorphism is induced by a matrix alone."""
    lin = linear_collineation_group(label)
    return all(lin.contains(g) for g in aut.strong_generators())


def orbit_partition(group: PermGroup, pts) -> list[list[int]]:
    """Orbits of the group restricted to the given points (sorted)."""
    pts = sorted(pts)
    gens = group.strong_generators()
    seen: set[int] = set()
    orbits = []
    for p in pts:
        if p in seen:
            continue
        orb = {p}
        frontier = [p]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(g[x])
                    if y not in orb:
                        orb.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orb
        orbits.append(sorted(orb))
    return orbits
