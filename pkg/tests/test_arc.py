"""Arc files, verification, invariants, and the two bundled record arcs."""

import os
import random

import pytest

from hjelmslev.arc import (
    analyze,
    arc_automorphism_group,
    arc_mask,
    automorphisms_all_linear,
    candidate_mask,
    class_histogram,
    empty_classes,
    fixture_names,
    fixture_text,
    format_arc,
    is_blocking_set,
    is_complete,
    is_two_arc,
    line_multiplicities,
    load_fixture,
    max_line_multiplicity,
    orbit_partition,
    oval_classification,
    parse_arc,
    phi_image,
    read_arc,
    tangent_alignment_check,
    tangent_at,
    write_arc,
)
from hjelmslev.geom import build_plane, iter_bits
from hjelmslev.group import element_order


def test_fixture_inventory():
    assert fixture_names() == ["kS5", "kZ25"]


def test_fixtures_are_complete_two_arcs():
    for name, label, size in (("kZ25", "Z25", 21), ("kS5", "S5", 22)):
        plane, pts = load_fixture(name)
        assert plane.ring.label == label
        assert len(pts) == size == len(set(pts))
        assert is_two_arc(plane, pts)
        assert is_complete(plane, pts)
        assert candidate_mask(plane, pts) == 0


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_arc("(1:0:0) (0:1:0)")          # missing ring header
    with pytest.raises(ValueError):
        parse_arc("ring: Z25\n(5:10:15)")     # no unit coordinate
    with pytest.raises(ValueError):
        parse_arc("ring: Z25\n(1:0:0) (1:0:0)")  # duplicate point
    with pytest.raises(ValueError):
        parse_arc("ring: Z25\n(1:0)")         # wrong arity
    with pytest.raises(ValueError):
        parse_arc("ring: Q8\n(1:0:0)")        # unknown ring


def test_parse_canonicalizes_scalar_multiples():
    plane, pts = parse_arc("ring: Z9\n(2:2:2)")
    assert plane.points[pts[0]] == (1, 1, 1)
    # a unit rescaling of an earlier point is caught as a duplicate
    with pytest.raises(ValueError):
        parse_arc("ring: Z9\n(1:1:0) (2:2:0)")


def test_format_parse_roundtrip():
    rng = random.Random(77)
    for label in ("Z4", "S3", "T4", "S5"):
        plane = build_plane(label)
        pts = rng.sample(range(plane.n_points), 8)
        text = format_arc(plane, pts, comments=["roundtrip"])
        plane2, back = parse_arc(text)
        assert plane2 is plane and back == pts


def test_read_write_roundtrip(tmp_path):
    plane, pts = load_fixture("kZ25")
    path = str(tmp_path / "out.arc")
    write_arc(path, plane, pts, comments=["copy"])
    plane2, back = read_arc(path)
    assert plane2 is plane and back == pts


def test_data_dir_override(tmp_path, monkeypatch):
    plane, pts = load_fixture("kS5")
    alt = tmp_path / "fixtures"
    alt.mkdir()
    # an override directory shadows the bundled copy
    (alt / "kS5.arc").write_text(format_arc(plane, pts[:5]))
    monkeypatch.setenv("HJ_ARC_DATA", str(alt))
    _, shadowed = load_fixture("kS5")
    assert shadowed == pts[:5]
    monkeypatch.delenv("HJ_ARC_DATA")
    _, restored = load_fixture("kS5")
    assert restored == pts


def test_line_multiplicity_definitions():
    plane, pts = load_fixture("kZ25")
    mults = line_multiplicities(plane, pts)
    assert len(mults) == plane.n_lines
    assert max(mults) == max_line_multiplicity(plane, pts) == 2
    assert sum(1 for m in mults if m == 2) == 21 * 20 // 2
    # drop a point, counts adjust exactly on the lines through it
    rest = pts[1:]
    mults2 = line_multiplicities(plane, rest)
    for lid in range(plane.n_lines):
        hit = 1 if plane.incident(pts[0], lid) else 0
        assert mults[lid] - mults2[lid] == hit


def test_secant_tangent_passant_partition():
    plane, pts = load_fixture("kS5")
    rep = analyze(plane, pts)
    # 225 non-neighbor pairs x 1 line + 6 neighbor pairs x 5 lines
    assert rep["secants"] == 255
    assert rep["tangent_lines"] == 150 and rep["passants"] == 370
    assert rep["secants"] + rep["tangent_lines"] + rep["passants"] == plane.n_lines


def test_21_arc_class_structure():
    plane, pts = load_fixture("kZ25")
    assert class_histogram(plane, pts) == {0: 10, 1: 21}
    img = phi_image(plane, pts)
    assert len(img) == 21 and len(set(img)) == 21
    empties = empty_classes(plane, pts)
    assert len(empties) == 10
    assert is_blocking_set(plane.base, empties)
    # the complement is a projective triangle plus one extra point
    base = plane.base
    variety = {base.point_id[base.canon_point(v)] for v in (
        [(1, t, 0) for t in (0, 1, 4)]
        + [(0, 1, t) for t in (0, 1, 4)]
        + [(1, 0, t) for t in (1, 4)]
        + [(0, 0, 1)]
    )}
    extra = base.point_id[base.canon_point((1, 1, 1))]
    assert set(empties) == variety | {extra}


def test_22_arc_class_structure():
    plane, pts = load_fixture("kS5")
    hist = class_histogram(plane, pts)
    assert hist == {0: 15, 1: 10, 2: 6}
    base = plane.base
    doubled = [c for c in range(31)
               if sum(1 for p in pts if plane.point_class[p] == c) == 2]
    assert len(doubled) == 6
    # the six doubled classes form an oval in the quotient plane
    assert is_two_arc(base, doubled)
    info = oval_classification(base, doubled)
    assert len(info["tangents"]) == 6
    assert len(info["internal"]) == 10 and len(info["external"]) == 15
    singles = [c for c in range(31)
               if sum(1 for p in pts if plane.point_class[p] == c) == 1]
    assert set(singles) <= set(info["internal"])
    assert tangent_alignment_check(plane, pts) is True


def test_tangent_at_oval_point():
    base = build_plane("F5")
    conic = [p for p in range(base.n_points)
             if (lambda v: (v[1] * v[1] - v[0] * v[2]) % 5 == 0)(base.points[p])]
    assert len(conic) == 6 and is_two_arc(base, conic)
    for p in conic:
        t = tangent_at(base, conic, p)
        assert t is not None
        on = set(iter_bits(base.line_pointmask[t]))
        assert on & set(conic) == {p}
    outside = next(p for p in range(base.n_points) if p not in conic)
    assert tangent_at(base, conic, outside) is None


def test_automorphism_groups_of_fixtures():
    plane, pts = load_fixture("kZ25")
    aut = arc_automorphism_group("Z25", pts)
    assert aut.order() == 3
    orbits = sorted(len(o) for o in orbit_partition(aut, pts))
    assert orbits == [3] * 7
    assert automorphisms_all_linear("Z25", aut)

    plane, pts = load_fixture("kS5")
    aut = arc_automorphism_group("S5", pts)
    assert aut.order() == 60
    orbits = sorted(len(o) for o in orbit_partition(aut, pts))
    assert orbits == [10, 12]
    assert automorphisms_all_linear("S5", aut)
    orders = {element_order(g) for g in aut.elements(limit=60)}
    assert orders == {1, 2, 3, 5}


def test_broken_arc_detected():
    plane, pts = load_fixture("kZ25")
    # adding any candidate-free point forces a 3-line somewhere
    bad = pts + [next(p for p in range(plane.n_points) if p not in pts)]
    assert not is_two_arc(plane, bad)
    assert max_line_multiplicity(plane, bad) >= 3


def test_arc_mask_matches_membership():
    plane, pts = load_fixture("kS5")
    m = arc_mask(plane, pts)
    assert m.bit_count() == len(pts)
    assert all(m >> p & 1 for p in pts)
