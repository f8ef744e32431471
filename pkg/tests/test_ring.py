"""Ring tables: axioms, chain structure, automorphisms, element notation."""

import pytest

from hjelmslev.ring import (RING_LABELS, automorphism_group_order, build_ring,
                            ring_automorphism_generators)

EXPECTED_SPECS = {
    # label: (order, q, m, commutative)
    "F2": (2, 2, 1, True), "F3": (3, 3, 1, True),
    "F4": (4, 4, 1, True), "F5": (5, 5, 1, True),
    "Z4": (4, 2, 2, True), "S2": (4, 2, 2, True),
    "Z9": (9, 3, 2, True), "S3": (9, 3, 2, True),
    "G4": (16, 4, 2, True), "S4": (16, 4, 2, True), "T4": (16, 4, 2, False),
    "Z25": (25, 5, 2, True), "S5": (25, 5, 2, True),
}

AUT_ORDERS = {
    "F2": 1, "F3": 1, "F4": 2, "F5": 1,
    "Z4": 1, "S2": 1, "Z9": 1, "S3": 2, "Z25": 1, "S5": 4,
    "G4": 2, "S4": 6, "T4": 2,
}


def test_label_inventory():
    assert set(RING_LABELS) == set(EXPECTED_SPECS)
    assert len(RING_LABELS) == 13


@pytest.mark.parametrize("label", RING_LABELS)
def test_ring_axioms_exhaustive(label):
    r = build_ring(label)
    order, q, m, comm = EXPECTED_SPECS[label]
    assert (r.order, r.q, r.m, r.spec.commutative) == (order, q, m, comm)
    add, mul, neg = r.add, r.mul, r.neg
    n = r.order
    els = range(n)
    for a in els:
        assert add[a][0] == a and add[0][a] == a
        assert mul[a][1] == a and mul[1][a] == a
        assert add[a][neg[a]] == 0
        for b in els:
            assert add[a][b] == add[b][a]
            if comm:
                assert mul[a][b] == mul[b][a]
            for c in els:
                assert add[add[a][b]][c] == add[a][add[b][c]]
                assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
                assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]
                assert mul[add[a][b]][c] == add[mul[a][c]][mul[b][c]]


@pytest.mark.parametrize("label", RING_LABELS)
def test_units_and_radical(label):
    r = build_ring(label)
    n, q, m = r.order, r.q, r.m
    units = r.units()
    assert len(units) == (q - 1 if m == 1 else q * q - q)
    for u in units:
        v = r.inverse(u)
        assert r.mul[u][v] == 1 and r.mul[v][u] == 1
    nonunits = [a for a in range(n) if not r.unit[a]]
    # the radical squares to zero and absorbs multiplication (chain structure)
    for a in nonunits:
        for b in nonunits:
            assert r.mul[a][b] == 0 if m == 2 else True
    if m == 2:
        rad = r.radical_gen
        assert not r.unit[rad] and rad != 0
        # nonunits = rad * R = R * rad
        assert set(nonunits) == {r.mul[rad][x] for x in range(n)}
        assert set(nonunits) == {r.mul[x][rad] for x in range(n)}


@pytest.mark.parametrize("label", RING_LABELS)
def test_residue_projection(label):
    r = build_ring(label)
    res = r.residue
    if r.m == 1:
        assert res is None
        return
    assert res.order == r.q
    phi = r.phi_map
    for a in range(r.order):
        assert r.unit[a] == (phi[a] != 0)
        for b in range(r.order):
            assert phi[r.add[a][b]] == res.add[phi[a]][phi[b]]
            assert phi[r.mul[a][b]] == res.mul[phi[a]][phi[b]]
    for a in range(r.q):
        assert phi[r.lift(a)] == a


@pytest.mark.parametrize("label", RING_LABELS)
def test_automorphism_generators_preserve_tables(label):
    r = build_ring(label)
    for perm in r.aut_gens:
        assert perm[0] == 0 and perm[1] == 1
        for a in range(r.order):
            for b in range(r.order):
                assert perm[r.add[a][b]] == r.add[perm[a]][perm[b]]
                assert perm[r.mul[a][b]] == r.mul[perm[a]][perm[b]]


@pytest.mark.parametrize("label", RING_LABELS)
def test_automorphism_group_orders(label):
    assert automorphism_group_order(label) == AUT_ORDERS[label]
    assert len(ring_automorphism_generators(label)) == len(build_ring(label).aut_gens)


def test_specific_arithmetic():
    z25 = build_ring("Z25")
    assert z25.mul[5][5] == 0
    assert z25.add[20][7] == 2

    g4 = build_ring("G4")
    y = 4  # index of the generator: a + b*y is a + 4*b
    ysq = g4.mul[y][y]
    # y^2 = -1 - y = 3 + 3y
    assert ysq == 3 + 4 * 3

    s5 = build_ring("S5")
    X = 5
    assert s5.mul[X][X] == 0
    assert s5.mul[2][X] == s5.mul[X][2]  # commutative dual numbers

    t4 = build_ring("T4")
    X, w = 4, 2
    assert t4.mul[X][X] == 0
    # twist: X * w = w^2 * X, so T4 does not commute
    assert t4.mul[X][w] != t4.mul[w][X]
    wsq = t4.mul[w][w]
    assert t4.mul[X][w] == t4.mul[wsq][X]


def test_element_notation_roundtrip():
    for label in RING_LABELS:
        r = build_ring(label)
        for a in range(r.order):
            token = r.format_element(a)
            assert " " not in token
            assert r.parse_element(token) == a


def test_notation_styles():
    s5 = build_ring("S5")
    assert s5.format_element(20) == "4X"
    assert s5.format_element(6) == "X+1"
    assert s5.format_element(0) == "0"
    assert s5.parse_element("3X+4") == 4 + 5 * 3

    f4 = build_ring("F4")
    assert [f4.format_element(a) for a in range(4)] == ["0", "1", "w", "w+1"]

    s4 = build_ring("S4")
    assert s4.parse_element("(w+1)X+w") == 2 + 4 * 3

    g4 = build_ring("G4")
    assert g4.parse_element("2+3*y") == 2 + 4 * 3

    with pytest.raises(ValueError):
        s5.parse_element("5X")
    with pytest.raises(ValueError):
        build_ring("Z25").parse_element("25")


def test_unknown_label_rejected():
    with pytest.raises(ValueError):
        build_ring("Z8")
