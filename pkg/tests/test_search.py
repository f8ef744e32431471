"""Symmetry-reduced maximal-arc search, pruning rules, and bookkeeping."""

import itertools
import random

import pytest

from hjelmslev.arc import candidate_mask, is_complete, is_two_arc
from hjelmslev.geom import build_plane
from hjelmslev.group import collineation_group, minimal_image, orbit_of_set, setwise_stabilizer
from hjelmslev.search import (
    SearchConfig,
    SearchState,
    blocking_set_prune,
    brute_force_maximal_arcs,
    canonical_prefix_filter,
    dedup_arcs,
    intra_class_cap,
    merged_feasibility,
    read_checkpoint,
    run_search,
    write_checkpoint,
)

import helpers


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig("Z4", order_heuristic="random")
    with pytest.raises(ValueError):
        SearchConfig("Z4", target_size=5, sym_depth=7)
    SearchConfig("Z4", target_size=7, sym_depth=7)  # boundary is fine


def test_incremental_candidates_small():
    steps = helpers.check_incremental_candidates(["Z4", "S3"], steps=400, seed=5)
    assert steps == 400


def test_extend_rejects_non_candidate():
    plane = build_plane("Z4")
    state = SearchState(plane)
    state.extend(0)
    with pytest.raises(ValueError):
        state.extend(0)


def test_merged_feasibility_random():
    trials = helpers.check_merged_feasibility(["Z4", "Z9"], trials=300, seed=9)
    assert trials == 300


def test_intra_class_cap_values():
    intra_class_cap.cache_clear()
    assert intra_class_cap("F5") == 1
    assert intra_class_cap("Z4") == 4
    assert intra_class_cap("S2") == 4
    assert intra_class_cap("Z9") == 4
    assert intra_class_cap("S4") == 6
    assert intra_class_cap("Z25") == 6


def test_canonical_pair_filter_orbit_count():
    # pairs through point 0 in the order-25 plane fall into 2 orbits:
    # neighbor pairs and non-neighbor pairs
    grp = collineation_group("Z25")
    plane = build_plane("Z25")
    kept = [x for x in range(1, plane.n_points)
            if canonical_prefix_filter(grp, (0, x))]
    assert len(kept) == 2
    assert plane.neighbors(0, kept[0]) != plane.neighbors(0, kept[1])


def test_blocking_prune_semantics():
    plane = build_plane("Z25")
    base = plane.base
    # prefix touching every class of one base line must trip the prune
    lid = 0
    classes = [c for c in range(base.n_points) if base.incident(c, lid)]
    prefix = [plane.class_points[c][0] for c in classes]
    assert blocking_set_prune(plane, prefix)
    assert not blocking_set_prune(plane, prefix[:-1])


def test_exhaustive_base_plane_searches():
    # PG(2,2): every maximal arc is a hyperoval on 4 points, 7 of them
    res = run_search(SearchConfig("F2", sym_depth=4))
    assert res.exhausted and res.best_size == 4
    assert all(is_complete(build_plane("F2"), a) for a in res.arcs)
    brute = brute_force_maximal_arcs("F2")
    assert len(brute) == 7 and all(len(a) == 4 for a in brute)
    # symmetry-reduced reps regenerate the labeled census exactly
    grp = collineation_group("F2")
    regen = set()
    for rep in res.arcs:
        regen |= orbit_of_set(grp.generators(), rep)
    assert regen == {tuple(sorted(a)) for a in brute}

    # PG(2,3): 234 ovals, one orbit
    res3 = run_search(SearchConfig("F3", sym_depth=4))
    assert res3.exhausted and res3.best_size == 4
    assert len(brute_force_maximal_arcs("F3")) == 234


def test_exhaustive_order_4_planes():
    expect = {"Z4": 7, "S2": 6}
    reps = {}
    for label, n2 in expect.items():
        res = run_search(SearchConfig(label, sym_depth=7))
        assert res.exhausted and res.target_reached is False
        assert res.best_size == n2
        plane = build_plane(label)
        for a in res.arcs:
            assert is_two_arc(plane, a) and is_complete(plane, a)
        reps[label] = res.arcs
    assert len(reps["Z4"]) == 3 and len(reps["S2"]) == 3

    # orbit-stabilizer check: orbit sizes of the reps sum to the full census
    grp = collineation_group("Z4")
    total = 0
    for rep in reps["Z4"]:
        total += grp.order() // setwise_stabilizer(grp, rep).order()
    assert total == len(brute_force_maximal_arcs("Z4"))


def test_exhaustive_order_9_planes():
    for label in ("Z9", "S3"):
        res = run_search(SearchConfig(label, sym_depth=7))
        assert res.exhausted and res.best_size == 9
        plane = build_plane(label)
        assert all(is_complete(plane, a) for a in res.arcs)


def test_unfiltered_leaves_match_brute_force():
    # with canonicity off, the orderly scan visits each maximal arc once
    res = run_search(SearchConfig("F2", sym_depth=0))
    assert res.stats.leaves == 7
    res = run_search(SearchConfig("F3", sym_depth=0))
    assert res.stats.leaves == 234


def test_determinism():
    a = run_search(SearchConfig("Z9", sym_depth=7))
    b = run_search(SearchConfig("Z9", sym_depth=7))
    assert a.arcs == b.arcs
    assert a.stats.nodes == b.stats.nodes
    assert a.stats.canonicity_rejections == b.stats.canonicity_rejections


def test_parallel_matches_serial():
    serial = run_search(SearchConfig("Z9", sym_depth=7))
    par = run_search(SearchConfig("Z9", sym_depth=7, worker_count=2))
    assert par.exhausted
    assert par.best_size == serial.best_size
    assert set(par.arcs) == set(serial.arcs)


def test_target_mode_stops_early():
    res = run_search(SearchConfig("Z9", target_size=9, sym_depth=7,
                                  order_heuristic="class-fill",
                                  record_all=False))
    assert res.target_reached
    assert res.best_size >= 9
    plane = build_plane("Z9")
    assert any(len(a) >= 9 for a in res.arcs)
    for a in res.arcs:
        assert is_two_arc(plane, a)


def test_seed_prefix_restricts_roots():
    plane = build_plane("Z4")
    res = run_search(SearchConfig("Z4", sym_depth=0, seed_prefix=(0, 1)))
    state = SearchState(plane, seed=(0, 1))
    for a in res.arcs:
        assert set(a) >= {0, 1}
    assert res.best_size <= 7


def test_checkpoint_roundtrip(tmp_path):
    plane = build_plane("Z9")
    prefixes = [(0, 5, 9), (0, 5, 12), (1,)]
    path = str(tmp_path / "resume.ckpt")
    write_checkpoint(path, plane, prefixes)
    label, back = read_checkpoint(path)
    assert label == "Z9" and back == prefixes
    with pytest.raises(ValueError):
        write_checkpoint(path, plane, [()])


def test_checkpoint_roundtrip_parenthesized_coordinates(tmp_path):
    # T4 points may start with a coordinate like (w+1)X, so lines contain
    # nested parentheses; order must survive, including unsorted prefixes
    plane = build_plane("T4")
    fancy = [p for p in range(plane.n_points)
             if "(" in "".join(plane.ring.format_element(c)
                               for c in plane.points[p])]
    assert fancy
    prefixes = [(fancy[0], 3, 1), (2, fancy[-1])]
    path = str(tmp_path / "t4.ckpt")
    write_checkpoint(path, plane, prefixes)
    label, back = read_checkpoint(path)
    assert label == "T4" and back == prefixes


def test_interrupted_search_loses_nothing(tmp_path):
    # chain many tiny budgets end to end; the union of all rounds must
    # equal the uninterrupted census no matter where the clock cuts
    full = run_search(SearchConfig("Z9", sym_depth=7))
    for budget in (0.005, 0.02, 0.08):
        collected = []
        roots = None
        for _ in range(200):
            res = run_search(SearchConfig("Z9", sym_depth=7,
                                          time_budget=budget),
                             resume_roots=roots)
            collected.extend(res.arcs)
            if res.exhausted:
                break
            assert res.checkpoint, "budget hit but no checkpoint returned"
            roots = res.checkpoint
        else:
            pytest.fail("search never exhausted across 200 rounds")
        assert set(dedup_arcs("Z9", collected)) == set(full.arcs)


def test_budget_checkpoint_and_resume(tmp_path):
    # force an early deadline, then finish from the checkpoint
    full = run_search(SearchConfig("Z9", sym_depth=7))
    cut = run_search(SearchConfig("Z9", sym_depth=7, time_budget=0.02))
    if cut.exhausted:
        pytest.skip("search finished inside the tiny budget")
    assert cut.checkpoint
    path = str(tmp_path / "z9.ckpt")
    write_checkpoint(path, build_plane("Z9"), cut.checkpoint)
    label, roots = read_checkpoint(path)
    resumed = run_search(SearchConfig(label, sym_depth=7), resume_roots=roots)
    assert resumed.exhausted
    merged = set(dedup_arcs("Z9", list(cut.arcs) + list(resumed.arcs)))
    assert merged == set(full.arcs)


def test_dedup_collapses_orbit_copies():
    grp = collineation_group("Z4")
    res = run_search(SearchConfig("Z4", sym_depth=7))
    rng = random.Random(15)
    noisy = list(res.arcs)
    for rep in res.arcs:
        g = grp.sample(rng)
        noisy.append(tuple(sorted(int(g[p]) for p in rep)))
    assert set(dedup_arcs("Z4", noisy)) == set(res.arcs)


def test_results_are_canonical_forms():
    grp = collineation_group("Z4")
    res = run_search(SearchConfig("Z4", sym_depth=7))
    for rep in res.arcs:
        assert rep == minimal_image(grp, rep)
