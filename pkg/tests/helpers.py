"""Randomized property checks shared by the module tests and the
acceptance suite (the latter runs them at the full advertised sizes)."""

import random

from hjelmslev.arc import candidate_mask, is_two_arc
from hjelmslev.geom import build_plane, det3
from hjelmslev.group import collineation_group, minimal_image
from hjelmslev.search import SearchState, merged_feasibility


def check_incremental_candidates(labels, steps, seed):
    """Random extend/retract walks: incremental mask == reference mask."""
    rng = random.Random(seed)
    done = 0
    while done < steps:
        plane = build_plane(labels[done % len(labels)])
        state = SearchState(plane)
        while state.cand and len(state.prefix) < 9 and done < steps:
            state.extend(list_bits_sample(rng, state.cand))
            done += 1
            assert state.cand == candidate_mask(plane, state.prefix), \
                f"candidate mismatch at prefix {state.prefix} over {plane.ring.label}"
            if rng.random() < 0.15 and state.prefix:
                state.retract()
    return done


def list_bits_sample(rng, mask):
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low.bit_length() - 1)
        mask ^= low
    return bits[rng.randrange(len(bits))]


def check_merged_feasibility(labels, trials, seed):
    """merged_feasibility agrees with direct 2-arc verification."""
    rng = random.Random(seed)
    agree = 0
    for t in range(trials):
        plane = build_plane(labels[t % len(labels)])
        state = SearchState(plane)
        for _ in range(rng.randrange(6)):
            if not state.cand:
                break
            state.extend(list_bits_sample(rng, state.cand))
        outside = [p for p in range(plane.n_points) if p not in state.prefix]
        quad = rng.sample(outside, 4)
        direct = is_two_arc(plane, state.prefix + quad)
        assert merged_feasibility(state, quad) == direct, \
            f"merge mismatch: prefix {state.prefix} quad {quad}"
        agree += 1
    return agree


def check_minimal_image_invariance(labels, pairs, seed):
    """minimal_image is constant on group orbits of point sets."""
    rng = random.Random(seed)
    done = 0
    for t in range(pairs):
        label = labels[t % len(labels)]
        group = collineation_group(label)
        n = group.degree
        S = rng.sample(range(n), rng.randrange(1, 8))
        g = group.sample(rng)
        lhs = minimal_image(group, S)
        rhs = minimal_image(group, [int(g[x]) for x in S])
        assert lhs == rhs, f"orbit invariance failed on {label}: {S}"
        done += 1
    return done


def check_unit_det_non_collinear(label, trials, seed):
    """A point triple whose coordinate matrix has unit determinant spans."""
    rng = random.Random(seed)
    plane = build_plane(label)
    ring = plane.ring
    checked = 0
    for _ in range(trials):
        ids = rng.sample(range(plane.n_points), 3)
        rows = [plane.points[p] for p in ids]
        if ring.unit[det3(ring, rows)]:
            assert not plane.collinear_triple(*ids), \
                f"unit determinant but collinear: {ids}"
        checked += 1
    return checked
