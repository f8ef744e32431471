"""The two bundled record arcs: verification and structural analysis.

kZ25 is a complete 21-point 2-arc in the plane over Z25; kS5 is a
complete 22-point 2-arc in the plane over S5.  Both are the largest
known complete 2-arcs in their planes.  The analysis shows how each
arc sits over the residue plane PG(2,5): which neighbor classes it
meets once or twice, and what the missed classes form down there.
"""

from hjelmslev import (
    analyze,
    arc_automorphism_group,
    automorphisms_all_linear,
    format_point,
    is_complete,
    is_two_arc,
    load_fixture,
    orbit_partition,
)

for name in ("kZ25", "kS5"):
    plane, pts = load_fixture(name)
    label = plane.ring.label
    print(f"=== {name}: {len(pts)} points over {label} ===")
    print("  2-arc:", is_two_arc(plane, pts), " complete:", is_complete(plane, pts))
    rep = analyze(plane, pts)
    print("  secants:", rep["secants"], " tangent lines:", rep["tangent_lines"],
          " passants:", rep["passants"])
    print("  class histogram (multiplicity: classes):", rep["class_histogram"])
    if rep.get("empty_classes_blocking") is not None:
        print("  missed classes form a blocking set in PG(2,5):",
              rep["empty_classes_blocking"])
    if rep.get("doubled_image_is_arc") is not None:
        print("  doubled classes form an oval in PG(2,5):",
              rep["doubled_image_is_arc"],
              " tangent-aligned:", rep["tangent_alignment"])

    aut = arc_automorphism_group(label, pts)
    orbits = orbit_partition(aut, pts)
    print("  automorphism group order:", aut.order(),
          " orbit sizes:", sorted(len(o) for o in orbits),
          " all linear:", automorphisms_all_linear(label, aut))
    print("  first three points:", " ".join(format_point(plane, p)
                                            for p in pts[:3]))
    print()
