"""Tour of the thirteen rings and their projective Hjelmslev planes.

Builds every supported coefficient ring, prints its basic constants,
then assembles the plane over it and reports the point/line geometry.
For composition length 2 the plane is a q^2-fold cover of PG(2,q):
points fall into neighbor classes of size q^2, and two points are
neighbors exactly when they lie on more than one common line.
"""

from hjelmslev import RING_LABELS, build_plane, build_ring, plane_summary

print("ring    order  q  m  commutative  units  plane pts  lines  classes")
for label in RING_LABELS:
    ring = build_ring(label)
    s = plane_summary(label)
    print(f"{label:6} {ring.order:6} {ring.q:2} {ring.m:2}  "
          f"{str(ring.spec.commutative):11}  {len(ring.units()):5}  "
          f"{s['points']:9}  {s['lines']:5}  {s['neighbor_classes']:7}")

print()
print("Arithmetic in S5 = F5[X]/(X^2), radical generated by X:")
ring = build_ring("S5")
x = ring.parse_element("X")
two = ring.parse_element("2")
print("  X * X         =", ring.format_element(ring.mul[x][x]))
print("  (X+2)*(4X+3)  =", ring.format_element(
    ring.mul[ring.parse_element("X+2")][ring.parse_element("4X+3")]))
print("  units:", len(ring.units()), "of", ring.order,
      "(everything outside the radical)")

print()
print("Neighbor structure of the plane over Z25:")
plane = build_plane("Z25")
p, r = plane.class_points[0][0], plane.class_points[0][1]
s = plane.class_points[1][0]
print(f"  points {p} and {r} share a class: "
      f"{len(plane.common_lines(p, r))} common lines")
print(f"  points {p} and {s} in different classes: "
      f"{len(plane.common_lines(p, s))} common line")
pts, traces = plane.restrict_class(0)
print(f"  one class carries {len(pts)} points and {len(traces)} line traces"
      f" of {len(traces[0])} points each (an affine plane of order 5)")
