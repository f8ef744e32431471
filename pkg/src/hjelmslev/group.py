"""Collineation groups of the planes and exact permutation-group machinery.

A collineation is a pair (matrix, ring automorphism): the automorphism is
applied coordinatewise, the matrix then multiplies the column from the
left, and the result is re-canonicalized.  Scalar-unit matrices act
trivially exactly when the scalar is central, so the point action
realizes PGammaL(3,R).

The permutation side is a deterministic Schreier-Sims stabilizer chain
(numpy index arrays as permutations) providing exact orders, membership,
uniform sampling, pointwise and setwise stabilizers, and lexicographically
least set images under the group, which is what the search uses for
isomorph rejection.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geom import Plane, build_plane, det3
from .ring import build_ring, automorphism_group_order, _primitive_element


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Permutation applying q first, then p."""
    return p[q]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


class MinImageBudgetExceeded(Exception):
    """The minimal-image backtrack exceeded its node budget."""


def _orbit_min_array(gens, n: int) -> np.ndarray:
    """Per point, the smallest point in its orbit under the generators."""
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for x in range(n):
            ra, rb = find(x), find(int(g[x]))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    out = np.empty(n, dtype=np.int64)
    for x in range(n):
        out[x] = find(x)
    return out


class _Level:
    __slots__ = ("base", "gens", "tr", "trinv", "orbit_order", "scanned",
                 "processed", "_sorted")

    def __init__(self, base: int, ident: np.ndarray):
        self.base = base
        self.gens: list[np.ndarray] = []
        self.tr = {base: ident}
        self.trinv = {base: ident}
        self.orbit_order = [base]
        self.scanned = {base: 0}
        self.processed: set[tuple[int, int]] = set()
        self._sorted = None

    def sorted_orbit(self) -> list[int]:
        if self._sorted is None or len(self._sorted) != len(self.orbit_order):
            self._sorted = sorted(self.orbit_order)
        return self._sorted


class PermGroup:
    """Permutation group with a deterministic Schreier-Sims chain.

    Base points are taken from `base_prefix` first (levels are created up
    front, so pointwise stabilizers of that prefix are chain suffixes) and
    otherwise as the smallest point moved by the offending residue.  When
    `known_order` is given, construction stops as soon as the transversal
    product reaches it; the product never exceeds the true order, so
    equality certifies a complete strong generating set.
    """

    def __init__(self, generators, degree: int, base_prefix=(), known_order=None):
        self.degree = degree
        self._arange = np.arange(degree, dtype=np.int32)
        self.levels: list[_Level] = []
        self.known_order = known_order
        self._min_root = None
        for b in base_prefix:
            self.levels.append(_Level(int(b), self._arange))
        seen = set()
        for g in generators:
            a = np.ascontiguousarray(g, dtype=np.int32)
            key = a.tobytes()
            if key in seen or (a == self._arange).all():
                continue
            seen.add(key)
            self._assign(a, 0)
        self._schreier_sims()

    # -- chain construction ----------------------------------------------

    def _assign(self, g: np.ndarray, start: int) -> int:
        """Register g as a generator at levels start..j, j = first base it moves."""
        j = start
        while j < len(self.levels) and g[self.levels[j].base] == self.levels[j].base:
            self.levels[j].gens.append(g)
            j += 1
        if j == len(self.levels):
            moved = np.nonzero(g != self._arange)[0]
            self.levels.append(_Level(int(moved[0]), self._arange))
        self.levels[j].gens.append(g)
        return j

    def _close_orbit(self, lvl: _Level) -> None:
        stack = [x for x in lvl.orbit_order if lvl.scanned[x] < len(lvl.gens)]
        while stack:
            x = stack.pop()
            done = lvl.scanned[x]
            gens = lvl.gens
            if done >= len(gens):
                continue
            ux = lvl.tr[x]
            for g in gens[done:]:
                y = int(g[x])
                if y not in lvl.tr:
                    u = g[ux]
                    lvl.tr[y] = u
                    lvl.trinv[y] = inverse(u)
                    lvl.orbit_order.append(y)
                    lvl.scanned[y] = 0
                    stack.append(y)
            lvl.scanned[x] = len(gens)

    def _strip(self, g: np.ndarray, start: int = 0):
        """Sift g; (None, k) when g factors over the chain, else (residue, level)."""
        for idx in range(start, len(self.levels)):
            lvl = self.levels[idx]
            x = int(g[lvl.base])
            if x == lvl.base:
                continue
            u = lvl.trinv.get(x)
            if u is None:
                return g, idx
            g = compose(u, g)
        if (g == self._arange).all():
            return None, len(self.levels)
        return g, len(self.levels)

    def _process_level(self, i: int):
        lvl = self.levels[i]
        self._close_orbit(lvl)
        for x in lvl.orbit_order:
            ux = lvl.tr[x]
            for gi in range(len(lvl.gens)):
                key = (x, gi)
                if key in lvl.processed:
                    continue
                lvl.processed.add(key)
                g = lvl.gens[gi]
                y = int(g[x])
                s = compose(lvl.trinv[y], compose(g, ux))
                if (s == self._arange).all():
                    continue
                h, _ = self._strip(s, i + 1)
                if h is not None:
                    return self._assign(h, i + 1)
        return None

    def _schreier_sims(self) -> None:
        if self.known_order is not None and self.order() == self.known_order:
            return
        i = len(self.levels) - 1
        while i >= 0:
            j = self._process_level(i)
            if j is None:
                i -= 1
            else:
                for lvl in self.levels[i + 1:j + 1]:
                    self._close_orbit(lvl)
                if self.known_order is not None and self.order() == self.known_order:
                    return
                i = j

    # -- queries -----------------------------------------------------------

    def order(self) -> int:
        o = 1
        for lvl in self.levels:
            o *= len(lvl.orbit_order)
        return o

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    def contains(self, g) -> bool:
        a = np.asarray(g, dtype=np.int32)
        res, _ = self._strip(a)
        return res is None

    def strong_generators(self) -> list[np.ndarray]:
        out, seen = [], set()
        for lvl in self.levels:
            for g in lvl.gens:
                key = g.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    def generators(self) -> list[np.ndarray]:
        return list(self.levels[0].gens) if self.levels else []

    def sample(self, rng) -> np.ndarray:
        """Uniformly random element (product of random transversal picks)."""
        g = self._arange
        for lvl in self.levels:
            x = lvl.orbit_order[rng.randrange(len(lvl.orbit_order))]
            g = compose(g, lvl.tr[x])
        return g

    def elements(self, limit: int = 200000) -> list[np.ndarray]:
        """All elements, via transversal products (small groups only)."""
        if self.order() > limit:
            raise ValueError(f"group of order {self.order()} too large to enumerate")
        out = [self._arange]
        for lvl in self.levels:
            out = [compose(g, lvl.tr[x]) for g in out for x in lvl.orbit_order]
        return out

    def _tail_view(self, k: int) -> "PermGroup":
        """Pointwise stabilizer of the first k base points (shares levels)."""
        sub = object.__new__(PermGroup)
        sub.degree = self.degree
        sub._arange = self._arange
        sub.levels = self.levels[k:]
        sub.known_order = None
        sub._min_root = None
        return sub

    def orbit(self, point: int) -> list[int]:
        """Orbit of a point under the group, ascending."""
        gens = self.strong_generators()
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(g[x])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)


def element_order(p: np.ndarray) -> int:
    n = len(p)
    arange = np.arange(n, dtype=p.dtype)
    k, x = 1, p
    while not (x == arange).all():
        x = x[p]
        k += 1
    return k


def chain_with_base(group: PermGroup, base_prefix) -> PermGroup:
    """The same group, rechained so its base starts with the given points."""
    prefix = tuple(int(b) for b in base_prefix)
    have = group.base
    if have[:len(prefix)] == list(prefix):
        return group
    return PermGroup(group.strong_generators(), group.degree,
                     base_prefix=prefix, known_order=group.order())


def pointwise_stabilizer(group: PermGroup, points) -> PermGroup:
    pts = tuple(int(p) for p in points)
    chain = chain_with_base(group, pts)
    return chain._tail_view(len(pts))


def _schreier_set_stabilizer(group: PermGroup, S,
                             cap: int = 20000) -> PermGroup | None:
    """Setwise stabilizer from Schreier generators on the orbit of the set.

    Enumerates the orbit of S as sorted tuples with a transporter tree;
    every orbit edge yields a Schreier generator of the stabilizer, and
    by orbit-stabilizer the stabilizer order is |G| / |orbit|, so the
    generator scan stops the moment that order is reached.  Returns None
    when the orbit exceeds the cap (small stabilizer: backtracking is
    the better tool there).
    """
    gens = group.generators()
    if not gens:
        return group
    n = group.degree
    start = tuple(S)
    index = {start: 0}
    nodes = [start]
    tree: list[tuple[int, int]] = [(-1, -1)]
    edges: list[tuple[int, int, int]] = []
    head = 0
    while head < len(nodes):
        cur = nodes[head]
        for gi, g in enumerate(gens):
            img = tuple(sorted(int(g[x]) for x in cur))
            j = index.get(img)
            if j is None:
                if len(nodes) >= cap:
                    return None
                j = len(nodes)
                index[img] = j
                nodes.append(img)
                tree.append((head, gi))
            else:
                edges.append((head, gi, j))
        head += 1
    target = group.order() // len(nodes)

    ident = np.arange(n, dtype=np.int32)
    memo: dict[int, np.ndarray] = {0: ident}

    def transporter(i: int) -> np.ndarray:
        u = memo.get(i)
        if u is None:
            parent, gi = tree[i]
            u = compose(gens[gi], transporter(parent))
            memo[i] = u
        return u

    K: PermGroup | None = None
    K_gens: list[np.ndarray] = []
    for i, gi, j in edges:
        if K is not None and K.order() == target:
            break
        s = compose(inverse(transporter(j)), compose(gens[gi], transporter(i)))
        if np.array_equal(s, ident) or (K is not None and K.contains(s)):
            continue
        K_gens.append(s)
        K = PermGroup(K_gens, n)
    if K is None:
        K = PermGroup([], n)
    if K.order() != target:
        raise RuntimeError("Schreier scan ended below the stabilizer order")
    return K


def setwise_stabilizer(group: PermGroup, points) -> PermGroup:
    """Subgroup mapping the point set onto itself.

    When the orbit of the set is small the stabilizer comes from Schreier
    generators on that orbit; otherwise (small stabilizer, giant orbit) a
    backtrack over the stabilizer chain collects the generators.
    """
    S = sorted({int(p) for p in points})
    if not S or len(S) == group.degree:
        return group
    quick = _schreier_set_stabilizer(group, S)
    if quick is not None:
        return quick
    chain = chain_with_base(group, S)
    n = group.degree
    in_S = np.zeros(n, dtype=bool)
    in_S[S] = True
    S_arr = np.array(S, dtype=np.int32)
    levels = chain.levels
    k = len(levels)
    arange = chain._arange
    found: list[np.ndarray] = []
    K: PermGroup | None = None
    omin = np.arange(n)

    def dfs(depth: int, g: np.ndarray) -> None:
        nonlocal omin, K
        if depth == k:
            if in_S[g[S_arr]].all() and (g != arange).any():
                if K is None or not K.contains(g):
                    found.append(g)
                    K = PermGroup(list(found), n)
                    omin = _orbit_min_array(found, n)
            return
        lvl = levels[depth]
        want = bool(in_S[lvl.base])
        for x in lvl.sorted_orbit():
            y = int(g[x])
            if bool(in_S[y]) != want:
                continue
            if depth == 0 and int(omin[y]) < y:
                continue  # conjugate branch: a found element reaches a smaller image
            dfs(depth + 1, compose(g, lvl.tr[x]))

    dfs(0, arange)
    return K if K is not None else PermGroup([], n)


# -- minimal set images -----------------------------------------------------

class _StabNode:
    """Pointwise stabilizer of an image prefix, with orbit data for min-image."""

    __slots__ = ("group", "gens", "ginv", "omin", "bfs", "children")

    def __init__(self, group: PermGroup):
        self.group = group
        self.gens = group.strong_generators()
        self.ginv = [inverse(g) for g in self.gens]
        self.omin = _orbit_min_array(self.gens, group.degree)
        self.bfs: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self.children: dict[int, "_StabNode"] = {}

    def bfs_tree(self, root: int):
        t = self.bfs.get(root)
        if t is None:
            n = self.group.degree
            prev_pt = np.full(n, -1, dtype=np.int64)
            prev_gen = np.full(n, -1, dtype=np.int64)
            prev_pt[root] = root
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    for gi, g in enumerate(self.gens):
                        y = int(g[x])
                        if prev_pt[y] < 0:
                            prev_pt[y] = x
                            prev_gen[y] = gi
                            nxt.append(y)
                frontier = nxt
            t = (prev_pt, prev_gen)
            self.bfs[root] = t
        return t

    def map_to(self, t: int, root: int) -> np.ndarray:
        """Group element u with u(t) = root (t must lie in root's orbit)."""
        prev_pt, prev_gen = self.bfs_tree(root)
        acc = None
        cur = t
        while cur != root:
            gi = int(prev_gen[cur])
            acc = self.ginv[gi] if acc is None else compose(self.ginv[gi], acc)
            cur = int(prev_pt[cur])
        return self.group._arange if acc is None else acc

    def child(self, r: int) -> "_StabNode":
        nd = self.children.get(r)
        if nd is None:
            grp = self.group
            if grp.levels and grp.levels[0].base == r:
                sub = grp._tail_view(1)
            else:
                sub = pointwise_stabilizer(grp, (r,))
            nd = _StabNode(sub)
            self.children[r] = nd
        return nd


def _min_root(group: PermGroup) -> _StabNode:
    if group._min_root is None:
        group._min_root = _StabNode(group)
    return group._min_root


class _NotMinimal(Exception):
    pass


def _min_image_rec(node: _StabNode, T: list[int], path: list[int],
                   state: dict, prove_only: bool) -> None:
    state["nodes"] += 1
    budget = state["budget"]
    if budget is not None and state["nodes"] > budget:
        raise MinImageBudgetExceeded(state["nodes"])
    omin = node.omin
    r = min(int(omin[t]) for t in T)
    best = state["best"]
    depth = len(path)
    cand = path + [r]
    if cand > best[:depth + 1]:
        return
    if prove_only and cand < best[:depth + 1]:
        raise _NotMinimal
    if depth + 1 == state["k"]:
        if cand < best:
            state["best"] = cand
        return
    child = None
    for t in sorted(T):
        if int(omin[t]) != r:
            continue
        u = node.map_to(t, r)
        rest = [int(u[x]) for x in T if x != t]
        if child is None:
            child = node.child(r)
        _min_image_rec(child, rest, cand, state, prove_only)


def minimal_image(group: PermGroup, points, budget: int | None = None) -> tuple[int, ...]:
    """Lexicographically least sorted tuple g(S) over the whole group."""
    S = sorted({int(p) for p in points})
    if not S:
        return ()
    state = {"best": list(S), "k": len(S), "nodes": 0, "budget": budget}
    _min_image_rec(_min_root(group), S, [], state, prove_only=False)
    return tuple(state["best"])


def is_minimal_image(group: PermGroup, points, budget: int | None = None) -> bool:
    """True iff S equals minimal_image(group, S) (early exit on refutation)."""
    S = sorted({int(p) for p in points})
    if not S:
        return True
    state = {"best": list(S), "k": len(S), "nodes": 0, "budget": budget}
    try:
        _min_image_rec(_min_root(group), S, [], state, prove_only=True)
    except _NotMinimal:
        return False
    return True


def orbit_of_set(gens, points) -> set[tuple[int, ...]]:
    """Closure of a point set under generator images (sets as sorted tuples)."""
    start = tuple(sorted(int(p) for p in points))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = tuple(sorted(int(g[x]) for x in s))
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return seen


# -- collineations -----------------------------------------------------------

@dataclass(frozen=True)
class Collineation:
    """Semilinear projective map: aut coordinatewise, then matrix * column."""

    matrix: tuple[tuple[int, int, int], ...]
    aut: tuple[int, ...] | None = None


def collineation_permutation(plane: Plane, coll: Collineation) -> np.ndarray:
    """Point permutation induced by a collineation (validated bijection)."""
    ring = plane.ring
    res = ring.residue or ring
    phi = ring.phi_map
    A = coll.matrix
    if det3(res, [[phi[e] for e in row] for row in A]) == 0:
        raise ValueError("matrix is not invertible modulo the radical")
    mul, add = ring.mul, ring.add
    aut = coll.aut
    point_id, canon = plane.point_id, plane.canon_point
    perm = np.empty(plane.n_points, dtype=np.int32)
    for pid, v in enumerate(plane.points):
        if aut is not None:
            v = (aut[v[0]], aut[v[1]], aut[v[2]])
        img = tuple(
            add[add[mul[row[0]][v[0]]][mul[row[1]][v[1]]]][mul[row[2]][v[2]]]
            for row in A)
        perm[pid] = point_id[canon(img)]
    if not np.array_equal(np.sort(perm), np.arange(plane.n_points, dtype=np.int32)):
        raise ValueError("collineation did not act bijectively")
    return perm


def collineation_generators(plane: Plane) -> list[Collineation]:
    """Standard generating set: rotation, transvections, diagonal scalings,
    and one pure-automorphism collineation per ring automorphism generator."""
    ring = plane.ring
    gens = [Collineation(((0, 1, 0), (0, 0, 1), (1, 0, 0)))]
    gens.append(Collineation(((1, 1, 0), (0, 1, 0), (0, 0, 1))))
    if ring.m == 2:
        rad = ring.radical_gen
        gens.append(Collineation(((1, rad, 0), (0, 1, 0), (0, 0, 1))))
        u = ring.lift_map[_primitive_element(ring.residue)]
    else:
        u = _primitive_element(ring)
    if u != 1:
        gens.append(Collineation(((u, 0, 0), (0, 1, 0), (0, 0, 1))))
    if ring.m == 2:
        one_plus_rad = ring.add[1][ring.radical_gen]
        gens.append(Collineation(((one_plus_rad, 0, 0), (0, 1, 0), (0, 0, 1))))
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for autperm in ring.aut_gens:
        gens.append(Collineation(ident, aut=tuple(autperm)))
    return gens


def _central_unit_count(ring) -> int:
    mul = ring.mul
    cnt = 0
    for u in ring.units():
        if all(mul[u][x] == mul[x][u] for x in range(ring.order)):
            cnt += 1
    return cnt


def expected_collineation_order(label: str, linear_only: bool = False) -> int:
    """Closed-form order of the full collineation group.

    |PGL(3,R)| = |GL(3,F_q)| * q^(9(m-1)) / #(central unit scalars); the
    central-unit count is q^2-q (all units) for the commutative rings and
    2 for T4.  The semilinear part multiplies by the order of the chosen
    ring-automorphism group.
    """
    ring = build_ring(label)
    q = ring.q
    gl = (q ** 3 - 1) * (q ** 3 - q) * (q ** 3 - q ** 2)
    if ring.m == 2:
        gl *= q ** 9
    pgl = gl // _central_unit_count(ring)
    if linear_only:
        return pgl
    return pgl * automorphism_group_order(label)


@lru_cache(maxsize=None)
def collineation_group(label: str) -> PermGroup:
    """Full collineation group as a permutation group on point ids.

    Raises if the Schreier-Sims order misses the closed form, which would
    signal a wrong generator choice.
    """
    plane = build_plane(label)
    perms = [collineation_permutation(plane, c) for c in collineation_generators(plane)]
    grp = PermGroup(perms, plane.n_points)
    expect = expected_collineation_order(label)
    if grp.order() != expect:
        raise RuntimeError(
            f"collineation group of {label}: computed order {grp.order()} "
            f"!= expected {expect}")
    return grp


@lru_cache(maxsize=None)
def linear_collineation_group(label: str) -> PermGroup:
    """The matrix-induced (PGL) subgroup, without ring automorphisms."""
    plane = build_plane(label)
    gens = [c for c in collineation_generators(plane) if c.aut is None]
    perms = [collineation_permutation(plane, c) for c in gens]
    grp = PermGroup(perms, plane.n_points)
    expect = expected_collineation_order(label, linear_only=True)
    if grp.order() != expect:
        raise RuntimeError(
            f"linear collineation group of {label}: computed order {grp.order()} "
            f"!= expected {expect}")
    return grp
