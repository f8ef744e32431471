"""Symmetry-reduced backtracking search for maximal 2-arcs.

The search runs depth-first over arc prefixes kept as sorted point-id
tuples, extending only above the current maximum (orderly generation).
At depths up to `sym_depth` a prefix is expanded only when it is the
lexicographically least set in its collineation orbit; the least set of
any orbit has least prefixes throughout, so exactly one representative
per orbit survives and no maximal arc type is lost.  Beyond that depth
isomorphic leaves may appear more than once and are deduplicated by
cheap invariants first, minimal images second.

Candidate points are maintained incrementally: adding P removes P and
every third point of a common line of P with an existing arc point,
which reproduces the reference candidate mask exactly.  A node is a
maximal arc precisely when this mask is empty.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict
from functools import lru_cache

from .geom import Plane, build_plane, iter_bits
from .arc import (_POINT_RE, arc_mask, candidate_mask, class_histogram,
                  class_multiplicities, is_two_arc, format_point)
from .group import (PermGroup, MinImageBudgetExceeded, collineation_group,
                    is_minimal_image, minimal_image, setwise_stabilizer)

ORDER_HEURISTICS = ("point-id", "class-fill")


@dataclass
class SearchConfig:
    label: str
    target_size: int | None = None      # stop as soon as an arc this big is found
    sym_depth: int = 7                  # canonicity filtering depth
    time_budget: float | None = None    # seconds of wall time
    worker_count: int = 1
    prune_blocking: bool = False        # blocking-set pruning, odd q, target mode
    order_heuristic: str = "point-id"
    record_all: bool = True             # keep all maximal arcs vs best size only
    seed_prefix: tuple[int, ...] = ()   # fixed start; disables canonicity filtering
    min_image_budget: int = 30000

    def __post_init__(self):
        if self.order_heuristic not in ORDER_HEURISTICS:
            raise ValueError(f"unknown order heuristic {self.order_heuristic!r}")
        if self.target_size is not None and self.sym_depth > self.target_size:
            raise ValueError("sym_depth must not exceed target_size")


@dataclass
class SearchStats:
    nodes: int = 0
    canonicity_rejections: int = 0
    leaves: int = 0
    best_size: int = 0
    bound_prunes: int = 0
    blocking_prunes: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.canonicity_rejections += other.canonicity_rejections
        self.leaves += other.leaves
        self.best_size = max(self.best_size, other.best_size)
        self.bound_prunes += other.bound_prunes
        self.blocking_prunes += other.blocking_prunes


@dataclass
class SearchResult:
    label: str
    arcs: list[tuple[int, ...]]
    best_size: int
    exhausted: bool
    target_reached: bool
    stats: SearchStats
    elapsed: float
    checkpoint: list[tuple[int, ...]] | None = None


class SearchState:
    """Prefix plus incrementally maintained candidate mask.

    The invariant `state.cand == candidate_mask(plane, state.prefix)`
    holds after every extend and retract.
    """

    __slots__ = ("plane", "excl", "prefix", "cand", "_saved")

    def __init__(self, plane: Plane, seed=()):
        self.plane = plane
        self.excl = plane.pair_excludes()
        self.prefix: list[int] = []
        self.cand = plane.all_points_mask
        self._saved: list[int] = []
        for p in seed:
            self.extend(int(p))

    def extend(self, P: int) -> None:
        if not (self.cand >> P) & 1:
            raise ValueError(f"point {P} is not a candidate")
        self._saved.append(self.cand)
        m = self.cand & ~(1 << P)
        ex = self.excl[P]
        for Q in self.prefix:
            m &= ~ex[Q]
        self.prefix.append(P)
        self.cand = m

    def retract(self) -> None:
        self.prefix.pop()
        self.cand = self._saved.pop()


def merged_feasibility(state: SearchState, quad) -> bool:
    """Whether prefix + 4 points is a 2-arc, via its four 3-point subsets.

    A 4-point extension of an arc is an arc exactly when all four of its
    3-point sub-extensions are, so only triples ever need testing.
    """
    quad = list(quad)
    if len(set(quad)) != 4 or set(quad) & set(state.prefix):
        raise ValueError("need 4 distinct points outside the prefix")
    base = list(state.prefix)
    for skip in range(4):
        triple = [q for i, q in enumerate(quad) if i != skip]
        if not is_two_arc(state.plane, base + triple):
            return False
    return True


def canonical_prefix_filter(group: PermGroup, prefix,
                            budget: int | None = None) -> bool:
    """Keep a prefix iff it is the least set of its orbit (keep on budget hit)."""
    try:
        return is_minimal_image(group, prefix, budget=budget)
    except MinImageBudgetExceeded:
        return True


@lru_cache(maxsize=None)
def intra_class_cap(label: str) -> int:
    """Largest 2-arc within a single neighbor class (brute force, cached)."""
    plane = build_plane(label)
    if plane.base is None:
        return 1
    pts = plane.class_points[0]
    excl = plane.pair_excludes()
    best = 0

    def rec(chosen: list[int], cand: list[int]) -> None:
        nonlocal best
        best = max(best, len(chosen))
        for i, p in enumerate(cand):
            ok = [x for x in cand[i + 1:]
                  if all(not (excl[p][q] >> x) & 1 for q in chosen + [p])]
            if len(chosen) + 1 + len(ok) > best:
                rec(chosen + [p], ok)

    rec([], pts)
    return best


def blocking_set_prune(plane: Plane, prefix) -> bool:
    """True when the touched neighbor classes contain a whole base line.

    Any completion then leaves an image complement missing that line, so
    for odd q it cannot be a complete 2-arc (whose complement blocks).
    """
    base = plane.base
    if base is None:
        return False
    touched = 0
    for p in prefix:
        touched |= 1 << plane.point_class[p]
    return any(lm & ~touched == 0 for lm in base.line_pointmask)


class _TargetReached(Exception):
    pass


class _Deadline(Exception):
    pass


class _Engine:
    """One serial DFS run over a list of root prefixes."""

    def __init__(self, plane: Plane, group: PermGroup | None,
                 config: SearchConfig, deadline: float | None):
        self.plane = plane
        self.group = group
        self.config = config
        self.deadline = deadline
        self.stats = SearchStats()
        self.arcs: list[tuple[int, ...]] = []
        self.pending: list[tuple[int, ...]] = []
        self.cap = intra_class_cap(config.label)
        self.seed_len = len(config.seed_prefix)
        self.use_blocking = (config.prune_blocking
                             and config.target_size is not None
                             and plane.ring.q % 2 == 1)
        n = plane.n_points
        self.above = [0] * n
        full = plane.all_points_mask
        for p in range(n):
            self.above[p] = full & ~((1 << (p + 1)) - 1)

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Deadline

    def _record(self, prefix: list[int]) -> None:
        size = len(prefix)
        if size > self.stats.best_size:
            self.stats.best_size = size
            if not self.config.record_all:
                self.arcs = []
        if self.config.record_all or size >= self.stats.best_size:
            self.arcs.append(tuple(prefix))

    def _children(self, state: SearchState, counts: list[int]) -> list[int] | None:
        """Visit a node: record, prune, and order its extensions."""
        cfg = self.config
        stats = self.stats
        stats.nodes += 1
        if stats.nodes % 16 == 0:
            self._check_deadline()
        prefix = state.prefix
        depth = len(prefix)
        if state.cand == 0:
            stats.leaves += 1
            self._record(prefix)
            if cfg.target_size is not None and depth >= cfg.target_size:
                raise _TargetReached
            return None
        if cfg.target_size is not None and depth >= cfg.target_size:
            self._record(prefix)
            raise _TargetReached
        # only points added beyond the seed are forced to ascend
        ext = state.cand & (self.above[prefix[-1]] if depth > self.seed_len else -1)
        if cfg.target_size is not None:
            bound = depth
            for c, cm in enumerate(self.plane.class_mask):
                room = self.cap - counts[c]
                if room > 0:
                    hit = (ext & cm).bit_count()
                    bound += hit if hit < room else room
            if bound < cfg.target_size:
                stats.bound_prunes += 1
                return None
        if self.use_blocking and blocking_set_prune(self.plane, prefix):
            stats.blocking_prunes += 1
            return None
        kids = list(iter_bits(ext))
        if cfg.order_heuristic == "class-fill":
            cls = self.plane.point_class
            kids.sort(key=lambda p: (counts[cls[p]], p))
        return kids

    def run(self, roots) -> None:
        cfg = self.config
        roots = list(roots)
        for ridx, root in enumerate(roots):
            state = SearchState(self.plane, root)
            counts = class_multiplicities(self.plane, state.prefix)
            try:
                kids = self._children(state, counts)
            except _Deadline:
                self.pending.extend(roots[ridx:])
                raise
            if not kids:
                continue
            frames = [[kids, 0]]
            try:
                while frames:
                    kids, i = frames[-1]
                    if i >= len(kids):
                        frames.pop()
                        if frames:
                            counts[self.plane.point_class[state.prefix[-1]]] -= 1
                            state.retract()
                        continue
                    frames[-1][1] += 1
                    p = kids[i]
                    depth = len(state.prefix) + 1
                    if self.group is not None and depth <= cfg.sym_depth:
                        if not canonical_prefix_filter(
                                self.group, state.prefix + [p],
                                budget=cfg.min_image_budget):
                            self.stats.canonicity_rejections += 1
                            continue
                    state.extend(p)
                    counts[self.plane.point_class[p]] += 1
                    sub = self._children(state, counts)
                    if sub:
                        frames.append([sub, 0])
                    else:
                        counts[self.plane.point_class[p]] -= 1
                        state.retract()
            except _Deadline:
                # the node whose expansion raised is itself unexplored
                self.pending.append(tuple(state.prefix))
                for d, (kk, ii) in enumerate(frames):
                    at = len(root) + d
                    for p in kk[ii:]:
                        self.pending.append(tuple(state.prefix[:at]) + (p,))
                self.pending.extend(roots[ridx + 1:])
                raise


def _arc_fingerprint(plane: Plane, arc) -> tuple:
    hist = tuple(sorted(class_histogram(plane, arc).items()))
    return (len(arc), hist)


def dedup_arcs(label: str, arcs, min_image_budget: int = 500000) -> list[tuple[int, ...]]:
    """One representative per collineation orbit: arcs are bucketed by cheap
    invariants and replaced by their minimal images, so the output does not
    depend on encounter order.  An arc whose minimal-image search blows the
    budget is kept as is, which can only err toward extra representatives."""
    plane = build_plane(label)
    group = collineation_group(label)
    buckets: dict[tuple, set[tuple]] = {}
    for arc in arcs:
        key = tuple(sorted(int(p) for p in arc))
        fp = _arc_fingerprint(plane, key)
        try:
            canon = minimal_image(group, key, budget=min_image_budget)
        except MinImageBudgetExceeded:
            canon = key
        buckets.setdefault(fp, set()).add(canon)
    out = []
    for fp in sorted(buckets):
        out.extend(sorted(buckets[fp]))
    return out


def _expand_frontier(plane, group, config, depth: int):
    """Canonical prefixes at the given depth, plus shallower maximal arcs."""
    sub = SearchConfig(label=config.label, sym_depth=min(config.sym_depth, depth),
                       record_all=True, seed_prefix=config.seed_prefix,
                       min_image_budget=config.min_image_budget)
    eng = _Engine(plane, group, sub, deadline=None)
    frontier: list[tuple[int, ...]] = []

    children = eng._children

    def capture(state, counts):
        if len(state.prefix) >= len(config.seed_prefix) + depth and state.cand:
            frontier.append(tuple(state.prefix))
            return None
        return children(state, counts)

    eng._children = capture
    eng.run([tuple(config.seed_prefix)])
    return frontier, eng.arcs, eng.stats


def _worker_entry(args):
    label, cfg_dict, roots, remaining = args
    config = SearchConfig(**cfg_dict)
    plane = build_plane(label)
    group = (collineation_group(label)
             if config.sym_depth > 0 and not config.seed_prefix else None)
    deadline = time.monotonic() + remaining if remaining is not None else None
    eng = _Engine(plane, group, config, deadline)
    status = "done"
    try:
        eng.run(roots)
    except _TargetReached:
        status = "target"
    except _Deadline:
        status = "deadline"
    return status, eng.arcs, eng.pending, eng.stats


def run_search(config: SearchConfig,
               resume_roots=None) -> SearchResult:
    """Search for maximal 2-arcs per the configuration.

    Returns all inequivalent maximal arcs found (or the first arc of
    target size in target mode), flags for exhaustion of the search
    space and target attainment, and node statistics.  On running out
    of time the unexplored prefixes are returned as a checkpoint from
    which `resume_roots` can continue the identical search.

    A seed prefix fixes concrete points, which breaks the symmetry the
    canonicity filter relies on, so seeded runs skip that filter and
    report every distinct completion instead of orbit representatives.
    """
    t0 = time.monotonic()
    plane = build_plane(config.label)
    group = (collineation_group(config.label)
             if config.sym_depth > 0 and not config.seed_prefix else None)
    deadline = t0 + config.time_budget if config.time_budget is not None else None
    stats = SearchStats()
    arcs: list[tuple[int, ...]] = []
    pending: list[tuple[int, ...]] = []
    status = "done"

    if resume_roots is not None:
        # checkpoint prefixes encode their extension point in the last slot
        roots = [tuple(int(x) for x in r) for r in resume_roots]
    else:
        roots = [tuple(sorted(config.seed_prefix))]

    if config.worker_count > 1:
        if len(roots) == 1 and not roots[0]:
            depth = 2
            while True:
                roots, early_arcs, fstats = _expand_frontier(plane, group,
                                                             config, depth)
                if len(roots) >= 4 * config.worker_count or depth >= min(
                        config.sym_depth, 5) or not roots:
                    break
                depth += 1
            arcs.extend(early_arcs)
            stats.merge(fstats)
        import multiprocessing as mp
        ctx = mp.get_context("fork")
        remaining = None if deadline is None else max(deadline - time.monotonic(), 0.0)
        cfg_dict = asdict(config)
        cfg_dict["worker_count"] = 1
        stripes = [roots[i::config.worker_count] for i in range(config.worker_count)]
        jobs = [(config.label, cfg_dict, s, remaining) for s in stripes if s]
        with ctx.Pool(processes=len(jobs)) as pool:
            for wstatus, warcs, wpending, wstats in pool.map(_worker_entry, jobs):
                arcs.extend(warcs)
                pending.extend(wpending)
                stats.merge(wstats)
                if wstatus == "target":
                    status = "target"
                elif wstatus == "deadline" and status != "target":
                    status = "deadline"
    else:
        eng = _Engine(plane, group, config, deadline)
        try:
            eng.run(roots)
        except _TargetReached:
            status = "target"
        except _Deadline:
            status = "deadline"
        arcs.extend(eng.arcs)
        pending.extend(eng.pending)
        stats.merge(eng.stats)

    if not arcs:
        reps = []
    elif config.seed_prefix:
        reps = sorted(set(arcs))
    else:
        reps = dedup_arcs(config.label, arcs)
    best = max((len(a) for a in reps), default=0)
    stats.best_size = max(stats.best_size, best)
    target_reached = (config.target_size is not None
                      and best >= config.target_size)
    return SearchResult(
        label=config.label,
        arcs=reps,
        best_size=best,
        exhausted=status == "done",
        target_reached=target_reached,
        stats=stats,
        elapsed=time.monotonic() - t0,
        checkpoint=pending if status == "deadline" else None,
    )


def write_checkpoint(path: str, plane: Plane, prefixes) -> None:
    """Pending-prefix list as point-token lines under a ring header.

    Prefix order is meaningful (the last point is the pending extension),
    so lines keep it.  Empty prefixes cannot occur in engine checkpoints
    (the first node of a run never trips the deadline) and have no line
    representation, so they are rejected.
    """
    with open(path, "w") as fh:
        fh.write(f"ring: {plane.ring.label}\n")
        for pre in prefixes:
            if not pre:
                raise ValueError("cannot checkpoint an empty prefix")
            fh.write(" ".join(format_point(plane, p) for p in pre) + "\n")


def read_checkpoint(path: str) -> tuple[str, list[tuple[int, ...]]]:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("ring:"):
        raise ValueError("checkpoint must start with a 'ring: <label>' line")
    label = lines[0].split(":", 1)[1].strip()
    plane = build_plane(label)
    out = []
    for ln in lines[1:]:
        chunks = _POINT_RE.findall(ln)
        if not chunks or _POINT_RE.sub("", ln).strip():
            raise ValueError(f"malformed checkpoint line {ln!r}")
        pts = []
        for chunk in chunks:
            coords = tuple(plane.ring.parse_element(t)
                           for t in chunk.split(":"))
            pts.append(plane.point_id[plane.canon_point(coords)])
        out.append(tuple(pts))
    return label, out


def brute_force_maximal_arcs(label: str) -> list[tuple[int, ...]]:
    """Every maximal 2-arc as a labeled set, by plain orderly DFS.

    No symmetry reduction: the output contains each maximal arc exactly
    once as a point set, which makes it an independent oracle for the
    symmetry-reduced search on small planes.
    """
    plane = build_plane(label)
    excl = plane.pair_excludes()
    n = plane.n_points
    full = plane.all_points_mask
    above = [(full & ~((1 << (p + 1)) - 1)) for p in range(n)]
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(cand: int) -> None:
        if cand == 0:
            out.append(tuple(prefix))
            return
        ext = cand & (above[prefix[-1]] if prefix else -1)
        for p in iter_bits(ext):
            m = cand & ~(1 << p)
            ex = excl[p]
            for q in prefix:
                m &= ~ex[q]
            prefix.append(p)
            rec(m)
            prefix.pop()

    rec(full)
    return out
