"""Exact arithmetic tables for the finite chain rings of order at most 25.

Covers every finite chain ring R with composition length at most 2 whose
residue field F_q has q <= 5:

* the fields F2, F3, F4, F5 themselves,
* the integer rings Z4, Z9, Z25 (= Z_{p^2}),
* the Galois ring G4 = GR(16,4) = Z4[Y]/(Y^2+Y+1),
* the sigma-dual numbers Sq = F_q[X]/(X^2) for q in {2,3,4,5}, and
* T4 = F4[X; a -> a^2]/(X^2), the only noncommutative case.

Every ring is represented by a RingTable: elements are the indices
0..order-1, with full add/mul/neg/inv lookup tables.  Index 0 is zero and
index 1 is one.  Composite elements c0 + c1*B (B the adjoined generator,
X or y) get index c0 + |base|*c1, so the residue-field indices embed as
0..q-1 and the projection phi is just truncation for Z_{p^2} and the dual
numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

RING_LABELS = (
    "F2", "F3", "F4", "F5",
    "Z4", "S2",
    "Z9", "S3",
    "G4", "S4", "T4",
    "Z25", "S5",
)


class RingConstructionError(Exception):
    """A generated table failed one of the build-time consistency checks."""


@dataclass(frozen=True)
class RingSpec:
    """Structural parameters of a supported chain ring."""

    label: str
    kind: str          # "field" | "zpsq" | "galois" | "dual"
    p: int             # residue characteristic
    r: int             # residue field is F_q with q = p**r
    sigma_power: int   # s in the skew rule X*c = c**(p**s) * X (dual kind only)

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def m(self) -> int:
        """Composition length: 1 for fields, 2 for the chain rings proper."""
        return 1 if self.kind == "field" else 2

    @property
    def order(self) -> int:
        return self.q ** self.m

    @property
    def commutative(self) -> bool:
        return not (self.kind == "dual" and self.sigma_power % self.r != 0)


_SPECS = {
    "F2": RingSpec("F2", "field", 2, 1, 0),
    "F3": RingSpec("F3", "field", 3, 1, 0),
    "F4": RingSpec("F4", "field", 2, 2, 0),
    "F5": RingSpec("F5", "field", 5, 1, 0),
    "Z4": RingSpec("Z4", "zpsq", 2, 1, 0),
    "Z9": RingSpec("Z9", "zpsq", 3, 1, 0),
    "Z25": RingSpec("Z25", "zpsq", 5, 1, 0),
    "G4": RingSpec("G4", "galois", 2, 2, 0),
    "S2": RingSpec("S2", "dual", 2, 1, 0),
    "S3": RingSpec("S3", "dual", 3, 1, 0),
    "S4": RingSpec("S4", "dual", 2, 2, 0),
    "S5": RingSpec("S5", "dual", 5, 1, 0),
    "T4": RingSpec("T4", "dual", 2, 2, 1),
}


@dataclass
class RingTable:
    """A finite chain ring given by complete lookup tables.

    `add` and `mul` are order x order nested lists indexed by element
    indices; `mul[a][b]` is a*b in that order (T4 is noncommutative).
    `inv[a]` is -1 when a is not a unit.  `aut_gens` holds index
    permutations generating the chosen ring-automorphism subgroup; each
    one has been verified against the tables at build time.
    """

    spec: RingSpec
    add: list[list[int]]
    mul: list[list[int]]
    neg: list[int]
    inv: list[int]
    unit: list[bool]
    phi_map: list[int]
    lift_map: list[int]
    radical_gen: int | None
    aut_gens: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.spec.label

    @property
    def order(self) -> int:
        return self.spec.order

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def m(self) -> int:
        return self.spec.m

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> list[int]:
        return [a for a in self.elements() if self.unit[a]]

    def is_unit(self, a: int) -> bool:
        return self.unit[a]

    def inverse(self, a: int) -> int:
        v = self.inv[a]
        if v < 0:
            raise ValueError(f"{self.format_element(a)} is not a unit in {self.label}")
        return v

    def phi(self, a: int) -> int:
        """Project to the residue field (index in the residue RingTable)."""
        return self.phi_map[a]

    def lift(self, a: int) -> int:
        """Fixed section of phi: residue-field index -> ring index."""
        return self.lift_map[a]

    @property
    def residue(self) -> "RingTable | None":
        """Residue field table, or None when the ring is itself a field."""
        if self.spec.m == 1:
            return None
        return build_ring(_RESIDUE_LABEL[self.label])

    def dot(self, row: tuple[int, ...], col: tuple[int, ...]) -> int:
        """sum_i row[i]*col[i] with left factors from the row (matters for T4)."""
        acc = 0
        for a, b in zip(row, col):
            acc = self.add[acc][self.mul[a][b]]
        return acc

    # -- element text notation ------------------------------------------

    def format_element(self, a: int) -> str:
        return _FORMATTERS[self.label](a)

    def parse_element(self, token: str) -> int:
        value = _PARSERS[self.label](token)
        if value is None:
            raise ValueError(f"malformed {self.label} element token {token!r}")
        return value


_RESIDUE_LABEL = {
    "Z4": "F2", "S2": "F2",
    "Z9": "F3", "S3": "F3",
    "G4": "F4", "S4": "F4", "T4": "F4",
    "Z25": "F5", "S5": "F5",
}


# -- raw table builders -------------------------------------------------

def _modular_tables(n: int):
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    return add, mul


def _quadratic_ext_tables(base_add, base_mul, base_neg, order: int):
    """Adjoin y with y^2 = -1 - y to a commutative base ring.

    Element c0 + c1*y has index c0 + order*c1.  Y^2+Y+1 is irreducible
    mod 2, which covers both F4 (base F2) and G4 (base Z4).
    """
    n = order * order
    add = [[0] * n for _ in range(n)]
    mul = [[0] * n for _ in range(n)]
    for a in range(n):
        a0, a1 = a % order, a // order
        for b in range(n):
            b0, b1 = b % order, b // order
            add[a][b] = base_add[a0][b0] + order * base_add[a1][b1]
            # (a0+a1 y)(b0+b1 y) with y^2 = -1 - y
            t = base_mul[a1][b1]
            c0 = base_add[base_mul[a0][b0]][base_neg[t]]
            c1 = base_add[base_add[base_mul[a0][b1]][base_mul[a1][b0]]][base_neg[t]]
            mul[a][b] = c0 + order * c1
    return add, mul


def _dual_tables(fq: "RingTable", sigma: "list[int]"):
    """F_q[X; sigma]/(X^2): pairs a+bX with (a+bX)(c+dX) = ac + (ad+b*sigma(c))X."""
    q = fq.order
    n = q * q
    add = [[0] * n for _ in range(n)]
    mul = [[0] * n for _ in range(n)]
    for x in range(n):
        a, b = x % q, x // q
        for y in range(n):
            c, d = y % q, y // q
            add[x][y] = fq.add[a][c] + q * fq.add[b][d]
            mul[x][y] = fq.mul[a][c] + q * fq.add[fq.mul[a][d]][fq.mul[b][sigma[c]]]
    return add, mul


def _derive_neg_inv_units(add, mul, n: int):
    neg = [0] * n
    inv = [-1] * n
    unit = [False] * n
    for a in range(n):
        for b in range(n):
            if add[a][b] == 0:
                neg[a] = b
                break
        for b in range(n):
            if mul[a][b] == 1:
                if mul[b][a] != 1:
                    raise RingConstructionError("one-sided inverse found")
                inv[a] = b
                unit[a] = True
                break
    return neg, inv, unit


def _multiplicative_order(mul, a: int) -> int:
    k, x = 1, a
    while x != 1:
        x = mul[x][a]
        k += 1
        if k > len(mul):
            raise RingConstructionError("element order runaway")
    return k


def _primitive_element(fq: "RingTable") -> int:
    """Smallest index generating the multiplicative group of a field table."""
    target = fq.order - 1
    for a in range(2, fq.order):
        if _multiplicative_order(fq.mul, a) == target:
            return a
    if target == 1:
        return 1
    raise RingConstructionError(f"no primitive element in {fq.label}")


def _field_power(fq: "RingTable", a: int, e: int) -> int:
    x = 1
    for _ in range(e):
        x = fq.mul[x][a]
    return x


def _check_automorphism(add, mul, perm) -> bool:
    n = len(add)
    if sorted(perm) != list(range(n)) or perm[0] != 0 or perm[1] != 1:
        return False
    for a in range(n):
        pa = perm[a]
        for b in range(n):
            if perm[add[a][b]] != add[pa][perm[b]]:
                return False
            if perm[mul[a][b]] != mul[pa][perm[b]]:
                return False
    return True


def _validate(table: RingTable) -> None:
    spec, add, mul = table.spec, table.add, table.mul
    n = spec.order
    if add[0] != list(range(n)) or any(mul[1][b] != b or mul[b][1] != b for b in range(n)):
        raise RingConstructionError(f"{spec.label}: 0/1 are not at indices 0/1")
    units = sum(table.unit)
    if spec.m == 1:
        expected_units = n - 1
    else:
        expected_units = spec.q ** 2 - spec.q
    if units != expected_units:
        raise RingConstructionError(f"{spec.label}: unit count {units} != {expected_units}")
    if spec.m == 2:
        rad = table.radical_gen
        if rad is None or table.unit[rad]:
            raise RingConstructionError(f"{spec.label}: bad radical generator")
        if mul[rad][rad] != 0:
            raise RingConstructionError(f"{spec.label}: radical generator squares to nonzero")
        res = table.residue
        # phi must be a surjective homomorphism with lift a section.
        for a in range(n):
            for b in range(n):
                if table.phi_map[add[a][b]] != res.add[table.phi_map[a]][table.phi_map[b]]:
                    raise RingConstructionError(f"{spec.label}: phi not additive")
                if table.phi_map[mul[a][b]] != res.mul[table.phi_map[a]][table.phi_map[b]]:
                    raise RingConstructionError(f"{spec.label}: phi not multiplicative")
        for a in range(spec.q):
            if table.phi_map[table.lift_map[a]] != a:
                raise RingConstructionError(f"{spec.label}: lift is not a section of phi")
        for a in range(n):
            if table.unit[a] != (table.phi_map[a] != 0):
                raise RingConstructionError(f"{spec.label}: units disagree with phi")
    for perm in table.aut_gens:
        if not _check_automorphism(add, mul, perm):
            raise RingConstructionError(f"{spec.label}: generator is not a ring automorphism")


# -- the thirteen rings --------------------------------------------------

@lru_cache(maxsize=None)
def build_ring(label: str) -> RingTable:
    """Build (and cache) the verified RingTable for one of RING_LABELS."""
    if label not in _SPECS:
        raise ValueError(f"unknown ring label {label!r}")
    spec = _SPECS[label]
    ident = list(range(spec.order))

    if spec.kind == "field" and spec.r == 1:
        add, mul = _modular_tables(spec.p)
        table = RingTable(spec, add, mul, *_derive_neg_inv_units(add, mul, spec.p),
                          phi_map=ident, lift_map=ident, radical_gen=None)

    elif spec.kind == "field":
        base = build_ring(f"F{spec.p}")
        add, mul = _quadratic_ext_tables(base.add, base.mul, base.neg, spec.p)
        table = RingTable(spec, add, mul, *_derive_neg_inv_units(add, mul, spec.order),
                          phi_map=ident, lift_map=ident, radical_gen=None)
        frob = tuple(_field_power(table, a, spec.p) for a in range(spec.order))
        table.aut_gens = [frob]

    elif spec.kind == "zpsq":
        n = spec.p ** 2
        add, mul = _modular_tables(n)
        table = RingTable(spec, add, mul, *_derive_neg_inv_units(add, mul, n),
                          phi_map=[a % spec.p for a in range(n)],
                          lift_map=list(range(spec.p)), radical_gen=spec.p)

    elif spec.kind == "galois":
        base = build_ring("Z4")
        add, mul = _quadratic_ext_tables(base.add, base.mul, base.neg, 4)
        n = spec.order
        phi = [(a % 4) % 2 + 2 * ((a // 4) % 2) for a in range(n)]
        lift = [(a % 2) + 4 * (a // 2) for a in range(4)]
        table = RingTable(spec, add, mul, *_derive_neg_inv_units(add, mul, n),
                          phi_map=phi, lift_map=lift, radical_gen=2)
        # Generalized Frobenius: substitute y -> y^2 (= 3+3y), coefficients fixed.
        ysq = mul[4][4]
        table.aut_gens = [tuple(add[a % 4][mul[a // 4][ysq]] for a in range(n))]

    else:  # dual numbers, possibly skew
        fq = build_ring(f"F{spec.q}")
        if spec.sigma_power % spec.r == 0:
            sigma = list(range(spec.q))
        else:
            sigma = [_field_power(fq, a, spec.p ** spec.sigma_power) for a in range(spec.q)]
        add, mul = _dual_tables(fq, sigma)
        q, n = spec.q, spec.order
        table = RingTable(spec, add, mul, *_derive_neg_inv_units(add, mul, n),
                          phi_map=[a % q for a in range(n)],
                          lift_map=list(range(q)), radical_gen=q)
        gens = []
        u = _primitive_element(fq)
        if u != 1:
            gens.append(tuple((a % q) + q * fq.mul[u][a // q] for a in range(n)))
        if spec.r > 1:
            frob = [_field_power(fq, a, spec.p) for a in range(q)]
            gens.append(tuple(frob[a % q] + q * frob[a // q] for a in range(n)))
        if spec.label == "T4":
            # Only the Frobenius-like map; X -> uX is inner (conjugation by a
            # scalar unit) and adds nothing to the plane's collineations.
            gens = gens[1:]
        table.aut_gens = gens

    _validate(table)
    return table


def ring_automorphism_generators(label: str) -> list[tuple[int, ...]]:
    """Verified generators of the ring-automorphism group used for collineations."""
    return list(build_ring(label).aut_gens)


def automorphism_group_order(label: str) -> int:
    """Order of the permutation group generated by aut_gens (tiny closure)."""
    table = build_ring(label)
    ident = tuple(range(table.order))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in table.aut_gens:
                q = tuple(g[p[i]] for i in range(table.order))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


# -- element notation ----------------------------------------------------

_F4_NAMES = ("0", "1", "w", "w+1")
_F4_BY_NAME = {name: i for i, name in enumerate(_F4_NAMES)}


def _fmt_int(a: int) -> str:
    return str(a)


def _fmt_dual_digits(q: int):
    def fmt(x: int) -> str:
        a, b = x % q, x // q
        if b == 0:
            return str(a)
        xpart = "X" if b == 1 else f"{b}X"
        return xpart if a == 0 else f"{xpart}+{a}"
    return fmt


def _fmt_dual_f4(x: int) -> str:
    a, b = x % 4, x // 4
    if b == 0:
        return _F4_NAMES[a]
    if b == 1:
        xpart = "X"
    elif b == 2:
        xpart = "wX"
    else:
        xpart = "(w+1)X"
    return xpart if a == 0 else f"{xpart}+{_F4_NAMES[a]}"


def _fmt_g4(x: int) -> str:
    a, b = x % 4, x // 4
    if b == 0:
        return str(a)
    ypart = f"{b}*y"
    return ypart if a == 0 else f"{a}+{ypart}"


def _parse_int(n: int):
    def parse(token: str):
        if re.fullmatch(r"\d+", token):
            v = int(token)
            if v < n:
                return v
        return None
    return parse


def _parse_f4(token: str):
    return _F4_BY_NAME.get(token)


def _parse_dual(q: int, scalar):
    def parse(token: str):
        if "X" not in token:
            a = scalar(token)
            return None if a is None else a
        pre, _, post = token.partition("X")
        if pre == "":
            b = 1
        else:
            if pre.startswith("(") and pre.endswith(")"):
                pre = pre[1:-1]
            b = scalar(pre)
        if post == "":
            a = 0
        elif post.startswith("+"):
            a = scalar(post[1:])
        else:
            a = None
        if a is None or b is None or b == 0:
            return None
        return a + q * b
    return parse


def _parse_g4(token: str):
    m = re.fullmatch(r"(\d+)", token)
    if m:
        v = int(m.group(1))
        return v if v < 4 else None
    m = re.fullmatch(r"(?:(\d+)\+)?(?:(\d+)\*)?y", token)
    if not m:
        return None
    a = int(m.group(1)) if m.group(1) else 0
    b = int(m.group(2)) if m.group(2) else 1
    if a >= 4 or b >= 4 or b == 0:
        return None
    return a + 4 * b


_FORMATTERS = {
    "F2": _fmt_int, "F3": _fmt_int, "F5": _fmt_int,
    "F4": lambda a: _F4_NAMES[a],
    "Z4": _fmt_int, "Z9": _fmt_int, "Z25": _fmt_int,
    "S2": _fmt_dual_digits(2), "S3": _fmt_dual_digits(3), "S5": _fmt_dual_digits(5),
    "S4": _fmt_dual_f4, "T4": _fmt_dual_f4,
    "G4": _fmt_g4,
}

_PARSERS = {
    "F2": _parse_int(2), "F3": _parse_int(3), "F5": _parse_int(5),
    "F4": _parse_f4,
    "Z4": _parse_int(4), "Z9": _parse_int(9), "Z25": _parse_int(25),
    "S2": _parse_dual(2, _parse_int(2)),
    "S3": _parse_dual(3, _parse_int(3)),
    "S5": _parse_dual(5, _parse_int(5)),
    "S4": _parse_dual(4, _parse_f4),
    "T4": _parse_dual(4, _parse_f4),
    "G4": _parse_g4,
}
