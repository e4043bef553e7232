"""Finite groups as Cayley tables.

Small groups only: the isomorphism search is capped at order 64, which
comfortably covers the catalog (nothing above Q8 x Z(2) ever shows up in
practice).  Construction validates the table fully, so a CayleyGroup in
hand is known to be a group, not just an array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .abelian import FgAbelian, canonical_form, prime_exponent, prime_factors
from .errors import InvalidInputError, NotFoundError, UnsupportedError

ISO_ORDER_CAP = 64


@dataclass(frozen=True)
class CayleyGroup:
    """A finite group presented by its full multiplication table.

    table[i][j] is the index of (element i) * (element j).
    """

    order: int
    element_names: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    identity_index: int

    def __post_init__(self):
        n = self.order
        if n < 1:
            raise InvalidInputError("group order must be positive")
        if len(self.element_names) != n or len(set(self.element_names)) != n:
            raise InvalidInputError("element names must be distinct and match order")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise InvalidInputError("table must be order x order")
        for row in self.table:
            for v in row:
                if not 0 <= v < n:
                    raise InvalidInputError("table entry out of range")
        for i in range(n):
            if sorted(self.table[i]) != list(range(n)):
                raise InvalidInputError("table row is not a permutation")
            if sorted(self.table[j][i] for j in range(n)) != list(range(n)):
                raise InvalidInputError("table column is not a permutation")
        e = self.identity_index
        if not 0 <= e < n:
            raise InvalidInputError("identity index out of range")
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise InvalidInputError("identity index is not a two-sided identity")
        for i in range(n):
            if self.inverse(i) is None:
                raise InvalidInputError("element lacks a two-sided inverse")
        if n <= ISO_ORDER_CAP:
            t = self.table
            for a in range(n):
                for b in range(n):
                    ab = t[a][b]
                    for c in range(n):
                        if t[ab][c] != t[a][t[b][c]]:
                            raise InvalidInputError("multiplication table is not associative")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> Optional[int]:
        e = self.identity_index
        for j in range(self.order):
            if self.table[i][j] == e and self.table[j][i] == e:
                return j
        return None

    def inv(self, i: int) -> int:
        j = self.inverse(i)
        if j is None:
            raise InvalidInputError("element lacks an inverse")
        return j

    def index_of(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise NotFoundError(f"no element named {name!r}") from None

    def element_order(self, i: int) -> int:
        e = self.identity_index
        x, k = i, 1
        while x != e:
            x = self.table[x][i]
            k += 1
        return k

    def conjugate(self, x: int, h: int) -> int:
        """x h x^-1."""
        return self.table[self.table[x][h]][self.inv(x)]


@dataclass(frozen=True)
class SubgroupRef:
    """A subgroup of a CayleyGroup, by sorted member indices."""

    parent: CayleyGroup
    element_indices: Tuple[int, ...]

    def __post_init__(self):
        g = self.parent
        members = set(self.element_indices)
        if tuple(sorted(members)) != self.element_indices:
            raise InvalidInputError("subgroup indices must be sorted and distinct")
        if g.identity_index not in members:
            raise InvalidInputError("subgroup must contain the identity")
        for a in members:
            if g.inv(a) not in members:
                raise InvalidInputError("subgroup must be closed under inverses")
            for b in members:
                if g.table[a][b] not in members:
                    raise InvalidInputError("subgroup must be closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.element_indices)

    def names(self) -> Tuple[str, ...]:
        return tuple(self.parent.element_names[i] for i in self.element_indices)

    def contains(self, i: int) -> bool:
        return i in set(self.element_indices)


def _closure(g: CayleyGroup, seeds: Iterable[int]) -> List[int]:
    seen = {g.identity_index}
    frontier = [g.identity_index]
    gens = list(seeds)
    for s in gens:
        if not 0 <= s < g.order:
            raise InvalidInputError("seed index out of range")
    # Finite group: closure under products already contains inverses.
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.table[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def subgroup_generated(g: CayleyGroup, seeds: Sequence[int]) -> SubgroupRef:
    """Smallest subgroup containing the seed elements.

    >>> q8 = from_catalog("Q8")
    >>> subgroup_generated(q8, [q8.index_of("i")]).names()
    ('1', '-1', 'i', '-i')
    >>> subgroup_generated(q8, []).order
    1
    """
    return SubgroupRef(g, tuple(_closure(g, seeds)))


def full_subgroup(g: CayleyGroup) -> SubgroupRef:
    return SubgroupRef(g, tuple(range(g.order)))


def trivial_subgroup(g: CayleyGroup) -> SubgroupRef:
    return SubgroupRef(g, (g.identity_index,))


def center(g: CayleyGroup) -> SubgroupRef:
    """Elements commuting with everything; always a normal subgroup.

    >>> center(from_catalog("Q8")).names()
    ('1', '-1')
    >>> center(from_catalog("Z2xZ2")).order
    4
    """
    members = tuple(sorted(
        z for z in range(g.order)
        if all(g.table[z][x] == g.table[x][z] for x in range(g.order))))
    return SubgroupRef(g, members)


def is_abelian(g: CayleyGroup) -> bool:
    return all(g.table[i][j] == g.table[j][i]
               for i in range(g.order) for j in range(i + 1, g.order))


def is_normal(g: CayleyGroup, n: SubgroupRef) -> bool:
    if n.parent is not g and n.parent != g:
        raise InvalidInputError("subgroup belongs to a different group")
    members = set(n.element_indices)
    return all(g.conjugate(x, h) in members
               for x in range(g.order) for h in members)


def commutator_subgroup(g: CayleyGroup) -> SubgroupRef:
    comms = set()
    for x in range(g.order):
        xi = g.inv(x)
        for y in range(g.order):
            # [x, y] = x y x^-1 y^-1
            comms.add(g.table[g.table[g.table[x][y]][xi]][g.inv(y)])
    return subgroup_generated(g, sorted(comms))


def quotient(g: CayleyGroup, n: SubgroupRef) -> CayleyGroup:
    """Coset group g/n; cosets are named "[r]" after their earliest member.

    >>> q8 = from_catalog("Q8")
    >>> q = quotient(q8, center(q8))
    >>> q.element_names
    ('[1]', '[i]', '[j]', '[k]')
    >>> is_isomorphic(q, from_catalog("Z2xZ2"))
    True
    """
    if not is_normal(g, n):
        raise InvalidInputError("cannot form quotient by a non-normal subgroup")
    members = list(n.element_indices)
    coset_of: Dict[int, int] = {}
    reps: List[int] = []
    for x in range(g.order):
        if x in coset_of:
            continue
        rep = len(reps)
        reps.append(x)
        for h in members:
            coset_of[g.table[x][h]] = rep
    k = len(reps)
    table = tuple(tuple(coset_of[g.table[reps[a]][reps[b]]] for b in range(k))
                  for a in range(k))
    names = tuple(f"[{g.element_names[r]}]" for r in reps)
    return CayleyGroup(k, names, table, coset_of[g.identity_index])


def subgroup_as_group(g: CayleyGroup, ref: SubgroupRef) -> CayleyGroup:
    """The subgroup itself as a standalone group, names kept verbatim."""
    idx = {x: t for t, x in enumerate(ref.element_indices)}
    k = len(ref.element_indices)
    table = tuple(tuple(idx[g.table[a][b]] for b in ref.element_indices)
                  for a in ref.element_indices)
    names = tuple(g.element_names[x] for x in ref.element_indices)
    return CayleyGroup(k, names, table, idx[g.identity_index])


def order_profile(g: CayleyGroup) -> Dict[int, int]:
    """How many elements of each order; a cheap isomorphism invariant."""
    prof: Dict[int, int] = {}
    for i in range(g.order):
        o = g.element_order(i)
        prof[o] = prof.get(o, 0) + 1
    return prof


def abelianization(g: CayleyGroup) -> FgAbelian:
    """g modulo its commutator subgroup, in invariant-factor form.

    >>> abelianization(from_catalog("Q8"))
    FgAbelian(rank=0, torsion=(2, 2))
    >>> abelianization(from_catalog("Z(6)"))
    FgAbelian(rank=0, torsion=(6,))
    """
    ab = quotient(g, commutator_subgroup(g))
    return abelian_structure(ab)


def abelian_structure(g: CayleyGroup) -> FgAbelian:
    """Invariant factors of an abelian Cayley group.

    Repeatedly split off a cyclic factor of maximal order: the counts
    #{x : x^(p^j) = e} determine the partition of exponents at each prime,
    and the partitions interleave into the divisor chain.
    """
    if not is_abelian(g):
        raise InvalidInputError("abelian_structure needs an abelian group")
    n = g.order
    if n == 1:
        return FgAbelian(0, ())
    return abelian_structure_by_counting(
        list(range(n)), lambda x, y: g.table[x][y], g.identity_index)


def abelian_structure_by_counting(elements, mul, identity) -> FgAbelian:
    """Invariant factors of a finite abelian group given by bare multiplication.

    For each prime p the counts #{x : x^(p^j) = e} determine the partition
    of p-exponents (the count is p to the sum of min(part, j)); the
    partitions then merge into the divisor chain largest part first.
    Works on any finite element list, no table required.
    """
    n = len(elements)
    if n == 1:
        return FgAbelian(0, ())

    def power(x, k):
        out = identity
        base = x
        while k:
            if k & 1:
                out = mul(out, base)
            base = mul(base, base)
            k >>= 1
        return out

    partitions: Dict[int, List[int]] = {}
    for p in prime_factors(n):
        counts = [1]
        j = 1
        while True:
            pj = p ** j
            counts.append(sum(1 for x in elements if power(x, pj) == identity))
            if counts[-1] == counts[-2]:
                counts.pop()
                break
            j += 1
        s = [prime_exponent(c, p) for c in counts]
        parts: List[int] = []
        for j in range(1, len(s)):
            width = s[j] - s[j - 1]  # parts of size >= j
            while len(parts) < width:
                parts.append(0)
            for t in range(width):
                parts[t] += 1
        partitions[p] = sorted(parts, reverse=True)
    depth = max(len(v) for v in partitions.values())
    factors = []
    for t in range(depth):
        f = 1
        for p, parts in partitions.items():
            if t < len(parts):
                f *= p ** parts[t]
        factors.append(f)
    return canonical_form(0, [f for f in factors if f >= 2])


# ---------------------------------------------------------------------------
# Catalog


def _cyclic(k: int) -> CayleyGroup:
    if k == 1:
        return CayleyGroup(1, ("e",), ((0,),), 0)
    names = tuple("e" if j == 0 else "t" if j == 1 else f"t{j}" for j in range(k))
    table = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
    return CayleyGroup(k, names, table, 0)


def _klein_four() -> CayleyGroup:
    names = ("e", "a", "b", "ab")
    # Multiplication is symmetric difference on {a, b}.
    table = (
        (0, 1, 2, 3),
        (1, 0, 3, 2),
        (2, 3, 0, 1),
        (3, 2, 1, 0),
    )
    return CayleyGroup(4, names, table, 0)


_Q8_MUL = {
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
}


def _quaternion() -> CayleyGroup:
    names = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")

    def split(nm):
        return (-1, nm[1:]) if nm.startswith("-") else (1, nm)

    def join(sign, axis):
        return axis if sign == 1 else "-" + axis

    def mul(na, nb):
        sa, xa = split(na)
        sb, xb = split(nb)
        if xa == "1":
            return join(sa * sb, xb)
        if xb == "1":
            return join(sa * sb, xa)
        s, x = _Q8_MUL[(xa, xb)]
        return join(sa * sb * s, x)

    idx = {nm: t for t, nm in enumerate(names)}
    table = tuple(tuple(idx[mul(a, b)] for b in names) for a in names)
    return CayleyGroup(8, names, table, 0)


def _dihedral4() -> CayleyGroup:
    # r^4 = s^2 = e, s r = r^-1 s
    names = ("e", "r", "r2", "r3", "s", "rs", "r2s", "r3s")

    def mul(a, b):
        ar, af = a % 4, a // 4
        br, bf = b % 4, b // 4
        rexp = (ar + br) % 4 if af == 0 else (ar - br) % 4
        return rexp + 4 * ((af + bf) % 2)

    table = tuple(tuple(mul(a, b) for b in range(8)) for a in range(8))
    return CayleyGroup(8, names, table, 0)


def _product(a: CayleyGroup, b: CayleyGroup) -> CayleyGroup:
    n = a.order * b.order
    names = tuple(f"({x},{y})" for x in a.element_names for y in b.element_names)
    table = tuple(
        tuple(a.table[x1][x2] * b.order + b.table[y1][y2]
              for x2 in range(a.order) for y2 in range(b.order))
        for x1 in range(a.order) for y1 in range(b.order))
    return CayleyGroup(n, names, table,
                       a.identity_index * b.order + b.identity_index)


def from_catalog(name: str) -> CayleyGroup:
    """Build a named group: trivial, Z(k), Z2xZ2, Q8, D4, or x-products.

    >>> from_catalog("Q8").order
    8
    >>> from_catalog("Z(1)").order
    1
    >>> from_catalog("Z(4)xZ2").order
    8
    """
    g = _try_catalog(name)
    if g is None:
        raise NotFoundError(f"unknown group name {name!r}")
    return g


def _try_catalog(name: str) -> Optional[CayleyGroup]:
    if name == "trivial":
        return _cyclic(1)
    if name == "Z2xZ2":
        return _klein_four()
    if name == "Q8":
        return _quaternion()
    if name == "D4":
        return _dihedral4()
    if name == "Z2":
        return _cyclic(2)
    if name.startswith("Z(") and name.endswith(")"):
        body = name[2:-1]
        if body.isdigit() and int(body) >= 1:
            return _cyclic(int(body))
        # else fall through: "Z(4)xZ(2)" also matches the delimiters
    for pos in range(1, len(name) - 1):
        if name[pos] != "x":
            continue
        left = _try_catalog(name[:pos])
        if left is None:
            continue
        right = _try_catalog(name[pos + 1:])
        if right is not None:
            return _product(left, right)
    return None


# ---------------------------------------------------------------------------
# Isomorphism testing


def _generating_sequence(g: CayleyGroup) -> List[int]:
    # Greedy, high element orders first, to keep the sequence short.
    by_order = sorted(range(g.order), key=lambda i: (-g.element_order(i), i))
    gens: List[int] = []
    closed = {g.identity_index}
    for x in by_order:
        if x not in closed:
            gens.append(x)
            closed = set(_closure(g, gens))
            if len(closed) == g.order:
                break
    return gens


def _closure_words(g: CayleyGroup, gens: Sequence[int]) -> Dict[int, Tuple[int, ...]]:
    """Each reachable element as a word (tuple of positions into gens)."""
    words: Dict[int, Tuple[int, ...]] = {g.identity_index: ()}
    frontier = [g.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for t, s in enumerate(gens):
                y = g.table[x][s]
                if y not in words:
                    words[y] = words[x] + (t,)
                    nxt.append(y)
        frontier = nxt
    return words


def _word_image(b: CayleyGroup, images: Sequence[int], word: Tuple[int, ...]) -> int:
    out = b.identity_index
    for t in word:
        out = b.table[out][images[t]]
    return out


def _partial_map_ok(a: CayleyGroup, b: CayleyGroup,
                    gens: Sequence[int], images: Sequence[int]) -> bool:
    words = _closure_words(a, gens)
    phi = {x: _word_image(b, images, w) for x, w in words.items()}
    if len(set(phi.values())) != len(phi):
        return False
    for x in phi:
        for y in phi:
            if phi[a.table[x][y]] != b.table[phi[x]][phi[y]]:
                return False
    return True


def find_isomorphism(a: CayleyGroup, b: CayleyGroup) -> Optional[Dict[int, int]]:
    """An explicit isomorphism a -> b as an index map, or None.

    Generator images are chosen by backtracking; each partial choice must
    already be an injective homomorphism on the subgroup generated so far.
    """
    if a.order != b.order:
        return None
    gens = _generating_sequence(a)
    if not gens:  # trivial group
        return {a.identity_index: b.identity_index}
    gen_orders = [a.element_order(x) for x in gens]
    by_order: Dict[int, List[int]] = {}
    for y in range(b.order):
        by_order.setdefault(b.element_order(y), []).append(y)

    images: List[int] = []

    def extend(t: int) -> bool:
        if t == len(gens):
            return True
        for y in by_order.get(gen_orders[t], ()):
            images.append(y)
            if _partial_map_ok(a, b, gens[:t + 1], images) and extend(t + 1):
                return True
            images.pop()
        return False

    if not extend(0):
        return None
    words = _closure_words(a, gens)
    return {x: _word_image(b, images, w) for x, w in words.items()}


def is_isomorphic(a: CayleyGroup, b: CayleyGroup) -> bool:
    """Isomorphism test for orders up to 64.

    Cheap invariants (order, element-order profile, center size,
    abelianization) reject most pairs before any search runs.

    >>> is_isomorphic(from_catalog("Q8"), from_catalog("D4"))
    False
    >>> is_isomorphic(from_catalog("Z(4)"), from_catalog("Z2xZ2"))
    False
    >>> is_isomorphic(quotient(from_catalog("Q8"), center(from_catalog("Q8"))),
    ...               from_catalog("Z2xZ2"))
    True
    """
    if a.order > ISO_ORDER_CAP or b.order > ISO_ORDER_CAP:
        raise UnsupportedError(f"isomorphism search is capped at order {ISO_ORDER_CAP}")
    if a.order != b.order:
        return False
    if order_profile(a) != order_profile(b):
        return False
    if center(a).order != center(b).order:
        return False
    if abelianization(a) != abelianization(b):
        return False
    return find_isomorphism(a, b) is not None
