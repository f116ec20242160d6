"""Finite groups as fully materialized permutation groups.

Groups are enumerated completely at construction (orders stay small, a few
thousand at most), elements are permutations stored as numpy index arrays,
and element *indices* into the table are the currency every other module
trades in.  All objects are immutable after construction; lazily built
caches only ever add data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm

import numpy as np

from .numtheory import is_prime

DEFAULT_ORDER_BOUND = 10_000
DEFAULT_ISO_BOUND = 200
_MULT_TABLE_LIMIT = 600

_uid_counter = itertools.count()


class OrderBoundExceeded(RuntimeError):
    """Raised when a group enumeration or search exceeds its order bound."""


class ConstructionError(RuntimeError):
    """Raised when a group construction fails its own consistency checks."""


class Permutation:
    """A permutation of {1..d}, stored 0-based as a numpy int32 image array."""

    __slots__ = ("array",)

    def __init__(self, images, zero_based: bool = False):
        arr = np.array(images, dtype=np.int32)
        if not zero_based:
            arr = arr - 1
        d = len(arr)
        if d == 0 or sorted(arr.tolist()) != list(range(d)):
            raise ValueError(f"not a bijection on {{1..{d}}}: {list(images)}")
        arr.flags.writeable = False
        self.array = arr

    @property
    def degree(self) -> int:
        return len(self.array)

    @property
    def images(self) -> tuple[int, ...]:
        """1-based image tuple, matching the external file format."""
        return tuple(int(x) + 1 for x in self.array)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # apply self first, then other
        return Permutation(other.array[self.array], zero_based=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.array, other.array)

    def __hash__(self) -> int:
        return hash(self.array.tobytes())

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def _perm_order(arr: np.ndarray) -> int:
    seen = np.zeros(len(arr), dtype=bool)
    result = 1
    for start in range(len(arr)):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = int(arr[p])
            length += 1
        result = lcm(result, length)
    return result


class FiniteGroup:
    """A fully enumerated permutation group.

    Element 0 is the identity.  Structural data (element orders, center,
    derived subgroup, conjugacy classes, exponent) is computed at
    construction so instances can be shared freely afterwards.
    """

    def __init__(self, generators: list[Permutation], degree: int | None = None,
                 bound: int = DEFAULT_ORDER_BOUND, name: str | None = None):
        if generators:
            degs = {g.degree for g in generators}
            if len(degs) != 1:
                raise ValueError(f"generator degree mismatch: {sorted(degs)}")
            self.degree = degs.pop()
            if degree is not None and degree != self.degree:
                raise ValueError("explicit degree disagrees with generators")
        else:
            self.degree = 1 if degree is None else degree
        self.generators = tuple(generators)
        self.name = name
        self._uid = next(_uid_counter)

        ident = np.arange(self.degree, dtype=np.int32)
        gen_arrays = [g.array for g in generators]

        # a base: point prefix on which elements act distinctly
        elements = [ident]
        keys = {ident.tobytes(): 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gen_arrays:
                    y = g[x]
                    key = y.tobytes()
                    if key not in keys:
                        if len(elements) >= bound:
                            raise OrderBoundExceeded(
                                f"group order exceeds bound {bound}")
                        keys[key] = len(elements)
                        elements.append(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = np.array(elements, dtype=np.int32)
        self.order = len(elements)
        self._base = self._find_base()
        self._lookup = {}
        base_cols = self.elements[:, self._base]
        for i in range(self.order):
            self._lookup[base_cols[i].tobytes()] = i

        self._mtable: np.ndarray | None = None
        if self.order <= _MULT_TABLE_LIMIT:
            self._build_mult_table()

        inv = np.empty(self.order, dtype=np.int32)
        for i in range(self.order):
            arr = self.elements[i]
            ia = np.empty(self.degree, dtype=np.int32)
            ia[arr] = ident
            inv[i] = self._find(ia)
        self._inverse = inv

        self.element_orders = np.array(
            [_perm_order(self.elements[i]) for i in range(self.order)],
            dtype=np.int64)
        self.exponent = lcm(*self.element_orders.tolist())
        self.gen_indices = tuple(self._find(g.array) for g in generators)

        self.conjugacy_classes = self._compute_classes()
        self._class_of = np.empty(self.order, dtype=np.int32)
        for ci, cls in enumerate(self.conjugacy_classes):
            for x in cls:
                self._class_of[x] = ci
        self.center = self._compute_center()
        self.derived_subgroup = self._compute_derived()
        self._all_subgroups_cache = None
        self._normal_subgroups_cache = None
        self._fingerprint_cache = None
        self._sub_group_cache: dict = {}

    def _find_base(self) -> list[int]:
        """A point prefix on which the elements act pairwise distinctly."""
        n = self.order
        if n == 1:
            return [0]
        distinct = [(-len(np.unique(self.elements[:, p])), p)
                    for p in range(self.degree)]
        point_order = [p for _, p in sorted(distinct)]
        base: list[int] = []
        sigs = np.zeros(n, dtype=np.int64)
        nclasses = 1
        for p in point_order:
            if nclasses == n:
                break
            refined: dict[tuple[int, int], int] = {}
            new = np.empty(n, dtype=np.int64)
            col = self.elements[:, p]
            for i in range(n):
                key = (int(sigs[i]), int(col[i]))
                if key not in refined:
                    refined[key] = len(refined)
                new[i] = refined[key]
            if len(refined) > nclasses:
                base.append(p)
                sigs = new
                nclasses = len(refined)
        if nclasses != n:
            raise ConstructionError("generators do not act faithfully")
        return base

    def _find(self, arr: np.ndarray) -> int:
        return self._lookup[arr[self._base].tobytes()]

    def _build_mult_table(self) -> None:
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            rows = self.elements[:, self.elements[i]]  # compose(e_i, e_j) for all j
            base_cols = rows[:, self._base]
            for j in range(n):
                table[i, j] = self._lookup[base_cols[j].tobytes()]
        self._mtable = table

    # -- basic arithmetic on element indices --------------------------------

    def mult(self, i: int, j: int) -> int:
        if self._mtable is not None:
            return int(self._mtable[i, j])
        comp = self.elements[j][self.elements[i]]
        return self._lookup[comp[self._base].tobytes()]

    def inv(self, i: int) -> int:
        return int(self._inverse[i])

    def conj(self, x: int, g: int) -> int:
        """g^-1 * x * g."""
        return self.mult(self.mult(self.inv(g), x), g)

    def power(self, x: int, n: int) -> int:
        n %= int(self.element_orders[x])
        acc = 0
        for _ in range(n):
            acc = self.mult(acc, x)
        return acc

    def commutator(self, x: int, y: int) -> int:
        """x^-1 y^-1 x y."""
        return self.mult(self.mult(self.inv(x), self.inv(y)), self.mult(x, y))

    def index_of(self, perm: Permutation) -> int:
        key = perm.array[self._base].tobytes()
        if key not in self._lookup:
            raise ValueError("permutation is not an element of this group")
        idx = self._lookup[key]
        if not np.array_equal(self.elements[idx], perm.array):
            raise ValueError("permutation is not an element of this group")
        return idx

    def class_of(self, x: int) -> int:
        return int(self._class_of[x])

    def class_reps(self) -> list[int]:
        return [cls[0] for cls in self.conjugacy_classes]

    # -- closure and structural data -----------------------------------------

    def closure(self, seed) -> frozenset[int]:
        """Subgroup generated by the given element indices.

        The seed is first thinned to an irredundant generating subset, so
        closing a large union costs about order * log2(order) products.
        """
        gens: list[int] = []
        found = {0}
        for s in sorted(set(seed)):
            if s in found:
                continue
            gens.append(s)
            frontier = list(found)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = self.mult(x, g)
                        if y not in found:
                            found.add(y)
                            nxt.append(y)
                frontier = nxt
        return frozenset(found)

    def _compute_classes(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        gens = [self._find(g.array) for g in self.generators]
        for x in range(self.order):
            if seen[x]:
                continue
            orbit = {x}
            frontier = [x]
            seen[x] = True
            while frontier:
                nxt = []
                for y in frontier:
                    for g in gens:
                        z = self.conj(y, g)
                        if not seen[z]:
                            seen[z] = True
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            classes.append(tuple(sorted(orbit)))
        return classes

    def _compute_center(self) -> "SubgroupHandle":
        gens = list(self.gen_indices)
        central = [x for x in range(self.order)
                   if all(self.mult(x, g) == self.mult(g, x) for g in gens)]
        return SubgroupHandle(self, frozenset(central))

    def _compute_derived(self) -> "SubgroupHandle":
        comms = {self.commutator(a, b)
                 for a in self.gen_indices for b in self.gen_indices}
        return SubgroupHandle(self, self._normal_closure(comms, self.gen_indices))

    def _normal_closure(self, seed, conj_gens) -> frozenset[int]:
        current = self.closure(seed)
        while True:
            extra = {self.conj(x, g) for x in current for g in conj_gens}
            if extra <= current:
                return current
            current = self.closure(current | extra)

    @property
    def is_abelian(self) -> bool:
        return self.derived_subgroup.order == 1

    @property
    def is_cyclic(self) -> bool:
        return bool((self.element_orders == self.order).any())

    @property
    def is_metabelian(self) -> bool:
        return subgroup_is_abelian(self.derived_subgroup)

    @property
    def is_solvable(self) -> bool:
        current = self.derived_subgroup
        while current.order > 1:
            nxt = subgroup_derived(current)
            if nxt.order == current.order:
                return False
            current = nxt
        return True

    def trivial_subgroup(self) -> "SubgroupHandle":
        return SubgroupHandle(self, frozenset({0}))

    def full_subgroup(self) -> "SubgroupHandle":
        return SubgroupHandle(self, frozenset(range(self.order)))

    def subgroup(self, seed) -> "SubgroupHandle":
        return SubgroupHandle(self, self.closure(seed))

    def __repr__(self) -> str:
        label = self.name or f"degree-{self.degree} group"
        return f"<FiniteGroup {label} of order {self.order}>"


class SubgroupHandle:
    """A subgroup of a parent FiniteGroup, held as a frozen set of indices."""

    __slots__ = ("parent", "elements", "key", "_gens", "_normal")

    def __init__(self, parent: FiniteGroup, elements: frozenset[int],
                 generators: tuple[int, ...] | None = None):
        self.parent = parent
        self.elements = elements
        self.key = tuple(sorted(elements))
        self._gens = generators
        self._normal: bool | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> tuple[int, ...]:
        if self._gens is None:
            G = self.parent
            gens: list[int] = []
            have: frozenset[int] = frozenset({0})
            for x in self.key:
                if x not in have:
                    gens.append(x)
                    have = G.closure(gens)
                    if len(have) == self.order:
                        break
            self._gens = tuple(gens)
        return self._gens

    def __contains__(self, idx: int) -> bool:
        return idx in self.elements

    def __le__(self, other: "SubgroupHandle") -> bool:
        return self.elements <= other.elements

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubgroupHandle)
                and self.parent is other.parent
                and self.elements == other.elements)

    def __hash__(self) -> int:
        return hash((self.parent._uid, self.key))

    @property
    def is_normal(self) -> bool:
        if self._normal is None:
            G = self.parent
            self._normal = all(G.conj(x, g) in self.elements
                               for g in G.gen_indices for x in self.generators)
        return self._normal

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent!r}>"


def subgroup_is_abelian(H: SubgroupHandle) -> bool:
    G = H.parent
    gens = H.generators
    return all(G.mult(a, b) == G.mult(b, a)
               for i, a in enumerate(gens) for b in gens[i + 1:])


def subgroup_is_cyclic(H: SubgroupHandle) -> bool:
    G = H.parent
    return any(int(G.element_orders[x]) == H.order for x in H.key)


def subgroup_derived(H: SubgroupHandle) -> SubgroupHandle:
    """Derived subgroup of H, as a subgroup of the same parent."""
    G = H.parent
    gens = H.generators
    comms = {G.commutator(a, b) for a in gens for b in gens}
    return SubgroupHandle(G, G._normal_closure(comms, gens))


def centralizer(G: FiniteGroup, H: SubgroupHandle) -> SubgroupHandle:
    gens = H.generators
    elems = frozenset(x for x in range(G.order)
                      if all(G.mult(x, h) == G.mult(h, x) for h in gens))
    return SubgroupHandle(G, elems)


def normalizer(G: FiniteGroup, K: SubgroupHandle) -> SubgroupHandle:
    """N_G(K) by brute force over all group elements."""
    if K.parent is not G:
        raise ValueError("K is not a subgroup of G")
    gens = K.generators
    elems = frozenset(g for g in range(G.order)
                      if all(G.conj(k, g) in K.elements for k in gens))
    return SubgroupHandle(G, elems)


def core(G: FiniteGroup, K: SubgroupHandle) -> SubgroupHandle:
    """Largest normal subgroup of G inside K: intersect conjugates to a fixpoint."""
    if K.parent is not G:
        raise ValueError("K is not a subgroup of G")
    current = set(K.elements)
    gens = list(G.gen_indices) + [G.inv(g) for g in G.gen_indices]
    changed = True
    while changed:
        changed = False
        for g in gens:
            conj = {G.conj(x, g) for x in current}
            if not conj >= current:
                current &= conj
                changed = True
    return SubgroupHandle(G, frozenset(current))


def is_maximal_abelian(A: SubgroupHandle, G: FiniteGroup) -> bool:
    """True iff A is abelian and equals its own centralizer in G."""
    if not subgroup_is_abelian(A):
        raise ValueError("A is not abelian")
    return centralizer(G, A).elements == A.elements


def all_subgroups(G: FiniteGroup) -> list[SubgroupHandle]:
    """Every subgroup of G, sorted by (order, element set).

    Cyclic extension from the cyclic subgroups reaches every solvable
    subgroup; when G itself is non-solvable a closure sweep afterwards
    picks up the rest.
    """
    if G._all_subgroups_cache is not None:
        return G._all_subgroups_cache
    found: dict[frozenset[int], tuple[int, ...]] = {frozenset({0}): ()}
    for x in range(1, G.order):
        found.setdefault(G.closure([x]), (x,))
    queue = list(found.items())
    while queue:
        H, gens = queue.pop()
        norm = [g for g in range(G.order)
                if g not in H and all(G.conj(k, g) in H for k in gens)]
        for g in norm:
            t = 1
            p = g
            while p not in H:
                p = G.mult(p, g)
                t += 1
            if not is_prime(t):
                continue
            S = G.closure(set(gens) | {g})
            if S not in found:
                sgens = tuple(_reduce_gens(G, S))
                found[S] = sgens
                queue.append((S, sgens))
    if not G.is_solvable:
        queue = list(found.items())
        while queue:
            H, gens = queue.pop()
            for g in range(G.order):
                if g in H:
                    continue
                S = G.closure(set(gens) | {g})
                if S not in found:
                    sgens = tuple(_reduce_gens(G, S))
                    found[S] = sgens
                    queue.append((S, sgens))
    handles = [SubgroupHandle(G, elems, gens or None)
               for elems, gens in found.items()]
    handles.sort(key=lambda h: (h.order, h.key))
    G._all_subgroups_cache = handles
    return handles


def _reduce_gens(G: FiniteGroup, H) -> list[int]:
    gens: list[int] = []
    have: frozenset[int] = frozenset({0})
    for x in sorted(H):
        if x not in have:
            gens.append(x)
            have = G.closure(gens)
            if len(have) == len(H):
                break
    return gens


def normal_subgroups(G: FiniteGroup) -> list[SubgroupHandle]:
    """All normal subgroups, enumerated by closing unions of conjugacy classes."""
    if G._normal_subgroups_cache is not None:
        return G._normal_subgroups_cache
    classes = G.conjugacy_classes
    found: dict[frozenset[int], None] = {frozenset({0}): None}
    queue = [frozenset({0})]
    while queue:
        N = queue.pop()
        for cls in classes:
            if cls[0] in N:
                continue
            M = G.closure(set(N) | set(cls))
            if M not in found:
                found[M] = None
                queue.append(M)
    handles = [SubgroupHandle(G, elems) for elems in found]
    handles.sort(key=lambda h: (h.order, h.key))
    G._normal_subgroups_cache = handles
    return handles


@dataclass(frozen=True)
class QuotientMap:
    """The canonical projection G -> G/N with the image in its regular action."""

    source: FiniteGroup
    kernel: SubgroupHandle
    image: FiniteGroup
    element_map: np.ndarray = field(repr=False)

    def __call__(self, idx: int) -> int:
        return int(self.element_map[idx])

    def preimage(self, sub: SubgroupHandle) -> SubgroupHandle:
        members = frozenset(x for x in range(self.source.order)
                            if int(self.element_map[x]) in sub.elements)
        return SubgroupHandle(self.source, members)


def quotient(G: FiniteGroup, N: SubgroupHandle) -> QuotientMap:
    """Quotient by a normal subgroup, image as the regular action on cosets."""
    if N.parent is not G:
        raise ValueError("N is not a subgroup of G")
    if not N.is_normal:
        raise ValueError("N is not normal in G")
    rep = np.full(G.order, -1, dtype=np.int64)
    cosets: list[int] = []
    coset_no: dict[int, int] = {}
    for x in range(G.order):
        if rep[x] >= 0:
            continue
        members = sorted(G.mult(n, x) for n in N.key)
        r = members[0]
        coset_no[r] = len(cosets)
        cosets.append(r)
        for m in members:
            rep[m] = r
    m = len(cosets)
    img_gens = [Permutation([coset_no[int(rep[G.mult(c, g)])] + 1 for c in cosets])
                for g in G.gen_indices]
    image = FiniteGroup(img_gens, degree=m)
    emap = np.full(G.order, -1, dtype=np.int64)
    emap[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(G.gen_indices):
                y = G.mult(x, g)
                if emap[y] < 0:
                    emap[y] = image.mult(int(emap[x]), image.gen_indices[gi])
                    nxt.append(y)
        frontier = nxt
    return QuotientMap(G, N, image, emap)


def subgroup_as_group(H: SubgroupHandle) -> tuple[FiniteGroup, dict[int, int], list[int]]:
    """Regular realization of a subgroup as a standalone FiniteGroup.

    Returns (group, to_sub, from_sub): to_sub maps parent element indices
    into the new group, from_sub is the inverse list.
    """
    cache = H.parent._sub_group_cache
    if H.key in cache:
        return cache[H.key]
    G = H.parent
    members = list(H.key)
    pos = {x: i for i, x in enumerate(members)}
    gens = [Permutation([pos[G.mult(x, g)] + 1 for x in members])
            for g in H.generators]
    sub = FiniteGroup(gens, degree=max(len(members), 1))
    to_sub: dict[int, int] = {}
    for x in members:
        arr = np.array([pos[G.mult(y, x)] for y in members], dtype=np.int32)
        to_sub[x] = sub._lookup[arr[sub._base].tobytes()]
    from_sub = [0] * sub.order
    for parent_idx, sub_idx in to_sub.items():
        from_sub[sub_idx] = parent_idx
    result = (sub, to_sub, from_sub)
    cache[H.key] = result
    return result


# -- isomorphism testing -----------------------------------------------------

def _order_histogram(G: FiniteGroup) -> tuple[tuple[int, int], ...]:
    vals, counts = np.unique(G.element_orders, return_counts=True)
    return tuple(zip(vals.tolist(), counts.tolist()))


def _abelian_invariants(G: FiniteGroup) -> tuple[tuple[int, int], ...]:
    """Order histogram of G/G', which pins down the abelianization."""
    if G.derived_subgroup.order == 1:
        return _order_histogram(G)
    q = quotient(G, G.derived_subgroup)
    return _order_histogram(q.image)


def _derived_length(G: FiniteGroup) -> int:
    length = 0
    current = G.full_subgroup()
    while current.order > 1:
        nxt = subgroup_derived(current) if length else G.derived_subgroup
        if nxt.order == current.order:
            return -1  # perfect tail
        current = nxt
        length += 1
    return length


def fingerprint(G: FiniteGroup) -> tuple:
    """Cheap isomorphism invariants checked before any backtracking."""
    if G._fingerprint_cache is None:
        G._fingerprint_cache = (
            G.order,
            _order_histogram(G),
            G.center.order,
            G.derived_subgroup.order,
            _abelian_invariants(G),
            _derived_length(G),
            tuple(sorted(len(c) for c in G.conjugacy_classes)),
        )
    return G._fingerprint_cache


def _element_invariant(G: FiniteGroup, x: int) -> tuple:
    return (int(G.element_orders[x]),
            len(G.conjugacy_classes[G.class_of(x)]))


def _generating_sequence(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    have: frozenset[int] = frozenset({0})
    order_key = sorted(range(G.order),
                       key=lambda x: (-int(G.element_orders[x]), x))
    while len(have) < G.order:
        for x in order_key:
            if x not in have:
                gens.append(x)
                have = G.closure(gens)
                break
    return gens


def is_isomorphic(G: FiniteGroup, H: FiniteGroup,
                  bound: int = DEFAULT_ISO_BOUND) -> bool:
    """Isomorphism test: invariant fingerprint, then backtracking on a
    generating sequence of G against order-compatible images in H."""
    if G.order > bound or H.order > bound:
        raise OrderBoundExceeded(
            f"isomorphism testing limited to order <= {bound}")
    if G is H:
        return True
    if fingerprint(G) != fingerprint(H):
        return False
    if G.is_abelian:
        return True  # same order histogram <=> isomorphic, for abelian groups
    gens = _generating_sequence(G)
    by_invariant: dict[tuple, list[int]] = {}
    for y in range(H.order):
        by_invariant.setdefault(_element_invariant(H, y), []).append(y)
    candidates = [by_invariant.get(_element_invariant(G, g), []) for g in gens]
    if any(not c for c in candidates):
        return False

    def extend(phi: dict[int, int], pairs: list[tuple[int, int]],
               new_gen: int, img: int):
        phi = dict(phi)
        pairs = pairs + [(new_gen, img)]
        if new_gen in phi:
            return (phi, pairs) if phi[new_gen] == img else None
        phi[new_gen] = img
        frontier = list(phi)
        while frontier:
            nxt = []
            for x in frontier:
                for g, hg in pairs:
                    y = G.mult(x, g)
                    hy = H.mult(phi[x], hg)
                    if y in phi:
                        if phi[y] != hy:
                            return None
                    else:
                        phi[y] = hy
                        nxt.append(y)
            frontier = nxt
        if len(set(phi.values())) != len(phi):
            return None
        return phi, pairs

    def search(i: int, phi: dict[int, int], pairs) -> bool:
        if len(phi) == G.order:
            return True
        if i == len(gens):
            return False
        for img in candidates[i]:
            ext = extend(phi, pairs, gens[i], img)
            if ext is not None and search(i + 1, *ext):
                return True
        return False

    return search(0, {0: 0}, [])


@dataclass(frozen=True)
class StructuralPredicates:
    is_abelian: bool
    is_cyclic: bool
    is_metabelian: bool


def structural_predicates(G: FiniteGroup) -> StructuralPredicates:
    return StructuralPredicates(G.is_abelian, G.is_cyclic, G.is_metabelian)


def group_from_generators(perms: list[Permutation], degree: int | None = None,
                          bound: int = DEFAULT_ORDER_BOUND,
                          name: str | None = None) -> FiniteGroup:
    """Enumerate the group generated by the given permutations."""
    return FiniteGroup(perms, degree=degree, bound=bound, name=name)
