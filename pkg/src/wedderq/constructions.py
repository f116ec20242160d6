"""Builders for the group families and named groups used by the classifier.

Everything bottoms out in a permutation group.  Presentation-style
constructions (semidirect products with a prescribed action, central
products, identified semidirect products) are assembled on an abstract
element set and realized through the right-regular action of the result;
each builder re-verifies its defining relations and order afterwards and
raises ConstructionError on any mismatch.

Designated elements (the i, j, a, b, c, u, v, d of the presentations) are
kept on the result as ``group.tags``, a dict from name to element index.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .numtheory import mult_order
from .permgroup import (ConstructionError, FiniteGroup, Permutation,
                        group_from_generators, is_isomorphic)

DEFAULT_BOUND = 10_000


# -- elementary families ------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    """Cyclic group of order n on n points."""
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    if n == 1:
        G = group_from_generators([], degree=1, name="C1")
    else:
        images = list(range(2, n + 1)) + [1]
        G = group_from_generators([Permutation(images)], name=f"C{n}")
    G.tags = {"a": G.gen_indices[0] if n > 1 else 0}
    return G


def cyclic_by_cyclic(m: int, n: int, r: int, name: str | None = None) -> FiniteGroup:
    """<a>_m  acted on by <b>_n via a^b = a^r, with r^n = 1 mod m."""
    if m < 1 or n < 1:
        raise ValueError("orders must be positive")
    r %= max(m, 1)
    if m > 1 and pow(r, n, m) != 1:
        raise ValueError(f"r={r} does not define an order-dividing-{n} action mod {m}")
    size = m * n
    rpow = [pow(r, y, m) if m > 1 else 0 for y in range(n)]

    def mult(e1: int, e2: int) -> int:
        # a^x1 b^y1 a^x2 b^y2 = a^(x1 + x2 r^-y1) b^(y1+y2), so that a^b = a^r
        x1, y1 = divmod(e1, n)
        x2, y2 = divmod(e2, n)
        return ((x1 + x2 * rpow[(n - y1) % n]) % m) * n + (y1 + y2) % n

    G = _realize(size, mult, gen_raws=[n if m > 1 else 0, 1 if n > 1 else 0],
                 name=name)
    G.tags = {"a": G._raw_embed[n] if m > 1 else 0,
              "b": G._raw_embed[1] if n > 1 else 0}
    if G.order != size:
        raise ConstructionError(f"{name or 'C_m x| C_n'}: order {G.order} != {size}")
    return G


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of order 2m (order must be even)."""
    if order % 2 or order < 2:
        raise ValueError("dihedral order must be even and >= 2")
    m = order // 2
    G = cyclic_by_cyclic(m, 2, -1, name=f"D{order}")
    return G


def quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion (dicyclic) group of order 4m: <j>_2m with an
    order-4 element i inverting j and i^2 = j^m."""
    if order % 4 or order < 4:
        raise ValueError("quaternion order must be divisible by 4")
    m = order // 4
    two_m = 2 * m
    size = order

    def mult(e1: int, e2: int) -> int:
        x1, y1 = divmod(e1, 2)
        x2, y2 = divmod(e2, 2)
        x = (x1 + (x2 if y1 == 0 else -x2)) % two_m
        if y1 and y2:
            x = (x + m) % two_m
        return x * 2 + (y1 + y2) % 2

    G = _realize(size, mult, gen_raws=[2, 1], name=f"Q{order}")
    j_idx = G._raw_embed[2]
    i_idx = G._raw_embed[1]
    G.tags = {"j": j_idx, "i": i_idx}
    ords = (int(G.element_orders[j_idx]), int(G.element_orders[i_idx]))
    if G.order != order or ords != (two_m, 4 if m > 1 else 4):
        raise ConstructionError(f"Q{order}: order/ generator orders wrong: {ords}")
    if G.conj(j_idx, i_idx) != G.inv(j_idx):
        raise ConstructionError(f"Q{order}: j^i != j^-1")
    if G.power(i_idx, 2) != G.power(j_idx, m):
        raise ConstructionError(f"Q{order}: i^2 != j^m")
    return G


def semidirect_kernel(m: int, n: int, k: int) -> FiniteGroup:
    """C_m x|_k C_n: the subscript is the order of the kernel of the action.

    Picks the smallest residue r with o_m(r) = n/k and lets b act by a -> a^r.
    """
    if n % k:
        raise ValueError(f"kernel order {k} must divide {n}")
    target = n // k
    if m == 1:
        if target != 1:
            raise ValueError("trivial kernel group forces k = n")
        return cyclic_by_cyclic(1, n, 0, name=f"C1x|{k}C{n}")
    r = next((r for r in range(1, m) if gcd(r, m) == 1
              and mult_order(r, m) == target), None)
    if r is None:
        raise ValueError(f"no residue of order {target} modulo {m}")
    G = cyclic_by_cyclic(m, n, r, name=f"C{m}x|{k}C{n}")
    return G


# -- abstract realization helpers ---------------------------------------------


def _realize(size: int, mult, gen_raws: list[int], name: str | None = None,
             tag_raws: dict[str, int] | None = None,
             bound: int = DEFAULT_BOUND) -> FiniteGroup:
    """Build the right-regular permutation group of an abstract element set.

    ``mult`` is an index multiplication with identity 0.  The result gets a
    ``_raw_embed`` dict mapping raw indices (of the generators and tags) to
    element indices of the realized group.
    """
    perms = []
    for g in gen_raws:
        perms.append(Permutation([mult(x, g) + 1 for x in range(size)]))
    G = group_from_generators(perms, degree=max(size, 1), bound=bound, name=name)
    if G.order != size:
        raise ConstructionError(
            f"{name or 'abstract group'}: generators span {G.order} of {size} elements")
    embed: dict[int, int] = {}
    for raw in set(gen_raws) | set((tag_raws or {}).values()) | {0}:
        arr = np.array([mult(x, raw) for x in range(size)], dtype=np.int32)
        embed[raw] = G._lookup[arr[G._base].tobytes()]
    G._raw_embed = embed
    if tag_raws:
        G.tags = {nm: embed[raw] for nm, raw in tag_raws.items()}
    return G


def _extend_automorphism(G: FiniteGroup, images: dict[int, int]) -> np.ndarray:
    """Extend a map on a generating set of G to the automorphism it defines.

    Raises ConstructionError unless the extension is a bijective
    homomorphism (checked against the full multiplication of G).
    """
    gens = sorted(images)
    if len(G.closure(gens)) != G.order:
        raise ConstructionError("automorphism images given on a non-generating set")
    amap = np.full(G.order, -1, dtype=np.int64)
    amap[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.mult(x, s)
                if amap[y] < 0:
                    amap[y] = G.mult(int(amap[x]), images[s])
                    nxt.append(y)
        frontier = nxt
    for x in range(G.order):
        ax = int(amap[x])
        for s in gens:
            if int(amap[G.mult(x, s)]) != G.mult(ax, images[s]):
                raise ConstructionError("generator images do not define a homomorphism")
    if len(set(amap.tolist())) != G.order:
        raise ConstructionError("generator images do not define a bijection")
    return amap


def _action_maps(G: FiniteGroup, H: FiniteGroup,
                 conj_by_hgen: list[dict[int, int]]) -> list[np.ndarray]:
    """phi[h] arrays for the product multiplication, from conjugation tables.

    ``conj_by_hgen[t]`` maps generating elements g of G to g^(H.generators[t]).
    The product rule (g1,h1)(g2,h2) = (g1 * phi[h1](g2), h1 h2) needs
    phi_h = (conjugation by h)^-1, extended multiplicatively over H.
    """
    if len(conj_by_hgen) != len(H.gen_indices):
        raise ValueError("one conjugation table per H generator required")
    phi_gen = []
    for table in conj_by_hgen:
        conj = _extend_automorphism(G, table)
        inv = np.empty_like(conj)
        inv[conj] = np.arange(G.order, dtype=np.int64)
        phi_gen.append(inv)
    ident = np.arange(G.order, dtype=np.int64)
    phi: list[np.ndarray | None] = [None] * H.order
    phi[0] = ident
    frontier = [0]
    while frontier:
        nxt = []
        for h in frontier:
            for t, s in enumerate(H.gen_indices):
                hs = H.mult(h, s)
                if phi[hs] is None:
                    phi[hs] = phi[h][phi_gen[t]]
                    nxt.append(hs)
        frontier = nxt
    for h in range(H.order):
        for t, s in enumerate(H.gen_indices):
            if not np.array_equal(phi[H.mult(h, s)], phi[h][phi_gen[t]]):
                raise ConstructionError(
                    "action does not factor through H (inconsistent extension)")
    return phi  # type: ignore[return-value]


class _SemidirectRaw:
    """Index arithmetic for G x| H on pair indices g * |H| + h."""

    def __init__(self, G: FiniteGroup, H: FiniteGroup, phi: list[np.ndarray]):
        self.G, self.H, self.phi = G, H, phi
        self.size = G.order * H.order
        self.nH = H.order

    def mult(self, e1: int, e2: int) -> int:
        g1, h1 = divmod(e1, self.nH)
        g2, h2 = divmod(e2, self.nH)
        return self.G.mult(g1, int(self.phi[h1][g2])) * self.nH + self.H.mult(h1, h2)

    def inv(self, e: int) -> int:
        g, h = divmod(e, self.nH)
        hinv = self.H.inv(h)
        return int(self.phi[hinv][self.G.inv(g)]) * self.nH + hinv

    def embed_g(self, g: int) -> int:
        return g * self.nH

    def embed_h(self, h: int) -> int:
        return h


def semidirect_product(G: FiniteGroup, H: FiniteGroup,
                       conj_by_hgen: list[dict[int, int]],
                       name: str | None = None,
                       tags: dict[str, tuple[str, int]] | None = None,
                       bound: int = DEFAULT_BOUND) -> FiniteGroup:
    """G x| H where each H generator conjugates G by the given table.

    ``tags`` maps new tag names to ("g"|"h", element index in that factor).
    """
    phi = _action_maps(G, H, conj_by_hgen)
    raw = _SemidirectRaw(G, H, phi)
    gen_raws = [raw.embed_g(g) for g in G.gen_indices] + \
               [raw.embed_h(h) for h in H.gen_indices]
    tag_raws = {}
    for nm, (side, idx) in (tags or {}).items():
        tag_raws[nm] = raw.embed_g(idx) if side == "g" else raw.embed_h(idx)
    return _realize(raw.size, raw.mult, gen_raws, name=name,
                    tag_raws=tag_raws, bound=bound)


def _identified_quotient(raw, z_raw: int, m: int, gen_raws: list[int],
                         tag_raws: dict[str, int], name: str | None,
                         bound: int = DEFAULT_BOUND) -> FiniteGroup:
    """Quotient of an abstract product by the cyclic identification <z_raw>."""
    Z = [0]
    z = z_raw
    while z != 0:
        Z.append(z)
        z = raw.mult(z, z_raw)
        if len(Z) > raw.size:
            raise ConstructionError("identification element does not close")
    if len(Z) != m:
        raise ConstructionError(
            f"identified subgroup has order {len(Z)}, expected {m}")
    for g in gen_raws:
        ginv = raw.inv(g)
        for z in Z:
            if raw.mult(raw.mult(ginv, z), g) not in Z:
                raise ConstructionError(
                    "identification subgroup is not normal; inconsistent relations")
    # right cosets Z*x, canonical representative = minimal raw index
    rep = np.full(raw.size, -1, dtype=np.int64)
    cosets: list[int] = []
    coset_no: dict[int, int] = {}
    for x in range(raw.size):
        if rep[x] >= 0:
            continue
        members = sorted(raw.mult(z, x) for z in Z)
        r = members[0]
        coset_no[r] = len(cosets)
        cosets.append(r)
        for mm in members:
            rep[mm] = r

    def cmult(c1: int, c2: int) -> int:
        return coset_no[int(rep[raw.mult(cosets[c1], cosets[c2])])]

    gen_cosets = [coset_no[int(rep[g])] for g in gen_raws]
    tag_cosets = {nm: coset_no[int(rep[t])] for nm, t in tag_raws.items()}
    return _realize(len(cosets), cmult, gen_cosets, name=name,
                    tag_raws=tag_cosets, bound=bound)


def central_product(G: FiniteGroup, H: FiniteGroup, m: int,
                    zg: int | None = None, zh: int | None = None,
                    name: str | None = None,
                    tags: dict[str, tuple[str, int]] | None = None) -> FiniteGroup:
    """G Y_m H: quotient of G x H identifying central subgroups of order m.

    zg and zh are elements of order m generating the identified central
    subgroups; each defaults to the unique order-m subgroup of the center
    when that is unambiguous.
    """
    zg = _pick_central(G, m) if zg is None else zg
    zh = _pick_central(H, m) if zh is None else zh
    for grp, z in ((G, zg), (H, zh)):
        if z not in grp.center.elements:
            raise ConstructionError("designated identification element is not central")
        if int(grp.element_orders[z]) != m:
            raise ConstructionError("designated identification element has wrong order")
    ident = [np.arange(G.order, dtype=np.int64)] * H.order
    raw = _SemidirectRaw(G, H, ident)
    z_raw = raw.mult(raw.embed_g(G.inv(zg)), raw.embed_h(zh))
    gen_raws = [raw.embed_g(g) for g in G.gen_indices] + \
               [raw.embed_h(h) for h in H.gen_indices]
    tag_raws = {}
    for nm, (side, idx) in (tags or {}).items():
        tag_raws[nm] = raw.embed_g(idx) if side == "g" else raw.embed_h(idx)
    result = _identified_quotient(raw, z_raw, m, gen_raws, tag_raws, name)
    if result.order != G.order * H.order // m:
        raise ConstructionError(f"{name}: central product order wrong")
    return result


def identified_semidirect(G: FiniteGroup, H: FiniteGroup,
                          m: int,
                          conj_by_hgen: list[dict[int, int]],
                          g0: int, h0: int,
                          name: str | None = None,
                          tags: dict[str, tuple[str, int]] | None = None,
                          bound: int = DEFAULT_BOUND) -> FiniteGroup:
    """G |x_m H: semidirect product with <h0> = <g0> of order m identified."""
    phi = _action_maps(G, H, conj_by_hgen)
    raw = _SemidirectRaw(G, H, phi)
    z_raw = raw.mult(raw.embed_g(G.inv(g0)), raw.embed_h(h0))
    gen_raws = [raw.embed_g(g) for g in G.gen_indices] + \
               [raw.embed_h(h) for h in H.gen_indices]
    tag_raws = {}
    for nm, (side, idx) in (tags or {}).items():
        tag_raws[nm] = raw.embed_g(idx) if side == "g" else raw.embed_h(idx)
    result = _identified_quotient(raw, z_raw, m, gen_raws, tag_raws, name,
                                  bound=bound)
    if result.order != G.order * H.order // m:
        raise ConstructionError(f"{name}: identified semidirect order wrong")
    return result


def _pick_central(G: FiniteGroup, m: int) -> int:
    candidates = sorted(z for z in G.center.elements
                        if int(G.element_orders[z]) == m)
    subs = {G.closure([z]) for z in candidates}
    if len(subs) != 1:
        raise ConstructionError(
            f"center has {len(subs)} subgroups of order {m}; specify the element")
    return candidates[0]


def direct(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Direct product acting on the disjoint union of the factors' points."""
    dG, dH = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Permutation(list(g.images) + [dG + p for p in range(1, dH + 1)]))
    for h in H.generators:
        gens.append(Permutation(list(range(1, dG + 1)) + [dG + p for p in h.images]))
    P = group_from_generators(gens, degree=dG + dH, name=name)
    if P.order != G.order * H.order:
        raise ConstructionError("direct product order wrong")

    def embed_left(idx: int) -> int:
        arr = np.concatenate([G.elements[idx],
                              np.arange(dG, dG + dH, dtype=np.int32)])
        return P._lookup[arr[P._base].tobytes()]

    def embed_right(idx: int) -> int:
        arr = np.concatenate([np.arange(dG, dtype=np.int32),
                              H.elements[idx] + dG])
        return P._lookup[arr[P._base].tobytes()]

    P.embed_left, P.embed_right = embed_left, embed_right
    return P


# -- metacyclic presentation G_{m,r} ------------------------------------------


def gmr_conditions(m: int, r: int) -> dict[str, bool]:
    """The individual admissibility conditions for the metacyclic family."""
    out = {"coprime": gcd(m, r) == 1 and m >= 1}
    if not out["coprime"]:
        out.update(order_defined=False, st_split=False, coprime_ns_t=False)
        return out
    n = mult_order(r, m)
    s = gcd(r - 1, m) if m > 1 else 1
    t = m // s
    out["order_defined"] = True
    out["st_split"] = s * t == m
    out["coprime_ns_t"] = gcd(n * s, t) == 1
    return out


def metacyclic_gmr(m: int, r: int) -> FiniteGroup:
    """The metacyclic group <a, b | a^m = 1, b^n = a^t, a^b = a^r>."""
    conds = gmr_conditions(m, r)
    failing = [k for k, ok in conds.items() if not ok]
    if failing:
        raise ValueError(f"G_({m},{r}) rejected; failing conditions: {failing}")
    r %= m if m > 1 else 1
    n = mult_order(r, m)
    s = gcd(r - 1, m) if m > 1 else 1
    t = m // s
    size = m * n
    rpow = [pow(r, y, m) if m > 1 else 0 for y in range(n)]

    def mult(e1: int, e2: int) -> int:
        x1, y1 = divmod(e1, n)
        x2, y2 = divmod(e2, n)
        y = y1 + y2
        x = (x1 + x2 * rpow[(n - y1) % n] + t * (y // n)) % m
        return x * n + y % n

    a_raw = n if m > 1 else 0
    b_raw = 1 if n > 1 else (t % m) * n  # n = 1 collapses b to a^t
    G = _realize(size, mult, gen_raws=[a_raw, b_raw], name=f"G({m},{r})",
                 tag_raws={"a": a_raw, "b": b_raw})
    a, b = G.tags["a"], G.tags["b"]
    if G.power(a, m) != 0 or G.power(b, n) != G.power(a, t) \
            or G.conj(a, b) != G.power(a, r):
        raise ConstructionError(f"G_({m},{r}): presentation relations fail")
    return G


# -- special linear groups -----------------------------------------------------


def _field(q: int):
    """Tiny finite field: elements 0..q-1 with add/mul tables."""
    if q in (3, 5):
        add = [[(x + y) % q for y in range(q)] for x in range(q)]
        mul = [[(x * y) % q for y in range(q)] for x in range(q)]
        return add, mul
    if q == 9:
        def enc(a, b):
            return a + 3 * b
        add = [[0] * 9 for _ in range(9)]
        mul = [[0] * 9 for _ in range(9)]
        for a1 in range(3):
            for b1 in range(3):
                for a2 in range(3):
                    for b2 in range(3):
                        add[enc(a1, b1)][enc(a2, b2)] = enc((a1 + a2) % 3, (b1 + b2) % 3)
                        # (a1 + b1 x)(a2 + b2 x) with x^2 = -1
                        aa = (a1 * a2 - b1 * b2) % 3
                        bb = (a1 * b2 + a2 * b1) % 3
                        mul[enc(a1, b1)][enc(a2, b2)] = enc(aa, bb)
        return add, mul
    raise ValueError(f"unsupported field size {q}")


def sl2(q: int) -> FiniteGroup:
    """SL(2,q) for q in {3, 5, 9}, acting on the q^2-1 nonzero vectors."""
    if q not in (3, 5, 9):
        raise ValueError(f"sl2 supports q in {{3, 5, 9}}, got {q}")
    add, mul = _field(q)
    neg = [next(y for y in range(q) if add[x][y] == 0) for x in range(q)]
    vectors = [(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)]
    vindex = {v: i for i, v in enumerate(vectors)}

    def act(mat):
        a, b, c, d = mat
        images = []
        for (x, y) in vectors:
            nx = add[mul[x][a]][mul[y][c]]
            ny = add[mul[x][b]][mul[y][d]]
            images.append(vindex[(nx, ny)] + 1)
        return Permutation(images)

    gens = [act((0, 1, neg[1], 0)), act((1, 1, 0, 1))]
    if q == 9:
        gens.append(act((1, 3, 0, 1)))  # extra transvection by the F9 generator x
    G = group_from_generators(gens, name=f"SL(2,{q})")
    expected = {3: 24, 5: 120, 9: 720}[q]
    if G.order != expected:
        raise ConstructionError(f"SL(2,{q}) has order {G.order}, expected {expected}")
    if G.center.order != 2:
        raise ConstructionError(f"SL(2,{q}) center order {G.center.order} != 2")
    return G


def binary_octahedral() -> FiniteGroup:
    """The binary octahedral group, as exact unit quaternions over Q(sqrt 2)."""
    half = Fraction(1, 2)

    def qmul(p, r):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = r
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    class R2:  # a + b*sqrt(2) with Fraction coordinates
        __slots__ = ("a", "b")

        def __init__(self, a, b=0):
            self.a, self.b = Fraction(a), Fraction(b)

        def __add__(self, o):
            return R2(self.a + o.a, self.b + o.b)

        def __sub__(self, o):
            return R2(self.a - o.a, self.b - o.b)

        def __mul__(self, o):
            return R2(self.a * o.a + 2 * self.b * o.b,
                      self.a * o.b + self.b * o.a)

        def key(self):
            return (self.a, self.b)

    zero, one = R2(0), R2(1)
    s = (half, half, half, half)            # (1+i+j+k)/2, order 6
    t = (R2(0, half), R2(0, half), 0, 0)    # (1+i)/sqrt2 = (sqrt2/2)(1+i), order 8
    s = tuple(x if isinstance(x, R2) else R2(x) for x in s)
    t = tuple(x if isinstance(x, R2) else R2(x) for x in t)

    def key(p):
        return tuple(x.key() for x in p)

    ident = (one, zero, zero, zero)
    elements = [ident]
    index = {key(ident): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in (s, t):
                y = qmul(x, g)
                k = key(y)
                if k not in index:
                    index[k] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    size = len(elements)
    if size != 48:
        raise ConstructionError(f"binary octahedral closure has size {size}")
    perms = []
    for g in (s, t):
        perms.append(Permutation([index[key(qmul(x, g))] + 1 for x in elements]))
    G = group_from_generators(perms, name="O*")
    G.tags = {"s": G.gen_indices[0], "t": G.gen_indices[1]}
    st2 = G.power(G.mult(G.tags["s"], G.tags["t"]), 2)
    if not (st2 == G.power(G.tags["s"], 3) == G.power(G.tags["t"], 4)):
        raise ConstructionError("O*: (st)^2 = s^3 = t^4 fails")
    return G


# -- the named catalog ---------------------------------------------------------

_named_cache: dict[str, FiniteGroup] = {}


def _word(G: FiniteGroup, *factors) -> int:
    """Product of tagged elements; each factor is a tag, (tag, exp), or index."""
    acc = 0
    for f in factors:
        if isinstance(f, tuple):
            nm, e = f
            x = G.tags[nm] if isinstance(nm, str) else nm
            x = G.power(x, e % int(G.element_orders[x])) if e >= 0 else \
                G.inv(G.power(x, (-e) % int(G.element_orders[x])))
        elif isinstance(f, str):
            x = G.tags[f]
        else:
            x = f
        acc = G.mult(acc, x)
    return acc


def _check_relation(G: FiniteGroup, lhs: int, rhs: int, what: str) -> None:
    if lhs != rhs:
        raise ConstructionError(f"{G.name}: relation {what} fails")


def sl23_from_presentation() -> FiniteGroup:
    """Q8 x| C3 with i^g = j, j^g = ij (the matrix group's presentation)."""
    Q = quaternion(8)
    C3 = cyclic(3)
    i, j = Q.tags["i"], Q.tags["j"]
    action = [{i: j, j: Q.mult(i, j)}]
    G = semidirect_product(Q, C3, action, name="Q8x|C3",
                           tags={"i": ("g", i), "j": ("g", j),
                                 "g": ("h", C3.tags["a"])})
    return G


def _build_q8_y_d8() -> FiniteGroup:
    Q, D = quaternion(8), dihedral(8)
    G = central_product(Q, D, 2,
                        zg=Q.power(Q.tags["i"], 2),
                        zh=D.power(D.tags["a"], 2),
                        name="Q8Y2D8",
                        tags={"i": ("g", Q.tags["i"]), "j": ("g", Q.tags["j"]),
                              "a": ("h", D.tags["a"]), "b": ("h", D.tags["b"])})
    i, j, a, b = (G.tags[t] for t in "ijab")
    _check_relation(G, G.power(i, 2), G.power(a, 2), "i^2 = a^2")
    _check_relation(G, G.commutator(i, a), 0, "(i,a) = 1")
    _check_relation(G, G.conj(a, b), G.inv(a), "a^b = a^-1")
    return G


def _find_presentation_pair_sl25(S: FiniteGroup) -> tuple[int, int]:
    """The lexicographically first (u, v) with u^4 = v^3 = 1, (uv)^5 = u^2,
    generating SL(2,5)."""
    order4 = [x for x in range(S.order) if int(S.element_orders[x]) == 4]
    order3 = [x for x in range(S.order) if int(S.element_orders[x]) == 3]
    for u in order4:
        u2 = S.power(u, 2)
        for v in order3:
            if S.power(S.mult(u, v), 5) != u2:
                continue
            if len(S.closure([u, v])) == S.order:
                return u, v
    raise ConstructionError("SL(2,5) has no (u,v) presentation pair")


def _commutator_word(G: FiniteGroup, x: int, y: int) -> int:
    return G.commutator(x, y)


def _build_a_plus_minus(sign: int) -> FiniteGroup:
    """A^+ (sign=+1) or A^- (sign=-1): SL(2,5) |x_4 C8 with d^2 = u or u^-1."""
    S = sl2(5)
    u, v = _find_presentation_pair_sl25(S)
    C8 = cyclic(8)
    d = C8.tags["a"]
    # action of d: u -> u, v -> v u^-1 (v,u)
    vu = S.mult(S.mult(v, S.inv(u)), _commutator_word(S, v, u))
    action = [{u: u, v: vu}]
    g0 = u if sign > 0 else S.inv(u)
    name = "A+" if sign > 0 else "A-"
    G = identified_semidirect(S, C8, 4, action, g0=g0, h0=C8.power(d, 2),
                              name=name,
                              tags={"u": ("g", u), "v": ("g", v), "d": ("h", d)})
    tu, tv, td = G.tags["u"], G.tags["v"], G.tags["d"]
    _check_relation(G, G.power(td, 2), tu if sign > 0 else G.inv(tu), "d^2 = u^±1")
    _check_relation(G, G.power(td, 8), 0, "d^8 = 1")
    _check_relation(G, G.power(tv, 3), 0, "v^3 = 1")
    if sign > 0:
        lhs = G.power(G.mult(G.power(td, 2), tv), 5)
    else:
        lhs = G.power(G.mult(G.inv(G.power(td, 2)), tv), 5)
    _check_relation(G, lhs, G.power(td, 4), "(d^±2 v)^5 = d^4")
    return G


def _build_c384() -> FiniteGroup:
    QQ = direct(quaternion(8), quaternion(8), name="Q8xQ8")
    Q1 = quaternion(8)
    i1 = QQ.embed_left(Q1.tags["i"])
    j1 = QQ.embed_left(Q1.tags["j"])
    i2 = QQ.embed_right(Q1.tags["i"])
    j2 = QQ.embed_right(Q1.tags["j"])
    C6 = cyclic(6)
    action = [{i1: i2, j1: j2, i2: j1, j2: QQ.mult(i1, j1)}]
    G = semidirect_product(QQ, C6, action, name="C384",
                           tags={"i1": ("g", i1), "j1": ("g", j1),
                                 "i2": ("g", i2), "j2": ("g", j2),
                                 "b": ("h", C6.tags["a"])})
    for nm, img in (("i1", "i2"), ("j1", "j2")):
        _check_relation(G, G.conj(G.tags[nm], G.tags["b"]), G.tags[img],
                        f"{nm}^b")
    _check_relation(G, G.conj(G.tags["i2"], G.tags["b"]), G.tags["j1"], "i2^b")
    _check_relation(G, G.conj(G.tags["j2"], G.tags["b"]),
                    G.mult(G.tags["i1"], G.tags["j1"]), "j2^b")
    return G


def _build_b1() -> FiniteGroup:
    P = _build_q8_y_d8()
    i, j, a, b = (P.tags[t] for t in "ijab")
    C5 = cyclic(5)
    action = [{
        i: P.mult(P.inv(j), b),
        j: P.inv(i),
        a: _word(P, "i", ("a", -1), "b"),
        b: _word(P, ("i", -1), ("a", -1)),
    }]
    G = semidirect_product(P, C5, action, name="B1",
                           tags={"i": ("g", i), "j": ("g", j), "a": ("g", a),
                                 "b": ("g", b), "c": ("h", C5.tags["a"])})
    _check_relation(G, G.conj(G.tags["j"], G.tags["c"]), G.inv(G.tags["i"]), "j^c")
    return G


def _build_b2() -> FiniteGroup:
    P = _build_q8_y_d8()
    i, j, a, b = (P.tags[t] for t in "ijab")
    K = semidirect_kernel(5, 4, 2)  # C5 x|_2 C4, d inverts c
    c, d = K.tags["a"], K.tags["b"]
    act_c = {
        i: _word(P, ("i", 2), "j"),
        j: _word(P, ("i", -1), "b"),
        a: _word(P, "j", "b", "a"),
        b: _word(P, "j", "a"),
    }
    act_d = {
        i: _word(P, ("i", 2), "a"),
        j: _word(P, "i", "b"),
        a: P.inv(i),
        b: _word(P, "j", "a"),
    }
    G = identified_semidirect(P, K, 2, [act_c, act_d],
                              g0=P.power(i, 2), h0=K.power(d, 2),
                              name="B2",
                              tags={"i": ("g", i), "j": ("g", j), "a": ("g", a),
                                    "b": ("g", b), "c": ("h", c), "d": ("h", d)})
    _check_relation(G, G.power(G.tags["d"], 2), G.power(G.tags["i"], 2), "d^2 = i^2")
    return G


def _build_b() -> FiniteGroup:
    P = _build_q8_y_d8()
    i, j, a, b = (P.tags[t] for t in "ijab")
    S = sl2(5)
    u, v = _find_presentation_pair_sl25(S)
    act_u = {
        i: P.power(i, 3),
        j: P.mult(j, b),
        a: _word(P, ("i", 3), "a", "b"),
        b: b,
    }
    act_v = {
        i: _word(P, ("i", 2), "j", "a", "b"),
        j: _word(P, ("i", 3), "j", "a", "b"),
        a: P.mult(i, b),
        b: P.mult(i, a),
    }
    G = identified_semidirect(P, S, 2, [act_u, act_v],
                              g0=P.power(i, 2), h0=S.power(u, 2),
                              name="B",
                              tags={"i": ("g", i), "j": ("g", j), "a": ("g", a),
                                    "b": ("g", b), "u": ("h", u), "v": ("h", v)})
    _check_relation(G, G.power(G.tags["u"], 2), G.power(G.tags["i"], 2), "u^2 = i^2")
    _check_relation(G, G.conj(G.tags["a"], G.tags["v"]),
                    G.mult(G.tags["i"], G.tags["b"]), "a^v = ib")
    return G


def _build_q8_semi_c2() -> FiniteGroup:
    Q = quaternion(8)
    C2 = cyclic(2)
    i, j = Q.tags["i"], Q.tags["j"]
    G = semidirect_product(Q, C2, [{i: Q.inv(i), j: j}], name="Q8semiC2",
                           tags={"i": ("g", i), "j": ("g", j),
                                 "a": ("h", C2.tags["a"])})
    return G


def _build_q16_semi_c2() -> FiniteGroup:
    Q = quaternion(16)
    C2 = cyclic(2)
    i, j = Q.tags["i"], Q.tags["j"]
    G = semidirect_product(Q, C2, [{j: Q.power(j, 3), i: i}], name="Q16semiC2",
                           tags={"i": ("g", i), "j": ("g", j),
                                 "a": ("h", C2.tags["a"])})
    _check_relation(G, G.conj(G.tags["j"], G.tags["a"]),
                    G.power(G.tags["j"], 3), "j^a = j^3")
    return G


def _build_c3sq_semi_c8() -> FiniteGroup:
    B = direct(cyclic(3), cyclic(3), name="C3xC3")
    C3 = cyclic(3)
    a = B.embed_left(C3.tags["a"])
    b = B.embed_right(C3.tags["a"])
    C8 = cyclic(8)
    G = semidirect_product(B, C8, [{a: B.inv(b), b: a}], name="C3sqsemiC8",
                           tags={"a": ("g", a), "b": ("g", b),
                                 "c": ("h", C8.tags["a"])})
    _check_relation(G, G.conj(G.tags["a"], G.tags["c"]), G.inv(G.tags["b"]), "a^c")
    _check_relation(G, G.conj(G.tags["b"], G.tags["c"]), G.tags["a"], "b^c")
    return G


def _tagged_dihedral_16(r: int, name: str) -> FiniteGroup:
    G = cyclic_by_cyclic(8, 2, r, name=name)
    a, b = G.tags["a"], G.tags["b"]
    _check_relation(G, G.conj(a, b), G.power(a, r), f"a^b = a^{r}")
    return G


_BUILDERS = {
    "SL23": lambda: sl2(3),
    "SL25": lambda: sl2(5),
    "D6": lambda: dihedral(6),
    "D8": lambda: dihedral(8),
    "D16plus": lambda: _tagged_dihedral_16(5, "D16plus"),
    "Q8semiC2": _build_q8_semi_c2,
    "Q8xC3": lambda: direct(quaternion(8), cyclic(3), name="Q8xC3"),
    "Q8YD8": _build_q8_y_d8,
    "C5semiC8": lambda: semidirect_kernel(5, 8, 2),
    "C3sqsemiC8": _build_c3sq_semi_c8,
    "SL23YD8": lambda: central_product(sl2(3), dihedral(8), 2, name="SL23YD8"),
    "C384": _build_c384,
    "SL23YC4": lambda: central_product(sl2(3), cyclic(4), 2, name="SL23YC4"),
    "SL29": lambda: sl2(9),
    "Aplus": lambda: _build_a_plus_minus(+1),
    "Aminus": lambda: _build_a_plus_minus(-1),
    "B1": _build_b1,
    "B2": _build_b2,
    "B": _build_b,
    # reference groups for the classifier
    "Q8": lambda: quaternion(8),
    "Q12": lambda: quaternion(12),
    "D12": lambda: dihedral(12),
    "D16minus": lambda: _tagged_dihedral_16(3, "D16minus"),
    "C3semi4C8": lambda: semidirect_kernel(3, 8, 4),
    "C4xD6": lambda: direct(cyclic(4), dihedral(6), name="C4xD6"),
    "C3xD8": lambda: direct(cyclic(3), dihedral(8), name="C3xD8"),
    "C3xQ8": lambda: direct(cyclic(3), quaternion(8), name="C3xQ8"),
    "Q16semiC2": _build_q16_semi_c2,
}

# orders as encoded by the GAP ids in the published classification table
NAMED_ORDERS = {
    "SL23": 24, "SL25": 120, "D6": 6, "D8": 8, "D16plus": 16,
    "Q8semiC2": 16, "Q8xC3": 24, "Q8YD8": 32, "C5semiC8": 40,
    "C3sqsemiC8": 72, "SL23YD8": 96, "C384": 384, "SL23YC4": 48,
    "SL29": 720, "Aplus": 240, "Aminus": 240, "B1": 160, "B2": 320,
    "B": 1920,
    "Q8": 8, "Q12": 12, "D12": 12, "D16minus": 16, "C3semi4C8": 24,
    "C4xD6": 24, "C3xD8": 24, "C3xQ8": 24, "Q16semiC2": 32,
}

CRITICAL_LABELS = ("SL23", "SL25", "D6", "D8", "D16plus", "Q8semiC2",
                   "Q8xC3", "Q8YD8", "C5semiC8", "C3sqsemiC8", "SL23YD8",
                   "C384", "SL23YC4", "SL29", "Aplus", "Aminus", "B1",
                   "B2", "B")

REFERENCE_LABELS = ("Q8", "Q12", "D12", "D16minus", "C3semi4C8", "C4xD6",
                    "C3xD8", "C3xQ8", "Q16semiC2")


def catalog_labels() -> tuple[str, ...]:
    return CRITICAL_LABELS + REFERENCE_LABELS


def named(label: str) -> FiniteGroup:
    """Build (and cache) a catalog group by label; verifies its order."""
    if label not in _BUILDERS:
        raise KeyError(f"unknown catalog label {label!r}")
    if label not in _named_cache:
        G = _BUILDERS[label]()
        G.name = label
        if G.order != NAMED_ORDERS[label]:
            raise ConstructionError(
                f"{label}: order {G.order} != {NAMED_ORDERS[label]}")
        _named_cache[label] = G
    return _named_cache[label]
