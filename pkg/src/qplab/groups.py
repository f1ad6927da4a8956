"""Enumerated permutation-group arithmetic.

Everything works by exhaustive scan over a fully enumerated group (the
brute-force regime, |G| <= cap).  Elements are ids into a canonically
ordered table of permutations: identity first, then lexicographic on the
image arrays.  Products compose left-to-right (i*j means apply i, then j)
and x^g means g^-1 x g.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import CapExceeded, DegreeMismatch, InvalidSpec, PreconditionFailed

DEFAULT_CAP = 20000


def order_cap() -> int:
    """Group-order cap; the QPLAB_CAP environment variable overrides it."""
    return int(os.environ.get("QPLAB_CAP", DEFAULT_CAP))


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True)
class GroupSpec:
    """Serializable description of a permutation group: name, degree, and
    generators as cycle decompositions (0-based points internally)."""

    name: str
    degree: int
    generators: tuple  # tuple of tuples of cycles, each cycle a tuple of points

    def generator_images(self) -> list:
        return [cycles_to_images(g, self.degree) for g in self.generators]


def cycles_to_images(cycles, degree: int):
    """Image array of a product of disjoint cycles on 0-based points."""
    images = list(range(degree))
    seen = set()
    for cyc in cycles:
        for pt in cyc:
            if not (0 <= pt < degree):
                raise InvalidSpec(f"point {pt} out of range for degree {degree}")
            if pt in seen:
                raise InvalidSpec(f"point {pt} repeated across cycles")
            seen.add(pt)
        for i, pt in enumerate(cyc):
            images[pt] = cyc[(i + 1) % len(cyc)]
    return images


def spec_from_json(data, name: str = "") -> GroupSpec:
    """Validate the GroupSpec JSON shape; file cycles use 1-based points."""
    if not isinstance(data, dict):
        raise InvalidSpec("group spec must be a JSON object")
    for key in ("degree", "generators"):
        if key not in data:
            raise InvalidSpec(f"group spec missing {key!r}")
    degree = data["degree"]
    if not isinstance(degree, int) or degree < 1:
        raise InvalidSpec("degree must be a positive integer")
    gens = []
    for gen in data["generators"]:
        cycles = []
        for cyc in gen:
            if not isinstance(cyc, list) or not all(isinstance(p, int) for p in cyc):
                raise InvalidSpec("cycles must be lists of integers")
            if len(set(cyc)) != len(cyc):
                raise InvalidSpec(f"duplicate point in cycle {cyc}")
            for p in cyc:
                if p < 1:
                    raise InvalidSpec("file points are 1-based")
                if p > degree:
                    raise DegreeMismatch(f"point {p} exceeds degree {degree}")
            cycles.append(tuple(p - 1 for p in cyc))
        gens.append(tuple(cycles))
    return GroupSpec(data.get("name", name), degree, tuple(gens))


# ---------------------------------------------------------------------------
# The group table


def _rowcodes(perms: np.ndarray) -> np.ndarray:
    """One comparable scalar code per permutation row.

    Degree <= 16 packs into uint64 (4 bits per point); larger degrees fall
    back to byte-string views.
    """
    a = np.ascontiguousarray(perms, dtype=np.uint8)
    d = a.shape[1]
    if d <= 16:
        weights = np.uint64(16) ** np.arange(d - 1, -1, -1, dtype=np.uint64)
        return a.astype(np.uint64) @ weights
    return a.view(f"S{d}").ravel()


class GroupTable:
    """A fully enumerated permutation group, immutable after construction.

    Ids run 0..order-1 with the identity at id 0.
    """

    def __init__(self, perms: np.ndarray, name: str = "", generator_ids=None):
        perms = np.ascontiguousarray(perms, dtype=np.uint8)
        order = np.argsort(_rowcodes(perms), kind="stable")
        self.perms = np.ascontiguousarray(perms[order])
        self.degree = int(perms.shape[1])
        self.order = int(perms.shape[0])
        self.name = name
        self._codes = _rowcodes(self.perms)  # sorted by construction
        if not np.array_equal(self.perms[0], np.arange(self.degree, dtype=np.uint8)):
            raise InvalidSpec("closure does not contain the identity")
        inv_perms = np.argsort(self.perms, axis=1).astype(np.uint8)
        self.inv = self.ids_of(inv_perms)
        self.generator_ids = (tuple(int(i) for i in generator_ids)
                              if generator_ids is not None else None)
        self._cache = {}

    # -- id lookups ---------------------------------------------------------

    def ids_of(self, perm_rows: np.ndarray) -> np.ndarray:
        """Ids of permutation image rows (must all belong to the group)."""
        rows = np.ascontiguousarray(perm_rows, dtype=np.uint8)
        if rows.ndim == 1:
            rows = rows[None, :]
        codes = _rowcodes(rows)
        ids = np.searchsorted(self._codes, codes)
        if not np.array_equal(self._codes[ids], codes):
            raise InvalidSpec("permutation outside the group")
        return ids.astype(np.int32)

    def id_of(self, images) -> int:
        return int(self.ids_of(np.asarray(images, dtype=np.uint8))[0])

    # -- arithmetic ---------------------------------------------------------

    def mult(self, i: int, j: int) -> int:
        """id of i*j (apply i, then j)."""
        return int(self.ids_of(self.perms[j][self.perms[i]])[0])

    def inv_of(self, i: int) -> int:
        return int(self.inv[i])

    def mult_many(self, ids, j: int) -> np.ndarray:
        """Each i -> i*j."""
        return self.ids_of(self.perms[j][self.perms[np.asarray(ids)]])

    def conj_many(self, ids, g: int) -> np.ndarray:
        """Each x -> g^-1 x g."""
        ginv = self.perms[self.inv[g]]
        inner = self.perms[np.asarray(ids)][:, ginv]  # x(g^-1(pt)) per row x
        return self.ids_of(self.perms[g][inner])

    def conj_of_elem(self, x: int) -> np.ndarray:
        """Array over all g of the id of g^-1 x g."""
        inner = self.perms[x][self.perms[self.inv]]           # x(g^-1(pt))
        rows = np.take_along_axis(self.perms, inner, axis=1)  # g(x(g^-1(pt)))
        return self.ids_of(rows)

    def conj_map_by(self, g: int) -> np.ndarray:
        """Array over all x of the id of g^-1 x g (cached per g)."""
        key = ("conjmap", int(g))
        if key not in self._cache:
            ginv = self.perms[self.inv[g]]
            inner = self.perms[:, ginv]          # x(g^-1(pt)) per row x
            self._cache[key] = self.ids_of(self.perms[g][inner])
        return self._cache[key]

    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            out = np.empty(self.order, dtype=np.int32)
            for i in range(self.order):
                img = self.perms[i]
                seen = np.zeros(self.degree, dtype=bool)
                o = 1
                for start in range(self.degree):
                    if seen[start]:
                        continue
                    length = 0
                    pt = start
                    while not seen[pt]:
                        seen[pt] = True
                        pt = int(img[pt])
                        length += 1
                    o = o * length // int(np.gcd(o, length))
                out[i] = o
            self._cache["orders"] = out
        return self._cache["orders"]

    def _gen_list(self) -> list:
        return list(self.generator_ids) if self.generator_ids else list(range(self.order))

    def conjugacy_classes(self) -> list:
        """Classes as sorted id arrays, ordered by (size, least id)."""
        if "classes" not in self._cache:
            gens = self._gen_list()
            maps = [self.conj_map_by(g) for g in gens]
            assigned = np.full(self.order, -1, dtype=np.int64)
            classes = []
            for x in range(self.order):
                if assigned[x] >= 0:
                    continue
                orbit = {x}
                frontier = [x]
                while frontier:
                    nxt = []
                    for cm in maps:
                        for y in frontier:
                            z = int(cm[y])
                            if z not in orbit:
                                orbit.add(z)
                                nxt.append(z)
                    frontier = nxt
                arr = np.array(sorted(orbit), dtype=np.int32)
                assigned[arr] = len(classes)
                classes.append(arr)
            classes.sort(key=lambda a: (len(a), int(a[0])))
            self._cache["classes"] = classes
        return self._cache["classes"]

    def cycle_notation(self, i: int) -> str:
        img = self.perms[i]
        out = []
        seen = set()
        for start in range(self.degree):
            if start in seen or img[start] == start:
                seen.add(start)
                continue
            cyc = [start]
            seen.add(start)
            pt = int(img[start])
            while pt != start:
                cyc.append(pt)
                seen.add(pt)
                pt = int(img[pt])
            out.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
        return "".join(out) if out else "()"

    def __repr__(self):
        return f"GroupTable({self.name or 'G'}, degree={self.degree}, order={self.order})"


def close_images(gen_images, degree: int, cap=None) -> np.ndarray:
    """BFS closure of image rows under composition."""
    cap = order_cap() if cap is None else cap
    ident = np.arange(degree, dtype=np.uint8)
    gens = [np.asarray(g, dtype=np.uint8) for g in gen_images]
    for g in gens:
        if sorted(g.tolist()) != list(range(degree)):
            raise InvalidSpec("generator is not a bijection")
    known = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        fr = np.array(frontier, dtype=np.uint8)
        nxt = []
        for g in gens:
            prod = g[fr]  # apply the frontier element, then g
            for row in prod:
                key = row.tobytes()
                if key not in known:
                    known[key] = row
                    nxt.append(row)
                    if len(known) > cap:
                        raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = nxt
    return np.array(list(known.values()), dtype=np.uint8)


def generate_group(spec: GroupSpec, cap=None) -> GroupTable:
    """Full closure of the generators, canonically ordered."""
    images = spec.generator_images()
    perms = close_images(images, spec.degree, cap=cap)
    table = GroupTable(perms, name=spec.name)
    table.generator_ids = tuple(
        int(i) for i in table.ids_of(np.array(images, dtype=np.uint8)))
    return table


# ---------------------------------------------------------------------------
# Subgroups


class Subgroup:
    """An element-id set closed under the group operation.

    Canonical identity is the sorted id tuple; instances are immutable
    (and hashable) once built.
    """

    __slots__ = ("parent", "ids", "_key", "_gens")

    def __init__(self, parent: GroupTable, ids, gens=None):
        self.parent = parent
        self.ids = np.unique(np.asarray(ids, dtype=np.int32))
        self._key = tuple(int(i) for i in self.ids)
        self._gens = tuple(int(g) for g in gens) if gens is not None else None

    @property
    def order(self) -> int:
        return len(self.ids)

    def key(self) -> tuple:
        return self._key

    def __contains__(self, i) -> bool:
        i = int(i)
        j = int(np.searchsorted(self.ids, i))
        return j < len(self.ids) and int(self.ids[j]) == i

    def contains_ids(self, ids) -> np.ndarray:
        ids = np.asarray(ids)
        if len(self.ids) == 0:
            return np.zeros(ids.shape, dtype=bool)
        pos = np.clip(np.searchsorted(self.ids, ids), 0, len(self.ids) - 1)
        return self.ids[pos] == ids

    def issubset(self, other: "Subgroup") -> bool:
        if self.order > other.order:
            return False
        return bool(np.all(other.contains_ids(self.ids)))

    def generators(self) -> tuple:
        """A small deterministic generating set (greedy by least id)."""
        if self._gens is None:
            sub = span(self.parent, self.ids)
            assert sub.order == self.order
            self._gens = sub._gens
        return self._gens

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, [0], gens=())


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, np.arange(G.order, dtype=np.int32),
                    gens=G.generator_ids or tuple(range(G.order)))


def _extend_closed(G: GroupTable, base: np.ndarray, base_gens: list, y: int):
    """Element ids of <K, y> for a closed base set K, by BFS on right cosets
    (each coset labeled by its least element)."""
    mults = [int(g) for g in base_gens] + [int(y)]
    cosets = {int(base.min()): base}
    frontier = [0]  # coset representatives
    while frontier:
        nxt = []
        for t in frontier:
            for g in mults:
                tg = G.mult(t, g)
                coset = G.mult_many(base, tg)
                label = int(coset.min())
                if label not in cosets:
                    cosets[label] = coset
                    nxt.append(tg)
        frontier = nxt
    return np.sort(np.concatenate(list(cosets.values())))


def span(G: GroupTable, gen_ids) -> Subgroup:
    """Subgroup generated by the given element ids.

    Grows one generator at a time by coset BFS, skipping redundant
    generators, so long generating lists (e.g. whole conjugacy classes)
    cost little.
    """
    gen_ids = [int(g) for g in gen_ids]
    ids = np.array([0], dtype=np.int32)
    kept = []
    sub = None
    for y in gen_ids:
        pos = np.searchsorted(ids, y)
        if pos < len(ids) and ids[pos] == y:
            continue
        ids = _extend_closed(G, ids, kept, y).astype(np.int32)
        kept.append(y)
    return Subgroup(G, ids, gens=kept)


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup(a.parent, np.intersect1d(a.ids, b.ids))


def product_subgroup(G: GroupTable, a: Subgroup, b: Subgroup) -> Subgroup:
    """The product set AB; callers guarantee one factor normalizes the other,
    and closure is verified."""
    ids = set()
    for j in b.ids:
        ids.update(int(i) for i in G.mult_many(a.ids, int(j)))
    arr = np.array(sorted(ids), dtype=np.int32)
    sub = Subgroup(G, arr)
    for g in list(a.generators()) + list(b.generators()):
        if not bool(np.all(sub.contains_ids(G.mult_many(arr, g)))):
            raise PreconditionFailed("product set AB is not a subgroup")
    return sub


def conjugate_subgroup(G: GroupTable, H: Subgroup, g: int) -> Subgroup:
    return Subgroup(G, G.conj_many(H.ids, int(g)))


# ---------------------------------------------------------------------------
# Centralizers, normalizers, Sylow machinery


def _restrict(G: GroupTable, within) -> np.ndarray:
    return np.arange(G.order, dtype=np.int32) if within is None else within.ids


def centralizer(G: GroupTable, S, within=None) -> Subgroup:
    """{g : gs = sg for all s in S}; S is a Subgroup or an element-id iterable.

    ``within`` restricts the ambient group (giving C_K(S)).
    """
    if isinstance(S, Subgroup):
        targets = S.generators() or (0,)
    else:
        targets = tuple(int(x) for x in S)
    cand = _restrict(G, within)
    rows = G.perms[cand]
    mask = np.ones(len(cand), dtype=bool)
    for s in targets:
        simg = G.perms[s]
        gs = simg[rows]      # apply g, then s
        sg = rows[:, simg]   # apply s, then g
        mask &= np.all(gs == sg, axis=1)
    return Subgroup(G, cand[mask])


def normalizer(G: GroupTable, H: Subgroup, within=None) -> Subgroup:
    """{g : H^g = H} (restricted to ``within`` if given)."""
    cand = _restrict(G, within)
    ginv_rows = G.perms[G.inv[cand]]
    g_rows = G.perms[cand]
    mask = np.ones(len(cand), dtype=bool)
    for x in H.generators() or (0,):
        inner = G.perms[x][ginv_rows]                       # x(g^-1(pt))
        conj = G.ids_of(np.take_along_axis(g_rows, inner, axis=1))
        mask &= H.contains_ids(conj)
    return Subgroup(G, cand[mask])


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def p_element_ids(G: GroupTable, p: int, within=None) -> np.ndarray:
    """Nontrivial elements of p-power order."""
    cand = _restrict(G, within)
    orders = G.element_orders()[cand]
    vals = orders.copy()
    while True:
        div = vals % p == 0
        if not div.any():
            break
        vals = np.where(div, vals // p, vals)
    return cand[(vals == 1) & (orders > 1)]


def sylow_p(G: GroupTable, p: int, within=None) -> Subgroup:
    """Grow a p-subgroup by adjoining the least p-element of N(P) \\ P.

    Returns the trivial subgroup when p does not divide the order.
    """
    ambient = whole_group(G) if within is None else within
    target = p_part(ambient.order, p)
    P = trivial_subgroup(G)
    while P.order < target:
        N = ambient if P.order == 1 else normalizer(G, P, within=ambient)
        cands = p_element_ids(G, p, within=N)
        cands = cands[~P.contains_ids(cands)]
        y = int(cands[0])
        P = span(G, list(P.generators()) + [y])
    return P


def subgroup_orbit(G: GroupTable, H: Subgroup, under=None) -> list:
    """Conjugation orbit of H under generators ``under`` (defaults to G's)."""
    gens = list(under) if under is not None else (G._gen_list())
    seen = {H.key(): H}
    frontier = [H]
    while frontier:
        nxt = []
        for K in frontier:
            for g in gens:
                ids = np.sort(G.conj_many(K.ids, int(g)))
                key = tuple(int(i) for i in ids)
                if key not in seen:
                    sub = Subgroup(G, ids)
                    seen[key] = sub
                    nxt.append(sub)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: s.key())


def all_sylow_p(G: GroupTable, p: int, within=None) -> list:
    P = sylow_p(G, p, within=within)
    under = None if within is None else within.generators()
    return subgroup_orbit(G, P, under=under)


def core_p(G: GroupTable, p: int, within=None) -> Subgroup:
    """O_p: the intersection of all Sylow p-subgroups."""
    sylows = all_sylow_p(G, p, within=within)
    ids = sylows[0].ids
    for S in sylows[1:]:
        ids = np.intersect1d(ids, S.ids)
        if len(ids) == 1:
            break
    return Subgroup(G, ids)


def omega1(G: GroupTable, p: int, within=None) -> Subgroup:
    """Subgroup generated by the elements of order p."""
    cand = _restrict(G, within)
    gens = cand[G.element_orders()[cand] == p]
    if len(gens) == 0:
        return trivial_subgroup(G)
    return span(G, gens)


def center(G: GroupTable, within=None) -> Subgroup:
    sub = whole_group(G) if within is None else within
    return centralizer(G, sub, within=sub)


def derived_subgroup(G: GroupTable, within=None) -> Subgroup:
    """Commutator subgroup: normal closure of generator commutators."""
    sub = whole_group(G) if within is None else within
    gens = list(sub.generators()) or [0]
    comms = set()
    for a in gens:
        ainv = G.inv_of(a)
        for b in gens:
            binv = G.inv_of(b)
            comms.add(G.mult(G.mult(G.mult(ainv, binv), a), b))
    current = span(G, sorted(comms))
    while True:
        extra = set()
        for g in gens:
            conj = G.conj_many(np.array(current.generators() or [0], dtype=np.int32), g)
            extra.update(int(y) for y in conj if int(y) not in current)
        if not extra:
            return current
        current = span(G, list(current.generators()) + sorted(extra))


# ---------------------------------------------------------------------------
# Classes, normal subgroups, components


def conjugacy_classes_in(G: GroupTable, sub: Subgroup) -> list:
    """Conjugacy classes of ``sub``, as sorted id arrays."""
    gens = sub.generators() or (0,)
    maps = {g: G.conj_map_by(int(g)) for g in gens}
    classes = []
    assigned = set()
    for x in sub.ids:
        x = int(x)
        if x in assigned:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = int(maps[g][y])
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        classes.append(np.array(sorted(orbit), dtype=np.int32))
        assigned |= orbit
    classes.sort(key=lambda a: (len(a), int(a[0])))
    return classes


def normal_subgroups_of(G: GroupTable, sub: Subgroup, budget: int = 50000) -> list:
    """All normal subgroups of ``sub``: closures of unions of conjugacy
    classes, grown one class at a time from the trivial group."""
    classes = conjugacy_classes_in(G, sub)
    triv = trivial_subgroup(G)
    seen = {triv.key(): triv}
    frontier = [triv]
    work = 0
    while frontier:
        nxt = []
        for N in frontier:
            for cls in classes:
                if bool(np.all(N.contains_ids(cls))):
                    continue
                work += 1
                if work > budget:
                    raise CapExceeded("normal-subgroup lattice budget exceeded")
                M = span(G, list(N.generators()) + [int(c) for c in cls])
                if M.key() not in seen:
                    seen[M.key()] = M
                    nxt.append(M)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.order, s.key()))


def is_perfect(G: GroupTable, sub: Subgroup) -> bool:
    return derived_subgroup(G, within=sub).order == sub.order


def is_quasisimple(G: GroupTable, sub: Subgroup) -> bool:
    """Perfect, and simple modulo center."""
    if sub.order == 1 or not is_perfect(G, sub):
        return False
    Z = center(G, within=sub)
    for N in normal_subgroups_of(G, sub):
        if N.order != sub.order and not N.issubset(Z):
            return False
    return True


def components_of(G: GroupTable, sub=None, _memo=None, budget: int = 50000) -> list:
    """Quasisimple subnormal subgroups, by depth-first descent through
    normal-subgroup lattices."""
    sub = whole_group(G) if sub is None else sub
    memo = {} if _memo is None else _memo
    if sub.key() in memo:
        return memo[sub.key()]
    if is_quasisimple(G, sub):
        memo[sub.key()] = [sub]
        return [sub]
    found = {}
    for N in normal_subgroups_of(G, sub, budget=budget):
        if N.order in (1, sub.order):
            continue
        for L in components_of(G, N, _memo=memo, budget=budget):
            found[L.key()] = L
    out = sorted(found.values(), key=lambda s: s.key())
    memo[sub.key()] = out
    return out


def prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def fitting_data(G: GroupTable, sub=None) -> dict:
    """Components, layer E, Fitting subgroup F, and F* = EF."""
    sub = whole_group(G) if sub is None else sub
    comps = components_of(G, sub)
    egens = [g for L in comps for g in L.generators()]
    E = span(G, egens) if egens else trivial_subgroup(G)
    fgens = []
    for p in sorted(set(prime_factors(sub.order))):
        fgens.extend(core_p(G, p, within=sub).generators())
    F = span(G, fgens) if fgens else trivial_subgroup(G)
    stargens = list(E.generators()) + list(F.generators())
    Fstar = span(G, stargens) if stargens else trivial_subgroup(G)
    return {"components": comps, "E": E, "F": F, "Fstar": Fstar}


# ---------------------------------------------------------------------------
# p-invariants and local ranks


def _coset_reps(G: GroupTable, P: Subgroup, cands: np.ndarray) -> list:
    """One candidate per right coset of P (the least one), preserving order
    of first appearance."""
    seen = set()
    reps = []
    for y in cands:
        y = int(y)
        label = int(G.mult_many(P.ids, y).min())
        if label not in seen:
            seen.add(label)
            reps.append(y)
    return reps


def elementary_abelian_subgroups(G: GroupTable, p: int, within=None) -> list:
    """All nontrivial elementary abelian p-subgroups, breadth-first over
    ranks, extending by commuting order-p elements."""
    ckey = ("ap", p, None if within is None else within.key())
    if ckey in G._cache:
        return G._cache[ckey]
    cand = _restrict(G, within)
    orders = G.element_orders()
    seeds = cand[orders[cand] == p]
    level = {}
    for x in seeds:
        E = span(G, [int(x)])
        level.setdefault(E.key(), E)
    levels = [sorted(level.values(), key=lambda s: s.key())]
    out = list(levels[0])
    edges = set()
    while levels[-1]:
        nxt = {}
        for E in levels[-1]:
            C = centralizer(G, E, within=within)
            ext = C.ids[orders[C.ids] == p]
            ext = ext[~E.contains_ids(ext)]
            for y in _coset_reps(G, E, ext):
                E2 = span(G, list(E.generators()) + [int(y)])
                assert E2.order == E.order * p
                nxt.setdefault(E2.key(), E2)
                edges.add((E.key(), E2.key()))
        nxt_list = sorted(nxt.values(), key=lambda s: s.key())
        levels.append(nxt_list)
        out.extend(nxt_list)
    G._cache[ckey] = out
    G._cache[ckey + ("edges",)] = edges
    return out


def m_p_rank(G: GroupTable, p: int, within=None) -> int:
    """Max rank of an elementary abelian p-subgroup (0 if there are none)."""
    best = 0
    for E in elementary_abelian_subgroups(G, p, within=within):
        r = 0
        n = E.order
        while n > 1:
            n //= p
            r += 1
        best = max(best, r)
    return best


def p_invariants(G: GroupTable, p: int, within=None) -> dict:
    return {
        "m_p": m_p_rank(G, p, within=within),
        "omega1": omega1(G, p, within=within),
        "center": center(G, within=within),
    }


def all_p_subgroups(G: GroupTable, p: int, within=None) -> list:
    """All nontrivial p-subgroups: BFS by order, extending each P with
    p-elements y of N(P) with y^p in P."""
    ckey = ("sp", p, None if within is None else within.key())
    if ckey in G._cache:
        return G._cache[ckey]
    ambient = whole_group(G) if within is None else within
    orders = G.element_orders()
    pelems = p_element_ids(G, p, within=ambient)
    level = {}
    for x in pelems[orders[pelems] == p]:
        P = span(G, [int(x)])
        level.setdefault(P.key(), P)
    levels = [sorted(level.values(), key=lambda s: s.key())]
    out = list(levels[0])
    edges = set()
    while levels[-1]:
        nxt = {}
        for P in levels[-1]:
            N = normalizer(G, P, within=ambient)
            cands = p_element_ids(G, p, within=N)
            cands = cands[~P.contains_ids(cands)]
            keep = []
            for y in cands:
                y = int(y)
                yp = y
                for _ in range(p - 1):
                    yp = G.mult(yp, y)
                if yp in P:
                    keep.append(y)
            for y in _coset_reps(G, P, np.array(keep, dtype=np.int32)):
                Q = span(G, list(P.generators()) + [int(y)])
                assert Q.order == P.order * p
                nxt.setdefault(Q.key(), Q)
                edges.add((P.key(), Q.key()))
        nxt_list = sorted(nxt.values(), key=lambda s: s.key())
        levels.append(nxt_list)
        out.extend(nxt_list)
    G._cache[ckey] = out
    G._cache[ckey + ("edges",)] = edges
    return out


def subgroup_cover_edges(G: GroupTable, p: int, kind: str, within=None) -> set:
    """Cover edges (subgroup key pairs) recorded by the BFS enumerations."""
    fn = elementary_abelian_subgroups if kind == "ap" else all_p_subgroups
    fn(G, p, within=within)
    return G._cache[(kind, p, None if within is None else within.key(), "edges")]


def m_local(G: GroupTable, p: int, q: int, within=None) -> int:
    """p-local q-rank: max over P in S_p of m_q(N(P))."""
    if p == q:
        raise PreconditionFailed("m_local requires distinct primes")
    best = 0
    seen = {}
    for P in all_p_subgroups(G, p, within=within):
        N = normalizer(G, P, within=within)
        if N.key() not in seen:
            seen[N.key()] = m_p_rank(G, q, within=N)
        best = max(best, seen[N.key()])
    return best


# ---------------------------------------------------------------------------
# Bundled corpus


CORPUS_ORDERS = {
    "c2": 2, "c3": 3, "s3": 6, "s4": 24, "a4": 12, "d8": 8, "sl23": 24,
    "a5": 60, "s5": 120, "a6": 360, "a7": 2520, "s7": 5040,
    "a5xa5": 3600, "psl28": 504, "pgammal28": 1512,
    "s3xs3": 36, "a4xa4": 144, "s5xs3": 720, "a5xs3": 360,
}


def corpus_names() -> list:
    return sorted(CORPUS_ORDERS)


def load_spec(name: str) -> GroupSpec:
    ref = resources.files("qplab").joinpath(f"corpus/{name}.json")
    return spec_from_json(json.loads(ref.read_text()), name=name)


@lru_cache(maxsize=None)
def load_corpus(name: str) -> GroupTable:
    """Bundled group by name; the enumerated order is verified at load."""
    G = generate_group(load_spec(name))
    expect = CORPUS_ORDERS.get(name)
    if expect is not None and G.order != expect:
        raise InvalidSpec(f"corpus group {name}: order {G.order} != {expect}")
    return G
