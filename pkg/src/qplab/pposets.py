"""Builders for p-subgroup posets and their decorations: Brown, Quillen,
and Bouc posets, infimum retracts, fixed subposets, p-outer and image
posets, and the N/F split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups as gr
from .errors import PreconditionFailed
from .posets import Poset, from_subgroups, i_retract

KINDS = ("sp", "ap", "bp", "iap", "isp")


@dataclass(frozen=True)
class PPoset:
    """A poset of p-subgroups tagged with their Subgroup objects."""

    poset: Poset
    group: gr.GroupTable
    p: int
    kind: str

    @property
    def n(self) -> int:
        return self.poset.n

    def subgroups(self) -> list:
        return [self.poset.tag(i) for i in range(self.poset.n)]


def is_elementary_abelian(G: gr.GroupTable, p: int, S: gr.Subgroup) -> bool:
    orders = G.element_orders()[S.ids]
    return bool(np.all((orders == 1) | (orders == p))) and \
        gr.centralizer(G, S, within=S).order == S.order


def is_radical(G: gr.GroupTable, p: int, P: gr.Subgroup, within=None) -> bool:
    """P = O_p(N(P))."""
    N = gr.normalizer(G, P, within=within)
    return gr.core_p(G, p, within=N).order == P.order


def iap_membership(G: gr.GroupTable, p: int, E: gr.Subgroup) -> bool:
    """E = Omega_1(Z(Omega_1(C_G(E))))."""
    C = gr.centralizer(G, E)
    O1C = gr.omega1(G, p, within=C)
    Z = gr.center(G, within=O1C)
    O1Z = gr.omega1(G, p, within=Z)
    return O1Z.key() == E.key()


def build_p_poset(G: gr.GroupTable, p: int, kind: str, within=None) -> PPoset:
    """One of the five poset kinds; empty when p does not divide the order.

    iap is computed both as the i-retract of ap and via the
    Omega_1-Z-Omega_1-centralizer characterization, cross-checked equal.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "ap":
        subs = gr.elementary_abelian_subgroups(G, p, within=within)
        return PPoset(from_subgroups(subs), G, p, "ap")
    if kind == "sp":
        subs = gr.all_p_subgroups(G, p, within=within)
        return PPoset(from_subgroups(subs), G, p, "sp")
    if kind == "bp":
        subs = [P for P in gr.all_p_subgroups(G, p, within=within)
                if is_radical(G, p, P, within=within)]
        return PPoset(from_subgroups(subs), G, p, "bp")
    if kind == "isp":
        sp = build_p_poset(G, p, "sp", within=within)
        fixed, _ = i_retract(sp.poset)
        return PPoset(fixed, G, p, "isp")
    ap = build_p_poset(G, p, "ap", within=within)
    fixed, _ = i_retract(ap.poset)
    by_char = {E.key() for E in ap.subgroups() if iap_membership(G, p, E)}
    via_retract = {fixed.tag(i).key() for i in range(fixed.n)}
    assert by_char == via_retract, \
        "i(Ap) retract disagrees with the Omega_1 Z Omega_1 C characterization"
    return PPoset(fixed, G, p, "iap")


# ---------------------------------------------------------------------------
# Fixed subposets


def fixed_subposet(X, Q, group=None) -> Poset:
    """Subposet of elements whose Subgroup tags are fixed setwise by every
    generator of Q (Q a Subgroup, or an iterable of element ids with
    ``group`` supplied)."""
    poset = X.poset if isinstance(X, PPoset) else X
    if isinstance(Q, gr.Subgroup):
        G = Q.parent
        gens = Q.generators()
    else:
        G = group if group is not None else X.group
        gens = [int(g) for g in Q]
    keep = []
    for i in range(poset.n):
        S = poset.tag(i)
        ok = True
        for g in gens:
            conj = np.sort(G.conj_many(S.ids, g))
            if not np.array_equal(conj, S.ids):
                ok = False
                break
        if ok:
            keep.append(i)
    return poset.subposet(keep)


def ak_orbit_check(G: gr.GroupTable, X, Q: gr.Subgroup, p: int) -> bool:
    """Nontrivial action of a fixed E on a Q-point-orbit forces p | orbit
    size; returns True when that holds for every E in X^Q."""
    fixed = fixed_subposet(X, Q)
    orbits = _point_orbits(G, Q)
    for i in range(fixed.n):
        E = fixed.tag(i)
        for orb in orbits:
            moves = any(int(G.perms[e][pt]) != pt
                        for e in E.generators() for pt in orb)
            if moves and len(orb) % p != 0:
                return False
    return True


def _point_orbits(G: gr.GroupTable, Q: gr.Subgroup) -> list:
    seen = set()
    orbits = []
    gens = Q.generators() or (0,)
    for start in range(G.degree):
        if start in seen:
            continue
        orb = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for pt in frontier:
                for g in gens:
                    img = int(G.perms[g][pt])
                    if img not in orb:
                        orb.add(img)
                        nxt.append(img)
            frontier = nxt
        seen |= orb
        orbits.append(sorted(orb))
    return orbits


# ---------------------------------------------------------------------------
# Outer and image posets


def outer_poset(G: gr.GroupTable, L: gr.Subgroup, p: int) -> list:
    """p-outers of L in G: B in A_p(N_G(L)) with B meeting L C_G(L) trivially."""
    N = gr.normalizer(G, L)
    C = gr.centralizer(G, L)
    LC = gr.product_subgroup(G, L, C)
    out = []
    for B in gr.elementary_abelian_subgroups(G, p, within=N):
        meet = np.intersect1d(B.ids, LC.ids)
        if len(meet) == 1:
            out.append(B)
    return out


def outer_and_image_posets(G: gr.GroupTable, L: gr.Subgroup, p: int) -> dict:
    """The p-outer poset and the image poset of L in G.

    Image-poset elements are equivalence classes of faithful B (C_B(L) = 1)
    under B ~ B' iff B C_G(L) = B' C_G(L), ordered by inclusion of the
    products; tags are (representative, product subgroup).
    """
    N = gr.normalizer(G, L)
    C = gr.centralizer(G, L)
    outers = outer_poset(G, L, p)
    classes = {}
    for B in gr.elementary_abelian_subgroups(G, p, within=N):
        CB = gr.Subgroup(G, np.intersect1d(B.ids, C.ids))
        if CB.order != 1:
            continue
        prod = gr.product_subgroup(G, B, C)
        key = prod.key()
        if key not in classes or B.key() < classes[key][0].key():
            classes[key] = (B, prod)
    reps = sorted(classes.values(), key=lambda t: (t[1].order, t[1].key()))
    n = len(reps)
    lt = np.zeros((n, n), dtype=bool)
    for i, (_, pa) in enumerate(reps):
        for j, (_, pb) in enumerate(reps):
            if pa.order < pb.order and pa.issubset(pb):
                lt[i, j] = True
    image = Poset([t[1].key() for t in reps], lt, tags=reps, _checked=True)
    return {"outer": from_subgroups(outers) if outers else
            Poset([], np.zeros((0, 0), dtype=bool), tags=[], _checked=True),
            "outer_subgroups": outers,
            "image": image}


# ---------------------------------------------------------------------------
# The N/F decomposition


def nf_split(Bposet: Poset, H: gr.Subgroup, G: gr.GroupTable, p: int) -> dict:
    """Split a subgroup-tagged poset B (with A_p(H) <= B <= A_p(G)) into the
    inflation N = {E : E meets H} and its complement F; the F-left chain
    property is verified on the given order."""
    ap_h = {E.key() for E in gr.elementary_abelian_subgroups(G, p, within=H)}
    present = {Bposet.tag(i).key() for i in range(Bposet.n)}
    if not ap_h <= present:
        raise PreconditionFailed("A_p(H) is not contained in the poset")
    n_ids, f_ids = [], []
    for i in range(Bposet.n):
        E = Bposet.tag(i)
        meet = np.intersect1d(E.ids, H.ids)
        (n_ids if len(meet) > 1 else f_ids).append(i)
    fset = set(f_ids)
    for i in n_ids:
        for j in Bposet.above(i):
            if int(j) in fset:
                raise PreconditionFailed(
                    "F-left property fails: an N-element lies below an F-element")
    return {"N": Bposet.subposet(n_ids), "F": Bposet.subposet(f_ids),
            "N_ids": n_ids, "F_ids": f_ids}
