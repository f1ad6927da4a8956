"""Finite strict-order posets: chains, links, joins, products, pre-joins,
and the infimum-of-maximals retraction."""

from __future__ import annotations

import json

import numpy as np

from .errors import CapExceeded, CycleDetected, NoInfimum

VERTEX_CAP = 4096


class Poset:
    """Elements (opaque hashable labels) plus a strict order as a dense
    boolean matrix.  Immutable after construction.

    ``tags`` carries an optional per-element payload (e.g. the Subgroup an
    element represents, or a pre-join pair).
    """

    def __init__(self, labels, lt: np.ndarray, tags=None, cap: int = VERTEX_CAP,
                 _checked: bool = False):
        self.labels = list(labels)
        self.n = len(self.labels)
        if self.n > cap:
            raise CapExceeded(f"poset has {self.n} elements, cap {cap}")
        self.lt = np.ascontiguousarray(lt, dtype=bool)
        self.tags = list(tags) if tags is not None else None
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != self.n:
            raise ValueError("duplicate poset labels")
        if not _checked:
            if self.lt.shape != (self.n, self.n):
                raise ValueError("relation matrix shape mismatch")
            if bool(np.any(np.diag(self.lt))):
                raise CycleDetected("strict order is not irreflexive")
            comp = self.lt @ self.lt
            if bool(np.any(comp & ~self.lt)):
                raise CycleDetected("strict order is not transitive")
        # fixed linear extension: sort by size of the down-set, then index
        below = self.lt.sum(axis=0)
        self.topo = np.lexsort((np.arange(self.n), below))
        self.topo_pos = np.empty(self.n, dtype=np.int64)
        self.topo_pos[self.topo] = np.arange(self.n)

    def index(self, label) -> int:
        return self._index[label]

    def tag(self, i: int):
        return self.tags[i] if self.tags is not None else self.labels[i]

    def above(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.lt[i])

    def below(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.lt[:, i])

    def comparable(self, i: int, j: int) -> bool:
        return bool(self.lt[i, j] or self.lt[j, i])

    def maximal_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.lt.any(axis=1))

    def minimal_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.lt.any(axis=0))

    def subposet(self, ids) -> "Poset":
        ids = np.asarray(sorted(int(i) for i in ids), dtype=np.int64)
        labels = [self.labels[i] for i in ids]
        tags = [self.tag(i) for i in ids] if self.tags is not None else None
        return Poset(labels, self.lt[np.ix_(ids, ids)], tags=tags, _checked=True)

    def dimension(self) -> int:
        """Length of a longest chain, minus one (-1 for the empty poset)."""
        if self.n == 0:
            return -1
        depth = np.zeros(self.n, dtype=np.int64)
        for i in self.topo:
            b = self.below(i)
            if len(b):
                depth[i] = depth[b].max() + 1
        return int(depth.max())

    def relation_pairs(self) -> list:
        out = np.argwhere(self.lt)
        return [(int(i), int(j)) for i, j in out]

    def content_key(self) -> bytes:
        """Order-isomorphism-sensitive key: element count plus relation bytes
        (labels do not matter for homology)."""
        import hashlib
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(np.packbits(self.lt).tobytes())
        return h.digest()

    def __repr__(self):
        return f"Poset(n={self.n}, relations={int(self.lt.sum())})"


def build_poset(elements, pairs, tags=None, cap: int = VERTEX_CAP) -> Poset:
    """Poset from labels and strict-order pairs; the transitive closure is
    taken, and irreflexivity of the closure is verified."""
    labels = list(elements)
    n = len(labels)
    if n > cap:
        raise CapExceeded(f"poset has {n} elements, cap {cap}")
    index = {lab: i for i, lab in enumerate(labels)}
    lt = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        lt[index[a], index[b]] = True
    closure = transitive_closure(lt)
    if bool(np.any(np.diag(closure))):
        raise CycleDetected("relation closure contains x < x")
    return Poset(labels, closure, tags=tags, cap=cap, _checked=True)


def transitive_closure(lt: np.ndarray) -> np.ndarray:
    closure = lt.copy()
    while True:
        nxt = closure | (closure @ closure)
        if np.array_equal(nxt, closure):
            return closure
        closure = nxt


def from_subgroups(subgroups, kind_label="") -> Poset:
    """Inclusion poset of a list of Subgroup objects (tags = the subgroups)."""
    subs = sorted(subgroups, key=lambda s: (s.order, s.key()))
    n = len(subs)
    lt = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(subs):
        for j, b in enumerate(subs):
            if a.order < b.order and a.issubset(b):
                lt[i, j] = True
    labels = [s.key() for s in subs]
    return Poset(labels, lt, tags=subs, _checked=True)


# ---------------------------------------------------------------------------
# Chains


def enumerate_chains(X: Poset, k: int) -> list:
    """All chains with k+1 members, as tuples of element ids ascending in
    the order; k = -1 yields the single empty chain."""
    if k < -1:
        return []
    if k == -1:
        return [()]
    return chains_by_degree(X).get(k, [])


def chains_by_degree(X: Poset) -> dict:
    """All non-empty chains, grouped by degree (cached on the poset)."""
    cached = getattr(X, "_chain_cache", None)
    if cached is not None:
        return cached
    above = [X.above(i) for i in range(X.n)]
    out = {0: [(int(i),) for i in X.topo]} if X.n else {}
    deg = 0
    while out.get(deg):
        nxt = []
        for chain in out[deg]:
            top = chain[-1]
            for j in above[top]:
                nxt.append(chain + (int(j),))
        if not nxt:
            break
        deg += 1
        out[deg] = nxt
    X._chain_cache = out
    return out


def is_chain(X: Poset, members) -> bool:
    m = list(members)
    for a, b in zip(m, m[1:]):
        if not X.lt[a, b]:
            return False
    return True


def sort_chain(X: Poset, members) -> tuple:
    """Members sorted ascending; raises if not pairwise comparable."""
    m = sorted(set(int(i) for i in members), key=lambda i: int(X.topo_pos[i]))
    if not is_chain(X, m):
        raise ValueError("members are not pairwise comparable")
    return tuple(m)


def link_of(M, a) -> dict:
    """Elements x with a + {x} a chain of M, plus the full/maximal verdict.

    M is a Poset or a SubComplex (anything with has_chain/element_ids);
    ``full`` means every link element lies above max(a).
    """
    from .homology import SubComplex
    if isinstance(M, Poset):
        M = SubComplex.from_poset(M)
    X = M.poset
    a = tuple(sort_chain(X, a))
    if not M.has_chain(a):
        raise ValueError("chain does not lie in the subcomplex")
    ext = []
    for x in M.element_ids():
        if x in a:
            continue
        try:
            c = sort_chain(X, a + (x,))
        except ValueError:
            continue
        if M.has_chain(c):
            ext.append(int(x))
    top = a[-1] if a else None
    full = all(X.lt[top, x] for x in ext) if a else not ext
    return {"elements": ext, "full": bool(full), "maximal": not ext}


# ---------------------------------------------------------------------------
# Join, Cartesian product, pre-join


def join(X: Poset, Y: Poset, cap: int = VERTEX_CAP) -> Poset:
    """Disjoint union with every X-element below every Y-element."""
    n, m = X.n, Y.n
    lt = np.zeros((n + m, n + m), dtype=bool)
    lt[:n, :n] = X.lt
    lt[n:, n:] = Y.lt
    lt[:n, n:] = True
    labels = [(0, lab) for lab in X.labels] + [(1, lab) for lab in Y.labels]
    tags = ([X.tag(i) for i in range(n)] + [Y.tag(j) for j in range(m)])
    return Poset(labels, lt, tags=tags, cap=cap, _checked=True)


def cartesian(X: Poset, Y: Poset, cap: int = VERTEX_CAP) -> Poset:
    """Componentwise order on pairs."""
    lex = np.eye(X.n, dtype=bool) | X.lt
    ley = np.eye(Y.n, dtype=bool) | Y.lt
    le = np.kron(lex, ley)
    lt = le & ~np.eye(X.n * Y.n, dtype=bool)
    labels = [(x, y) for x in X.labels for y in Y.labels]
    tags = [(X.tag(i), Y.tag(j)) for i in range(X.n) for j in range(Y.n)]
    return Poset(labels, lt, tags=tags, cap=cap, _checked=True)


BOTTOM = None  # adjoined minimum in C^-X


def bottomed(X: Poset) -> Poset:
    """C^-X: X with an adjoined minimum labeled BOTTOM."""
    n = X.n
    lt = np.zeros((n + 1, n + 1), dtype=bool)
    lt[1:, 1:] = X.lt
    lt[0, 1:] = True
    labels = [BOTTOM] + [(2, lab) for lab in X.labels]
    tags = [BOTTOM] + [X.tag(i) for i in range(n)]
    return Poset(labels, lt, tags=tags, cap=X.n + 1, _checked=True)


def pre_join(X: Poset, Y: Poset, cap: int = VERTEX_CAP) -> Poset:
    """C^-X x C^-Y minus the double bottom; X embeds as (x, BOTTOM) and Y
    as (BOTTOM, y); tags record the pair of original tags."""
    cx, cy = bottomed(X), bottomed(Y)
    prod = cartesian(cx, cy, cap=cap + 1)
    keep = [i for i, lab in enumerate(prod.labels) if lab != (BOTTOM, BOTTOM)]
    sub = prod.subposet(keep)
    if sub.n > cap:
        raise CapExceeded(f"pre-join has {sub.n} elements, cap {cap}")
    return sub


def prejoin_pair_label(x_label, y_label):
    """Label of the pre-join element for original labels (BOTTOM allowed)."""
    lx = BOTTOM if x_label is BOTTOM else (2, x_label)
    ly = BOTTOM if y_label is BOTTOM else (2, y_label)
    return (lx, ly)


# ---------------------------------------------------------------------------
# The infimum-of-maximals retraction


def _check_pairwise_meets(X: Poset, le: np.ndarray):
    """Verify every lower-bounded pair has an infimum (the finite-poset
    equivalent of every lower-bounded subset having one).

    A lower bound z of {i, j} has its whole down-set inside the common
    lower bounds, so z is the infimum iff |down(z)| equals the count of
    common lower bounds.
    """
    sizes = le.sum(axis=0).astype(np.int64)          # |down(z)| per z
    counts = le.T.astype(np.float32) @ le.astype(np.float32)
    best = np.zeros((X.n, X.n), dtype=np.int64)      # max |down(z)| over z in LB
    for i in range(X.n):
        zs = np.flatnonzero(le[:, i])
        if len(zs) == 0:
            continue
        vals = np.where(le[zs, :], sizes[zs, None], 0)
        best[i] = vals.max(axis=0)
    bad = (counts > 0.5) & (best != np.rint(counts).astype(np.int64))
    if bool(bad.any()):
        raise NoInfimum("a lower-bounded pair has no infimum")


def _infimum_of(le: np.ndarray, members: np.ndarray) -> int:
    """Infimum of a nonempty set of elements, or -1 when it does not exist."""
    lower = np.flatnonzero(le[:, members].all(axis=1))
    if len(lower) == 0:
        return -1
    inside = le[np.ix_(lower, lower)]
    tops = np.flatnonzero(inside.all(axis=0))
    return int(lower[tops[0]]) if len(tops) == 1 else -1


def i_retract(X: Poset):
    """The subposet i(X) of infimum-of-maximal elements and the retraction.

    Requires every lower-bounded pair to have a meet (equivalently, every
    non-empty lower-bounded subset has an infimum; checked, NoInfimum
    otherwise).
    """
    le = np.eye(X.n, dtype=bool) | X.lt
    _check_pairwise_meets(X, le)
    maxima = X.maximal_ids()
    above_pattern = le[:, maxima]  # which maximal elements sit above each x
    r = np.empty(X.n, dtype=np.int64)
    by_pattern = {}
    for x in range(X.n):
        key = above_pattern[x].tobytes()
        if key not in by_pattern:
            members = maxima[above_pattern[x]]
            inf = _infimum_of(le, members)
            if inf < 0:
                raise NoInfimum("maximal-element set has no infimum")
            by_pattern[key] = inf
        r[x] = by_pattern[key]
    fixed = sorted(int(x) for x in range(X.n) if r[x] == x)
    # retraction sanity: inflationary, idempotent, monotone
    assert bool(le[np.arange(X.n), r].all())
    assert bool((r[r] == r).all())
    rows, cols = np.nonzero(X.lt)
    assert bool(le[r[rows], r[cols]].all())
    return X.subposet(fixed), {int(x): int(r[x]) for x in range(X.n)}


# ---------------------------------------------------------------------------
# Export


def poset_to_json(X: Poset) -> str:
    return json.dumps({
        "elements": [str(lab) for lab in X.labels],
        "lt": X.relation_pairs(),
    })


def hasse_pairs(X: Poset) -> list:
    """Covering pairs (i, j): i < j with nothing strictly between."""
    composite = X.lt @ X.lt
    cover = X.lt & ~composite
    return [(int(i), int(j)) for i, j in np.argwhere(cover)]


def poset_to_dot(X: Poset, name: str = "poset") -> str:
    lines = [f"graph \"{name}\" {{"]
    for i, lab in enumerate(X.labels):
        lines.append(f"  n{i} [label=\"{lab}\"];")
    for i, j in hasse_pairs(X):
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
