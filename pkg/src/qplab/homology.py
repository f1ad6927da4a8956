"""Exact rational homology of order complexes.

Augmented chain complexes (degree -1 holds the empty chain), boundary
matrices over the integers, fraction-free sparse rank, reduced Betti
numbers and Euler characteristics, formal chain sums, and Lefschetz
fixed-point profiles.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, DegreeMismatch
from .posets import Poset, chains_by_degree, sort_chain

_BETTI_CACHE = {}


# ---------------------------------------------------------------------------
# Exact sparse rank


def sparse_rank(columns, copy: bool = True) -> int:
    """Rank over Q of an integer sparse matrix given as columns
    (dict row -> nonzero int).

    Unit pivots are eliminated by integer row operations (Markowitz-style
    pivot choice: scarcest column first, then scarcest row with a +-1
    entry); any leftover core falls back to exact Fraction elimination.
    """
    import heapq
    cols = {}
    for j, col in enumerate(columns):
        if col:
            cols[j] = dict(col) if copy else col
    rows = {}
    for j, col in cols.items():
        for r, v in col.items():
            rows.setdefault(r, {})[j] = v
    heap = [(len(col), j) for j, col in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while cols:
        # pivot column: fewest entries (ties by index), via a lazy heap
        while True:
            nnz, cj = heapq.heappop(heap)
            if cj in cols:
                if nnz == len(cols[cj]):
                    break
                heapq.heappush(heap, (len(cols[cj]), cj))
        col = cols[cj]
        unit = [r for r, v in col.items() if v in (1, -1)]
        if unit:
            pr = min(unit, key=lambda r: (len(rows[r]), r))
        else:
            pr = min(col, key=lambda r: (abs(col[r]), len(rows[r]), r))
        pivot = col[pr]
        prow = rows.pop(pr)
        rank += 1
        touched = set()
        for j in prow:
            if j != cj:
                del cols[j][pr]
                touched.add(j)
        del cols[cj]
        targets = [(r, v) for r, v in col.items() if r != pr]
        if pivot in (1, -1):
            for r, v in targets:
                factor = v if pivot == 1 else -v
                row = rows[r]
                for j, pv in prow.items():
                    if j == cj:
                        continue
                    new = row.get(j, 0) - factor * pv
                    if new:
                        row[j] = new
                        cols[j][r] = new
                    elif j in row:
                        del row[j]
                        del cols[j][r]
                del row[cj]
        else:
            # rare non-unit pivot: scale rows exactly (stay integral)
            for r, v in targets:
                row = rows[r]
                keys = set(row) | set(prow)
                keys.discard(cj)
                for j in keys:
                    new = row.get(j, 0) * pivot - v * prow.get(j, 0)
                    if new:
                        row[j] = new
                        cols[j][r] = new
                    elif j in row:
                        del row[j]
                        del cols[j][r]
                del row[cj]
        for r, _ in targets:
            if not rows[r]:
                del rows[r]
        for j in touched:
            c = cols.get(j)
            if c is not None:
                if c:
                    heapq.heappush(heap, (len(c), j))
                else:
                    del cols[j]
    return rank


# ---------------------------------------------------------------------------
# Order complexes and subcomplexes


class SubComplex:
    """A simplicial subcomplex of an order complex K(W), given by its set of
    chains per degree (downward closed by construction)."""

    def __init__(self, poset: Poset, chain_sets: dict):
        self.poset = poset
        self.chain_sets = chain_sets  # degree -> set of chain tuples

    @classmethod
    def from_poset(cls, W: Poset) -> "SubComplex":
        sets = {-1: {()}}
        for k, chains in chains_by_degree(W).items():
            sets[k] = set(chains)
        return cls(W, sets)

    @classmethod
    def from_elements(cls, W: Poset, element_ids) -> "SubComplex":
        keep = set(int(i) for i in element_ids)
        sets = {-1: {()}}
        for k, chains in chains_by_degree(W).items():
            sub = {c for c in chains if keep.issuperset(c)}
            if sub:
                sets[k] = sub
        return cls(W, sets)

    def has_chain(self, c) -> bool:
        return tuple(c) in self.chain_sets.get(len(c) - 1, ())

    def chains(self, k: int) -> list:
        return sorted(self.chain_sets.get(k, ()))

    def element_ids(self) -> list:
        return sorted(c[0] for c in self.chain_sets.get(0, ()))

    def dimension(self) -> int:
        return max((k for k, s in self.chain_sets.items() if s), default=-1)

    def contains(self, other: "SubComplex") -> bool:
        return all(self.chain_sets.get(k, set()) >= s
                   for k, s in other.chain_sets.items())


def boundary_faces(chain: tuple) -> list:
    """Faces with signs: removing the i-th smallest member carries (-1)^i."""
    out = []
    for i in range(len(chain)):
        out.append((chain[:i] + chain[i + 1:], -1 if i % 2 else 1))
    return out


class ChainComplex:
    """Augmented rational chain complex of a subcomplex: canonical chain
    bases per degree and exact integer boundary matrices."""

    def __init__(self, sub: SubComplex, validate: bool = True):
        self.sub = sub
        self.bases = {}
        self.index = {}
        for k in sorted(sub.chain_sets):
            basis = sub.chains(k)
            self.bases[k] = basis
            self.index[k] = {c: i for i, c in enumerate(basis)}
        self.dim = max(self.bases)
        self.boundaries = {}
        for k in range(0, self.dim + 1):
            idx = self.index.get(k - 1, {})
            cols = []
            for chain in self.bases.get(k, []):
                col = {}
                for face, sign in boundary_faces(chain):
                    col[idx[face]] = sign
                cols.append(col)
            self.boundaries[k] = cols
        if validate:
            self._check_dd()

    def _check_dd(self):
        for k in range(1, self.dim + 1):
            for chain in self.bases.get(k, []):
                acc = {}
                for face, sign in boundary_faces(chain):
                    for face2, sign2 in boundary_faces(face):
                        acc[face2] = acc.get(face2, 0) + sign * sign2
                assert all(v == 0 for v in acc.values()), "dd != 0"

    def rank_of_boundary(self, k: int) -> int:
        if k < 0 or k > self.dim:
            return 0
        return sparse_rank(self.boundaries.get(k, []))

    def chain_count(self, k: int) -> int:
        return len(self.bases.get(k, []))


def chain_complex(X: Poset, validate: bool = True) -> ChainComplex:
    return ChainComplex(SubComplex.from_poset(X), validate=validate)


# ---------------------------------------------------------------------------
# Betti profiles


@dataclass(frozen=True)
class BettiProfile:
    """Reduced Betti numbers per degree (zeros stripped, -1 included)."""

    betti: tuple  # tuple of (degree, rank) pairs, nonzero only

    @classmethod
    def from_dict(cls, d: dict) -> "BettiProfile":
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self) -> dict:
        return dict(self.betti)

    def __getitem__(self, k: int) -> int:
        return dict(self.betti).get(k, 0)

    def euler(self) -> int:
        return sum((-1) ** k * v for k, v in self.betti)

    def is_zero(self) -> bool:
        return not self.betti

    def top_degree(self):
        return max((k for k, _ in self.betti), default=None)

    def __str__(self):
        if not self.betti:
            return "0"
        return " + ".join(f"Q^{v}[{k}]" for k, v in self.betti)


def betti_of_complex(cc: ChainComplex) -> BettiProfile:
    ranks = {k: cc.rank_of_boundary(k) for k in range(0, cc.dim + 1)}
    out = {}
    for k in range(-1, cc.dim + 1):
        nk = cc.chain_count(k)
        out[k] = nk - ranks.get(k, 0) - ranks.get(k + 1, 0)
        assert out[k] >= 0
    profile = BettiProfile.from_dict(out)
    # Euler characteristic two ways (Hopf trace at the level of chains)
    chi_chains = sum((-1) ** k * cc.chain_count(k) for k in range(-1, cc.dim + 1))
    assert chi_chains == profile.euler(), "chain-count vs Betti Euler mismatch"
    return profile


def reduced_betti(X, validate: bool = True) -> BettiProfile:
    """Exact reduced Betti numbers of a poset (or subcomplex)."""
    if isinstance(X, Poset):
        key = X.content_key()
        hit = _BETTI_CACHE.get(key)
        if hit is not None:
            return hit
        profile = betti_of_complex(chain_complex(X, validate=validate))
        _BETTI_CACHE[key] = profile
        return profile
    return betti_of_complex(ChainComplex(X, validate=validate))


def reduced_euler(X) -> int:
    """Reduced Euler characteristic via alternating chain counts; asserted
    equal to the Betti alternation whenever Betti numbers are computed."""
    if isinstance(X, Poset):
        counts = chains_by_degree(X)
        return -1 + sum((-1) ** k * len(v) for k, v in counts.items())
    return sum((-1) ** k * len(X.chain_sets.get(k, ()))
               for k in sorted(X.chain_sets))


# ---------------------------------------------------------------------------
# Formal chain sums


class FormalChainSum:
    """Rational linear combination of same-degree chains of a poset."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        self.degree = degree
        self.terms = {}
        for chain, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if c:
                if len(chain) != degree + 1:
                    raise DegreeMismatch(
                        f"chain {chain} does not have degree {degree}")
                self.terms[tuple(chain)] = c

    @classmethod
    def single(cls, chain, coeff=1) -> "FormalChainSum":
        chain = tuple(chain)
        return cls(len(chain) - 1, {chain: coeff})

    def __add__(self, other: "FormalChainSum") -> "FormalChainSum":
        if other.degree != self.degree:
            raise DegreeMismatch("cannot add sums of different degrees")
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out.get(c, 0) + v
        return FormalChainSum(self.degree, out)

    def scale(self, q) -> "FormalChainSum":
        q = Fraction(q)
        return FormalChainSum(self.degree,
                              {c: v * q for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def coefficient(self, chain) -> Fraction:
        return self.terms.get(tuple(chain), Fraction(0))

    def boundary(self) -> "FormalChainSum":
        out = {}
        for chain, coeff in self.terms.items():
            for face, sign in boundary_faces(chain):
                out[face] = out.get(face, 0) + sign * coeff
        return FormalChainSum(self.degree - 1, out)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list:
        return sorted(self.terms)

    def restrict(self, predicate) -> "FormalChainSum":
        return FormalChainSum(self.degree,
                              {c: v for c, v in self.terms.items()
                               if predicate(c)})

    def __eq__(self, other):
        return (isinstance(other, FormalChainSum)
                and self.degree == other.degree and self.terms == other.terms)

    def __repr__(self):
        return f"FormalChainSum(degree={self.degree}, terms={len(self.terms)})"


def is_cycle(sigma: FormalChainSum, M=None) -> bool:
    """Whether the boundary vanishes (sums of degree -1 are always cycles)."""
    if M is not None:
        for chain in sigma.terms:
            if not M.has_chain(chain):
                raise DegreeMismatch("sum is not supported on the subcomplex")
    return sigma.boundary().is_zero()


def is_boundary(sigma: FormalChainSum, M: SubComplex) -> bool:
    """Exactly solve boundary(gamma) = sigma over Q inside the subcomplex."""
    n = sigma.degree
    basis = M.chains(n)
    idx = {c: i for i, c in enumerate(basis)}
    for chain in sigma.terms:
        if chain not in idx:
            raise DegreeMismatch("sum is not supported on the subcomplex")
    if sigma.is_zero():
        return True
    cols = []
    for chain in M.chains(n + 1):
        col = {}
        for face, sign in boundary_faces(chain):
            col[idx[face]] = sign
        cols.append(col)
    import math
    denom = 1
    for v in sigma.terms.values():
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    rhs = {idx[c]: int(v * denom) for c, v in sigma.terms.items()}
    base_rank = sparse_rank(cols)
    return sparse_rank(cols + [rhs]) == base_rank


def nonzero_homology_witness(X: Poset, degree: int):
    """A cycle of the given degree that is not a boundary, or None.

    Witness search: try boundary-basis complements by elimination on the
    cycle space (small-scale; one witness is enough).
    """
    M = SubComplex.from_poset(X)
    basis = M.chains(degree)
    if degree == -1:
        sigma = FormalChainSum(-1, {(): 1})
        return None if is_boundary(sigma, M) else sigma
    # span of cycles: kernel basis via elimination over Fractions
    idx = {c: i for i, c in enumerate(M.chains(degree - 1))}
    cols = []
    for chain in basis:
        col = {}
        for face, sign in boundary_faces(chain):
            col[idx[face]] = Fraction(sign)
        cols.append(col)
    kern = _kernel_basis(cols, len(basis))
    for vec in kern:
        sigma = FormalChainSum(degree,
                               {basis[j]: v for j, v in vec.items()})
        if not is_boundary(sigma, M):
            return sigma
    return None


def _kernel_basis(cols, ncols) -> list:
    """Kernel basis of a column-sparse Fraction matrix (dense back-solve;
    used only for witness search on small complexes)."""
    rows = {}
    for j, col in enumerate(cols):
        for r, v in col.items():
            rows.setdefault(r, {})[j] = Fraction(v)
    rowlist = [dict(r) for r in rows.values()]
    pivots = {}
    for row in rowlist:
        cur = dict(row)
        for c, prow in pivots.items():
            if c in cur:
                f = cur[c]
                for j, v in prow.items():
                    cur[j] = cur.get(j, 0) - f * v
                    if not cur[j]:
                        del cur[j]
        if cur:
            c = min(cur)
            f = cur[c]
            pivots[c] = {j: v / f for j, v in cur.items()}
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for fj in free:
        vec = {fj: Fraction(1)}
        for c in sorted(pivots, reverse=True):
            prow = pivots[c]
            s = sum(prow.get(j, 0) * v for j, v in vec.items() if j != c)
            if s:
                vec[c] = -s
        out.append({j: v for j, v in vec.items() if v})
    return out


# ---------------------------------------------------------------------------
# Lefschetz profiles


def lefschetz_profile(X: Poset, G, with_betti: bool = True) -> dict:
    """Per conjugacy class of G: the fixed subposet's reduced Euler
    characteristic (and Betti profile), plus the existence verdict for a
    class with nonzero fixed-point Euler characteristic."""
    from .pposets import fixed_subposet
    from . import groups as gr
    table = []
    for cls in G.conjugacy_classes():
        g = int(cls[0])
        Q = gr.span(G, [g])
        sub_g = fixed_subposet(X, [g], group=G)
        sub_q = fixed_subposet(X, Q)
        chi = reduced_euler(sub_g)
        chi_q = reduced_euler(sub_q)
        assert chi == chi_q, "chi(X^g) != chi(X^<g>)"
        entry = {
            "rep": g,
            "rep_cycles": G.cycle_notation(g),
            "class_size": len(cls),
            "fixed_size": sub_g.n,
            "euler": chi,
        }
        if with_betti:
            entry["betti"] = reduced_betti(sub_g)
        table.append(entry)
    verdict = any(e["euler"] != 0 for e in table)
    return {"classes": table, "lqc_prime_witness": verdict}
