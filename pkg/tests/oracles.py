"""Brute-force reference implementations, independent of the zariski package.

Everything here works on plain Python tuples and sets and follows the
definitions literally; it is slow and only meant for small instances.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from math import gcd


class BruteModule:
    """Direct sum of Z_d's over Z_{n_1} x ... x Z_{n_k}; ``blocks[i]`` lists the Z_d's for factor i."""

    def __init__(self, moduli, blocks):
        self.moduli = tuple(moduli)
        self.coords = [(i, d) for i, b in enumerate(blocks) for d in b if d > 1]
        self.elements = list(itertools.product(*(range(d) for _, d in self.coords)))
        self.zero = tuple(0 for _ in self.coords)
        self.ring = list(itertools.product(*(range(n) for n in self.moduli)))
        self.full = frozenset(self.elements)

    def add(self, a, b):
        return tuple((x + y) % d for (_, d), x, y in zip(self.coords, a, b))

    def act(self, r, m):
        return tuple((r[i] * x) % d for (i, d), x in zip(self.coords, m))

    def closure(self, gens) -> frozenset:
        S = {self.zero} | {self.act(r, g) for g in gens for r in self.ring}
        frontier = list(S)
        while frontier:
            new = []
            for a in frontier:
                for b in list(S):
                    c = self.add(a, b)
                    if c not in S:
                        S.add(c)
                        new.append(c)
            frontier = new
        return frozenset(S)

    @cached_property
    def submodules(self) -> list[frozenset]:
        seen = {frozenset([self.zero])}
        queue = list(seen)
        while queue:
            N = queue.pop()
            for m in self.elements:
                if m not in N:
                    K = self.closure(N | {m})
                    if K not in seen:
                        seen.add(K)
                        queue.append(K)
        return sorted(seen, key=lambda s: (len(s), sorted(s)))

    def colon(self, N, K=None) -> frozenset:
        K = self.full if K is None else K
        return frozenset(r for r in self.ring if all(self.act(r, m) in N for m in K))

    @cached_property
    def ann(self) -> frozenset:
        return self.colon(frozenset([self.zero]))

    def is_prime(self, P) -> bool:
        if P == self.full:
            return False
        c = self.colon(P)
        return all(r in c or m in P or self.act(r, m) not in P for r in self.ring for m in self.elements)

    @cached_property
    def spec(self) -> list[frozenset]:
        return [P for P in self.submodules if self.is_prime(P)]

    def V(self, N) -> frozenset:
        c = self.colon(N)
        return frozenset(P for P in self.spec if self.colon(P) >= c)

    def ideal_times_module(self, ideal) -> frozenset:
        return self.closure({self.act(r, m) for r in ideal for m in self.elements})

    def ideal_product(self, I, J) -> frozenset:
        """Additive closure of {ab}; in these rings that is the ideal IJ."""
        prods = {tuple((a * b) % n for a, b, n in zip(x, y, self.moduli)) for x in I for y in J}
        out = set(prods)
        changed = True
        while changed:
            changed = False
            for a in list(out):
                for b in list(out):
                    c = tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))
                    if c not in out:
                        out.add(c)
                        changed = True
        return frozenset(out)

    def product(self, N, K) -> frozenset:
        """NK = (N:M)(K:M)M."""
        return self.ideal_times_module(self.ideal_product(self.colon(N), self.colon(K)))


def g_tau(B: BruteModule, T) -> tuple[list, set]:
    """Pair scan of the vertex and edge definitions of G(tau_T)."""
    T = frozenset(T)
    proper = [N for N in B.submodules if N != B.full]
    Vs = {N: B.V(N) for N in proper}
    cand = [N for N in proper if Vs[N] != T]
    verts = [N for N in cand if any(K != N and Vs[N] | Vs[K] == T for K in cand)]
    edges = {frozenset((N, L)) for N, L in itertools.combinations(verts, 2) if Vs[N] | Vs[L] == T}
    return verts, edges


def ag(B: BruteModule, star: bool) -> tuple[list, set]:
    """Pair scan of AG(M) (non-zero vertices) or AG(M)*, with literal products."""
    zero = frozenset([B.zero])
    subs = B.submodules
    prod = {(N, K): B.product(N, K) for N in subs for K in subs}
    if star:
        pool = [N for N in subs if N != B.full and B.colon(N) != B.ann]
        partners = pool
    else:
        pool = [N for N in subs if N != zero]
        partners = [K for K in pool if K != B.full]
    verts = [N for N in pool if any(prod[N, K] == zero for K in partners)]
    edges = {frozenset((N, L)) for N, L in itertools.combinations(verts, 2) if prod[N, L] == zero}
    return verts, edges


# -- graphs -----------------------------------------------------------------------

def brute_clique_number(n: int, edges: set) -> int:
    best = 0
    for size in range(1, n + 1):
        if any(all(frozenset(p) in edges for p in itertools.combinations(c, 2))
               for c in itertools.combinations(range(n), size)):
            best = size
        else:
            break
    return best


def brute_chromatic_number(n: int, edges: set) -> int:
    """Smallest k admitting a proper colouring, by trying every assignment."""
    if n == 0:
        return 0
    pairs = [tuple(e) for e in edges]
    for k in range(1, n + 1):
        for colouring in itertools.product(range(k), repeat=n):
            if colouring[0] == 0 and all(colouring[a] != colouring[b] for a, b in pairs):
                return k
    return n


def subset_chromatic_number(n: int, edges: set) -> int:
    """chi by dynamic programming over vertex subsets: peel off one independent set at a time.

    Exhaustive like the assignment search but O(3^n), so usable up to n = 12.
    """
    if n == 0:
        return 0
    adj = [0] * n
    for e in edges:
        a, b = tuple(e)
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    full = (1 << n) - 1
    independent = [True] * (full + 1)
    for S in range(1, full + 1):
        low = (S & -S).bit_length() - 1
        rest = S & ~(1 << low)
        independent[S] = independent[rest] and not adj[low] & rest
    best = [0] + [n + 1] * full
    for S in range(1, full + 1):
        low = S & -S
        rest = S & ~low
        # the independent set removed always contains the lowest vertex of S
        sub = rest
        while True:
            I = sub | low
            if independent[I] and best[S & ~I] + 1 < best[S]:
                best[S] = best[S & ~I] + 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[full]


# -- rings ------------------------------------------------------------------------

def ring_ideals(moduli) -> list[frozenset]:
    """Every ideal of Z_{n_1} x ... x Z_{n_k} as an element set, via closure of principal ideals' sums."""
    ring = list(itertools.product(*(range(n) for n in moduli)))

    def mul(a, b):
        return tuple((x * y) % n for x, y, n in zip(a, b, moduli))

    def add(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, moduli))

    principal = {frozenset(mul(a, r) for r in ring) for a in ring}
    out = set(principal)
    changed = True
    while changed:
        changed = False
        for I, J in itertools.product(list(out), repeat=2):
            S = frozenset(add(a, b) for a in I for b in J)
            if S not in out:
                out.add(S)
                changed = True
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def is_prime_ideal(moduli, I) -> bool:
    ring = list(itertools.product(*(range(n) for n in moduli)))
    if len(I) == len(ring):
        return False

    def mul(a, b):
        return tuple((x * y) % n for x, y, n in zip(a, b, moduli))
    return all(a in I or b in I or mul(a, b) not in I for a in ring for b in ring)


def brute_idempotents(moduli) -> list[tuple]:
    ring = itertools.product(*(range(n) for n in moduli))
    return sorted(a for a in ring if all((x * x) % n == x for x, n in zip(a, moduli)))


def ideal_divisors(moduli, I) -> tuple:
    """Divisor tuple of an ideal given as an element set (component generator gcds)."""
    out = []
    for i, n in enumerate(moduli):
        g = n
        for a in I:
            g = gcd(g, a[i])
        out.append(g)
    return tuple(out)
