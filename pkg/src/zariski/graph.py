"""Zariski topology-graphs, annihilating-submodule graphs and exact graph metrics.

Adjacency is kept as one int bitmask per vertex.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from typing import Hashable

from .errors import CapExceeded, ZariskiError
from .module import FiniteModule, annihilator, enumerate_submodules
from .spectra import TContext

EMPTY = "empty"
DISCONNECTED = "disconnected"
ACYCLIC = "acyclic"
DEFAULT_MAX_CHI_VERTICES = 40


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Simple undirected graph on an ordered vertex list."""

    def __init__(self, vertices, adj):
        self.vertices = tuple(vertices)
        self.adj = tuple(adj)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        for i, row in enumerate(self.adj):
            if row >> i & 1:
                raise ZariskiError("graphs are loop-free")
            for j in _bits(row):
                if not self.adj[j] >> i & 1:
                    raise ZariskiError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, vertices, edges) -> Graph:
        vertices = list(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        for u, v in edges:
            i, j = index[u], index[v]
            if i == j:
                raise ZariskiError("graphs are loop-free")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(vertices, adj)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return self.n

    @property
    def is_empty(self) -> bool:
        return self.n == 0

    def index(self, v) -> int:
        return self._index[v]

    def __contains__(self, v) -> bool:
        return v in self._index

    def has_edge(self, u, v) -> bool:
        i, j = self._index.get(u), self._index.get(v)
        if i is None or j is None:
            return False
        return bool(self.adj[i] >> j & 1)

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.adj[i]))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.adj) for j in _bits(row) if i < j]

    @property
    def size(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    def induced(self, idx) -> Graph:
        idx = list(idx)
        pos = {old: new for new, old in enumerate(idx)}
        adj = []
        for old in idx:
            row = 0
            for j in _bits(self.adj[old]):
                if j in pos:
                    row |= 1 << pos[j]
            adj.append(row)
        return Graph([self.vertices[i] for i in idx], adj)

    def labels(self) -> list[str]:
        return [v.describe() if hasattr(v, "describe") else str(v) for v in self.vertices]

    def edge_labels(self) -> set[frozenset]:
        return {frozenset((self.vertices[i], self.vertices[j])) for i, j in self.edges()}

    def same_as(self, other: Graph) -> bool:
        """Identical vertex sets and edge sets."""
        return set(self.vertices) == set(other.vertices) and self.edge_labels() == other.edge_labels()


# -- construction ------------------------------------------------------------

def _class_adjacency(labels: list, related) -> list[int]:
    """Adjacency bitmasks when adjacency depends only on a per-vertex label."""
    members = defaultdict(int)
    for i, a in enumerate(labels):
        members[a] |= 1 << i
    classes = list(members)
    row = {a: sum(members[b] for b in classes if related(a, b)) for a in classes}
    return [row[a] & ~(1 << i) for i, a in enumerate(labels)]


def build_G_tau(ctx: TContext) -> Graph:
    """G(tau_T): proper N with V(N) != T admitting a partner K, V(N) | V(K) = T."""
    t = ctx.t_mask
    by_mask = defaultdict(list)
    for N in ctx.lattice.proper:
        m = ctx.vmask(N)
        if m != t and not m & ~t:
            by_mask[m].append(N)
    masks = sorted(by_mask)
    live = {m for m in masks if any(m | m2 == t for m2 in masks if m2 != m)}
    vertices = sorted((N for m in live for N in by_mask[m]), key=lambda s: s.key)
    vm = [ctx.vmask(N) for N in vertices]
    return Graph(vertices, _class_adjacency(vm, lambda a, b: a | b == t))


def _annihilating(M: FiniteModule, star: bool, caps) -> Graph:
    lat = enumerate_submodules(M, **caps)
    ann = annihilator(M)
    if star:
        pool = [N for N in lat if not N.is_full and N.colon != ann]
        partners = pool
    else:
        pool = [N for N in lat if not N.is_zero]
        partners = [K for K in pool if not K.is_full]
    partner_colons = {K.colon for K in partners}
    colons = {N.colon for N in pool}
    kills = {c: any(c * d <= ann for d in partner_colons) for c in colons}
    vertices = [N for N in pool if kills[N.colon]]
    return Graph(vertices, _class_adjacency([N.colon for N in vertices], lambda a, b: a * b <= ann))


def build_AG(M: FiniteModule, **caps) -> Graph:
    """AG(M): non-zero N with some non-zero proper K, NK = (0); edges NL = (0).

    NK = (N:M)(K:M)M vanishes exactly when (N:M)(K:M) lies in Ann(M).
    """
    return _annihilating(M, False, caps)


def build_AG_star(M: FiniteModule, **caps) -> Graph:
    return _annihilating(M, True, caps)


# -- exact solvers -----------------------------------------------------------

def max_clique(G: Graph) -> list[int]:
    """A maximum clique, by Bron-Kerbosch with Tomita pivoting."""
    best: list[int] = []
    adj = G.adj

    def expand(R: list[int], P: int, X: int):
        nonlocal best
        if not P and not X:
            if len(R) > len(best):
                best = list(R)
            return
        if len(R) + bin(P).count("1") <= len(best):
            return
        pivot = max(_bits(P | X), key=lambda u: bin(P & adj[u]).count("1"))
        for v in list(_bits(P & ~adj[pivot])):
            R.append(v)
            expand(R, P & adj[v], X & adj[v])
            R.pop()
            P &= ~(1 << v)
            X |= 1 << v

    expand([], (1 << G.n) - 1, 0)
    return sorted(best)


def clique_number(G: Graph) -> int:
    return len(max_clique(G))


def twin_reduce(G: Graph) -> tuple[Graph, list[int]]:
    """Collapse false twins (equal open neighbourhoods); preserves omega and chi.

    Returns the reduced graph and, per original vertex, its representative's
    index in the reduced graph.
    """
    rep_of_mask: dict[int, int] = {}
    keep = []
    for i, row in enumerate(G.adj):
        if row not in rep_of_mask:
            rep_of_mask[row] = len(keep)
            keep.append(i)
    H = G.induced(keep)
    return H, [rep_of_mask[row] for row in G.adj]


def greedy_coloring(G: Graph) -> list[int]:
    """DSATUR colouring; colours are 0-based."""
    n = G.n
    color = [-1] * n
    seen = [set() for _ in range(n)]
    for _ in range(n):
        v = max((u for u in range(n) if color[u] < 0),
                key=lambda u: (len(seen[u]), G.degree(u), -u))
        c = 0
        while c in seen[v]:
            c += 1
        color[v] = c
        for w in G.neighbors(v):
            seen[w].add(c)
    return color


def k_coloring(G: Graph, k: int) -> list[int] | None:
    """A proper k-colouring by backtracking, or None if none exists."""
    n = G.n
    order = sorted(range(n), key=lambda u: (-G.degree(u), u))
    color = [-1] * n
    nbrs = [G.neighbors(u) for u in range(n)]

    def place(pos: int, used: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        banned = {color[w] for w in nbrs[v] if color[w] >= 0}
        for c in range(min(k, used + 1)):
            if c in banned:
                continue
            color[v] = c
            if place(pos + 1, max(used, c + 1)):
                return True
        color[v] = -1
        return False

    return color if place(0, 0) else None


def chromatic_number(G: Graph, max_vertices: int = DEFAULT_MAX_CHI_VERTICES) -> int:
    if G.n == 0:
        return 0
    H, _ = twin_reduce(G)
    lower = clique_number(H)
    upper = max(greedy_coloring(H)) + 1
    if lower == upper:
        # a clique and a colouring of the same size settle chi with no search
        return upper
    if H.n > max_vertices:
        raise CapExceeded("vertices for exact colouring", H.n, max_vertices)
    for k in range(lower, upper):
        if k_coloring(H, k) is not None:
            return k
    return upper


def is_proper_coloring(G: Graph, color) -> bool:
    return all(color[i] != color[j] for i, j in G.edges())


# -- structural metrics ------------------------------------------------------

def _bfs(G: Graph, s: int) -> list[int]:
    dist = [-1] * G.n
    dist[s] = 0
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for w in _bits(G.adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _girth_bfs(G: Graph):
    best = None
    for s in range(G.n):
        dist = [-1] * G.n
        parent = [-1] * G.n
        dist[s] = 0
        queue = [s]
        for u in queue:
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in _bits(G.adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    c = dist[u] + dist[w] + 1
                    if best is None or c < best:
                        best = c
        if best == 3:
            break
    return best


def girth(G: Graph):
    """Shortest cycle length, computed on the twin quotient.

    Twins are never adjacent, so triangles survive the quotient unchanged;
    two twins with two common neighbours close a 4-cycle; and twins of
    degree <= 1 lie on no cycle at all.
    """
    H, rep = twin_reduce(G)
    best = _girth_bfs(H)
    if best != 3 and H.n < G.n:
        size = Counter(rep)
        if any(size[rep[i]] > 1 and G.degree(i) >= 2 for i in range(G.n)):
            best = 4
    return ACYCLIC if best is None else best


def bipartition(G: Graph) -> list[int] | None:
    side = [-1] * G.n
    for s in range(G.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = [s]
        for u in queue:
            for w in _bits(G.adj[u]):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def has_triangle(G: Graph) -> bool:
    return any(G.adj[i] & G.adj[j] for i, j in G.edges())


@dataclass
class GraphMetrics:
    order: int
    size: int
    connected: bool
    diameter: object
    girth: object
    is_bipartite: bool
    is_tree: bool
    is_star: bool
    is_complete_bipartite: bool
    parts: list | None
    is_regular: bool
    degree: int | None
    max_degree: int
    clique_number: int
    chromatic_number: int

    def to_dict(self) -> dict:
        return asdict(self)


def metrics(G: Graph, max_chi_vertices: int = DEFAULT_MAX_CHI_VERTICES, chromatic: bool = True) -> GraphMetrics:
    """Structural metrics; ``chromatic=False`` leaves chi as None (no exact colouring)."""
    n = G.n
    degs = [G.degree(i) for i in range(n)]
    # distances and bipartiteness are read off the twin quotient: twins are
    # non-adjacent with equal neighbourhoods, hence at distance 2
    H, rep = twin_reduce(G)
    if n == 0:
        connected, diameter = False, EMPTY
    else:
        ecc, connected = 0, H.n > 1 or n == 1
        for s in range(H.n):
            d = _bfs(H, s)
            if min(d) < 0:
                connected = False
                break
            ecc = max(ecc, max(d))
        if connected and H.n < n:
            ecc = max(ecc, 2)
        diameter = ecc if connected else DISCONNECTED
    side_H = bipartition(H)
    side = None if side_H is None else [side_H[rep[i]] for i in range(n)]
    bip = side is not None
    m = G.size
    parts = None
    complete_bip = False
    if bip and connected and n >= 2:
        a = side.count(0)
        b = n - a
        if m == a * b:
            complete_bip = True
            parts = sorted([a, b])
    regular = n > 0 and len(set(degs)) == 1
    return GraphMetrics(
        order=n,
        size=m,
        connected=connected,
        diameter=diameter,
        girth=girth(G),
        is_bipartite=bip,
        is_tree=connected and m == n - 1,
        is_star=complete_bip and parts[0] == 1,
        is_complete_bipartite=complete_bip,
        parts=parts,
        is_regular=regular,
        degree=degs[0] if regular else None,
        max_degree=max(degs, default=0),
        clique_number=clique_number(H),
        chromatic_number=chromatic_number(G, max_chi_vertices) if chromatic else None,
    )


# -- homomorphisms and retracts ----------------------------------------------

def check_graph_homomorphism(G: Graph, H: Graph, vertex_map: dict[Hashable, Hashable]) -> bool:
    if any(v not in vertex_map for v in G.vertices):
        raise ZariskiError("vertex map must be total on V(G)")
    if any(vertex_map[v] not in H for v in G.vertices):
        return False
    for i, j in G.edges():
        if not H.has_edge(vertex_map[G.vertices[i]], vertex_map[G.vertices[j]]):
            return False
    return True


def is_subgraph(H: Graph, G: Graph) -> bool:
    if any(v not in G for v in H.vertices):
        return False
    return all(G.has_edge(H.vertices[i], H.vertices[j]) for i, j in H.edges())


def check_retract(G: Graph, H: Graph, retraction: dict[Hashable, Hashable]) -> bool:
    """H is a subgraph of G and ``retraction`` is a homomorphism G -> H fixing H."""
    if not is_subgraph(H, G):
        return False
    if any(retraction.get(v) != v for v in H.vertices):
        return False
    return check_graph_homomorphism(G, H, retraction)


# -- export ------------------------------------------------------------------

def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export(G: Graph, fmt: str = "dot", graph_metrics: GraphMetrics | None = None) -> bytes:
    labels = G.labels()
    if fmt == "dot":
        if G.n == 0:
            return b"graph G { }\n"
        lines = ["graph G {"]
        for i, lab in enumerate(labels):
            lines.append(f'  n{i} [label="{_dot_escape(lab)}"];')
        for i, j in G.edges():
            lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        payload = {"vertices": labels, "edges": [list(e) for e in G.edges()]}
        if graph_metrics is not None:
            payload["metrics"] = graph_metrics.to_dict()
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
    raise ZariskiError(f"unknown export format {fmt!r}")
