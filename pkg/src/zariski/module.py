"""Finite modules over product rings, their submodule lattices and arithmetic.

A module is stored as a finite abelian group (addition table over element
indices 0..|M|-1, index 0 is zero) together with the component idempotent
maps ``eps[i]: m -> e_i m`` where ``e_i`` is the ring element with 1 in
slot ``i``.  Scalar action of ``r = (r_1, ..., r_k)`` is then
``r m = sum_i r_i (e_i m)``, so any carrier exposing these two pieces of
data is a module and every operation below works on it unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import CapExceeded, ZariskiError
from .ring import Ideal, Ring, RingElem, all_ideals, divisors

DEFAULT_MAX_ELEMENTS = 1024
DEFAULT_MAX_SUBMODULES = 20000
_VALIDATE_LIMIT = 4096


class FiniteModule:
    realization = "abstract"

    def __init__(self, ring: Ring, labels, add: np.ndarray, eps: list[np.ndarray]):
        self.ring = ring
        self.labels = list(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.add = np.ascontiguousarray(add, dtype=np.int32)
        self.eps = [np.ascontiguousarray(e, dtype=np.int32) for e in eps]
        self.neg = np.argmax(self.add == 0, axis=1).astype(np.int32)
        self._scale_cache: dict[RingElem, np.ndarray] = {}
        self._lattice = None
        self._cyclic = {}
        self._full = None
        self._zero = None
        if self.order <= _VALIDATE_LIMIT:
            self._validate()

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.order

    def _validate(self):
        n = self.order
        add, ident = self.add, np.arange(n)
        if not (add[0] == ident).all() or not (add == add.T).all():
            raise ZariskiError("addition table is not a commutative monoid with zero at index 0")
        total = np.zeros(n, dtype=np.int32)
        for i, e in enumerate(self.eps):
            if not (e[add] == add[np.ix_(e, e)]).all():
                raise ZariskiError(f"component map {i} is not additive")
            if not (e[e] == e).all():
                raise ZariskiError(f"component map {i} is not idempotent")
            for j, f in enumerate(self.eps):
                if i != j and (e[f] != 0).any():
                    raise ZariskiError(f"component maps {i}, {j} are not orthogonal")
            if (self.times(self.ring.moduli[i], e) != 0).any():
                raise ZariskiError(f"n_{i} does not annihilate component {i}")
            total = add[total, e]
        if not (total == ident).all():
            raise ZariskiError("component maps do not sum to the identity")

    def times(self, k: int, x: np.ndarray) -> np.ndarray:
        """Integer multiple ``k * x`` applied elementwise to an index array."""
        add = self.add
        out = np.zeros_like(x)
        base = x.copy()
        while k:
            if k & 1:
                out = add[out, base]
            base = add[base, base]
            k >>= 1
        return out

    def scale(self, r: RingElem) -> np.ndarray:
        """Map of the whole carrier under ``m -> r m``."""
        r = tuple(r)
        cached = self._scale_cache.get(r)
        if cached is not None:
            return cached
        out = np.zeros(self.order, dtype=np.int32)
        for ri, e in zip(r, self.eps):
            if ri:
                out = self.add[out, self.times(ri, e)]
        self._scale_cache[r] = out
        return out

    @property
    def scale_table(self) -> np.ndarray:
        """One row per distinct map m -> r m; R acts through R/Ann(M), so r_i only matters mod exp(e_i M)."""
        table = getattr(self, "_scale_table", None)
        if table is None:
            exps = []
            for n, e in zip(self.ring.moduli, self.eps):
                exps.append(next(d for d in divisors(n) if not self.times(d, e).any()))
            rows = [self.scale(r) for r in itertools.product(*(range(x) for x in exps))]
            table = self._scale_table = np.stack(rows)
        return table

    @property
    def divisor_scales(self) -> list[tuple[list[int], np.ndarray]]:
        """Per factor i: the divisors d of n_i (ascending) and the maps m -> (d e_i) m stacked."""
        table = getattr(self, "_divisor_scales", None)
        if table is None:
            table = []
            for i, n in enumerate(self.ring.moduli):
                divs = divisors(n)
                rows = [self.scale(_component(self.ring, i, d)) for d in divs]
                table.append((divs, np.stack(rows)))
            self._divisor_scales = table
        return table

    def smul(self, r: RingElem, m: int) -> int:
        return int(self.scale(r)[m])

    def sum_sets(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.unique(self.add[np.ix_(a, b)])

    def submodule(self, elements) -> Submodule:
        return Submodule(self, elements)

    def cyclic_submodule(self, m: int) -> Submodule:
        hit = self._cyclic.get(m)
        if hit is None:
            hit = self._cyclic[m] = self._cyclic_uncached(m)
        return hit

    def _cyclic_uncached(self, m: int) -> Submodule:
        span = np.zeros(1, dtype=np.int64)
        for e in self.eps:
            y = int(e[m])
            mult = [0]
            x = y
            while x != 0:
                mult.append(x)
                x = int(self.add[x, y])
            span = self.sum_sets(span, mult)
        return Submodule(self, span.tolist())

    def generate(self, gens) -> Submodule:
        out = self.zero_submodule
        for g in gens:
            if g not in out.elements:
                out = out + self.cyclic_submodule(g)
        return out

    @property
    def zero_submodule(self) -> Submodule:
        if self._zero is None:
            self._zero = Submodule(self, [0])
        return self._zero

    @property
    def full(self) -> Submodule:
        if self._full is None:
            self._full = Submodule(self, range(self.order))
        return self._full

    def element_index(self, label) -> int:
        if isinstance(label, int):
            label = (label,)
        label = tuple(label)
        if label not in self.index:
            raise ZariskiError(f"{label} is not an element of this module")
        return self.index[label]

    def format_element(self, m: int) -> str:
        lab = self.labels[m]
        if len(lab) == 1:
            return str(lab[0])
        return "(" + ",".join(str(a) for a in lab) + ")"

    def describe(self) -> str:
        return f"module of order {self.order} over {self.ring}"


class DirectSumModule(FiniteModule):
    """Direct sum of cyclic groups Z_d, grouped into one block per ring factor."""

    realization = "direct-sum"

    def __init__(self, ring: Ring, blocks):
        blocks = [tuple(int(d) for d in b) for b in blocks]
        if len(blocks) != ring.k:
            raise ZariskiError(f"module needs {ring.k} blocks, got {len(blocks)}")
        orders, owner = [], []
        for i, (b, n) in enumerate(zip(blocks, ring.moduli)):
            for d in b:
                if d < 1 or n % d:
                    raise ZariskiError(f"cyclic order {d} does not divide modulus {n}")
                if d > 1:
                    orders.append(d)
                    owner.append(i)
        self.blocks = tuple(blocks)
        self.orders = tuple(orders)
        size = prod(orders)
        if size > _DIRECT_SUM_HARD_LIMIT:
            raise CapExceeded("module elements", size, _DIRECT_SUM_HARD_LIMIT)
        labels = list(itertools.product(*(range(d) for d in orders)))
        coords = np.array(labels, dtype=np.int64).reshape(size, len(orders))
        weights = [prod(orders[j + 1:]) for j in range(len(orders))]
        add = np.zeros((size, size), dtype=np.int64)
        for j, (d, w) in enumerate(zip(orders, weights)):
            c = coords[:, j]
            add += ((c[:, None] + c[None, :]) % d) * w
        eps = []
        for i in range(ring.k):
            code = np.zeros(size, dtype=np.int64)
            for j, w in enumerate(weights):
                if owner[j] == i:
                    code += coords[:, j] * w
            eps.append(code)
        super().__init__(ring, labels, add, eps)

    def describe(self) -> str:
        parts = []
        for b, n in zip(self.blocks, self.ring.moduli):
            inner = "+".join(f"Z_{d}" for d in b if d > 1) or "0"
            parts.append(inner)
        return f"[{' | '.join(parts)}] over {self.ring}"


_DIRECT_SUM_HARD_LIMIT = 1 << 16


class QuotientModule(FiniteModule):
    """M/K with the least element of each coset as representative."""

    realization = "quotient"

    def __init__(self, parent: FiniteModule, kernel: Submodule):
        if kernel.module is not parent:
            raise ZariskiError("kernel is not a submodule of the given module")
        karr = np.array(kernel.key, dtype=np.int64)
        rep = parent.add[:, karr].min(axis=1)
        reps = np.unique(rep)
        local = np.full(parent.order, -1, dtype=np.int64)
        local[reps] = np.arange(len(reps))
        self.parent = parent
        self.kernel = kernel
        self.reps = reps
        self.proj = local[rep]
        add = self.proj[parent.add[np.ix_(reps, reps)]]
        eps = [self.proj[e[reps]] for e in parent.eps]
        super().__init__(parent.ring, [parent.labels[r] for r in reps], add, eps)

    def image(self, N: Submodule) -> Submodule:
        """(N + K)/K."""
        return Submodule(self, np.unique(self.proj[list(N.elements)]).tolist())

    def preimage(self, Nbar: Submodule) -> Submodule:
        mask = np.isin(self.proj, list(Nbar.elements))
        return Submodule(self.parent, np.nonzero(mask)[0].tolist())

    def describe(self) -> str:
        return f"({self.parent.describe()}) / {self.kernel.describe()}"


class SubCarrier(FiniteModule):
    """A submodule N of a module, viewed as an R-module in its own right."""

    realization = "submodule"

    def __init__(self, parent: FiniteModule, N: Submodule):
        if N.module is not parent:
            raise ZariskiError("not a submodule of the given module")
        arr = np.array(N.key, dtype=np.int64)
        local = np.full(parent.order, -1, dtype=np.int64)
        local[arr] = np.arange(len(arr))
        self.parent = parent
        self.source = N
        self.embedding = arr
        self._local = local
        add = local[parent.add[np.ix_(arr, arr)]]
        eps = [local[e[arr]] for e in parent.eps]
        super().__init__(parent.ring, [parent.labels[m] for m in arr], add, eps)

    def embed(self, K: Submodule) -> Submodule:
        return Submodule(self.parent, self.embedding[list(K.elements)].tolist())

    def restrict(self, N: Submodule) -> Submodule:
        if not N <= self.source:
            raise ZariskiError("submodule does not lie in the carrier")
        return Submodule(self, self._local[list(N.elements)].tolist())

    def describe(self) -> str:
        return f"{self.source.describe()} in {self.parent.describe()}"


class Submodule:
    """A submodule, identified by its sorted element-index tuple."""

    __slots__ = ("module", "elements", "key", "_colon", "_mask", "_gens", "__weakref__")

    def __init__(self, module: FiniteModule, elements):
        self.module = module
        self.key = tuple(sorted(int(x) for x in set(elements)))
        self.elements = frozenset(self.key)
        self._colon = None
        self._mask = None
        self._gens = None

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.module is other.module and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: Submodule) -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: Submodule) -> bool:
        return self.elements < other.elements

    def __ge__(self, other: Submodule) -> bool:
        return other <= self

    def __gt__(self, other: Submodule) -> bool:
        return other < self

    def __and__(self, other: Submodule) -> Submodule:
        return Submodule(self.module, self.elements & other.elements)

    def __add__(self, other: Submodule) -> Submodule:
        if self <= other:
            return other
        if other <= self:
            return self
        return Submodule(self.module, self.module.sum_sets(self.key, other.key).tolist())

    def __len__(self):
        return len(self.key)

    def __contains__(self, m: int) -> bool:
        return m in self.elements

    def __repr__(self):
        return f"Submodule({self.describe()})"

    @property
    def size(self) -> int:
        return len(self.key)

    @property
    def is_zero(self) -> bool:
        return len(self.key) == 1

    @property
    def is_full(self) -> bool:
        return len(self.key) == self.module.order

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.module.order, dtype=bool)
            m[list(self.key)] = True
            self._mask = m
        return self._mask

    @property
    def colon(self) -> Ideal:
        if self._colon is None:
            self._colon = colon(self)
        return self._colon

    def is_closed(self) -> bool:
        """Re-closing under the module operations changes nothing."""
        M = self.module
        arr = np.array(self.key)
        if not self.mask[M.add[np.ix_(arr, arr)]].all():
            return False
        return all(self.mask[e[arr]].all() for e in M.eps)

    def generators(self) -> list[int]:
        """Deterministic generating set: repeatedly add the element that grows
        the span most, ties broken by carrier order."""
        if self._gens is None:
            M = self.module
            cyc = [np.array(M.cyclic_submodule(m).key) for m in self.key]
            width = max(len(c) for c in cyc)
            # cyclic submodules padded with 0, one row per element of self
            table = np.zeros((len(cyc), width), dtype=np.int64)
            for row, c in zip(table, cyc):
                row[:len(c)] = c
            keys = np.array(self.key)
            gens, span = [], np.array([0])
            while len(span) < self.size:
                inside = np.zeros(M.order, dtype=bool)
                inside[span] = True
                cand = np.flatnonzero(~inside[keys])
                sums = M.add[span[None, :, None], table[cand][:, None, :]].reshape(len(cand), -1)
                hit = np.zeros((len(cand), M.order), dtype=bool)
                hit[np.arange(len(cand))[:, None], sums] = True
                # argmax keeps the first maximum, so ties go to carrier order
                best = int(hit.sum(axis=1).argmax())
                gens.append(int(keys[cand[best]]))
                span = np.flatnonzero(hit[best])
            self._gens = gens
        return self._gens

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        return "<" + ", ".join(self.module.format_element(g) for g in self.generators()) + ">"

    def element_labels(self) -> list[list[int]]:
        return [list(self.module.labels[m]) for m in self.key]


class SubmoduleLattice:
    def __init__(self, module: FiniteModule, members):
        self.module = module
        self.members = sorted(members, key=lambda s: s.key)
        self._pos = {s.key: i for i, s in enumerate(self.members)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def position(self, N: Submodule) -> int:
        return self._pos[N.key]

    def canonical(self, N: Submodule) -> Submodule:
        """The lattice's own instance of an equal submodule (shares caches)."""
        return self.members[self._pos[N.key]]

    def __contains__(self, N: Submodule) -> bool:
        return N.key in self._pos

    @property
    def proper(self) -> list[Submodule]:
        return [s for s in self.members if not s.is_full]


_SUBGROUP_CACHE: dict[bytes, list[np.ndarray]] = {}


def _subgroups(M: FiniteModule, block: list[int], cap: int) -> list[np.ndarray]:
    """Every subgroup of the block (sorted index arrays), by closure under adding cyclic subgroups.

    Results are shared between modules whose block has the same addition table.
    """
    barr = np.array(block, dtype=np.int64)
    key = barr.tobytes() + M.add[np.ix_(barr, barr)].tobytes()
    hit = _SUBGROUP_CACHE.get(key)
    if hit is None:
        hit = _SUBGROUP_CACHE[key] = _close_subgroups(M, block, cap)
    if len(hit) > cap:
        raise CapExceeded("submodules", len(hit), cap)
    return hit


def _close_subgroups(M: FiniteModule, block: list[int], cap: int) -> list[np.ndarray]:
    cyclics = {}
    for x in block:
        mult, y = [0], x
        while y != 0:
            mult.append(y)
            y = int(M.add[y, x])
        arr = np.array(sorted(mult), dtype=np.int64)
        cyclics.setdefault(arr.tobytes(), (x, arr))
    cyc = sorted(cyclics.values(), key=lambda g: (len(g[1]), g[1].tolist()))
    trivial = np.array([0], dtype=np.int64)
    first = np.zeros(M.order, dtype=bool)
    first[0] = True
    seen = {first.tobytes(): trivial}
    queue = [(trivial, first)]
    while queue:
        harr, hmask = queue.pop()
        tried = hmask.copy()
        for x, carr in cyc:
            if tried[x]:
                continue
            # H + <x> depends only on the coset x + H
            tried[M.add[x, harr]] = True
            kmask = np.zeros(M.order, dtype=bool)
            kmask[M.add[harr[:, None], carr[None, :]].ravel()] = True
            key = kmask.tobytes()
            if key not in seen:
                karr = np.flatnonzero(kmask)
                seen[key] = karr
                if len(seen) > cap:
                    raise CapExceeded("submodules", len(seen), cap)
                queue.append((karr, kmask))
    return list(seen.values())


def enumerate_submodules(M: FiniteModule, max_elements: int = DEFAULT_MAX_ELEMENTS,
                         max_submodules: int = DEFAULT_MAX_SUBMODULES) -> SubmoduleLattice:
    """All submodules of M, each exactly once.

    Submodules split along the component idempotents, and inside the
    component ``e_i M`` the ring acts through integer multiples, so each
    component's subgroups are found by closure and the lattice is the set
    of all cross-component sums.
    """
    if M._lattice is not None:
        if len(M._lattice) > max_submodules:
            raise CapExceeded("submodules", len(M._lattice), max_submodules)
        return M._lattice
    if M.order > max_elements:
        raise CapExceeded("module elements", M.order, max_elements)
    lattice = _inherited_lattice(M)
    if lattice is not None:
        if len(lattice) > max_submodules:
            raise CapExceeded("submodules", len(lattice), max_submodules)
        return _install(M, lattice)
    per_block = []
    for e in M.eps:
        block = sorted(set(e.tolist()))
        per_block.append(_subgroups(M, block, max_submodules))
    projected = prod(len(b) for b in per_block)
    if projected > max_submodules:
        raise CapExceeded("submodules", projected, max_submodules)
    partial = [np.array([0], dtype=np.int64)]
    for groups in per_block:
        nxt = []
        for acc in partial:
            for garr in groups:
                # components meet in 0, so every sum is distinct
                nxt.append(np.sort(M.add[acc[:, None], garr[None, :]].ravel()))
        partial = nxt
    return _install(M, SubmoduleLattice(M, [Submodule(M, a.tolist()) for a in partial]))


def _install(M: FiniteModule, lattice: SubmoduleLattice) -> SubmoduleLattice:
    M._lattice = lattice
    M._zero = lattice.members[0]
    M._full = lattice.canonical(Submodule(M, range(M.order)))
    return lattice


def _inherited_lattice(M: FiniteModule) -> SubmoduleLattice | None:
    """Lattice of M/K or of a submodule carrier, read off an already enumerated parent lattice."""
    parent = getattr(M, "parent", None)
    if parent is None or parent._lattice is None:
        return None
    if isinstance(M, QuotientModule):
        K = M.kernel
        members = []
        for N in parent._lattice:
            if K <= N:
                img = M.image(N)
                # r(M/K) lies in N/K exactly when rM lies in N
                img._colon = N.colon
                members.append(img)
        return SubmoduleLattice(M, members)
    if isinstance(M, SubCarrier):
        N = M.source
        return SubmoduleLattice(M, [M.restrict(K) for K in parent._lattice if K <= N])
    return None


def _component(R: Ring, i: int, d: int) -> RingElem:
    r = [0] * R.k
    r[i] = d % R.moduli[i]
    return tuple(r)


def colon(N: Submodule, K: Submodule | None = None) -> Ideal:
    """(N : K) = {r : rK subset of N}; K defaults to the whole module."""
    M = N.module
    R = M.ring
    mask = N.mask
    karr = None if K is None else np.array(K.key)
    out = []
    for divs, tab in M.divisor_scales:
        hit = mask[tab if karr is None else tab[:, karr]].all(axis=1)
        # d = n_i always works, so argmax finds the least working divisor
        out.append(divs[int(hit.argmax())])
    return Ideal(R, tuple(out))


def annihilator(M: FiniteModule) -> Ideal:
    return M.zero_submodule.colon


def annihilator_of(K: Submodule) -> Ideal:
    """Ann_R(K) for a submodule K."""
    return colon(K.module.zero_submodule, K)


def ideal_times(I: Ideal, N: Submodule) -> Submodule:
    """The submodule IN generated by {r n : r in I, n in N}."""
    M = N.module
    narr = np.array(N.key)
    out = np.zeros(1, dtype=np.int64)
    for i, d in enumerate(I.divisors):
        img = np.unique(M.scale(_component(M.ring, i, d))[narr])
        out = M.sum_sets(out, img)
    return Submodule(M, out.tolist())


def product(N: Submodule, K: Submodule) -> Submodule:
    """NK = (N:M)(K:M)M, relative to the module both live in."""
    if N.module is not K.module:
        raise ZariskiError("product needs submodules of the same module")
    return ideal_times(N.colon * K.colon, N.module.full)


def quotient_module(M: FiniteModule, Q: Submodule) -> QuotientModule:
    """M/Q, built once per kernel and shared."""
    cache = M.__dict__.setdefault("_quotients", {})
    hit = cache.get(Q.key)
    if hit is None:
        hit = cache[Q.key] = QuotientModule(M, Q)
    return hit


def as_module(N: Submodule) -> SubCarrier:
    return SubCarrier(N.module, N)


def direct_sum(ring: Ring, blocks) -> DirectSumModule:
    return DirectSumModule(ring, blocks)


def regular_module(ring: Ring) -> DirectSumModule:
    """R as a module over itself."""
    return DirectSumModule(ring, [[n] for n in ring.moduli])


def composition_length(M: FiniteModule, **caps) -> int:
    """Length of a maximal chain of submodules, walked up the lattice by covers."""
    lat = enumerate_submodules(M, **caps)
    current, steps = M.zero_submodule, 0
    while not current.is_full:
        current = min((t for t in lat if current < t), key=lambda t: (t.size, t.key))
        steps += 1
    return steps


# -- module-class predicates -------------------------------------------------

def is_faithful(M: FiniteModule) -> bool:
    return annihilator(M).is_zero


def is_simple(M: FiniteModule, **caps) -> bool:
    return len(enumerate_submodules(M, **caps)) == 2


def is_cyclic(M: FiniteModule) -> bool:
    return any(M.cyclic_submodule(m).is_full for m in range(M.order))


def is_prime_module(M: FiniteModule) -> bool:
    if M.order == 1:
        return False
    ann = annihilator(M)
    for r in M.ring.elements():
        if r in ann:
            continue
        if (M.scale(r)[1:] == 0).any():
            return False
    return True


def is_semiprime_module(M: FiniteModule, **caps) -> bool:
    if M.order == 1:
        return False
    ideals = all_ideals(M.ring)
    squares = [I * I for I in ideals]
    for K in enumerate_submodules(M, **caps):
        ann = annihilator_of(K)
        for I, I2 in zip(ideals, squares):
            if I2 <= ann and not I <= ann:
                return False
    return True


def is_multiplication(M: FiniteModule, **caps) -> bool:
    full = M.full
    return all(ideal_times(N.colon, full) == N for N in enumerate_submodules(M, **caps))


def minimal_submodules(M: FiniteModule, **caps) -> list[Submodule]:
    lat = enumerate_submodules(M, **caps)
    # every non-zero submodule contains a non-zero cyclic one
    cyclic = {lat.canonical(M.cyclic_submodule(m)) for m in range(1, M.order)}
    return sorted((s for s in cyclic if not any(t < s for t in cyclic)), key=lambda s: s.key)


# -- localization ------------------------------------------------------------

@dataclass
class Localization:
    """S^{-1}M realized as eM, e the idempotent in the closure of S."""

    source: FiniteModule
    S: tuple[RingElem, ...]
    e: RingElem
    carrier: SubCarrier

    def image(self, N: Submodule) -> Submodule:
        """S^{-1}N = eN as a submodule of the carrier."""
        M = self.source
        img = np.unique(M.scale(self.e)[list(N.key)]).tolist()
        return self.carrier.restrict(Submodule(M, img))


def multiplicative_closure(R: Ring, gens) -> list[RingElem]:
    out = {R.one}
    frontier = [R.one]
    gens = [R.element(g) for g in gens]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = R.mul(x, g)
            if y not in out:
                out.add(y)
                frontier.append(y)
    return sorted(out)


def localize(M: FiniteModule, S) -> Localization:
    R = M.ring
    S = sorted({R.element(s) for s in S})
    Sset = set(S)
    if R.one not in Sset:
        raise ZariskiError("S must contain 1")
    if R.zero in Sset:
        raise ZariskiError("S must not contain 0")
    for a in S:
        for b in S:
            if R.mul(a, b) not in Sset:
                raise ZariskiError(f"S is not multiplicatively closed: {a}*{b}")
    u = R.one
    for s in S:
        u = R.mul(u, s)
    p = u
    while R.mul(p, p) != p:
        p = R.mul(p, u)
    e = p
    eM = Submodule(M, np.unique(M.scale(e)).tolist())
    loc = Localization(M, tuple(S), e, SubCarrier(M, eM))
    kernel = set(np.nonzero(M.scale(e) == 0)[0].tolist())
    torsion = set()
    for s in S:
        torsion |= set(np.nonzero(M.scale(s) == 0)[0].tolist())
    if kernel != torsion:
        raise RuntimeError("localization kernel differs from the S-torsion submodule")
    return loc
