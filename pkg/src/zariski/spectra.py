"""Prime spectra, Zariski closed sets and the standing (M, T) context.

Subsets of Spec(M) are carried as int bitmasks over the canonical
spectrum order (bit ``i`` is ``spectrum(M)[i]``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce

from .errors import EmptySpectrum, NotClosedError, ZariskiError
from .module import (FiniteModule, QuotientModule, SubCarrier, Submodule,
                     annihilator, enumerate_submodules, ideal_times, quotient_module)
from .ring import Ideal, RingElem, prime_ideals, quotient_ring


def is_prime_submodule(P: Submodule) -> bool:
    """Exhaustive test: r e in P implies r in (P:M) or e in P."""
    if P.is_full:
        return False
    inside = P.mask
    hit = inside[P.module.scale_table]
    in_colon = hit.all(axis=1)
    # r outside (P:M) must not send anything outside P into P
    return not (hit[~in_colon] & ~inside).any()


def spectrum(M: FiniteModule, **caps) -> tuple[Submodule, ...]:
    """Spec(M) in canonical order.

    (P:M) prime is necessary for P prime, so only those candidates get the
    exhaustive test.
    """
    cached = getattr(M, "_spectrum", None)
    if cached is not None:
        return cached
    lat = enumerate_submodules(M, **caps)
    primes = tuple(P for P in lat.proper if P.colon.is_prime and is_prime_submodule(P))
    M._spectrum = primes
    M._vmask_cache = {}
    M._vmask_by_colon = {}
    return primes


def _spec_index(M: FiniteModule) -> dict:
    idx = getattr(M, "_spec_index", None)
    if idx is None:
        idx = {P.key: i for i, P in enumerate(spectrum(M))}
        M._spec_index = idx
    return idx


def mask_of(primes, M: FiniteModule) -> int:
    idx = _spec_index(M)
    return sum(1 << idx[P.key] for P in primes)


def primes_of(mask: int, M: FiniteModule) -> tuple[Submodule, ...]:
    return tuple(P for i, P in enumerate(spectrum(M)) if mask >> i & 1)


def v_mask(N: Submodule) -> int:
    M = N.module
    spec = spectrum(M)
    cache = M._vmask_cache
    hit = cache.get(N.key)
    if hit is None:
        # V(N) depends on N only through (N:M)
        c = N.colon
        by_colon = M._vmask_by_colon
        hit = by_colon.get(c)
        if hit is None:
            hit = 0
            for i, P in enumerate(spec):
                if P.colon >= c:
                    hit |= 1 << i
            by_colon[c] = hit
        cache[N.key] = hit
    return hit


def V(N: Submodule) -> tuple[Submodule, ...]:
    """{P in Spec(M) : (P:M) contains (N:M)}."""
    return primes_of(v_mask(N), N.module)


def V_star(N: Submodule) -> tuple[Submodule, ...]:
    """{P in Spec(M) : P contains N}."""
    return tuple(P for P in spectrum(N.module) if N <= P)


def intersection(subs, M: FiniteModule) -> Submodule:
    subs = list(subs)
    if not subs:
        return M.full
    return reduce(lambda a, b: a & b, subs)


def radical(N: Submodule) -> Submodule:
    """Intersection of the primes containing N, or M if there are none."""
    return intersection(V_star(N), N.module)


def closed_sets(M: FiniteModule, **caps) -> list[int]:
    """Distinct closed sets V(N) as masks, sorted; always includes the empty set."""
    lat = enumerate_submodules(M, **caps)
    spectrum(M, **caps)
    return sorted({v_mask(N) for N in lat} | {0})


def is_closed(T, M: FiniteModule) -> bool:
    t = T if isinstance(T, int) else mask_of(T, M)
    meet = intersection(primes_of(t, M), M)
    return v_mask(meet) == t


def is_irreducible(T, M: FiniteModule, require_closed: bool = True) -> bool:
    """T non-empty and not a union of two proper closed subsets of T.

    Closed subsets of T are traces C & T of closed sets of Spec(M); for
    closed T these are the closed sets contained in T.
    """
    t = T if isinstance(T, int) else mask_of(T, M)
    if require_closed and not is_closed(t, M):
        raise NotClosedError("irreducibility queried for a non-closed T")
    if t == 0:
        return False
    traces = sorted({c & t for c in closed_sets(M)} - {t})
    for i, a in enumerate(traces):
        for b in traces[i:]:
            if a | b == t:
                return False
    return True


def min_members(T) -> tuple[Submodule, ...]:
    T = tuple(T)
    return tuple(P for P in T if not any(Q < P for Q in T))


def natural_map(M: FiniteModule) -> list[tuple[Submodule, Ideal]]:
    """P -> (P:M)/Ann(M) as ideals of R/Ann(M)."""
    qr = quotient_ring(M.ring, annihilator(M))
    return [(P, qr.project_ideal(P.colon)) for P in spectrum(M)]


def is_primeful(M: FiniteModule, **caps) -> bool:
    if M.order == 1:
        return True
    ann = annihilator(M)
    hit = {P.colon for P in spectrum(M, **caps)}
    return all(p in hit for p in prime_ideals(M.ring) if p >= ann)


def is_x_injective(M: FiniteModule, **caps) -> bool:
    spec = spectrum(M, **caps)
    return len({P.colon for P in spec}) == len(spec)


class TContext:
    """M together with a non-empty T in Spec(M), Q = (meet T : M)M and M/Q."""

    def __init__(self, M: FiniteModule, T, **caps):
        self.module = M
        self.caps = caps
        self.lattice = enumerate_submodules(M, **caps)
        self.spec = spectrum(M, **caps)
        if not self.spec:
            raise EmptySpectrum("Spec(M) is empty; T-dependent constructions are undefined")
        t = T if isinstance(T, int) else mask_of(T, M)
        if t == 0:
            raise ZariskiError("T must be non-empty")
        self.t_mask = t
        self.T = primes_of(t, M)
        self.meet = intersection(self.T, M)
        self.Q = self.lattice.canonical(ideal_times(self.meet.colon, M.full))
        if not self.Q <= self.meet:
            raise RuntimeError("Q is not contained in the intersection of T")

    @cached_property
    def is_closed(self) -> bool:
        return v_mask(self.meet) == self.t_mask

    @cached_property
    def Mbar(self) -> QuotientModule:
        return quotient_module(self.module, self.Q)

    @cached_property
    def vtable(self) -> dict[tuple, int]:
        return {N.key: v_mask(N) for N in self.lattice}

    def vmask(self, N: Submodule) -> int:
        return self.vtable[N.key]

    @cached_property
    def min_T(self) -> tuple[Submodule, ...]:
        return min_members(self.T)

    def irreducible(self) -> bool:
        return is_irreducible(self.t_mask, self.module, require_closed=False)


def make_T_context(M: FiniteModule, T=None, **caps) -> TContext:
    """T defaults to all of Spec(M)."""
    if T is None:
        spec = spectrum(M, **caps)
        if not spec:
            raise EmptySpectrum("Spec(M) is empty; T-dependent constructions are undefined")
        T = (1 << len(spec)) - 1
    return TContext(M, T, **caps)


@dataclass
class Decomposition:
    e: RingElem
    M1: Submodule
    M2: Submodule
    mod1: SubCarrier
    mod2: SubCarrier
    T1: tuple[Submodule, ...]
    T2: tuple[Submodule, ...]
    Q1: Submodule
    Q2: Submodule
    bar1: QuotientModule
    bar2: QuotientModule
    q_splits: bool
    bar_splits: bool


def _side(ctx: TContext, Mi: Submodule, other: Submodule, caps) -> tuple:
    carrier = SubCarrier(ctx.module, Mi)
    lat = ctx.lattice
    Ti = tuple(P for P in spectrum(carrier, **caps)
               if lat.canonical(carrier.embed(P) + other).key in {Q.key for Q in ctx.T})
    meet = intersection(Ti, carrier)
    Qi = ideal_times(meet.colon, carrier.full)
    return carrier, Ti, Qi, QuotientModule(carrier, Qi)


def decompose_by_idempotent(ctx: TContext, e: RingElem) -> Decomposition:
    M = ctx.module
    R = M.ring
    e = R.element(e)
    if R.mul(e, e) != e:
        raise ZariskiError(f"{e} is not idempotent")
    if e in (R.zero, R.one):
        raise ZariskiError("decomposition needs a non-trivial idempotent")
    f = R.sub(R.one, e)
    M1 = ctx.lattice.canonical(Submodule(M, M.scale(e).tolist()))
    M2 = ctx.lattice.canonical(Submodule(M, M.scale(f).tolist()))
    mod1, T1, Q1, bar1 = _side(ctx, M1, M2, ctx.caps)
    mod2, T2, Q2, bar2 = _side(ctx, M2, M1, ctx.caps)
    q_splits = ctx.Q == mod1.embed(Q1) + mod2.embed(Q2)
    bar_splits = ctx.Mbar.order == bar1.order * bar2.order
    return Decomposition(e, M1, M2, mod1, mod2, T1, T2, Q1, Q2, bar1, bar2, q_splits, bar_splits)
