"""Theorem checkers over finite instances, sweeps, and counterexample reports.

Every checker evaluates its hypotheses from the definitions (exhaustive
scans over finite lattices), and checks the conclusion only when all
hypotheses hold.  A false conclusion under true hypotheses is a
counterexample.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Callable

from .errors import CapExceeded, ZariskiError
from .graph import (ACYCLIC, Graph, build_AG, build_AG_star, build_G_tau, check_graph_homomorphism,
                    check_retract, chromatic_number, clique_number, has_triangle, is_proper_coloring,
                    metrics)
from .module import (DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_SUBMODULES, DirectSumModule, FiniteModule,
                     QuotientModule, SubCarrier, Submodule, annihilator, composition_length,
                     enumerate_submodules, ideal_times, is_cyclic, is_faithful, is_multiplication,
                     is_prime_module, is_semiprime_module, is_simple, localize, minimal_submodules,
                     multiplicative_closure, quotient_module)
from .ring import Ring, divisors, idempotents, minimal_primes, nilradical
from .spectra import (TContext, closed_sets, decompose_by_idempotent, intersection, is_primeful,
                      is_x_injective, mask_of, min_members, radical, spectrum, v_mask)
from .graph import DEFAULT_MAX_CHI_VERTICES

THEOREMS = (
    "R2.1", "P2.6a", "P2.6b", "L2.7", "L2.8", "L2.9",
    "P3.1a", "P3.1b", "C3.2", "L3.3", "C3.9", "T3.4", "T3.5", "P3.6", "T3.7",
    "T4.1", "T4.2", "L4.3", "T4.4", "C4.4", "T4.6", "C4.7", "C4.10", "P4.8",
    "L4.12", "P4.14", "P4.16", "DIAM",
)

_PAIR_SCAN_LIMIT = 256


@dataclass(frozen=True)
class Caps:
    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_submodules: int = DEFAULT_MAX_SUBMODULES
    max_chi_vertices: int = DEFAULT_MAX_CHI_VERTICES

    @property
    def module(self) -> dict:
        return {"max_elements": self.max_elements, "max_submodules": self.max_submodules}


class ModuleCase:
    """One (ring, module) pair; holds derivations shared by every choice of T."""

    def __init__(self, moduli, blocks, caps: Caps = Caps()):
        self.moduli = tuple(int(n) for n in moduli)
        self.blocks = tuple(tuple(int(d) for d in b) for b in blocks)
        self.caps = caps
        self.ring = Ring(self.moduli)
        size = prod(d for b in self.blocks for d in b)
        if size > caps.max_elements:
            raise CapExceeded("module elements", size, caps.max_elements)
        self.module = DirectSumModule(self.ring, self.blocks)
        if self.module.order == 1:
            raise ZariskiError("the zero module has an empty spectrum; graphs are vacuous")

    @cached_property
    def lattice(self):
        return enumerate_submodules(self.module, **self.caps.module)

    @cached_property
    def spec(self):
        self.lattice
        return spectrum(self.module, **self.caps.module)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.spec)) - 1

    @cached_property
    def closed_T_masks(self) -> list[int]:
        """Spec(M) first, then every other non-empty V(N), deduplicated."""
        masks = [m for m in closed_sets(self.module, **self.caps.module) if m]
        masks.sort(key=lambda m: (m != self.full_mask, m))
        return masks

    def instance(self, t_mask: int | None = None, S=None) -> Instance:
        return Instance(self, t_mask, S)

    def instances(self) -> list[Instance]:
        return [Instance(self, m) for m in self.closed_T_masks]

    @cached_property
    def G_spec(self) -> Graph:
        return self.instance().G

    @cached_property
    def AG(self) -> Graph:
        return build_AG(self.module, **self.caps.module)

    @cached_property
    def AG_star(self) -> Graph:
        return build_AG_star(self.module, **self.caps.module)

    @cached_property
    def v_chain(self):
        return _v_chain(self)

    @cached_property
    def is_multiplication(self) -> bool:
        return is_multiplication(self.module, **self.caps.module)

    @cached_property
    def is_primeful(self) -> bool:
        return is_primeful(self.module, **self.caps.module)

    def ring_literal(self) -> list[int]:
        return list(self.moduli)

    def module_literal(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


class Instance:
    """A module case together with a non-empty T (default: all of Spec(M))."""

    def __init__(self, case: ModuleCase, t_mask: int | None = None, S=None):
        self.case = case
        self.caps = case.caps
        self.M = case.module
        self.t_mask = case.full_mask if t_mask is None else t_mask
        self.S = None if S is None else tuple(sorted(case.ring.element(s) for s in S))

    @property
    def ring(self) -> Ring:
        return self.case.ring

    @property
    def key(self) -> tuple:
        return (self.case.moduli, self.case.blocks, self.t_mask, self.S)

    @property
    def is_spec(self) -> bool:
        return self.t_mask == self.case.full_mask

    def T_literal(self):
        if self.is_spec:
            return "spec"
        return {"primes": [i for i in range(len(self.case.spec)) if self.t_mask >> i & 1]}

    def describe(self) -> dict:
        out = {"ring": self.case.ring_literal(), "module": self.case.module_literal(),
               "T": self.T_literal()}
        if self.S is not None:
            out["S"] = [list(s) for s in self.S]
        return out

    def repro(self, theorem: str) -> str:
        ring = ",".join(str(n) for n in self.case.moduli)
        module = ";".join(",".join(str(d) for d in b) for b in self.case.blocks)
        t = self.T_literal()
        t_arg = "spec" if t == "spec" else "primes:" + ",".join(str(i) for i in t["primes"])
        cmd = f"zariski verify --ring {ring} --module '{module}' --T {t_arg} --theorem {theorem}"
        if self.S is not None:
            cmd += " --S '" + ";".join(",".join(str(a) for a in s) for s in self.S) + "'"
        return cmd

    # -- derived objects -----------------------------------------------------

    @cached_property
    def ctx(self) -> TContext:
        self.case.spec
        return TContext(self.M, self.t_mask, **self.caps.module)

    @property
    def lattice(self):
        return self.ctx.lattice

    @cached_property
    def G(self) -> Graph:
        return build_G_tau(self.ctx)

    @cached_property
    def Gm(self):
        return metrics(self.G, chromatic=False)

    @cached_property
    def chi(self) -> int:
        return chromatic_number(self.G, self.caps.max_chi_vertices)

    @cached_property
    def G_spec(self) -> Graph:
        return self.G if self.is_spec else self.case.G_spec

    @cached_property
    def G_spec_m(self):
        return self.Gm if self.is_spec else metrics(self.G_spec, chromatic=False)

    @cached_property
    def G_spec_chi(self) -> int:
        return self.chi if self.is_spec else chromatic_number(self.G_spec, self.caps.max_chi_vertices)

    @property
    def Mbar(self) -> QuotientModule:
        return self.ctx.Mbar

    @cached_property
    def Mbar_lattice(self):
        return enumerate_submodules(self.Mbar, **self.caps.module)

    @cached_property
    def over_Q(self) -> list[Submodule]:
        """Submodules of M containing Q, i.e. the lattice of M/Q."""
        Q = self.ctx.Q
        return [N for N in self.lattice if Q <= N]

    @cached_property
    def h0(self) -> bool:
        """M/Q has no non-zero submodule N/Q, other than (meet T)/Q, with V(N) = T."""
        ctx = self.ctx
        return not any(N != ctx.Q and N != ctx.meet and ctx.vmask(N) == ctx.t_mask
                       for N in self.over_Q)

    @cached_property
    def Mbar_faithful(self) -> bool:
        return is_faithful(self.Mbar)

    @cached_property
    def Mbar_reduced(self) -> bool:
        """sqrt(0) = 0 inside M/Q."""
        self.Mbar_lattice
        spectrum(self.Mbar, **self.caps.module)
        return radical(self.Mbar.zero_submodule).is_zero

    @cached_property
    def ann_Mbar_nil(self) -> bool:
        return annihilator(self.Mbar).is_nil

    @cached_property
    def decompositions(self) -> list:
        R = self.ring
        return [decompose_by_idempotent(self.ctx, e) for e in idempotents(R)
                if e not in (R.zero, R.one)]

    @cached_property
    def proper_splits(self) -> list:
        """Decompositions whose two quotient factors are both non-zero."""
        return [d for d in self.decompositions if d.bar1.order > 1 and d.bar2.order > 1]

    def simple(self, N: FiniteModule) -> bool:
        return N.order > 1 and is_simple(N, **self.caps.module)

    @cached_property
    def radical_of_colon(self) -> Callable[[Submodule], Submodule]:
        cache = {}

        def f(N: Submodule) -> Submodule:
            c = N.colon
            if c not in cache:
                cache[c] = self.lattice.canonical(radical(ideal_times(c, self.M.full)))
            return cache[c]
        return f


# -- reports -----------------------------------------------------------------

@dataclass
class Outcome:
    hypotheses: list
    holds: bool | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)


@dataclass
class TheoremReport:
    theorem: str
    instance: dict
    hypotheses: list
    applicable: bool
    conclusion_holds: bool | None
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    skipped: str | None = None
    repro: str | None = None
    elapsed: float = 0.0

    @property
    def is_counterexample(self) -> bool:
        return self.applicable and self.conclusion_holds is False

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        if not self.applicable:
            return "not-applicable"
        return "passed" if self.conclusion_holds else "failed"

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "theorem": self.theorem,
            "instance": self.instance,
            "status": self.status,
            "hypotheses": [[name, value] for name, value in self.hypotheses],
            "applicable": self.applicable,
            "conclusion_holds": self.conclusion_holds,
            "witness": self.witness,
            "details": self.details,
        }
        if self.skipped:
            out["skipped"] = self.skipped
        if self.is_counterexample:
            out["repro"] = self.repro
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _hyps(pairs) -> tuple[list, bool]:
    """Evaluate hypotheses in order; later ones are not evaluated (None) after a failure."""
    out, ok = [], True
    for name, fn in pairs:
        value = bool(fn()) if ok else None
        ok = ok and bool(value)
        out.append((name, value))
    return out, ok


def _sub(N: Submodule) -> str:
    return N.describe()


def _is_K2(G: Graph) -> bool:
    return G.n == 2 and G.size == 1


def _dominant_vertex(G: Graph):
    for i in range(G.n):
        if G.n >= 2 and G.degree(i) == G.n - 1:
            return G.vertices[i]
    return None


# -- checkers ----------------------------------------------------------------

def _r21(inst: Instance) -> Outcome:
    ctx = inst.ctx
    lhs = not inst.G.is_empty
    rhs = ctx.is_closed and not ctx.irreducible()
    details = {"graph_nonempty": lhs, "closed": ctx.is_closed}
    if ctx.is_closed:
        details["irreducible"] = ctx.irreducible()
    if lhs != rhs:
        return Outcome([], False, {"graph_nonempty": lhs, "closed_and_reducible": rhs}, details)
    witness, chain = inst.case.v_chain
    details.update(chain)
    if witness:
        return Outcome([], False, witness, details)
    return Outcome([], True, None, details)


def _v_chain(case: ModuleCase):
    """V(N) | V(K) = V(N & K) = V(NK) = V*(NK) over pairs of submodules (independent of T)."""
    lat = case.lattice
    M = case.module
    spec = case.spec
    members = lat.members
    # submodules as int bitsets so intersections and lookups stay cheap
    bits = [sum(1 << m for m in N.key) for N in members]
    by_bits = {b: i for i, b in enumerate(bits)}
    vm = [v_mask(N) for N in members]
    colon_id: dict = {}
    cid = [colon_id.setdefault(N.colon, len(colon_id)) for N in members]
    colons = list(colon_id)
    prime_bits = [sum(1 << m for m in P.key) for P in spec]
    prod_cache: dict = {}

    def product_masks(a, b):
        hit = prod_cache.get((a, b))
        if hit is None:
            NK = lat.canonical(ideal_times(colons[a] * colons[b], M.full))
            nk = sum(1 << m for m in NK.key)
            star = sum(1 << i for i, pb in enumerate(prime_bits) if nk & pb == nk)
            hit = prod_cache[a, b] = prod_cache[b, a] = (v_mask(NK), star)
        return hit

    n = len(members)
    if n <= _PAIR_SCAN_LIMIT:
        pairs = ((i, j) for i in range(n) for j in range(i, n))
        exhaustive = True
    else:
        reps = list({cid[i]: i for i in range(n)}.values())
        pairs = ((i, j) for i in range(n) for j in reps)
        exhaustive = False
    count = 0
    for i, j in pairs:
        count += 1
        union = vm[i] | vm[j]
        meet = vm[by_bits[bits[i] & bits[j]]]
        vp, vs = product_masks(cid[i], cid[j])
        if not union == meet == vp == vs:
            return ({"N": _sub(members[i]), "K": _sub(members[j])},
                    {"pairs_checked": count, "exhaustive_pairs": exhaustive})
    return None, {"pairs_checked": count, "exhaustive_pairs": exhaustive}


def _p26(inst: Instance, use_full_radical: bool) -> Outcome:
    pairs = [("G(tau_T) has an edge", lambda: inst.G.size > 0)]
    if use_full_radical:
        pairs.insert(0, ("M primeful", lambda: inst.case.is_primeful))
    hyps, ok = _hyps(pairs)
    if not ok:
        return Outcome(hyps)
    ctx, G, M = inst.ctx, inst.G, inst.M
    Mp = quotient_module(M, ctx.meet)
    ann = annihilator(Mp)
    rad = (lambda N: ctx.lattice.canonical(radical(N))) if use_full_radical else inst.radical_of_colon
    degenerate = 0
    images: dict = {}

    def image(A):
        hit = images.get(A.key)
        if hit is None:
            hit = images[A.key] = Mp.image(A)
        return hit
    for i, j in G.edges():
        N, L = G.vertices[i], G.vertices[j]
        A, B = rad(N), rad(L)

        def witness(reason):
            return {"N": _sub(N), "L": _sub(L), "radical_N": _sub(A), "radical_L": _sub(B), "reason": reason}
        if not (ctx.meet <= A and ctx.meet <= B):
            return Outcome(hyps, False, witness("meet of T not below radical"))
        Ab, Bb = image(A), image(B)
        if Ab == Bb:
            degenerate += 1
            continue
        if Ab.is_zero or Bb.is_zero or Ab.is_full or Bb.is_full or not Ab.colon * Bb.colon <= ann:
            return Outcome(hyps, False, witness("images not adjacent in AG"))
    return Outcome(hyps, True, None, {"edges": G.size, "degenerate_equal_radicals": degenerate})


def _quotient_ag_star(Mq: QuotientModule, caps: dict) -> Graph:
    """AG* of a shared quotient module; distinct T often give the same quotient."""
    hit = Mq.__dict__.get("_ag_star")
    if hit is None:
        hit = Mq._ag_star = build_AG_star(Mq, **caps)
    return hit


def _l27(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("T closed", lambda: inst.ctx.is_closed)])
    if not ok:
        return Outcome(hyps)
    ctx, G, M = inst.ctx, inst.G, inst.M
    caps = inst.caps.module
    AGbar = _quotient_ag_star(inst.Mbar, caps)
    lift = {v: ctx.lattice.canonical(inst.Mbar.preimage(v)) for v in AGbar.vertices}
    for v, N in lift.items():
        if N not in G:
            return Outcome(hyps, False, {"part": "M/Q", "vertex": _sub(N), "reason": "not a vertex"})
    for i, j in AGbar.edges():
        a, b = lift[AGbar.vertices[i]], lift[AGbar.vertices[j]]
        if not G.has_edge(a, b):
            return Outcome(hyps, False, {"part": "M/Q", "N": _sub(a), "K": _sub(b),
                                         "reason": "edge not preserved"})
    Mp = quotient_module(M, ctx.meet)
    AGp = _quotient_ag_star(Mp, caps)
    liftp = [ctx.lattice.canonical(Mp.preimage(v)) for v in AGp.vertices]
    for N in liftp:
        if N not in G:
            return Outcome(hyps, False, {"part": "M/meet", "vertex": _sub(N), "reason": "not a vertex"})
    for i, j in itertools.combinations(range(AGp.n), 2):
        if bool(AGp.adj[i] >> j & 1) != G.has_edge(liftp[i], liftp[j]):
            return Outcome(hyps, False, {"part": "M/meet", "N": _sub(liftp[i]), "K": _sub(liftp[j]),
                                         "reason": "not an induced subgraph"})
    return Outcome(hyps, True, None, {"AG_bar_star_order": AGbar.n, "AG_meet_star_order": AGp.n})


def _l28(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("M/Q faithful", lambda: inst.Mbar_faithful)])
    if not ok:
        return Outcome(hyps)
    G, A = inst.G_spec, inst.case.AG_star
    if G.same_as(A):
        return Outcome(hyps, True, None, {"order": G.n})
    only_g = sorted(_sub(v) for v in set(G.vertices) - set(A.vertices))
    only_a = sorted(_sub(v) for v in set(A.vertices) - set(G.vertices))
    return Outcome(hyps, False, {"only_in_G": only_g, "only_in_AG_star": only_a,
                                 "edges_differ": G.edge_labels() != A.edge_labels()})


def _l29(inst: Instance) -> Outcome:
    def every_nontrivial_is_vertex():
        return all(N in inst.G for N in inst.lattice if not N.is_zero and not N.is_full)
    hyps, ok = _hyps([("every non-trivial submodule is a vertex", every_nontrivial_is_vertex)])
    if not ok:
        return Outcome(hyps)
    length = composition_length(inst.M, **inst.caps.module)
    delta = inst.Gm.max_degree
    return Outcome(hyps, length <= delta + 1, None if length <= delta + 1 else
                   {"length": length, "max_degree": delta}, {"length": length, "max_degree": delta})


def _simple_prime_split(inst: Instance):
    for d in inst.decompositions:
        if inst.simple(d.bar1) and is_prime_module(d.bar2):
            return d
    return None


def _p31a(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
        ("some vertex is adjacent to every other vertex", lambda: _dominant_vertex(inst.G) is not None),
    ])
    if not ok:
        return Outcome(hyps)
    d = _simple_prime_split(inst)
    if d is None:
        return Outcome(hyps, False, {"dominant": _sub(_dominant_vertex(inst.G)),
                                     "reason": "no idempotent gives simple + prime"})
    return Outcome(hyps, True, None, {"idempotent": list(d.e)})


def _both_prime(inst: Instance):
    return [d for d in inst.decompositions if is_prime_module(d.bar1) and is_prime_module(d.bar2)]


def _p31b(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
        ("some idempotent splits M/Q into two prime modules", lambda: bool(_both_prime(inst))),
    ])
    if not ok:
        return Outcome(hyps)
    holds = inst.Gm.is_complete_bipartite
    return Outcome(hyps, holds, None if holds else {"idempotent": list(_both_prime(inst)[0].e),
                                                     "graph_order": inst.G.n},
                   {"parts": inst.Gm.parts})


def _simple_plus_prime_sum(inst: Instance):
    """A pair (F, D) of submodules with M = F + D, F & D = 0, F simple, D prime."""
    M = inst.M
    lat = inst.lattice
    for F in minimal_submodules(M, **inst.caps.module):
        for D in lat:
            if D.size * F.size == M.order and (D & F).is_zero:
                if is_prime_module(SubCarrier(M, D)):
                    return F, D
    return None


def _c32(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("M/Q faithful", lambda: inst.Mbar_faithful),
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
    ])
    if not ok:
        return Outcome(hyps)
    G, gm = inst.G_spec, inst.G_spec_m
    a = _dominant_vertex(G) is not None
    b = gm.is_star
    fd = _simple_plus_prime_sum(inst)
    c = fd is not None
    details = {"dominant_vertex": a, "star": b, "simple_plus_prime": c}
    if fd:
        details["F"], details["D"] = _sub(fd[0]), _sub(fd[1])
    return Outcome(hyps, a == b == c, None if a == b == c else details, details)


def _l33(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
        ("G(tau_T) triangle-free", lambda: not has_triangle(inst.G)),
        ("some idempotent splits M/Q into two non-zero parts", lambda: bool(inst.proper_splits)),
    ])
    if not ok:
        return Outcome(hyps)
    acyclic = inst.Gm.girth == ACYCLIC
    for d in inst.proper_splits:
        p1, p2 = is_prime_module(d.bar1), is_prime_module(d.bar2)
        if not (p1 and p2):
            return Outcome(hyps, False, {"idempotent": list(d.e), "prime_1": p1, "prime_2": p2})
        if acyclic:
            ok1 = inst.simple(d.bar1) and p2
            ok2 = inst.simple(d.bar2) and p1
            if not (ok1 or ok2):
                return Outcome(hyps, False, {"idempotent": list(d.e), "reason": "acyclic but no simple factor"})
    return Outcome(hyps, True, None, {"acyclic": acyclic, "splits": len(inst.proper_splits)})


def _c39(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("M multiplication or primeful", lambda: inst.case.is_multiplication or inst.case.is_primeful),
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
    ])
    if not ok:
        return Outcome(hyps)
    star = inst.Gm.is_star
    d = _simple_prime_split(inst)
    details = {"star": star, "simple_prime_idempotent": list(d.e) if d else None}
    holds = star == (d is not None)
    return Outcome(hyps, holds, None if holds else details, details)


def _t34(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("G(tau_T) is a tree", lambda: inst.Gm.is_tree)])
    if not ok:
        return Outcome(hyps)
    holds = inst.Gm.is_star
    return Outcome(hyps, holds, None if holds else {"order": inst.G.n, "edges": inst.G.edges()})


def _k2_outcome(inst: Instance, hyps) -> Outcome:
    size_T = len(inst.ctx.T)
    holds = size_T == 2 and _is_K2(inst.G)
    details = {"T_size": size_T, "order": inst.G.n, "edges": inst.G.size}
    witness = None
    if not holds:
        witness = dict(details, vertices=[_sub(v) for v in inst.G.vertices])
    return Outcome(hyps, holds, witness, details)


def _t35(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("R Artinian (finite ring)", lambda: True),
        ("M multiplication or primeful", lambda: inst.case.is_multiplication or inst.case.is_primeful),
        ("G(tau_T) non-empty", lambda: not inst.G.is_empty),
        ("G(tau_T) bipartite", lambda: inst.Gm.is_bipartite),
    ])
    if not ok:
        return Outcome(hyps)
    return _k2_outcome(inst, hyps)


def _p36(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("M multiplication", lambda: inst.case.is_multiplication),
        ("Ann(M/Q) nil", lambda: inst.ann_Mbar_nil),
        ("G(tau_T) non-empty", lambda: not inst.G.is_empty),
        ("G(tau_T) bipartite or regular", lambda: inst.Gm.is_bipartite or inst.Gm.is_regular),
    ])
    if not ok:
        return Outcome(hyps)
    out = _k2_outcome(inst, hyps)
    out.details.update(bipartite=inst.Gm.is_bipartite, regular=inst.Gm.is_regular)
    return out


def _t37(inst: Instance) -> Outcome:
    def min_bar():
        return len(min_members(spectrum(inst.Mbar, **inst.caps.module)))
    hyps, ok = _hyps([
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
        ("Ann(M/Q) nil", lambda: inst.ann_Mbar_nil),
        ("|Min(M/Q)| >= 3", lambda: min_bar() >= 3),
    ])
    if not ok:
        return Outcome(hyps)
    holds = inst.Gm.girth != ACYCLIC
    return Outcome(hyps, holds, None if holds else {"order": inst.G.n}, {"girth": inst.Gm.girth})


def _t41(inst: Instance) -> Outcome:
    Q, M = inst.ctx.Q, inst.M
    # each N strictly above Q contains some Q + Rm with m outside Q
    cands = {inst.lattice.canonical(Q + M.cyclic_submodule(m)) for m in range(M.order) if m not in Q.elements}
    minimal = [N for N in cands if not any(K < N for K in cands)]

    hyps, ok = _hyps([
        ("M/Q Artinian (finite)", lambda: True),
        ("every minimal submodule of M/Q lifts to a vertex", lambda: all(N in inst.G for N in minimal)),
    ])
    if not ok:
        return Outcome(hyps)
    w, c = inst.Gm.clique_number, inst.chi
    details = {"omega": w, "chi": c, "minimal_submodules": len(minimal)}
    return Outcome(hyps, w == c, None if w == c else details, details)


def _t42(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("M/Q faithful", lambda: inst.Mbar_faithful)])
    if not ok:
        return Outcome(hyps)
    G, gm = inst.G_spec, inst.G_spec_m
    R = inst.ring
    a = inst.G_spec_chi == 2
    b = gm.is_bipartite and G.size > 0
    c = gm.is_complete_bipartite
    reduced_two = nilradical(R).is_zero and len(minimal_primes(R)) == 2
    d = reduced_two or (gm.is_star and G.n > 1)
    details = {"chi_is_2": a, "bipartite_two_parts": b, "complete_bipartite": c, "reduced_or_star": d}
    holds = a == b == c == d
    return Outcome(hyps, holds, None if holds else details, details)


def _prime_index_coloring(inst: Instance, primes) -> list[int]:
    """f(N) = least n with P_n not in V(N)."""
    spec_idx = {P.key: i for i, P in enumerate(inst.case.spec)}
    bits = [spec_idx[P.key] for P in primes]
    colors = []
    for N in inst.G.vertices:
        m = inst.ctx.vmask(N)
        colors.append(next((n for n, b in enumerate(bits) if not m >> b & 1), -1))
    return colors


def _coloring_outcome(inst: Instance, hyps, primes) -> Outcome:
    colors = _prime_index_coloring(inst, primes)
    k = len(primes)
    chi = inst.chi
    defined = all(c >= 0 for c in colors)
    proper = defined and is_proper_coloring(inst.G, colors)
    holds = proper and chi <= k
    details = {"k": k, "chi": chi, "coloring_proper": proper}
    return Outcome(hyps, holds, None if holds else details, details)


def _l43(inst: Instance) -> Outcome:
    hyps, _ = _hyps([("T finite", lambda: True)])
    return _coloring_outcome(inst, hyps, inst.ctx.T)


def _t44(inst: Instance) -> Outcome:
    gm = inst.Gm
    eq1 = (gm.clique_number == 2) == (inst.chi == 2)
    eq2 = gm.is_bipartite == (not has_triangle(inst.G))
    details = {"omega": gm.clique_number, "chi": inst.chi, "bipartite": gm.is_bipartite}
    return Outcome([], eq1 and eq2, None if eq1 and eq2 else details, details)


def _c44(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("no extra submodule of M/Q with V(N)=T", lambda: inst.h0),
        ("some idempotent splits M/Q into two non-zero parts", lambda: bool(inst.proper_splits)),
    ])
    if not ok:
        return Outcome(hyps)
    cb = inst.Gm.is_complete_bipartite
    for d in inst.proper_splits:
        both = is_prime_module(d.bar1) and is_prime_module(d.bar2)
        if both != cb:
            return Outcome(hyps, False, {"idempotent": list(d.e), "complete_bipartite": cb,
                                         "both_prime": both})
    return Outcome(hyps, True, None, {"complete_bipartite": cb})


def _admissible_sets(inst: Instance) -> list[tuple]:
    R = inst.ring
    if inst.S is not None:
        candidates = [inst.S]
    else:
        candidates = sorted({tuple(multiplicative_closure(R, [s])) for s in R.elements() if s != R.zero})
    colons = [P.colon for P in inst.ctx.T]
    return [S for S in candidates
            if R.zero not in S and not any(s in c for s in S for c in colons)]


def _t46_one(inst: Instance, S) -> dict:
    """Sub-claims for one admissible S; every entry True means S is fine."""
    ctx, G, M = inst.ctx, inst.G, inst.M
    caps = inst.caps.module
    loc = localize(M, S)
    car = loc.carrier
    clat = enumerate_submodules(car, **caps)
    cspec = spectrum(car, **caps)
    ckeys = {P.key for P in cspec}
    TS = [clat.canonical(loc.image(P)) for P in ctx.T]
    claims = {"localized_T_prime": all(P.key in ckeys for P in TS)}
    if not claims["localized_T_prime"]:
        return {"claims": claims}
    ts_mask = mask_of(TS, car)
    forward = backward = None
    for N in ctx.lattice:
        lhs = ctx.vmask(N) == ctx.t_mask
        rhs = v_mask(clat.canonical(loc.image(N))) == ts_mask
        if lhs and not rhs and forward is None:
            forward = _sub(N)
        if rhs and not lhs and backward is None:
            backward = _sub(N)
    claims["V(N)=T implies V(S^-1 N)=T_S"] = forward is None
    claims["V(S^-1 N)=T_S implies V(N)=T"] = backward is None
    H = build_G_tau(TContext(car, ts_mask, **caps))
    phi = {N: clat.canonical(loc.image(N)) for N in G.vertices}
    claims["homomorphism"] = check_graph_homomorphism(G, H, phi)
    section = {}
    for N in G.vertices:
        section.setdefault(phi[N], N)
    claims["onto"] = all(h in section for h in H.vertices)
    retract = False
    if claims["onto"]:
        image = G.induced([G.index(section[h]) for h in H.vertices])
        iso = all(bool(H.adj[i] >> j & 1) == bool(image.adj[i] >> j & 1)
                  for i, j in itertools.combinations(range(H.n), 2))
        retract = iso and check_retract(G, image, {N: section[phi[N]] for N in G.vertices})
    claims["retract"] = retract
    w_G, w_H = clique_number(G), clique_number(H)
    claims["omega_equal"] = w_G == w_H
    out = {"claims": claims, "omega_G": w_G, "omega_H": w_H}
    if forward:
        out["forward_witness"] = forward
    if backward:
        out["backward_witness"] = backward
    return out


def _t46(inst: Instance) -> Outcome:
    sets = []
    hyps, ok = _hyps([
        ("M finitely generated", lambda: True),
        ("admissible multiplicative set exists", lambda: bool(sets.extend(_admissible_sets(inst)) or sets)),
    ])
    if not ok:
        return Outcome(hyps)
    per_set = []
    for S in sets:
        r = _t46_one(inst, S)
        r["S"] = [list(s) for s in S]
        per_set.append(r)
        if not all(r["claims"].values()):
            return Outcome(hyps, False, r, {"sets": per_set})
    return Outcome(hyps, True, None, {"sets": per_set})


def _c47(inst: Instance) -> Outcome:
    sets = []
    hyps, ok = _hyps([
        ("M finitely generated", lambda: True),
        ("admissible multiplicative set exists", lambda: bool(sets.extend(_admissible_sets(inst)) or sets)),
    ])
    if not ok:
        return Outcome(hyps)
    chi_M = chromatic_number(inst.case.AG, inst.caps.max_chi_vertices)
    for S in sets:
        loc = localize(inst.M, S)
        chi_S = chromatic_number(build_AG(loc.carrier, **inst.caps.module), inst.caps.max_chi_vertices)
        if chi_S != chi_M:
            return Outcome(hyps, False, {"S": [list(s) for s in S], "chi_AG_M": chi_M, "chi_AG_MS": chi_S},
                           {"sets_checked": len(sets)})
    return Outcome(hyps, True, None, {"sets_checked": len(sets), "chi_AG_M": chi_M})


def _c410(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("M semiprime", lambda: is_semiprime_module(inst.M, **inst.caps.module)),
        ("AG(M)* has no infinite clique (finite)", lambda: True),
    ])
    if not ok:
        return Outcome(hyps)
    faithful = is_faithful(inst.M)
    spec = inst.case.spec
    witness_primes = min_members(spec)
    meet = intersection(witness_primes, inst.M)
    zero_colon = meet.colon.is_zero
    holds = faithful and zero_colon
    details = {"faithful": faithful, "witness_primes": [_sub(P) for P in witness_primes],
               "colon_of_meet_is_zero": zero_colon}
    return Outcome(hyps, holds, None if holds else details, details)


def _p48(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("M/Q cyclic", lambda: is_cyclic(inst.Mbar)),
        ("T closed", lambda: inst.ctx.is_closed),
        ("G(tau_T) non-empty", lambda: not inst.G.is_empty),
    ])
    if not ok:
        return Outcome(hyps)
    k = len(inst.ctx.min_T)
    gm = inst.Gm
    fails = []
    if gm.clique_number < k:
        fails.append("omega < |Min(T)|")
    if k >= 3 and gm.girth != 3:
        fails.append("|Min(T)| >= 3 but girth != 3")
    reduced = inst.Mbar_reduced
    if reduced and not inst.chi == gm.clique_number == k:
        fails.append("reduced but chi = omega = |Min(T)| fails")
    details = {"min_T": k, "omega": gm.clique_number, "chi": inst.chi,
               "girth": gm.girth, "reduced": reduced}
    return Outcome(hyps, not fails, dict(details, failures=fails) if fails else None, details)


def _l412(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("M/Q semiprime", lambda: is_semiprime_module(inst.Mbar, **inst.caps.module))])
    if not ok:
        return Outcome(hyps)
    out = _coloring_outcome(inst, hyps, inst.ctx.min_T)
    same = intersection(inst.ctx.min_T, inst.M).colon == inst.ctx.meet.colon
    out.details["colon_matches"] = same
    if not same:
        out.holds = False
        out.witness = dict(out.details)
    return out


def _p414(inst: Instance) -> Outcome:
    primes = set(minimal_primes(inst.ring))
    hyps, ok = _hyps([
        ("sqrt(0) = 0 in M/Q", lambda: inst.Mbar_reduced),
        ("(P:M) minimal prime for every P in Min(T)", lambda: all(P.colon in primes for P in inst.ctx.min_T)),
        ("M/Q X-injective", lambda: is_x_injective(inst.Mbar, **inst.caps.module)),
    ])
    if not ok:
        return Outcome(hyps)
    return _coloring_outcome(inst, hyps, inst.ctx.min_T)


def _p416(inst: Instance) -> Outcome:
    hyps, ok = _hyps([
        ("sqrt(0) = 0 in M/Q", lambda: inst.Mbar_reduced),
        ("M/Q faithful", lambda: inst.Mbar_faithful),
        ("G(tau_Spec(M)) non-empty", lambda: not inst.G_spec.is_empty),
    ])
    if not ok:
        return Outcome(hyps)
    gm = inst.G_spec_m
    k = len(minimal_primes(inst.ring))
    holds = inst.G_spec_chi == gm.clique_number == k
    details = {"chi": inst.G_spec_chi, "omega": gm.clique_number, "min_R": k}
    return Outcome(hyps, holds, None if holds else details, details)


def _diam(inst: Instance) -> Outcome:
    hyps, ok = _hyps([("G(tau_T) non-empty", lambda: not inst.G.is_empty)])
    if not ok:
        return Outcome(hyps)
    gm = inst.Gm
    holds = gm.connected and gm.diameter <= 3
    return Outcome(hyps, holds, None if holds else {"diameter": gm.diameter}, {"diameter": gm.diameter})


CHECKERS: dict[str, Callable[[Instance], Outcome]] = {
    "R2.1": _r21,
    "P2.6a": lambda inst: _p26(inst, False),
    "P2.6b": lambda inst: _p26(inst, True),
    "L2.7": _l27,
    "L2.8": _l28,
    "L2.9": _l29,
    "P3.1a": _p31a,
    "P3.1b": _p31b,
    "C3.2": _c32,
    "L3.3": _l33,
    "C3.9": _c39,
    "T3.4": _t34,
    "T3.5": _t35,
    "P3.6": _p36,
    "T3.7": _t37,
    "T4.1": _t41,
    "T4.2": _t42,
    "L4.3": _l43,
    "T4.4": _t44,
    "C4.4": _c44,
    "T4.6": _t46,
    "C4.7": _c47,
    "C4.10": _c410,
    "P4.8": _p48,
    "L4.12": _l412,
    "P4.14": _p414,
    "P4.16": _p416,
    "DIAM": _diam,
}
assert set(CHECKERS) == set(THEOREMS)


def check(theorem_id: str, inst: Instance) -> TheoremReport:
    if theorem_id not in CHECKERS:
        raise ZariskiError(f"unknown theorem id {theorem_id!r}")
    start = time.perf_counter()
    try:
        out = CHECKERS[theorem_id](inst)
    except CapExceeded as exc:
        return TheoremReport(theorem_id, inst.describe(), [], False, None,
                             skipped=str(exc), elapsed=time.perf_counter() - start)
    applicable = all(v is True for _, v in out.hypotheses)
    report = TheoremReport(
        theorem=theorem_id,
        instance=inst.describe(),
        hypotheses=out.hypotheses,
        applicable=applicable,
        conclusion_holds=out.holds if applicable else None,
        witness=out.witness if applicable else None,
        details=out.details,
        elapsed=time.perf_counter() - start,
    )
    if applicable and out.holds is None:
        raise RuntimeError(f"checker {theorem_id} left the conclusion undecided")
    if report.is_counterexample:
        report.repro = inst.repro(theorem_id)
    return report


# -- sweeps ------------------------------------------------------------------

_ZN = re.compile(r"^zn:(\d+)\.\.(\d+)$")
_PRODUCTS = re.compile(r"^products:max=(\d+)$")


def _blocks_for(n: int, max_size: int):
    """Non-decreasing tuples of divisors d > 1 of n with product <= max_size (incl. empty)."""
    divs = [d for d in divisors(n) if d > 1]
    out = []

    def rec(start: int, acc: list, size: int):
        out.append(tuple(acc))
        for i in range(start, len(divs)):
            if size * divs[i] <= max_size:
                rec(i, acc + [divs[i]], size * divs[i])
    rec(0, [], 1)
    return out


def product_family(max_size: int) -> list[tuple]:
    """All (ring, module) with at least two ring factors, |R| <= max and 1 < |M| <= max,
    up to reordering the factors."""
    rings = []

    def rec(start: int, acc: list, size: int):
        if len(acc) >= 2:
            rings.append(tuple(acc))
        for n in range(start, max_size // size + 1):
            if n >= 2:
                rec(n, acc + [n], size * n)
    rec(2, [], 1)
    seen = set()
    out = []
    for moduli in rings:
        per = [_blocks_for(n, max_size) for n in moduli]
        for blocks in itertools.product(*per):
            size = prod(d for b in blocks for d in b)
            if size < 2 or size > max_size:
                continue
            canon = tuple(sorted(zip(moduli, blocks)))
            if canon in seen:
                continue
            seen.add(canon)
            out.append((tuple(n for n, _ in canon), tuple(b for _, b in canon)))
    return out


def parse_family(expr: str) -> list[tuple]:
    cases = []
    for part in expr.split("+"):
        part = part.strip()
        m = _ZN.match(part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            cases.extend(((n,), ((n,),)) for n in range(max(lo, 2), hi + 1))
            continue
        m = _PRODUCTS.match(part)
        if m:
            cases.extend(product_family(int(m.group(1))))
            continue
        raise ZariskiError(f"bad family expression {part!r}")
    return cases


def run_case(moduli, blocks, theorems, caps: Caps = Caps()) -> list[TheoremReport]:
    """Every theorem on every closed T of one module; cap errors become skips."""
    try:
        case = ModuleCase(moduli, blocks, caps)
        instances = case.instances()
    except CapExceeded as exc:
        desc = {"ring": list(moduli), "module": [list(b) for b in blocks], "T": "spec"}
        return [TheoremReport(t, desc, [], False, None, skipped=str(exc)) for t in theorems]
    return [check(t, inst) for inst in instances for t in theorems]


def _run_case_args(args):
    return run_case(*args)


def summarize(reports) -> dict:
    summary = {"reports": 0, "applicable": 0, "passed": 0, "failed": 0, "skipped": 0,
               "not_applicable": 0, "by_theorem": {}}
    for r in reports:
        summary["reports"] += 1
        key = {"passed": "passed", "failed": "failed", "skipped": "skipped",
               "not-applicable": "not_applicable"}[r.status]
        summary[key] += 1
        if r.applicable:
            summary["applicable"] += 1
        per = summary["by_theorem"].setdefault(
            r.theorem, {"applicable": 0, "passed": 0, "failed": 0, "skipped": 0, "not_applicable": 0})
        per[key] += 1
        if r.applicable:
            per["applicable"] += 1
    return summary


def _report_order(r: TheoremReport):
    inst = r.instance
    t = inst["T"]
    return (inst["ring"], inst["module"], t != "spec", [] if t == "spec" else t["primes"],
            THEOREMS.index(r.theorem))


def sweep(family, theorems=THEOREMS, caps: Caps = Caps(), jobs: int = 1):
    """Run checkers over a family expression (or an explicit case list).

    Returns (reports, summary); reports are in canonical order regardless of
    ``jobs``.
    """
    cases = parse_family(family) if isinstance(family, str) else list(family)
    theorems = tuple(theorems)
    for t in theorems:
        if t not in CHECKERS:
            raise ZariskiError(f"unknown theorem id {t!r}")
    args = [(moduli, blocks, theorems, caps) for moduli, blocks in cases]
    reports: list[TheoremReport] = []
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_run_case_args, args, chunksize=4):
                reports.extend(chunk)
    else:
        for a in args:
            reports.extend(_run_case_args(a))
    reports.sort(key=_report_order)
    summary = summarize(reports)
    summary["cases"] = len(cases)
    return reports, summary
