import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BruteModule
from zariski.errors import NotClosedError, ZariskiError
from zariski.graph import build_G_tau
from zariski.module import (DirectSumModule, QuotientModule, Submodule, enumerate_submodules, ideal_times,
                            regular_module)
from zariski.ring import Ring, idempotents
from zariski.spectra import (V, V_star, closed_sets, decompose_by_idempotent, intersection, is_closed,
                             is_irreducible, is_prime_submodule, is_primeful, is_x_injective, make_T_context,
                             mask_of, natural_map, radical, spectrum, v_mask)

SHAPES = [
    ((12,), ((12,),)),
    ((6,), ((2, 3),)),
    ((2,), ((2, 2),)),
    ((4,), ((4,),)),
    ((30,), ((30,),)),
    ((2, 3), ((2,), (3,))),
    ((4, 2), ((2, 4), (2,))),
    ((2, 2), ((2, 2), (2,))),
    ((36,), ((36,),)),
]


def labels(N) -> frozenset:
    return frozenset(tuple(x) for x in N.element_labels())


def module(moduli, blocks):
    return DirectSumModule(Ring(moduli), blocks)


@pytest.mark.parametrize("moduli,blocks", SHAPES)
def test_spectrum_matches_brute_force(moduli, blocks):
    M = module(moduli, blocks)
    B = BruteModule(moduli, blocks)
    spec = spectrum(M)
    assert {labels(P) for P in spec} == set(B.spec)
    # the colon prefilter never drops a prime
    for N in enumerate_submodules(M):
        assert is_prime_submodule(N) == (labels(N) in set(B.spec))


@pytest.mark.parametrize("moduli,blocks", SHAPES)
def test_V_matches_brute_force(moduli, blocks):
    M = module(moduli, blocks)
    B = BruteModule(moduli, blocks)
    for N in enumerate_submodules(M):
        assert {labels(P) for P in V(N)} == B.V(labels(N))
        assert {labels(P) for P in V_star(N)} == {P for P in B.spec if labels(N) <= P}


@pytest.mark.parametrize("moduli,blocks", SHAPES)
def test_union_chain(moduli, blocks):
    """V(N) u V(K) = V(N & K) = V(NK) = V*(NK)."""
    M = module(moduli, blocks)
    B = BruteModule(moduli, blocks)
    subs = B.submodules
    for N, K in itertools.product(subs, repeat=2):
        NK = B.product(N, K)
        union = B.V(N) | B.V(K)
        assert union == B.V(N & K) == B.V(NK) == {P for P in B.spec if NK <= P}


def test_examples():
    Z12 = regular_module(Ring((12,)))
    spec = spectrum(Z12)
    assert [P.describe() for P in spec] == ["<2>", "<3>"]
    ctx = make_T_context(Z12)
    assert ctx.Q.describe() == "<6>" and ctx.Mbar.order == 6
    assert ctx.is_closed and not ctx.irreducible()
    assert len(spectrum(regular_module(Ring((4,))))) == 1
    V2 = module((2,), ((2, 2),))
    assert len(spectrum(V2)) == 4
    assert is_irreducible(mask_of(spectrum(V2), V2), V2)


def test_irreducible_requires_closed():
    V2 = module((2,), ((2, 2),))
    spectrum(V2)
    # every prime of Z_2+Z_2 has colon (0), so the only non-empty closed set is all of Spec
    assert not is_closed(0b0010, V2)
    with pytest.raises(NotClosedError):
        is_irreducible(0b0010, V2)
    assert closed_sets(V2) == [0, 0b1111]
    Z30 = regular_module(Ring((30,)))
    spectrum(Z30)
    assert all(is_closed(t, Z30) for t in range(1, 8))


def test_empty_T_rejected():
    with pytest.raises(ZariskiError):
        make_T_context(regular_module(Ring((12,))), 0)


@pytest.mark.parametrize("moduli,blocks", SHAPES)
def test_closed_sets_and_radical(moduli, blocks):
    M = module(moduli, blocks)
    spec = spectrum(M)
    masks = closed_sets(M)
    assert 0 in masks and (1 << len(spec)) - 1 in masks
    for N in enumerate_submodules(M):
        rad = radical(N)
        assert N <= rad
        assert radical(rad) == rad
        assert is_closed(v_mask(N), M)


@pytest.mark.parametrize("moduli,blocks", SHAPES)
def test_T_context(moduli, blocks):
    M = module(moduli, blocks)
    for t in closed_sets(M):
        if not t:
            continue
        ctx = make_T_context(M, t)
        assert ctx.Q <= ctx.meet
        assert ctx.Q == ideal_times(ctx.meet.colon, M.full)
        assert isinstance(ctx.Mbar, QuotientModule)
        assert v_mask(ctx.meet) == t
        # G(tau_T) empty exactly when T is irreducible, for closed T
        assert build_G_tau(ctx).is_empty == ctx.irreducible()


def test_natural_map_and_primeful():
    Z12 = regular_module(Ring((12,)))
    pairs = natural_map(Z12)
    assert [(P.describe(), I.describe()) for P, I in pairs] == [("<2>", "(2)"), ("<3>", "(3)")]
    assert is_primeful(Z12) and is_x_injective(Z12)
    V2 = module((2,), ((2, 2),))
    assert is_primeful(V2) and not is_x_injective(V2)


@pytest.mark.parametrize("moduli,blocks", [((12,), ((12,),)), ((30,), ((30,),)), ((6,), ((2, 3),)),
                                           ((2, 3), ((2,), (3,))), ((4, 2), ((2, 4), (2,)))])
def test_idempotent_splitting(moduli, blocks):
    """Spec(M) splits along M = eM + (1-e)M, and so do Q and M/Q."""
    M = module(moduli, blocks)
    R = M.ring
    spec = spectrum(M)
    for t in closed_sets(M):
        if not t:
            continue
        ctx = make_T_context(M, t)
        for e in idempotents(R):
            if e in (R.zero, R.one):
                continue
            d = decompose_by_idempotent(ctx, e)
            assert (d.M1 & d.M2).is_zero and (d.M1 + d.M2).is_full
            assert len(d.T1) + len(d.T2) == len(ctx.T)
            assert d.q_splits and d.bar_splits
        for e in idempotents(R):
            if e in (R.zero, R.one):
                continue
            f = R.sub(R.one, e)
            eM = Submodule(M, M.scale(e).tolist())
            fM = Submodule(M, M.scale(f).tolist())
            # every prime contains eM or (1-e)M
            assert all(eM <= P or fM <= P for P in spec)


def test_decompose_rejects_trivial():
    ctx = make_T_context(regular_module(Ring((12,))))
    with pytest.raises(ZariskiError):
        decompose_by_idempotent(ctx, (1,))
    with pytest.raises(ZariskiError):
        decompose_by_idempotent(ctx, (2,))
    d = decompose_by_idempotent(ctx, (4,))
    assert d.M1.describe() == "<4>" and d.M2.describe() == "<3>"
    assert (d.bar1.order, d.bar2.order) == (3, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SHAPES), st.data())
def test_intersection_of_T_is_semiprime_closed(shape, data):
    moduli, blocks = shape
    M = module(*shape)
    spec = spectrum(M)
    subset = data.draw(st.lists(st.sampled_from(range(len(spec))), min_size=1, unique=True))
    T = [spec[i] for i in subset]
    meet = intersection(T, M)
    assert all(meet <= P for P in T)
    assert radical(meet) == meet
