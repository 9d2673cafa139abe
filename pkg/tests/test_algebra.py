from fractions import Fraction

import pytest

from mvstone.algebra import (
    FiniteMvAlgebra,
    Ideal,
    MvHomomorphism,
    all_ideals,
    boolean_algebra,
    boolean_center,
    chain_factorization,
    class_by_formula,
    congruence_classes,
    embed_max,
    enumerate_homomorphisms,
    find_isomorphism,
    full_product,
    generate_ideal,
    generate_subalgebra,
    identity_hom,
    is_chain,
    is_hyper_archimedean,
    is_ideal,
    is_liminary,
    is_semisimple,
    maximal_ideals,
    prime_ideals,
    quotient,
    radical,
)
from mvstone.core import ProductSignature
from mvstone.corpus import GENERATED, corpus_algebras
from mvstone.errors import InvalidStructureError, ResourceBoundError

from oracles import closure_oracle, ideals_oracle, is_ideal_oracle, maximal_oracle, to_fractions

half = Fraction(1, 2)


def L(*orders):
    return full_product(*orders)


def members(A, *rows):
    return frozenset(A.signature.element(*r) for r in rows)


def test_generation_examples():
    sig3 = ProductSignature((3,))
    assert generate_subalgebra(sig3).carrier == {(0,), (2,)}
    assert len(generate_subalgebra(sig3, [(1,)])) == 3
    sig = ProductSignature((3, 2))
    A = generate_subalgebra(sig, [sig.element(half, 0)])
    assert A.carrier == members(A, (0, 0), (0, 1), (1, 0), (1, 1), (half, 0), (half, 1))


@pytest.mark.parametrize("entry", list(zip(GENERATED, corpus_algebras())), ids=lambda e: e[1].name)
def test_generation_matches_fraction_closure(entry):
    (orders, gens), A = entry
    oracle = closure_oracle(orders, gens)
    assert {to_fractions(a, orders) for a in A.elements} == oracle


def test_trivial_carrier_rejected():
    sig = ProductSignature((3,))
    with pytest.raises(InvalidStructureError):
        FiniteMvAlgebra(sig, {(0,), (1,)})


def test_boolean_center_examples():
    assert boolean_center(L(3)).carrier == {(0,), (2,)}
    B = boolean_algebra(3)
    assert boolean_center(B).carrier == B.carrier
    C = boolean_center(L(3, 2))
    assert C.carrier == {(0, 0), (0, 1), (2, 0), (2, 1)}
    sig = C.signature
    for a in C.elements:
        assert sig.oplus(a, a) == a and sig.meet(a, sig.neg(a)) == sig.zero


def test_generate_ideal_examples():
    A3 = L(3)
    I = generate_ideal(A3, [])
    assert I.members == {(0,)} and I.is_proper
    J = generate_ideal(A3, [(1,)])
    assert J.members == A3.carrier and not J.is_proper
    A = L(3, 3)
    K = generate_ideal(A, [A.signature.element(half, 0)])
    assert K.members == members(A, (0, 0), (half, 0), (1, 0)) and K.is_proper


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_ideals_match_oracle(A):
    got = {I.members for I in all_ideals(A)}
    assert got == ideals_oracle(A)
    for m in got:
        assert is_ideal_oracle(A, m) and is_ideal(A, m)


@pytest.mark.parametrize("orders", [(2, 2), (3, 2), (3, 3), (2, 2, 3), (5, 5, 5)])
def test_product_shortcut_agrees(orders):
    A = L(*orders)
    if len(A) <= 36:
        assert {I.members for I in all_ideals(A)} == ideals_oracle(A)
    assert len(all_ideals(A)) == 2 ** len(orders)


def test_bound_enforced_off_products():
    A = corpus_algebras()[12]
    with pytest.raises(ResourceBoundError):
        all_ideals(generate_subalgebra(A.signature, [A.elements[3]]), bound=2)


def test_maximal_ideal_examples():
    assert [M.members for M in maximal_ideals(L(3))] == [frozenset({(0,)})]
    B = L(2, 2)
    assert {M.members for M in maximal_ideals(B)} == {members(B, (0, 0), (0, 1)), members(B, (0, 0), (1, 0))}
    assert len(maximal_ideals(L(3, 2))) == 2


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_maximal_ideals_match_oracle_and_certificates(A):
    Ms = maximal_ideals(A)
    assert {M.members for M in Ms} == maximal_oracle(A)
    assert [M.sorted_members for M in Ms] == sorted(M.sorted_members for M in Ms)
    sig = A.signature
    for M in Ms:
        outside = A.carrier - M.members
        assert {a for a, _ in M.certificate} == outside
        for a, n in M.certificate:
            assert sig.power_of(sig.neg(a), n) in M.members


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_primes_coincide_with_maximals(A):
    assert {P.members for P in prime_ideals(A)} == {M.members for M in maximal_ideals(A)}


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_radical_and_semisimplicity(A):
    assert radical(A).members == {A.zero}
    assert is_semisimple(A)


def test_quotient_examples():
    A = L(3, 2)
    Q0 = quotient(A, generate_ideal(A, []))
    assert len(Q0.algebra) == len(A)
    first = generate_ideal(A, [A.signature.element(1, 0)])
    Q = quotient(A, first)
    assert len(Q.algebra) == 2 and is_chain(Q.algebra)
    with pytest.raises(InvalidStructureError):
        quotient(A, Ideal(A, A.carrier))


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_quotients_by_maximals_are_simple_chains(A):
    for M in maximal_ideals(A):
        Q = quotient(A, M).algebra
        assert is_chain(Q)
        proper = [I for I in all_ideals(Q) if I.is_proper]
        assert [I.members for I in proper] == [frozenset({Q.zero})]


@pytest.mark.parametrize("A", corpus_algebras()[:12], ids=lambda A: A.name)
def test_congruence_classes_match_formula(A):
    for I in all_ideals(A):
        if not I.is_proper:
            continue
        rep = congruence_classes(A, I)
        for a in A.elements:
            cls = frozenset(b for b in A.elements if rep[b] == rep[a])
            assert cls == class_by_formula(A, I, a)
            assert rep[a] == min(cls)


def test_hyper_archimedean_witnesses():
    v = is_hyper_archimedean(L(3))
    assert v.ok and v.witness[(1,)] == 2 and v.witness[(2,)] == 1 and v.witness[(0,)] == 1


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_hyper_archimedean_conditions_agree(A):
    v = is_hyper_archimedean(A)
    assert v.ok
    least = v.details["least"]
    for a in A.elements:
        if A.signature.is_boolean(a):
            assert least["boolean"][a] == 1


def test_liminary_examples():
    assert is_liminary(L(3)).ok
    assert is_liminary(L(2, 4)).ok
    assert all(is_liminary(A).ok for A in corpus_algebras())


def test_embed_max_examples():
    e = embed_max(L(3))
    assert e.order == 3 and all(e.hat[a] == a for a in L(3).elements)
    A = L(2, 3)
    e = embed_max(A)
    assert sorted(e.quotient_orders) == [2, 3]
    for a in A.elements:
        read = {k: e.hat[a][i] // ((e.order - 1) // (k - 1)) for i, k in enumerate(e.quotient_orders)}
        assert read == {2: a[0], 3: a[1]}


@pytest.mark.parametrize("A", corpus_algebras(), ids=lambda A: A.name)
def test_hat_kernel_trivial(A):
    e = embed_max(A)
    zero = (0,) * len(e.points)
    assert [a for a in A.elements if e.hat[a] == zero] == [A.zero]


def test_factorization_examples():
    assert chain_factorization(L(3)) == (3,)
    assert chain_factorization(L(2, 3, 3)) == (2, 3, 3)
    assert chain_factorization(boolean_algebra(4)) == (2, 2, 2, 2)


def test_isomorphism_examples():
    A = L(2, 3)
    h = find_isomorphism(A, A)
    assert all(h(a) == a for a in A.elements)
    swap = find_isomorphism(L(2, 3), L(3, 2))
    assert all(swap(a) == (a[1], a[0]) for a in A.elements)
    assert find_isomorphism(L(4), L(2, 2)) is None


def test_factorization_invariant_under_isomorphism():
    algs = corpus_algebras()
    for A in algs:
        for B in algs:
            h = find_isomorphism(A, B)
            if h is not None:
                assert chain_factorization(A) == chain_factorization(B)


def test_preimage_of_maximal_under_homomorphisms_is_maximal():
    pairs = [(L(3), L(3, 5)), (L(2, 2), L(2, 3)), (L(5), L(5, 5)), (L(3, 3), L(3))]
    for A, B in pairs:
        maxA = {M.members for M in maximal_ideals(A)}
        count = 0
        for h in enumerate_homomorphisms(A, B):
            count += 1
            for N in maximal_ideals(B):
                assert h.preimage(N.members) in maxA
        assert count > 0


def test_homomorphism_verification_catches_bad_tables():
    A = L(3)
    bad = MvHomomorphism(A, A, {(0,): (0,), (1,): (2,), (2,): (2,)})
    assert not bad.verify()
    assert identity_hom(A).verify()
