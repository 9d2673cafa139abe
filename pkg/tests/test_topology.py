from fractions import Fraction
from itertools import product

import pytest

from mvstone.core import Chain, FuzzySubset, PointMap, ProductSignature
from mvstone.corpus import corpus_topologies, enumerate_mv_topologies, random_topologies
from mvstone.duality import max_space
from mvstone.algebra import full_product
from mvstone.errors import InvalidStructureError, UniverseMismatchError
from mvstone.topology import (
    MvTopology,
    check_closed_family,
    check_continuous,
    check_continuous_via_base,
    check_metric,
    check_mv_topology,
    clopen_algebra,
    closed_sets,
    constant_topology,
    crisp_singletons_closed,
    discrete_crisp,
    extract_additive_subcover,
    full_topology,
    generate_from_base,
    indiscrete,
    is_additive_covering,
    is_base,
    is_classical_stone_space,
    is_closed_map,
    is_compact,
    is_covering,
    is_hausdorff,
    is_hausdorff_odot,
    is_homeomorphism,
    is_open_map,
    is_stone_mv_space,
    is_strongly_compact,
    is_zero_dimensional,
    metric_ball_base,
    minimal_open_coverings,
    open_ball,
    skeleton,
    subspace,
)

from oracles import all_tables

L2, L3, L4 = Chain(2), Chain(3), Chain(4)
XY = ("p", "q")
CORPUS = corpus_topologies()
SMALL = [(name, t) for name, t in CORPUS if len(t.universe) <= 3]


def ids(entry):
    return entry[0]


def join_irreducibles(tau):
    """Opens that are not the join of the opens strictly below them."""
    sig = tau.signature
    out = []
    for o in tau.tables:
        acc = sig.zero
        for b in tau.tables:
            if b != o and sig.leq(b, o):
                acc = sig.join(acc, b)
        if acc != o:
            out.append(o)
    return out


# -- axioms -----------------------------------------------------------------


def test_two_constants_pass():
    assert check_mv_topology(XY, L3, {(0, 0), (2, 2)})


def test_full_table_set_passes():
    assert check_mv_topology(XY, L3, all_tables(3, 2))


def test_odd_constant_fails_oplus_clause():
    v = check_mv_topology(XY, L4, {(0, 0), (3, 3), (1, 1)})
    assert not v
    assert v.witness == ("iv", (1, 1), (1, 1))


def test_missing_top_fails_first_clause():
    v = check_mv_topology(XY, L3, {(0, 0)})
    assert not v and v.witness[0] == "i"


def test_invalid_family_rejected_by_constructor():
    with pytest.raises(InvalidStructureError):
        MvTopology(XY, L4, {(0, 0), (3, 3), (1, 1)})
    with pytest.raises(InvalidStructureError):
        MvTopology((), L3, set())


def test_fuzzy_subsets_accepted_as_opens():
    fam = [FuzzySubset(XY, L3, t) for t in [(0, 0), (2, 2)]]
    assert MvTopology(XY, L3, fam) == indiscrete(XY, L3)


def test_exhaustive_enumeration_all_pass_axioms():
    spaces = enumerate_mv_topologies(XY, L3)
    assert len(spaces) == 16
    for tau in spaces:
        assert check_mv_topology(tau.universe, tau.chain, tau.opens)


# -- closed and clopen sets -------------------------------------------------


def test_clopen_examples():
    assert clopen_algebra(indiscrete(XY, L3)).carrier == {(0, 0), (2, 2)}
    C = clopen_algebra(discrete_crisp(XY, L2))
    assert len(C) == 4 and C.carrier == set(all_tables(2, 2))
    assert clopen_algebra(full_topology(XY, L3)).carrier == set(all_tables(3, 2))


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_closed_family_axioms_and_negation(entry):
    _, tau = entry
    fam = closed_sets(tau)
    assert check_closed_family(fam)
    sig = tau.signature
    for t in sig.all_elements() if sig.size <= 256 else tau.tables:
        assert (t in tau.opens) == (sig.neg(t) in fam.closeds)


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_clopen_closed_under_operations(entry):
    _, tau = entry
    C = clopen_algebra(tau)
    sig = tau.signature
    for a in C.elements:
        assert sig.neg(a) in C.carrier
        for b in C.elements:
            assert sig.oplus(a, b) in C.carrier


# -- bases ------------------------------------------------------------------


def test_trivial_base():
    assert generate_from_base(XY, L3, [(2, 2)]).opens == {(0, 0), (2, 2)}


def test_hat_base_of_boolean_square_is_discrete():
    D = max_space(full_product(2, 2))
    base = [D.hat(a) for a in full_product(2, 2).elements]
    tau = generate_from_base(D.points, Chain(D.order), base)
    assert tau == discrete_crisp(D.points, Chain(D.order))


def test_non_covering_base_rejected():
    with pytest.raises(InvalidStructureError, match="'q'"):
        generate_from_base(XY, L3, [(0, 0), (2, 0)])


def test_unclosed_base_rejected():
    with pytest.raises(InvalidStructureError, match="oplus"):
        generate_from_base(XY, L4, [(0, 0), (3, 3), (1, 1)])


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_generation_is_idempotent(entry):
    _, tau = entry
    again = generate_from_base(tau.universe, tau.chain, tau.opens)
    assert again == tau
    assert is_base(tau, tau.opens)
    assert is_base(tau, join_irreducibles(tau))


# -- skeleton and subspaces -------------------------------------------------


def test_skeleton_examples():
    assert skeleton(indiscrete(XY, L3)).opens == {(0, 0), (2, 2)}
    assert skeleton(full_topology(XY, L3)).opens == {(0, 0), (0, 2), (2, 0), (2, 2)}
    assert ProductSignature.power(3, 2).delta((2, 1)) == (2, 0)


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_skeleton_matches_delta_image(entry):
    _, tau = entry
    sig = tau.signature
    crisp = {o for o in tau.opens if all(v in (0, tau.chain.top) for v in o)}
    assert skeleton(tau).opens == crisp == {sig.delta(o) for o in tau.opens}


def test_subspace_examples():
    tau = full_topology(XY, L3)
    assert subspace(tau, XY) == tau
    assert subspace(discrete_crisp(XY, L3), ["p"]).opens == {(0,), (2,)}
    assert subspace(tau, ["q"]) == full_topology(("q",), L3)
    with pytest.raises(InvalidStructureError):
        subspace(tau, [])
    with pytest.raises(UniverseMismatchError):
        subspace(tau, ["z"])


def test_subspace_of_crisp_discrete_point_is_crisp_point_space():
    # over a crisp discrete space the only values at a point are 0 and 1
    sub = subspace(discrete_crisp(XY, L2), ["p"])
    assert sub == full_topology(("p",), L2)


# -- coverings and compactness ----------------------------------------------


def test_covering_examples():
    sig1 = ProductSignature.power(3, 1)
    assert is_covering(sig1, [(2,)]) and is_additive_covering(sig1, [(2,)])
    assert extract_additive_subcover(sig1, [(2,)]) == (((2,), 1),)
    assert not is_covering(sig1, [(1,)])
    assert is_additive_covering(sig1, [((1,), 2)])
    assert extract_additive_subcover(sig1, [(1,)]) is None
    sig2 = ProductSignature.power(2, 2)
    assert is_covering(sig2, [(1, 0), (0, 1)])
    assert extract_additive_subcover(sig2, [(1, 0), (0, 1)]) == (((0, 1), 1), ((1, 0), 1))


def test_indiscrete_only_covering_is_top():
    covers = list(minimal_open_coverings(indiscrete(XY, L3)))
    assert covers == [((2, 2),)]


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_every_finite_space_compact_both_ways(entry):
    _, tau = entry
    c, s = is_compact(tau), is_strongly_compact(tau)
    assert c and s
    assert c.witness == s.witness
    sig = tau.signature
    for cov, sub in c.details["certificates"]:
        assert is_covering(sig, cov)
        assert {t for t, _ in sub} <= set(cov)
        assert is_additive_covering(sig, sub)


@pytest.mark.parametrize("entry", SMALL, ids=ids)
def test_closed_crisp_subspaces_compact(entry):
    _, tau = entry
    n = len(tau.universe)
    top = tau.chain.top
    closeds = closed_sets(tau).closeds
    for bits in product((0, 1), repeat=n):
        if any(bits) and tuple(top * b for b in bits) in closeds:
            sub = subspace(tau, [x for x, b in zip(tau.universe, bits) if b])
            assert is_compact(sub) and is_strongly_compact(sub)


def test_minimal_coverings_against_subset_scan():
    for tau in enumerate_mv_topologies(XY, L3):
        sig = tau.signature
        fams = []
        ts = tau.tables
        for mask in range(1, 1 << len(ts)):
            fam = [t for j, t in enumerate(ts) if mask >> j & 1]
            if is_covering(sig, fam):
                fams.append(frozenset(fam))
        minimal = {f for f in fams if not any(g < f for g in fams)}
        assert {frozenset(c) for c in minimal_open_coverings(tau)} == minimal


# -- separation and Stone spaces --------------------------------------------


def test_hausdorff_examples():
    h = is_hausdorff(discrete_crisp(XY, L2))
    assert h and h.witness == {("p", "q"): ((1, 0), (0, 1))}
    bad = is_hausdorff(indiscrete(XY, L3))
    assert not bad and bad.witness == ("p", "q")
    assert not is_hausdorff_odot(indiscrete(XY, L3))


def test_hausdorff_variants_agree_exhaustively():
    for tau in enumerate_mv_topologies(XY, L3):
        assert is_hausdorff(tau).ok == is_hausdorff_odot(tau).ok


def test_hausdorff_variants_agree_on_random_sample():
    spaces = random_topologies(seed=7, count=200)
    assert sum(is_hausdorff(t).ok for t in spaces) > 0
    for tau in spaces:
        assert is_hausdorff(tau).ok == is_hausdorff_odot(tau).ok


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_hausdorff_spaces_have_closed_crisp_singletons(entry):
    _, tau = entry
    if is_hausdorff(tau):
        assert crisp_singletons_closed(tau)


def test_stone_examples():
    assert is_stone_mv_space(discrete_crisp(("p", "q", "r"), L3))
    ind = indiscrete(XY, L3)
    assert is_zero_dimensional(ind)
    v = is_stone_mv_space(ind)
    assert not v and v.witness == ("hausdorff",)
    assert is_stone_mv_space(full_topology(XY, L3))


@pytest.mark.parametrize("entry", [e for e in CORPUS if e[0].startswith("Max")], ids=ids)
def test_dual_spaces_are_stone_with_classical_skeleton(entry):
    _, tau = entry
    assert is_stone_mv_space(tau)
    assert is_classical_stone_space(skeleton(tau))


def test_fuzzy_space_is_not_classical():
    assert is_classical_stone_space(full_topology(XY, L3)).witness == "not crisp"


# -- maps -------------------------------------------------------------------


@pytest.mark.parametrize("entry", CORPUS, ids=ids)
def test_identity_is_continuous_open_closed(entry):
    _, tau = entry
    ident = PointMap.identity(tau.universe)
    assert check_continuous(ident, tau, tau)
    assert is_open_map(ident, tau, tau) and is_closed_map(ident, tau, tau)
    assert is_homeomorphism(ident, tau, tau)


def test_constant_map_into_indiscrete_is_continuous():
    for tau in enumerate_mv_topologies(XY, L3):
        f = PointMap(XY, ("u", "v"), ("u", "u"))
        assert check_continuous(f, tau, indiscrete(("u", "v"), L4))


def test_discontinuous_witness():
    f = PointMap.identity(XY)
    v = check_continuous(f, indiscrete(XY, L2), discrete_crisp(XY, L2))
    assert not v and v.witness in {(0, 1), (1, 0)}


def test_mismatched_map_rejected():
    with pytest.raises(UniverseMismatchError):
        check_continuous(PointMap.identity(("p",)), full_topology(XY, L3), full_topology(XY, L3))


def maps_between(X, Y):
    for images in product(Y, repeat=len(X)):
        yield PointMap(X, Y, images)


TARGETS = [t for name, t in SMALL if len(t) <= 40]


@pytest.mark.parametrize("sigma", TARGETS, ids=lambda t: f"{len(t.universe)}pts-L{t.order}-{len(t)}opens")
def test_base_and_closed_forms_agree_with_open_form(sigma):
    base = join_irreducibles(sigma)
    assert is_base(sigma, base)
    sources = enumerate_mv_topologies(XY, L3)[::3] + [discrete_crisp(("u",), L2)]
    for tau in sources:
        for f in maps_between(tau.universe, sigma.universe):
            full = check_continuous(f, tau, sigma).ok
            assert check_continuous(f, tau, sigma, via="closeds").ok == full
            assert check_continuous_via_base(f, tau, base, sigma.order).ok == full


def test_open_and_closed_maps():
    f = PointMap(XY, ("u",), ("u", "u"))
    point = full_topology(("u",), L3)
    assert is_open_map(f, full_topology(XY, L3), point)
    g = PointMap(("u",), XY, ("p",))
    assert not is_open_map(g, point, indiscrete(XY, L3))
    assert not is_closed_map(g, point, indiscrete(XY, L3))


# -- metric balls -----------------------------------------------------------

D2 = {("p", "q"): Fraction(1)}


def test_ball_membership_examples():
    dist = check_metric(XY, D2).details["dist"]
    assert open_ball(XY, dist, "p", 2, Fraction(2)) == (2, 2)
    assert open_ball(XY, dist, "p", 1, Fraction(1, 2)) == (1, 0)
    assert open_ball(XY, dist, "p", 2, Fraction(1)) == (2, 0)


def test_metric_axioms_checked():
    assert not check_metric(XY, {("p", "q"): 0})
    tri = {("p", "q"): 1, ("q", "r"): 1, ("p", "r"): 3}
    assert check_metric(("p", "q", "r"), tri).witness[0] == "triangle"
    with pytest.raises(InvalidStructureError):
        metric_ball_base(XY, {("p", "q"): 0}, L3, [1])
    with pytest.raises(InvalidStructureError):
        metric_ball_base(XY, D2, L3, [0])


@pytest.mark.parametrize("radii", [[Fraction(1, 2)], [Fraction(2)], [Fraction(1, 2), Fraction(3, 2)]])
def test_ball_topologies(radii):
    bt = metric_ball_base(XY, D2, L3, radii)
    tau = bt.topology
    assert check_mv_topology(tau.universe, tau.chain, tau.opens)
    assert bt.balls <= tau.opens
    assert bt.literal_family <= tau.opens
    if bt.literal_verdict:
        assert MvTopology(XY, L3, bt.literal_family).opens <= tau.opens


def test_literal_ball_family_can_miss_closure():
    # radius below every distance gives one-point balls; their joins are closed under the other operations
    bt = metric_ball_base(("p", "q", "r"), {("p", "q"): 1, ("q", "r"): 1, ("p", "r"): 1}, L3, [Fraction(1, 2)])
    assert bt.literal_verdict
    assert bt.topology == full_topology(("p", "q", "r"), L3)


def test_constant_topology_valid():
    tau = constant_topology(XY, L4)
    assert len(tau) == 4 and not is_hausdorff(tau)
