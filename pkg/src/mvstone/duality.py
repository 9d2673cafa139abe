"""The Clop/Max functor pair on finite objects, roundtrip certificates, and cuts.

``max_space`` builds the dual Stone MV-space of an algebra from its hat
embedding; ``clopen_algebra`` (in :mod:`mvstone.topology`) goes back. The
unit maps are returned as explicit verified isomorphisms or homeomorphisms,
never as structural yes/no answers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import (
    DEFAULT_BOUND,
    FiniteMvAlgebra,
    HatEmbedding,
    MvHomomorphism,
    boolean_center,
    certify_maximal,
    chain_quotients,
    embed_max,
    enumerate_homomorphisms,
    find_isomorphism,
    is_chain,
    is_liminary,
    quotient,
)
from .core import Chain, PointMap, Verdict, common_order, preimage_table, regrid
from .errors import ConsistencyError, InvalidStructureError
from .topology import (
    MvTopology,
    check_continuous,
    check_continuous_via_base,
    clopen_algebra,
    generate_from_base,
    is_homeomorphism,
    is_stone_mv_space,
    is_strongly_compact,
    skeleton,
)

EXHAUSTIVE_CUTS = 20


@dataclass(frozen=True)
class DualSpace:
    algebra: FiniteMvAlgebra
    embedding: HatEmbedding = field(repr=False)
    space: MvTopology = field(repr=False)

    @property
    def points(self) -> tuple:
        return self.embedding.points

    @property
    def ideals(self) -> tuple:
        return self.embedding.ideals

    @property
    def order(self) -> int:
        return self.embedding.order

    def hat(self, a) -> tuple:
        return self.embedding.hat[a]

    def point_of(self, members) -> str:
        members = frozenset(members)
        for p, M in zip(self.points, self.ideals):
            if M.members == members:
                return p
        raise KeyError("not a maximal ideal of this algebra")


@lru_cache(maxsize=256)
def _max_space(A: FiniteMvAlgebra, bound: int) -> DualSpace:
    emb = embed_max(A, bound)
    space = generate_from_base(emb.points, Chain(emb.order), set(emb.hat.values()))
    v = is_stone_mv_space(space)
    if not v:
        raise ConsistencyError(f"dual space of {A} is not a Stone MV-space: {v.witness}")
    return DualSpace(A, emb, space)


def max_space(A: FiniteMvAlgebra, bound: int | None = None) -> DualSpace:
    """⟨Max A, Ω_A⟩ with Ω_A generated by the hat image; certified Stone."""
    return _max_space(A, DEFAULT_BOUND if bound is None else bound)


def dualize_hom(h: MvHomomorphism, bound: int | None = None) -> PointMap:
    """Max h : Max B → Max A, N ↦ h⁻¹[N]; checked continuous against the base Â."""
    if not h.verify():
        raise InvalidStructureError("not a homomorphism")
    DA, DB = max_space(h.domain, bound), max_space(h.codomain, bound)
    images = []
    for N in DB.ideals:
        pre = h.preimage(N.members)
        try:
            images.append(DA.point_of(pre))
        except KeyError:
            raise ConsistencyError("preimage of a maximal ideal is not maximal") from None
    f = PointMap(DB.points, DA.points, tuple(images))
    v = check_continuous_via_base(f, DB.space, DA.embedding.hat.values(), DA.order)
    if not v:
        raise ConsistencyError(f"Max h is not continuous: {v.witness}")
    return f


def dualize_map(f: PointMap, tau: MvTopology, sigma: MvTopology) -> MvHomomorphism:
    """Clop f : Clop σ → Clop τ, α ↦ α ∘ f, for a continuous f : τ → σ.

    When the spaces use different chains both are re-gridded onto a common one.
    """
    if not check_continuous(f, tau, sigma):
        raise InvalidStructureError("map is not continuous")
    m = common_order(tau.order, sigma.order)
    tau, sigma = tau.regrid(m), sigma.regrid(m)
    ct, cs = clopen_algebra(tau), clopen_algebra(sigma)
    table = {a: preimage_table(f, a) for a in cs.elements}
    if not all(v in ct.carrier for v in table.values()):
        raise ConsistencyError("preimage of a clopen is not clopen")
    h = MvHomomorphism(cs, ct, table)
    if not h.verify():
        raise ConsistencyError("Clop f is not a homomorphism")
    return h


def unit_iso_algebra(A: FiniteMvAlgebra, bound: int | None = None) -> MvHomomorphism:
    """The certified isomorphism a ↦ â from A onto Clop Max A."""
    D = max_space(A, bound)
    C = clopen_algebra(D.space)
    h = MvHomomorphism(A, C, dict(D.embedding.hat))
    if not all(v in C.carrier for v in h.table.values()):
        raise ConsistencyError("a hat image is not clopen")
    if not (h.is_bijective and h.verify()):
        raise ConsistencyError("a ↦ â is not an isomorphism onto Clop Max A")
    return h


@dataclass(frozen=True)
class SpaceIso:
    """x ↦ {o ∈ Clop τ : o(x) = 0} from τ onto Max Clop τ."""

    space: MvTopology
    dual: DualSpace = field(repr=False)
    map: PointMap
    ideals: tuple = field(repr=False)


def unit_iso_space(tau: MvTopology, bound: int | None = None) -> SpaceIso:
    v = is_stone_mv_space(tau)
    if not v:
        raise InvalidStructureError(f"not a Stone MV-space: fails {', '.join(v.witness)}")
    A = clopen_algebra(tau)
    D = max_space(A, bound)
    images, ideals = [], []
    for i, x in enumerate(tau.universe):
        members = frozenset(o for o in A.elements if o[i] == 0)
        M = certify_maximal(A, members)
        if M is None:
            raise ConsistencyError(f"ideal of clopens vanishing at {x!r} is not maximal")
        ideals.append(M)
        images.append(D.point_of(members))
    f = PointMap(tau.universe, D.points, tuple(images))
    if not f.is_bijective:
        raise ConsistencyError("point-to-ideal map is not bijective")
    hv = is_homeomorphism(f, tau, D.space)
    if not hv:
        raise ConsistencyError(f"point-to-ideal map is not a homeomorphism: {hv.witness}")
    m = common_order(tau.order, D.order)
    for o in A.elements:
        back = preimage_table(f, regrid(D.hat(o), D.order, m))
        if back != regrid(o, tau.order, m):
            raise ConsistencyError("evaluation identity fails")
    return SpaceIso(tau, D, f, tuple(ideals))


def check_naturality(h: MvHomomorphism, bound: int | None = None) -> Verdict:
    """hat_B(h(a)) = (Max h)⇐(hat_A(a)) for every a."""
    DA, DB = max_space(h.domain, bound), max_space(h.codomain, bound)
    f = dualize_hom(h, bound)
    m = common_order(DA.order, DB.order)
    for a in h.domain.elements:
        lhs = regrid(DB.hat(h(a)), DB.order, m)
        rhs = preimage_table(f, regrid(DA.hat(a), DA.order, m))
        if lhs != rhs:
            return Verdict(False, "naturality", a)
    return Verdict(True, "naturality")


def check_square(A: FiniteMvAlgebra, bound: int | None = None) -> Verdict:
    """Both faces of the skeleton / Boolean-center square.

    Face 1: the skeleton of Max A is homeomorphic to Max B(A) via M ↦ M ∩ B(A).
    Face 2: Clop of the skeleton equals the Boolean center of Clop Max A, and
    the hat map carries B(A) onto it.
    """
    D = max_space(A, bound)
    sk = skeleton(D.space)
    BA = boolean_center(A)
    DB = max_space(BA, bound)
    images = []
    for M in D.ideals:
        try:
            images.append(DB.point_of(M.members & BA.carrier))
        except KeyError:
            return Verdict(False, "square", ("restriction not maximal", M.format()))
    phi = PointMap(D.points, DB.points, tuple(images))
    face1 = is_homeomorphism(phi, sk, DB.space)
    clop_sk = clopen_algebra(sk).carrier
    center_clop = boolean_center(clopen_algebra(D.space)).carrier
    hat_center = frozenset(D.hat(b) for b in BA.elements)
    face2 = clop_sk == center_clop == hat_center
    ok = bool(face1) and face2
    return Verdict(ok, "square", None if ok else ("face1" if not face1 else "face2"),
                   {"max_face": face1.ok, "clop_face": face2, "boolean_points": len(DB.points)})


# -- cuts -------------------------------------------------------------------


@dataclass(frozen=True)
class Cut:
    parent: FiniteMvAlgebra = field(compare=False, repr=False)
    members: frozenset

    def format(self) -> str:
        return "{" + ", ".join(self.parent.fmt(a) for a in sorted(self.members)) + "}"


def lower_bounds(A: FiniteMvAlgebra, S) -> frozenset:
    leq = A.signature.leq
    S = list(S)
    return frozenset(a for a in A.elements if all(leq(a, s) for s in S))


def upper_bounds(A: FiniteMvAlgebra, S) -> frozenset:
    leq = A.signature.leq
    S = list(S)
    return frozenset(a for a in A.elements if all(leq(s, a) for s in S))


def cut_closure(A: FiniteMvAlgebra, S) -> Cut:
    return Cut(A, lower_bounds(A, upper_bounds(A, S)))


def is_cut(A: FiniteMvAlgebra, S) -> bool:
    return cut_closure(A, S).members == frozenset(S)


def all_cuts(A: FiniteMvAlgebra, exhaustive_limit: int = EXHAUSTIVE_CUTS) -> tuple[list[Cut], dict]:
    """All cuts by scanning every subset (small carriers) or principal seeds (large ones).

    Returns the cuts in canonical order and a census dict.
    """
    els = A.elements
    n = len(els)
    leq = A.signature.leq
    if n > exhaustive_limit:
        cuts = {cut_closure(A, [a]).members for a in els}
        return _sorted_cuts(A, cuts), {"mode": "principal", "scanned": n, "cuts": len(cuts)}
    up = [sum(1 << j for j, b in enumerate(els) if leq(a, b)) for a in els]
    down = [sum(1 << j for j, b in enumerate(els) if leq(b, a)) for a in els]
    full = (1 << n) - 1
    ub = [full] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        ub[s] = ub[s ^ low] & up[low.bit_length() - 1]
    lower_of: dict = {}
    cut_masks = set()
    subsets_that_are_cuts = 0
    for s in range(1 << n):
        u = ub[s]
        lo = lower_of.get(u)
        if lo is None:
            lo = full
            t = u
            while t:
                low = t & -t
                lo &= down[low.bit_length() - 1]
                t ^= low
            lower_of[u] = lo
        if lo == s:
            subsets_that_are_cuts += 1
        cut_masks.add(lo)
    if subsets_that_are_cuts != len(cut_masks):
        raise ConsistencyError("subset scan and closure images disagree on the cuts")
    cuts = {frozenset(els[j] for j in range(n) if mask >> j & 1) for mask in cut_masks}
    return _sorted_cuts(A, cuts), {"mode": "exhaustive", "scanned": 1 << n, "cuts": len(cuts)}


def _sorted_cuts(A, cuts) -> list[Cut]:
    return [Cut(A, m) for m in sorted(cuts, key=lambda m: (len(m), sorted(m)))]


def limit_cut_meet(X: Cut, bound: int | None = None) -> tuple:
    """⋀{b̂ ⊖ â : b ∈ uX, a ∈ X}, computed pointwise in the hat image."""
    A = X.parent
    D = max_space(A, bound)
    sig = D.space.signature
    acc = sig.one
    for b in upper_bounds(A, X.members):
        for a in X.members:
            acc = sig.meet(acc, sig.ominus(D.hat(b), D.hat(a)))
    return acc


def limit_cut_meet_in_algebra(X: Cut) -> tuple:
    """The same meet computed inside A."""
    A = X.parent
    sig = A.signature
    acc = sig.one
    for b in upper_bounds(A, X.members):
        for a in X.members:
            acc = sig.meet(acc, sig.ominus(b, a))
    return acc


def is_limit_cut(X: Cut, bound: int | None = None) -> bool:
    A = X.parent
    if not is_cut(A, X.members):
        raise InvalidStructureError("not a cut")
    return limit_cut_meet(X, bound) == max_space(A, bound).space.signature.zero


def limit_cut_partner(X: Cut, bound: int | None = None) -> Cut:
    """Y = (uX)*, verified to be a limit cut with ⋁X̂ = ⋀Ŷ*."""
    A = X.parent
    if not is_limit_cut(X, bound):
        raise InvalidStructureError("not a limit cut")
    sig = A.signature
    Y = frozenset(sig.neg(b) for b in upper_bounds(A, X.members))
    if not is_cut(A, Y):
        raise ConsistencyError("partner is not a cut")
    D = max_space(A, bound)
    hs = D.space.signature
    sup_x = hs.zero
    for a in X.members:
        sup_x = hs.join(sup_x, D.hat(a))
    inf_y = hs.one
    for y in Y:
        inf_y = hs.meet(inf_y, D.hat(sig.neg(y)))
    if sup_x != inf_y:
        raise ConsistencyError("⋁X̂ differs from ⋀Ŷ*")
    partner = Cut(A, Y)
    if not is_limit_cut(partner, bound):
        raise ConsistencyError("partner is not a limit cut")
    return partner


def is_lcc(A: FiniteMvAlgebra, bound: int | None = None, exhaustive_limit: int = EXHAUSTIVE_CUTS) -> Verdict:
    """Every limit cut has a supremum in A (and its hat-side supremum lies in Â)."""
    D = max_space(A, bound)
    hs = D.space.signature
    sig = A.signature
    hats = set(D.embedding.hat.values())
    cuts, census = all_cuts(A, exhaustive_limit)
    limit = 0
    for X in cuts:
        if not is_limit_cut(X, bound):
            continue
        limit += 1
        sup = sig.zero
        for a in X.members:
            sup = sig.join(sup, a)
        hsup = hs.zero
        for a in X.members:
            hsup = hs.join(hsup, D.hat(a))
        if sup not in A.carrier or hsup not in hats:
            return Verdict(False, "lcc", X.format(), dict(census, limit_cuts=limit))
    return Verdict(True, "lcc", None, dict(census, limit_cuts=limit))


def lc_completion(A: FiniteMvAlgebra, bound: int | None = None) -> FiniteMvAlgebra:
    """Clop Max A; at finite scale certified isomorphic to A."""
    C = clopen_algebra(max_space(A, bound).space)
    if find_isomorphism(A, C, bound) is None:
        raise ConsistencyError("lc-completion of a finite algebra is not isomorphic to it")
    return C


def lcc_extension(f: MvHomomorphism, bound: int | None = None) -> tuple[MvHomomorphism, int]:
    """Extend f : A → B to Clop Max A → Clop Max B through the unit isomorphisms.

    Returns the extension and the number of homomorphisms that agree with f on Â
    (uniqueness means this count is 1).
    """
    ua = unit_iso_algebra(f.domain, bound)
    ub = unit_iso_algebra(f.codomain, bound)
    ext = ub.compose(f).compose(ua.inverse())
    if not ext.verify():
        raise ConsistencyError("extension is not a homomorphism")
    agree = 0
    for g in enumerate_homomorphisms(ua.codomain, ub.codomain):
        if all(g(ua(a)) == ub(f(a)) for a in f.domain.elements):
            agree += 1
    return ext, agree


def check_sfc(A: FiniteMvAlgebra, bound: int | None = None) -> Verdict:
    """Every A/M is a complete chain; finite chains always are, so this checks chain-ness."""
    orders = []
    for q in chain_quotients(A, bound):
        Q = quotient(A, q.ideal, bound).algebra
        if not is_chain(Q):
            return Verdict(False, "sfc", q.ideal.format())
        orders.append(len(Q))
    return Verdict(True, "sfc", tuple(orders))


def check_liminary_duality(A: FiniteMvAlgebra, bound: int | None = None) -> Verdict:
    """liminary A ⇒ Max A strongly compact ⇒ Clop Max A liminary ⇒ A lcc, each leg computed."""
    lim = is_liminary(A, bound)
    D = max_space(A, bound)
    sc = is_strongly_compact(D.space)
    lim_c = is_liminary(clopen_algebra(D.space), bound)
    lcc = is_lcc(A, bound)
    legs = [(lim.ok, sc.ok), (sc.ok, lim_c.ok), (lim_c.ok, lcc.ok)]
    ok = all(not p or q for p, q in legs)
    return Verdict(ok, "liminary-duality", None,
                   {"liminary": lim.ok, "strongly_compact": sc.ok, "clop_liminary": lim_c.ok, "lcc": lcc.ok})


def interval_image_check(A: FiniteMvAlgebra, bound: int | None = None) -> Verdict:
    """ι([a, b]) = [â, b̂] ∩ Â for all a ≤ b, so a dense interval image is the whole interval."""
    D = max_space(A, bound)
    hs = D.space.signature
    leq = A.signature.leq
    hats = list(D.embedding.hat.items())
    for a in A.elements:
        for b in A.elements:
            if not leq(a, b):
                continue
            img = {D.hat(c) for c in A.elements if leq(a, c) and leq(c, b)}
            box = {h for _, h in hats if hs.leq(D.hat(a), h) and hs.leq(h, D.hat(b))}
            if img != box:
                return Verdict(False, "interval-image", (a, b))
    return Verdict(True, "interval-image")
