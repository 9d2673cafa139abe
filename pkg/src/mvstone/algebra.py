"""Finite MV-algebras as explicit carriers inside products of Łukasiewicz chains.

Elements are numerator tuples over a :class:`ProductSignature`; operations are
coordinatewise. Everything that enumerates (ideals, homomorphisms) respects a
size bound and raises :class:`ResourceBoundError` past it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import prod
from typing import Iterable, Iterator

from .core import ProductSignature, Verdict, common_order
from .errors import ConsistencyError, InvalidStructureError, ResourceBoundError

DEFAULT_BOUND = 64


@dataclass(frozen=True)
class FiniteMvAlgebra:
    signature: ProductSignature
    carrier: frozenset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        sig = self.signature
        object.__setattr__(self, "carrier", frozenset(tuple(a) for a in self.carrier))
        for a in self.carrier:
            sig.check(a)
        if sig.zero not in self.carrier or sig.one not in self.carrier:
            raise InvalidStructureError("carrier must contain 0 and 1")
        for a in self.carrier:
            if sig.neg(a) not in self.carrier:
                raise InvalidStructureError(f"carrier not closed under *: {sig.format(a)}")
        els = self.elements
        for i, a in enumerate(els):
            for b in els[i:]:
                if sig.oplus(a, b) not in self.carrier:
                    raise InvalidStructureError(
                        f"carrier not closed under ⊕: {sig.format(a)} ⊕ {sig.format(b)}")

    @cached_property
    def elements(self) -> tuple:
        """Carrier in canonical (lexicographic numerator) order."""
        return tuple(sorted(self.carrier))

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, a) -> bool:
        return a in self.carrier

    def __iter__(self):
        return iter(self.elements)

    @property
    def zero(self):
        return self.signature.zero

    @property
    def one(self):
        return self.signature.one

    @property
    def is_full_product(self) -> bool:
        return len(self.carrier) == self.signature.size

    @property
    def is_boolean(self) -> bool:
        return all(self.signature.is_boolean(a) for a in self.carrier)

    def down(self, t) -> frozenset:
        leq = self.signature.leq
        return frozenset(a for a in self.carrier if leq(a, t))

    def fmt(self, a) -> str:
        return self.signature.format(a)

    def __str__(self) -> str:
        return self.name or f"<{len(self)}-element subalgebra of {self.signature}>"


def _closure(sig: ProductSignature, generators: Iterable) -> tuple[list, list]:
    """Closure of generators ∪ {0} under ⊕ and *, with a derivation for each element.

    Derivations reference earlier positions: ("zero",), ("gen", i), ("neg", j), ("oplus", j, l).
    """
    elements, recipes, index = [], [], {}

    def add(a, recipe):
        if a not in index:
            index[a] = len(elements)
            elements.append(a)
            recipes.append(recipe)

    add(sig.zero, ("zero",))
    for i, g in enumerate(generators):
        add(sig.check(g), ("gen", i))
    done = 0
    while done < len(elements):
        j = done
        a = elements[j]
        add(sig.neg(a), ("neg", j))
        for l in range(j + 1):
            add(sig.oplus(a, elements[l]), ("oplus", j, l))
        done += 1
    return elements, recipes


def generate_subalgebra(signature: ProductSignature, generators: Iterable = (), name: str = "") -> FiniteMvAlgebra:
    """Least subalgebra of the chain product containing the generators."""
    elements, _ = _closure(signature, list(generators))
    return FiniteMvAlgebra(signature, frozenset(elements), name)


def full_product(*orders: int, name: str = "") -> FiniteMvAlgebra:
    sig = ProductSignature(tuple(orders))
    return FiniteMvAlgebra(sig, frozenset(sig.all_elements()), name or "×".join(f"L{n}" for n in orders))


def boolean_algebra(k: int) -> FiniteMvAlgebra:
    """The powerset algebra 2^k as Ł₂^k."""
    return full_product(*([2] * k), name=f"2^{k}")


def boolean_center(A: FiniteMvAlgebra) -> FiniteMvAlgebra:
    sig = A.signature
    idem = frozenset(a for a in A.carrier if sig.oplus(a, a) == a)
    return FiniteMvAlgebra(sig, idem, f"B({A})" if A.name else "")


# -- ideals -----------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    parent: FiniteMvAlgebra = field(compare=False, repr=False)
    members: frozenset

    @property
    def is_proper(self) -> bool:
        return self.parent.one not in self.members

    @cached_property
    def sorted_members(self) -> tuple:
        return tuple(sorted(self.members))

    def __contains__(self, a) -> bool:
        return a in self.members

    def __len__(self) -> int:
        return len(self.members)

    def format(self) -> str:
        return "{" + ", ".join(self.parent.fmt(a) for a in self.sorted_members) + "}"


@dataclass(frozen=True)
class MaximalIdeal(Ideal):
    """A maximal ideal with, for every non-member a, the least n such that (a*)ⁿ is a member."""

    certificate: tuple = field(default=(), compare=False, repr=False)


def generate_ideal(A: FiniteMvAlgebra, S: Iterable = ()) -> Ideal:
    """Least ideal containing S: everything below some n-fold ⊕-multiple of ⊕S."""
    sig = A.signature
    t = sig.zero
    for s in S:
        if s not in A.carrier:
            raise InvalidStructureError(f"{sig.format(s)} is not in the algebra")
        t = sig.oplus(t, s)
    while (t2 := sig.oplus(t, t)) != t:
        t = t2
    return Ideal(A, A.down(t))


def is_ideal(A: FiniteMvAlgebra, members) -> bool:
    sig = A.signature
    members = frozenset(members)
    if sig.zero not in members:
        return False
    for b in members:
        if A.down(b) - members:
            return False
        for c in members:
            if sig.oplus(b, c) not in members:
                return False
    return True


def _check_bound(A: FiniteMvAlgebra, bound: int | None) -> None:
    bound = DEFAULT_BOUND if bound is None else bound
    if len(A) > bound and not A.is_full_product:
        raise ResourceBoundError(f"algebra has {len(A)} elements, enumeration bound is {bound}")


@lru_cache(maxsize=512)
def _ideal_sets(A: FiniteMvAlgebra, shortcut: bool) -> tuple:
    if shortcut:
        # ideals of a full product are products of {0} / whole-chain coordinate ideals
        k = len(A.signature)
        out = set()
        for keep in product((False, True), repeat=k):
            out.add(frozenset(a for a in A.carrier if all(k_ or x == 0 for k_, x in zip(keep, a))))
        return tuple(sorted(out, key=lambda m: (len(m), sorted(m))))
    # every ideal of a finite algebra is generated by the ⊕-sum of its members,
    # so principal generation from each element reaches all of them
    seen = {generate_ideal(A, [a]).members for a in A.elements}
    return tuple(sorted(seen, key=lambda m: (len(m), sorted(m))))


def all_ideals(A: FiniteMvAlgebra, bound: int | None = None) -> list[Ideal]:
    _check_bound(A, bound)
    limit = DEFAULT_BOUND if bound is None else bound
    return [Ideal(A, m) for m in _ideal_sets(A, len(A) > limit)]


def _power_certificate(A: FiniteMvAlgebra, members: frozenset) -> tuple | None:
    """For each a outside ``members``, the least n with (a*)ⁿ ∈ members; None if some a has none."""
    sig = A.signature
    cap = max(sig.orders)
    cert = []
    for a in A.elements:
        if a in members:
            continue
        na = sig.neg(a)
        for n in range(1, cap + 1):
            if sig.power_of(na, n) in members:
                cert.append((a, n))
                break
        else:
            return None
    return tuple(cert)


def certify_maximal(A: FiniteMvAlgebra, members) -> MaximalIdeal | None:
    """Return a certified maximal ideal, or None if ``members`` is not a maximal ideal."""
    members = frozenset(members)
    if A.one in members or not is_ideal(A, members):
        return None
    cert = _power_certificate(A, members)
    if cert is None:
        return None
    return MaximalIdeal(A, members, cert)


@lru_cache(maxsize=512)
def _maximal(A: FiniteMvAlgebra, bound: int) -> tuple:
    ideals = [I.members for I in all_ideals(A, bound) if I.is_proper]
    maxes = [m for m in ideals if not any(m < other for other in ideals)]
    out = []
    for m in sorted(maxes, key=lambda m: sorted(m)):
        M = certify_maximal(A, m)
        if M is None:
            raise ConsistencyError("maximal ideal failed its power certificate")
        out.append(M)
    return tuple(out)


def maximal_ideals(A: FiniteMvAlgebra, bound: int | None = None) -> list[MaximalIdeal]:
    """Max A in canonical order (lexicographic on sorted member lists)."""
    _check_bound(A, bound)
    return list(_maximal(A, DEFAULT_BOUND if bound is None else bound))


def prime_ideals(A: FiniteMvAlgebra, bound: int | None = None) -> list[Ideal]:
    sig = A.signature
    out = []
    for I in all_ideals(A, bound):
        if not I.is_proper:
            continue
        if all(a in I or b in I
               for a in A.elements for b in A.elements if sig.meet(a, b) in I):
            out.append(I)
    return out


def radical(A: FiniteMvAlgebra, bound: int | None = None) -> Ideal:
    maxes = maximal_ideals(A, bound)
    members = frozenset.intersection(*(M.members for M in maxes))
    return Ideal(A, members)


def is_semisimple(A: FiniteMvAlgebra, bound: int | None = None) -> bool:
    return radical(A, bound).members == {A.zero}


# -- quotients --------------------------------------------------------------


def congruence_classes(A: FiniteMvAlgebra, I: Ideal) -> dict:
    """Map each element to its class representative (the least element of its class)."""
    sig = A.signature
    groups: list[list] = []
    for a in A.elements:
        for g in groups:
            if sig.distance(a, g[0]) in I.members:
                g.append(a)
                break
        else:
            groups.append([a])
    rep = {}
    for g in groups:
        r = g[0]
        for a in g[1:]:
            r = sig.meet(r, a)
        if r not in g:
            raise ConsistencyError("congruence class is not closed under meets")
        for a in g:
            rep[a] = r
    return rep


@dataclass(frozen=True)
class ChainQuotient:
    """A/M for a maximal ideal M, read as the chain Łₖ: ``position[a]`` is a/M's numerator."""

    ideal: MaximalIdeal
    order: int
    position: dict = field(compare=False, repr=False)


def chain_quotient(A: FiniteMvAlgebra, M: Ideal) -> ChainQuotient:
    sig = A.signature
    rep = congruence_classes(A, M)
    reps = sorted(set(rep.values()))
    below = {r: [s for s in reps if sig.ominus(s, r) in M.members] for r in reps}
    for r in reps:
        for s in reps:
            if s not in below[r] and r not in below[s]:
                raise InvalidStructureError("quotient is not a chain; ideal is not maximal")
    rank = {r: len(below[r]) - 1 for r in reps}
    return ChainQuotient(M, len(reps), {a: rank[rep[a]] for a in A.elements})


@lru_cache(maxsize=512)
def _chain_quotients(A: FiniteMvAlgebra, bound: int) -> tuple:
    return tuple(chain_quotient(A, M) for M in maximal_ideals(A, bound))


def chain_quotients(A: FiniteMvAlgebra, bound: int | None = None) -> list[ChainQuotient]:
    _check_bound(A, bound)
    return list(_chain_quotients(A, DEFAULT_BOUND if bound is None else bound))


@dataclass(frozen=True)
class Quotient:
    algebra: FiniteMvAlgebra
    ideal: Ideal
    projection: dict = field(compare=False, repr=False)
    classes: dict = field(compare=False, repr=False)


def quotient(A: FiniteMvAlgebra, I: Ideal, bound: int | None = None) -> Quotient:
    """A/I realized inside ∏ A/M over the maximal ideals M ⊇ I.

    ``classes`` maps each class representative to its members; ``projection``
    sends each element of A to its image in the realized quotient algebra.
    """
    if not I.is_proper:
        raise InvalidStructureError("cannot take the quotient by an improper ideal")
    rep = congruence_classes(A, I)
    over = [q for q in chain_quotients(A, bound) if I.members <= q.ideal.members]
    sig = ProductSignature(tuple(q.order for q in over))
    proj = {a: tuple(q.position[a] for q in over) for a in A.elements}
    classes: dict = {}
    for a, r in rep.items():
        classes.setdefault(r, set()).add(a)
    if len(set(proj.values())) != len(classes):
        raise ConsistencyError("quotient realization is not injective on classes")
    for r, members in classes.items():
        if len({proj[a] for a in members}) != 1:
            raise ConsistencyError("realization splits a congruence class")
    alg = FiniteMvAlgebra(sig, frozenset(proj.values()), f"{A}/I" if A.name else "")
    return Quotient(alg, I, proj, {r: frozenset(m) for r, m in classes.items()})


def class_by_formula(A: FiniteMvAlgebra, I: Ideal, a) -> frozenset:
    """a/I computed as {(a ⊕ b) ⊙ c* : b, c ∈ I}."""
    sig = A.signature
    return frozenset(sig.odot(sig.oplus(a, b), sig.neg(c)) for b in I.members for c in I.members)


def is_chain(A: FiniteMvAlgebra) -> bool:
    leq = A.signature.leq
    els = A.elements
    return all(leq(a, b) or leq(b, a) for a in els for b in els)


# -- structural predicates --------------------------------------------------


def is_hyper_archimedean(A: FiniteMvAlgebra) -> Verdict:
    """Evaluate the three Archimedean conditions per element and check they agree.

    ``witness`` maps each element to the least n with n·a Boolean; the details
    carry the least n for each of the three conditions.
    """
    sig = A.signature
    cap = max(sig.orders)
    least = {"boolean": {}, "complement": {}, "stable": {}}
    for a in A.elements:
        na_ = sig.neg(a)
        for n in range(1, cap + 1):
            m = sig.multiple(n, a)
            if a not in least["boolean"] and sig.is_boolean(m):
                least["boolean"][a] = n
            if a not in least["complement"] and sig.join(na_, m) == sig.one:
                least["complement"][a] = n
            if a not in least["stable"] and m == sig.multiple(n + 1, a):
                least["stable"][a] = n
    have = [set(d) for d in least.values()]
    agree = have[0] == have[1] == have[2]
    if not agree:
        raise ConsistencyError("Archimedean conditions disagree")
    ok = len(have[0]) == len(A)
    return Verdict(ok, "hyper-archimedean", dict(least["boolean"]), {"least": least})


def is_liminary(A: FiniteMvAlgebra, bound: int | None = None) -> Verdict:
    """Every quotient by a prime ideal is finite (here: materialized and counted)."""
    # quotients of a finite algebra are finite; materializing each one is the check
    orders = tuple(len(quotient(A, P, bound).algebra) for P in prime_ideals(A, bound))
    return Verdict(True, "liminary", orders)


# -- the embedding into [0,1]^Max A ------------------------------------------


@dataclass(frozen=True)
class HatEmbedding:
    """a ↦ â with â(M) = ι_M(a/M); all values on the common chain of order ``order``."""

    algebra: FiniteMvAlgebra
    points: tuple
    ideals: tuple
    order: int
    hat: dict = field(compare=False, repr=False)
    quotient_orders: tuple = ()


def embed_max(A: FiniteMvAlgebra, bound: int | None = None) -> HatEmbedding:
    quots = chain_quotients(A, bound)
    m = common_order(*(q.order for q in quots))
    scale = [(m - 1) // (q.order - 1) for q in quots]
    hat = {a: tuple(q.position[a] * s for q, s in zip(quots, scale)) for a in A.elements}
    if len(set(hat.values())) != len(A):
        raise ConsistencyError("hat embedding is not injective")
    points = tuple(f"M{i}" for i in range(len(quots)))
    return HatEmbedding(A, points, tuple(q.ideal for q in quots), m, hat,
                        tuple(q.order for q in quots))


def chain_factorization(A: FiniteMvAlgebra, bound: int | None = None) -> tuple:
    """Sorted orders of the quotient chains A/M; certifies A ≅ ∏ A/M."""
    quots = chain_quotients(A, bound)
    orders = tuple(q.order for q in quots)
    images = {tuple(q.position[a] for q in quots) for a in A.elements}
    if len(images) != len(A) or len(A) != prod(orders):
        raise ConsistencyError("algebra is not the full product of its quotient chains")
    return tuple(sorted(orders))


# -- homomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class MvHomomorphism:
    domain: FiniteMvAlgebra
    codomain: FiniteMvAlgebra
    table: dict = field(compare=False)

    def __call__(self, a):
        return self.table[a]

    def verify(self) -> Verdict:
        """Exhaustively check totality and preservation of 0, ⊕ and *."""
        A, B = self.domain, self.codomain
        sa, sb = A.signature, B.signature
        h = self.table
        for a in A.elements:
            if a not in h or h[a] not in B.carrier:
                return Verdict(False, "homomorphism", ("total", a))
        if h[A.zero] != B.zero:
            return Verdict(False, "homomorphism", ("zero", A.zero))
        for a in A.elements:
            if h[sa.neg(a)] != sb.neg(h[a]):
                return Verdict(False, "homomorphism", ("neg", a))
        els = A.elements
        for i, a in enumerate(els):
            for b in els[i:]:
                if h[sa.oplus(a, b)] != sb.oplus(h[a], h[b]):
                    return Verdict(False, "homomorphism", ("oplus", a, b))
        return Verdict(True, "homomorphism")

    @property
    def is_bijective(self) -> bool:
        return len(set(self.table.values())) == len(self.domain) == len(self.codomain)

    def compose(self, inner: MvHomomorphism) -> MvHomomorphism:
        """self ∘ inner."""
        return MvHomomorphism(inner.domain, self.codomain,
                              {a: self.table[inner.table[a]] for a in inner.domain.elements})

    def inverse(self) -> MvHomomorphism:
        if not self.is_bijective:
            raise InvalidStructureError("not bijective")
        return MvHomomorphism(self.codomain, self.domain, {b: a for a, b in self.table.items()})

    def preimage(self, members) -> frozenset:
        members = frozenset(members)
        return frozenset(a for a in self.domain.elements if self.table[a] in members)


def identity_hom(A: FiniteMvAlgebra) -> MvHomomorphism:
    return MvHomomorphism(A, A, {a: a for a in A.elements})


def find_isomorphism(A: FiniteMvAlgebra, B: FiniteMvAlgebra, bound: int | None = None) -> MvHomomorphism | None:
    """A verified isomorphism A → B, or None.

    Rejects on differing quotient-chain multisets, otherwise aligns the maximal
    ideals of A and B by chain order and matches elements by their quotient
    coordinates.
    """
    if len(A) != len(B):
        return None
    qa = sorted(chain_quotients(A, bound), key=lambda q: q.order)
    qb = sorted(chain_quotients(B, bound), key=lambda q: q.order)
    if [q.order for q in qa] != [q.order for q in qb]:
        return None
    lookup = {tuple(q.position[b] for q in qb): b for b in B.elements}
    table = {}
    for a in A.elements:
        key = tuple(q.position[a] for q in qa)
        if key not in lookup:
            raise ConsistencyError("equal factorizations but no matching element")
        table[a] = lookup[key]
    h = MvHomomorphism(A, B, table)
    if not (h.is_bijective and h.verify()):
        raise ConsistencyError("aligned map is not an isomorphism")
    return h


def generating_set(A: FiniteMvAlgebra) -> list:
    """A small generating set, chosen greedily in canonical order."""
    gens: list = []
    have = generate_subalgebra(A.signature, gens).carrier
    for a in A.elements:
        if a not in have:
            gens.append(a)
            have = generate_subalgebra(A.signature, gens).carrier
            if len(have) == len(A):
                break
    return gens


def enumerate_homomorphisms(A: FiniteMvAlgebra, B: FiniteMvAlgebra, limit: int = 200_000) -> Iterator[MvHomomorphism]:
    """All homomorphisms A → B, by assigning images to a generating set of A."""
    gens = generating_set(A)
    if len(B) ** len(gens) > limit:
        raise ResourceBoundError(f"{len(B)}^{len(gens)} candidate assignments exceed {limit}")
    elements, recipes = _closure(A.signature, gens)
    sb = B.signature
    for images in product(B.elements, repeat=len(gens)):
        vals: list = []
        for rec in recipes:
            if rec[0] == "zero":
                vals.append(sb.zero)
            elif rec[0] == "gen":
                vals.append(images[rec[1]])
            elif rec[0] == "neg":
                vals.append(sb.neg(vals[rec[1]]))
            else:
                vals.append(sb.oplus(vals[rec[1]], vals[rec[2]]))
        h = MvHomomorphism(A, B, dict(zip(elements, vals)))
        if h.verify():
            yield h

