"""Finite MV-topological spaces.

An MV-topology on a finite set X over the chain Łₙ is a finite family Ω of
membership tables. Because Ω is finite, closure under arbitrary joins is the
same as containing 0 (the empty join) and being closed under binary ∨; every
check in this module relies on that reduction.

Tables are numerator tuples aligned with the universe. Public functions also
accept :class:`FuzzySubset` values wherever a table is expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .algebra import FiniteMvAlgebra
from .core import (
    Chain,
    FuzzySubset,
    PointMap,
    ProductSignature,
    Verdict,
    common_order,
    image_table,
    preimage_table,
    regrid,
)
from .errors import ConsistencyError, InvalidStructureError, ResourceBoundError, UniverseMismatchError

COVERING_LIMIT = 200_000


def _table(x) -> tuple:
    return x.values if isinstance(x, FuzzySubset) else tuple(x)


@dataclass(frozen=True)
class MvTopology:
    universe: tuple
    chain: Chain
    opens: frozenset

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "opens", frozenset(_table(o) for o in self.opens))
        if not self.universe:
            raise InvalidStructureError("empty universe")
        v = check_mv_topology(self.universe, self.chain, self.opens)
        if not v:
            raise InvalidStructureError(f"not an MV-topology: {v.witness}")

    @cached_property
    def signature(self) -> ProductSignature:
        return ProductSignature.power(self.chain.order, len(self.universe))

    @cached_property
    def tables(self) -> tuple:
        return tuple(sorted(self.opens))

    @property
    def order(self) -> int:
        return self.chain.order

    def members(self) -> list[FuzzySubset]:
        return [FuzzySubset(self.universe, self.chain, t) for t in self.tables]

    def fuzzy(self, table) -> FuzzySubset:
        return FuzzySubset(self.universe, self.chain, table)

    def regrid(self, order: int) -> MvTopology:
        """The same space with every table re-expressed on a finer chain."""
        if order == self.order:
            return self
        return MvTopology(self.universe, Chain(order),
                          frozenset(regrid(t, self.order, order) for t in self.opens))

    def fmt(self, table) -> str:
        return self.signature.format(table) if len(self.universe) > 1 else f"({self.signature.format(table)})"

    def __len__(self) -> int:
        return len(self.opens)


# -- construction and axioms ------------------------------------------------


def check_mv_topology(universe, chain: Chain, opens: Iterable) -> Verdict:
    """Check the five open-set axioms; the witness names the failed clause and operands."""
    sig = ProductSignature.power(chain.order, len(tuple(universe)))
    fam = frozenset(_table(o) for o in opens)
    for t in fam:
        if not sig.contains(t):
            return Verdict(False, "mv-topology", ("table", t))
    if sig.zero not in fam or sig.one not in fam:
        return Verdict(False, "mv-topology", ("i", sig.zero if sig.zero not in fam else sig.one))
    ordered = sorted(fam)
    for clause, op in (("ii", sig.join), ("iii", sig.odot), ("iv", sig.oplus), ("v", sig.meet)):
        for i, a in enumerate(ordered):
            for b in ordered[i:]:
                if op(a, b) not in fam:
                    return Verdict(False, "mv-topology", (clause, a, b))
    return Verdict(True, "mv-topology")


def close_under(tables: Iterable, ops) -> frozenset:
    """Fixpoint closure of a family under the given binary operations."""
    fam = list(dict.fromkeys(tables))
    seen = set(fam)
    i = 0
    while i < len(fam):
        a = fam[i]
        for b in fam[: i + 1]:
            for op in ops:
                c = op(a, b)
                if c not in seen:
                    seen.add(c)
                    fam.append(c)
        i += 1
    return frozenset(fam)


def indiscrete(universe, chain: Chain) -> MvTopology:
    n = len(tuple(universe))
    return MvTopology(universe, chain, {(0,) * n, (chain.top,) * n})


def discrete_crisp(universe, chain: Chain) -> MvTopology:
    n = len(tuple(universe))
    return MvTopology(universe, chain, {tuple(chain.top * b for b in bits) for bits in product((0, 1), repeat=n)})


def full_topology(universe, chain: Chain) -> MvTopology:
    n = len(tuple(universe))
    return MvTopology(universe, chain, set(product(range(chain.order), repeat=n)))


def constant_topology(universe, chain: Chain) -> MvTopology:
    n = len(tuple(universe))
    return MvTopology(universe, chain, {(k,) * n for k in range(chain.order)})


@dataclass(frozen=True)
class ClosedFamily:
    universe: tuple
    chain: Chain
    closeds: frozenset


def closed_sets(tau: MvTopology) -> ClosedFamily:
    sig = tau.signature
    return ClosedFamily(tau.universe, tau.chain, frozenset(sig.neg(o) for o in tau.opens))


def check_closed_family(fam: ClosedFamily) -> Verdict:
    sig = ProductSignature.power(fam.chain.order, len(fam.universe))
    cl = fam.closeds
    if sig.zero not in cl or sig.one not in cl:
        return Verdict(False, "closed-family", ("constants",))
    ordered = sorted(cl)
    for name, op in (("meet", sig.meet), ("odot", sig.odot), ("oplus", sig.oplus), ("join", sig.join)):
        for i, a in enumerate(ordered):
            for b in ordered[i:]:
                if op(a, b) not in cl:
                    return Verdict(False, "closed-family", (name, a, b))
    return Verdict(True, "closed-family")


def clopen_algebra(tau: MvTopology) -> FiniteMvAlgebra:
    """Clop τ = Ω ∩ Ξ as a subalgebra of Łₙ^X."""
    clop = tau.opens & closed_sets(tau).closeds
    return FiniteMvAlgebra(tau.signature, clop)


def generate_from_base(universe, chain: Chain, base: Iterable) -> MvTopology:
    """The topology whose opens are the joins of subfamilies of a base.

    The base must cover X and be closed under ⊕, ⊙ and ∧.
    """
    universe = tuple(universe)
    sig = ProductSignature.power(chain.order, len(universe))
    gamma = frozenset(_table(b) for b in base)
    top = chain.top
    for t in gamma:
        sig.check(t)
    for i, x in enumerate(universe):
        if not any(t[i] == top for t in gamma):
            raise InvalidStructureError(f"base is not a covering: point {x!r} is not covered")
    ordered = sorted(gamma)
    for name, op in (("oplus", sig.oplus), ("odot", sig.odot), ("meet", sig.meet)):
        for a in ordered:
            for b in ordered:
                if op(a, b) not in gamma:
                    raise InvalidStructureError(f"base not closed under {name}: {sig.format(a)}, {sig.format(b)}")
    opens = close_under(list(gamma) + [sig.zero], [sig.join])
    return MvTopology(universe, chain, opens)


def is_base(tau: MvTopology, base: Iterable) -> bool:
    """Θ ⊆ Ω and every open is the join of the members of Θ below it."""
    sig = tau.signature
    theta = [_table(b) for b in base]
    if not all(t in tau.opens for t in theta):
        return False
    for o in tau.opens:
        acc = sig.zero
        for t in theta:
            if sig.leq(t, o):
                acc = sig.join(acc, t)
        if acc != o:
            return False
    return True


def skeleton(tau: MvTopology) -> MvTopology:
    """Crisp opens; cross-checked against the Baaz-delta image of Ω."""
    sig = tau.signature
    crisp = frozenset(o for o in tau.opens if sig.is_boolean(o))
    deltas = frozenset(sig.delta(o) for o in tau.opens)
    if crisp != deltas:
        raise ConsistencyError("Ω ∩ {0,1}^X differs from {Δ∘α : α ∈ Ω}")
    return MvTopology(tau.universe, tau.chain, crisp)


def subspace(tau: MvTopology, Y: Iterable) -> MvTopology:
    keep = set(Y)
    if not keep:
        raise InvalidStructureError("subspace needs a nonempty point set")
    if not keep <= set(tau.universe):
        raise UniverseMismatchError("subspace points outside the universe")
    idx = [i for i, x in enumerate(tau.universe) if x in keep]
    return MvTopology(tuple(tau.universe[i] for i in idx), tau.chain,
                      frozenset(tuple(o[i] for i in idx) for o in tau.opens))


# -- coverings and compactness ----------------------------------------------


def is_covering(sig: ProductSignature, family: Iterable) -> bool:
    acc = sig.zero
    for t in family:
        acc = sig.join(acc, _table(t))
    return acc == sig.one


def is_additive_covering(sig: ProductSignature, family: Iterable) -> bool:
    """``family`` holds tables or (table, multiplicity) pairs; true iff the ⊕-sum is 1."""
    acc = sig.zero
    for item in family:
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], (tuple, FuzzySubset)):
            t, m = _table(item[0]), item[1]
        else:
            t, m = _table(item), 1
        acc = sig.oplus(acc, sig.multiple(m, t))
    return acc == sig.one


def extract_additive_subcover(sig: ProductSignature, family: Iterable, bound: int = 12) -> tuple | None:
    """A finite multiset from a covering whose ⊕-sum is 1, as ((table, multiplicity), ...).

    Tries a greedy per-point pass first, then an exhaustive search over
    multiplicity vectors (each capped at n-1) when the family has at most
    ``bound`` members. Returns None for non-coverings.
    """
    gamma = sorted(dict.fromkeys(_table(t) for t in family))
    if not is_covering(sig, gamma):
        return None
    top = sig.tops
    chosen: dict = {}
    acc = sig.zero
    for i in range(len(sig)):
        if acc[i] == top[i]:
            continue
        best = max(gamma, key=lambda t: t[i])
        need = -(-(top[i] - acc[i]) // best[i]) if best[i] else 0
        if need:
            chosen[best] = chosen.get(best, 0) + need
            acc = sig.oplus(acc, sig.multiple(need, best))
    if acc == sig.one:
        return tuple(sorted(chosen.items()))
    if len(gamma) > bound:
        raise ResourceBoundError(f"exhaustive subcover search over {len(gamma)} members exceeds {bound}")
    cap = max(sig.orders) - 1
    for mults in product(range(cap + 1), repeat=len(gamma)):
        if is_additive_covering(sig, [(t, m) for t, m in zip(gamma, mults) if m]):
            return tuple((t, m) for t, m in zip(gamma, mults) if m)
    return None


def minimal_open_coverings(tau: MvTopology, limit: int = COVERING_LIMIT) -> Iterator[tuple]:
    """Every ⊆-minimal subfamily of Ω whose join is 1.

    A family covers iff the points where its members reach 1 exhaust X, so a
    minimal covering picks one open per top-set in a minimal set cover of X.
    """
    n = len(tau.universe)
    top = tau.chain.top
    groups: dict = {}
    for o in tau.tables:
        ts = frozenset(i for i in range(n) if o[i] == top)
        if ts:
            groups.setdefault(ts, []).append(o)
    topsets = sorted(groups, key=lambda s: (len(s), sorted(s)))
    full = frozenset(range(n))
    covers = []

    def search(chosen: list, covered: frozenset):
        if covered == full:
            if all(frozenset().union(*(c for c in chosen if c != s)) != full for s in chosen):
                covers.append(tuple(chosen))
            return
        p = min(full - covered)
        for s in topsets:
            if p in s and s not in chosen:
                search(chosen + [s], covered | s)

    search([], frozenset())
    seen = set()
    emitted = 0
    for cover in covers:
        key = frozenset(cover)
        if key in seen:
            continue
        seen.add(key)
        total = 1
        for s in cover:
            total *= len(groups[s])
        emitted += total
        if emitted > limit:
            raise ResourceBoundError(f"more than {limit} minimal open coverings")
        yield from product(*(groups[s] for s in cover))


def is_compact(tau: MvTopology) -> Verdict:
    """Every open covering contains an additive covering (checked on all minimal coverings)."""
    sig = tau.signature
    certs = []
    for cov in minimal_open_coverings(tau):
        sub = extract_additive_subcover(sig, cov)
        if sub is None:
            return Verdict(False, "compact", cov)
        certs.append((cov, sub))
    return Verdict(True, "compact", len(certs), {"semantics": "finite-scale", "certificates": certs})


def is_strongly_compact(tau: MvTopology) -> Verdict:
    """Every open covering contains a finite covering (each minimal one is its own)."""
    sig = tau.signature
    count = 0
    for cov in minimal_open_coverings(tau):
        if not is_covering(sig, cov):
            return Verdict(False, "strongly-compact", cov)
        count += 1
    return Verdict(True, "strongly-compact", count, {"semantics": "finite-scale"})


# -- separation -------------------------------------------------------------


def _separate(tau: MvTopology, zero_op) -> tuple[bool, dict, tuple | None]:
    sig = tau.signature
    top = tau.chain.top
    n = len(tau.universe)
    at_top = [[o for o in tau.tables if o[i] == top] for i in range(n)]
    witnesses = {}
    for i, j in combinations(range(n), 2):
        found = None
        for ox in at_top[i]:
            for oy in at_top[j]:
                if zero_op(ox, oy) == sig.zero:
                    found = (ox, oy)
                    break
            if found:
                break
        if found is None:
            return False, witnesses, (tau.universe[i], tau.universe[j])
        witnesses[(tau.universe[i], tau.universe[j])] = found
    return True, witnesses, None


def is_hausdorff(tau: MvTopology) -> Verdict:
    """Separation by opens with o_x(x) = o_y(y) = 1 and o_x ∧ o_y = 0.

    On success the witness maps each point pair to its separating opens; on
    failure it is the first unseparated pair.
    """
    ok, wit, bad = _separate(tau, tau.signature.meet)
    return Verdict(ok, "hausdorff", wit if ok else bad)


def is_hausdorff_odot(tau: MvTopology) -> Verdict:
    """The same separation with o_x ⊙ o_y = 0 in place of the meet."""
    ok, wit, bad = _separate(tau, tau.signature.odot)
    return Verdict(ok, "hausdorff-odot", wit if ok else bad)


def crisp_singletons_closed(tau: MvTopology) -> bool:
    sig = tau.signature
    top = tau.chain.top
    n = len(tau.universe)
    for i in range(n):
        single = tuple(top if j == i else 0 for j in range(n))
        if sig.neg(single) not in tau.opens:
            return False
    return True


def is_zero_dimensional(tau: MvTopology) -> Verdict:
    """Every open is the join of the clopens below it."""
    sig = tau.signature
    clop = clopen_algebra(tau).elements
    for o in tau.tables:
        acc = sig.zero
        for c in clop:
            if sig.leq(c, o):
                acc = sig.join(acc, c)
        if acc != o:
            return Verdict(False, "zero-dimensional", o)
    return Verdict(True, "zero-dimensional")


def is_stone_mv_space(tau: MvTopology) -> Verdict:
    comp = is_compact(tau)
    haus = is_hausdorff(tau)
    zd = is_zero_dimensional(tau)
    if haus and not crisp_singletons_closed(tau):
        raise ConsistencyError("Hausdorff space with a non-closed crisp singleton")
    ok = bool(comp) and bool(haus) and bool(zd)
    failed = [v.check for v in (comp, haus, zd) if not v]
    return Verdict(ok, "stone-mv-space", tuple(failed),
                   {"compact": comp.ok, "hausdorff": haus.ok, "zero-dimensional": zd.ok,
                    "semantics": "finite-scale"})


def is_classical_stone_space(tau: MvTopology) -> Verdict:
    """A crisp topology that is compact, Hausdorff and has a clopen base."""
    sig = tau.signature
    if not all(sig.is_boolean(o) for o in tau.opens):
        return Verdict(False, "stone-space", "not crisp")
    v = is_stone_mv_space(tau)
    return Verdict(v.ok, "stone-space", v.witness)


# -- maps -------------------------------------------------------------------


def _aligned(tau: MvTopology, sigma: MvTopology) -> tuple[MvTopology, MvTopology]:
    if tau.order == sigma.order:
        return tau, sigma
    m = common_order(tau.order, sigma.order)
    return tau.regrid(m), sigma.regrid(m)


def _check_map(f: PointMap, tau: MvTopology, sigma: MvTopology) -> None:
    if f.source != tau.universe or f.target != sigma.universe:
        raise UniverseMismatchError("map does not go between the given spaces")


def check_continuous(f: PointMap, tau: MvTopology, sigma: MvTopology, via: str = "opens") -> Verdict:
    """f⇐[Ω_Y] ⊆ Ω_X (``via="opens"``) or the equivalent f⇐[Ξ_Y] ⊆ Ξ_X (``via="closeds"``)."""
    _check_map(f, tau, sigma)
    tau, sigma = _aligned(tau, sigma)
    if via == "opens":
        src, dst = sigma.tables, tau.opens
    elif via == "closeds":
        src, dst = sorted(closed_sets(sigma).closeds), closed_sets(tau).closeds
    else:
        raise ValueError(f"unknown continuity form {via!r}")
    for o in src:
        if preimage_table(f, o) not in dst:
            return Verdict(False, "continuous", o)
    if via == "opens":
        sk_x = skeleton(tau).opens
        for o in skeleton(sigma).tables:
            if preimage_table(f, o) not in sk_x:
                raise ConsistencyError("continuous map is not continuous between skeletons")
    return Verdict(True, "continuous")


def check_continuous_via_base(f: PointMap, tau: MvTopology, base: Iterable, base_order: int) -> Verdict:
    """f⇐[Θ] ⊆ Ω_X for a base Θ of the codomain, given on the chain of ``base_order``."""
    if f.source != tau.universe:
        raise UniverseMismatchError("map source differs from the space")
    m = common_order(tau.order, base_order)
    opens = tau.regrid(m).opens
    for t in sorted(_table(b) for b in base):
        if len(t) != len(f.target):
            raise UniverseMismatchError("base table not over the map's target")
        if preimage_table(f, regrid(t, base_order, m)) not in opens:
            return Verdict(False, "continuous-via-base", t)
    return Verdict(True, "continuous-via-base")


def is_open_map(f: PointMap, tau: MvTopology, sigma: MvTopology) -> Verdict:
    _check_map(f, tau, sigma)
    tau, sigma = _aligned(tau, sigma)
    for o in tau.tables:
        if image_table(f, o) not in sigma.opens:
            return Verdict(False, "open-map", o)
    return Verdict(True, "open-map")


def is_closed_map(f: PointMap, tau: MvTopology, sigma: MvTopology) -> Verdict:
    _check_map(f, tau, sigma)
    tau, sigma = _aligned(tau, sigma)
    closed_y = closed_sets(sigma).closeds
    for c in sorted(closed_sets(tau).closeds):
        if image_table(f, c) not in closed_y:
            return Verdict(False, "closed-map", c)
    return Verdict(True, "closed-map")


def is_homeomorphism(f: PointMap, tau: MvTopology, sigma: MvTopology) -> Verdict:
    if not f.is_bijective:
        return Verdict(False, "homeomorphism", "not bijective")
    fwd = check_continuous(f, tau, sigma)
    if not fwd:
        return Verdict(False, "homeomorphism", ("forward", fwd.witness))
    back = check_continuous(f.inverse(), sigma, tau)
    if not back:
        return Verdict(False, "homeomorphism", ("inverse", back.witness))
    return Verdict(True, "homeomorphism")


# -- metric balls -----------------------------------------------------------


def check_metric(universe, d: Mapping) -> Verdict:
    """``d`` maps ordered or unordered point pairs to non-negative rationals."""
    pts = tuple(universe)

    def dist(x, y):
        if x == y:
            return Fraction(d.get((x, x), 0))
        if (x, y) in d:
            return Fraction(d[(x, y)])
        if (y, x) in d:
            return Fraction(d[(y, x)])
        raise InvalidStructureError(f"distance between {x!r} and {y!r} missing")

    for x in pts:
        if dist(x, x) != 0:
            return Verdict(False, "metric", ("identity", x))
    for x, y in combinations(pts, 2):
        if dist(x, y) <= 0:
            return Verdict(False, "metric", ("positivity", x, y))
        if (x, y) in d and (y, x) in d and Fraction(d[(x, y)]) != Fraction(d[(y, x)]):
            return Verdict(False, "metric", ("symmetry", x, y))
    for x, y, z in product(pts, repeat=3):
        if dist(x, z) > dist(x, y) + dist(y, z):
            return Verdict(False, "metric", ("triangle", x, y, z))
    return Verdict(True, "metric", None, {"dist": {(x, y): dist(x, y) for x in pts for y in pts}})


def open_ball(universe, dist: Mapping, center, value: int, radius) -> tuple:
    """β_r(α) for the fuzzy point α with support ``center`` and numerator ``value``."""
    r = Fraction(radius)
    return tuple(value if dist[(center, y)] < r else 0 for y in universe)


@dataclass(frozen=True)
class BallTopologies:
    balls: frozenset
    closed_base: frozenset
    topology: MvTopology
    literal_family: frozenset
    literal_verdict: Verdict = field(compare=False)


def metric_ball_base(universe, d: Mapping, chain: Chain, radii: Iterable) -> BallTopologies:
    """Open balls of all fuzzy points and radii, and the two topologies built from them.

    ``topology`` closes the balls under ⊕, ⊙ and ∧ before taking joins;
    ``literal_family`` is the plain join-closure of the balls, checked separately.
    """
    universe = tuple(universe)
    mv = check_metric(universe, d)
    if not mv:
        raise InvalidStructureError(f"not a metric: {mv.witness}")
    dist = mv.details["dist"]
    radii = [Fraction(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise InvalidStructureError("radii must be positive")
    sig = ProductSignature.power(chain.order, len(universe))
    balls = frozenset(open_ball(universe, dist, x, v, r)
                      for x in universe for v in range(1, chain.order) for r in radii)
    gamma = set(balls)
    if not is_covering(sig, gamma):
        gamma.add(sig.one)
    closed = close_under(gamma, [sig.oplus, sig.odot, sig.meet])
    tau = generate_from_base(universe, chain, closed)
    literal = close_under(list(balls) + [sig.zero], [sig.join])
    return BallTopologies(balls, closed, tau, literal, check_mv_topology(universe, chain, literal))
