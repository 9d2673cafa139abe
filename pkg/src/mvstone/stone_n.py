"""Boolean algebras with ideal sequences, n-ary relations, and their Stone duals.

Elements of the powerset algebra 2^k are bitmasks over k atoms named
``a, b, c, ...``. Every ideal of a finite Boolean algebra is principal, so
ideal sequences are enumerated through their generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from string import ascii_lowercase

from .algebra import FiniteMvAlgebra, MvHomomorphism, boolean_algebra
from .core import Chain, PointMap, Verdict
from .duality import DualSpace, dualize_hom, max_space, unit_iso_space
from .errors import ConsistencyError, InvalidStructureError
from .topology import MvTopology, check_continuous, discrete_crisp


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    atoms: int

    def __post_init__(self):
        # the one-element algebra has no maximal ideals and hence an empty dual
        if self.atoms < 1 or self.atoms > len(ascii_lowercase):
            raise InvalidStructureError(f"atom count {self.atoms} out of range 1..26")

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    @property
    def elements(self) -> range:
        return range(1 << self.atoms)

    def __len__(self) -> int:
        return 1 << self.atoms

    def neg(self, a: int) -> int:
        return self.top ^ a

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & ~b == 0

    def down(self, a: int) -> frozenset:
        return frozenset(x for x in self.elements if x & ~a == 0)

    def is_ideal(self, members) -> bool:
        members = frozenset(members)
        if 0 not in members:
            return False
        for a in members:
            if not self.down(a) <= members:
                return False
            for b in members:
                if a | b not in members:
                    return False
        return True

    def generator(self, ideal) -> int:
        g = 0
        for a in ideal:
            g |= a
        return g

    def fmt(self, a: int) -> str:
        if a == 0:
            return "0"
        if a == self.top:
            return "1"
        return "|".join(ascii_lowercase[j] for j in range(self.atoms) if a >> j & 1)

    def parse(self, text: str) -> int:
        text = text.strip()
        if text == "0":
            return 0
        if text == "1":
            return self.top
        mask = 0
        for name in text.split("|"):
            name = name.strip()
            j = ascii_lowercase.find(name)
            if len(name) != 1 or j < 0 or j >= self.atoms:
                raise InvalidStructureError(f"unknown atom {name!r}")
            mask |= 1 << j
        return mask

    def as_mv(self) -> FiniteMvAlgebra:
        """The same algebra as Ł₂^k, bit j being coordinate j."""
        return boolean_algebra(self.atoms)

    def to_tuple(self, a: int) -> tuple:
        return tuple(a >> j & 1 for j in range(self.atoms))

    @staticmethod
    def from_tuple(t) -> int:
        return sum(1 << j for j, v in enumerate(t) if v)

    def __str__(self) -> str:
        return f"2^{self.atoms}"


def _format_ideal(B: FiniteBooleanAlgebra, ideal) -> str:
    return "{" + ", ".join(B.fmt(a) for a in sorted(ideal)) + "}"


# -- Boole_n ----------------------------------------------------------------


def check_ideal_sequence(B: FiniteBooleanAlgebra, n: int, ideals) -> Verdict:
    ideals = tuple(frozenset(J) for J in ideals)
    if n < 2:
        return Verdict(False, "boole-n", ("n", n))
    if len(ideals) != n - 1:
        return Verdict(False, "boole-n", ("length", len(ideals)))
    for i, J in enumerate(ideals, 1):
        if not B.is_ideal(J):
            return Verdict(False, "boole-n", ("ideal", i))
    for i in range(1, n):
        if ideals[i - 1] != ideals[n - i - 1]:
            return Verdict(False, "boole-n", ("i", i))
    for i in range(2, n):
        for h in range(1, i):
            extra = (ideals[h - 1] & ideals[i - h - 1]) - ideals[i - 1]
            if extra:
                return Verdict(False, "boole-n", ("ii", i, h, min(extra)))
    return Verdict(True, "boole-n")


@dataclass(frozen=True)
class BooleNObject:
    algebra: FiniteBooleanAlgebra
    n: int
    ideals: tuple

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(frozenset(J) for J in self.ideals))
        v = check_ideal_sequence(self.algebra, self.n, self.ideals)
        if not v:
            raise InvalidStructureError(f"not a Boole_n object: {v.witness}")

    @classmethod
    def from_generators(cls, B: FiniteBooleanAlgebra, n: int, gens) -> BooleNObject:
        return cls(B, n, tuple(B.down(g) for g in gens))

    @cached_property
    def generators(self) -> tuple:
        return tuple(self.algebra.generator(J) for J in self.ideals)

    def format(self) -> str:
        return "; ".join(f"J{i}={_format_ideal(self.algebra, J)}" for i, J in enumerate(self.ideals, 1))


def enumerate_boole_n(k: int, n: int) -> list[BooleNObject]:
    """Every Boole_n object on 2^k, via generators with a_i = a_{n-i} and a_h ∧ a_{i-h} ≤ a_i."""
    B = FiniteBooleanAlgebra(k)
    free = n // 2
    out = []
    for head in product(B.elements, repeat=free):
        gens = [0] * (n - 1)
        for i in range(1, free + 1):
            gens[i - 1] = gens[n - i - 1] = head[i - 1]
        ok = all(B.leq(gens[h - 1] & gens[i - h - 1], gens[i - 1])
                 for i in range(2, n) for h in range(1, i))
        if ok:
            out.append(BooleNObject.from_generators(B, n, gens))
    return out


# -- BR_n -------------------------------------------------------------------


def join_composite(a: tuple, b: tuple) -> tuple:
    """c_i = a_i ∨ b_i ∨ ⋁_{h+k=i-1} (a_h ∧ b_k)."""
    n = len(a)
    out = []
    for i in range(n):
        c = a[i] | b[i]
        for h in range(i):
            c |= a[h] & b[i - 1 - h]
        out.append(c)
    return tuple(out)


def _monotone(t: tuple) -> bool:
    return all(t[i] & ~t[i - 1] == 0 for i in range(1, len(t)))


def check_brn(B: FiniteBooleanAlgebra, n: int, relation) -> Verdict:
    R = frozenset(relation)
    for t in sorted(R):
        if len(t) != n or not all(0 <= x <= B.top for x in t):
            return Verdict(False, "br-n", ("shape", t))
        if not _monotone(t):
            return Verdict(False, "br-n", ("monotone", t))
    for t in sorted(R):
        rev = tuple(B.neg(x) for x in reversed(t))
        if rev not in R:
            return Verdict(False, "br-n", ("star-reversal", t))
    for a in B.elements:
        if (a,) * n not in R:
            return Verdict(False, "br-n", ("diagonal", a))
    ordered = sorted(R)
    for x in ordered:
        for y in ordered:
            c = join_composite(x, y)
            if not _monotone(c):
                raise ConsistencyError(f"join composite of monotone tuples is not monotone: {x}, {y}")
            if c not in R:
                return Verdict(False, "br-n", ("join-closure", x, y))
    return Verdict(True, "br-n")


@dataclass(frozen=True)
class BRnObject:
    algebra: FiniteBooleanAlgebra
    n: int
    relation: frozenset = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "relation", frozenset(tuple(t) for t in self.relation))
        v = check_brn(self.algebra, self.n, self.relation)
        if not v:
            raise InvalidStructureError(f"not a BR_n object: {v.witness}")

    def format_tuple(self, t) -> str:
        return "(" + ", ".join(self.algebra.fmt(x) for x in t) + ")"


def ideals_from_relation(R: BRnObject) -> BooleNObject:
    """J_i(R) = {a_{i-1} ∧ a_i* : a ∈ R}."""
    B = R.algebra
    ideals = [frozenset(t[i - 1] & B.neg(t[i]) for t in R.relation) for i in range(1, R.n)]
    return BooleNObject(B, R.n, tuple(ideals))


def monotone_tuples(B: FiniteBooleanAlgebra, n: int, steps=None):
    """Tuples a_0 ≥ ... ≥ a_{n-1}; with ``steps`` each a_{i-1} ∧ a_i* must lie below steps[i-1]."""

    def extend(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        last = prefix[-1]
        room = last if steps is None else last & steps[len(prefix) - 1]
        sub = room
        while True:
            yield from extend(prefix + [last ^ sub])
            if sub == 0:
                break
            sub = (sub - 1) & room

    for a0 in B.elements:
        yield from extend([a0])


def relation_from_ideals(Bn: BooleNObject) -> BRnObject:
    """R_J: monotone tuples whose consecutive differences lie in the matching ideals."""
    rel = frozenset(monotone_tuples(Bn.algebra, Bn.n, Bn.generators))
    return BRnObject(Bn.algebra, Bn.n, rel)


def roundtrip_J(Bn: BooleNObject) -> Verdict:
    """J_i(R_J) = J_i, plus the (1,…,1,a*,…,a*) witness for every a ∈ J_i."""
    B = Bn.algebra
    R = relation_from_ideals(Bn)
    back = ideals_from_relation(R)
    for i, (J, K) in enumerate(zip(Bn.ideals, back.ideals), 1):
        diff = J ^ K
        if diff:
            return Verdict(False, "roundtrip-J", (i, B.fmt(min(diff))))
        for a in sorted(J):
            w = (B.top,) * i + (B.neg(a),) * (Bn.n - i)
            if w not in R.relation:
                return Verdict(False, "roundtrip-J", ("witness", i, B.fmt(a)))
    return Verdict(True, "roundtrip-J", back.format(), {"relation_size": len(R.relation)})


def roundtrip_R(R: BRnObject) -> Verdict:
    """R_{J(R)} = R."""
    again = relation_from_ideals(ideals_from_relation(R)).relation
    diff = again ^ R.relation
    if diff:
        return Verdict(False, "roundtrip-R", R.format_tuple(min(diff)))
    return Verdict(True, "roundtrip-R", len(R.relation))


# -- morphisms --------------------------------------------------------------


@dataclass(frozen=True)
class BooleanHom:
    domain: FiniteBooleanAlgebra
    codomain: FiniteBooleanAlgebra
    images: tuple

    def __call__(self, a: int) -> int:
        return self.images[a]

    def verify(self) -> Verdict:
        A, B = self.domain, self.codomain
        f = self.images
        if len(f) != len(A) or not all(0 <= y <= B.top for y in f):
            return Verdict(False, "boolean-hom", "shape")
        if f[0] != 0:
            return Verdict(False, "boolean-hom", ("zero",))
        for a in A.elements:
            if f[A.neg(a)] != B.neg(f[a]):
                return Verdict(False, "boolean-hom", ("neg", a))
            for b in A.elements:
                if f[a | b] != f[a] | f[b]:
                    return Verdict(False, "boolean-hom", ("join", a, b))
        return Verdict(True, "boolean-hom")

    @classmethod
    def identity(cls, B: FiniteBooleanAlgebra) -> BooleanHom:
        return cls(B, B, tuple(B.elements))

    @classmethod
    def from_point_map(cls, A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra, phi) -> BooleanHom:
        """The hom dual to an atom map phi : atoms(B) → atoms(A): f(a) = {j : phi(j) ∈ a}."""
        images = tuple(sum(1 << j for j in range(B.atoms) if a >> phi[j] & 1) for a in A.elements)
        return cls(A, B, images)

    def as_mv(self) -> MvHomomorphism:
        A, B = self.domain, self.codomain
        return MvHomomorphism(A.as_mv(), B.as_mv(),
                              {A.to_tuple(a): B.to_tuple(self.images[a]) for a in A.elements})


def boolean_homs(A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra) -> list[BooleanHom]:
    """All Boolean homomorphisms A → B (one per atom map atoms(B) → atoms(A))."""
    return [BooleanHom.from_point_map(A, B, phi) for phi in product(range(A.atoms), repeat=B.atoms)]


def _require_hom(f: BooleanHom) -> None:
    v = f.verify()
    if not v:
        raise InvalidStructureError(f"not a Boolean homomorphism: {v.witness}")


def check_morphism_boole_n(f: BooleanHom, Bn: BooleNObject, Bm: BooleNObject) -> Verdict:
    """f[J_i] ⊆ J'_i for all i."""
    _require_hom(f)
    if Bn.n != Bm.n:
        return Verdict(False, "boole-n-morphism", ("n", Bn.n, Bm.n))
    for i, (J, K) in enumerate(zip(Bn.ideals, Bm.ideals), 1):
        for a in sorted(J):
            if f(a) not in K:
                return Verdict(False, "boole-n-morphism", (i, Bn.algebra.fmt(a)))
    return Verdict(True, "boole-n-morphism")


def check_morphism_brn(f: BooleanHom, R: BRnObject, S: BRnObject) -> Verdict:
    """(a_0, …, a_{n-1}) ∈ R implies (f(a_0), …, f(a_{n-1})) ∈ R'."""
    _require_hom(f)
    if R.n != S.n:
        return Verdict(False, "br-n-morphism", ("n", R.n, S.n))
    for t in sorted(R.relation):
        if tuple(f(x) for x in t) not in S.relation:
            return Verdict(False, "br-n-morphism", R.format_tuple(t))
    return Verdict(True, "br-n-morphism")


# -- Stone_n ----------------------------------------------------------------


@dataclass(frozen=True)
class StoneNObject:
    universe: tuple
    n: int
    opens: tuple

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "opens", tuple(frozenset(o) for o in self.opens))
        pts = set(self.universe)
        if self.n < 2 or len(self.opens) != self.n - 1:
            raise InvalidStructureError("need n >= 2 and n-1 open sets")
        for o in self.opens:
            if not o <= pts:
                raise InvalidStructureError(f"open set {sorted(o)} leaves the space")
        n = self.n
        for i in range(1, n):
            if self.opens[i - 1] != self.opens[n - i - 1]:
                raise InvalidStructureError(f"condition (i) fails at {i}")
        for i in range(2, n):
            for h in range(1, i):
                if not self.opens[h - 1] & self.opens[i - h - 1] <= self.opens[i - 1]:
                    raise InvalidStructureError(f"condition (ii) fails at i={i}, h={h}")

    @cached_property
    def topology(self) -> MvTopology:
        """Finite Stone spaces are discrete."""
        return discrete_crisp(self.universe, Chain(2))

    def format(self) -> str:
        def one(o):
            return "{" + ", ".join(x for x in self.universe if x in o) + "}"

        return "; ".join(f"o{i}={one(o)}" for i, o in enumerate(self.opens, 1))


def check_morphism_stone_n(g: PointMap, S: StoneNObject, T: StoneNObject) -> Verdict:
    """g continuous and g⁻¹[o'_i] ⊆ o_i for all i."""
    if not check_continuous(g, S.topology, T.topology):
        raise InvalidStructureError("map is not continuous")
    if S.n != T.n:
        return Verdict(False, "stone-n-morphism", ("n", S.n, T.n))
    for i, (o, p) in enumerate(zip(S.opens, T.opens), 1):
        pre = {x for x, y in zip(g.source, g.images) if y in p}
        if not pre <= o:
            return Verdict(False, "stone-n-morphism", (i, min(pre - o)))
    return Verdict(True, "stone-n-morphism")


# -- the ideal/open correspondence -------------------------------------------


def boolean_dual(B: FiniteBooleanAlgebra) -> DualSpace:
    return max_space(B.as_mv())


def hat_set(D: DualSpace, B: FiniteBooleanAlgebra, a: int) -> frozenset:
    table = D.hat(B.to_tuple(a))
    return frozenset(p for p, v in zip(D.points, table) if v)


def ideal_to_open(B: FiniteBooleanAlgebra, ideal) -> frozenset:
    """o_I = ⋁_{a ∈ I} â, as a set of points of Max B."""
    D = boolean_dual(B)
    out = frozenset()
    for a in ideal:
        out |= hat_set(D, B, a)
    return out


def open_to_ideal(B: FiniteBooleanAlgebra, o) -> frozenset:
    """I_o = {a : â ≤ o}."""
    D = boolean_dual(B)
    o = frozenset(o)
    return frozenset(a for a in B.elements if hat_set(D, B, a) <= o)


def atom_point(B: FiniteBooleanAlgebra, j: int) -> str:
    """The point of Max B where atom j evaluates to 1."""
    D = boolean_dual(B)
    (p,) = hat_set(D, B, 1 << j)
    return p


def check_ideal_open_correspondence(B: FiniteBooleanAlgebra) -> Verdict:
    """o_{I_o} = o, I_{o_I} = I, and both maps monotone, over all ideals and opens."""
    D = boolean_dual(B)
    ideals = [B.down(a) for a in B.elements]
    if sorted(ideals, key=sorted) != sorted((J for J in _brute_ideals(B)), key=sorted):
        raise ConsistencyError("principal ideals differ from brute-force ideals")
    pts = D.points
    opens = [frozenset(p for j, p in enumerate(pts) if mask >> j & 1) for mask in range(1 << len(pts))]
    for o in opens:
        if ideal_to_open(B, open_to_ideal(B, o)) != o:
            return Verdict(False, "ideal-open", ("o_I_o", sorted(o)))
    for J in ideals:
        if open_to_ideal(B, ideal_to_open(B, J)) != J:
            return Verdict(False, "ideal-open", ("I_o_I", _format_ideal(B, J)))
    for o in opens:
        for p in opens:
            if o <= p and not open_to_ideal(B, o) <= open_to_ideal(B, p):
                return Verdict(False, "ideal-open", ("monotone-open", sorted(o), sorted(p)))
    for J in ideals:
        for K in ideals:
            if J <= K and not ideal_to_open(B, J) <= ideal_to_open(B, K):
                return Verdict(False, "ideal-open", ("monotone-ideal", _format_ideal(B, J)))
    return Verdict(True, "ideal-open", len(ideals))


def _brute_ideals(B: FiniteBooleanAlgebra):
    els = list(B.elements)
    for mask in range(1 << len(els)):
        S = frozenset(e for e in els if mask >> e & 1)
        if B.is_ideal(S):
            yield S


# -- the functors -----------------------------------------------------------


def max_n(Bn: BooleNObject) -> StoneNObject:
    B = Bn.algebra
    D = boolean_dual(B)
    return StoneNObject(D.points, Bn.n, tuple(ideal_to_open(B, J) for J in Bn.ideals))


def clop_n(Sn: StoneNObject) -> BooleNObject:
    """Clop X = 2^X with bit j for the j-th point; I_{o_i} = {a : a ⊆ o_i}."""
    B = FiniteBooleanAlgebra(len(Sn.universe))
    masks = [sum(1 << j for j, x in enumerate(Sn.universe) if x in o) for o in Sn.opens]
    return BooleNObject(B, Sn.n, tuple(B.down(m) for m in masks))


def roundtrip_boole_n(Bn: BooleNObject) -> Verdict:
    """Clop_n Max_n Bn ≅ Bn via a ↦ â, certified as a Boolean iso carrying J_i onto J'_i."""
    B = Bn.algebra
    D = boolean_dual(B)
    back = clop_n(max_n(Bn))
    pos = {p: j for j, p in enumerate(D.points)}
    images = tuple(sum(1 << pos[p] for p in hat_set(D, B, a)) for a in B.elements)
    f = BooleanHom(B, back.algebra, images)
    if not f.verify() or len(set(images)) != len(B) or len(back.algebra) != len(B):
        return Verdict(False, "boole-n-roundtrip", "hat map is not an isomorphism")
    for i, (J, K) in enumerate(zip(Bn.ideals, back.ideals), 1):
        if frozenset(f(a) for a in J) != K:
            return Verdict(False, "boole-n-roundtrip", ("ideal", i))
    table = {B.fmt(a): back.algebra.fmt(f(a)) for a in B.elements}
    return Verdict(True, "boole-n-roundtrip", table)


def roundtrip_stone_n(Sn: StoneNObject) -> Verdict:
    """Max_n Clop_n Sn ≅ Sn via the certified point-to-ideal homeomorphism."""
    again = max_n(clop_n(Sn))
    iso = unit_iso_space(Sn.topology)
    g = iso.map
    if g.target != again.universe:
        raise ConsistencyError("dual points differ between the two constructions")
    for i, (o, p) in enumerate(zip(Sn.opens, again.opens), 1):
        if frozenset(g(x) for x in o) != p:
            return Verdict(False, "stone-n-roundtrip", ("open", i))
    return Verdict(True, "stone-n-roundtrip", dict(zip(g.source, g.images)))


def max_n_morphism(f: BooleanHom, Bn: BooleNObject, Bm: BooleNObject) -> PointMap:
    """Max_n f : Max B' → Max B; a Stone_n morphism whenever f is a Boole_n morphism."""
    g = dualize_hom(f.as_mv())
    if check_morphism_boole_n(f, Bn, Bm):
        v = check_morphism_stone_n(g, max_n(Bm), max_n(Bn))
        if not v:
            raise ConsistencyError(f"dual of a Boole_n morphism is not a Stone_n morphism: {v.witness}")
    return g

