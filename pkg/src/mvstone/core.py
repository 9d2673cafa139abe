"""Exact arithmetic on finite Łukasiewicz chains, chain products and fuzzy subsets.

Every value is stored as an integer numerator ``k`` over a chain of order ``n``
(the value ``k/(n-1)``), so all MV operations are integer operations. Nothing
here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Any, Callable, Hashable, Iterable, Sequence, Union

from .errors import ChainMismatchError, InvalidStructureError, UniverseMismatchError

Point = Hashable
MvElement = tuple  # tuple of numerators, one per coordinate of a ProductSignature


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: a boolean plus whatever witnesses the check produced."""

    ok: bool
    check: str
    witness: Any = None
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok


# -- chains -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Chain:
    """The Łukasiewicz chain Łₙ = {0, 1/(n-1), ..., 1} with ``order`` = n elements."""

    order: int

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 2:
            raise InvalidStructureError(f"chain order must be an integer >= 2, got {self.order!r}")

    @property
    def top(self) -> int:
        return self.order - 1

    def values(self) -> list[ChainValue]:
        return [ChainValue(k, self) for k in range(self.order)]

    def value(self, q) -> ChainValue:
        """Return the point of the chain equal to the rational ``q``."""
        q = Fraction(q)
        k = q * self.top
        if k.denominator != 1 or not 0 <= k <= self.top:
            raise InvalidStructureError(f"{q} is not on the grid of L{self.order}")
        return ChainValue(int(k), self)

    def __str__(self) -> str:
        return f"L{self.order}"


@dataclass(frozen=True)
class ChainValue:
    numerator: int
    chain: Chain

    def __post_init__(self):
        if not 0 <= self.numerator <= self.chain.top:
            raise InvalidStructureError(f"numerator {self.numerator} outside {self.chain}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.chain.top)

    def _check(self, other: ChainValue) -> None:
        if not isinstance(other, ChainValue):
            raise TypeError(f"cannot compare ChainValue with {type(other).__name__}")
        if other.chain != self.chain:
            raise ChainMismatchError(f"{self.chain} vs {other.chain}")

    def __lt__(self, other):
        self._check(other)
        return self.numerator < other.numerator

    def __le__(self, other):
        self._check(other)
        return self.numerator <= other.numerator

    def __gt__(self, other):
        self._check(other)
        return self.numerator > other.numerator

    def __ge__(self, other):
        self._check(other)
        return self.numerator >= other.numerator

    def __str__(self) -> str:
        return format_value(self.numerator, self.chain.order)


def format_value(k: int, order: int) -> str:
    return str(Fraction(k, order - 1))


def embed(x: ChainValue, order: int) -> ChainValue:
    """Embed ``x`` into the chain of the given order, which must refine x's grid."""
    if (order - 1) % x.chain.top:
        raise ChainMismatchError(f"{x.chain} does not embed into L{order}")
    return ChainValue(x.numerator * ((order - 1) // x.chain.top), Chain(order))


def common_order(*orders: int) -> int:
    """Order of the coarsest chain into which all the given chains embed."""
    return lcm(*(n - 1 for n in orders)) + 1


def regrid(values: Sequence[int], src: int, dst: int) -> tuple:
    """Re-express numerators over chain ``src`` as numerators over chain ``dst``."""
    if (dst - 1) % (src - 1):
        raise ChainMismatchError(f"L{src} does not embed into L{dst}")
    f = (dst - 1) // (src - 1)
    return tuple(v * f for v in values)


# -- numerator-level operations (t is the top numerator) --------------------

def _oplus(a, b, t):
    return min(t, a + b)


def _odot(a, b, t):
    return max(0, a + b - t)


def _ominus(a, b, t):
    return max(0, a - b)


def _join(a, b, t):
    return a if a >= b else b


def _meet(a, b, t):
    return a if a <= b else b


def _distance(a, b, t):
    return abs(a - b)


# -- product signatures ----------------------------------------------------


@dataclass(frozen=True)
class ProductSignature:
    """A finite product of chains Ł_{n1} × ... × Ł_{nk}; elements are numerator tuples."""

    orders: tuple

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if not self.orders:
            raise InvalidStructureError("a product signature needs at least one factor")
        for n in self.orders:
            Chain(n)

    @classmethod
    def power(cls, order: int, k: int) -> ProductSignature:
        return cls((order,) * k)

    def __len__(self) -> int:
        return len(self.orders)

    @property
    def tops(self) -> tuple:
        return tuple(n - 1 for n in self.orders)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.orders)

    @property
    def one(self) -> tuple:
        return self.tops

    @property
    def size(self) -> int:
        return reduce(lambda x, y: x * y, self.orders, 1)

    def contains(self, a) -> bool:
        return len(a) == len(self.orders) and all(0 <= x < n for x, n in zip(a, self.orders))

    def check(self, a) -> tuple:
        a = tuple(a)
        if not self.contains(a):
            raise ChainMismatchError(f"{a} is not an element of {self}")
        return a

    def element(self, *values) -> tuple:
        """Build an element from rationals, one per coordinate."""
        if len(values) != len(self.orders):
            raise ChainMismatchError(f"expected {len(self.orders)} coordinates, got {len(values)}")
        return tuple(Chain(n).value(v).numerator for n, v in zip(self.orders, values))

    def coords(self, a) -> list[ChainValue]:
        return [ChainValue(x, Chain(n)) for x, n in zip(a, self.orders)]

    def oplus(self, a, b):
        return tuple([min(t, x + y) for t, x, y in zip(self.tops, a, b)])

    def odot(self, a, b):
        return tuple([max(0, x + y - t) for t, x, y in zip(self.tops, a, b)])

    def neg(self, a):
        return tuple([t - x for t, x in zip(self.tops, a)])

    def ominus(self, a, b):
        return tuple([max(0, x - y) for x, y in zip(a, b)])

    def join(self, a, b):
        return tuple([x if x >= y else y for x, y in zip(a, b)])

    def meet(self, a, b):
        return tuple([x if x <= y else y for x, y in zip(a, b)])

    def distance(self, a, b):
        return tuple([abs(x - y) for x, y in zip(a, b)])

    def delta(self, a):
        return tuple([t if x == t else 0 for t, x in zip(self.tops, a)])

    def leq(self, a, b) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def is_boolean(self, a) -> bool:
        return all(x == 0 or x == t for x, t in zip(a, self.tops))

    def multiple(self, n: int, a):
        return tuple([min(t, n * x) for t, x in zip(self.tops, a)])

    def power_of(self, a, n: int):
        return tuple([max(0, n * x - (n - 1) * t) for t, x in zip(self.tops, a)])

    def all_elements(self) -> list:
        from itertools import product

        return [tuple(p) for p in product(*(range(n) for n in self.orders))]

    def format(self, a) -> str:
        parts = [format_value(x, n) for x, n in zip(a, self.orders)]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"

    def __str__(self) -> str:
        return "×".join(f"L{n}" for n in self.orders)


# -- fuzzy subsets ----------------------------------------------------------


@dataclass(frozen=True)
class FuzzySubset:
    """A membership table X → Łₙ, stored as numerators in the order of ``universe``."""

    universe: tuple
    chain: Chain
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "values", tuple(self.values))
        if not self.universe:
            raise InvalidStructureError("empty universe")
        if len(set(self.universe)) != len(self.universe):
            raise InvalidStructureError("universe has repeated points")
        if len(self.values) != len(self.universe):
            raise InvalidStructureError("fuzzy subset must be total on its universe")
        if any(not 0 <= v <= self.chain.top for v in self.values):
            raise InvalidStructureError(f"value off the grid of {self.chain}")

    @classmethod
    def constant(cls, universe, chain: Chain, k: int) -> FuzzySubset:
        return cls(tuple(universe), chain, (k,) * len(tuple(universe)))

    @classmethod
    def from_mapping(cls, universe, chain: Chain, mapping) -> FuzzySubset:
        """Build from ``{point: rational}``; unlisted points get 0."""
        return cls(tuple(universe), chain,
                   tuple(chain.value(mapping.get(p, 0)).numerator for p in universe))

    def __call__(self, point) -> ChainValue:
        return ChainValue(self.values[self.universe.index(point)], self.chain)

    @property
    def is_crisp(self) -> bool:
        return all(v in (0, self.chain.top) for v in self.values)

    def leq(self, other: FuzzySubset) -> bool:
        _same_space(self, other)
        return all(x <= y for x, y in zip(self.values, other.values))

    def __str__(self) -> str:
        return "(" + ", ".join(format_value(v, self.chain.order) for v in self.values) + ")"


def _same_space(a: FuzzySubset, b: FuzzySubset) -> None:
    if a.universe != b.universe:
        raise UniverseMismatchError("fuzzy subsets over different universes")
    if a.chain != b.chain:
        raise ChainMismatchError(f"{a.chain} vs {b.chain}")


Operand = Union[ChainValue, FuzzySubset]


def _lift2(fn: Callable[[int, int, int], int], x: Operand, y: Operand) -> Operand:
    if isinstance(x, ChainValue) and isinstance(y, ChainValue):
        if x.chain != y.chain:
            raise ChainMismatchError(f"{x.chain} vs {y.chain}")
        return ChainValue(fn(x.numerator, y.numerator, x.chain.top), x.chain)
    if isinstance(x, FuzzySubset) and isinstance(y, FuzzySubset):
        _same_space(x, y)
        t = x.chain.top
        return FuzzySubset(x.universe, x.chain, tuple(fn(a, b, t) for a, b in zip(x.values, y.values)))
    raise TypeError(f"cannot combine {type(x).__name__} with {type(y).__name__}")


def _lift1(fn: Callable[[int, int], int], x: Operand) -> Operand:
    if isinstance(x, ChainValue):
        return ChainValue(fn(x.numerator, x.chain.top), x.chain)
    if isinstance(x, FuzzySubset):
        t = x.chain.top
        return FuzzySubset(x.universe, x.chain, tuple(fn(a, t) for a in x.values))
    raise TypeError(f"not a chain value or fuzzy subset: {x!r}")


def oplus(x: Operand, y: Operand) -> Operand:
    """Łukasiewicz strong disjunction min(1, x + y)."""
    return _lift2(_oplus, x, y)


def odot(x: Operand, y: Operand) -> Operand:
    """Łukasiewicz t-norm max(0, x + y - 1)."""
    return _lift2(_odot, x, y)


def ominus(x: Operand, y: Operand) -> Operand:
    return _lift2(_ominus, x, y)


def join(x: Operand, y: Operand) -> Operand:
    return _lift2(_join, x, y)


def meet(x: Operand, y: Operand) -> Operand:
    return _lift2(_meet, x, y)


def distance(x: Operand, y: Operand) -> Operand:
    """Chang distance (x ⊖ y) ⊕ (y ⊖ x)."""
    return _lift2(_distance, x, y)


def neg(x: Operand) -> Operand:
    return _lift1(lambda a, t: t - a, x)


def baaz_delta(x: Operand) -> Operand:
    """1 on the value 1, 0 everywhere else."""
    return _lift1(lambda a, t: t if a == t else 0, x)


def nat_multiple(n: int, x: Operand) -> Operand:
    """n·x = x ⊕ ... ⊕ x (n summands)."""
    if n < 1:
        raise ValueError("multiple needs n >= 1")
    return _lift1(lambda a, t: min(t, n * a), x)


def nat_power(x: Operand, n: int) -> Operand:
    """xⁿ = x ⊙ ... ⊙ x (n factors)."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    return _lift1(lambda a, t: max(0, n * a - (n - 1) * t), x)


def family_join(family: Iterable[FuzzySubset], universe=None, chain: Chain | None = None) -> FuzzySubset:
    """Pointwise sup of a finite family; the empty family joins to the constant 0.

    ``universe`` and ``chain`` are required only when the family may be empty.
    """
    return _fold(family, _join, 0, universe, chain)


def family_meet(family: Iterable[FuzzySubset], universe=None, chain: Chain | None = None) -> FuzzySubset:
    return _fold(family, _meet, None, universe, chain)


def _fold(family, fn, unit, universe, chain):
    family = list(family)
    if not family:
        if universe is None or chain is None:
            raise ValueError("empty family needs an explicit universe and chain")
        return FuzzySubset.constant(universe, chain, chain.top if unit is None else unit)
    return reduce(lambda a, b: _lift2(fn, a, b), family)


# -- point maps -------------------------------------------------------------


@dataclass(frozen=True)
class PointMap:
    """A total map between finite point sets, stored aligned with ``source``."""

    source: tuple
    target: tuple
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.source):
            raise InvalidStructureError("point map must be total")
        tset = set(self.target)
        for y in self.images:
            if y not in tset:
                raise InvalidStructureError(f"image {y!r} not in target")

    @classmethod
    def from_dict(cls, source, target, assignment: dict) -> PointMap:
        source = tuple(source)
        missing = [x for x in source if x not in assignment]
        if missing:
            raise InvalidStructureError(f"point map undefined on {missing}")
        return cls(source, tuple(target), tuple(assignment[x] for x in source))

    @classmethod
    def identity(cls, universe) -> PointMap:
        universe = tuple(universe)
        return cls(universe, universe, universe)

    def __call__(self, x):
        return self.images[self.source.index(x)]

    def index_map(self) -> tuple:
        """Target index of each source point."""
        pos = {y: i for i, y in enumerate(self.target)}
        return tuple(pos[y] for y in self.images)

    def compose(self, inner: PointMap) -> PointMap:
        """self ∘ inner."""
        if inner.target != self.source:
            raise UniverseMismatchError("maps are not composable")
        return PointMap(inner.source, self.target, tuple(self(y) for y in inner.images))

    @property
    def is_bijective(self) -> bool:
        return len(set(self.images)) == len(self.images) == len(self.target)

    def inverse(self) -> PointMap:
        if not self.is_bijective:
            raise InvalidStructureError("map is not bijective")
        back = dict(zip(self.images, self.source))
        return PointMap(self.target, self.source, tuple(back[y] for y in self.target))


def preimage_table(f: PointMap, values: Sequence[int]) -> tuple:
    """f⇐ on raw numerator tables: (α ∘ f)."""
    return tuple(values[i] for i in f.index_map())


def image_table(f: PointMap, values: Sequence[int]) -> tuple:
    """f→ on raw numerator tables: sup over each fiber, 0 on empty fibers."""
    out = [0] * len(f.target)
    for v, j in zip(values, f.index_map()):
        if v > out[j]:
            out[j] = v
    return tuple(out)


def preimage_map(f: PointMap, alpha: FuzzySubset) -> FuzzySubset:
    if alpha.universe != f.target:
        raise UniverseMismatchError("fuzzy subset is not over the map's target")
    return FuzzySubset(f.source, alpha.chain, preimage_table(f, alpha.values))


def image_map(f: PointMap, alpha: FuzzySubset) -> FuzzySubset:
    if alpha.universe != f.source:
        raise UniverseMismatchError("fuzzy subset is not over the map's source")
    return FuzzySubset(f.target, alpha.chain, image_table(f, alpha.values))
