"""Supernatural numbers with finite support, and the multiset invariant of finite algebras."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from sympy import factorint, isprime

from .algebra import FiniteMvAlgebra, chain_quotients

OMEGA = math.inf


def _exp_str(e) -> str:
    return "w" if e == OMEGA else str(e)


@dataclass(frozen=True)
class Supernatural:
    """prime ↦ exponent, exponent a positive int or ``OMEGA``; absent primes have exponent 0."""

    exponents: tuple

    def __init__(self, exponents=None):
        items = dict(exponents or {})
        clean = []
        for p, e in sorted(items.items()):
            if not isinstance(p, int) or not isprime(p):
                raise ValueError(f"{p!r} is not a prime")
            if e != OMEGA and (not isinstance(e, int) or e < 0):
                raise ValueError(f"bad exponent {e!r} for {p}")
            if e:
                clean.append((p, e))
        object.__setattr__(self, "exponents", tuple(clean))

    def __getitem__(self, p: int):
        return dict(self.exponents).get(p, 0)

    @property
    def support(self) -> tuple:
        return tuple(p for p, _ in self.exponents)

    @property
    def is_natural(self) -> bool:
        return all(e != OMEGA for _, e in self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(str(p) if e == 1 else f"{p}^{_exp_str(e)}" for p, e in self.exponents)

    @classmethod
    def parse(cls, text: str) -> Supernatural:
        """``2^w*3*5^2``; ``1`` is the empty product."""
        text = text.replace(" ", "")
        if text == "1":
            return cls()
        exps: dict = {}
        for part in text.split("*"):
            base, _, exp = part.partition("^")
            p = int(base)
            e = 1 if not exp else (OMEGA if exp in ("w", "ω") else int(exp))
            if p in exps:
                raise ValueError(f"prime {p} repeated")
            exps[p] = e
        return cls(exps)


def from_natural(n: int) -> Supernatural:
    if n < 1:
        raise ValueError("supernatural of a natural needs n >= 1")
    return Supernatural(factorint(n))


def _primes(*xs: Supernatural):
    return sorted(set().union(*(x.support for x in xs)))


def sn_leq(x: Supernatural, y: Supernatural) -> bool:
    return all(x[p] <= y[p] for p in x.support)


def sn_join(x: Supernatural, y: Supernatural) -> Supernatural:
    return Supernatural({p: max(x[p], y[p]) for p in _primes(x, y)})


def sn_meet(x: Supernatural, y: Supernatural) -> Supernatural:
    return Supernatural({p: min(x[p], y[p]) for p in _primes(x, y)})


def in_basic_open(x: Supernatural, n: int) -> bool:
    """x ∈ U_n, i.e. n < x strictly."""
    m = from_natural(n)
    return sn_leq(m, x) and m != x


def multiset_of(A: FiniteMvAlgebra, bound: int | None = None) -> Counter:
    """{order(A/M) - 1 : M maximal}, with multiplicities."""
    return Counter(q.order - 1 for q in chain_quotients(A, bound))


def format_multiset(ms: Counter) -> str:
    return "{" + ", ".join(f"{k}: {ms[k]}" for k in sorted(ms)) + "}"
